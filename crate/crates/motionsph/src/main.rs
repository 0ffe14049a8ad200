use std::io::Write;

fn main() {
    let env = std::env::vars().filter(|(k, _)| k.starts_with(motionsph::config::ENV_PREFIX)).collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = motionsph::run(std::env::args_os(), &env, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
