//! Command-line front end and file formats for `motionsph-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::error::CliError;

/// Runs one invocation and returns the process exit code.
///
/// `args` includes the program name. Errors are written to `stderr` as JSON.
pub fn run<I, T>(args: I, env: &HashMap<String, String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError::Usage(e.kind().to_string());
            return report_error(&err, Some(e.to_string()), stderr);
        }
    };
    match dispatch(&cli, env, stdout, stderr) {
        Ok(code) => code,
        Err(e) => report_error(&e, None, stderr),
    }
}

fn dispatch(cli: &Cli, env: &HashMap<String, String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> commands::Outcome {
    let path = config::config_path(cli.config.as_deref(), env);
    let settings = config::resolve(&cli.settings_layer(), env, path.as_deref())?;
    match &cli.command {
        Command::Eval(a) => commands::eval(a, &settings, stdout),
        Command::Classify(a) => commands::classify(a, &settings, stdout),
        Command::Probe(a) => commands::probe(a, &settings, stdout, stderr),
        Command::Verify(a) => commands::verify(a, &settings, stdout),
        Command::Constants(a) => commands::constants(a, &settings, stdout),
    }
}

fn report_error(err: &CliError, detail: Option<String>, stderr: &mut dyn Write) -> i32 {
    let mut v = err.to_json();
    if let Some(d) = detail {
        v["error"]["detail"] = serde_json::Value::String(d.trim_end().to_string());
    }
    let _ = writeln!(stderr, "{v}");
    err.exit_code()
}
