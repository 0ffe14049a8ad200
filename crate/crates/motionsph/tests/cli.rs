use std::collections::HashMap;

use motionsph::run;
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Output {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }

    fn error(&self) -> Value {
        serde_json::from_str(self.stderr.trim()).unwrap_or_else(|e| panic!("{e}: {}", self.stderr))
    }
}

fn invoke_env(args: &[&str], env: &HashMap<String, String>) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("motionsph").chain(args.iter().copied());
    let code = run(argv, env, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn invoke(args: &[&str]) -> Output {
    invoke_env(args, &HashMap::new())
}

#[test]
fn real_rank_one_parameter_is_bounded() {
    let o = invoke(&["classify", "--system", "A1", "--xi", "1", "--eta", "0"]);
    assert_eq!(o.code, 0);
    let v = o.json();
    assert_eq!(v["verdict"], "Bounded");
    assert_eq!(v["schema"], "motionsph/1");
    assert_eq!(v["system"], serde_json::json!({ "type": "A", "rank": 1 }));
    assert!(v.get("certificate").is_none());
}

#[test]
fn imaginary_rank_one_parameter_grows_at_the_pairing_rate() {
    let o = invoke(&["classify", "--system", "A1", "--xi", "0", "--eta", "1"]);
    assert_eq!(o.code, 0);
    let v = o.json();
    assert_eq!(v["verdict"], "Unbounded");
    assert_eq!(v["revalidated"], true);
    let cert = &v["certificate"];
    // η₀ normalizes to pairing -1, so ⟨H′, H₀⟩ = probe pairing / ⟨α, α⟩
    let probe: f64 = cert["probe"][0].as_str().unwrap().parse().unwrap();
    assert_eq!(v["rate"], cert["rate"]);
    assert_eq!(cert["rate_f64"].as_f64().unwrap(), probe / 2.0);
    assert_eq!(cert["normalization"]["lambda0"]["eta"][0], "-1");
}

#[test]
fn classify_reports_stratum_with_u_inside_v() {
    let o = invoke(&["classify", "--system", "A3", "--xi", "0,2,1", "--eta", "0,0,-1", "--seed", "4"]);
    assert_eq!(o.code, 0);
    let n = &o.json()["certificate"]["normalization"];
    assert_eq!(n["u"].as_array().unwrap().len(), 2);
    assert_eq!(n["v"].as_array().unwrap().len(), 6);
    assert_eq!(n["coset_reps"].as_array().unwrap().len(), 3);
}

#[test]
fn stabilizer_verification_passes_on_a3() {
    let o = invoke(&["verify", "--system", "A3", "--lemma2"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let v = o.json();
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "lemma2");
}

#[test]
fn full_verification_passes_for_b2() {
    let o = invoke(&["verify", "--system", "B2"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let names: Vec<String> =
        o.json()["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["lemma2", "c_constants", "inequality", "oracle"]);
}

#[test]
fn constants_compare_with_the_closed_forms() {
    let o = invoke(&["constants", "--system", "A3", "--stratum", "1,3"]);
    assert_eq!(o.code, 0);
    let v = o.json();
    assert_eq!(v["r"], 2);
    assert_eq!(v["c"], "4");
    assert_eq!(v["formula"]["name"], "r2");
    assert_eq!(v["formula"]["matches"], true);
    assert_eq!(v["c_small_t"]["re"], "4");

    let v = invoke(&["constants", "--system", "G2", "--stratum", "1,2"]).json();
    assert_eq!(v["r"], 6);
    assert!(v["formula"].is_null());
    assert_eq!(v["agree"], true);

    let v = invoke(&["constants", "--system", "A3", "--stratum", "1,2"]).json();
    assert_eq!(v["formula"]["name"], "r3");
    assert_eq!(v["formula"]["matches"], true);
}

#[test]
fn eval_agrees_with_rank_one_sinc() {
    // ⟨α, A_λ⟩ = 2 and ⟨α, H⟩ = 3 give ⟨A_λ, H⟩ = 3
    let o = invoke(&["eval", "--system", "A1", "--xi", "2", "--H", "3"]);
    assert_eq!(o.code, 0);
    let v = o.json();
    let re = v["value"]["re"].as_f64().unwrap();
    assert!((re - 3f64.sin() / 3.0).abs() < 1e-13);
    assert_eq!(v["method"], "regular");

    let o = invoke(&["eval", "--system", "A2", "--xi", "0,1", "--eta", "0,-1", "--H", "1", "2"]);
    assert_eq!(o.json()["method"], "singular");
    let o = invoke(&["eval", "--system", "A2", "--xi", "1,1", "--H", "0,2"]);
    assert_eq!(o.json()["method"], "wall_limit");
}

#[test]
fn ambient_coordinates_are_accepted() {
    let a = invoke(&["eval", "--system", "A1", "--xi", "2", "--H", "3"]).json();
    let b = invoke(&["eval", "--system", "A1", "--ambient", "--xi", "1,-1", "--H", "3/2,-3/2"]).json();
    assert_eq!(a["value"], b["value"]);
    let o = invoke(&["eval", "--system", "A1", "--ambient", "--xi", "1,1", "--H", "1,-1"]);
    assert_eq!(o.code, 2);
}

#[test]
fn probe_csv_round_trips_against_json() {
    let args = ["probe", "--system", "B2", "--eta", "1,-1", "--points", "64"];
    let json = invoke(&args).json();
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let o = invoke(&csv_args);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("t,abs_psi,log_abs_psi\n"));
    let mut reader = csv::Reader::from_reader(o.stdout.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let samples = json["samples"].as_array().unwrap();
    assert_eq!(rows.len(), 64);
    for (row, s) in rows.iter().zip(samples) {
        for (i, key) in ["t", "abs_psi", "log_abs_psi"].iter().enumerate() {
            let x: f64 = row[i].parse().unwrap();
            match s[*key].as_f64() {
                Some(y) => assert_eq!(x, y),
                None => assert_eq!(x, f64::INFINITY, "{key} overflow"),
            }
        }
    }
    let summary = o.error();
    assert_eq!(summary["fitted_rate"], json["fitted_rate"]);
    let (fit, want) = (json["fitted_rate"].as_f64().unwrap(), json["predicted_rate"].as_f64().unwrap());
    assert!((fit - want).abs() < 1e-3 * want);
}

#[test]
fn argument_errors_exit_two_with_json() {
    for args in [
        vec!["eval", "--system", "A5", "--H", "1"],
        vec!["eval", "--system", "A2", "--xi", "1,x", "--H", "1,1"],
        vec!["eval", "--system", "A2", "--xi", "1,2,3", "--H", "1,1"],
        vec!["eval", "--system", "A2"],
        vec!["frobnicate"],
        vec!["constants", "--system", "A3", "--stratum", "4"],
        vec!["classify", "--system", "A1", "--format", "csv"],
        vec!["probe", "--system", "A1", "--eta", "1", "--t-min", "5", "--t-max", "2"],
    ] {
        let o = invoke(&args);
        assert_eq!(o.code, 2, "{args:?}");
        assert!(o.stdout.is_empty());
        let e = o.error();
        assert_eq!(e["schema"], "motionsph/1");
        assert!(e["error"]["message"].is_string(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let o = invoke(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("classify"));
}

#[test]
fn defaults_apply_without_config() {
    let v = invoke(&["probe", "--system", "A1", "--eta", "1"]).json();
    assert_eq!(v["seed"], 0);
    assert_eq!(v["grid"], serde_json::json!({ "t_min": 1.0, "t_max": 200.0, "points": 512 }));
}

#[test]
fn environment_seed_reaches_the_certificate() {
    let env: HashMap<String, String> = [("MOTIONSPH_SEED".to_string(), "17".to_string())].into();
    let o = invoke_env(&["classify", "--system", "B2", "--eta", "1,0"], &env);
    assert_eq!(o.json()["seed"], 17);
}

#[test]
fn flag_beats_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("motionsph.toml");
    std::fs::write(&path, "seed = 5\nprecision = 4\n").unwrap();
    let p = path.to_str().unwrap();
    let v = invoke(&["--config", p, "classify", "--system", "A1", "--eta", "1", "--seed", "9"]).json();
    assert_eq!(v["seed"], 9);
    let v = invoke(&["--config", p, "eval", "--system", "A1", "--xi", "2", "--H", "3"]).json();
    assert_eq!(v["value"]["re"].as_f64().unwrap(), 0.04704);

    let env: HashMap<String, String> = [("MOTIONSPH_CONFIG".to_string(), p.to_string())].into();
    assert_eq!(invoke_env(&["classify", "--system", "A1", "--eta", "1"], &env).json()["seed"], 5);
}

#[test]
fn malformed_config_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "seed = 1\npoints = \"many\"\n").unwrap();
    let o = invoke(&["--config", path.to_str().unwrap(), "classify", "--system", "A1"]);
    assert_eq!(o.code, 2);
    let e = o.error();
    assert_eq!(e["error"]["kind"], "config");
    assert!(e["error"]["location"].as_str().unwrap().ends_with("bad.toml"));
    assert!(e["error"]["message"].as_str().unwrap().contains("line 2"), "{e}");

    let env: HashMap<String, String> = [("MOTIONSPH_FORMAT".to_string(), "xml".to_string())].into();
    let o = invoke_env(&["classify", "--system", "A1"], &env);
    assert_eq!(o.code, 2);
    assert_eq!(o.error()["error"]["location"], "MOTIONSPH_FORMAT");
}

#[test]
fn binary_output_is_byte_identical_across_runs() {
    let exe = env!("CARGO_BIN_EXE_motionsph");
    let args = ["classify", "--system", "G2", "--xi", "1,0", "--eta", "0,-2", "--seed", "3"];
    let runs: Vec<std::process::Output> =
        (0..2).map(|_| std::process::Command::new(exe).args(args).env_clear().output().unwrap()).collect();
    assert!(runs[0].status.success());
    assert_eq!(runs[0].stdout, runs[1].stdout);
    assert_eq!(invoke(&args).stdout.as_bytes(), runs[0].stdout.as_slice());
}
