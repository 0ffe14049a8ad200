use std::io::Write;

use motionsph_core::expasym::log_grid;
use motionsph_core::oracle::{divided_difference_limit, psi_montecarlo_su2, psi_rank1, Steps};
use motionsph_core::rational::{parse_rat, rat, ratio, rat_to_f64, to_f64_vec, GaussRat, Rat};
use motionsph_core::spherical::EvalMethod;
use motionsph_core::sympoly::{c_constant, c_constant_symbolic, c_formula_r2, c_formula_r3, gram_of};
use motionsph_core::weyl::{all_faces, decompose_root, face_point, verify_lemma2};
use motionsph_core::{CartanType, MotionGroup, RootSystem, SpectralParameter};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cli::{ConstantsArgs, EvalArgs, LambdaArgs, ProbeArgs, VerifyArgs};
use crate::config::{Format, Settings};
use crate::error::CliError;
use crate::report::{self, SCHEMA};

/// Result of a command: exit code (0 or 1) after output has been written.
pub type Outcome = Result<i32, CliError>;

pub fn group(system: &str) -> Result<MotionGroup, CliError> {
    Ok(MotionGroup::new(system.parse::<CartanType>()?))
}

fn rationals(raw: &[String]) -> Result<Vec<Rat>, CliError> {
    raw.iter()
        .flat_map(|s| s.split_whitespace())
        .map(|s| parse_rat(s).map_err(CliError::from))
        .collect()
}

/// A vector given in pairing (or ambient) coordinates; empty input means zero.
fn vector(rs: &RootSystem, raw: &[String], ambient: bool) -> Result<Vec<Rat>, CliError> {
    let vals = rationals(raw)?;
    if ambient {
        if vals.is_empty() {
            return Ok(vec![rat(0); rs.dim()]);
        }
        rs.check_vector(&vals)?;
        Ok(vals)
    } else if vals.is_empty() {
        Ok(vec![rat(0); rs.dim()])
    } else {
        Ok(rs.from_pairings(&vals)?)
    }
}

fn lambda(g: &MotionGroup, args: &LambdaArgs) -> Result<SpectralParameter, CliError> {
    let xi = vector(&g.rs, &args.xi, args.ambient)?;
    let eta = vector(&g.rs, &args.eta, args.ambient)?;
    Ok(SpectralParameter::new(xi, eta))
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn json_only(settings: &Settings, command: &str) -> Result<(), CliError> {
    match settings.format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!("`{command}` has no CSV form; use --format json"))),
    }
}

fn method_name(m: EvalMethod) -> (&'static str, bool) {
    match m {
        EvalMethod::Origin => ("origin", false),
        EvalMethod::Regular { ill_conditioned } => ("regular", ill_conditioned),
        EvalMethod::Singular => ("singular", false),
        EvalMethod::WallLimit => ("wall_limit", false),
    }
}

pub fn eval(args: &EvalArgs, settings: &Settings, out: &mut dyn Write) -> Outcome {
    let g = group(&args.lambda.system.system)?;
    let lam = lambda(&g, &args.lambda)?;
    let h = vector(&g.rs, &args.h, args.lambda.ambient)?;
    let v = g.psi(&lam, &h)?;
    let (method, ill) = method_name(v.method);
    let d = settings.precision;
    match settings.format {
        Format::Json => emit(
            out,
            &json!({
                "schema": SCHEMA,
                "command": "eval",
                "system": report::system(g.rs.cartan()),
                "lambda": report::lambda(&g.rs, &lam),
                "H": report::vector(&g.rs, &h),
                "value": report::complex(v.value.re, v.value.im, d),
                "abs": report::float(v.value.norm(), d),
                "method": method,
                "ill_conditioned": ill,
            }),
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["re", "im", "abs", "method"])?;
            w.write_record([fmt(v.value.re, d), fmt(v.value.im, d), fmt(v.value.norm(), d), method.to_string()])?;
            w.flush()?;
        }
    }
    Ok(0)
}

/// CSV cell for a float; overflowed magnitudes are written as `inf`.
fn fmt(x: f64, digits: u32) -> String {
    match report::float(x, digits) {
        Value::Null => x.to_string(),
        v => v.to_string(),
    }
}

pub fn classify(args: &LambdaArgs, settings: &Settings, out: &mut dyn Write) -> Outcome {
    json_only(settings, "classify")?;
    let g = group(&args.system.system)?;
    let lam = lambda(&g, args)?;
    let cert = g.classify(&lam, settings.seed)?;
    emit(out, &report::certificate(&g, &cert, settings.precision))?;
    Ok(if cert.revalidate().is_ok() { 0 } else { 1 })
}

pub fn probe(args: &ProbeArgs, settings: &Settings, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let g = group(&args.lambda.system.system)?;
    let lam = lambda(&g, &args.lambda)?;
    let h0 = if args.h.is_empty() {
        let n = g.normalize(&lam)?;
        g.pick_probe_direction(&n.lambda0, settings.seed)?
    } else {
        vector(&g.rs, &args.h, args.lambda.ambient)?
    };
    let grid = log_grid(settings.t_min, settings.t_max, settings.points);
    let p = g.probe_growth(&lam, &h0, &grid)?;
    let d = settings.precision;
    let mut summary = json!({
        "schema": SCHEMA,
        "command": "probe",
        "system": report::system(g.rs.cartan()),
        "seed": settings.seed,
        "lambda": report::lambda(&g.rs, &lam),
        "probe": report::vector(&g.rs, &p.probe),
        "grid": { "t_min": settings.t_min, "t_max": settings.t_max, "points": settings.points },
        "fitted_rate": report::float(p.fitted_rate, d),
        "predicted_rate": report::float(p.predicted_rate, d),
        "poly_degree": p.poly_degree,
    });
    match settings.format {
        Format::Json => {
            summary["samples"] = p
                .samples
                .iter()
                .map(|s| json!({ "t": report::float(s.t, d), "abs_psi": report::float(s.abs_psi, d), "log_abs_psi": report::float(s.log_abs_psi, d) }))
                .collect();
            emit(out, &summary)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["t", "abs_psi", "log_abs_psi"])?;
            for s in &p.samples {
                w.write_record([fmt(s.t, d), fmt(s.abs_psi, d), fmt(s.log_abs_psi, d)])?;
            }
            w.flush()?;
            drop(w);
            emit(err, &summary)?;
        }
    }
    Ok(0)
}

struct Check {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn to_json(&self) -> Value {
        json!({ "name": self.name, "passed": self.failures.is_empty(), "cases": self.cases, "failures": self.failures })
    }
}

fn face_label(face: &[usize]) -> String {
    let ones: Vec<String> = face.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", ones.join(","))
}

fn check_lemma2(g: &MotionGroup) -> Result<Check, CliError> {
    let mut check = Check::new("lemma2");
    for face in all_faces(g.rs.rank()) {
        let lam = SpectralParameter::real(face_point(&g.rs, &face));
        let report = verify_lemma2(&g.rs, &g.weyl, &lam)?;
        check.record(report.holds && report.generators == face, || {
            format!("face {}: |U| = {}, generated {}", face_label(&face), report.u.len(), report.u_generated.len())
        });
        for root in lam.vanishing_roots(&g.rs) {
            let ok = match decompose_root(&g.rs, &g.weyl, root, &lam) {
                Ok((s, p)) => face.contains(&p) && report.u_generated.contains(&s),
                Err(_) => false,
            };
            check.record(ok, || format!("face {}: root {} has no decomposition", face_label(&face), root + 1));
        }
    }
    Ok(check)
}

fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).filter(move |m| m.count_ones() as usize == k).map(move |m| (0..n).filter(|i| m & (1 << i) != 0).collect())
}

fn root_vectors(rs: &RootSystem, idx: &[usize]) -> Vec<Vec<Rat>> {
    idx.iter().map(|&i| rs.positive_roots()[i].vector.clone()).collect()
}

/// A strictly dominant probe with pairings `2, 3, …`.
fn default_probe(rs: &RootSystem) -> Vec<Rat> {
    let vals: Vec<Rat> = (0..rs.rank()).map(|i| rat(i as i64 + 2)).collect();
    rs.from_pairings(&vals).expect("rank-sized")
}

fn check_c_constants(g: &MotionGroup) -> Result<Check, CliError> {
    let mut check = Check::new("c_constants");
    let rs = &g.rs;
    for k in [2, 3] {
        for idx in subsets(rs.num_positive(), k) {
            let betas = root_vectors(rs, &idx);
            let x = gram_of(&betas);
            let c = c_constant(&betas);
            let formula = if k == 2 { c_formula_r2(&x) } else { c_formula_r3(&x) };
            let symbolic = c_constant_symbolic(&betas, rs.dim());
            check.record(c == formula && c == symbolic, || {
                format!("roots {idx:?}: permanent {c}, formula {formula}, symbolic {symbolic}")
            });
        }
    }
    let h0 = default_probe(rs);
    for face in all_faces(rs.rank()) {
        let v = face_point(rs, &face);
        let eta = v.iter().map(|x| x * ratio(-2, 3)).collect();
        let lam = g.normalize(&SpectralParameter::new(v, eta))?.lambda0;
        let ray = g.ray_expansion(&lam, &h0)?;
        let extracted = ray.extracted_c();
        check.record(extracted == GaussRat::real(ray.c.clone()), || {
            format!("face {}: small-t limit gives {extracted:?}, expected {}", face_label(&face), ray.c)
        });
    }
    Ok(check)
}

fn check_inequality(g: &MotionGroup, seed: u64) -> Result<Check, CliError> {
    let mut check = Check::new("inequality");
    let rs = &g.rs;
    for face in all_faces(rs.rank()).into_iter().filter(|f| f.len() < rs.rank()) {
        let eta: Vec<Rat> = face_point(rs, &face).iter().map(|x| -x).collect();
        let lam0 = g.normalize(&SpectralParameter::new(vec![rat(0); rs.dim()], eta))?.lambda0;
        let eta0 = lam0.eta.clone();
        let mut probes = vec![default_probe(rs)];
        probes.push(g.pick_probe_direction(&lam0, seed)?);
        for probe in probes {
            let table = g.verify_inequality_table(&eta0, &probe)?;
            let stab = g.weyl.stabilizer(&eta0);
            let equal: Vec<usize> = table.rows.iter().filter(|r| r.in_v).map(|r| r.element).collect();
            let mut sorted = equal.clone();
            sorted.sort_unstable();
            check.record(table.holds() && sorted == stab, || format!("face {}: table fails", face_label(&face)));
        }
    }
    Ok(check)
}

const DD_TOL: f64 = 1e-6;
const SINC_TOL: f64 = 1e-10;
const MC_SAMPLES: usize = 100_000;

fn check_oracle(g: &MotionGroup, seed: u64) -> Result<Check, CliError> {
    let mut check = Check::new("oracle");
    let rs = &g.rs;
    let h0 = default_probe(rs);
    for face in all_faces(rs.rank()).into_iter().filter(|f| !f.is_empty()) {
        let v = face_point(rs, &face);
        let eta = v.iter().map(|x| x * ratio(-1, 2)).collect();
        let lam = g.normalize(&SpectralParameter::new(v, eta))?.lambda0;
        let ray = g.psi_singular(&lam, &h0)?;
        let betas = root_vectors(rs, &ray.vanishing);
        for t in [1.0, 3.0, 10.0] {
            let exact = ray.exp_poly.eval(t);
            let dd = divided_difference_limit(g, &lam, &h0, t, &betas, Steps::for_order(betas.len()))?;
            let rel = (dd.value - exact).norm() / exact.norm().max(1.0);
            check.record(rel < DD_TOL, || format!("face {} t = {t}: relative error {rel:e}", face_label(&face)));
        }
    }
    if rs.rank() == 1 {
        let alpha = to_f64_vec(&rs.simple_roots()[0]);
        let lam = SpectralParameter::from_pairings(rs, &[rat(2)], &[rat(0)])?;
        for k in 0..100 {
            let x = 0.013 + 0.2 * k as f64;
            let h: Vec<f64> = alpha.iter().map(|a| a * x / 2.0).collect();
            let err = (g.psi_regular(&lam, &h)? - psi_rank1(Complex64::new(x, 0.0))).norm();
            check.record(err < SINC_TOL, || format!("sinc at x = {x}: error {err:e}"));
        }
        for x in [std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 3.0] {
            let mc = psi_montecarlo_su2(x, 1.0, MC_SAMPLES, seed);
            let dev = (mc.mean - psi_rank1(Complex64::new(x, 0.0))).norm();
            check.record(dev < 3.0 * mc.stderr, || format!("Monte Carlo at x = {x}: deviation {dev:e}, stderr {:e}", mc.stderr));
        }
    }
    Ok(check)
}

pub fn verify(args: &VerifyArgs, settings: &Settings, out: &mut dyn Write) -> Outcome {
    json_only(settings, "verify")?;
    let g = group(&args.system.system)?;
    let all = !(args.lemma2 || args.c_constants || args.inequality || args.oracle);
    let mut checks = Vec::new();
    if all || args.lemma2 {
        checks.push(check_lemma2(&g)?);
    }
    if all || args.c_constants {
        checks.push(check_c_constants(&g)?);
    }
    if all || args.inequality {
        checks.push(check_inequality(&g, settings.seed)?);
    }
    if all || args.oracle {
        checks.push(check_oracle(&g, settings.seed)?);
    }
    let passed = checks.iter().all(|c| c.failures.is_empty());
    emit(
        out,
        &json!({
            "schema": SCHEMA,
            "command": "verify",
            "system": report::system(g.rs.cartan()),
            "seed": settings.seed,
            "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "passed": passed,
        }),
    )?;
    Ok(if passed { 0 } else { 1 })
}

pub fn constants(args: &ConstantsArgs, settings: &Settings, out: &mut dyn Write) -> Outcome {
    json_only(settings, "constants")?;
    let g = group(&args.system.system)?;
    let rs = &g.rs;
    let mut face = Vec::new();
    for &i in &args.stratum {
        if i == 0 || i > rs.rank() {
            return Err(CliError::Usage(format!("simple root {i} out of range 1..={}", rs.rank())));
        }
        if !face.contains(&(i - 1)) {
            face.push(i - 1);
        }
    }
    face.sort_unstable();
    let v = face_point(rs, &face);
    let vanishing = rs.vanishing_roots(&v);
    let betas = root_vectors(rs, &vanishing);
    let gram = gram_of(&betas);
    let c = c_constant(&betas);
    let symbolic = c_constant_symbolic(&betas, rs.dim());
    let formula = match betas.len() {
        2 => Some(("r2", c_formula_r2(&gram))),
        3 => Some(("r3", c_formula_r3(&gram))),
        _ => None,
    };
    let ray = g.ray_expansion(&SpectralParameter::real(v.clone()), &default_probe(rs))?;
    let extracted = ray.extracted_c();
    let agree = formula.as_ref().is_none_or(|(_, f)| *f == c) && symbolic == c && extracted == GaussRat::real(c.clone());
    emit(
        out,
        &json!({
            "schema": SCHEMA,
            "command": "constants",
            "system": report::system(rs.cartan()),
            "stratum": face.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "r": betas.len(),
            "vanishing_roots": vanishing.iter().map(|&i| rs.positive_roots()[i].coeffs.clone()).collect::<Vec<_>>(),
            "gram": gram.iter().map(|row| report::rats(row)).collect::<Vec<_>>(),
            "c": report::rat(&c),
            "c_f64": report::float(rat_to_f64(&c), settings.precision),
            "c_symbolic": report::rat(&symbolic),
            "c_small_t": report::gauss(&extracted),
            "formula": formula.map(|(name, f)| json!({ "name": name, "value": report::rat(&f), "matches": f == c })),
            "agree": agree,
        }),
    )?;
    Ok(if agree { 0 } else { 1 })
}
