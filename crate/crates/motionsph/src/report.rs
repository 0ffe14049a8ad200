//! JSON encodings of core values (schema `motionsph/1`).
//!
//! Exact rationals are strings such as `"-3/2"`. Covectors and vectors are given by
//! their pairings `⟨α_i, ·⟩` with the simple roots. Weyl group elements are reduced
//! words in 1-based simple reflection indices.

use motionsph_core::bounded::{BoundednessCertificate, InequalityTable, UnboundedEvidence};
use motionsph_core::expasym::ExpPoly;
use motionsph_core::rational::{format_rat, GaussRat, Rat};
use motionsph_core::spherical::BracketWitness;
use motionsph_core::{CartanType, MotionGroup, RootSystem, SpectralParameter};
use serde_json::{json, Value};

pub const SCHEMA: &str = "motionsph/1";

pub fn system(c: CartanType) -> Value {
    json!({ "type": c.letter().to_string(), "rank": c.rank() })
}

pub fn rat(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn gauss(z: &GaussRat) -> Value {
    json!({ "re": format_rat(&z.re), "im": format_rat(&z.im) })
}

/// A float rounded to `digits` significant digits; non-finite values become `null`.
pub fn float(x: f64, digits: u32) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1) as usize, x).parse().unwrap_or(x);
    json!(rounded)
}

pub fn complex(re: f64, im: f64, digits: u32) -> Value {
    json!({ "re": float(re, digits), "im": float(im, digits) })
}

pub fn word(w: &[usize]) -> Value {
    Value::Array(w.iter().map(|i| json!(i + 1)).collect())
}

pub fn words(ws: &[Vec<usize>]) -> Value {
    Value::Array(ws.iter().map(|w| word(w)).collect())
}

/// Vector in pairing coordinates.
pub fn vector(rs: &RootSystem, v: &[Rat]) -> Value {
    rats(&rs.pairings(v))
}

pub fn lambda(rs: &RootSystem, l: &SpectralParameter) -> Value {
    json!({ "xi": vector(rs, &l.xi), "eta": vector(rs, &l.eta) })
}

pub fn exp_poly(ep: &ExpPoly<GaussRat>) -> Value {
    Value::Array(
        ep.terms()
            .iter()
            .map(|t| {
                json!({
                    "re_freq": rat(&t.freq.re),
                    "im_freq": rat(&t.freq.im),
                    "coeffs": t.poly.iter().map(gauss).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn witness(w: &BracketWitness) -> Value {
    json!({
        "degree": w.degree,
        "computed": gauss(&w.computed),
        "predicted": gauss(&w.predicted),
        "holds": w.holds(),
    })
}

pub fn inequality_table(rs: &RootSystem, t: &InequalityTable) -> Value {
    json!({
        "h_prime": vector(rs, &t.h_prime),
        "probe": vector(rs, &t.probe),
        "reference": rat(&t.reference),
        "rows": t.rows.iter().map(|r| json!({
            "word": word(&r.word),
            "value": rat(&r.value),
            "in_v": r.in_v,
            "dist_sq": rat(&r.dist_sq),
        })).collect::<Vec<_>>(),
    })
}

fn evidence(g: &MotionGroup, ev: &UnboundedEvidence, digits: u32) -> Value {
    json!({
        "normalization": {
            "lambda0": lambda(&g.rs, &ev.lambda0),
            "s_eta": word(&ev.s_eta),
            "s_xi": word(&ev.s_xi),
            "u": words(&ev.u),
            "v": words(&ev.v),
            "coset_reps": words(&ev.coset_reps),
        },
        "probe": vector(&g.rs, &ev.probe),
        "rate": rat(&ev.rate),
        "rate_f64": float(motionsph_core::rational::rat_to_f64(&ev.rate), digits),
        "vanishing": ev.vanishing,
        "c": rat(&ev.c),
        "bracket": exp_poly(&ev.bracket),
        "bracket_witness": witness(&ev.bracket_witness),
        "inequalities": inequality_table(&g.rs, &ev.inequalities),
    })
}

pub fn certificate(g: &MotionGroup, cert: &BoundednessCertificate, digits: u32) -> Value {
    let mut out = json!({
        "schema": SCHEMA,
        "command": "classify",
        "system": system(g.rs.cartan()),
        "seed": cert.seed,
        "lambda": lambda(&g.rs, &cert.lambda),
        "verdict": format!("{:?}", cert.verdict),
        "revalidated": cert.revalidate().is_ok(),
    });
    if let Some(b) = cert.bound {
        out["bound"] = float(b, digits);
    }
    if let Some(ev) = &cert.evidence {
        out["rate"] = rat(&ev.rate);
        out["certificate"] = evidence(g, ev, digits);
    }
    out
}
