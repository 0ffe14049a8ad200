//! Boundedness of `ψ_λ`: bounded exactly when `λ` is real.
//!
//! For `η ≠ 0` the verdict is certified algebraically. After normalizing `λ₀`, a probe
//! `H₀` is chosen and `c·ζ_{λ₀}(tH₀)` is split into an oscillatory bracket carrying the
//! top growth rate `⟨H′, H₀⟩ > 0` and a remainder whose rates are strictly smaller. The
//! bracket has a nonzero polynomial, so its limsup is positive, which forces `|ψ|` to be
//! unbounded along the ray. Sampled growth ([`MotionGroup::probe_growth`]) only
//! corroborates the certificate.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Signed;

use crate::error::Error;
use crate::expasym::{linear_grid, log_grid, ExpPoly, Oscillation};
use crate::rational::{dot, rat, rat_to_f64, sub_vec, to_f64_vec, GaussRat, Rat};
use crate::spherical::{BracketWitness, MotionGroup, SpectralParameter};
use crate::weyl::Normalization;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Bounded,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityRow {
    pub element: usize,
    pub word: Vec<usize>,
    /// `⟨sH′, H₀⟩`.
    pub value: Rat,
    pub in_v: bool,
    /// `|H₀ − sH′|²`.
    pub dist_sq: Rat,
}

/// `⟨sH′, H₀⟩` for every `s ∈ W`, with `H′ = −A_{η₀}`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityTable {
    pub h_prime: Vec<Rat>,
    pub probe: Vec<Rat>,
    /// `⟨H′, H₀⟩`.
    pub reference: Rat,
    pub rows: Vec<InequalityRow>,
}

impl InequalityTable {
    /// Equality exactly on `V`, strict inequality elsewhere, and the distance form agrees.
    pub fn holds(&self) -> bool {
        let e_dist = self.rows.iter().find(|r| r.element == 0).map(|r| r.dist_sq.clone());
        let Some(e_dist) = e_dist else { return false };
        self.rows.iter().all(|r| {
            let ok = if r.in_v { r.value == self.reference } else { r.value < self.reference };
            // |H₀ − sH′|² − |H₀ − H′|² = 2(⟨H′,H₀⟩ − ⟨sH′,H₀⟩)
            ok && &r.dist_sq - &e_dist == rat(2) * (&self.reference - &r.value)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnboundedEvidence {
    pub lambda0: SpectralParameter,
    /// Reduced words of the normalizing elements.
    pub s_eta: Vec<usize>,
    pub s_xi: Vec<usize>,
    pub u: Vec<Vec<usize>>,
    pub v: Vec<Vec<usize>>,
    pub coset_reps: Vec<Vec<usize>>,
    pub probe: Vec<Rat>,
    /// `⟨H′, H₀⟩`.
    pub rate: Rat,
    /// Positive roots vanishing at `λ₀`, as simple-root coefficient vectors.
    pub vanishing: Vec<Vec<i64>>,
    pub c: Rat,
    pub bracket: ExpPoly<GaussRat>,
    pub bracket_witness: BracketWitness,
    pub inequalities: InequalityTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessCertificate {
    pub verdict: Verdict,
    pub lambda: SpectralParameter,
    pub seed: u64,
    /// `sup |ψ_λ| ≤ 1` for real `λ`.
    pub bound: Option<f64>,
    pub evidence: Option<UnboundedEvidence>,
}

impl BoundednessCertificate {
    /// Re-checks every recorded claim using only the certificate's own fields.
    pub fn revalidate(&self) -> Result<(), String> {
        match self.verdict {
            Verdict::Bounded => {
                if !self.lambda.is_real() {
                    return Err(String::from("bounded verdict for non-real lambda"));
                }
                if self.bound != Some(1.0) {
                    return Err(String::from("bounded verdict must carry the modulus bound 1"));
                }
                Ok(())
            }
            Verdict::Unbounded => {
                let ev = self.evidence.as_ref().ok_or("missing evidence")?;
                if self.lambda.is_real() || ev.lambda0.is_real() {
                    return Err(String::from("unbounded verdict for real lambda"));
                }
                if !ev.rate.is_positive() {
                    return Err(String::from("outer growth rate is not positive"));
                }
                if ev.rate != -dot(&ev.lambda0.eta, &ev.probe) || ev.inequalities.reference != ev.rate {
                    return Err(String::from("recorded rate disagrees with <H', H0>"));
                }
                if ev.inequalities.probe != ev.probe {
                    return Err(String::from("inequality table was computed for another probe"));
                }
                if !ev.inequalities.holds() {
                    return Err(String::from("inequality table is not strict off V"));
                }
                let osc = ev.bracket.classify_oscillatory().map_err(|e| alloc::format!("{e}"))?;
                if !osc.limsup_positive() {
                    return Err(String::from("bracket is identically zero"));
                }
                if !ev.bracket_witness.holds() {
                    return Err(String::from("bracket leading coefficient does not match its closed form"));
                }
                let e_freq = GaussRat::imag(dot(&ev.lambda0.xi, &ev.probe));
                let e_term = ev.bracket.terms().iter().find(|t| t.freq == e_freq).ok_or("bracket lacks the s = e term")?;
                if e_term.poly.get(ev.bracket_witness.degree) != Some(&ev.bracket_witness.computed)
                    || e_term.poly.len() != ev.bracket_witness.degree + 1
                {
                    return Err(String::from("bracket s = e polynomial does not carry the witnessed leading term"));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthSample {
    pub t: f64,
    pub abs_psi: f64,
    pub log_abs_psi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProbe {
    pub probe: Vec<Rat>,
    pub samples: Vec<GrowthSample>,
    /// Slope of the upper envelope of `ln|ψ(tH₀)·π(tH₀)| − d·ln t` over the top decade,
    /// resampled on [`fit_grid`].
    pub fitted_rate: f64,
    /// `⟨H′, H₀⟩` (zero for real `λ`).
    pub predicted_rate: f64,
    /// Degree `d` of the dominant bracket polynomial, removed before fitting.
    pub poly_degree: usize,
}

/// Default probe grid: `t ∈ [1, 200]`, 512 log-spaced points.
pub const DEFAULT_T_MIN: f64 = 1.0;
pub const DEFAULT_T_MAX: f64 = 200.0;
pub const DEFAULT_POINTS: usize = 512;
/// Windows used for the upper-envelope fit.
pub const ENVELOPE_WINDOWS: usize = 8;

pub fn default_grid() -> Vec<f64> {
    log_grid(DEFAULT_T_MIN, DEFAULT_T_MAX, DEFAULT_POINTS)
}

/// Cap on the number of points of the envelope-fit grid.
pub const MAX_FIT_POINTS: usize = 1 << 16;

/// Linear grid on `[t_max/10, t_max]` whose spacing resolves every beat of `ep`:
/// `Δt·(max Im f − min Im f) ≤ π/8`.
pub fn fit_grid(t_max: f64, ep: &ExpPoly<GaussRat>) -> Vec<f64> {
    let ims: Vec<f64> = ep.terms().iter().map(|t| rat_to_f64(&t.freq.im)).collect();
    let spread = ims.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - ims.iter().cloned().fold(f64::INFINITY, f64::min);
    let span = 0.9 * t_max;
    let wanted = if spread > 0.0 { (span * spread * 8.0 / core::f64::consts::PI).ceil() as usize } else { 0 };
    linear_grid(t_max / 10.0, t_max, wanted.clamp(DEFAULT_POINTS, MAX_FIT_POINTS))
}

/// Detrending passes in [`envelope_slope`].
pub const ENVELOPE_PASSES: usize = 6;

/// Slope of the upper envelope of `values` over the points with `t ≥ t_max/10`.
///
/// Starting from the plain least-squares slope, each pass picks in every window the
/// point of largest detrended value and refits through those points, so the window
/// maxima track the oscillation peaks rather than the window edges.
pub fn envelope_slope(ts: &[f64], values: &[f64], windows: usize) -> f64 {
    let t_max = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let idx: Vec<usize> = (0..ts.len()).filter(|&i| ts[i] >= t_max / 10.0 && values[i].is_finite()).collect();
    if idx.len() < 2 {
        return f64::NAN;
    }
    let windows = windows.clamp(2, idx.len());
    let mut slope = least_squares_slope(idx.iter().map(|&i| (ts[i], values[i])));
    for _ in 0..ENVELOPE_PASSES {
        let peaks: Vec<(f64, f64)> = (0..windows)
            .map(|w| {
                let lo = w * idx.len() / windows;
                let hi = (w + 1) * idx.len() / windows;
                let detrended = |i: usize| values[i] - slope * ts[i];
                let best = idx[lo..hi]
                    .iter()
                    .copied()
                    .max_by(|&a, &b| detrended(a).partial_cmp(&detrended(b)).unwrap_or(core::cmp::Ordering::Equal))
                    .unwrap();
                (ts[best], values[best])
            })
            .collect();
        slope = least_squares_slope(peaks.into_iter());
    }
    slope
}

fn least_squares_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points.collect();
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - mv)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    num / den
}

impl MotionGroup {
    pub fn verify_inequality_table(&self, eta0: &[Rat], probe: &[Rat]) -> Result<InequalityTable, Error> {
        let h_prime: Vec<Rat> = eta0.iter().map(|x| -x).collect();
        if !self.rs.is_dominant(&h_prime) {
            return Err(Error::Precondition(String::from("H' = -A_eta0 must be dominant")));
        }
        if !self.rs.is_strictly_dominant(probe) {
            return Err(Error::NotDominant);
        }
        let reference = dot(&h_prime, probe);
        let rows = (0..self.weyl.order())
            .map(|s| {
                let img = self.weyl.apply(s, &h_prime);
                let diff = sub_vec(probe, &img);
                InequalityRow {
                    element: s,
                    word: self.weyl.element(s).word.clone(),
                    value: dot(&img, probe),
                    in_v: img == h_prime,
                    dist_sq: dot(&diff, &diff),
                }
            })
            .collect();
        Ok(InequalityTable { h_prime, probe: probe.to_vec(), reference, rows })
    }

    pub fn classify(&self, lambda: &SpectralParameter, seed: u64) -> Result<BoundednessCertificate, Error> {
        if lambda.is_real() {
            return Ok(BoundednessCertificate {
                verdict: Verdict::Bounded,
                lambda: lambda.clone(),
                seed,
                bound: Some(1.0),
                evidence: None,
            });
        }
        let n = self.normalize(lambda)?;
        let probe = self.pick_probe_direction(&n.lambda0, seed)?;
        let evidence = self.unbounded_evidence(&n, &probe)?;
        let cert = BoundednessCertificate {
            verdict: Verdict::Unbounded,
            lambda: lambda.clone(),
            seed,
            bound: None,
            evidence: Some(evidence),
        };
        cert.revalidate().map_err(Error::Invariant)?;
        Ok(cert)
    }

    fn unbounded_evidence(&self, n: &Normalization, probe: &[Rat]) -> Result<UnboundedEvidence, Error> {
        let lambda0 = &n.lambda0;
        let ray = self.ray_expansion(lambda0, probe)?;
        let split = self.split_from_ray(&ray)?;
        let inequalities = self.verify_inequality_table(&lambda0.eta, probe)?;
        if !inequalities.holds() {
            return Err(Error::Invariant(String::from("strict inequality fails off V")));
        }
        for row in &inequalities.rows {
            if row.in_v != split.pair.v.contains(&row.element) {
                return Err(Error::Invariant(String::from("equality rows differ from Stab(eta0)")));
            }
        }
        let bracket_witness = self.bracket_nonzero(&ray)?;
        if !bracket_witness.holds() {
            return Err(Error::Invariant(String::from("bracket leading term mismatch")));
        }
        match split.bracket.classify_oscillatory()? {
            Oscillation::IdenticallyZero => return Err(Error::Invariant(String::from("bracket vanishes"))),
            Oscillation::Bounded { .. } | Oscillation::Unbounded { .. } => {}
        }
        if !split.outer_rate.is_positive() {
            return Err(Error::Invariant(String::from("outer rate is not positive")));
        }
        let words = |v: &[usize]| v.iter().map(|&s| self.weyl.element(s).word.clone()).collect();
        Ok(UnboundedEvidence {
            lambda0: lambda0.clone(),
            s_eta: self.weyl.element(n.s_eta).word.clone(),
            s_xi: self.weyl.element(n.s_xi).word.clone(),
            u: words(&split.pair.u),
            v: words(&split.pair.v),
            coset_reps: words(&split.pair.coset_reps),
            probe: probe.to_vec(),
            rate: split.outer_rate.clone(),
            vanishing: ray.vanishing.iter().map(|&i| self.rs.positive_roots()[i].coeffs.clone()).collect(),
            c: ray.c.clone(),
            bracket: split.bracket,
            bracket_witness,
            inequalities,
        })
    }

    /// Samples `|ψ_λ(tH₀)|` in log form and fits the exponential growth rate.
    ///
    /// `probe` is moved into the dominant chamber first (`ψ` is invariant under `W`
    /// acting on `H`); it must then be strictly dominant.
    pub fn probe_growth(&self, lambda: &SpectralParameter, probe: &[Rat], grid: &[f64]) -> Result<GrowthProbe, Error> {
        if grid.len() < 2 || grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::Precondition(String::from("probe grid needs at least two positive times")));
        }
        let (_, h0) = self.dominant_chamber(probe);
        if !self.rs.is_strictly_dominant(&h0) {
            return Err(Error::NotDominant);
        }
        let n = self.normalize(lambda)?;
        let lambda0 = &n.lambda0;
        let ray = self.ray_expansion(lambda0, &h0)?;
        let growth = ray.exp_poly.dominant_growth();
        let poly_degree = growth.reduced.max_degree().unwrap_or(0);
        let singular = lambda0.is_singular(&self.rs);
        let h0f = to_f64_vec(&h0);
        let log_psi = |t: f64| -> Result<f64, Error> {
            if singular {
                Ok(ray.log_psi_at(t).ln_abs)
            } else {
                let h: Vec<f64> = h0f.iter().map(|x| x * t).collect();
                Ok(self.psi_regular_log(lambda0, &h)?.ln_abs)
            }
        };
        let mut samples = Vec::with_capacity(grid.len());
        for &t in grid {
            let ln_abs = log_psi(t)?;
            samples.push(GrowthSample { t, abs_psi: ln_abs.exp(), log_abs_psi: ln_abs });
        }
        let t_max = grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let fit_grid = fit_grid(t_max, &ray.exp_poly);
        // ln|ψ(tH₀)π(tH₀)| = ln|c₀| + ln|c·ζ(t)| − ln|c|
        let ep = ray.exp_poly.to_c64();
        let offset = self.c0.to_c64().norm().ln() - rat_to_f64(&ray.c).abs().ln();
        let normalized: Vec<f64> =
            fit_grid.iter().map(|&t| ep.eval_log(t).ln_abs + offset - poly_degree as f64 * t.ln()).collect();
        let fitted_rate = envelope_slope(&fit_grid, &normalized, ENVELOPE_WINDOWS);
        Ok(GrowthProbe {
            probe: h0,
            samples,
            fitted_rate,
            predicted_rate: rat_to_f64(&-dot(&lambda0.eta, &ray.probe)),
            poly_degree,
        })
    }

    /// `max |ψ_ξ(H)|` over a grid, for real `ξ` (expected `≤ 1`).
    pub fn easy_direction_check(&self, xi: &[Rat], grid: &[Vec<Rat>]) -> Result<f64, Error> {
        let lambda = SpectralParameter::real(xi.to_vec());
        let mut best = 0.0f64;
        for h in grid {
            best = best.max(self.psi(&lambda, h)?.value.norm());
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::rootsys::CartanType;
    use crate::weyl::face_point;

    #[test]
    fn real_parameters_are_bounded() {
        let g = MotionGroup::new(CartanType::B2);
        let zero = SpectralParameter::zero(2);
        let c = g.classify(&zero, 0).unwrap();
        assert_eq!(c.verdict, Verdict::Bounded);
        assert_eq!(c.bound, Some(1.0));
        c.revalidate().unwrap();
        let real = SpectralParameter::from_pairings(&g.rs, &[rat(3), ratio(-1, 2)], &[rat(0), rat(0)]).unwrap();
        assert_eq!(g.classify(&real, 3).unwrap().verdict, Verdict::Bounded);
    }

    #[test]
    fn a1_imaginary_is_unbounded_with_sinh_rate() {
        let g = MotionGroup::new(CartanType::A1);
        let lam = SpectralParameter::from_pairings(&g.rs, &[rat(0)], &[rat(2)]).unwrap();
        let c = g.classify(&lam, 1).unwrap();
        assert_eq!(c.verdict, Verdict::Unbounded);
        let ev = c.evidence.as_ref().unwrap();
        // rate = |⟨A_η, H₀⟩|
        assert_eq!(ev.rate, dot(&lam.eta, &ev.probe).abs());
        c.revalidate().unwrap();
    }

    #[test]
    fn inequality_table_equalities_on_stabilizer() {
        let g = MotionGroup::new(CartanType::A2);
        let probe = g.rs.from_pairings(&[rat(2), rat(3)]).unwrap();
        let eta_reg: Vec<Rat> = face_point(&g.rs, &[]).iter().map(|x| -x).collect();
        let t = g.verify_inequality_table(&eta_reg, &probe).unwrap();
        assert!(t.holds());
        assert_eq!(t.rows.iter().filter(|r| r.in_v).count(), 1);
        assert!(t.rows[0].in_v);
        let eta_wall: Vec<Rat> = face_point(&g.rs, &[0]).iter().map(|x| -x).collect();
        let t = g.verify_inequality_table(&eta_wall, &probe).unwrap();
        assert!(t.holds());
        let eq: Vec<usize> = t.rows.iter().filter(|r| r.in_v).map(|r| r.element).collect();
        assert_eq!(eq, g.weyl.stabilizer(&eta_wall));
        let not_dominant: Vec<Rat> = face_point(&g.rs, &[]);
        assert!(g.verify_inequality_table(&not_dominant, &probe).is_err());
    }

    #[test]
    fn tampered_certificate_fails_revalidation() {
        let g = MotionGroup::new(CartanType::A2);
        let lam = SpectralParameter::from_pairings(&g.rs, &[rat(1), rat(0)], &[rat(0), rat(-1)]).unwrap();
        let c = g.classify(&lam, 5).unwrap();
        c.revalidate().unwrap();
        let mut bad = c.clone();
        bad.evidence.as_mut().unwrap().rate = rat(0);
        assert!(bad.revalidate().is_err());
        let mut bad = c.clone();
        bad.evidence.as_mut().unwrap().bracket = ExpPoly::zero();
        assert!(bad.revalidate().is_err());
        let mut bad = c;
        let row = bad.evidence.as_mut().unwrap().inequalities.rows.iter_mut().find(|r| !r.in_v).unwrap();
        row.value = bad_value(&row.value);
        assert!(bad.revalidate().is_err());
    }

    fn bad_value(v: &Rat) -> Rat {
        v + rat(1000)
    }

    #[test]
    fn envelope_slope_recovers_linear_growth() {
        let ts = log_grid(1.0, 200.0, 512);
        let vals: Vec<f64> = ts.iter().map(|t| 0.7 * t + (1.5 + (1.1 * t).cos()).ln()).collect();
        let got = envelope_slope(&ts, &vals, 8);
        assert!((got - 0.7).abs() < 1e-3, "{got}");
    }
}
