//! Independent ground truth: rank-one closed forms, Monte Carlo Haar averages and
//! divided-difference limits of the alternating sum.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::rational::{dot_f64, rat_to_f64, to_f64_vec, Rat};
use crate::spherical::{MotionGroup, SpectralParameter};

/// `sin(x)/x`, analytic in complex `x`, with the removable singularity filled in.
pub fn psi_rank1(x: Complex64) -> Complex64 {
    if x.norm() < 1e-4 {
        let x2 = x * x;
        Complex64::new(1.0, 0.0) - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: Complex64,
    pub stderr: f64,
    pub samples: usize,
}

/// Samples per independent ChaCha stream.
pub const MC_CHUNK: usize = 1 << 16;

/// Haar average of `e^{iλ(Ad(k)Y)}` over `K = SU(2)`, for `|λ| = lambda_norm` and
/// `|Y| = y_norm`.
///
/// `Ad(k)` acts on `su(2) ≅ ℝ³` as a rotation, so only the component of the rotated
/// unit vector along `Y` matters. Rotations are drawn from Haar-uniform unit
/// quaternions. Each chunk of [`MC_CHUNK`] samples uses its own stream of the seeded
/// generator and the chunks are reduced in order, so the result is independent of
/// how chunks are scheduled.
pub fn psi_montecarlo_su2(lambda_norm: f64, y_norm: f64, n_samples: usize, seed: u64) -> MonteCarloEstimate {
    let a = lambda_norm * y_norm;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 0.0;
    let chunks = n_samples.div_ceil(MC_CHUNK);
    for chunk in 0..chunks {
        let len = MC_CHUNK.min(n_samples - chunk * MC_CHUNK);
        let (s, sq) = mc_chunk(a, len, seed, chunk as u64);
        sum += s;
        sum_sq += sq;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = if n_samples > 1 { (sum_sq / n - mean.norm_sqr()).max(0.0) * n / (n - 1.0) } else { 0.0 };
    MonteCarloEstimate { mean, stderr: (var / n).sqrt(), samples: n_samples }
}

fn mc_chunk(a: f64, len: usize, seed: u64, stream: u64) -> (Complex64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let tau = 2.0 * core::f64::consts::PI;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 0.0;
    for _ in 0..len {
        // Shoemake: q = (√(1−u₁) sin 2πu₂, √(1−u₁) cos 2πu₂, √u₁ sin 2πu₃, √u₁ cos 2πu₃);
        // the z-component of q·e_z·q̄ only involves the first pair.
        let (u1, u2): (f64, f64) = (rng.random(), rng.random());
        let r1 = (1.0 - u1).sqrt();
        let (x, y) = (r1 * (tau * u2).sin(), r1 * (tau * u2).cos());
        let cos_theta = 1.0 - 2.0 * (x * x + y * y);
        let z = Complex64::new(0.0, a * cos_theta).exp();
        sum += z;
        sum_sq += z.norm_sqr();
    }
    (sum, sum_sq)
}

/// Step sizes below this are refused.
pub const MIN_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividedDifference {
    pub value: Complex64,
    /// Initial step `h₀`; level `k` uses `h₀/2^k`.
    pub step: f64,
    /// Difference between the last two extrapolated estimates.
    pub error_estimate: f64,
}

/// Step schedule for [`divided_difference_limit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Steps {
    /// `h₀ · max(1, t·|H₀|·max|β|)`, further capped by the distance to the zeros of `π″`.
    pub scale: f64,
    /// Richardson levels; level `k` uses `h₀/2^k`.
    pub levels: usize,
}

impl Default for Steps {
    fn default() -> Self {
        Self { scale: 0.05, levels: 4 }
    }
}

impl Steps {
    /// A schedule suited to `r` differentiations. Every central difference loses
    /// roughly `|log₁₀ h|` digits, so deep strata need larger initial steps and more
    /// extrapolation levels.
    pub fn for_order(r: usize) -> Self {
        match r {
            0..=3 => Self::default(),
            _ => Self { scale: 0.5, levels: 5 },
        }
    }
}

/// `∂(β₁)…∂(β_r)` of `g(λ) = Σ_s ε(s) e^{i⟨sλ, tH₀⟩} / π″(λ)` at `λ₀`, by nested
/// central differences with Richardson extrapolation in `h²`.
///
/// `π″` is the product of the positive roots outside `betas`. The result estimates
/// the value at `t` of the exact ray expansion.
pub fn divided_difference_limit(
    group: &MotionGroup,
    lambda0: &SpectralParameter,
    probe: &[Rat],
    t: f64,
    betas: &[Vec<Rat>],
    steps: Steps,
) -> Result<DividedDifference, Error> {
    let rs = &group.rs;
    let w = &group.weyl;
    let betas_f: Vec<Vec<f64>> = betas.iter().map(|b| to_f64_vec(b)).collect();
    let denominators: Vec<Vec<f64>> = rs
        .positive_roots()
        .iter()
        .filter(|r| !betas.contains(&r.vector))
        .map(|r| to_f64_vec(&r.vector))
        .collect();
    let lam: Vec<Complex64> = lambda0.to_c64();
    let h0 = to_f64_vec(probe);
    let inv_probes: Vec<Vec<f64>> = (0..w.order()).map(|s| w.apply_f64(w.inverse(s), &h0)).collect();
    let pair = |v: &[Complex64], x: &[f64]| -> Complex64 { v.iter().zip(x).map(|(a, b)| a * b).sum() };

    let g = |l: &[Complex64]| -> Complex64 {
        let num: Complex64 = (0..w.order())
            .map(|s| (Complex64::i() * pair(l, &inv_probes[s]) * t).exp() * w.sign(s) as f64)
            .sum();
        let den: Complex64 = denominators.iter().map(|gam| pair(l, gam)).product();
        num / den
    };
    if betas.is_empty() {
        return Ok(DividedDifference { value: g(&lam), step: 0.0, error_estimate: 0.0 });
    }

    let norm = |v: &[f64]| dot_f64(v, v).sqrt();
    let beta_max = betas_f.iter().map(|b| norm(b)).fold(0.0, f64::max);
    let mut step = steps.scale / (t * norm(&h0) * beta_max).max(1.0);
    // stay well inside the region where π″ has no zeros
    let gap = denominators
        .iter()
        .map(|gam| pair(&lam, gam).norm() / (norm(gam) * beta_max * betas.len() as f64))
        .fold(f64::INFINITY, f64::min);
    step = step.min(0.25 * gap);
    let levels = steps.levels.max(1);
    let smallest = step / (1u64 << (levels - 1)) as f64;
    if smallest.is_nan() || smallest < MIN_STEP {
        return Err(Error::StepUnderflow(smallest));
    }

    let r = betas.len();
    let difference = |h: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for mask in 0u32..(1 << r) {
            let mut point = lam.clone();
            let mut sign = 1.0;
            for (j, b) in betas_f.iter().enumerate() {
                let sgn = if mask & (1 << j) != 0 { 1.0 } else { -1.0 };
                sign *= sgn;
                for (p, bi) in point.iter_mut().zip(b) {
                    *p += sgn * h * bi;
                }
            }
            acc += g(&point) * sign;
        }
        acc / (2.0 * h).powi(r as i32)
    };

    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(levels);
    for k in 0..levels {
        let mut row = Vec::with_capacity(k + 1);
        row.push(difference(step / (1u64 << k) as f64));
        for m in 1..=k {
            let f = (4.0f64).powi(m as i32);
            let v = (row[m - 1] * f - table[k - 1][m - 1]) / (f - 1.0);
            row.push(v);
        }
        table.push(row);
    }
    let last = &table[levels - 1];
    let value = last[levels - 1];
    let error_estimate = if levels > 1 { (value - table[levels - 2][levels - 2]).norm() } else { f64::NAN };
    Ok(DividedDifference { value, step, error_estimate })
}

/// `ψ` from a value of the ray expansion, `c₀·E / (c·π(tH₀))`.
pub fn psi_from_expansion(group: &MotionGroup, expansion_value: Complex64, c: &Rat, probe: &[Rat], t: f64) -> Complex64 {
    let n = group.rs.num_positive() as i32;
    let pi_t = rat_to_f64(&group.rs.eval_pi(probe)) * t.powi(n);
    group.c0.to_c64() * expansion_value / (rat_to_f64(c) * pi_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::rootsys::CartanType;

    #[test]
    fn rank1_closed_form() {
        assert_eq!(psi_rank1(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        assert!(psi_rank1(Complex64::new(core::f64::consts::PI, 0.0)).norm() < 1e-15);
        let y = 2.5f64;
        let v = psi_rank1(Complex64::new(0.0, y));
        assert!((v.re - y.sinh() / y).abs() < 1e-12 && v.im.abs() < 1e-12);
        // series and closed form agree across the switch
        let x = Complex64::new(0.99e-4, 0.0);
        assert!((psi_rank1(x) - x.sin() / x).norm() < 1e-12);
    }

    #[test]
    fn montecarlo_zero_product_is_exact() {
        let e = psi_montecarlo_su2(0.0, 3.0, 2000, 7);
        assert_eq!(e.mean, Complex64::new(1.0, 0.0));
        assert!(e.stderr < 1e-12);
    }

    #[test]
    fn montecarlo_is_deterministic() {
        let a = psi_montecarlo_su2(1.0, 1.5, 100_000, 3);
        let b = psi_montecarlo_su2(1.0, 1.5, 100_000, 3);
        assert_eq!(a, b);
        let x = Complex64::new(1.5, 0.0);
        assert!((a.mean - psi_rank1(x)).norm() < 3.0 * a.stderr);
    }

    #[test]
    fn regular_difference_is_plain_evaluation() {
        let g = MotionGroup::new(CartanType::A2);
        let lam = SpectralParameter::from_pairings(&g.rs, &[rat(1), rat(2)], &[rat(0), rat(1)]).unwrap();
        let probe = g.rs.from_pairings(&[rat(1), rat(2)]).unwrap();
        let ray = g.ray_expansion(&lam, &probe).unwrap();
        let dd = divided_difference_limit(&g, &lam, &probe, 0.7, &[], Steps::default()).unwrap();
        assert!((dd.value - ray.exp_poly.eval(0.7)).norm() < 1e-12);
    }

    #[test]
    fn a1_origin_matches_symbolic() {
        let g = MotionGroup::new(CartanType::A1);
        let lam = SpectralParameter::zero(g.rs.dim());
        let probe = g.rs.from_pairings(&[rat(3)]).unwrap();
        let alpha = g.rs.positive_roots()[0].vector.clone();
        let dd = divided_difference_limit(&g, &lam, &probe, 1.0, &[alpha], Steps::default()).unwrap();
        let ray = g.ray_expansion(&lam, &probe).unwrap();
        assert!((dd.value - ray.exp_poly.eval(1.0)).norm() < 1e-8);
        let psi = psi_from_expansion(&g, dd.value, &ray.c, &probe, 1.0);
        assert!((psi - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }
}
