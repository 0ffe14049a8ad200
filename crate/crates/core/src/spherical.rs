//! Spherical functions `ψ_λ` of the complex Cartan motion group.
//!
//! For regular `λ` and `H`,
//!
//! ```text
//!   ψ_λ(exp H) = c₀ · Σ_{s∈W} ε(s) e^{i⟨sA_λ, H⟩} / (π(H) π(A_λ)),
//! ```
//!
//! with `c₀` fixed by `ψ_λ(0) = 1`. At singular `λ₀` the quotient is regularized by
//! multiplying with `π′(λ)`, applying `∂(π′)` in `λ` and setting `λ = λ₀`; along a ray
//! `H = tH₀` this produces an exact exponential polynomial `c·ζ_{λ₀}(tH₀)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::expasym::{ExpPoly, ExpTerm, LogValue};
use crate::rational::{dot, dot_f64, dot_gauss, rat, rat_to_f64, ratio, to_f64_vec, GaussRat, Rat};
use crate::rootsys::{CartanType, RootSystem};
use crate::sympoly::{c_constant, complexify, DiffContext};
use crate::weyl::{normalize, Normalization, StabilizerPair, WeylGroup};

/// `λ = ξ + iη`, both parts given as ambient coordinate vectors in the root span
/// (which are also the dual vectors `A_ξ`, `A_η`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralParameter {
    pub xi: Vec<Rat>,
    pub eta: Vec<Rat>,
}

impl SpectralParameter {
    pub fn new(xi: Vec<Rat>, eta: Vec<Rat>) -> Self {
        debug_assert_eq!(xi.len(), eta.len());
        Self { xi, eta }
    }

    pub fn real(xi: Vec<Rat>) -> Self {
        let n = xi.len();
        Self { xi, eta: vec![Rat::zero(); n] }
    }

    pub fn zero(dim: usize) -> Self {
        Self::real(vec![Rat::zero(); dim])
    }

    /// From simple-root pairings `⟨α_i, ξ⟩` and `⟨α_i, η⟩`.
    pub fn from_pairings(rs: &RootSystem, xi: &[Rat], eta: &[Rat]) -> Result<Self, Error> {
        Ok(Self::new(rs.from_pairings(xi)?, rs.from_pairings(eta)?))
    }

    /// From ambient coordinates; both parts must lie in the root span.
    pub fn from_ambient(rs: &RootSystem, xi: Vec<Rat>, eta: Vec<Rat>) -> Result<Self, Error> {
        rs.check_vector(&xi)?;
        rs.check_vector(&eta)?;
        Ok(Self::new(xi, eta))
    }

    pub fn is_real(&self) -> bool {
        self.eta.iter().all(|x| x.is_zero())
    }

    pub fn gauss(&self) -> Vec<GaussRat> {
        complexify(&self.xi, &self.eta)
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.xi.iter().zip(&self.eta).map(|(a, b)| Complex64::new(rat_to_f64(a), rat_to_f64(b))).collect()
    }

    pub fn apply(&self, w: &WeylGroup, s: usize) -> Self {
        Self::new(w.apply(s, &self.xi), w.apply(s, &self.eta))
    }

    /// `⟨α, A_λ⟩ = 0` (both real and imaginary parts).
    pub fn vanishes_on(&self, alpha: &[Rat]) -> bool {
        dot(alpha, &self.xi).is_zero() && dot(alpha, &self.eta).is_zero()
    }

    pub fn vanishing_simple(&self, rs: &RootSystem) -> Vec<usize> {
        (0..rs.rank()).filter(|&i| self.vanishes_on(&rs.simple_roots()[i])).collect()
    }

    /// Indices of positive roots vanishing at `A_λ` (the factors of `π′`).
    pub fn vanishing_roots(&self, rs: &RootSystem) -> Vec<usize> {
        (0..rs.num_positive()).filter(|&i| self.vanishes_on(&rs.positive_roots()[i].vector)).collect()
    }

    pub fn is_singular(&self, rs: &RootSystem) -> bool {
        rs.positive_roots().iter().any(|r| self.vanishes_on(&r.vector))
    }

    pub fn pi(&self, rs: &RootSystem) -> GaussRat {
        rs.eval_pi_gauss(&self.gauss())
    }
}

/// `c₀ = κ·(−i)^N` with `N = |Σ⁺|`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationConstant {
    pub kappa: Rat,
    pub n_positive: usize,
}

impl NormalizationConstant {
    /// Fixes `c₀` from the lowest Taylor term of the alternating sum at small `H`:
    /// `Σ_s ε(s) e^{i⟨sλ,H⟩} = i^N/N! · Σ_s ε(s)⟨sλ,H⟩^N + O(|H|^{N+2})`.
    /// The exact computation is done at `λ = H = ρ`.
    pub fn compute(rs: &RootSystem, w: &WeylGroup) -> Self {
        let rho = rs.rho();
        Self::compute_at(rs, w, &rho, &rho)
    }

    pub fn compute_at(rs: &RootSystem, w: &WeylGroup, lambda: &[Rat], h: &[Rat]) -> Self {
        let n = rs.num_positive();
        let mut fact = Rat::one();
        for k in 2..=n {
            fact *= rat(k as i64);
        }
        let taylor: Rat = (0..w.order())
            .map(|s| rat(w.sign(s) as i64) * dot(&w.apply(s, lambda), h).pow(n as i32))
            .sum::<Rat>()
            / fact;
        let kappa = rs.eval_pi(lambda) * rs.eval_pi(h) / taylor;
        Self { kappa, n_positive: n }
    }

    pub fn value(&self) -> GaussRat {
        let minus_i = GaussRat::imag(rat(-1));
        minus_i.pow(self.n_positive as u32).scale(&self.kappa)
    }

    pub fn to_c64(&self) -> Complex64 {
        self.value().to_c64()
    }
}

/// How a value of `ψ` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    Origin,
    Regular { ill_conditioned: bool },
    Singular,
    WallLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiValue {
    pub value: Complex64,
    pub method: EvalMethod,
}

/// `c·ζ_{λ₀}(tH₀)` as an exact exponential polynomial, with the per-element `P_s`.
#[derive(Debug, Clone)]
pub struct RayExpansion {
    pub lambda0: SpectralParameter,
    pub probe: Vec<Rat>,
    /// Positive roots vanishing at `λ₀` (the `β_j`).
    pub vanishing: Vec<usize>,
    /// `P_s(t)` for every `s ∈ W`, coefficients in increasing degree.
    pub per_element: Vec<Vec<GaussRat>>,
    /// `i⟨sA_{λ₀}, H₀⟩` for every `s`.
    pub frequencies: Vec<GaussRat>,
    pub exp_poly: ExpPoly<GaussRat>,
    /// `c = ∂(π′)π′`.
    pub c: Rat,
    /// `π(H₀)`.
    pub pi_probe: Rat,
    /// `π″(λ₀)`.
    pub pi_second: GaussRat,
    pub c0: NormalizationConstant,
}

impl RayExpansion {
    pub fn r(&self) -> usize {
        self.vanishing.len()
    }

    /// Exact coefficient of `t^k` in the Taylor expansion of `(c·ζ)(t)` at `t = 0`.
    pub fn taylor_coefficient(&self, k: usize) -> GaussRat {
        let mut total = GaussRat::zero();
        for (poly, f) in self.per_element.iter().zip(&self.frequencies) {
            for (j, a) in poly.iter().enumerate().take(k + 1) {
                let m = k - j;
                let fact: Rat = (1..=m as i64).map(rat).product();
                total += &(a * &f.pow(m as u32)).scale(&(Rat::one() / fact));
            }
        }
        total
    }

    /// `c` recovered from `ψ(0) = 1`: `c = c₀·[t^N](c·ζ) / π(H₀)`.
    pub fn extracted_c(&self) -> GaussRat {
        let n = self.c0.n_positive;
        &(&self.c0.value() * &self.taylor_coefficient(n)) / &GaussRat::real(self.pi_probe.clone())
    }

    /// `ψ_{λ₀}(tH₀) = c₀ · (c·ζ)(t) / (c · π(H₀) · t^N)`.
    pub fn psi_at(&self, t: f64) -> Complex64 {
        self.log_psi_at(t).to_c64()
    }

    pub fn log_psi_at(&self, t: f64) -> LogValue {
        let e = self.exp_poly.eval_log(t);
        let scale = rat_to_f64(&(&self.c * &self.pi_probe));
        let c0 = self.c0.to_c64();
        let n = self.c0.n_positive as f64;
        LogValue {
            ln_abs: e.ln_abs + c0.norm().ln() - scale.abs().ln() - n * t.ln(),
            arg: e.arg + c0.arg() - if scale < 0.0 { core::f64::consts::PI } else { 0.0 },
        }
    }
}

/// `c·ζ_{λ₀}(tH₀)` split as `e^{⟨H′,H₀⟩t}·bracket(t) + remainder(t)`.
#[derive(Debug, Clone)]
pub struct SplitSum {
    /// `Σ_{s∈V/U} e^{isξ₀(tH₀)} Σ_{σ∈U} P_{sσ}(tH₀)`, purely oscillatory.
    pub bracket: ExpPoly<GaussRat>,
    /// `⟨H′, H₀⟩` with `H′ = −A_{η₀}`.
    pub outer_rate: Rat,
    /// `Σ_{s∉V} P_s(tH₀) e^{isλ₀(tH₀)}`.
    pub remainder: ExpPoly<GaussRat>,
    pub probe: Vec<Rat>,
    pub pair: StabilizerPair,
}

impl SplitSum {
    pub fn recombine(&self) -> ExpPoly<GaussRat> {
        self.bracket.shift(&GaussRat::real(self.outer_rate.clone())).add(&self.remainder)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketWitness {
    /// `r`, the degree of `Σ_{σ∈U} P_σ`.
    pub degree: usize,
    /// Leading coefficient computed from the symbolic expansion.
    pub computed: GaussRat,
    /// `|U| · i^r · π′(H₀) / π″(λ₀)`.
    pub predicted: GaussRat,
}

impl BracketWitness {
    pub fn holds(&self) -> bool {
        self.computed == self.predicted && !self.computed.is_zero()
    }
}

/// A root system with its Weyl group and the normalization constant `c₀`: everything
/// needed to evaluate `ψ_λ`. Immutable once built.
#[derive(Debug, Clone)]
pub struct MotionGroup {
    pub rs: RootSystem,
    pub weyl: WeylGroup,
    pub c0: NormalizationConstant,
}

/// Threshold on `|π(A_λ)|/|λ|^N` below which the alternating-sum evaluation is flagged.
pub const ILL_CONDITIONED: f64 = 1e-8;

impl MotionGroup {
    pub fn new(cartan: CartanType) -> Self {
        let rs = RootSystem::new(cartan);
        let weyl = WeylGroup::generate(&rs);
        let c0 = NormalizationConstant::compute(&rs, &weyl);
        Self { rs, weyl, c0 }
    }

    pub fn from_label(label: &str) -> Result<Self, Error> {
        Ok(Self::new(label.parse()?))
    }

    pub fn normalize(&self, lambda: &SpectralParameter) -> Result<Normalization, Error> {
        normalize(&self.rs, &self.weyl, lambda)
    }

    /// Direct evaluation in log form (overflow-safe). Requires regular `λ` and `H`.
    pub fn psi_regular_log(&self, lambda: &SpectralParameter, h: &[f64]) -> Result<LogValue, Error> {
        if lambda.is_singular(&self.rs) {
            return Err(Error::SingularParameter);
        }
        let pi_h = self.rs.eval_pi_f64(h);
        if pi_h == 0.0 || !pi_h.is_finite() {
            return Err(Error::WallPoint);
        }
        let xi = to_f64_vec(&lambda.xi);
        let eta = to_f64_vec(&lambda.eta);
        let w = &self.weyl;
        let exps: Vec<(f64, Complex64)> = (0..w.order())
            .map(|s| {
                let sinv_h = w.apply_f64(w.inverse(s), h);
                (w.sign(s) as f64, Complex64::new(-dot_f64(&eta, &sinv_h), dot_f64(&xi, &sinv_h)))
            })
            .collect();
        let m = exps.iter().map(|(_, z)| z.re).fold(f64::NEG_INFINITY, f64::max);
        let sum: Complex64 = exps.iter().map(|(e, z)| (z - m).exp() * *e).sum();
        let pi_l = self.rs.eval_pi_c64(&lambda.to_c64());
        let c0 = self.c0.to_c64();
        Ok(LogValue {
            ln_abs: c0.norm().ln() + m + sum.norm().ln() - pi_h.abs().ln() - pi_l.norm().ln(),
            arg: c0.arg() + sum.arg() - if pi_h < 0.0 { core::f64::consts::PI } else { 0.0 } - pi_l.arg(),
        })
    }

    pub fn psi_regular(&self, lambda: &SpectralParameter, h: &[f64]) -> Result<Complex64, Error> {
        Ok(self.psi_regular_log(lambda, h)?.to_c64())
    }

    /// Relative size `|π(A_λ)| / |λ|^N`; small values mean cancellation in the alternating sum.
    pub fn conditioning(&self, lambda: &SpectralParameter) -> f64 {
        let l = lambda.to_c64();
        let norm = l.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        self.rs.eval_pi_c64(&l).norm() / norm.powi(self.rs.num_positive() as i32)
    }

    /// The exact ray expansion at any `λ₀` (regular or singular) and strictly dominant `H₀`.
    pub fn ray_expansion(&self, lambda0: &SpectralParameter, probe: &[Rat]) -> Result<RayExpansion, Error> {
        if !self.rs.is_strictly_dominant(probe) {
            return Err(Error::NotDominant);
        }
        let vanishing = lambda0.vanishing_roots(&self.rs);
        let dens: Vec<usize> = (0..self.rs.num_positive()).filter(|i| !vanishing.contains(i)).collect();
        let ctx = DiffContext::new(&self.rs, &self.weyl, &dens, probe.to_vec());
        let betas: Vec<Vec<Rat>> = vanishing.iter().map(|&i| self.rs.positive_roots()[i].vector.clone()).collect();
        let sum = ctx.apply_pi_prime(&ctx.alternating_sum(), &betas);
        let lambda_g = lambda0.gauss();
        let per_element = ctx.evaluate_per_element(&sum, &lambda_g)?;
        let frequencies: Vec<GaussRat> =
            (0..self.weyl.order()).map(|s| ctx.frequency(s, &lambda0.xi, &lambda0.eta)).collect();
        let exp_poly = ExpPoly::new(
            per_element.iter().zip(&frequencies).map(|(p, f)| ExpTerm::new(f.clone(), p.clone())),
        );
        let pi_second = dens
            .iter()
            .fold(GaussRat::one(), |acc, &i| &acc * &dot_gauss(&lambda_g, &self.rs.positive_roots()[i].vector));
        Ok(RayExpansion {
            lambda0: lambda0.clone(),
            probe: probe.to_vec(),
            vanishing,
            per_element,
            frequencies,
            exp_poly,
            c: c_constant(&betas),
            pi_probe: self.rs.eval_pi(probe),
            pi_second,
            c0: self.c0.clone(),
        })
    }

    /// The regularized expansion at a normalized singular `λ₀`.
    pub fn psi_singular(&self, lambda0: &SpectralParameter, probe: &[Rat]) -> Result<RayExpansion, Error> {
        if !lambda0.is_singular(&self.rs) {
            return Err(Error::RegularParameter);
        }
        if !crate::weyl::is_normalized(&self.rs, &self.weyl, lambda0) {
            return Err(Error::Precondition(String::from("lambda0 must be normalized")));
        }
        self.ray_expansion(lambda0, probe)
    }

    /// `ε(s)·(sπ′)(H₀)/π″(λ₀)`, the predicted shape of the top coefficient of `P_s`.
    pub fn leading_shape(&self, ray: &RayExpansion, s: usize) -> GaussRat {
        let s_pi: Rat = ray
            .vanishing
            .iter()
            .map(|&j| dot(&self.weyl.apply(s, &self.rs.positive_roots()[j].vector), &ray.probe))
            .product();
        GaussRat::real(s_pi * rat(self.weyl.sign(s) as i64)) / ray.pi_second.clone()
    }

    /// Whether every `sξ₀(H₀)`, `s ∈ V/U`, is distinct.
    pub fn probe_is_valid(&self, lambda0: &SpectralParameter, probe: &[Rat]) -> bool {
        if !self.rs.is_strictly_dominant(probe) {
            return false;
        }
        let pair = StabilizerPair::new(&self.weyl, lambda0);
        let mut vals: Vec<Rat> = pair.coset_reps.iter().map(|&s| dot(&self.weyl.apply(s, &lambda0.xi), probe)).collect();
        vals.sort();
        vals.windows(2).all(|p| p[0] != p[1])
    }

    /// Deterministic random strictly dominant rational `H₀` separating the coset
    /// frequencies. Later attempts draw from denser rationals.
    pub fn pick_probe_direction(&self, lambda0: &SpectralParameter, seed: u64) -> Result<Vec<Rat>, Error> {
        const BUDGET: usize = 64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for attempt in 0..BUDGET {
            let q = attempt as i64 + 1;
            let vals: Vec<Rat> = (0..self.rs.rank()).map(|_| ratio(rng.random_range(1..=8 * q), q)).collect();
            let h = self.rs.from_pairings(&vals)?;
            if self.probe_is_valid(lambda0, &h) {
                return Ok(h);
            }
        }
        Err(Error::ProbeBudgetExhausted(BUDGET))
    }

    pub fn split_sum(&self, lambda0: &SpectralParameter, probe: &[Rat]) -> Result<SplitSum, Error> {
        let ray = self.ray_expansion(lambda0, probe)?;
        self.split_from_ray(&ray)
    }

    pub fn split_from_ray(&self, ray: &RayExpansion) -> Result<SplitSum, Error> {
        let lambda0 = &ray.lambda0;
        let probe = &ray.probe;
        let pair = StabilizerPair::new(&self.weyl, lambda0);
        let w = &self.weyl;
        let bracket = ExpPoly::from_distinct(pair.coset_reps.iter().map(|&s| {
            let poly = pair
                .u
                .iter()
                .fold(Vec::new(), |acc, &sigma| crate::expasym::poly_add(&acc, &ray.per_element[w.mul(s, sigma)]));
            ExpTerm::new(GaussRat::imag(dot(&w.apply(s, &lambda0.xi), probe)), poly)
        }))
        .map_err(|_| Error::ProbeCollision)?;
        let outer_rate = -dot(&lambda0.eta, probe);
        let remainder = ExpPoly::new(
            (0..w.order())
                .filter(|s| !pair.v.contains(s))
                .map(|s| ExpTerm::new(ray.frequencies[s].clone(), ray.per_element[s].clone())),
        );
        if remainder.terms().iter().any(|t| t.freq.re >= outer_rate) {
            return Err(Error::Invariant(String::from("remainder term grows at least as fast as the bracket")));
        }
        let split = SplitSum { bracket, outer_rate, remainder, probe: probe.clone(), pair };
        if split.recombine() != ray.exp_poly {
            return Err(Error::Invariant(String::from("split sum does not recombine to the ray expansion")));
        }
        Ok(split)
    }

    /// Top coefficient of `Σ_{σ∈U} P_σ(t)` against its closed form.
    pub fn bracket_nonzero(&self, ray: &RayExpansion) -> Result<BracketWitness, Error> {
        let pair = StabilizerPair::new(&self.weyl, &ray.lambda0);
        for &sigma in &pair.u {
            let eps_prime = crate::weyl::sign_on_pi_prime(&self.rs, &self.weyl, sigma, &ray.vanishing)?;
            if eps_prime != self.weyl.sign(sigma) {
                return Err(Error::Invariant(String::from("eps'(sigma) differs from eps(sigma)")));
            }
        }
        let poly = pair.u.iter().fold(Vec::new(), |acc, &s| crate::expasym::poly_add(&acc, &ray.per_element[s]));
        let degree = ray.r();
        let computed = poly.get(degree).cloned().unwrap_or_else(GaussRat::zero);
        if poly.len() > degree + 1 {
            return Err(Error::Invariant(String::from("bracket polynomial exceeds degree r")));
        }
        let pi_prime_h: Rat = ray.vanishing.iter().map(|&j| dot(&self.rs.positive_roots()[j].vector, &ray.probe)).product();
        let predicted = GaussRat::i().pow(degree as u32).scale(&(rat(pair.u.len() as i64) * pi_prime_h)) / ray.pi_second.clone();
        Ok(BracketWitness { degree, computed, predicted })
    }

    /// `s` with `s·H` dominant.
    pub fn dominant_chamber(&self, h: &[Rat]) -> (usize, Vec<Rat>) {
        (0..self.weyl.order())
            .map(|s| (s, self.weyl.apply(s, h)))
            .find(|(_, v)| self.rs.is_dominant(v))
            .expect("every orbit meets the closed chamber")
    }

    /// `ψ_λ(exp H)` for any `λ` and `H` in the root span.
    pub fn psi(&self, lambda: &SpectralParameter, h: &[Rat]) -> Result<PsiValue, Error> {
        self.rs.check_vector(h)?;
        self.rs.check_vector(&lambda.xi)?;
        self.rs.check_vector(&lambda.eta)?;
        let lambda_zero = lambda.xi.iter().chain(&lambda.eta).all(|x| x.is_zero());
        if lambda_zero || h.iter().all(|x| x.is_zero()) {
            return Ok(PsiValue { value: Complex64::new(1.0, 0.0), method: EvalMethod::Origin });
        }
        let (_, hd) = self.dominant_chamber(h);
        if self.rs.is_strictly_dominant(&hd) {
            return self.psi_off_wall(lambda, &hd);
        }
        self.psi_wall_limit(lambda, &hd)
    }

    fn psi_off_wall(&self, lambda: &SpectralParameter, hd: &[Rat]) -> Result<PsiValue, Error> {
        if lambda.is_singular(&self.rs) {
            let n = self.normalize(lambda)?;
            let ray = self.ray_expansion(&n.lambda0, hd)?;
            return Ok(PsiValue { value: ray.psi_at(1.0), method: EvalMethod::Singular });
        }
        let value = self.psi_regular(lambda, &to_f64_vec(hd))?;
        Ok(PsiValue { value, method: EvalMethod::Regular { ill_conditioned: self.conditioning(lambda) < ILL_CONDITIONED } })
    }

    /// Limit along `H + hD` (`D = ρ`) as `h → 0⁺`, by Richardson extrapolation.
    fn psi_wall_limit(&self, lambda: &SpectralParameter, hd: &[Rat]) -> Result<PsiValue, Error> {
        const LEVELS: usize = 6;
        let rho = self.rs.rho();
        let rho_len = rat_to_f64(&dot(&rho, &rho)).sqrt();
        let lam_len = lambda.to_c64().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // h₀ = 2^{-k} with k chosen so that h₀·|λ|·|ρ| ≤ 1/4.
        let mut k = 2i32;
        while 2f64.powi(-k) * lam_len.max(1.0) * rho_len > 0.25 {
            k += 1;
        }
        let mut table: Vec<Complex64> = Vec::with_capacity(LEVELS);
        for level in 0..LEVELS {
            let step = Rat::new(1.into(), num_bigint::BigInt::from(2).pow((k + level as i32) as u32));
            let pt: Vec<Rat> = hd.iter().zip(&rho).map(|(a, b)| a + &step * b).collect();
            table.push(self.psi_off_wall(lambda, &pt)?.value);
        }
        // One-sided Richardson: error expands in integer powers of the step.
        for j in 1..LEVELS {
            let f = 2f64.powi(j as i32);
            for i in (j..LEVELS).rev() {
                table[i] = (table[i] * f - table[i - 1]) / (f - 1.0);
            }
        }
        Ok(PsiValue { value: table[LEVELS - 1], method: EvalMethod::WallLimit })
    }

    /// `⟨H₁, H₂⟩` over the float realization, for grid work.
    pub fn rate_f64(&self, eta0: &[Rat], probe: &[Rat]) -> f64 {
        rat_to_f64(&-dot(eta0, probe))
    }

    pub fn lex_cmp(&self, a: &[Rat], b: &[Rat]) -> Ordering {
        self.rs.lex_compare(a, b)
    }
}

/// Is `v` nonzero with all simple-root pairings ≤ 0?
pub fn is_antidominant_nonzero(rs: &RootSystem, v: &[Rat]) -> bool {
    v.iter().any(|x| !x.is_zero()) && rs.simple_roots().iter().all(|a| !dot(a, v).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::face_point;

    fn a1() -> MotionGroup {
        MotionGroup::new(CartanType::A1)
    }

    #[test]
    fn c0_matches_pi_rho() {
        for c in CartanType::ALL {
            let g = MotionGroup::new(c);
            assert_eq!(g.c0.kappa, g.rs.eval_pi(&g.rs.rho()), "{c}");
            let other = NormalizationConstant::compute_at(
                &g.rs,
                &g.weyl,
                &g.rs.from_pairings(&vec![rat(2); g.rs.rank()]).unwrap(),
                &g.rs.from_pairings(&(1..=g.rs.rank() as i64).map(rat).collect::<Vec<_>>()).unwrap(),
            );
            assert_eq!(other, g.c0);
        }
    }

    #[test]
    fn rank_one_sinc() {
        let g = a1();
        // λ with ⟨A_λ, H⟩ = x: take λ = α/2·x... use pairings: ⟨α,λ⟩ = 2a, H = α/2 → ⟨λ,H⟩ = a.
        let h = g.rs.from_pairings(&[rat(1)]).unwrap(); // ⟨α,H⟩ = 1, H = α/2
        for (num, den) in [(1, 3), (5, 2), (31, 7)] {
            let x = num as f64 / den as f64;
            let lam = SpectralParameter::from_pairings(&g.rs, &[ratio(2 * num, den)], &[rat(0)]).unwrap();
            let v = g.psi_regular(&lam, &to_f64_vec(&h)).unwrap();
            assert!((v - Complex64::new(x.sin() / x, 0.0)).norm() < 1e-13, "{x}");
            let lam_i = SpectralParameter::from_pairings(&g.rs, &[rat(0)], &[ratio(2 * num, den)]).unwrap();
            let v = g.psi_regular(&lam_i, &to_f64_vec(&h)).unwrap();
            assert!((v.re - x.sinh() / x).abs() < 1e-12 * x.sinh() / x);
        }
    }

    #[test]
    fn regular_path_rejects_singular_and_walls() {
        let g = MotionGroup::new(CartanType::A2);
        let lam = SpectralParameter::zero(3);
        assert_eq!(g.psi_regular(&lam, &[1.0, 0.0, -1.0]), Err(Error::SingularParameter));
        let reg = SpectralParameter::from_pairings(&g.rs, &[rat(1), rat(2)], &[rat(0), rat(0)]).unwrap();
        assert_eq!(g.psi_regular(&reg, &[1.0, 1.0, -2.0]), Err(Error::WallPoint));
    }

    #[test]
    fn a1_origin_singular_is_one() {
        let g = a1();
        let probe = g.rs.from_pairings(&[ratio(3, 2)]).unwrap();
        let ray = g.psi_singular(&SpectralParameter::zero(2), &probe).unwrap();
        assert_eq!(ray.c, rat(2));
        for t in [0.5, 1.0, 7.0] {
            assert!((ray.psi_at(t) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
        assert_eq!(g.psi_singular(&SpectralParameter::from_pairings(&g.rs, &[rat(1)], &[rat(0)]).unwrap(), &probe).unwrap_err(), Error::RegularParameter);
        let bad_probe = g.rs.from_pairings(&[rat(-1)]).unwrap();
        assert_eq!(g.psi_singular(&SpectralParameter::zero(2), &bad_probe).unwrap_err(), Error::NotDominant);
    }

    #[test]
    fn psi_at_origin_and_wall() {
        let g = MotionGroup::new(CartanType::A2);
        let lam = SpectralParameter::from_pairings(&g.rs, &[rat(1), rat(2)], &[ratio(1, 3), rat(0)]).unwrap();
        assert_eq!(g.psi(&lam, &[Rat::zero(), Rat::zero(), Rat::zero()]).unwrap().method, EvalMethod::Origin);
        // wall point, cross-checked against the λ ↔ H swap symmetry for real arguments
        let real = SpectralParameter::from_pairings(&g.rs, &[rat(1), rat(2)], &[rat(0), rat(0)]).unwrap();
        let wall = face_point(&g.rs, &[0]);
        let v = g.psi(&real, &wall).unwrap();
        assert_eq!(v.method, EvalMethod::WallLimit);
        let swapped = g.psi(&SpectralParameter::real(wall.clone()), &real.xi).unwrap();
        assert_eq!(swapped.method, EvalMethod::Singular);
        assert!((v.value - swapped.value).norm() < 1e-9, "{:?} vs {:?}", v.value, swapped.value);
    }

    #[test]
    fn bracket_for_a3_r2_stratum() {
        let g = MotionGroup::new(CartanType::A3);
        let xi = face_point(&g.rs, &[0, 2]);
        let eta: Vec<Rat> = face_point(&g.rs, &[0, 2]).iter().map(|x| -x * ratio(1, 2)).collect();
        let lam = SpectralParameter::new(xi, eta);
        let n = g.normalize(&lam).unwrap();
        assert_eq!(n.lambda0, lam);
        let probe = g.pick_probe_direction(&lam, 7).unwrap();
        let ray = g.psi_singular(&lam, &probe).unwrap();
        assert_eq!(ray.r(), 2);
        assert_eq!(ray.per_element[0].len(), 3);
        let w = g.bracket_nonzero(&ray).unwrap();
        assert!(w.holds(), "{w:?}");
        let split = g.split_from_ray(&ray).unwrap();
        assert_eq!(split.pair.u.len(), 4);
        assert_eq!(split.bracket.len(), 1);
    }

    #[test]
    fn probe_collision_is_rejected() {
        // A2, η₀ on the α₁ wall, ξ₀ regular: V = {e, s₁}, U = {e}. The coset
        // frequencies ξ₀(H) and (s₁ξ₀)(H) coincide iff ⟨ξ₀ - s₁ξ₀, H⟩ = 0, i.e.
        // ⟨α₁, H⟩ = 0, which no strictly dominant H satisfies; so use A3 with a larger V.
        let g = MotionGroup::new(CartanType::A3);
        let eta: Vec<Rat> = face_point(&g.rs, &[0, 1]).iter().map(|x| -x).collect();
        let xi = g.rs.from_pairings(&[rat(1), rat(2), rat(-3)]).unwrap();
        let n = g.normalize(&SpectralParameter::new(xi, eta)).unwrap();
        let l0 = n.lambda0;
        assert_eq!(n.pair.v.len(), 6);
        assert_eq!(n.pair.u.len(), 1);
        // Solve s ξ₀(H) = s' ξ₀(H) for a pair of coset reps: H ⟂ (sξ₀ - s'ξ₀).
        let reps = &n.pair.coset_reps;
        let mut found = None;
        'outer: for (i, &a) in reps.iter().enumerate() {
            for &b in &reps[i + 1..] {
                let d: Vec<Rat> = g.weyl.apply(a, &l0.xi).iter().zip(g.weyl.apply(b, &l0.xi)).map(|(x, y)| x - y).collect();
                // search small integer pairings for a strictly dominant H ⟂ d
                for p in 1..12i64 {
                    for q in 1..12i64 {
                        for r in 1..12i64 {
                            let h = g.rs.from_pairings(&[rat(p), rat(q), rat(r)]).unwrap();
                            if dot(&d, &h).is_zero() {
                                found = Some(h);
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        let bad = found.expect("collision locus meets the chamber");
        assert!(!g.probe_is_valid(&l0, &bad));
        assert_eq!(g.split_sum(&l0, &bad).unwrap_err(), Error::ProbeCollision);
        let good = g.pick_probe_direction(&l0, 0).unwrap();
        assert!(g.probe_is_valid(&l0, &good));
        assert!(g.split_sum(&l0, &good).is_ok());
    }
}
