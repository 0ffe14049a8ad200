//! One-variable exponential polynomials `Σ_j p_j(t) e^{c_j t}` and their asymptotics.
//!
//! Boundedness of purely oscillatory sums is decided algebraically by the classical
//! rule: if `limsup_{t→∞} |Σ_r e^{i k_r t} p_r(t)|` is finite for distinct real `k_r`,
//! every `p_r` is constant, and if it is zero every `p_r` vanishes. No sampling is
//! involved in that decision; [`ExpPoly::numeric_limsup_probe`] only corroborates it.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Debug;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::rational::{rat_to_f64, GaussRat, Rat};

/// Coefficient and frequency field for [`ExpPoly`].
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Frequency equality (exact, or within tolerance for floats).
    fn same_frequency(&self, other: &Self) -> bool;
    fn cmp_re(&self, other: &Self) -> Ordering;
    fn re_is_zero(&self) -> bool;
    /// The real part as an element of the field.
    fn re_part(&self) -> Self;
    /// Canonical ordering for stored terms.
    fn sort_cmp(&self, other: &Self) -> Ordering;
    fn to_c64(&self) -> Complex64;
}

impl Coefficient for GaussRat {
    fn zero() -> Self {
        <GaussRat as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn same_frequency(&self, o: &Self) -> bool {
        self == o
    }
    fn cmp_re(&self, o: &Self) -> Ordering {
        self.re.cmp(&o.re)
    }
    fn re_is_zero(&self) -> bool {
        self.re.is_zero()
    }
    fn re_part(&self) -> Self {
        GaussRat::real(self.re.clone())
    }
    fn sort_cmp(&self, o: &Self) -> Ordering {
        o.re.cmp(&self.re).then_with(|| self.im.cmp(&o.im))
    }
    fn to_c64(&self) -> Complex64 {
        GaussRat::to_c64(self)
    }
}

/// Relative tolerance for merging floating-point frequencies.
pub const FREQ_TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= FREQ_TOL * 1f64.max(a.abs()).max(b.abs())
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn same_frequency(&self, o: &Self) -> bool {
        close(self.re, o.re) && close(self.im, o.im)
    }
    fn cmp_re(&self, o: &Self) -> Ordering {
        if close(self.re, o.re) {
            Ordering::Equal
        } else {
            self.re.partial_cmp(&o.re).unwrap_or(Ordering::Equal)
        }
    }
    fn re_is_zero(&self) -> bool {
        self.re.abs() <= FREQ_TOL
    }
    fn re_part(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }
    fn sort_cmp(&self, o: &Self) -> Ordering {
        o.re.partial_cmp(&self.re)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.im.partial_cmp(&o.im).unwrap_or(Ordering::Equal))
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// A term `p(t) e^{freq·t}`; `poly[k]` is the coefficient of `t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm<C> {
    pub freq: C,
    pub poly: Vec<C>,
}

impl<C: Coefficient> ExpTerm<C> {
    pub fn new(freq: C, poly: Vec<C>) -> Self {
        let mut t = Self { freq, poly };
        t.trim();
        t
    }

    fn trim(&mut self) {
        while self.poly.last().is_some_and(|c| c.is_zero()) {
            self.poly.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.poly.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.poly.last()
    }

    pub fn eval_poly(&self, t: f64) -> Complex64 {
        self.poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c.to_c64())
    }
}

pub fn poly_add<C: Coefficient>(a: &[C], b: &[C]) -> Vec<C> {
    let n = a.len().max(b.len());
    let mut out: Vec<C> = (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => C::zero(),
        })
        .collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// `Σ_j p_j(t) e^{c_j t}` with pairwise distinct frequencies and nonzero polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPoly<C> {
    terms: Vec<ExpTerm<C>>,
}

/// `ln|z|` and `arg z` of a value that may overflow `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub ln_abs: f64,
    pub arg: f64,
}

impl LogValue {
    pub fn to_c64(self) -> Complex64 {
        Complex64::from_polar(self.ln_abs.exp(), self.arg)
    }
}

/// Result of the algebraic boundedness test on an oscillatory exponential polynomial.
#[derive(Debug, Clone, PartialEq)]
pub enum Oscillation<C> {
    IdenticallyZero,
    /// All polynomials constant, not all zero. `limsup |f|` lies in `[lower, upper]`,
    /// with `lower = (Σ|c_r|²)^{1/2}` (mean-square of an almost periodic sum) and
    /// `upper = Σ|c_r|`.
    Bounded { witness: ExpTerm<C>, lower: f64, upper: f64 },
    /// Some polynomial is nonconstant, so `limsup |f| = ∞`.
    Unbounded { witness: ExpTerm<C> },
}

impl<C> Oscillation<C> {
    pub fn limsup_positive(&self) -> bool {
        !matches!(self, Oscillation::IdenticallyZero)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Growth<C> {
    /// Largest real part among nonzero terms (`None` for the zero function, i.e. `−∞`).
    pub rate: Option<C>,
    /// Terms at that real part, with frequencies shifted to the imaginary axis.
    pub reduced: ExpPoly<C>,
}

impl<C: Coefficient> Growth<C> {
    pub fn rate_f64(&self) -> f64 {
        self.rate.as_ref().map_or(f64::NEG_INFINITY, |r| r.to_c64().re)
    }
}

impl<C: Coefficient> Default for ExpPoly<C> {
    fn default() -> Self {
        Self { terms: Vec::new() }
    }
}

impl<C: Coefficient> ExpPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a canonical sum: equal frequencies merged, zero polynomials dropped.
    pub fn new(terms: impl IntoIterator<Item = ExpTerm<C>>) -> Self {
        let mut out: Vec<ExpTerm<C>> = Vec::new();
        for t in terms {
            if let Some(e) = out.iter_mut().find(|e| e.freq.same_frequency(&t.freq)) {
                e.poly = poly_add(&e.poly, &t.poly);
            } else {
                out.push(t);
            }
        }
        Self::finish(out)
    }

    /// Like [`Self::new`] but rejects repeated frequencies instead of merging them.
    pub fn from_distinct(terms: impl IntoIterator<Item = ExpTerm<C>>) -> Result<Self, Error> {
        let mut out: Vec<ExpTerm<C>> = Vec::new();
        for t in terms {
            if out.iter().any(|e| e.freq.same_frequency(&t.freq)) {
                return Err(Error::RepeatedFrequency);
            }
            out.push(t);
        }
        Ok(Self::finish(out))
    }

    fn finish(mut out: Vec<ExpTerm<C>>) -> Self {
        for t in out.iter_mut() {
            t.trim();
        }
        out.retain(|t| !t.is_zero());
        out.sort_by(|a, b| a.freq.sort_cmp(&b.freq));
        Self { terms: out }
    }

    pub fn terms(&self) -> &[ExpTerm<C>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.iter().filter_map(|t| t.degree()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    /// Multiplies by `e^{shift·t}`.
    pub fn shift(&self, shift: &C) -> Self {
        Self::new(self.terms.iter().map(|t| ExpTerm { freq: t.freq.add(shift), poly: t.poly.clone() }))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.terms.iter().map(|t| ExpTerm::new(t.freq.clone(), t.poly.iter().map(|x| x.mul(c)).collect())))
    }

    pub fn to_c64(&self) -> ExpPoly<Complex64> {
        ExpPoly::new(
            self.terms
                .iter()
                .map(|t| ExpTerm::new(t.freq.to_c64(), t.poly.iter().map(|c| c.to_c64()).collect())),
        )
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|term| term.eval_poly(t) * (term.freq.to_c64() * t).exp()).sum()
    }

    /// Overflow-safe evaluation: factors out the largest exponential before summing.
    pub fn eval_log(&self, t: f64) -> LogValue {
        if self.terms.is_empty() {
            return LogValue { ln_abs: f64::NEG_INFINITY, arg: 0.0 };
        }
        let m = self
            .terms
            .iter()
            .map(|term| term.freq.to_c64().re * t)
            .fold(f64::NEG_INFINITY, f64::max);
        let s: Complex64 = self
            .terms
            .iter()
            .map(|term| {
                let z = term.freq.to_c64() * t - m;
                term.eval_poly(t) * z.exp()
            })
            .sum();
        LogValue { ln_abs: m + s.norm().ln(), arg: s.arg() }
    }

    /// Algebraic decision for sums with purely imaginary, distinct frequencies.
    pub fn classify_oscillatory(&self) -> Result<Oscillation<C>, Error> {
        if let Some(t) = self.terms.iter().find(|t| !t.freq.re_is_zero()) {
            return Err(Error::Precondition(alloc::format!(
                "frequency {:?} is not purely imaginary",
                t.freq
            )));
        }
        for (i, a) in self.terms.iter().enumerate() {
            if self.terms[i + 1..].iter().any(|b| a.freq.same_frequency(&b.freq)) {
                return Err(Error::RepeatedFrequency);
            }
        }
        if self.terms.is_empty() {
            return Ok(Oscillation::IdenticallyZero);
        }
        if let Some(t) = self.terms.iter().find(|t| t.degree().unwrap_or(0) > 0) {
            return Ok(Oscillation::Unbounded { witness: t.clone() });
        }
        let mags: Vec<f64> = self.terms.iter().map(|t| t.poly[0].to_c64().norm()).collect();
        let upper = mags.iter().sum();
        let lower = mags.iter().map(|m| m * m).sum::<f64>().sqrt();
        let best = mags
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap();
        Ok(Oscillation::Bounded { witness: self.terms[best].clone(), lower, upper })
    }

    /// Largest real part of a frequency and the oscillatory sum sitting at it.
    pub fn dominant_growth(&self) -> Growth<C> {
        let Some(top) = self
            .terms
            .iter()
            .map(|t| t.freq.re_part())
            .reduce(|a, b| if b.cmp_re(&a) == Ordering::Greater { b } else { a })
        else {
            return Growth { rate: None, reduced: Self::zero() };
        };
        let reduced = Self::new(
            self.terms
                .iter()
                .filter(|t| t.freq.cmp_re(&top) == Ordering::Equal)
                .map(|t| ExpTerm { freq: t.freq.sub(&t.freq.re_part()), poly: t.poly.clone() }),
        );
        Growth { rate: Some(top), reduced }
    }

    /// `max_{t ∈ grid} |f(t)|`.
    pub fn numeric_limsup_probe(&self, grid: &[f64]) -> f64 {
        grid.iter().map(|&t| self.eval(t).norm()).fold(0.0, f64::max)
    }
}

/// Convenience for building exact frequencies `re + i·im`.
pub fn exact_freq(re: Rat, im: Rat) -> GaussRat {
    GaussRat::new(re, im)
}

/// Real value of an exact rate.
pub fn rate_to_f64(r: &GaussRat) -> f64 {
    rat_to_f64(&r.re)
}

/// `n` log-spaced points on `[t_min, t_max]`.
pub fn log_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![t_min],
        _ => {
            let (a, b) = (t_min.ln(), t_max.ln());
            (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

/// `n` evenly spaced points on `[t_min, t_max]`.
pub fn linear_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![t_min],
        _ => (0..n).map(|k| t_min + (t_max - t_min) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Sign of a rational, as `-1`, `0` or `1`.
pub fn signum(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use core::f64::consts::{PI, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn term(freq: Complex64, poly: &[Complex64]) -> ExpTerm<Complex64> {
        ExpTerm::new(freq, poly.to_vec())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ExpPoly::<Complex64>::zero().eval(3.0), c(0.0, 0.0));
        let one = ExpPoly::new([term(c(0.0, 0.0), &[c(1.0, 0.0)])]);
        assert_eq!(one.eval(7.5), c(1.0, 0.0));
        let te = ExpPoly::new([term(c(0.0, 1.0), &[c(0.0, 0.0), c(1.0, 0.0)])]);
        let v = te.eval(PI);
        assert!((v - c(-PI, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn merges_equal_frequencies_and_drops_zeros() {
        let p = ExpPoly::new([
            term(c(0.0, 1.0), &[c(1.0, 0.0)]),
            term(c(0.0, 1.0), &[c(-1.0, 0.0)]),
            term(c(0.0, 2.0), &[c(2.0, 0.0), c(0.0, 0.0)]),
        ]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.terms()[0].poly, vec![c(2.0, 0.0)]);
        assert!(ExpPoly::from_distinct([term(c(0.0, 1.0), &[c(1.0, 0.0)]), term(c(0.0, 1.0), &[c(1.0, 0.0)])]).is_err());
    }

    #[test]
    fn classify_examples() {
        let p = ExpPoly::new([term(c(0.0, 1.0), &[c(0.0, 0.0), c(1.0, 0.0)])]);
        assert!(matches!(p.classify_oscillatory().unwrap(), Oscillation::Unbounded { .. }));
        let q = ExpPoly::new([term(c(0.0, 1.0), &[c(2.0, 0.0)]), term(c(0.0, SQRT_2), &[c(-3.0, 0.0)])]);
        match q.classify_oscillatory().unwrap() {
            Oscillation::Bounded { lower, upper, .. } => {
                assert!(lower > 0.0);
                assert!((upper - 5.0).abs() < 1e-15);
            }
            o => panic!("{o:?}"),
        }
        assert_eq!(ExpPoly::<Complex64>::zero().classify_oscillatory().unwrap(), Oscillation::IdenticallyZero);
        let growing = ExpPoly::new([term(c(1.0, 1.0), &[c(1.0, 0.0)])]);
        assert!(growing.classify_oscillatory().is_err());
    }

    #[test]
    fn classify_is_phase_invariant() {
        let q = ExpPoly::new([term(c(0.0, 1.0), &[c(2.0, 0.0)]), term(c(0.0, SQRT_2), &[c(-3.0, 0.0), c(0.5, 0.0)])]);
        let a = q.classify_oscillatory().unwrap();
        let b = q.shift(&c(0.0, 0.7)).classify_oscillatory().unwrap();
        assert_eq!(core::mem::discriminant(&a), core::mem::discriminant(&b));
    }

    #[test]
    fn dominant_growth_examples() {
        let p = ExpPoly::new([term(c(1.0, 0.0), &[c(1.0, 0.0)]), term(c(0.5, 0.0), &[c(7.0, 0.0)])]);
        let g = p.dominant_growth();
        assert_eq!(g.rate_f64(), 1.0);
        assert_eq!(g.reduced.len(), 1);
        let q = ExpPoly::new([term(c(0.0, 0.0), &[c(5.0, 0.0)])]);
        let g = q.dominant_growth();
        assert_eq!(g.rate_f64(), 0.0);
        assert_eq!(g.reduced, q);
        assert_eq!(ExpPoly::<Complex64>::zero().dominant_growth().rate_f64(), f64::NEG_INFINITY);
    }

    #[test]
    fn exact_dominant_growth() {
        let f = |re: i64, im: i64| GaussRat::new(rat(re), rat(im));
        let p = ExpPoly::new([
            ExpTerm::new(f(2, 1), vec![f(1, 0)]),
            ExpTerm::new(f(2, -3), vec![f(0, 1), f(1, 0)]),
            ExpTerm::new(f(1, 0), vec![f(9, 0)]),
        ]);
        let g = p.dominant_growth();
        assert_eq!(g.rate, Some(f(2, 0)));
        assert_eq!(g.reduced.len(), 2);
        assert!(matches!(g.reduced.classify_oscillatory().unwrap(), Oscillation::Unbounded { .. }));
        let half = GaussRat::real(ratio(1, 2));
        assert_eq!(p.scale(&half).scale(&GaussRat::real(rat(2))), p);
    }

    #[test]
    fn limsup_probe_examples() {
        let one = ExpPoly::new([term(c(0.0, 0.0), &[c(1.0, 0.0)])]);
        assert_eq!(one.numeric_limsup_probe(&linear_grid(0.0, 10.0, 11)), 1.0);
        let te = ExpPoly::new([term(c(0.0, 1.0), &[c(0.0, 0.0), c(1.0, 0.0)])]);
        let grid = linear_grid(0.0, 1000.0, 100_001);
        assert!(te.numeric_limsup_probe(&grid) >= 1000.0 * (1.0 - 1e-9));
        let q = ExpPoly::new([term(c(0.0, 1.0), &[c(2.0, 0.0)]), term(c(0.0, SQRT_2), &[c(-3.0, 0.0)])]);
        for n in [10, 1000, 100_000] {
            assert!(q.numeric_limsup_probe(&linear_grid(0.0, 1e4, n)) <= 5.0 + 1e-12);
        }
    }

    #[test]
    fn eval_log_matches_eval_and_survives_overflow() {
        let p = ExpPoly::new([term(c(1.0, 2.0), &[c(1.0, 0.0), c(0.5, 0.0)]), term(c(-0.5, 0.0), &[c(3.0, 0.0)])]);
        let v = p.eval(2.0);
        let l = p.eval_log(2.0);
        assert!((l.to_c64() - v).norm() < 1e-12 * v.norm());
        let big = p.eval_log(1000.0);
        assert!(big.ln_abs.is_finite());
        assert!((big.ln_abs - (1000.0 + (1.0f64 + 500.0).ln())).abs() < 1e-9);
    }
}
