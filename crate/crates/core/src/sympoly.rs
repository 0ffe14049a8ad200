//! Exact symbolic differentiation of the alternating sum in the spectral variable.
//!
//! Terms have the shape
//!
//! ```text
//!   N(λ, t) / Π_j ⟨γ_j, λ⟩^{k_j} · e^{i⟨s·λ, t·H₀⟩}
//! ```
//!
//! where `N` is a polynomial over `ℚ(i)` in the ambient coordinates of `λ` and the ray
//! parameter `t`, the `γ_j` are the positive roots that do *not* vanish at the point
//! `λ₀` of interest, and the phase is kept structurally as the Weyl element `s` and the
//! fixed probe direction `H₀`. Constant-coefficient directional derivatives keep this
//! shape closed, so `∂(π′) = ∂(β₁)⋯∂(β_r)` can be applied exactly and the result
//! evaluated at `λ₀` without ever dividing by zero.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::expasym::{ExpPoly, ExpTerm};
use crate::rational::{dot, dot_gauss, rat, GaussRat, Rat};
use crate::rootsys::RootSystem;
use crate::weyl::WeylGroup;

/// Sparse polynomial over `ℚ(i)`; exponent vectors index variables `0..nvars`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, GaussRat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussRat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, GaussRat::one());
        p
    }

    /// The linear form `Σ_j a_j x_j` over the first `a.len()` variables.
    pub fn linear(nvars: usize, a: &[Rat]) -> Self {
        let mut p = Self::zero(nvars);
        for (j, aj) in a.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[j] = 1;
            p.add_term(e, GaussRat::real(aj.clone()));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussRat)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<u32>, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.terms.insert(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Multiplies by `x_i`.
    pub fn mul_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i] += 1;
            out.terms.insert(e, c.clone());
        }
        out
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.add_term(d, c.scale(&rat(e[i] as i64)));
            }
        }
        out
    }

    /// `Σ_j dir_j ∂/∂x_j` over the first `dir.len()` variables.
    pub fn directional(&self, dir: &[Rat]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (j, dj) in dir.iter().enumerate() {
            if !dj.is_zero() {
                out = out.add(&self.partial(j).scale(&GaussRat::real(dj.clone())));
            }
        }
        out
    }

    /// Substitutes `x_j = point[j]` for the first `point.len()` variables and returns the
    /// coefficients of the remaining variable `x_{point.len()}` (the ray parameter `t`).
    pub fn eval_to_univariate(&self, point: &[GaussRat]) -> Vec<GaussRat> {
        let tvar = point.len();
        let mut out: Vec<GaussRat> = Vec::new();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (j, x) in point.iter().enumerate() {
                if e[j] > 0 {
                    v = &v * &x.pow(e[j]);
                }
            }
            let k = if tvar < self.nvars { e[tvar] as usize } else { 0 };
            if out.len() <= k {
                out.resize(k + 1, GaussRat::zero());
            }
            out[k] += &v;
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Value of a polynomial without the `t` variable (or with `t` ignored at degree 0).
    pub fn constant_term(&self) -> GaussRat {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(GaussRat::zero)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (j, &k) in e.iter().enumerate() {
                let name = if j + 1 == self.nvars { String::from("t") } else { alloc::format!("l{j}") };
                match k {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

/// One term `N / Π γ_j^{k_j} · e^{i⟨sλ, tH₀⟩}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatExpTerm {
    pub numerator: MPoly,
    /// Power of each denominator factor, indexed like [`DiffContext::denominators`].
    pub denominator: Vec<u32>,
    pub weyl: usize,
}

/// Sum of [`RatExpTerm`]s, kept merged by `(s, denominator powers)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TermSum {
    terms: BTreeMap<(usize, Vec<u32>), MPoly>,
}

impl TermSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, term: RatExpTerm) {
        if term.numerator.is_zero() {
            return;
        }
        let key = (term.weyl, term.denominator);
        match self.terms.get_mut(&key) {
            Some(p) => {
                *p = p.add(&term.numerator);
                if p.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, term.numerator);
            }
        }
    }

    pub fn extend(&mut self, other: TermSum) {
        for t in other.into_terms() {
            self.push(t);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = RatExpTerm> + '_ {
        self.terms.iter().map(|((w, d), n)| RatExpTerm { numerator: n.clone(), denominator: d.clone(), weyl: *w })
    }

    pub fn into_terms(self) -> impl Iterator<Item = RatExpTerm> {
        self.terms.into_iter().map(|((w, d), n)| RatExpTerm { numerator: n, denominator: d, weyl: w })
    }
}

/// Canonical string form, one term per line, for golden comparisons.
impl fmt::Display for TermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((w, d), n) in &self.terms {
            writeln!(f, "s{w} den{d:?}: {n}")?;
        }
        Ok(())
    }
}

/// Fixed data shared by every term: the denominator roots and the probe direction.
#[derive(Debug, Clone)]
pub struct DiffContext<'a> {
    pub rs: &'a RootSystem,
    pub weyl: &'a WeylGroup,
    /// Denominator root vectors (the `π″` factors).
    pub denominators: Vec<Vec<Rat>>,
    pub probe: Vec<Rat>,
}

impl<'a> DiffContext<'a> {
    pub fn new(rs: &'a RootSystem, weyl: &'a WeylGroup, denominator_roots: &[usize], probe: Vec<Rat>) -> Self {
        let denominators = denominator_roots.iter().map(|&i| rs.positive_roots()[i].vector.clone()).collect();
        Self { rs, weyl, denominators, probe }
    }

    /// Number of polynomial variables: the ambient `λ` coordinates plus `t`.
    pub fn nvars(&self) -> usize {
        self.rs.dim() + 1
    }

    pub fn t_var(&self) -> usize {
        self.rs.dim()
    }

    /// `Σ_s ε(s) / π″(λ) · e^{i⟨sλ, tH₀⟩}`, the starting point of the regularization.
    pub fn alternating_sum(&self) -> TermSum {
        let mut sum = TermSum::new();
        for s in 0..self.weyl.order() {
            sum.push(RatExpTerm {
                numerator: MPoly::constant(self.nvars(), GaussRat::real(rat(self.weyl.sign(s) as i64))),
                denominator: vec![1; self.denominators.len()],
                weyl: s,
            });
        }
        sum
    }

    /// `∂(β)` of one term by the Leibniz rule: numerator, each denominator power, and
    /// the phase, whose derivative is `i·t·⟨sβ, H₀⟩`.
    pub fn directional_derivative(&self, term: &RatExpTerm, beta: &[Rat]) -> TermSum {
        let mut out = TermSum::new();
        out.push(RatExpTerm {
            numerator: term.numerator.directional(beta),
            denominator: term.denominator.clone(),
            weyl: term.weyl,
        });
        for (j, gamma) in self.denominators.iter().enumerate() {
            let k = term.denominator[j];
            if k == 0 {
                continue;
            }
            let c = -(rat(k as i64) * dot(gamma, beta));
            if c.is_zero() {
                continue;
            }
            let mut den = term.denominator.clone();
            den[j] += 1;
            out.push(RatExpTerm { numerator: term.numerator.scale(&GaussRat::real(c)), denominator: den, weyl: term.weyl });
        }
        let s_beta = self.weyl.apply(term.weyl, beta);
        let phase = dot(&s_beta, &self.probe);
        if !phase.is_zero() {
            out.push(RatExpTerm {
                numerator: term.numerator.mul_var(self.t_var()).scale(&GaussRat::imag(phase)),
                denominator: term.denominator.clone(),
                weyl: term.weyl,
            });
        }
        out
    }

    pub fn directional_derivative_sum(&self, sum: &TermSum, beta: &[Rat]) -> TermSum {
        let mut out = TermSum::new();
        for t in sum.iter() {
            out.extend(self.directional_derivative(&t, beta));
        }
        out
    }

    /// `∂(β₁)⋯∂(β_r)` applied in the given order.
    pub fn apply_pi_prime(&self, sum: &TermSum, betas: &[Vec<Rat>]) -> TermSum {
        betas.iter().fold(sum.clone(), |acc, b| self.directional_derivative_sum(&acc, b))
    }

    /// Substitutes `λ = λ₀` and returns, per Weyl element, the polynomial `P_s(t)`.
    pub fn evaluate_per_element(&self, sum: &TermSum, lambda0: &[GaussRat]) -> Result<Vec<Vec<GaussRat>>, Error> {
        let den_vals: Vec<GaussRat> = self.denominators.iter().map(|g| dot_gauss(lambda0, g)).collect();
        if den_vals.iter().any(|v| v.is_zero()) {
            return Err(Error::Invariant(String::from("denominator root vanishes at lambda0")));
        }
        let mut per_s: Vec<Vec<GaussRat>> = vec![Vec::new(); self.weyl.order()];
        for t in sum.iter() {
            let mut den = GaussRat::one();
            for (v, &k) in den_vals.iter().zip(&t.denominator) {
                den = &den * &v.pow(k);
            }
            let inv = den.inv().expect("checked nonzero");
            let poly: Vec<GaussRat> = t.numerator.eval_to_univariate(lambda0).iter().map(|c| c * &inv).collect();
            per_s[t.weyl] = crate::expasym::poly_add(&per_s[t.weyl], &poly);
        }
        Ok(per_s)
    }

    /// The exponent `i⟨sλ₀, H₀⟩ = −⟨sη₀, H₀⟩ + i⟨sξ₀, H₀⟩` of the `s`-term.
    pub fn frequency(&self, s: usize, xi0: &[Rat], eta0: &[Rat]) -> GaussRat {
        let re = -dot(&self.weyl.apply(s, eta0), &self.probe);
        let im = dot(&self.weyl.apply(s, xi0), &self.probe);
        GaussRat::new(re, im)
    }

    /// Groups `Σ_s P_s(t) e^{i⟨sλ₀, tH₀⟩}` by frequency.
    pub fn evaluate_at(&self, sum: &TermSum, xi0: &[Rat], eta0: &[Rat]) -> Result<ExpPoly<GaussRat>, Error> {
        let lambda0 = complexify(xi0, eta0);
        let per_s = self.evaluate_per_element(sum, &lambda0)?;
        Ok(ExpPoly::new(
            per_s.into_iter().enumerate().map(|(s, p)| ExpTerm::new(self.frequency(s, xi0, eta0), p)),
        ))
    }
}

/// `ξ + iη` as a Gaussian-rational vector.
pub fn complexify(xi: &[Rat], eta: &[Rat]) -> Vec<GaussRat> {
    xi.iter().zip(eta).map(|(a, b)| GaussRat::new(a.clone(), b.clone())).collect()
}

/// Permanent of a square matrix, by expansion over permutations (`r ≤ 6` here).
pub fn permanent(m: &[Vec<Rat>]) -> Rat {
    fn go(m: &[Vec<Rat>], row: usize, used: &mut Vec<bool>) -> Rat {
        if row == m.len() {
            return Rat::one();
        }
        let mut acc = Rat::zero();
        for col in 0..m.len() {
            if !used[col] && !m[row][col].is_zero() {
                used[col] = true;
                acc += &m[row][col] * go(m, row + 1, used);
                used[col] = false;
            }
        }
        acc
    }
    go(m, 0, &mut vec![false; m.len()])
}

pub fn gram_of(vectors: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    vectors.iter().map(|a| vectors.iter().map(|b| dot(a, b)).collect()).collect()
}

/// `c = ∂(π′)π′`, the permanent of the Gram matrix `(⟨β_i, β_j⟩)`.
pub fn c_constant(betas: &[Vec<Rat>]) -> Rat {
    permanent(&gram_of(betas))
}

/// `c` computed by actually differentiating the polynomial `π′(λ) = Π⟨β_j, λ⟩`.
pub fn c_constant_symbolic(betas: &[Vec<Rat>], dim: usize) -> Rat {
    let nvars = dim;
    let mut p = MPoly::constant(nvars, GaussRat::one());
    for b in betas {
        p = p.mul(&MPoly::linear(nvars, b));
    }
    for b in betas {
        p = p.directional(b);
    }
    let c = p.constant_term();
    debug_assert!(c.im.is_zero());
    c.re
}

/// `x₁₂² + x₁₁x₂₂` for a 2×2 Gram matrix.
pub fn c_formula_r2(x: &[Vec<Rat>]) -> Rat {
    &x[0][1] * &x[0][1] + &x[0][0] * &x[1][1]
}

/// `x₁₁x₂₃² + x₂₂x₁₃² + x₃₃x₁₂² + x₁₁x₂₂x₃₃ + 2x₁₂x₁₃x₂₃` for a 3×3 Gram matrix.
pub fn c_formula_r3(x: &[Vec<Rat>]) -> Rat {
    &x[0][0] * &x[1][2] * &x[1][2]
        + &x[1][1] * &x[0][2] * &x[0][2]
        + &x[2][2] * &x[0][1] * &x[0][1]
        + &x[0][0] * &x[1][1] * &x[2][2]
        + rat(2) * &x[0][1] * &x[0][2] * &x[1][2]
}
