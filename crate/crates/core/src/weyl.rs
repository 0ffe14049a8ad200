//! Weyl group enumeration, stabilizers, and the normalization of spectral parameters.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::{dot, rat, to_f64_vec, GaussRat, Rat};
use crate::rootsys::RootSystem;
use crate::spherical::SpectralParameter;

pub type Matrix = Vec<Vec<Rat>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Matrix,
    /// Reduced word: `s = s_{w[0]} s_{w[1]} ⋯`.
    pub word: Vec<usize>,
    pub sign: i8,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.iter().map(|row| dot(row, v)).collect()
    }

    pub fn apply_gauss(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        self.matrix.iter().map(|row| crate::rational::dot_gauss(v, row)).collect()
    }
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn reflection_matrix(alpha: &[Rat]) -> Matrix {
    let n = alpha.len();
    let norm = dot(alpha, alpha);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j { Rat::one() } else { Rat::zero() };
                    d - rat(2) * &alpha[i] * &alpha[j] / &norm
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
fn determinant(m: &Matrix) -> Rat {
    // Exact elimination; matrices here are at most 4×4.
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            let f = &a[r][col] / &piv;
            if !f.is_zero() {
                for c in col..n {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
            }
        }
    }
    det
}

/// The Weyl group of a root system, with multiplication and inverse tables.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    matrices_f64: Vec<Vec<Vec<f64>>>,
    lookup: BTreeMap<Matrix, usize>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    simple: Vec<usize>,
}

impl WeylGroup {
    /// Closure of the simple reflections, in breadth-first (length) order; identity first.
    pub fn generate(rs: &RootSystem) -> Self {
        let gens: Vec<Matrix> = rs.simple_roots().iter().map(|a| reflection_matrix(a)).collect();
        let id = identity(rs.dim());
        let mut elements = vec![WeylElement { matrix: id.clone(), word: Vec::new(), sign: 1 }];
        let mut lookup = BTreeMap::new();
        lookup.insert(id, 0usize);
        let mut head = 0;
        while head < elements.len() {
            for (i, g) in gens.iter().enumerate() {
                let m = mat_mul(&elements[head].matrix, g);
                if !lookup.contains_key(&m) {
                    let mut word = elements[head].word.clone();
                    word.push(i);
                    let sign = if word.len() % 2 == 0 { 1 } else { -1 };
                    lookup.insert(m.clone(), elements.len());
                    elements.push(WeylElement { matrix: m, word, sign });
                }
            }
            head += 1;
        }
        let n = elements.len();
        let mul: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| lookup[&mat_mul(&elements[a].matrix, &elements[b].matrix)])
                    .collect()
            })
            .collect();
        let inv = (0..n).map(|a| (0..n).find(|&b| mul[a][b] == 0).unwrap()).collect();
        let simple = (0..gens.len()).map(|i| lookup[&gens[i]]).collect();
        let matrices_f64 = elements
            .iter()
            .map(|e| e.matrix.iter().map(|row| to_f64_vec(row)).collect())
            .collect();
        Self { elements, matrices_f64, lookup, mul, inv, simple }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.elements[i].sign
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Index of the simple reflection `s_{α_i}`.
    pub fn simple_reflection(&self, i: usize) -> usize {
        self.simple[i]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn from_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &i| self.mul(acc, self.simple[i]))
    }

    pub fn apply(&self, s: usize, v: &[Rat]) -> Vec<Rat> {
        self.elements[s].apply(v)
    }

    pub fn apply_f64(&self, s: usize, v: &[f64]) -> Vec<f64> {
        self.matrices_f64[s].iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply_gauss(&self, s: usize, v: &[GaussRat]) -> Vec<GaussRat> {
        self.elements[s].apply_gauss(v)
    }

    /// All `s` with `s·v = v`.
    pub fn stabilizer(&self, v: &[Rat]) -> Vec<usize> {
        (0..self.order()).filter(|&s| self.apply(s, v) == v).collect()
    }

    /// Elements fixing every vector in `vs` (for complex `λ₀`, its real and imaginary parts).
    pub fn common_stabilizer(&self, vs: &[&[Rat]]) -> Vec<usize> {
        (0..self.order()).filter(|&s| vs.iter().all(|v| self.apply(s, v) == *v)).collect()
    }

    /// Subgroup generated by `gens` (closure under multiplication), sorted by index.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut list = vec![0usize];
        let mut head = 0;
        while head < list.len() {
            for &g in gens {
                let p = self.mul(list[head], g);
                if !inside[p] {
                    inside[p] = true;
                    list.push(p);
                }
            }
            head += 1;
        }
        list.sort_unstable();
        list
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        set.contains(&0) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// Total order used for tie-breaking: shorter reduced word first, then lower word.
    pub fn word_cmp(&self, a: usize, b: usize) -> Ordering {
        let (wa, wb) = (&self.elements[a].word, &self.elements[b].word);
        wa.len().cmp(&wb.len()).then_with(|| wa.cmp(wb))
    }

    /// Representatives of the left cosets `sU` inside `v_group`, each the word-minimal
    /// element of its coset, sorted by that same order.
    pub fn coset_reps(&self, v_group: &[usize], u_group: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut sorted = v_group.to_vec();
        sorted.sort_by(|&a, &b| self.word_cmp(a, b));
        let mut reps = Vec::new();
        for s in sorted {
            if seen[s] {
                continue;
            }
            reps.push(s);
            for &u in u_group {
                seen[self.mul(s, u)] = true;
            }
        }
        reps
    }
}

/// `(s, s·η)` with `−s·η` in the closed dominant chamber.
pub fn dominant_representative(rs: &RootSystem, w: &WeylGroup, eta: &[Rat]) -> (usize, Vec<Rat>) {
    for s in 0..w.order() {
        let img = w.apply(s, eta);
        let neg: Vec<Rat> = img.iter().map(|x| -x).collect();
        if rs.is_dominant(&neg) {
            return (s, img);
        }
    }
    unreachable!("every Weyl orbit meets the closed dominant chamber")
}

/// `(s, s·ξ)` with `s·ξ` lexicographically maximal over the orbit `{v·ξ : v ∈ group}`.
///
/// Ties (several `s` with the same image) go to the shortest, then lowest, reduced word.
pub fn maximize_xi_over(rs: &RootSystem, w: &WeylGroup, xi: &[Rat], group: &[usize]) -> (usize, Vec<Rat>) {
    let mut best = group[0];
    let mut best_img = w.apply(best, xi);
    for &s in &group[1..] {
        let img = w.apply(s, xi);
        match rs.lex_compare(&img, &best_img) {
            Ordering::Greater => {
                best = s;
                best_img = img;
            }
            Ordering::Equal if w.word_cmp(s, best) == Ordering::Less => best = s,
            _ => {}
        }
    }
    (best, best_img)
}

/// `α(A_ξ) ≥ 0` for every positive `α` with `α(A_η) = 0`.
pub fn xi_dominant_on_eta_walls(rs: &RootSystem, xi: &[Rat], eta: &[Rat]) -> bool {
    rs.positive_roots()
        .iter()
        .filter(|r| dot(&r.vector, eta).is_zero())
        .all(|r| !dot(&r.vector, xi).is_negative())
}

/// Output of the two-step normalization: `λ₀ = s·λ` with `−A_{η₀}` dominant and `ξ₀`
/// lexicographically maximal over `V = Stab(η₀)`.
#[derive(Debug, Clone)]
pub struct Normalization {
    pub lambda0: SpectralParameter,
    /// `s_eta` moves `η` into `−closure(𝔞⁺)`.
    pub s_eta: usize,
    /// `s_xi ∈ V` maximizes the real part afterwards.
    pub s_xi: usize,
    /// `s = s_xi · s_eta`.
    pub total: usize,
    pub pair: StabilizerPair,
}

/// `U = Stab(λ₀) ⊆ V = Stab(η₀)` with representatives of `V/U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerPair {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub coset_reps: Vec<usize>,
}

impl StabilizerPair {
    pub fn new(w: &WeylGroup, lambda0: &SpectralParameter) -> Self {
        let v = w.stabilizer(&lambda0.eta);
        let u = w.common_stabilizer(&[&lambda0.xi, &lambda0.eta]);
        let coset_reps = w.coset_reps(&v, &u);
        Self { u, v, coset_reps }
    }

    pub fn check(&self, w: &WeylGroup, lambda0: &SpectralParameter) -> bool {
        self.u.iter().all(|s| self.v.contains(s))
            && self.v.len() == self.u.len() * self.coset_reps.len()
            && self.u.iter().all(|&s| w.apply(s, &lambda0.xi) == lambda0.xi && w.apply(s, &lambda0.eta) == lambda0.eta)
            && w.is_subgroup(&self.u)
            && w.is_subgroup(&self.v)
    }
}

pub fn normalize(rs: &RootSystem, w: &WeylGroup, lambda: &SpectralParameter) -> Result<Normalization, Error> {
    let (s_eta, eta0) = dominant_representative(rs, w, &lambda.eta);
    let xi1 = w.apply(s_eta, &lambda.xi);
    let v = w.stabilizer(&eta0);
    let (s_xi, xi0) = maximize_xi_over(rs, w, &xi1, &v);
    if !xi_dominant_on_eta_walls(rs, &xi0, &eta0) {
        return Err(Error::Invariant(String::from("lex-maximal xi0 violates dominance on the eta0 walls")));
    }
    let lambda0 = SpectralParameter::new(xi0, eta0);
    let pair = StabilizerPair::new(w, &lambda0);
    Ok(Normalization { lambda0, s_eta, s_xi, total: w.mul(s_xi, s_eta), pair })
}

/// Whether `λ₀` is already in normal form.
pub fn is_normalized(rs: &RootSystem, w: &WeylGroup, lambda0: &SpectralParameter) -> bool {
    let neg_eta: Vec<Rat> = lambda0.eta.iter().map(|x| -x).collect();
    if !rs.is_dominant(&neg_eta) {
        return false;
    }
    let v = w.stabilizer(&lambda0.eta);
    v.iter().all(|&s| rs.lex_compare(&lambda0.xi, &w.apply(s, &lambda0.xi)) != Ordering::Less)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Report {
    pub holds: bool,
    /// Simple roots vanishing at `A_{λ₀}` (0-based).
    pub generators: Vec<usize>,
    /// Brute-force `U`.
    pub u: Vec<usize>,
    /// Subgroup generated by the vanishing simple reflections.
    pub u_generated: Vec<usize>,
}

/// Compares the brute-force stabilizer of `λ₀` with the subgroup generated by the simple
/// reflections whose roots vanish at `A_{λ₀}`.
pub fn verify_lemma2(rs: &RootSystem, w: &WeylGroup, lambda0: &SpectralParameter) -> Result<Lemma2Report, Error> {
    if !is_normalized(rs, w, lambda0) {
        return Err(Error::Precondition(String::from(
            "lambda0 must be normalized (-A_eta0 dominant, xi0 lex-maximal over Stab(eta0))",
        )));
    }
    let generators = lambda0.vanishing_simple(rs);
    let gens: Vec<usize> = generators.iter().map(|&i| w.simple_reflection(i)).collect();
    let u_generated = w.generated_subgroup(&gens);
    let u = w.common_stabilizer(&[&lambda0.xi, &lambda0.eta]);
    Ok(Lemma2Report { holds: u == u_generated, generators, u, u_generated })
}

/// Writes a positive root vanishing at `A_{λ₀}` as `α = s·α_p` with `s` a product of
/// vanishing simple reflections, by induction on the height of `α`.
///
/// Returns `(s, p)`.
pub fn decompose_root(
    rs: &RootSystem,
    w: &WeylGroup,
    root: usize,
    lambda0: &SpectralParameter,
) -> Result<(usize, usize), Error> {
    if !is_normalized(rs, w, lambda0) {
        return Err(Error::Precondition(String::from("lambda0 must be normalized")));
    }
    let alpha = &rs.positive_roots()[root];
    if !lambda0.vanishes_on(&alpha.vector) {
        return Err(Error::Precondition(String::from("root does not vanish at A_lambda0")));
    }
    let vanishing = lambda0.vanishing_simple(rs);
    let mut word = Vec::new();
    let mut current = alpha.clone();
    while !current.is_simple() {
        let k = (0..rs.rank())
            .find(|&k| current.coeffs[k] > 0 && dot(&current.vector, &rs.simple_roots()[k]).is_positive())
            .ok_or_else(|| Error::Invariant(String::from("no simple root with positive pairing in the support")))?;
        if !vanishing.contains(&k) {
            return Err(Error::Invariant(String::from("support root does not vanish at A_lambda0")));
        }
        let next = crate::rootsys::reflect(&current.vector, &rs.simple_roots()[k]);
        let idx = rs
            .positive_index(&next)
            .ok_or_else(|| Error::Invariant(String::from("simple reflection left the positive roots")))?;
        word.push(k);
        current = rs.positive_roots()[idx].clone();
    }
    let p = current.coeffs.iter().position(|&c| c == 1).unwrap();
    let s = w.from_word(&word);
    if w.apply(s, &rs.simple_roots()[p]) != alpha.vector {
        return Err(Error::Invariant(String::from("decomposition replay failed")));
    }
    Ok((s, p))
}

/// The sign `ε′(σ)` with `σπ′ = ε′(σ)π′`, where `π′` is the product of the positive roots
/// listed in `factors`. Fails if `σ` does not permute the factors up to sign.
pub fn sign_on_pi_prime(rs: &RootSystem, w: &WeylGroup, sigma: usize, factors: &[usize]) -> Result<i8, Error> {
    let mut sign = 1i8;
    let mut hit = vec![false; factors.len()];
    for &f in factors {
        let img = w.apply(sigma, &rs.positive_roots()[f].vector);
        let neg: Vec<Rat> = img.iter().map(|x| -x).collect();
        let (pos, flip) = match factors.iter().position(|&g| rs.positive_roots()[g].vector == img) {
            Some(p) => (p, false),
            None => match factors.iter().position(|&g| rs.positive_roots()[g].vector == neg) {
                Some(p) => (p, true),
                None => return Err(Error::Precondition(String::from("sigma does not permute the pi' factors"))),
            },
        };
        if hit[pos] {
            return Err(Error::Precondition(String::from("sigma does not permute the pi' factors")));
        }
        hit[pos] = true;
        if flip {
            sign = -sign;
        }
    }
    Ok(sign)
}

/// A dominant point with `⟨α_i, v⟩ = 0` exactly for `i ∈ zero_set` and `1` otherwise.
pub fn face_point(rs: &RootSystem, zero_set: &[usize]) -> Vec<Rat> {
    let vals: Vec<Rat> = (0..rs.rank()).map(|i| if zero_set.contains(&i) { Rat::zero() } else { Rat::one() }).collect();
    rs.from_pairings(&vals).expect("rank-sized")
}

/// All subsets of the simple roots, as sorted index lists.
pub fn all_faces(rank: usize) -> Vec<Vec<usize>> {
    (0..1usize << rank).map(|m| (0..rank).filter(|i| m & (1 << i) != 0).collect()).collect()
}
