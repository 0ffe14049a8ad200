//! Root systems in exact rational coordinates.
//!
//! Every system is realized in its standard orthogonal (Bourbaki) coordinates, and the
//! Euclidean inner product of those coordinates stands in for the Killing form. The two
//! differ by a positive factor, recorded as [`RootSystem::killing_scale`].
//!
//! Covectors on `𝔞` are identified with vectors through this inner product, so the dual
//! vector `A_λ` of a covector `λ` is simply its coordinate vector.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::rational::{dot, dot_f64, rat, scale, solve, sub_vec, to_f64_vec, GaussRat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A1,
    A2,
    A3,
    B2,
    G2,
}

impl CartanType {
    pub const ALL: [CartanType; 5] = [Self::A1, Self::A2, Self::A3, Self::B2, Self::G2];

    pub fn letter(self) -> char {
        match self {
            Self::A1 | Self::A2 | Self::A3 => 'A',
            Self::B2 => 'B',
            Self::G2 => 'G',
        }
    }

    pub fn rank(self) -> usize {
        match self {
            Self::A1 => 1,
            Self::A2 | Self::B2 | Self::G2 => 2,
            Self::A3 => 3,
        }
    }

    pub fn from_parts(letter: &str, rank: usize) -> Result<Self, Error> {
        let label = alloc::format!("{letter}{rank}");
        label.parse()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter(), self.rank())
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Ok(Self::A1),
            "A2" => Ok(Self::A2),
            "A3" => Ok(Self::A3),
            "B2" => Ok(Self::B2),
            "G2" => Ok(Self::G2),
            _ => Err(Error::UnsupportedSystem(String::from(s))),
        }
    }
}

/// A positive root together with its expansion `α = Σ n_j α_j` in simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub vector: Vec<Rat>,
    pub coeffs: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_simple(&self) -> bool {
        self.height() == 1
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: CartanType,
    dim: usize,
    simple: Vec<Vec<Rat>>,
    gram: Vec<Vec<Rat>>,
    positive: Vec<Root>,
    positive_f64: Vec<Vec<f64>>,
    killing_scale: Rat,
}

fn unit(dim: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[i] = Rat::one();
    v
}

fn from_ints(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat(x)).collect()
}

/// Reflection of `v` in the hyperplane orthogonal to `alpha`.
pub fn reflect(v: &[Rat], alpha: &[Rat]) -> Vec<Rat> {
    let c = rat(2) * dot(v, alpha) / dot(alpha, alpha);
    sub_vec(v, &scale(alpha, &c))
}

impl RootSystem {
    pub fn new(cartan: CartanType) -> Self {
        let (dim, simple) = match cartan {
            CartanType::A1 => (2, vec![from_ints(&[1, -1])]),
            CartanType::A2 => (3, vec![from_ints(&[1, -1, 0]), from_ints(&[0, 1, -1])]),
            CartanType::A3 => (
                4,
                vec![
                    from_ints(&[1, -1, 0, 0]),
                    from_ints(&[0, 1, -1, 0]),
                    from_ints(&[0, 0, 1, -1]),
                ],
            ),
            CartanType::B2 => (2, vec![from_ints(&[1, -1]), unit(2, 1)]),
            CartanType::G2 => (3, vec![from_ints(&[1, -1, 0]), from_ints(&[-2, 1, 1])]),
        };
        let gram: Vec<Vec<Rat>> = simple
            .iter()
            .map(|a| simple.iter().map(|b| dot(a, b)).collect())
            .collect();

        // Closure of the simple roots under simple reflections gives the full root set.
        let mut all: BTreeSet<Vec<Rat>> = simple.iter().cloned().collect();
        let mut frontier: Vec<Vec<Rat>> = simple.clone();
        while let Some(v) = frontier.pop() {
            for a in &simple {
                let w = reflect(&v, a);
                if all.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }

        let mut rs = Self {
            cartan,
            dim,
            simple,
            gram,
            positive: Vec::new(),
            positive_f64: Vec::new(),
            killing_scale: Rat::zero(),
        };
        let mut positive: Vec<Root> = all
            .into_iter()
            .filter_map(|v| {
                let c = rs.simple_coords(&v);
                if c.iter().all(|x| !x.is_negative()) {
                    let coeffs = c.iter().map(|x| x.to_integer().to_i64().unwrap()).collect();
                    Some(Root { vector: v, coeffs })
                } else {
                    None
                }
            })
            .collect();
        positive.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.coeffs.cmp(&a.coeffs)));
        rs.positive_f64 = positive.iter().map(|r| to_f64_vec(&r.vector)).collect();
        rs.positive = positive;

        let h = rs.simple[0].clone();
        let sum_sq: Rat = rs.positive.iter().map(|r| rat(2) * dot(&r.vector, &h).pow(2)).sum();
        rs.killing_scale = sum_sq / dot(&h, &h);
        rs
    }

    pub fn from_label(label: &str) -> Result<Self, Error> {
        Ok(Self::new(label.parse()?))
    }

    pub fn cartan(&self) -> CartanType {
        self.cartan
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    /// Dimension of the ambient coordinate space (≥ rank).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simple_roots(&self) -> &[Vec<Rat>] {
        &self.simple
    }

    pub fn gram(&self) -> &[Vec<Rat>] {
        &self.gram
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn positive_roots_f64(&self) -> &[Vec<f64>] {
        &self.positive_f64
    }

    /// Ratio of the Killing form of the complex Lie algebra to the Euclidean form used here.
    pub fn killing_scale(&self) -> &Rat {
        &self.killing_scale
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Index of the positive root equal to `v`, if any.
    pub fn positive_index(&self, v: &[Rat]) -> Option<usize> {
        self.positive.iter().position(|r| r.vector == v)
    }

    /// Values `⟨α_i, v⟩` on the simple roots.
    pub fn pairings(&self, v: &[Rat]) -> Vec<Rat> {
        self.simple.iter().map(|a| dot(a, v)).collect()
    }

    /// Coefficients `c` with `v = Σ c_j α_j` for `v` in the root span.
    pub fn simple_coords(&self, v: &[Rat]) -> Vec<Rat> {
        solve(&self.gram, &self.pairings(v)).expect("Gram matrix is nonsingular")
    }

    /// The vector in the root span whose simple-root pairings are `values`.
    pub fn from_pairings(&self, values: &[Rat]) -> Result<Vec<Rat>, Error> {
        if values.len() != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), got: values.len() });
        }
        let c = solve(&self.gram, values).expect("Gram matrix is nonsingular");
        Ok(self.from_simple_coords(&c))
    }

    pub fn from_simple_coords(&self, c: &[Rat]) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        for (cj, a) in c.iter().zip(&self.simple) {
            for (x, y) in v.iter_mut().zip(a) {
                *x += cj * y;
            }
        }
        v
    }

    /// Orthogonal projection onto the root span.
    pub fn project(&self, v: &[Rat]) -> Vec<Rat> {
        self.from_pairings(&self.pairings(v)).expect("rank-sized pairings")
    }

    pub fn in_root_span(&self, v: &[Rat]) -> bool {
        self.project(v) == v
    }

    /// Checks the coordinate count and that `v` lies in the root span.
    pub fn check_vector(&self, v: &[Rat]) -> Result<(), Error> {
        if v.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: v.len() });
        }
        if !self.in_root_span(v) {
            return Err(Error::Precondition(String::from("vector is not in the span of the roots")));
        }
        Ok(())
    }

    /// `⟨α_i, v⟩ ≥ 0` for all simple roots.
    pub fn is_dominant(&self, v: &[Rat]) -> bool {
        self.simple.iter().all(|a| !dot(a, v).is_negative())
    }

    pub fn is_strictly_dominant(&self, v: &[Rat]) -> bool {
        self.simple.iter().all(|a| dot(a, v).is_positive())
    }

    /// Half-sum of the positive roots.
    pub fn rho(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        for r in &self.positive {
            for (x, y) in v.iter_mut().zip(&r.vector) {
                *x += y;
            }
        }
        scale(&v, &crate::rational::ratio(1, 2))
    }

    /// `π(v) = Π_{α>0} ⟨α, v⟩`, exactly.
    pub fn eval_pi(&self, v: &[Rat]) -> Rat {
        self.positive.iter().map(|r| dot(&r.vector, v)).product()
    }

    pub fn eval_pi_f64(&self, v: &[f64]) -> f64 {
        self.positive_f64.iter().map(|r| dot_f64(r, v)).product()
    }

    pub fn eval_pi_gauss(&self, v: &[GaussRat]) -> GaussRat {
        self.positive
            .iter()
            .fold(GaussRat::one(), |acc, r| &acc * &crate::rational::dot_gauss(v, &r.vector))
    }

    pub fn eval_pi_c64(&self, v: &[Complex64]) -> Complex64 {
        self.positive_f64
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, z)| z * a).sum::<Complex64>())
            .product()
    }

    /// Lexicographic order of covectors by their coordinates in the simple-root basis.
    /// Positive roots are positive in this order.
    pub fn lex_compare(&self, a: &[Rat], b: &[Rat]) -> Ordering {
        let ca = self.simple_coords(a);
        let cb = self.simple_coords(b);
        ca.cmp(&cb)
    }

    /// Positive roots vanishing on `v` (indices into [`Self::positive_roots`]).
    pub fn vanishing_roots(&self, v: &[Rat]) -> Vec<usize> {
        (0..self.positive.len()).filter(|&i| dot(&self.positive[i].vector, v).is_zero()).collect()
    }

    /// Indices of the simple roots vanishing on `v`.
    pub fn vanishing_simple(&self, v: &[Rat]) -> Vec<usize> {
        (0..self.rank()).filter(|&i| dot(&self.simple[i], v).is_zero()).collect()
    }
}
