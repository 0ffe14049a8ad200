//! Exact scalars: big rationals and Gaussian rationals `a + bi` with `a, b ∈ ℚ`.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // Ratio<BigInt>::to_f64 rounds correctly even for huge numerators/denominators.
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3"`, `"-2/5"` or a plain decimal such as `"0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::Parse(String::from(s));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let mut digits = String::from(int_digits);
        digits.push_str(frac);
        let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rat::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    BigInt::from_str(s).map(Rat::from_integer).map_err(|_| bad())
}

pub fn format_rat(r: &Rat) -> String {
    use alloc::string::ToString;
    if r.is_integer() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn scale(v: &[Rat], c: &Rat) -> Vec<Rat> {
    v.iter().map(|x| x * c).collect()
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn to_f64_vec(v: &[Rat]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

/// Solves `m x = b` exactly by Gauss-Jordan elimination; `None` if `m` is singular.
pub fn solve(m: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rat) -> Self {
        Self { re, im: Rat::zero() }
    }

    pub fn imag(im: Rat) -> Self {
        Self { re: Rat::zero(), im }
    }

    pub fn i() -> Self {
        Self::imag(Rat::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(&self.re * c, &self.im * c)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Orders by real part, then imaginary part.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        Self::new(Rat::zero(), Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        Self::real(Rat::one())
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rat(&self.re)),
            (true, false) => write!(f, "{}i", format_rat(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", format_rat(&self.re), sign, format_rat(&self.im.abs()))
            }
        }
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Div<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    /// Panics on division by zero, like `Rat`.
    fn div(self, o: &GaussRat) -> GaussRat {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-&self.re, -&self.im)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, o: GaussRat) -> GaussRat {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, o: &GaussRat) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

/// `⟨a, b⟩` for a Gaussian-rational vector against a real rational one.
pub fn dot_gauss(a: &[GaussRat], b: &[Rat]) -> GaussRat {
    a.iter().zip(b).fold(GaussRat::zero(), |acc, (x, y)| &acc + &x.scale(y))
}
