use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;

use super::{BigReal, Prec};

/// Complex number as a pair of [`BigReal`].
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn real(re: BigReal) -> Self {
        let im = BigReal::zero(re.prec());
        BigComplex { re, im }
    }

    pub fn zero(p: Prec) -> Self {
        BigComplex::new(BigReal::zero(p), BigReal::zero(p))
    }

    pub fn one(p: Prec) -> Self {
        BigComplex::new(BigReal::one(p), BigReal::zero(p))
    }

    pub fn i(p: Prec) -> Self {
        BigComplex::new(BigReal::zero(p), BigReal::one(p))
    }

    pub fn from_rational(q: &BigRational, p: Prec) -> Self {
        BigComplex::real(BigReal::from_rational(q, p))
    }

    pub fn from_i64(n: i64, p: Prec) -> Self {
        BigComplex::real(BigReal::from_i64(n, p))
    }

    /// `e^{iθ}`.
    pub fn cis(theta: &BigReal) -> Self {
        let (s, c) = theta.sin_cos();
        BigComplex::new(c, s)
    }

    pub fn from_polar(r: &BigReal, theta: &BigReal) -> Self {
        let (s, c) = theta.sin_cos();
        BigComplex::new(r.clone() * c, r.clone() * s)
    }

    pub fn prec(&self) -> Prec {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    /// `max(|re|, |im|)`, cheap magnitude proxy within a factor √2 of `abs`.
    pub fn max_abs(&self) -> BigReal {
        self.re.abs().max(self.im.abs())
    }

    pub fn arg(&self) -> BigReal {
        self.im.atan2(&self.re)
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        BigComplex::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }

    /// Multiplication by `i^k`, exact.
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => BigComplex::new(-self.im.clone(), self.re.clone()),
            2 => -self.clone(),
            _ => BigComplex::new(self.im.clone(), -self.re.clone()),
        }
    }

    pub fn exp(&self) -> Self {
        BigComplex::from_polar(&self.re.exp(), &self.im)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        BigComplex::new(self.abs().ln(), self.arg())
    }

    pub fn powi(&self, k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::one(self.prec());
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex::new(self.re.clone() / n.clone(), -self.im.clone() / n)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{} + {}i", self.re.to_decimal(digits), self.im.to_decimal(digits))
    }
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: BigComplex) -> BigComplex {
        BigComplex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: BigComplex) -> BigComplex {
        BigComplex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: BigComplex) -> BigComplex {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        BigComplex::new(re, im)
    }
}

impl Div for BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: BigComplex) -> BigComplex {
        self * rhs.inv()
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re, -self.im)
    }
}
