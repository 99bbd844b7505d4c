//! Scalar layer: exact rationals, binary floats at a chosen decimal precision,
//! complex pairs, and the constant table (π, γ, ζ(k)).

mod complex;
mod constants;
mod rational;
mod real;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

pub use complex::BigComplex;
pub use constants::{make_constants, ConstantTable};
pub use rational::{
    bernoulli, big, binomial, binomial_poly, factorial, int, parse_rational, rat, rat_to_f64, rat_to_string,
    ExactRational,
};
pub use real::BigReal;

/// Guard bits added on top of the requested decimal precision.
const GUARD_BITS: usize = 32;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prec {
    pub digits: usize,
}

impl Prec {
    pub const fn new(digits: usize) -> Self {
        Prec { digits }
    }

    pub fn bits(self) -> usize {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
    }

    pub(crate) fn from_bits(bits: usize) -> Self {
        let d = (bits.saturating_sub(GUARD_BITS)) as f64 / std::f64::consts::LOG2_10;
        Prec {
            digits: d.floor() as usize,
        }
    }

    pub fn plus(self, extra: usize) -> Self {
        Prec {
            digits: self.digits + extra,
        }
    }
}

impl Default for Prec {
    fn default() -> Self {
        Prec { digits: 50 }
    }
}

/// Coefficient field of graded vectors: exact rationals or big complex numbers.
pub trait Scalar:
    Clone + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// Data needed to build constants of this type (a precision for floats).
    type Ctx: Clone + Copy + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn from_rational(q: &BigRational, ctx: Self::Ctx) -> Self;
    fn is_exact_zero(&self) -> bool;

    fn zero_in(ctx: Self::Ctx) -> Self {
        Self::from_rational(&BigRational::zero(), ctx)
    }

    fn one_in(ctx: Self::Ctx) -> Self {
        Self::from_rational(&int(1), ctx)
    }

    fn scale_rational(&self, q: &BigRational) -> Self {
        self.clone() * Self::from_rational(q, self.ctx())
    }

    /// Converts to a complex number at precision `p`.
    fn to_complex(&self, p: Prec) -> BigComplex;

    /// Plain-text rendering for reports: `p/q` or a decimal expansion.
    fn render(&self) -> String;
}

impl Scalar for BigRational {
    type Ctx = ();

    fn ctx(&self) {}

    fn from_rational(q: &BigRational, _: ()) -> Self {
        q.clone()
    }

    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }

    fn to_complex(&self, p: Prec) -> BigComplex {
        BigComplex::from_rational(self, p)
    }

    fn render(&self) -> String {
        rat_to_string(self)
    }
}

impl Scalar for BigReal {
    type Ctx = Prec;

    fn ctx(&self) -> Prec {
        self.prec()
    }

    fn from_rational(q: &BigRational, p: Prec) -> Self {
        BigReal::from_rational(q, p)
    }

    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }

    fn to_complex(&self, p: Prec) -> BigComplex {
        BigComplex::real(self.with_prec(p))
    }

    fn render(&self) -> String {
        self.to_decimal(self.prec().digits)
    }
}

impl Scalar for BigComplex {
    type Ctx = Prec;

    fn ctx(&self) -> Prec {
        self.prec()
    }

    fn from_rational(q: &BigRational, p: Prec) -> Self {
        BigComplex::from_rational(q, p)
    }

    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }

    fn scale_rational(&self, q: &BigRational) -> Self {
        let s = BigReal::from_rational(q, self.prec());
        self.scale(&s)
    }

    fn to_complex(&self, p: Prec) -> BigComplex {
        BigComplex::new(self.re.with_prec(p), self.im.with_prec(p))
    }

    fn render(&self) -> String {
        let d = self.prec().digits;
        if self.im.is_zero() {
            self.re.to_decimal(d)
        } else {
            format!(
                "{}{}{}i",
                self.re.to_decimal(d),
                if self.im.is_negative() { "" } else { "+" },
                self.im.to_decimal(d)
            )
        }
    }
}
