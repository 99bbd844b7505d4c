use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, Sign as DSign, UBig};
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;

use super::Prec;

type F = FBig<HalfEven, 2>;

/// Binary floating point number carrying its own working precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigReal(F);

pub(crate) fn to_ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = UBig::from_le_bytes(&bytes);
    match sign {
        Sign::Minus => IBig::from_parts(DSign::Negative, mag),
        _ => IBig::from(mag),
    }
}

pub(crate) fn from_ibig(n: &IBig) -> BigInt {
    let (sign, mag) = n.clone().into_parts();
    let m = BigInt::from_bytes_le(Sign::Plus, &mag.to_le_bytes());
    match sign {
        DSign::Negative => -m,
        DSign::Positive => m,
    }
}

impl BigReal {
    fn wrap(x: F, bits: usize) -> Self {
        BigReal(x.with_precision(bits).value())
    }

    pub fn zero(p: Prec) -> Self {
        Self::wrap(F::ZERO, p.bits())
    }

    pub fn one(p: Prec) -> Self {
        Self::wrap(F::ONE, p.bits())
    }

    pub fn from_i64(n: i64, p: Prec) -> Self {
        Self::wrap(F::from(n), p.bits())
    }

    pub fn from_bigint(n: &BigInt, p: Prec) -> Self {
        Self::wrap(F::from(to_ibig(n)), p.bits())
    }

    pub fn from_rational(q: &BigRational, p: Prec) -> Self {
        let n = Self::from_bigint(q.numer(), p);
        if q.denom() == &BigInt::from(1) {
            return n;
        }
        n / Self::from_bigint(q.denom(), p)
    }

    pub fn from_f64(x: f64, p: Prec) -> Self {
        let f = F::try_from(x).expect("finite f64");
        Self::wrap(f, p.bits())
    }

    /// Parses a decimal literal such as `0.5772156649`.
    pub fn parse(s: &str, p: Prec) -> Option<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, s),
        };
        let (int_part, frac) = body.split_once('.').unwrap_or((body, ""));
        let digits: String = format!("{int_part}{frac}");
        let n: BigInt = digits.parse().ok()?;
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let v = Self::from_rational(&BigRational::new(n, scale), p);
        Some(if neg { -v } else { v })
    }

    pub fn pi(p: Prec) -> Self {
        BigReal(F::pi(p.bits()))
    }

    pub fn bits(&self) -> usize {
        self.0.precision()
    }

    pub fn prec(&self) -> Prec {
        Prec::from_bits(self.bits())
    }

    pub fn with_prec(&self, p: Prec) -> Self {
        Self::wrap(self.0.clone(), p.bits())
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().significand().is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.repr().sign() == DSign::Negative && !self.is_zero()
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.exp())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.ln())
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.sqrt())
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.sin_cos();
        (BigReal(s), BigReal(c))
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn atan2(&self, x: &Self) -> Self {
        BigReal(self.0.atan2(&x.0))
    }

    pub fn powi(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one(self.prec());
        }
        let pos = BigReal(self.0.powi(IBig::from(k.unsigned_abs())));
        if k < 0 {
            Self::one(self.prec()) / pos
        } else {
            pos
        }
    }

    /// Real power for positive bases.
    pub fn powf(&self, e: &Self) -> Self {
        (self.ln() * e.clone()).exp()
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// Nearest integer (ties to even).
    pub fn round_to_bigint(&self) -> BigInt {
        let half = BigReal::from_rational(&BigRational::new(1.into(), 2.into()), self.prec());
        let shifted = if self.is_negative() {
            self.clone() - half
        } else {
            self.clone() + half
        };
        from_ibig(&shifted.0.trunc().to_int().value())
    }

    /// log10 of the magnitude, `-inf` for zero. Good to a few ulps, for tolerance checks.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let repr = self.0.repr();
        let sig = from_ibig(repr.significand());
        let bits = sig.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&sig >> shift as usize).to_string().parse::<f64>().unwrap_or(1.0).abs();
        top.log10() + ((repr.exponent() as i64 + shift) as f64) * std::f64::consts::LOG10_2
    }

    /// True when `|self| < 10^e`.
    pub fn below_pow10(&self, e: i64) -> bool {
        self.log10_abs() < e as f64
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let d = self.0.clone().with_base_and_precision::<10>(digits.max(1)).value();
        format!("{d}")
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.prec().digits.min(40)))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(self.prec().digits);
        write!(f, "{}", self.to_decimal(digits))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                BigReal(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'a BigReal) -> BigReal {
                BigReal(&self.0 $op &rhs.0)
            }
        }
    };
}
binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl BigReal {
    pub fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}
