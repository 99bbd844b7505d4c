use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number; num's `Ratio` keeps it reduced with a positive denominator.
pub type ExactRational = BigRational;

pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: BigInt) -> ExactRational {
    BigRational::from_integer(n)
}

/// `p/q` rendering, or just `p` for integers.
pub fn rat_to_string(q: &ExactRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(big(parse_int(s)?)),
    }
}

pub fn rat_to_f64(q: &ExactRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator too large for a direct conversion
        let shift = q.numer().bits().max(q.denom().bits()) as i64 - 900;
        let (n, d) = if shift > 0 {
            (q.numer() >> shift as usize, q.denom() >> shift as usize)
        } else {
            (q.numer().clone(), q.denom().clone())
        };
        let (n, d) = (n.to_f64().unwrap_or(0.0), d.to_f64().unwrap_or(f64::INFINITY));
        n / d
    })
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Polynomial binomial `(m choose k)` valid for negative `m`.
pub fn binomial_poly(m: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= m - i;
    }
    acc / factorial(k as u64)
}

/// Bernoulli numbers B_0..B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Vec<ExactRational> {
    let mut b = vec![ExactRational::zero(); n + 1];
    b[0] = ExactRational::one();
    for m in 1..=n {
        let mut s = ExactRational::zero();
        for k in 0..m {
            s += big(binomial(m as i64 + 1, k as i64)) * &b[k];
        }
        b[m] = -s / int(m as i64 + 1);
    }
    b
}
