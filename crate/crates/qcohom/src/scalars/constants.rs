use num_bigint::BigInt;
use num_traits::One;

use super::{BigReal, Prec};
use crate::error::{Error, Result};

/// π, Euler's γ and ζ(2..=k_max) at a fixed precision.
#[derive(Clone, Debug)]
pub struct ConstantTable {
    pub prec: Prec,
    pub pi: BigReal,
    pub gamma: BigReal,
    /// `zeta[k]` holds ζ(k); entries 0 and 1 are unused zeros.
    zeta: Vec<BigReal>,
    /// log10 of the a-priori truncation bound used for γ and ζ.
    pub tail_log10: f64,
}

impl ConstantTable {
    pub fn zeta(&self, k: usize) -> Result<&BigReal> {
        if k < 2 || k >= self.zeta.len() {
            return Err(Error::ZetaTableTooShort {
                have: self.k_max(),
                need: k,
            });
        }
        Ok(&self.zeta[k])
    }

    pub fn k_max(&self) -> usize {
        self.zeta.len().saturating_sub(1)
    }
}

/// Builds the constant table at `digits` decimal digits with ζ up to `k_max`.
pub fn make_constants(digits: usize, k_max: usize) -> Result<ConstantTable> {
    if digits < 15 {
        return Err(Error::PrecisionTooLow(digits));
    }
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!("k_max = {k_max} < 2")));
    }
    let prec = Prec::new(digits);
    let work = prec.plus(12);
    let (gamma, g_tail) = euler_gamma(work);
    let (zeta_work, z_tail) = zeta_values(work, k_max);
    let mut zeta = vec![BigReal::zero(prec), BigReal::zero(prec)];
    zeta.extend(zeta_work.into_iter().skip(2).map(|z| z.with_prec(prec)));
    Ok(ConstantTable {
        prec,
        pi: BigReal::pi(prec),
        gamma: gamma.with_prec(prec),
        zeta,
        tail_log10: g_tail.max(z_tail),
    })
}

/// Brent–McMillan: γ = U/V − ln N with U, V Bessel-type sums; error below π e^{−4N}.
fn euler_gamma(p: Prec) -> (BigReal, f64) {
    let ln10 = std::f64::consts::LN_10;
    let big_n = ((p.digits as f64 + 4.0) * ln10 / 4.0).ceil() as i64 + 1;
    let n2 = BigReal::from_i64(big_n * big_n, p);
    let a0 = -BigReal::from_i64(big_n, p).ln();
    let mut a = a0.clone();
    let mut b = BigReal::one(p);
    let mut u = a0;
    let mut v = BigReal::one(p);
    let eps_exp = -(p.digits as i64) - 6;
    let mut k = 1i64;
    loop {
        let kk = BigReal::from_i64(k, p);
        b = b * n2.clone() / (kk.clone() * kk.clone());
        a = (a * n2.clone() / kk.clone() + b.clone()) / kk;
        u = u + a.clone();
        v = v + b.clone();
        if k > big_n && b.below_pow10(eps_exp) && a.below_pow10(eps_exp) {
            break;
        }
        k += 1;
    }
    let tail = (std::f64::consts::PI).log10() - 4.0 * big_n as f64 / ln10;
    (u / v, tail)
}

/// Borwein's accelerated alternating series for ζ(s), s = 2..=k_max.
/// Truncation error is at most 3/((3+√8)^n |1 − 2^{1−s}|).
fn zeta_values(p: Prec, k_max: usize) -> (Vec<BigReal>, f64) {
    let rate = (3.0 + 8f64.sqrt()).log10();
    let n = (((p.digits + 4) as f64 + 1.0) / rate).ceil() as usize + 1;
    // d_k = n Σ_{i≤k} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = BigInt::one();
    let mut acc = BigInt::one();
    d.push(acc.clone());
    for i in 1..=n {
        // consecutive summands differ by 4(n+i−1)(n−i+1) / ((2i)(2i−1))
        let num = BigInt::from((n + i - 1) as u64) * BigInt::from((n - i + 1) as u64) * 4u32;
        let den = BigInt::from((2 * i) as u64) * BigInt::from((2 * i - 1) as u64);
        term = term * num / den;
        acc += &term;
        d.push(acc.clone());
    }
    let dn = BigReal::from_bigint(&d[n], p);
    let mut out = vec![BigReal::zero(p), BigReal::zero(p)];
    for s in 2..=k_max {
        let mut sum = BigReal::zero(p);
        for k in 0..n {
            let diff = BigReal::from_bigint(&(&d[k] - &d[n]), p);
            let denom = BigReal::from_i64(k as i64 + 1, p).powi(s as i64);
            let t = diff / denom;
            sum = if k % 2 == 0 { sum + t } else { sum - t };
        }
        let two = BigReal::from_i64(2, p);
        let factor = BigReal::one(p) - two.powi(1 - s as i64);
        out.push(-sum / (dn.clone() * factor));
    }
    let tail = 3f64.log10() + 2f64.log10() - n as f64 * rate;
    (out, tail)
}
