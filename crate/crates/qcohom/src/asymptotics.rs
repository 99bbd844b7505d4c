//! Large-t behaviour of J-functions: the principal asymptotic class, Gamma
//! conjecture I verdicts, Apéry limits and growth rates of quantum periods.

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::jfunction::{evaluate_j, JSeries, QuantumPeriod};
use crate::ring::{gamma_class, null_space, GradedVector, HomologyVector, Ring};
use crate::scalars::{factorial, rat, BigComplex, BigReal, ConstantTable, ExactRational, Prec, Scalar};

/// Grid and order for polynomial extrapolation in 1/t.
#[derive(Clone, Debug)]
pub struct ExtrapolationConfig {
    pub t_grid: Vec<BigReal>,
    /// Degree of the extrapolating polynomial in 1/t.
    pub k: usize,
    pub prec: Prec,
}

impl ExtrapolationConfig {
    /// Equally spaced grid `t_j = (t_max/2)(1 + j/k)`, j = 0..=k.
    pub fn standard(t_max: f64, k: usize, prec: Prec) -> Result<Self> {
        if k == 0 || !(t_max > 0.0) {
            return Err(Error::InvalidArgument("extrapolation needs k ≥ 1 and t_max > 0".into()));
        }
        let half = BigReal::from_f64(t_max, prec) / BigReal::from_i64(2, prec);
        let t_grid = (0..=k)
            .map(|j| half.clone() * BigReal::from_rational(&rat((k + j) as i64, k as i64), prec))
            .collect();
        Self::new(t_grid, k, prec)
    }

    pub fn new(t_grid: Vec<BigReal>, k: usize, prec: Prec) -> Result<Self> {
        if t_grid.windows(2).any(|w| w[0] >= w[1]) || t_grid.first().is_none_or(|t| !(t > &BigReal::zero(prec))) {
            return Err(Error::InvalidArgument(
                "grid must be positive and strictly increasing".into(),
            ));
        }
        if k >= t_grid.len() {
            return Err(Error::InvalidArgument(format!(
                "order {k} needs more than {} grid points",
                t_grid.len()
            )));
        }
        Ok(ExtrapolationConfig { t_grid, k, prec })
    }

    pub fn t_max(&self) -> &BigReal {
        self.t_grid.last().expect("nonempty grid")
    }
}

/// Value of a polynomial through `(xs, ys)` at 0 (Neville's scheme).
pub fn neville_at_zero(xs: &[BigReal], ys: &[BigComplex]) -> BigComplex {
    let n = xs.len();
    let mut p: Vec<BigComplex> = ys.to_vec();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (&xs[i], &xs[i + m]);
            // P = (x_j P_i − x_i P_{i+1}) / (x_j − x_i) at x = 0
            let num = p[i].scale(xj) - p[i + 1].scale(xi);
            p[i] = num.scale(&(BigReal::one(xi.prec()) / (xj - xi)));
        }
    }
    p[0].clone()
}

/// Extrapolated `lim J(t)/⟨[pt], J(t)⟩` with per-component error estimates.
#[derive(Clone, Debug)]
pub struct AsymptoticClass {
    pub class: GradedVector<BigComplex>,
    /// |order-k − order-(k−1)| per component.
    pub errors: Vec<BigReal>,
}

/// Normalised J-function `J(t)/⟨[pt], J(t)⟩` at real t > 0.
pub fn normalised_j<S: Scalar>(j: &JSeries<S>, t: &BigReal, p: Prec) -> Result<GradedVector<BigComplex>> {
    let ev = evaluate_j(j, &BigComplex::real(t.clone()), &BigReal::zero(p), p);
    let g = ev.value.h0().clone();
    if g.abs().below_pow10(-(p.digits as i64)) {
        return Err(Error::InvalidArgument("⟨[pt], J(t)⟩ vanishes".into()));
    }
    let rel = ev.tail.clone() / g.abs();
    if !ev.converged || !rel.below_pow10(-(p.digits as i64) + 5) {
        return Err(Error::NonConvergence(format!(
            "J-series truncated at D = {} has relative tail {:e} at t = {}",
            j.order(),
            rel.to_f64(),
            t.to_decimal(6)
        )));
    }
    let inv = g.inv();
    Ok(ev.value.scale(&inv))
}

/// Neville extrapolation of the normalised J-function in 1/t.
pub fn principal_asymptotic_class<S: Scalar>(j: &JSeries<S>, cfg: &ExtrapolationConfig) -> Result<AsymptoticClass> {
    let p = cfg.prec;
    let pts: Vec<&BigReal> = cfg.t_grid.iter().rev().take(cfg.k + 1).collect();
    let vals: Vec<GradedVector<BigComplex>> = pts
        .par_iter()
        .map(|t| normalised_j(j, t, p))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<BigReal> = pts.iter().map(|t| BigReal::one(p) / (*t).clone()).collect();
    let ring = j.ring();
    let mut class = GradedVector::<BigComplex>::zero(ring, p);
    let mut errors = Vec::with_capacity(ring.rank());
    for i in 0..ring.rank() {
        let ys: Vec<BigComplex> = vals.iter().map(|v| v.coeff(i).clone()).collect();
        let full = neville_at_zero(&xs, &ys);
        // one order lower, dropping the smallest t
        let lower = neville_at_zero(&xs[..cfg.k], &ys[..cfg.k]);
        errors.push((full.clone() - lower).abs());
        class.set(i, full);
    }
    Ok(AsymptoticClass { class, errors })
}

/// Componentwise comparison of the asymptotic class with the Gamma class.
#[derive(Clone, Debug)]
pub struct GammaIVerdict {
    pub space: String,
    pub component_errors: Vec<f64>,
    pub extrapolation_errors: Vec<f64>,
    pub worst_component: usize,
    pub pass: bool,
    pub t_max: f64,
    pub order: usize,
    pub k: usize,
}

impl GammaIVerdict {
    /// `{space, component_errors[], pass, t_max, D, k}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "space": self.space,
            "component_errors": self.component_errors,
            "extrapolation_errors": self.extrapolation_errors,
            "worst_component": self.worst_component,
            "pass": self.pass,
            "t_max": self.t_max,
            "D": self.order,
            "k": self.k,
        })
    }
}

/// Gamma conjecture I check against Γ̂ of the J-series' ring.
pub fn gamma_i_verdict<S: Scalar>(
    j: &JSeries<S>,
    cfg: &ExtrapolationConfig,
    tol: f64,
    c: &ConstantTable,
) -> Result<GammaIVerdict> {
    let gamma = gamma_class(j.ring(), c)?;
    gamma_i_verdict_against(j, cfg, tol, &gamma)
}

/// Gamma conjecture I check against an explicit target class.
pub fn gamma_i_verdict_against<S: Scalar>(
    j: &JSeries<S>,
    cfg: &ExtrapolationConfig,
    tol: f64,
    target: &GradedVector<BigComplex>,
) -> Result<GammaIVerdict> {
    let a = principal_asymptotic_class(j, cfg)?;
    let component_errors: Vec<f64> = a
        .class
        .coeffs()
        .iter()
        .zip(target.coeffs())
        .map(|(x, y)| (x.clone() - y.clone()).abs().to_f64())
        .collect();
    let worst_component = (0..component_errors.len())
        .max_by(|&i, &k| component_errors[i].total_cmp(&component_errors[k]))
        .unwrap_or(0);
    Ok(GammaIVerdict {
        space: j.space.clone(),
        pass: component_errors.iter().all(|e| *e < tol),
        extrapolation_errors: a.errors.iter().map(|e| e.to_f64()).collect(),
        component_errors,
        worst_component,
        t_max: cfg.t_max().to_f64(),
        order: j.order(),
        k: cfg.k,
    })
}

/// Basis of {α ∈ H_• : α ∩ c1 = 0} in dual-basis coordinates.
pub fn kernel_c1(ring: &Ring) -> Vec<HomologyVector<ExactRational>> {
    let c1 = ring.c1_vector();
    let rows: Vec<Vec<ExactRational>> = (0..ring.rank())
        .map(|j| (&c1 * &GradedVector::basis(ring, j, ())).into_coeffs())
        .collect();
    let mut ker = null_space(rows, ring.rank());
    // point class first, then by degree
    ker.sort_by_key(|v| v.iter().position(|c| !c.is_zero()).unwrap_or(usize::MAX));
    ker.into_iter()
        .map(|v| HomologyVector::new(ring, v).expect("rank-sized"))
        .collect()
}

/// True when `α ∩ c1 = 0`.
pub fn in_kernel_c1(alpha: &HomologyVector<ExactRational>) -> bool {
    let ring = alpha.ring();
    let c1 = ring.c1_vector();
    (0..ring.rank()).all(|j| {
        alpha
            .pair(&(&c1 * &GradedVector::basis(ring, j, ())))
            .is_ok_and(|v| v.is_zero())
    })
}

/// Ratios ⟨α, J_{rn}⟩/⟨[pt], J_{rn}⟩, raw and after one Aitken Δ² pass.
#[derive(Clone, Debug)]
pub struct AperySequence {
    /// The n with J_{rn} inside the series, starting at 1.
    pub n: Vec<usize>,
    pub ratios: Vec<BigReal>,
    /// Aitken Δ² transform of `ratios` (two shorter).
    pub aitken: Vec<BigReal>,
}

impl AperySequence {
    pub fn ratio_at(&self, n: usize) -> Option<&BigReal> {
        self.n.iter().position(|&m| m == n).map(|i| &self.ratios[i])
    }
}

/// Apéry ratio sequence for a class in the kernel of c1 (checked), n = 1..=N.
pub fn apery_ratio<S: Scalar>(
    j: &JSeries<S>,
    alpha: &HomologyVector<ExactRational>,
    n_max: usize,
    p: Prec,
) -> Result<AperySequence> {
    if !in_kernel_c1(alpha) {
        return Err(Error::InvalidArgument("α ∩ c1 ≠ 0".into()));
    }
    let r = j.index().max(1) as usize;
    if r * n_max > j.order() {
        return Err(Error::InvalidArgument(format!(
            "need J up to degree {}, have {}",
            r * n_max,
            j.order()
        )));
    }
    let a = alpha.map(|q| BigComplex::from_rational(q, p));
    let mut n = Vec::new();
    let mut ratios = Vec::new();
    for m in 1..=n_max {
        let jd = j.coeff(r * m).to_complex(p);
        let g = jd.h0().clone();
        if g.is_zero() {
            continue;
        }
        let num = a.pair(&jd)?;
        n.push(m);
        ratios.push((num / g).re);
    }
    let aitken = aitken(&ratios);
    Ok(AperySequence { n, ratios, aitken })
}

/// One pass of Aitken's Δ² transform.
pub fn aitken(x: &[BigReal]) -> Vec<BigReal> {
    x.windows(3)
        .map(|w| {
            let d1 = &w[1] - &w[0];
            let d2 = &(&w[2] - &w[1]) - &d1;
            if d2.is_zero() {
                w[2].clone()
            } else {
                &w[2] - &((&w[2] - &w[1]) * (&w[2] - &w[1]) / d2)
            }
        })
        .collect()
}

/// `⟨α, Γ̂⟩`.
pub fn apery_target(alpha: &HomologyVector<ExactRational>, c: &ConstantTable) -> Result<BigComplex> {
    let gamma = gamma_class(alpha.ring(), c)?;
    alpha.map(|q| BigComplex::from_rational(q, c.prec)).pair(&gamma)
}

/// `x ≈ a + b·y` with small-denominator rationals a, b.
#[derive(Clone, Debug)]
pub struct SpanFit {
    pub a: ExactRational,
    pub b: ExactRational,
    pub residual: f64,
}

/// Searches common denominators q ≤ `max_den` and numerators |b·q| ≤ `max_num`
/// for the best fit `x ≈ a + b y`; ties go to the smallest denominator.
pub fn fit_rational_span(x: &BigReal, y: &BigReal, max_den: i64, max_num: i64) -> SpanFit {
    let p = x.prec();
    let mut best: Option<SpanFit> = None;
    for q in 1..=max_den {
        let qr = BigReal::from_i64(q, p);
        for bn in -max_num..=max_num {
            let b = BigReal::from_i64(bn, p) / qr.clone();
            let rest = x.clone() - b * y.clone();
            let an = (rest.clone() * qr.clone()).round_to_bigint();
            let approx = BigReal::from_bigint(&an, p) / qr.clone();
            let res = (rest - approx).abs().to_f64();
            if best.as_ref().is_none_or(|f| res < f.residual * 0.5) {
                best = Some(SpanFit {
                    a: ExactRational::new(an, q.into()),
                    b: rat(bn, q),
                    residual: res,
                });
            }
        }
    }
    best.expect("search space is nonempty")
}

/// Growth estimate of `((rn)! G_{rn})^{1/rn}`.
#[derive(Clone, Debug)]
pub struct GrowthEstimate {
    /// Richardson-corrected limit of the ratio sequence.
    pub estimate: f64,
    /// Last raw root `((rN)! G_{rN})^{1/rN}`.
    pub raw_root: f64,
    /// Last ratio `(c_N/c_{N−2})^{1/2r}` with c_n = (rn)! G_{rn}.
    pub last_ratio: f64,
    pub n_used: usize,
}

/// Extrapolates `(c_n/c_{n−2})^{1/2r}` linearly in 1/n from the last two terms; the
/// two-step ratio cancels period-two oscillation.
pub fn growth_rate(g: &QuantumPeriod<ExactRational>) -> Result<GrowthEstimate> {
    let r = g.index.max(1) as usize;
    let c: Vec<ExactRational> = (0..g.coeffs.len() / r * r + 1)
        .step_by(r)
        .take_while(|&d| d < g.coeffs.len())
        .map(|d| &g.coeffs[d] * ExactRational::from_integer(factorial(d as u64)))
        .collect();
    let start = (1..c.len()).find(|&n| !c[n].is_zero()).unwrap_or(c.len());
    let nonzero = c[start.min(c.len())..].iter().take_while(|x| !x.is_zero()).count();
    if nonzero < 5 {
        return Err(Error::InvalidArgument(format!(
            "growth rate needs 5 nonzero coefficients, have {nonzero}"
        )));
    }
    let n_max = start + nonzero - 1;
    let ratio = |n: usize| (crate::mirror::ln_rational(&(&c[n] / &c[n - 2])) / (2 * r) as f64).exp();
    let tail: Vec<usize> = ((n_max - 1).max(start + 2)..=n_max).collect();
    let p = Prec::new(30);
    let xs: Vec<BigReal> = tail
        .iter()
        .map(|&n| BigReal::from_rational(&rat(1, n as i64), p))
        .collect();
    let ys: Vec<BigComplex> = tail
        .iter()
        .map(|&n| BigComplex::real(BigReal::from_f64(ratio(n), p)))
        .collect();
    let estimate = neville_at_zero(&xs, &ys).re.to_f64();
    let raw_root = (crate::mirror::ln_rational(&c[n_max]) / (r * n_max) as f64).exp();
    Ok(GrowthEstimate {
        estimate,
        raw_root,
        last_ratio: ratio(n_max),
        n_used: n_max,
    })
}
