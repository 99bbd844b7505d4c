//! Mirror integrals over the positive real locus, central charges of the
//! structure sheaf, and the Laplace-transform form of quantum Lefschetz.

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::jfunction::{evaluate_j, quantum_lefschetz, JSeries};
use crate::mirror::LaurentPolynomial;
use crate::ring::{gamma_class, pair_bracket, GradedVector};
use crate::scalars::{rat_to_f64, BigComplex, BigReal, ConstantTable, Prec, Scalar};

/// Largest number of variables accepted by [`oscillatory_integral`].
pub const MAX_OSCILLATORY_DIM: usize = 3;

#[derive(Clone, Debug)]
pub struct QuadratureConfig {
    /// Required agreement between two successive grids, relative to the value.
    pub tol: f64,
    /// Working precision; 15 digits or fewer selects the f64 kernel.
    pub prec: Prec,
    /// Starting step in log coordinates (rounded down to a power of two).
    pub initial_step: f64,
    pub max_refinements: usize,
}

impl QuadratureConfig {
    pub fn new(tol: f64, prec: Prec) -> Self {
        QuadratureConfig {
            tol,
            prec,
            initial_step: 0.5,
            max_refinements: 8,
        }
    }
}

/// Value of `∫_{(R>0)^m} e^{−f(x)/z} dx/x` with the grid that produced it.
#[derive(Clone, Debug)]
pub struct OscillatoryIntegral {
    pub value: BigReal,
    /// Box half-width L in log coordinates.
    pub half_width: f64,
    pub step: f64,
    pub nodes: usize,
    pub refinements: usize,
    /// |T(h) − T(2h)| / |T(h)| for the accepted step.
    pub last_change: f64,
}

impl OscillatoryIntegral {
    pub fn grid_params(&self) -> serde_json::Value {
        json!({
            "half_width": self.half_width,
            "step": self.step,
            "nodes": self.nodes,
            "refinements": self.refinements,
            "last_change": self.last_change,
        })
    }
}

trait QuadNum: Clone + Send + Sync {
    fn from_f64_exact(x: f64, p: Prec) -> Self;
    fn exp_table(h: f64, s: i64, p: Prec) -> Vec<Self>;
    fn zero(p: Prec) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg_exp(&self) -> Self;
    fn into_real(self, p: Prec) -> BigReal;
}

impl QuadNum for f64 {
    fn from_f64_exact(x: f64, _: Prec) -> Self {
        x
    }
    fn exp_table(h: f64, s: i64, _: Prec) -> Vec<Self> {
        (-s..=s).map(|k| (k as f64 * h).exp()).collect()
    }
    fn zero(_: Prec) -> Self {
        0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_exp(&self) -> Self {
        (-self).exp()
    }
    fn into_real(self, p: Prec) -> BigReal {
        BigReal::from_f64(self, p)
    }
}

impl QuadNum for BigReal {
    fn from_f64_exact(x: f64, p: Prec) -> Self {
        BigReal::from_f64(x, p)
    }
    fn exp_table(h: f64, s: i64, p: Prec) -> Vec<Self> {
        let e = BigReal::from_f64(h, p).exp();
        let inv = BigReal::one(p) / e.clone();
        let mut up = vec![BigReal::one(p)];
        let mut down = vec![BigReal::one(p)];
        for k in 1..=s as usize {
            up.push(up[k - 1].clone() * e.clone());
            down.push(down[k - 1].clone() * inv.clone());
        }
        down.into_iter().skip(1).rev().chain(up).collect()
    }
    fn zero(p: Prec) -> Self {
        BigReal::zero(p)
    }
    fn add(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn mul(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn neg_exp(&self) -> Self {
        (-self.clone()).exp()
    }
    fn into_real(self, _: Prec) -> BigReal {
        self
    }
}

fn pairwise_sum<T: QuadNum>(xs: &[T], p: Prec) -> T {
    match xs.len() {
        0 => T::zero(p),
        1 => xs[0].clone(),
        n => pairwise_sum(&xs[..n / 2], p).add(&pairwise_sum(&xs[n / 2..], p)),
    }
}

/// Half-width L, grown geometrically from 2, with
/// `min_{|u|_∞ = L} max_i c_i e^{⟨m_i,u⟩} / z ≥ threshold`.
fn truncation_half_width(terms: &[(Vec<i64>, f64)], z: f64, threshold: f64) -> Result<f64> {
    let m = terms[0].0.len();
    let phi = |u: &[f64]| {
        terms
            .iter()
            .map(|(e, c)| c.ln() + e.iter().zip(u).map(|(&a, b)| a as f64 * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let lip = terms
        .iter()
        .map(|(e, _)| e.iter().map(|a| a.abs()).sum::<i64>())
        .max()
        .unwrap_or(0) as f64;
    let samples = if m == 3 { 48usize } else { 96 };
    let mut l = 2.0f64;
    for _ in 0..12 {
        let spacing = 2.0 * l / samples as f64;
        let mut min_phi = f64::INFINITY;
        let mut u = vec![0.0; m];
        for face in 0..m {
            for sign in [-1.0, 1.0] {
                let free = m - 1;
                for idx in 0..(samples + 1).pow(free as u32) {
                    let mut rest = idx;
                    let mut k = 0;
                    for (j, slot) in u.iter_mut().enumerate() {
                        if j == face {
                            *slot = sign * l;
                        } else {
                            *slot = -l + spacing * (rest % (samples + 1)) as f64;
                            rest /= samples + 1;
                            k += 1;
                        }
                    }
                    debug_assert_eq!(k, free);
                    min_phi = min_phi.min(phi(&u));
                }
            }
        }
        // sampled minimum minus the worst variation between samples
        let bound = min_phi - lip * spacing / 2.0;
        if bound.exp() / z >= threshold {
            return Ok(l);
        }
        l *= 1.5;
    }
    Err(Error::NonConvergence(
        "integrand does not decay fast enough on the truncation boxes".into(),
    ))
}

fn trapezoid<T: QuadNum>(terms: &[(Vec<i64>, f64)], coeffs: &[T], z_inv: &T, h: f64, k_max: i64, p: Prec) -> T {
    let m = terms[0].0.len();
    let s = terms
        .iter()
        .map(|(e, _)| e.iter().map(|a| a.abs()).sum::<i64>())
        .max()
        .unwrap_or(0)
        * k_max;
    let table = T::exp_table(h, s, p);
    let side = (2 * k_max + 1) as usize;
    let rest_count = side.pow(m as u32 - 1);
    let slices: Vec<T> = (-k_max..=k_max)
        .into_par_iter()
        .map(|k0| {
            let mut vals = Vec::with_capacity(rest_count);
            let mut k = vec![0i64; m];
            k[0] = k0;
            for idx in 0..rest_count {
                let mut rest = idx;
                for slot in k.iter_mut().skip(1) {
                    *slot = (rest % side) as i64 - k_max;
                    rest /= side;
                }
                let mut f = T::zero(p);
                for ((e, _), c) in terms.iter().zip(coeffs) {
                    let dot: i64 = e.iter().zip(&k).map(|(a, b)| a * b).sum();
                    f = f.add(&c.mul(&table[(dot + s) as usize]));
                }
                vals.push(f.mul(z_inv).neg_exp());
            }
            pairwise_sum(&vals, p)
        })
        .collect();
    pairwise_sum(&slices, p).mul(&T::from_f64_exact(h.powi(m as i32), p))
}

/// `∫_{(R>0)^m} e^{−f(x)/z} dx_1⋯dx_m/(x_1⋯x_m)` by the trapezoid rule in
/// u = log x, halving the step until two grids agree to `q.tol`.
pub fn oscillatory_integral(f: &LaurentPolynomial, z: &BigReal, q: &QuadratureConfig) -> Result<OscillatoryIntegral> {
    let m = f.nvars();
    if m == 0 || m > MAX_OSCILLATORY_DIM {
        return Err(Error::ResourceLimit(format!(
            "oscillatory integrals are limited to 1..={MAX_OSCILLATORY_DIM} variables, got {m}"
        )));
    }
    if !f.has_positive_coefficients() || !f.constant_term().is_zero() {
        return Err(Error::InvalidArgument(
            "integrand needs positive coefficients and no constant term".into(),
        ));
    }
    let pts = f.exponents();
    if !crate::mirror::origin_in_interior(&pts, m) {
        return Err(Error::OriginNotInterior);
    }
    let zf = z.to_f64();
    if !(zf > 0.0) {
        return Err(Error::InvalidArgument("z must be positive".into()));
    }
    let terms: Vec<(Vec<i64>, f64)> = f.terms().map(|(e, c)| (e.clone(), rat_to_f64(c))).collect();
    let f64_kernel = q.prec.digits <= 15;
    let digits = if f64_kernel { 17.0 } else { q.prec.digits as f64 };
    let threshold = digits * std::f64::consts::LN_10 + 10.0 + 2.0 * m as f64;
    let l = truncation_half_width(&terms, zf, threshold)?;
    let mut h = 2f64.powi(q.initial_step.log2().floor() as i32);
    let p = q.prec;
    let run = |h: f64| -> BigReal {
        let k_max = (l / h).ceil() as i64;
        if f64_kernel {
            let cs: Vec<f64> = terms.iter().map(|t| t.1).collect();
            trapezoid(&terms, &cs, &(1.0 / zf), h, k_max, p).into_real(p)
        } else {
            let cs: Vec<BigReal> = f.terms().map(|(_, c)| BigReal::from_rational(c, p)).collect();
            let zi = BigReal::one(p) / z.with_prec(p);
            trapezoid(&terms, &cs, &zi, h, k_max, p)
        }
    };
    let mut prev = run(h);
    for refinement in 1..=q.max_refinements {
        h /= 2.0;
        let next = run(h);
        let change = ((next.clone() - prev.clone()).abs() / next.abs()).to_f64();
        if change < q.tol {
            let nodes = (2 * (l / h).ceil() as usize + 1).pow(m as u32);
            return Ok(OscillatoryIntegral {
                value: next,
                half_width: l,
                step: h,
                nodes,
                refinements: refinement,
                last_change: change,
            });
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!(
        "quadrature did not settle to {:e} after {} halvings",
        q.tol, q.max_refinements
    )))
}

/// `(2πi)^{dim} [J(e^{πi} t), class)`; `class = Γ̂ Ch(E)` gives the central charge of E.
///
/// The imaginary part must stay below 10^{−P+12} times the largest term of the series.
pub fn central_charge<S: Scalar>(
    j: &JSeries<S>,
    class: &GradedVector<BigComplex>,
    t: &BigReal,
    c: &ConstantTable,
) -> Result<BigComplex> {
    let p = c.prec;
    let ring = j.ring();
    if *t <= BigReal::zero(p) {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    let ev = evaluate_j(j, &BigComplex::real(-t.with_prec(p)), &c.pi, p);
    if !ev.converged {
        return Err(Error::NonConvergence(format!(
            "J-series truncated at D = {} does not converge at t = {}",
            j.order(),
            t.to_decimal(6)
        )));
    }
    let two_pi_i = BigComplex::new(BigReal::zero(p), c.pi.clone() * BigReal::from_i64(2, p));
    let z = pair_bracket(&ev.value, class, c)? * two_pi_i.powi(ring.dim as u64);
    let scale = two_pi_i.abs().powi(ring.dim as i64)
        * j.coeffs().iter().enumerate().fold(BigReal::one(p), |acc, (d, jd)| {
            let term = jd
                .to_complex(p)
                .coeffs()
                .iter()
                .map(|x| x.max_abs())
                .fold(BigReal::zero(p), BigReal::max)
                * t.with_prec(p).powi(d as i64);
            acc.max(term)
        });
    let bound = scale * BigReal::from_i64(10, p).powi(12 - p.digits as i64);
    if z.im.abs() > bound {
        return Err(Error::ImaginaryResidue {
            residue: z.im.abs().to_f64(),
            bound: bound.to_f64(),
        });
    }
    if ev.tail > BigReal::from_i64(10, p).powi(-(p.digits as i64) + 12) * (BigReal::one(p) + z.abs()) {
        return Err(Error::NonConvergence(format!(
            "series tail {:e} at t = {}",
            ev.tail.to_f64(),
            t.to_decimal(6)
        )));
    }
    Ok(z)
}

/// Central charge of the structure sheaf, `(2πi)^{dim} [J(e^{πi} t), Γ̂)`.
pub fn central_charge_structure_sheaf<S: Scalar>(j: &JSeries<S>, t: &BigReal, c: &ConstantTable) -> Result<BigComplex> {
    central_charge(j, &gamma_class(j.ring(), c)?, t, c)
}

/// Both sides of the Laplace-transform identity for a hypersurface.
#[derive(Clone, Debug)]
pub struct LaplaceReport {
    pub identity: String,
    pub lhs: GradedVector<BigComplex>,
    pub rhs: GradedVector<BigComplex>,
    pub abs_diff: Vec<f64>,
    pub rel_diff: Vec<f64>,
    pub max_rel_diff: f64,
    pub pass: bool,
    pub step: f64,
    pub s_range: (f64, f64),
    pub nodes: usize,
}

impl LaplaceReport {
    /// `{identity, lhs, rhs, abs_diff, rel_diff, grid_params}`.
    pub fn to_json(&self) -> serde_json::Value {
        let vec = |v: &GradedVector<BigComplex>| v.coeffs().iter().map(|x| x.re.to_decimal(20)).collect::<Vec<_>>();
        json!({
            "identity": self.identity,
            "lhs": vec(&self.lhs),
            "rhs": vec(&self.rhs),
            "abs_diff": self.abs_diff,
            "rel_diff": self.rel_diff,
            "pass": self.pass,
            "grid_params": {"step": self.step, "s_min": self.s_range.0, "s_max": self.s_range.1, "nodes": self.nodes},
        })
    }
}

/// `Γ(1 + x)^{-1} = exp(γx + Σ_{k≥2} (−1)^{k−1} ζ(k) x^k/k)` for nilpotent x.
pub fn inverse_gamma_series(x: &GradedVector<BigComplex>, c: &ConstantTable) -> Result<GradedVector<BigComplex>> {
    let p = c.prec;
    let dim = x.ring().dim;
    let mut expo = x.scale(&BigComplex::real(c.gamma.clone()));
    let mut pow = x.clone();
    for k in 2..=dim {
        pow = &pow * x;
        let coeff = c.zeta(k)?.clone() / BigReal::from_i64(k as i64, p);
        let coeff = if k % 2 == 0 { -coeff } else { coeff };
        expo = &expo + &pow.scale(&BigComplex::real(coeff));
    }
    expo.exp()
}

/// Checks `J_Y(u^{a/(r−a)}) = e^{−c0 t}/(Γ(1+ah) u) ∫_0^∞ i^*J_X(q^{a/r}) e^{−q/u} dq`
/// for a degree-a hypersurface Y in P^n, with r = n + 1.
pub fn laplace_lefschetz_check<S: Scalar>(
    jx: &JSeries<S>,
    a: usize,
    u: &BigReal,
    tol: f64,
    c: &ConstantTable,
) -> Result<LaplaceReport> {
    let p = c.prec;
    let lef = quantum_lefschetz(jx, a, p)?;
    let yring = lef.jy.ring().clone();
    let n = yring.dim + 1;
    let r = n + 1;
    let uf = u.to_f64();
    if !(uf > 0.0) {
        return Err(Error::InvalidArgument("u must be positive".into()));
    }
    // the Laplace integral needs e^{−q/u} to beat J_X(q^{a/r}) ~ e^{r q^{a/r}}
    if a as f64 * uf * r as f64 > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "u = {uf} is too large for a convergent Laplace integral"
        )));
    }
    let ry = r - a;
    let t = (u.ln() * BigReal::from_f64(a as f64 / ry as f64, p)).exp();
    let lhs_eval = evaluate_j(&lef.jy, &BigComplex::real(t.clone()), &BigReal::zero(p), p);
    if !lhs_eval.converged {
        return Err(Error::NonConvergence(
            "J_Y series does not converge at the requested t".into(),
        ));
    }
    let lhs = lhs_eval.value;

    let restrict =
        |v: &GradedVector<BigComplex>| GradedVector::new(&yring, v.coeffs()[..n].to_vec()).expect("length n");
    let ar = BigReal::from_f64(a as f64 / r as f64, p);
    let inv_u = BigReal::one(p) / u.clone();
    let integrand = |s: f64| -> Result<GradedVector<BigComplex>> {
        let sb = BigReal::from_f64(s, p);
        let x = (sb.clone() * ar.clone()).exp();
        let q = sb.exp();
        let ev = evaluate_j(jx, &BigComplex::real(x), &BigReal::zero(p), p);
        if !ev.converged {
            return Err(Error::NonConvergence(format!(
                "J_X series does not converge at q = e^{s}"
            )));
        }
        // dq = q ds
        let w = q.clone() * (-(q * inv_u.clone())).exp();
        Ok(restrict(&ev.value).scale(&BigComplex::real(w)))
    };
    let mag = |v: &GradedVector<BigComplex>| v.coeffs().iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max);

    let cut = -tol.ln() + 12.0;
    let s_min = -2.0 * cut;
    let mut s_max = uf.ln();
    let peak = mag(&integrand(s_max)?);
    while mag(&integrand(s_max)?) > peak * (-cut).exp() {
        s_max += 0.5;
        if s_max > 50.0 {
            return Err(Error::NonConvergence("Laplace integrand does not decay".into()));
        }
    }

    let trap = |h: f64| -> Result<(GradedVector<BigComplex>, usize)> {
        let count = ((s_max - s_min) / h).ceil() as usize;
        let vals: Vec<GradedVector<BigComplex>> = (0..=count)
            .into_par_iter()
            .map(|i| integrand(s_min + i as f64 * h))
            .collect::<Result<_>>()?;
        let mut sum = GradedVector::zero(&yring, p);
        for (i, v) in vals.iter().enumerate() {
            let w = if i == 0 || i == count { 0.5 } else { 1.0 };
            sum = &sum + &v.scale(&BigComplex::real(BigReal::from_f64(w * h, p)));
        }
        Ok((sum, count + 1))
    };
    let mut h = 0.25;
    let (mut integral, mut nodes) = trap(h)?;
    for _ in 0..8 {
        let (next, cnt) = trap(h / 2.0)?;
        let change = integral
            .coeffs()
            .iter()
            .zip(next.coeffs())
            .map(|(x, y)| (x.clone() - y.clone()).abs().to_f64())
            .fold(0.0, f64::max);
        h /= 2.0;
        integral = next;
        nodes = cnt;
        if change < tol * 1e-3 * mag(&integral) {
            break;
        }
    }

    let ah = GradedVector::<BigComplex>::basis(&yring, 1, p).scale(&BigComplex::from_i64(a as i64, p));
    let ginv = inverse_gamma_series(&ah, c)?;
    let pref = (-(BigReal::from_rational(&lef.c0, p) * t)).exp() * inv_u;
    let rhs = (&ginv * &integral).scale(&BigComplex::real(pref));

    let abs_diff: Vec<f64> = lhs
        .coeffs()
        .iter()
        .zip(rhs.coeffs())
        .map(|(x, y)| (x.clone() - y.clone()).abs().to_f64())
        .collect();
    let rel_diff: Vec<f64> = abs_diff
        .iter()
        .zip(lhs.coeffs())
        .map(|(d, x)| d / x.abs().to_f64().max(1e-300))
        .collect();
    let max_rel_diff = rel_diff.iter().cloned().fold(0.0, f64::max);
    Ok(LaplaceReport {
        identity: format!("laplace_lefschetz(degree {a} in P{n})"),
        lhs,
        rhs,
        abs_diff,
        rel_diff,
        pass: max_rel_diff < tol,
        max_rel_diff,
        step: h,
        s_range: (s_min, s_max),
        nodes,
    })
}

/// Least-squares slope and intercept of `log Z + ((N−1)/2) log t` against t.
pub fn central_charge_decay_fit(ts: &[f64], zs: &[f64], n: usize) -> (f64, f64) {
    let ys: Vec<f64> = ts
        .iter()
        .zip(zs)
        .map(|(t, z)| z.ln() + (n as f64 - 1.0) / 2.0 * t.ln())
        .collect();
    let k = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let cov: f64 = ts.iter().zip(&ys).map(|(t, y)| (t - mt) * (y - my)).sum();
    let var: f64 = ts.iter().map(|t| (t - mt) * (t - mt)).sum();
    let slope = cov / var;
    (slope, my - slope * mt)
}
