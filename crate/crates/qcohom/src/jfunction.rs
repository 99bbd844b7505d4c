//! Truncated J-function series, quantum periods, quantum Lefschetz and the
//! quintic Picard–Fuchs check.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::json;

use crate::error::{Error, Result};
use crate::ring::{build_hypersurface_ambient_ring, build_projective_ring, tensor_ring, GradedVector, Ring};
use crate::scalars::{
    factorial, int, rat, rat_to_f64, rat_to_string, BigComplex, BigReal, ConstantTable, ExactRational, Prec, Scalar,
};

/// `J(t) = e^{c1 log t} Σ_{d=0}^{D} J_d t^d`.
#[derive(Clone, Debug)]
pub struct JSeries<S> {
    pub space: String,
    ring: Ring,
    index: u32,
    coeffs: Vec<GradedVector<S>>,
}

impl<S: Scalar> JSeries<S> {
    pub fn new(space: impl Into<String>, ring: &Ring, index: u32, coeffs: Vec<GradedVector<S>>) -> Result<Self> {
        let js = JSeries {
            space: space.into(),
            ring: ring.clone(),
            index,
            coeffs,
        };
        js.check()?;
        Ok(js)
    }

    /// `J_0 = 1` and `J_d = 0` unless the index divides d.
    pub fn check(&self) -> Result<()> {
        let first = self
            .coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty series".into()))?;
        let one = GradedVector::one(&self.ring, first.ctx());
        let diff = first - &one;
        if !diff
            .coeffs()
            .iter()
            .all(|c| c.to_complex(Prec::new(20)).max_abs().below_pow10(-15))
        {
            return Err(Error::InvalidArgument("J_0 must be 1".into()));
        }
        let r = self.index.max(1) as usize;
        for (d, jd) in self.coeffs.iter().enumerate() {
            if d % r != 0 && !jd.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "J_{d} nonzero but index {r} does not divide {d}"
                )));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    /// Truncation order D.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> &GradedVector<S> {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[GradedVector<S>] {
        &self.coeffs
    }

    pub fn to_complex(&self, p: Prec) -> JSeries<BigComplex> {
        JSeries {
            space: self.space.clone(),
            ring: self.ring.clone(),
            index: self.index,
            coeffs: self.coeffs.iter().map(|v| v.to_complex(p)).collect(),
        }
    }

    /// Multiplies every coefficient by `s` (J_0 = 1 is then no longer enforced).
    pub fn scaled(&self, s: &S) -> Self {
        JSeries {
            coeffs: self.coeffs.iter().map(|v| v.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// `{space, D, r, coefficients}`.
    pub fn to_json(&self) -> serde_json::Value {
        let coefficients: Vec<Vec<String>> = self
            .coeffs
            .iter()
            .map(|v| v.coeffs().iter().map(|c| c.render()).collect())
            .collect();
        json!({
            "space": self.space,
            "D": self.order(),
            "r": self.index,
            "basis": self.ring.basis.iter().map(|b| b.label.clone()).collect::<Vec<_>>(),
            "coefficients": coefficients,
        })
    }
}

/// `J_{P^{n-1}}`: J_{nd} = Π_{k=1}^{d} (h+k)^{-n} mod h^n.
pub fn j_projective(n: usize, order: usize) -> Result<JSeries<ExactRational>> {
    if n < 2 {
        return Err(Error::InvalidArgument("j_projective needs n >= 2".into()));
    }
    let ring = build_projective_ring(n);
    let mut coeffs = vec![GradedVector::zero(&ring, ()); order + 1];
    let mut q = vec![ExactRational::zero(); n];
    q[0] = int(1);
    coeffs[0] = GradedVector::one(&ring, ());
    let mut d = 1;
    while n * d <= order {
        let inv = inverse_linear(d as i64, n);
        for _ in 0..n {
            q = trunc_mul(&q, &inv);
        }
        coeffs[n * d] = GradedVector::new(&ring, q.clone())?;
        d += 1;
    }
    JSeries::new(ring.name.clone(), &ring, n as u32, coeffs)
}

/// `J_{X×Y}(t) = J_X(t) ⊗ J_Y(t)`: J_d = Σ_{a+b=d} J_a ⊗ J_b on the tensor ring.
pub fn j_product<S: Scalar>(jx: &JSeries<S>, jy: &JSeries<S>) -> Result<JSeries<S>> {
    let ring = tensor_ring(jx.ring(), jy.ring());
    let order = jx.order().min(jy.order());
    let n2 = jy.ring().rank();
    let ctx = jx.coeff(0).ctx();
    let mut coeffs = Vec::with_capacity(order + 1);
    for d in 0..=order {
        let mut v = vec![S::zero_in(ctx); ring.rank()];
        for a in 0..=d {
            let (xa, yb) = (jx.coeff(a), jy.coeff(d - a));
            if xa.is_zero() || yb.is_zero() {
                continue;
            }
            for (i, x) in xa.coeffs().iter().enumerate() {
                for (j, y) in yb.coeffs().iter().enumerate() {
                    v[i * n2 + j] = v[i * n2 + j].clone() + x.clone() * y.clone();
                }
            }
        }
        coeffs.push(GradedVector::new(&ring, v)?);
    }
    JSeries::new(ring.name.clone(), &ring, ring.index, coeffs)
}

/// `(h + k)^{-1}` mod h^n.
fn inverse_linear(k: i64, n: usize) -> Vec<ExactRational> {
    (0..n)
        .map(|j| {
            let v = rat(1, k).pow(j as i32 + 1);
            if j % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

pub(crate) fn trunc_mul(a: &[ExactRational], b: &[ExactRational]) -> Vec<ExactRational> {
    let n = a.len();
    let mut out = vec![ExactRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Quantum period `G(t) = ⟨[pt], J(t)⟩ = Σ G_d t^d`.
#[derive(Clone, Debug)]
pub struct QuantumPeriod<S> {
    pub index: u32,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> QuantumPeriod<S> {
    /// Indices d with nonzero G_d.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&d| !self.coeffs[d].is_exact_zero())
            .collect()
    }
}

impl QuantumPeriod<ExactRational> {
    /// CSV with header `d,G_d,float`, nonzero rows only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,G_d,float\n");
        for (d, g) in self.coeffs.iter().enumerate() {
            if !g.is_zero() {
                out.push_str(&format!("{d},{},{:e}\n", rat_to_string(g), rat_to_f64(g)));
            }
        }
        out
    }
}

/// H^0 components of the J-coefficients.
pub fn quantum_period<S: Scalar>(j: &JSeries<S>) -> QuantumPeriod<S> {
    QuantumPeriod {
        index: j.index,
        coeffs: j.coeffs.iter().map(|v| v.h0().clone()).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct LefschetzResult<S> {
    pub jy: JSeries<S>,
    /// `a!·⟨[pt], J_r⟩` when r − a = 1, else 0.
    pub c0: ExactRational,
    /// Mirror-map constant δ_{a,n}·a! of the Laurent model.
    pub c0_mirror: ExactRational,
    /// Solution of (T0/(r−a))^{r−a} = a^a (T_X/r)^r with T_X = r.
    pub t0: BigReal,
}

impl<S> LefschetzResult<S> {
    pub fn c0_consistent(&self) -> bool {
        self.c0 == self.c0_mirror
    }
}

/// `c0` for a degree-a hypersurface in P^n read off the ambient J-function.
pub fn c0_hypersurface(n: usize, a: usize) -> Result<ExactRational> {
    let r = n + 1;
    if a == 0 || a >= r {
        return Err(Error::InvalidArgument(format!("degree {a} in P{n} is not Fano")));
    }
    if r - a != 1 {
        return Ok(ExactRational::zero());
    }
    let jx = j_projective(r, r)?;
    Ok(ExactRational::from_integer(factorial(a as u64)) * jx.coeff(r).h0())
}

/// J-function of a degree-a hypersurface Y ⊂ P^n from the ambient J-function:
/// `J_Y = e^{(r−a)h log t − c0 t} Σ_m (ah+1)⋯(ah+am) i^*J_{rm} t^{(r−a)m}`,
/// with the e^{−c0 t} factor multiplied into the series.
pub fn quantum_lefschetz<S: Scalar>(jx: &JSeries<S>, a: usize, p: Prec) -> Result<LefschetzResult<S>> {
    let xring = jx.ring();
    let n = xring.dim;
    let r = n + 1;
    if jx.index() as usize != r || xring.rank() != r {
        return Err(Error::InvalidArgument(
            "quantum_lefschetz expects the J-function of P^n".into(),
        ));
    }
    if a == 0 || a >= r {
        return Err(Error::InvalidArgument(format!("invalid degree {a} for P{n}")));
    }
    let yring = build_hypersurface_ambient_ring(n, a)?;
    let ry = r - a;
    let ctx = jx.coeff(0).ctx();
    let restrict = |v: &GradedVector<S>| GradedVector::new(&yring, v.coeffs()[..n].to_vec()).expect("length n");
    let h = GradedVector::<S>::basis(&yring, 1, ctx);
    let ah = h.scale_rational(&int(a as i64));
    let m_max = jx.order() / r;
    let dy = ry * m_max;
    let mut pre = vec![GradedVector::zero(&yring, ctx); dy + 1];
    let mut twist = GradedVector::one(&yring, ctx);
    for m in 0..=m_max {
        if m > 0 {
            for k in (a * (m - 1) + 1)..=(a * m) {
                let lin = &ah + &GradedVector::one(&yring, ctx).scale_rational(&int(k as i64));
                twist = &twist * &lin;
            }
        }
        pre[ry * m] = &twist * &restrict(jx.coeff(r * m));
    }
    let c0 = c0_hypersurface(n, a)?;
    let coeffs = if c0.is_zero() {
        pre
    } else {
        // Cauchy product with e^{−c0 t}
        let e: Vec<S> = (0..=dy)
            .map(|k| {
                let q = ExactRational::new((-c0.clone()).to_integer().pow(k as u32), factorial(k as u64));
                S::from_rational(&q, ctx)
            })
            .collect();
        (0..=dy)
            .map(|d| {
                (0..=d).fold(GradedVector::zero(&yring, ctx), |acc, k| {
                    &acc + &pre[d - k].scale(&e[k])
                })
            })
            .collect()
    };
    let c0_mirror = if a == n {
        ExactRational::from_integer(factorial(a as u64))
    } else {
        ExactRational::zero()
    };
    let af = BigReal::from_i64(a as i64, p);
    let t0 = BigReal::from_i64(ry as i64, p) * (af.ln() * BigReal::from_rational(&rat(a as i64, ry as i64), p)).exp();
    let jy = JSeries::new(yring.name.clone(), &yring, ry as u32, coeffs)?;
    Ok(LefschetzResult { jy, c0, c0_mirror, t0 })
}

/// Value of a truncated J-series at a point, with a tail estimate.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: GradedVector<BigComplex>,
    /// Twice the magnitude of the last included nonzero term.
    pub tail: BigReal,
    /// False when the terms were not decreasing at the truncation order.
    pub converged: bool,
}

/// `e^{c1 (log|t| + i·log_branch)} Σ_d J_d t^d` at precision `p`.
pub fn evaluate_j<S: Scalar>(j: &JSeries<S>, t: &BigComplex, log_branch: &BigReal, p: Prec) -> Evaluation {
    let ring = j.ring();
    let t = t.to_complex(p);
    let mut sum = GradedVector::<BigComplex>::zero(ring, p);
    let mut pow = BigComplex::one(p);
    let mut mags: Vec<BigReal> = Vec::new();
    for (d, jd) in j.coeffs().iter().enumerate() {
        if d > 0 {
            pow = pow * t.clone();
        }
        if jd.is_zero() {
            continue;
        }
        let term = jd.to_complex(p).scale(&pow);
        let mag = term
            .coeffs()
            .iter()
            .map(|c| c.max_abs())
            .fold(BigReal::zero(p), BigReal::max);
        mags.push(mag);
        sum = &sum + &term;
    }
    let converged = mags.len() >= 2 && mags[mags.len() - 1] < mags[mags.len() - 2];
    let tail = mags.last().cloned().unwrap_or_else(|| BigReal::zero(p)) * BigReal::from_i64(2, p);
    let log_t = BigComplex::new(t.abs().ln(), log_branch.with_prec(p));
    let pref = ring
        .c1_vector()
        .to_complex(p)
        .scale(&log_t)
        .exp()
        .expect("c1 is nilpotent");
    Evaluation {
        value: &pref * &sum,
        tail,
        converged,
    }
}

/// Truncated polynomial in ε modulo ε^4.
#[derive(Clone, Debug, PartialEq)]
struct Eps4([ExactRational; 4]);

impl Eps4 {
    fn constant(c: ExactRational) -> Self {
        Eps4([c, ExactRational::zero(), ExactRational::zero(), ExactRational::zero()])
    }

    /// `c + s ε`.
    fn linear(c: i64, s: i64) -> Self {
        Eps4([int(c), int(s), ExactRational::zero(), ExactRational::zero()])
    }

    fn mul(&self, o: &Self) -> Self {
        let mut r = Eps4::constant(ExactRational::zero());
        for i in 0..4 {
            for j in 0..4 - i {
                r.0[i + j] += &self.0[i] * &o.0[j];
            }
        }
        r
    }

    fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for i in 0..4 {
            r.0[i] -= &o.0[i];
        }
        r
    }

    fn inv(&self) -> Self {
        let a0 = self.0[0].clone();
        // 1/(a0(1+u)) = (1 − u + u² − u³)/a0
        let u = Eps4([
            ExactRational::zero(),
            &self.0[1] / &a0,
            &self.0[2] / &a0,
            &self.0[3] / &a0,
        ]);
        let u2 = u.mul(&u);
        let u3 = u2.mul(&u);
        let mut s = Eps4::constant(int(1)).sub(&u);
        for i in 0..4 {
            s.0[i] += &u2.0[i];
            s.0[i] -= &u3.0[i];
            s.0[i] /= &a0;
        }
        s
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct PfReport {
    pub order: usize,
    /// Coefficient of t^{5n+5ε} in the operator applied to Φ, as ε-polynomials.
    pub residuals: Vec<[ExactRational; 4]>,
    pub annihilated: bool,
    /// The ε⁰ shadow (5n)!/(n!)^5 satisfies the integer recursion.
    pub classical_ok: bool,
}

/// Applies `θ⁴ − 5⁵ t⁵ (θ+1)(θ+2)(θ+3)(θ+4)` to
/// `Φ = Σ_n A_n(ε) t^{5n+5ε}`, `A_n = Π_{j≤5n}(j+5ε) / Π_{j≤n}(j+ε)^5`, over Q[ε]/(ε⁴).
pub fn quintic_pf_annihilation(order: usize) -> Result<PfReport> {
    if order < 1 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let a_n = |n: usize| -> Eps4 {
        let mut num = Eps4::constant(int(1));
        for j in 1..=5 * n {
            num = num.mul(&Eps4::linear(j as i64, 5));
        }
        let mut den = Eps4::constant(int(1));
        for j in 1..=n {
            let l = Eps4::linear(j as i64, 1);
            for _ in 0..5 {
                den = den.mul(&l);
            }
        }
        num.mul(&den.inv())
    };
    let mut residuals = Vec::new();
    let mut prev = a_n(0);
    for n in 0..=order {
        let an = a_n(n);
        let mut lhs = an.clone();
        let theta = Eps4::linear(5 * n as i64, 5);
        for _ in 0..4 {
            lhs = lhs.mul(&theta);
        }
        let res = if n == 0 {
            lhs
        } else {
            let mut rhs = prev.mul(&Eps4::constant(int(3125)));
            for j in 1..=4 {
                rhs = rhs.mul(&Eps4::linear(5 * (n as i64 - 1) + j, 5));
            }
            lhs.sub(&rhs)
        };
        residuals.push(res.0.clone());
        prev = an;
    }
    let annihilated = residuals.iter().all(|r| Eps4(r.clone()).is_zero());
    let classical = |n: u64| factorial(5 * n) / factorial(n).pow(5);
    let classical_ok = (1..=order as u64).all(|n| {
        let lhs = classical(n) * BigInt::from(n).pow(4) * BigInt::from(625);
        let rhs = classical(n - 1)
            * BigInt::from(3125)
            * (1..=4).fold(BigInt::from(1), |acc, j| acc * BigInt::from(5 * (n - 1) + j));
        lhs == rhs
    });
    Ok(PfReport {
        order,
        residuals,
        annihilated,
        classical_ok,
    })
}

/// Coefficients of `Γ(1+5ε)/Γ(1+ε)^5` in ε up to ε³; this is 1/Γ̂ of the quintic threefold.
pub fn quintic_gamma_factor(c: &ConstantTable) -> Result<Vec<BigReal>> {
    let p = c.prec;
    // log = Σ_{k≥2} (−1)^k ζ(k) (5^k − 5) ε^k / k; the γ terms cancel
    let mut lg = vec![BigReal::zero(p); 4];
    for k in 2..4usize {
        let v = c.zeta(k)?.clone() * BigReal::from_i64(5i64.pow(k as u32) - 5, p) / BigReal::from_i64(k as i64, p);
        lg[k] = if k % 2 == 0 { v } else { -v };
    }
    // exp of a series starting at ε²: 1 + lg (higher powers vanish mod ε⁴)
    let mut out = lg;
    out[0] = BigReal::one(p);
    Ok(out)
}
