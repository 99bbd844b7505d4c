//! Laurent-polynomial mirrors: toric mirrors from rays, constant-term periods,
//! conifold points, Przyjalkowski models, Fekete diagnostics and Property O.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::jfunction::QuantumPeriod;
use crate::ring::{null_space, rank_of};
use crate::scalars::{factorial, int, parse_rational, rat_to_string, BigComplex, BigReal, ExactRational, Prec};

/// Finite sum `Σ c_e x^e` over exponent vectors in ℤ^m.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, ExactRational>,
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{k}", i + 1)
                        }
                    })
                    .collect();
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => rat_to_string(c),
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{}*{}", rat_to_string(c), mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: ExactRational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exponent: Vec<i64>, c: ExactRational) -> Self {
        let mut p = Self::zero(exponent.len());
        if !c.is_zero() {
            p.terms.insert(exponent, c);
        }
        p
    }

    /// Sums the given terms, merging repeated exponents and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, ExactRational)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidArgument(format!(
                    "exponent {e:?} has wrong length, expected {nvars}"
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<i64>, c: ExactRational) {
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in sorted exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &ExactRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> ExactRational {
        self.terms.get(e).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn constant_term(&self) -> ExactRational {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn has_positive_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, int(1));
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Non-constant exponents (the vertices and interior points of the Newton polytope).
    pub fn exponents(&self) -> Vec<Vec<i64>> {
        self.terms
            .keys()
            .filter(|e| e.iter().any(|&k| k != 0))
            .cloned()
            .collect()
    }

    /// `f(e^u)` at a real point given in logarithmic coordinates.
    pub fn eval_log(&self, u: &[BigReal], p: Prec) -> BigReal {
        self.terms.iter().fold(BigReal::zero(p), |acc, (e, c)| {
            acc + BigReal::from_rational(c, p) * dot_exp(e, u, p)
        })
    }

    /// `[{exponents, coefficient}]` with coefficients as `p/q` strings.
    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .terms
            .iter()
            .map(|(e, c)| json!({"exponents": e, "coefficient": rat_to_string(c)}))
            .collect::<Vec<_>>())
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("expected an array of terms".into()))?;
        let mut terms = Vec::new();
        let mut nvars = None;
        for t in arr {
            let e: Vec<i64> = t["exponents"]
                .as_array()
                .ok_or_else(|| Error::Parse("term without exponents".into()))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::Parse("non-integer exponent".into())))
                .collect::<Result<_>>()?;
            let c = match &t["coefficient"] {
                serde_json::Value::String(s) => parse_rational(s)?,
                serde_json::Value::Number(n) => int(n
                    .as_i64()
                    .ok_or_else(|| Error::Parse("coefficient must be integer or p/q".into()))?),
                _ => return Err(Error::Parse("missing coefficient".into())),
            };
            if *nvars.get_or_insert(e.len()) != e.len() {
                return Err(Error::Parse("exponent vectors of different lengths".into()));
            }
            terms.push((e, c));
        }
        Self::from_terms(nvars.unwrap_or(0), terms)
    }
}

fn dot_exp(e: &[i64], u: &[BigReal], p: Prec) -> BigReal {
    let s = e.iter().zip(u).fold(BigReal::zero(p), |acc, (&k, x)| {
        acc + BigReal::from_i64(k, p) * x.clone()
    });
    s.exp()
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable counts differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable counts differ");
        let mut acc: BTreeMap<Vec<i64>, ExactRational> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let e: Vec<i64> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                *acc.entry(e).or_insert_with(ExactRational::zero) += x * y;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        LaurentPolynomial {
            nvars: self.nvars,
            terms: acc,
        }
    }
}

/// True when the origin lies in the interior of the convex hull of `points`.
///
/// The origin fails to be interior exactly when some nonzero functional ℓ has
/// ℓ·b ≥ 0 on every point; such an ℓ can be taken to vanish on a rank m−1
/// subset of the points.
pub fn origin_in_interior(points: &[Vec<i64>], m: usize) -> bool {
    let rows: Vec<Vec<ExactRational>> = points.iter().map(|b| b.iter().map(|&k| int(k)).collect()).collect();
    if m == 0 {
        return true;
    }
    if rows.is_empty() || rank_of(rows.clone()) < m {
        return false;
    }
    let n = rows.len();
    let mut subset = Vec::with_capacity(m - 1);
    !find_supporting(&rows, m, 0, n, &mut subset)
}

fn find_supporting(rows: &[Vec<ExactRational>], m: usize, start: usize, n: usize, subset: &mut Vec<usize>) -> bool {
    if subset.len() == m - 1 {
        let sub: Vec<Vec<ExactRational>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let ns = null_space(sub, m);
        if ns.len() != 1 {
            return false;
        }
        let l = &ns[0];
        let vals: Vec<ExactRational> = rows
            .iter()
            .map(|b| b.iter().zip(l).fold(ExactRational::zero(), |a, (x, y)| a + x * y))
            .collect();
        return vals.iter().all(|v| !v.is_negative()) || vals.iter().all(|v| !v.is_positive());
    }
    for i in start..n {
        subset.push(i);
        if find_supporting(rows, m, i + 1, n, subset) {
            return true;
        }
        subset.pop();
    }
    false
}

/// `f = Σ x^{b_j}` for the rays of a complete fan.
pub fn toric_mirror_from_rays(rays: &[Vec<i64>]) -> Result<LaurentPolynomial> {
    let m = rays
        .first()
        .map(|r| r.len())
        .ok_or_else(|| Error::InvalidArgument("no rays".into()))?;
    for r in rays {
        if r.len() != m {
            return Err(Error::InvalidArgument("rays of different dimensions".into()));
        }
        let g = r.iter().fold(0i64, |g, &k| g.gcd(&k));
        if g != 1 {
            return Err(Error::InvalidArgument(format!("ray {r:?} is not primitive")));
        }
    }
    if !origin_in_interior(rays, m) {
        return Err(Error::OriginNotInterior);
    }
    LaurentPolynomial::from_terms(m, rays.iter().map(|r| (r.clone(), int(1))))
}

/// Parses rays given as a JSON array of integer vectors.
pub fn rays_from_json(s: &str) -> Result<Vec<Vec<i64>>> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("rays: {e}")))
}

/// Constant terms `Const(f^d)` for `d = 0..=N`, possibly cut short by the budget.
#[derive(Clone, Debug)]
pub struct ConstantTerms {
    pub values: Vec<ExactRational>,
    /// Set when the term budget stopped the computation early.
    pub aborted: Option<String>,
}

/// Default cap on the number of stored monomials per power.
pub const DEFAULT_TERM_BUDGET: usize = 4_000_000;

type IntPoly = HashMap<Vec<i32>, BigInt>;

/// Computes `Const(f^d)` for `d ≤ N` exactly.
///
/// The coefficients are scaled to integers, powers up to ⌈N/2⌉ are built with
/// exponents pruned when they cannot return to the origin in the remaining
/// steps, and each constant term is a dot product of two half powers.
pub fn constant_terms(f: &LaurentPolynomial, n_max: usize, budget: usize) -> ConstantTerms {
    let m = f.nvars;
    let lcm = f.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let g: Vec<(Vec<i32>, BigInt)> = f
        .terms
        .iter()
        .map(|(e, c)| (e.iter().map(|&k| k as i32).collect(), (c * big_rat(&lcm)).to_integer()))
        .collect();
    let lo: Vec<i64> = (0..m)
        .map(|i| g.iter().map(|(e, _)| e[i] as i64).min().unwrap_or(0).min(0))
        .collect();
    let hi: Vec<i64> = (0..m)
        .map(|i| g.iter().map(|(e, _)| e[i] as i64).max().unwrap_or(0).max(0))
        .collect();
    let keep = |e: &[i32], s: usize| {
        e.iter().enumerate().all(|(i, &k)| {
            let k = k as i64;
            k + s as i64 * lo[i] <= 0 && 0 <= k + s as i64 * hi[i]
        })
    };
    let half = n_max.div_ceil(2);
    let mut powers: Vec<IntPoly> = vec![HashMap::from([(vec![0i32; m], BigInt::one())])];
    let mut aborted = None;
    for k in 1..=half {
        let prev = &powers[k - 1];
        let mut next: IntPoly = HashMap::with_capacity(prev.len() * g.len());
        for (e, c) in prev {
            for (b, gc) in &g {
                let s: Vec<i32> = e.iter().zip(b).map(|(x, y)| x + y).collect();
                if !keep(&s, n_max - k) {
                    continue;
                }
                *next.entry(s).or_insert_with(BigInt::zero) += c * gc;
            }
        }
        next.retain(|_, v| !v.is_zero());
        if next.len() > budget {
            aborted = Some(format!("power {k} needs {} monomials, budget is {budget}", next.len()));
            break;
        }
        powers.push(next);
    }
    let have = powers.len() - 1;
    let reach = if aborted.is_some() { 2 * have } else { n_max };
    let values = (0..=reach.min(n_max))
        .map(|d| {
            let a = d.div_ceil(2);
            let b = d - a;
            let (pa, pb) = (&powers[a], &powers[b]);
            let s: BigInt = pa
                .par_iter()
                .filter_map(|(e, c)| {
                    let neg: Vec<i32> = e.iter().map(|k| -k).collect();
                    pb.get(&neg).map(|c2| c * c2)
                })
                .reduce(BigInt::zero, |x, y| x + y);
            ExactRational::new(s, lcm.pow(d as u32))
        })
        .collect();
    ConstantTerms { values, aborted }
}

fn big_rat(n: &BigInt) -> ExactRational {
    ExactRational::from_integer(n.clone())
}

/// Quantum period `Σ Const(f^d)/d! t^d`; errors if the budget is exhausted.
pub fn constant_term_series(f: &LaurentPolynomial, n_max: usize) -> Result<QuantumPeriod<ExactRational>> {
    let ct = constant_terms(f, n_max, DEFAULT_TERM_BUDGET);
    if let Some(msg) = ct.aborted {
        return Err(Error::ResourceLimit(format!(
            "{msg}; computed Const(f^d) for d ≤ {}",
            ct.values.len() - 1
        )));
    }
    Ok(period_from_constants(&ct.values))
}

/// `G_d = Const(f^d)/d!` with the index read off as the gcd of the support.
pub fn period_from_constants(values: &[ExactRational]) -> QuantumPeriod<ExactRational> {
    let coeffs: Vec<ExactRational> = values
        .iter()
        .enumerate()
        .map(|(d, c)| c / ExactRational::from_integer(factorial(d as u64)))
        .collect();
    let index = (1..coeffs.len())
        .filter(|&d| !coeffs[d].is_zero())
        .fold(0usize, |g, d| g.gcd(&d));
    QuantumPeriod {
        index: index as u32,
        coeffs,
    }
}

/// Minimum of a positive Laurent polynomial on the positive orthant.
#[derive(Clone, Debug)]
pub struct ConifoldResult {
    pub x_con: Vec<BigReal>,
    pub t_con: BigReal,
    pub newton_iterations: usize,
    pub gradient_norm: BigReal,
}

const NEWTON_CAP: usize = 200;

/// Newton iteration in logarithmic coordinates started at `x = (1,…,1)`.
pub fn conifold_point(f: &LaurentPolynomial, tol: f64, p: Prec) -> Result<ConifoldResult> {
    conifold_point_from(f, &vec![BigReal::zero(p); f.nvars], tol, p)
}

/// Newton iteration in logarithmic coordinates from `u0 = log x0`.
pub fn conifold_point_from(f: &LaurentPolynomial, u0: &[BigReal], tol: f64, p: Prec) -> Result<ConifoldResult> {
    if !f.has_positive_coefficients() || f.is_empty() {
        return Err(Error::InvalidArgument(
            "conifold point needs positive coefficients".into(),
        ));
    }
    if !origin_in_interior(&f.exponents(), f.nvars) {
        return Err(Error::OriginNotInterior);
    }
    let m = f.nvars;
    let wp = p.plus(10);
    let terms: Vec<(Vec<i64>, BigReal)> = f
        .terms
        .iter()
        .map(|(e, c)| (e.clone(), BigReal::from_rational(c, wp)))
        .collect();
    let tol_r = BigReal::from_f64(tol, wp);
    let mut u: Vec<BigReal> = u0.iter().map(|x| x.with_prec(wp)).collect();
    let value = |u: &[BigReal]| {
        terms
            .iter()
            .fold(BigReal::zero(wp), |a, (e, c)| a + c.clone() * dot_exp(e, u, wp))
    };
    for it in 0..=NEWTON_CAP {
        let mut grad = vec![BigReal::zero(wp); m];
        let mut hess = vec![vec![BigReal::zero(wp); m]; m];
        for (e, c) in &terms {
            let w = c.clone() * dot_exp(e, &u, wp);
            for i in 0..m {
                if e[i] == 0 {
                    continue;
                }
                let wi = w.clone() * BigReal::from_i64(e[i], wp);
                grad[i] = grad[i].clone() + wi.clone();
                for j in 0..m {
                    if e[j] != 0 {
                        hess[i][j] = hess[i][j].clone() + wi.clone() * BigReal::from_i64(e[j], wp);
                    }
                }
            }
        }
        let gnorm = grad
            .iter()
            .fold(BigReal::zero(wp), |a, g| a + g.clone() * g.clone())
            .sqrt();
        if gnorm < tol_r {
            if !positive_definite(&hess) {
                return Err(Error::NonConvergence("log-Hessian is not positive definite".into()));
            }
            let x_con = u.iter().map(|x| x.exp().with_prec(p)).collect();
            return Ok(ConifoldResult {
                x_con,
                t_con: value(&u).with_prec(p),
                newton_iterations: it,
                gradient_norm: gnorm.with_prec(p),
            });
        }
        let step = solve_linear(hess, grad.iter().map(|g| -g.clone()).collect())
            .ok_or_else(|| Error::NonConvergence("singular log-Hessian".into()))?;
        let f0 = value(&u);
        let mut scale = BigReal::one(wp);
        let half = BigReal::from_rational(&crate::scalars::rat(1, 2), wp);
        loop {
            let cand: Vec<BigReal> = u
                .iter()
                .zip(&step)
                .map(|(a, s)| a.clone() + s.clone() * scale.clone())
                .collect();
            if value(&cand) <= f0 || scale.log10_abs() < -30.0 {
                u = cand;
                break;
            }
            scale = scale * half.clone();
        }
    }
    Err(Error::NonConvergence(format!(
        "Newton did not reach tolerance {tol:e} in {NEWTON_CAP} steps"
    )))
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve_linear(mut a: Vec<Vec<BigReal>>, mut b: Vec<BigReal>) -> Option<Vec<BigReal>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().cmp_total(&a[j][col].abs()))?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let factor = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                a[r][c] = a[r][c].clone() - factor.clone() * a[col][c].clone();
            }
            b[r] = b[r].clone() - factor * b[col].clone();
        }
    }
    let mut x = b.clone();
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in r + 1..n {
            s = s - a[r][c].clone() * x[c].clone();
        }
        x[r] = s / a[r][r].clone();
    }
    Some(x)
}

fn positive_definite(h: &[Vec<BigReal>]) -> bool {
    // Cholesky
    let n = h.len();
    let mut l = vec![vec![None::<BigReal>; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = h[i][j].clone();
            for k in 0..j {
                s = s - l[i][k].clone().unwrap() * l[j][k].clone().unwrap();
            }
            if i == j {
                if s.is_negative() || s.is_zero() {
                    return false;
                }
                l[i][j] = Some(s.sqrt());
            } else {
                l[i][j] = Some(s / l[j][j].clone().unwrap());
            }
        }
    }
    true
}

/// Laurent model of a degree-d hypersurface in P^n together with its constant shift.
#[derive(Clone, Debug)]
pub struct PrzyjalkowskiModel {
    pub n: usize,
    pub d: usize,
    /// Positive Laurent polynomial in x_1..x_{n−d}, y_{n−d+1}..y_{n−1}.
    pub f: LaurentPolynomial,
    /// δ_{d,n}·d!, subtracted from `f`.
    pub c0_shift: ExactRational,
}

impl PrzyjalkowskiModel {
    /// `f − c0_shift` as a single Laurent polynomial.
    pub fn shifted(&self) -> LaurentPolynomial {
        &self.f + &LaurentPolynomial::constant(self.f.nvars, -self.c0_shift.clone())
    }

    /// Conifold value of the shifted model.
    pub fn conifold(&self, tol: f64, p: Prec) -> Result<ConifoldResult> {
        let mut r = conifold_point(&self.f, tol, p)?;
        r.t_con = r.t_con - BigReal::from_rational(&self.c0_shift, p);
        Ok(r)
    }
}

/// `f = (y_{n−d+1}+⋯+y_{n−1}+1)^d / (Π x_i Π y_j) + x_1 + ⋯ + x_{n−d}`.
pub fn przyjalkowski_model(n: usize, d: usize) -> Result<PrzyjalkowskiModel> {
    if d < 1 || d > n {
        return Err(Error::InvalidArgument(format!(
            "degree {d} hypersurface in P{n} is not Fano"
        )));
    }
    let nx = n - d;
    let m = nx + d - 1;
    let mut f = LaurentPolynomial::zero(m);
    for i in 0..nx {
        let mut e = vec![0; m];
        e[i] = 1;
        f = &f + &LaurentPolynomial::monomial(e, int(1));
    }
    let mut sum = LaurentPolynomial::constant(m, int(1));
    for j in nx..m {
        let mut e = vec![0; m];
        e[j] = 1;
        sum = &sum + &LaurentPolynomial::monomial(e, int(1));
    }
    let denom = LaurentPolynomial::monomial(vec![-1; m], int(1));
    f = &f + &(&sum.pow(d as u32) * &denom);
    let c0_shift = if d == n {
        ExactRational::from_integer(factorial(d as u64))
    } else {
        ExactRational::zero()
    };
    Ok(PrzyjalkowskiModel { n, d, f, c0_shift })
}

/// Supermultiplicativity and growth of `Const(f^{rn})`.
#[derive(Clone, Debug)]
pub struct FeketeReport {
    pub r: usize,
    /// `α_n = log Const(f^{rn}) / (rn)` for n = 1..=N (None where the constant term vanishes).
    pub alpha: Vec<Option<f64>>,
    /// Pairs (a, b) with `Const(f^{r(a+b)}) < Const(f^{ra}) Const(f^{rb})`.
    pub violations: Vec<(usize, usize)>,
    pub verdict: FeketeVerdict,
    /// α_N, the limit estimate.
    pub limit_estimate: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeketeVerdict {
    Supermultiplicative,
    Violated,
    HypothesisViolated,
}

/// Checks `Const(f^{r(a+b)}) ≥ Const(f^{ra})·Const(f^{rb})` for all a, b ≥ 1 with a + b ≤ N.
pub fn fekete_limit(f: &LaurentPolynomial, r: usize, n_max: usize) -> Result<FeketeReport> {
    if !f.has_positive_coefficients() {
        return Err(Error::InvalidArgument(
            "Fekete check needs nonnegative coefficients".into(),
        ));
    }
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let ct = constant_terms(f, r * n_max, DEFAULT_TERM_BUDGET);
    if let Some(msg) = ct.aborted {
        return Err(Error::ResourceLimit(msg));
    }
    let c = |k: usize| &ct.values[r * k];
    let alpha: Vec<Option<f64>> = (1..=n_max)
        .map(|k| {
            let v = c(k);
            if v.is_positive() {
                Some(ln_rational(v) / (r * k) as f64)
            } else {
                None
            }
        })
        .collect();
    let mut violations = Vec::new();
    for a in 1..n_max {
        for b in a..=(n_max - a) {
            if c(a + b) < &(c(a) * c(b)) {
                violations.push((a, b));
            }
        }
    }
    let verdict = if alpha.iter().any(|a| a.is_none()) {
        FeketeVerdict::HypothesisViolated
    } else if violations.is_empty() {
        FeketeVerdict::Supermultiplicative
    } else {
        FeketeVerdict::Violated
    };
    let limit_estimate = alpha.last().copied().flatten();
    Ok(FeketeReport {
        r,
        alpha,
        violations,
        verdict,
        limit_estimate,
    })
}

/// Natural log of a positive rational without overflowing f64.
pub(crate) fn ln_rational(q: &ExactRational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::NAN).abs().ln();
    }
    let shift = bits - 900;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Verdict on Property O for a spectrum of c1⋆0.
#[derive(Clone, Debug)]
pub struct PropertyOReport {
    /// Spectral radius.
    pub t: BigReal,
    /// Multiplicity of T itself (0 if T is not an eigenvalue).
    pub t_multiplicity: usize,
    /// T is an eigenvalue of multiplicity one.
    pub condition_1: bool,
    /// Every eigenvalue of modulus T has the form ζT with ζ^r = 1.
    pub condition_2: bool,
    pub satisfied: bool,
}

/// Checks the two parts of Property O with tolerance 10^{−P+15}.
pub fn property_o_report(spectrum: &[(BigComplex, usize)], r: u32, p: Prec) -> Result<PropertyOReport> {
    if spectrum.is_empty() {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let tol_exp = 15 - p.digits as i64;
    let t = spectrum
        .iter()
        .map(|(u, _)| u.abs())
        .fold(BigReal::zero(p), BigReal::max);
    let t_c = BigComplex::real(t.clone());
    let close = |a: &BigComplex, b: &BigComplex| (a.clone() - b.clone()).abs().below_pow10(tol_exp);
    let t_multiplicity: usize = spectrum.iter().filter(|(u, _)| close(u, &t_c)).map(|(_, m)| m).sum();
    let pi = BigReal::pi(p);
    let roots: Vec<BigComplex> = (0..r.max(1))
        .map(|k| {
            BigComplex::cis(
                &(pi.clone() * BigReal::from_rational(&crate::scalars::rat(2 * k as i64, r.max(1) as i64), p)),
            )
        })
        .collect();
    let condition_2 = spectrum
        .iter()
        .filter(|(u, _)| (u.abs() - t.clone()).abs().below_pow10(tol_exp))
        .all(|(u, _)| roots.iter().any(|z| close(u, &(z.clone() * t_c.clone()))));
    let condition_1 = t_multiplicity == 1;
    Ok(PropertyOReport {
        t,
        t_multiplicity,
        condition_1,
        condition_2,
        satisfied: condition_1 && condition_2,
    })
}

/// Spectrum `{n e^{−2πik/n}}` of c1⋆0 on P^{n−1}.
pub fn projective_spectrum(n: usize, p: Prec) -> Vec<(BigComplex, usize)> {
    let pi = BigReal::pi(p);
    (0..n)
        .map(|k| {
            let theta = -(pi.clone() * BigReal::from_rational(&crate::scalars::rat(2 * k as i64, n as i64), p));
            (BigComplex::from_polar(&BigReal::from_i64(n as i64, p), &theta), 1)
        })
        .collect()
}
