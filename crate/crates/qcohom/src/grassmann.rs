//! Grassmannians Gr(r, n): Schubert calculus, the c1⋆0 spectrum, the
//! abelian/non-abelian J-function, the Eguchi–Hori–Xiong mirror and the
//! Satake identification with wedge powers of H^*(P^{n−1}).
//!
//! Cohomology is modelled on symmetric polynomials in the Chern roots
//! x_1, …, x_r of the dual tautological bundle. Antisymmetric polynomials are
//! never divided by the Vandermonde numerically: the coefficient of the
//! strictly decreasing monomial x^K is the coefficient of the Schur class
//! σ_{K−δ}, δ = (r−1, …, 1, 0).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jfunction::{j_projective, JSeries, QuantumPeriod};
use crate::mirror::{constant_term_series, property_o_report, LaurentPolynomial, PropertyOReport};
use crate::ring::{cup, BasisElement, CohomologyRing, GradedVector, KClass, Ring};
use crate::scalars::{binomial_poly, factorial, int, rat, BigComplex, BigReal, ConstantTable, ExactRational, Prec};

/// Weakly decreasing sequence of r nonnegative parts (zeros kept).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty(r: usize) -> Self {
        Partition(vec![0; r])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&p| p == 0)
    }

    /// |μ|.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.0.len() <= rows && self.0.first().is_none_or(|&p| p <= cols)
    }

    /// `σ21` style label, `1` for the empty partition.
    pub fn label(&self) -> String {
        if self.is_empty() {
            return "1".into();
        }
        let nz: Vec<usize> = self.0.iter().copied().filter(|&p| p > 0).collect();
        if nz.iter().all(|&p| p < 10) {
            format!("σ{}", nz.iter().map(|p| p.to_string()).collect::<String>())
        } else {
            format!("σ({})", nz.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
        }
    }

    /// Strictly decreasing tuple μ + δ.
    pub fn shifted(&self) -> Vec<usize> {
        let r = self.0.len();
        self.0.iter().enumerate().map(|(i, &m)| m + r - 1 - i).collect()
    }

    /// Inverse of [`Partition::shifted`].
    pub fn from_shifted(k: &[usize]) -> Result<Self> {
        let r = k.len();
        if k.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidArgument(format!("{k:?} is not strictly decreasing")));
        }
        Partition::new(k.iter().enumerate().map(|(i, &x)| x - (r - 1 - i)).collect())
    }

    /// Complement in the r×(n−r) box, reversed.
    pub fn complement(&self, cols: usize) -> Self {
        Partition(self.0.iter().rev().map(|&p| cols - p).collect())
    }
}

fn check_rn(r: usize, n: usize) -> Result<()> {
    if r == 0 || r >= n {
        return Err(Error::InvalidArgument(format!("Gr({r},{n}) needs 1 ≤ r ≤ n−1")));
    }
    Ok(())
}

/// Partitions in the r×(n−r) box ordered by size, then reverse lexicographically.
pub fn box_partitions(r: usize, n: usize) -> Vec<Partition> {
    let w = n - r;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(r: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if cur.len() == r {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (0..=max).rev() {
            cur.push(p);
            rec(r, p, cur, out);
            cur.pop();
        }
    }
    rec(r, w, &mut cur, &mut out);
    out.sort_by(|a, b| a.size().cmp(&b.size()).then(b.0.cmp(&a.0)));
    out
}

type Comb = BTreeMap<Partition, ExactRational>;

fn comb_add(acc: &mut Comb, p: Partition, c: ExactRational) {
    let e = acc.entry(p).or_insert_with(ExactRational::zero);
    *e += c;
}

/// Multiplication by h_k: sum over horizontal k-strips, truncated to the box.
fn pieri(v: &Comb, k: usize, w: usize) -> Comb {
    let mut out = Comb::new();
    for (mu, c) in v {
        let mut nu = mu.0.clone();
        fn rec(i: usize, left: usize, mu: &[usize], w: usize, nu: &mut Vec<usize>, c: &ExactRational, out: &mut Comb) {
            if i == mu.len() {
                if left == 0 {
                    comb_add(out, Partition(nu.clone()), c.clone());
                }
                return;
            }
            let upper = if i == 0 { w } else { mu[i - 1] };
            let max_add = upper.saturating_sub(mu[i]).min(left);
            for a in 0..=max_add {
                nu[i] = mu[i] + a;
                rec(i + 1, left - a, mu, w, nu, c, out);
            }
            nu[i] = mu[i];
        }
        rec(0, k, &mu.0, w, &mut nu, c, &mut out);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Permutations of 0..r with signs.
fn permutations(r: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        if cur.len() == used.len() {
            out.push((cur.clone(), perm_sign(cur)));
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(r), &mut vec![false; r], &mut out);
    out
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// `s_λ · v` via the Jacobi–Trudi expansion s_λ = det(h_{λ_i − i + j}) and Pieri.
fn schur_times(lambda: &Partition, v: &Comb, w: usize) -> Comb {
    let l = lambda.0.iter().filter(|&&p| p > 0).count();
    if l == 0 {
        return v.clone();
    }
    let mut out = Comb::new();
    for (sigma, sgn) in permutations(l) {
        let mut cur = v.clone();
        let mut dead = false;
        for i in 0..l {
            let k = lambda.0[i] as i64 - i as i64 + sigma[i] as i64;
            if k < 0 {
                dead = true;
                break;
            }
            if k > 0 {
                cur = pieri(&cur, k as usize, w);
            }
            if cur.is_empty() {
                break;
            }
        }
        if dead {
            continue;
        }
        for (p, c) in cur {
            comb_add(&mut out, p, c * int(sgn));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Littlewood–Richardson product σ_λ σ_μ in H^*(Gr(r, r+w)).
pub fn lr_product(lambda: &Partition, mu: &Partition, w: usize) -> BTreeMap<Partition, ExactRational> {
    let start = Comb::from([(mu.clone(), int(1))]);
    schur_times(lambda, &start, w)
}

/// Polynomials in r variables with nonnegative exponents.
type Poly = BTreeMap<Vec<usize>, ExactRational>;

fn poly_mul(a: &Poly, b: &Poly, max_deg: usize) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        let da: usize = ea.iter().sum();
        for (eb, cb) in b {
            if da + eb.iter().sum::<usize>() > max_deg {
                continue;
            }
            let e: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(ExactRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_add_scaled(acc: &mut Poly, b: &Poly, s: &ExactRational) {
    for (e, c) in b {
        *acc.entry(e.clone()).or_insert_with(ExactRational::zero) += c * s;
    }
    acc.retain(|_, c| !c.is_zero());
}

/// `e^{a·x}` truncated at total degree `max_deg`.
fn exp_linear(a: &[i64], max_deg: usize) -> Poly {
    let r = a.len();
    let mut lin = Poly::new();
    for (i, &ai) in a.iter().enumerate() {
        if ai != 0 {
            let mut e = vec![0; r];
            e[i] = 1;
            lin.insert(e, int(ai));
        }
    }
    let mut out = Poly::from([(vec![0; r], int(1))]);
    let mut pow = out.clone();
    for k in 1..=max_deg {
        pow = poly_mul(&pow, &lin, max_deg);
        if pow.is_empty() {
            break;
        }
        poly_add_scaled(&mut out, &pow, &ExactRational::new(1.into(), factorial(k as u64)));
    }
    out
}

/// Vandermonde a_δ = det(x_i^{r−j}).
fn vandermonde(r: usize) -> Poly {
    let mut out = Poly::new();
    for (sigma, sgn) in permutations(r) {
        let e: Vec<usize> = (0..r).map(|i| r - 1 - sigma[i]).collect();
        out.insert(e, int(sgn));
    }
    out
}

/// Schur expansion of a symmetric polynomial, keeping classes in the r×w box.
fn symmetric_to_schur(f: &Poly, r: usize, w: usize) -> Comb {
    let max = f.keys().map(|e| e.iter().sum::<usize>()).max().unwrap_or(0) + r * (r - 1) / 2;
    let prod = poly_mul(f, &vandermonde(r), max);
    let mut out = Comb::new();
    for (k, c) in prod {
        if k.windows(2).all(|p| p[0] > p[1]) {
            let mu = Partition::from_shifted(&k).expect("strictly decreasing");
            if mu.fits(r, w) {
                comb_add(&mut out, mu, c);
            }
        }
    }
    out
}

/// H^*(Gr(r, n)) in the Schubert basis.
pub fn schubert_ring(r: usize, n: usize) -> Result<Ring> {
    check_rn(r, n)?;
    let w = n - r;
    let dim = r * w;
    let parts = box_partitions(r, n);
    let pos: BTreeMap<Partition, usize> = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let basis = parts
        .iter()
        .map(|p| BasisElement {
            label: p.label(),
            degree: p.size(),
        })
        .collect();
    let mut products = Vec::new();
    for i in 0..parts.len() {
        for j in i..parts.len() {
            if parts[i].size() + parts[j].size() > dim {
                continue;
            }
            let prod = lr_product(&parts[i], &parts[j], w);
            let terms = prod.into_iter().map(|(p, c)| (pos[&p], c)).collect();
            products.push((i, j, terms));
        }
    }
    let rank = parts.len();
    let mut integral = vec![ExactRational::zero(); rank];
    integral[rank - 1] = int(1);
    let mut c1 = vec![ExactRational::zero(); rank];
    if rank > 1 {
        c1[1] = int(n as i64);
    }
    // ch(S^∨ ⊗ Q) = n Σ e^{x_i} − Σ_{i,j} e^{x_i − x_j}
    let mut ch = Poly::new();
    for i in 0..r {
        let mut a = vec![0i64; r];
        a[i] = 1;
        poly_add_scaled(&mut ch, &exp_linear(&a, dim), &int(n as i64));
        for j in 0..r {
            let mut a = vec![0i64; r];
            a[i] += 1;
            a[j] -= 1;
            poly_add_scaled(&mut ch, &exp_linear(&a, dim), &int(-1));
        }
    }
    let mut ch_tf = vec![ExactRational::zero(); rank];
    for (p, c) in symmetric_to_schur(&ch, r, w) {
        ch_tf[pos[&p]] += c;
    }
    CohomologyRing::from_parts(
        format!("Gr({r},{n})"),
        dim,
        basis,
        products,
        integral,
        c1,
        ch_tf,
        n as u32,
    )
}

fn partition_index(ring: &Ring, mu: &Partition, r: usize, n: usize) -> Result<usize> {
    box_partitions(r, n)
        .iter()
        .position(|p| p == mu)
        .filter(|&i| i < ring.rank())
        .ok_or_else(|| Error::InvalidArgument(format!("{mu:?} is not in the {r}×{} box", n - r)))
}

fn ring_rn(ring: &Ring) -> Result<(usize, usize)> {
    let name = ring.name.strip_prefix("Gr(").and_then(|s| s.strip_suffix(')'));
    let parsed = name.and_then(|s| {
        let (a, b) = s.split_once(',')?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
    });
    parsed.ok_or_else(|| Error::InvalidArgument(format!("{} is not a Grassmannian ring", ring.name)))
}

/// `ch(E_μ) = s_μ(e^{x_1}, …, e^{x_r})`, E_μ the Schur functor of S^∨.
pub fn e_mu(ring: &Ring, mu: &Partition) -> Result<KClass> {
    let (r, n) = ring_rn(ring)?;
    if mu.len() != r {
        return Err(Error::InvalidArgument(format!("partition {mu:?} must have {r} parts")));
    }
    let dim = ring.dim;
    // Jacobi–Trudi in y with h_k(y) the complete symmetric polynomials
    let h = |k: i64| -> Poly {
        if k < 0 {
            return Poly::new();
        }
        let mut out = Poly::new();
        let mut cur = vec![0usize; r];
        fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Poly) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.insert(cur.clone(), int(1));
                return;
            }
            for a in 0..=left {
                cur[i] = a;
                rec(i + 1, left - a, cur, out);
            }
        }
        rec(0, k as usize, &mut cur, &mut out);
        out
    };
    let mut s = Poly::new();
    for (sigma, sgn) in permutations(r) {
        let mut term = Poly::from([(vec![0; r], int(sgn))]);
        for i in 0..r {
            let k = mu.0[i] as i64 - i as i64 + sigma[i] as i64;
            term = poly_mul(&term, &h(k), usize::MAX);
        }
        poly_add_scaled(&mut s, &term, &int(1));
    }
    let mut chx = Poly::new();
    for (a, c) in &s {
        let ai: Vec<i64> = a.iter().map(|&k| k as i64).collect();
        poly_add_scaled(&mut chx, &exp_linear(&ai, dim), c);
    }
    let mut coeffs = vec![ExactRational::zero(); ring.rank()];
    for (p, c) in symmetric_to_schur(&chx, r, n - r) {
        coeffs[partition_index(ring, &p, r, n)?] += c;
    }
    KClass::new(GradedVector::new(ring, coeffs)?, Some(format!("E{:?}", mu.0)))
}

/// χ(E_μ, E_ν) = det(binom(n−1+k_j−l_i, n−1)), l = μ+δ, k = ν+δ.
pub fn euler_matrix_grassmann(mu: &Partition, nu: &Partition, r: usize, n: usize) -> Result<ExactRational> {
    check_rn(r, n)?;
    if mu.len() != r || nu.len() != r {
        return Err(Error::InvalidArgument(format!("partitions must have {r} parts")));
    }
    let l = mu.shifted();
    let k = nu.shifted();
    let m: Vec<Vec<ExactRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    ExactRational::from_integer(binomial_poly(n as i64 - 1 + k[j] as i64 - l[i] as i64, n as i64 - 1))
                })
                .collect()
        })
        .collect();
    Ok(det_rational(m))
}

fn det_rational(mut m: Vec<Vec<ExactRational>>) -> ExactRational {
    let n = m.len();
    let mut det = int(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return ExactRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col].clone();
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            for c in col..n {
                let v = &m[col][c] * &f;
                m[r][c] -= v;
            }
        }
    }
    det
}

fn det_complex(m: &[Vec<BigComplex>], p: Prec) -> BigComplex {
    let r = m.len();
    permutations(r)
        .into_iter()
        .fold(BigComplex::zero(p), |acc, (sigma, sgn)| {
            let prod = (0..r).fold(BigComplex::from_i64(sgn, p), |a, i| a * m[i][sigma[i]].clone());
            acc + prod
        })
}

/// Linear combination of wedge monomials x^{k_1} ∧ ⋯ ∧ x^{k_r}, keyed by strictly
/// decreasing tuples with entries in 0..n.
#[derive(Clone, Debug)]
pub struct AntiSymmetricElement {
    pub r: usize,
    pub n: usize,
    terms: BTreeMap<Vec<usize>, BigComplex>,
}

impl AntiSymmetricElement {
    pub fn zero(r: usize, n: usize) -> Self {
        AntiSymmetricElement {
            r,
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `c · x^{k_1} ∧ ⋯ ∧ x^{k_r}` for any ordering of distinct exponents.
    pub fn monomial(k: &[usize], c: BigComplex, n: usize) -> Result<Self> {
        let mut e = Self::zero(k.len(), n);
        e.add_monomial(k, c)?;
        Ok(e)
    }

    pub fn add_monomial(&mut self, k: &[usize], c: BigComplex) -> Result<()> {
        if k.len() != self.r {
            return Err(Error::InvalidArgument(format!(
                "wedge of {} factors, expected {}",
                k.len(),
                self.r
            )));
        }
        if let Some(bad) = k.iter().find(|&&x| x >= self.n) {
            return Err(Error::InvalidArgument(format!(
                "exponent {bad} out of range 0..{}",
                self.n
            )));
        }
        let mut sorted = k.to_vec();
        let mut sign = 1;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] < sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        let c = if sign < 0 { -c } else { c };
        let p = c.prec();
        let slot = self.terms.entry(sorted).or_insert_with(|| BigComplex::zero(p));
        *slot = slot.clone() + c;
        Ok(())
    }

    /// `v_1 ∧ ⋯ ∧ v_r` for classes on P^{n−1} (coefficients of h^0, …, h^{n−1}).
    pub fn wedge(vs: &[GradedVector<BigComplex>]) -> Result<Self> {
        let r = vs.len();
        let first = vs.first().ok_or_else(|| Error::InvalidArgument("empty wedge".into()))?;
        let n = first.ring().rank();
        let p = first.ctx();
        let mut out = Self::zero(r, n);
        for k in decreasing_tuples(r, n) {
            let m: Vec<Vec<BigComplex>> = vs
                .iter()
                .map(|v| k.iter().map(|&kj| v.coeff(kj).clone()).collect())
                .collect();
            let d = det_complex(&m, p);
            if !d.is_zero() {
                out.terms.insert(k, d);
            }
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &BigComplex)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.r, self.n) != (other.r, other.n) {
            return Err(Error::InvalidArgument("wedge spaces differ".into()));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_monomial(k, c.clone())?;
        }
        Ok(out)
    }
}

/// Strictly decreasing r-tuples from 0..n in lexicographic order.
pub fn decreasing_tuples(r: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(r: usize, bound: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        let need = r - cur.len();
        for k in (need - 1)..bound {
            cur.push(k);
            rec(r, k, cur, out);
            cur.pop();
        }
    }
    rec(r, n, &mut cur, &mut out);
    out.sort();
    out
}

/// x^{k_1} ∧ ⋯ ∧ x^{k_r} ↦ σ_{k−δ}, extended linearly.
pub fn satake_map(a: &AntiSymmetricElement, ring: &Ring) -> Result<GradedVector<BigComplex>> {
    let (r, n) = ring_rn(ring)?;
    if (a.r, a.n) != (r, n) {
        return Err(Error::InvalidArgument(format!(
            "wedge of Gr({},{}) applied to {}",
            a.r, a.n, ring.name
        )));
    }
    let p = a.terms.values().next().map(|c| c.prec()).unwrap_or_default();
    let mut out = GradedVector::<BigComplex>::zero(ring, p);
    for (k, c) in &a.terms {
        let mu = Partition::from_shifted(k)?;
        let i = partition_index(ring, &mu, r, n)?;
        out.set(i, out.coeff(i).clone() + c.clone());
    }
    Ok(out)
}

/// `e^{t σ_1}` on the Schubert ring for a complex scalar t.
fn exp_sigma1(ring: &Ring, t: &BigComplex) -> GradedVector<BigComplex> {
    let p = t.prec();
    GradedVector::<BigComplex>::basis(ring, 1, p)
        .scale(t)
        .exp()
        .expect("σ1 is nilpotent")
}

/// The map ε_r e^{−πi(r−1)σ1} Sat(v_1 ∧ ⋯ ∧ v_r), ε_r = (2πi)^{−C(r,2)}.
///
/// It sends `∧ Γ̂ Ch(O(k_i))` to `Γ̂ Ch(E_μ)` and intertwines the wedge pairing
/// det([v_i, w_j)) with the pairing on the Grassmannian.
pub fn abelian_transport(
    vs: &[GradedVector<BigComplex>],
    ring: &Ring,
    c: &ConstantTable,
) -> Result<GradedVector<BigComplex>> {
    let (r, _) = ring_rn(ring)?;
    let p = c.prec;
    let sat = satake_map(&AntiSymmetricElement::wedge(vs)?, ring)?;
    let two_pi_i = BigComplex::new(BigReal::zero(p), c.pi.clone() * BigReal::from_i64(2, p));
    let eps = two_pi_i.powi((r * (r - 1) / 2) as u64).inv();
    let phase = BigComplex::new(BigReal::zero(p), -(c.pi.clone() * BigReal::from_i64(r as i64 - 1, p)));
    Ok(cup(&exp_sigma1(ring, &phase), &sat)?.scale(&eps))
}

/// Spectrum of c1⋆0 on Gr(r, n): v_K = ξ Σ_i n e^{−2πi k_i/n}, ξ = e^{πi(r−1)/n}.
#[derive(Clone, Debug)]
pub struct GrassmannSpectrum {
    /// One entry per strictly decreasing tuple K.
    pub eigenvalues: Vec<(Vec<usize>, BigComplex)>,
    /// Distinct eigenvalues with multiplicity.
    pub multiset: Vec<(BigComplex, usize)>,
    /// max |v_K| over the tuples.
    pub t: BigReal,
    /// n sin(πr/n)/sin(π/n).
    pub t_closed_form: BigReal,
    /// Tuples attaining T.
    pub maximizers: Vec<Vec<usize>>,
    pub all_maximizers_consecutive: bool,
    pub property_o: PropertyOReport,
}

/// True if the entries form a cyclic interval in ℤ/n.
pub fn is_consecutive(k: &[usize], n: usize) -> bool {
    let set: std::collections::BTreeSet<usize> = k.iter().copied().collect();
    (0..n).any(|s| (0..k.len()).all(|j| set.contains(&((s + j) % n))))
}

pub fn grassmann_spectrum(r: usize, n: usize, p: Prec) -> Result<GrassmannSpectrum> {
    check_rn(r, n)?;
    let pi = BigReal::pi(p);
    let nr = BigReal::from_i64(n as i64, p);
    let xi = BigComplex::cis(&(pi.clone() * BigReal::from_rational(&rat(r as i64 - 1, n as i64), p)));
    let v: Vec<BigComplex> = (0..n)
        .map(|k| {
            BigComplex::from_polar(
                &nr,
                &-(pi.clone() * BigReal::from_rational(&rat(2 * k as i64, n as i64), p)),
            )
        })
        .collect();
    let eigenvalues: Vec<(Vec<usize>, BigComplex)> = decreasing_tuples(r, n)
        .into_iter()
        .map(|k| {
            let s = k.iter().fold(BigComplex::zero(p), |a, &ki| a + v[ki].clone());
            (k, xi.clone() * s)
        })
        .collect();
    let tol = 15 - p.digits as i64;
    let mut multiset: Vec<(BigComplex, usize)> = Vec::new();
    for (_, u) in &eigenvalues {
        match multiset
            .iter_mut()
            .find(|(w, _)| (w.clone() - u.clone()).abs().below_pow10(tol))
        {
            Some(slot) => slot.1 += 1,
            None => multiset.push((u.clone(), 1)),
        }
    }
    let t = eigenvalues
        .iter()
        .map(|(_, u)| u.abs())
        .fold(BigReal::zero(p), BigReal::max);
    let t_closed_form = nr.clone() * (pi.clone() * BigReal::from_rational(&rat(r as i64, n as i64), p)).sin()
        / (pi.clone() / nr.clone()).sin();
    let maximizers: Vec<Vec<usize>> = eigenvalues
        .iter()
        .filter(|(_, u)| (u.abs() - t.clone()).abs().below_pow10(tol))
        .map(|(k, _)| k.clone())
        .collect();
    let all_maximizers_consecutive = maximizers.iter().all(|k| is_consecutive(k, n));
    let property_o = property_o_report(&multiset, n as u32, p)?;
    Ok(GrassmannSpectrum {
        eigenvalues,
        multiset,
        t,
        t_closed_form,
        maximizers,
        all_maximizers_consecutive,
        property_o,
    })
}

/// Dense polynomial in r variables with exponents below n (x_i^n = 0).
struct Trunc {
    r: usize,
    n: usize,
    c: Vec<BigComplex>,
}

impl Trunc {
    fn zero(r: usize, n: usize, p: Prec) -> Self {
        Trunc {
            r,
            n,
            c: vec![BigComplex::zero(p); n.pow(r as u32)],
        }
    }

    fn idx(&self, e: &[usize]) -> usize {
        e.iter().rev().fold(0, |a, &k| a * self.n + k)
    }

    fn exps(&self, mut i: usize) -> Vec<usize> {
        (0..self.r)
            .map(|_| {
                let k = i % self.n;
                i /= self.n;
                k
            })
            .collect()
    }

    fn mul(&self, o: &Trunc, p: Prec) -> Trunc {
        let mut out = Trunc::zero(self.r, self.n, p);
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.exps(i);
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let eb = o.exps(j);
                let e: Vec<usize> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                if e.iter().all(|&k| k < self.n) {
                    let t = out.idx(&e);
                    out.c[t] = out.c[t].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    fn add_assign(&mut self, o: &Trunc) {
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            if !b.is_zero() {
                *a = a.clone() + b.clone();
            }
        }
    }

    /// Univariate polynomial in variable i.
    fn in_var(r: usize, n: usize, i: usize, coeffs: &[BigComplex], p: Prec) -> Trunc {
        let mut t = Trunc::zero(r, n, p);
        for (k, c) in coeffs.iter().enumerate().take(n) {
            let mut e = vec![0; r];
            e[i] = k;
            let j = t.idx(&e);
            t.c[j] = c.clone();
        }
        t
    }
}

/// Compositions of m into r nonnegative parts.
fn compositions(m: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 1 {
        return vec![vec![m]];
    }
    (0..=m)
        .flat_map(|a| {
            compositions(m - a, r - 1).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

/// J-function of Gr(r, n) through t^D from the abelian/non-abelian correspondence.
///
/// With θ_i acting on e^{n x_i log t_i} t_i^{n d_i} as n(x_i + d_i), the
/// bracket is, at t_i = ξt,
/// `Σ_{|d|=m} Π_{i<j}(x_i−x_j+d_i−d_j) Π_i Q_{d_i}(x_i) ξ^{n d_i} e^{πi(r−1)x_i}`
/// where `Q_d` are the coefficients of J_{P^{n−1}}; the n^{C(r,2)} from the
/// θ-operators is cancelled by the normalisation. The antisymmetric result is
/// read in Schur form and multiplied by e^{−πi(r−1)σ1}. Imaginary parts must
/// vanish to 10^{−P+12}; the real parts are returned.
pub fn bcfk_j_series(r: usize, n: usize, order: usize, p: Prec) -> Result<JSeries<BigComplex>> {
    check_rn(r, n)?;
    let ring = schubert_ring(r, n)?;
    let wp = p.plus(10);
    let pi = BigReal::pi(wp);
    let m_max = order / n;
    let jp = j_projective(n, n * m_max)?;
    let q: Vec<Vec<BigComplex>> = (0..=m_max)
        .map(|d| {
            jp.coeff(n * d)
                .coeffs()
                .iter()
                .map(|c| BigComplex::from_rational(c, wp))
                .collect()
        })
        .collect();
    // e^{πi(r−1)x} as a series in one variable
    let phase_series: Vec<BigComplex> = (0..n)
        .map(|k| {
            let a = BigComplex::new(BigReal::zero(wp), pi.clone() * BigReal::from_i64(r as i64 - 1, wp));
            a.powi(k as u64)
                .scale(&(BigReal::one(wp) / BigReal::from_bigint(&factorial(k as u64), wp)))
        })
        .collect();
    let xi_n_pow = |d: usize| BigComplex::cis(&(pi.clone() * BigReal::from_i64(((r - 1) * d) as i64, wp)));
    let phase_back = exp_sigma1(
        &ring,
        &BigComplex::new(BigReal::zero(wp), -(pi.clone() * BigReal::from_i64(r as i64 - 1, wp))),
    );
    let mut coeffs = vec![GradedVector::<BigComplex>::zero(&ring, p); order + 1];
    let bound = 12 - p.digits as i64;
    for m in 0..=m_max {
        let mut total = Trunc::zero(r, n, wp);
        for d in compositions(m, r) {
            let mut term = Trunc::zero(r, n, wp);
            term.c[0] = BigComplex::one(wp);
            for i in 0..r {
                for j in i + 1..r {
                    let mut lin = Trunc::zero(r, n, wp);
                    let diff = d[i] as i64 - d[j] as i64;
                    lin.c[0] = BigComplex::from_i64(diff, wp);
                    let mut ei = vec![0; r];
                    ei[i] = 1;
                    let mut ej = vec![0; r];
                    ej[j] = 1;
                    let (ii, jj) = (lin.idx(&ei), lin.idx(&ej));
                    lin.c[ii] = BigComplex::one(wp);
                    lin.c[jj] = -BigComplex::one(wp);
                    term = term.mul(&lin, wp);
                }
            }
            for i in 0..r {
                let qi: Vec<BigComplex> = q[d[i]].iter().map(|c| c.clone() * xi_n_pow(d[i])).collect();
                term = term.mul(&Trunc::in_var(r, n, i, &qi, wp), wp);
                term = term.mul(&Trunc::in_var(r, n, i, &phase_series, wp), wp);
            }
            total.add_assign(&term);
        }
        let asym = antisymmetric_part_check(&total, bound)?;
        let sat = satake_map(&asym, &ring)?;
        let jm = cup(&phase_back, &sat)?;
        let mut re = Vec::with_capacity(ring.rank());
        for c in jm.coeffs() {
            if !c.im.abs().below_pow10(bound) {
                return Err(Error::ImaginaryResidue {
                    residue: c.im.abs().to_f64(),
                    bound: 10f64.powi(bound as i32),
                });
            }
            re.push(BigComplex::real(c.re.with_prec(p)));
        }
        coeffs[n * m] = GradedVector::new(&ring, re)?;
    }
    JSeries::new(ring.name.clone(), &ring, n as u32, coeffs)
}

/// Reads the strictly decreasing monomials, checking antisymmetry of the rest.
fn antisymmetric_part_check(f: &Trunc, bound: i64) -> Result<AntiSymmetricElement> {
    let mut out = AntiSymmetricElement::zero(f.r, f.n);
    let scale =
        f.c.iter()
            .map(|c| c.abs())
            .fold(BigReal::zero(Prec::new(20)), |a, b| a.max(b.with_prec(Prec::new(20))));
    let rel = |x: &BigComplex| {
        if scale.is_zero() {
            true
        } else {
            (x.abs().with_prec(Prec::new(20)) / scale.clone()).below_pow10(bound)
        }
    };
    for (i, c) in f.c.iter().enumerate() {
        let e = f.exps(i);
        let mut sorted = e.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            if !rel(c) {
                return Err(Error::InvalidArgument("numerator is not antisymmetric".into()));
            }
            continue;
        }
        if sorted == e {
            out.terms.insert(e, c.clone());
        } else {
            let sign = perm_parity(&e);
            let partner = f.c[f.idx(&sorted)].clone();
            let expect = if sign < 0 { -partner } else { partner };
            if !rel(&(c.clone() - expect)) {
                return Err(Error::InvalidArgument("numerator is not antisymmetric".into()));
            }
        }
    }
    Ok(out)
}

/// Sign of the permutation sorting `e` into decreasing order.
fn perm_parity(e: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if e[i] < e[j] {
                s = -s;
            }
        }
    }
    s
}

/// Eguchi–Hori–Xiong Laurent polynomial in the r(n−r) variables X_{i,j}
/// (variable index (i−1)(n−r) + (j−1)):
/// `X_{1,1} + Σ X_{i,j+1}/X_{i,j} + Σ X_{i+1,j}/X_{i,j} + 1/X_{r,n−r}`.
pub fn ehx_mirror(r: usize, n: usize) -> Result<LaurentPolynomial> {
    check_rn(r, n)?;
    let w = n - r;
    let m = r * w;
    let var = |i: usize, j: usize| (i - 1) * w + (j - 1);
    let mut terms = Vec::new();
    let ratio = |num: usize, den: usize| {
        let mut e = vec![0i64; m];
        e[num] += 1;
        e[den] -= 1;
        e
    };
    for i in 1..=r {
        for j in 1..w {
            terms.push((ratio(var(i, j + 1), var(i, j)), int(1)));
        }
    }
    for j in 1..=w {
        for i in 1..r {
            terms.push((ratio(var(i + 1, j), var(i, j)), int(1)));
        }
    }
    let mut source = vec![0i64; m];
    source[var(1, 1)] = 1;
    let mut sink = vec![0i64; m];
    sink[var(r, w)] = -1;
    terms.push((source, int(1)));
    terms.push((sink, int(1)));
    LaurentPolynomial::from_terms(m, terms)
}

/// Quantum period of Gr(r, n) as the constant-term series of the EHX mirror.
pub fn ehx_constant_terms(r: usize, n: usize, order: usize) -> Result<QuantumPeriod<ExactRational>> {
    constant_term_series(&ehx_mirror(r, n)?, order)
}

/// Index of σ_μ in the Schubert basis of `ring`.
pub fn schubert_index(ring: &Ring, mu: &Partition) -> Result<usize> {
    let (r, n) = ring_rn(ring)?;
    partition_index(ring, mu, r, n)
}

/// Point class σ_{(n−r)^r} as the last basis element; σ_∅ is the first.
pub fn point_partition(r: usize, n: usize) -> Partition {
    Partition(vec![n - r; r])
}
