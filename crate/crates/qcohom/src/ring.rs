//! Finite graded cohomology rings, graded vectors, pairings, Gamma and Todd
//! classes, modified Chern characters and the factorized Hirzebruch–Riemann–Roch check.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{
    bernoulli, big, factorial, int, parse_rational, rat, rat_to_string, BigComplex, BigReal, ConstantTable,
    ExactRational, Prec, Scalar,
};

pub type Ring = Arc<CohomologyRing>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    /// The class lives in H^{2·degree}.
    pub degree: usize,
}

/// Graded commutative ring with an ordered basis whose first element is the unit.
#[derive(Clone, PartialEq)]
pub struct CohomologyRing {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<BasisElement>,
    /// `cup[i * rank + j]` lists `(k, c)` with `e_i ∪ e_j = Σ c e_k`.
    cup: Vec<Vec<(usize, ExactRational)>>,
    pub integral: Vec<ExactRational>,
    pub c1: Vec<ExactRational>,
    pub ch_tf: Vec<ExactRational>,
    pub index: u32,
}

impl fmt::Debug for CohomologyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CohomologyRing")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("rank", &self.rank())
            .field("index", &self.index)
            .finish()
    }
}

impl CohomologyRing {
    /// Assembles a ring from raw tables. The cup table may list each unordered
    /// pair once; it is symmetrized here.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        name: impl Into<String>,
        dim: usize,
        basis: Vec<BasisElement>,
        products: Vec<(usize, usize, Vec<(usize, ExactRational)>)>,
        integral: Vec<ExactRational>,
        c1: Vec<ExactRational>,
        ch_tf: Vec<ExactRational>,
        index: u32,
    ) -> Result<Ring> {
        let n = basis.len();
        if n == 0 || basis[0].degree != 0 {
            return Err(Error::InvalidArgument("basis must start with the unit".into()));
        }
        if integral.len() != n || c1.len() != n || ch_tf.len() != n {
            return Err(Error::InvalidArgument("table lengths differ from basis size".into()));
        }
        let mut cup = vec![Vec::new(); n * n];
        for (i, j, terms) in products {
            if i >= n || j >= n || terms.iter().any(|(k, _)| *k >= n) {
                return Err(Error::InvalidArgument(format!("cup entry ({i},{j}) out of range")));
            }
            let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            cup[i * n + j] = terms.clone();
            cup[j * n + i] = terms;
        }
        Ok(Arc::new(CohomologyRing {
            name: name.into(),
            dim,
            basis,
            cup,
            integral,
            c1,
            ch_tf,
            index,
        }))
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis[i].degree
    }

    pub fn cup_basis(&self, i: usize, j: usize) -> &[(usize, ExactRational)] {
        &self.cup[i * self.rank() + j]
    }

    /// Betti numbers b_0, b_2, …, b_{2 dim}.
    pub fn betti(&self) -> Vec<usize> {
        let mut b = vec![0; self.dim + 1];
        for e in &self.basis {
            b[e.degree] += 1;
        }
        b
    }

    pub fn c1_vector(self: &Arc<Self>) -> GradedVector<ExactRational> {
        GradedVector {
            ring: self.clone(),
            coeffs: self.c1.clone(),
        }
    }

    pub fn ch_tf_vector(self: &Arc<Self>) -> GradedVector<ExactRational> {
        GradedVector {
            ring: self.clone(),
            coeffs: self.ch_tf.clone(),
        }
    }

    /// Poincaré pairing matrix `∫ e_i ∪ e_j`.
    pub fn poincare_matrix(&self) -> Vec<Vec<ExactRational>> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.cup_basis(i, j)
                            .iter()
                            .fold(ExactRational::zero(), |acc, (k, c)| acc + c * &self.integral[*k])
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks the ring axioms: degree additivity, commutativity,
    /// associativity, Poincaré nondegeneracy and the Chern data.
    pub fn validate(&self) -> Result<()> {
        let n = self.rank();
        let bad = |m: String| Err(Error::InvalidArgument(format!("{}: {m}", self.name)));
        if self.basis.iter().filter(|e| e.degree == 0).count() != 1 {
            return bad("H^0 must be one-dimensional".into());
        }
        for i in 0..n {
            for j in 0..n {
                for (k, _) in self.cup_basis(i, j) {
                    if self.degree(*k) != self.degree(i) + self.degree(j) {
                        return bad(format!("cup ({i},{j}) not degree additive"));
                    }
                }
                if self.cup_basis(i, j) != self.cup_basis(j, i) {
                    return bad(format!("cup ({i},{j}) not commutative"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.product_terms(self.cup_basis(i, j), k);
                    let mut right = vec![ExactRational::zero(); n];
                    for (m, c) in self.cup_basis(j, k) {
                        for (l, d) in self.cup_basis(i, *m) {
                            right[*l] += c * d;
                        }
                    }
                    let mut left = vec![ExactRational::zero(); n];
                    for (l, c) in lhs {
                        left[l] += c;
                    }
                    if left != right {
                        return bad(format!("cup not associative on ({i},{j},{k})"));
                    }
                }
            }
        }
        if rank_of(self.poincare_matrix()) != n {
            return bad("Poincaré pairing degenerate".into());
        }
        let deg_part = |v: &[ExactRational], p: usize| -> Vec<ExactRational> {
            v.iter()
                .enumerate()
                .map(|(i, c)| {
                    if self.degree(i) == p {
                        c.clone()
                    } else {
                        ExactRational::zero()
                    }
                })
                .collect()
        };
        if self.ch_tf[0] != int(self.dim as i64) {
            return bad("ch_0(TF) differs from the dimension".into());
        }
        if deg_part(&self.ch_tf, 1) != self.c1 || deg_part(&self.c1, 1) != self.c1 {
            return bad("c1 differs from ch_1(TF)".into());
        }
        if self.index > 0 {
            let r = int(self.index as i64);
            if self.c1.iter().any(|c| !(c / &r).is_integer()) {
                return bad("c1/r is not integral".into());
            }
        }
        Ok(())
    }

    fn product_terms(&self, terms: &[(usize, ExactRational)], j: usize) -> Vec<(usize, ExactRational)> {
        let mut out = Vec::new();
        for (i, c) in terms {
            for (k, d) in self.cup_basis(*i, j) {
                out.push((*k, c * d));
            }
        }
        out
    }

    /// JSON document `{name, dimension, basis, cup_table, integral, c1, chTF, index}`.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.rank();
        let mut table = Vec::new();
        for i in 0..n {
            for j in i..n {
                for (k, c) in self.cup_basis(i, j) {
                    table.push(CupEntry {
                        i,
                        j,
                        k: *k,
                        coefficient: rat_to_string(c),
                    });
                }
            }
        }
        let doc = RingDoc {
            name: self.name.clone(),
            dimension: self.dim,
            basis: self.basis.clone(),
            cup_table: table,
            integral: self.integral.iter().map(rat_to_string).collect(),
            c1: self.c1.iter().map(rat_to_string).collect(),
            ch_tf: self.ch_tf.iter().map(rat_to_string).collect(),
            index: self.index,
        };
        serde_json::to_value(doc).expect("ring document serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Ring> {
        let doc: RingDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let parse_all = |xs: &[String]| xs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
        let mut products: Vec<(usize, usize, Vec<(usize, ExactRational)>)> = Vec::new();
        for e in &doc.cup_table {
            let c = parse_rational(&e.coefficient)?;
            match products.iter_mut().find(|(i, j, _)| *i == e.i && *j == e.j) {
                Some(entry) => entry.2.push((e.k, c)),
                None => products.push((e.i, e.j, vec![(e.k, c)])),
            }
        }
        let ring = CohomologyRing::from_parts(
            doc.name,
            doc.dimension,
            doc.basis,
            products,
            parse_all(&doc.integral)?,
            parse_all(&doc.c1)?,
            parse_all(&doc.ch_tf)?,
            doc.index,
        )?;
        ring.validate()?;
        Ok(ring)
    }
}

#[derive(Serialize, Deserialize)]
struct CupEntry {
    i: usize,
    j: usize,
    k: usize,
    coefficient: String,
}

#[derive(Serialize, Deserialize)]
struct RingDoc {
    name: String,
    dimension: usize,
    basis: Vec<BasisElement>,
    cup_table: Vec<CupEntry>,
    integral: Vec<String>,
    c1: Vec<String>,
    #[serde(rename = "chTF")]
    ch_tf: Vec<String>,
    index: u32,
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank_of(mut m: Vec<Vec<ExactRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[rank][col];
                for c in col..cols {
                    let d = &f * &m[rank][c];
                    m[r][c] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of the null space of a rational matrix, one vector per free column.
pub fn null_space(mut m: Vec<Vec<ExactRational>>, cols: usize) -> Vec<Vec<ExactRational>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        for c in 0..cols {
            m[rank][c] = &m[rank][c] / &p;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..cols {
                    let d = &f * &m[rank][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![ExactRational::zero(); cols];
            v[free] = int(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || (a.name == b.name && a.basis == b.basis)
}

fn check_same(a: &Ring, b: &Ring) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch(a.name.clone(), b.name.clone()))
    }
}

/// Cohomology class with one coefficient per basis element.
///
/// The arithmetic operators panic on ring mismatch; [`cup`] and the pairing
/// functions report it as an error instead.
#[derive(Clone)]
pub struct GradedVector<S> {
    ring: Ring,
    coeffs: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for GradedVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (e, c) in self.ring.basis.iter().zip(&self.coeffs) {
            m.entry(&e.label, c);
        }
        m.finish()
    }
}

impl<S: Scalar> GradedVector<S> {
    pub fn new(ring: &Ring, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != ring.rank() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                ring.rank()
            )));
        }
        Ok(GradedVector {
            ring: ring.clone(),
            coeffs,
        })
    }

    pub fn zero(ring: &Ring, ctx: S::Ctx) -> Self {
        GradedVector {
            ring: ring.clone(),
            coeffs: vec![S::zero_in(ctx); ring.rank()],
        }
    }

    pub fn one(ring: &Ring, ctx: S::Ctx) -> Self {
        Self::basis(ring, 0, ctx)
    }

    pub fn basis(ring: &Ring, i: usize, ctx: S::Ctx) -> Self {
        let mut v = Self::zero(ring, ctx);
        v.coeffs[i] = S::one_in(ctx);
        v
    }

    pub fn from_rationals(ring: &Ring, qs: &[ExactRational], ctx: S::Ctx) -> Self {
        assert_eq!(qs.len(), ring.rank());
        GradedVector {
            ring: ring.clone(),
            coeffs: qs.iter().map(|q| S::from_rational(q, ctx)).collect(),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn set(&mut self, i: usize, v: S) {
        self.coeffs[i] = v;
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn ctx(&self) -> S::Ctx {
        self.coeffs[0].ctx()
    }

    /// Coefficient of the unit, i.e. the H^0 component.
    pub fn h0(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GradedVector<T> {
        GradedVector {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_complex(&self, p: Prec) -> GradedVector<BigComplex> {
        self.map(|c| c.to_complex(p))
    }

    /// Projection onto H^{2p}.
    pub fn degree_part(&self, p: usize) -> Self {
        let ctx = self.ctx();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if self.ring.degree(i) == p {
                    c.clone()
                } else {
                    S::zero_in(ctx)
                }
            })
            .collect();
        GradedVector {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Multiplies the degree-p part by `f(p)`.
    pub fn map_by_degree(&self, f: impl Fn(usize, &S) -> S) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| f(self.ring.degree(i), c))
            .collect();
        GradedVector {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// α* : multiplies H^{2p} by (−1)^p.
    pub fn star(&self) -> Self {
        self.map_by_degree(|p, c| if p % 2 == 0 { c.clone() } else { -c.clone() })
    }

    pub fn scale(&self, s: &S) -> Self {
        GradedVector {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn scale_rational(&self, q: &ExactRational) -> Self {
        GradedVector {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale_rational(q)).collect(),
        }
    }

    /// `∫_F` of the class.
    pub fn integrate(&self) -> S {
        let ctx = self.ctx();
        self.coeffs
            .iter()
            .zip(&self.ring.integral)
            .filter(|(_, q)| !q.is_zero())
            .fold(S::zero_in(ctx), |acc, (c, q)| acc + c.scale_rational(q))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }

    /// Exponential of a class with vanishing H^0 part (a finite sum).
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_exact_zero() {
            return Err(Error::InvalidArgument("exp needs a nilpotent class".into()));
        }
        let ctx = self.ctx();
        let mut acc = Self::one(&self.ring, ctx);
        let mut pow = Self::one(&self.ring, ctx);
        for k in 1..=self.ring.dim {
            pow = &pow * self;
            acc = &acc + &pow.scale_rational(&ExactRational::new(1.into(), factorial(k as u64)));
        }
        Ok(acc)
    }

    /// Power series `Σ a_k x^k` evaluated on a nilpotent class `x`.
    pub fn apply_series(&self, a: &[S]) -> Result<Self> {
        if !self.coeffs[0].is_exact_zero() {
            return Err(Error::InvalidArgument("series needs a nilpotent class".into()));
        }
        let ctx = self.ctx();
        let mut acc = Self::zero(&self.ring, ctx);
        let mut pow = Self::one(&self.ring, ctx);
        for (k, ak) in a.iter().enumerate().take(self.ring.dim + 1) {
            if k > 0 {
                pow = &pow * self;
            }
            acc = &acc + &pow.scale(ak);
        }
        Ok(acc)
    }
}

impl<S: Scalar> PartialEq for GradedVector<S>
where
    S: PartialEq,
{
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> Add for &GradedVector<S> {
    type Output = GradedVector<S>;
    fn add(self, rhs: &GradedVector<S>) -> GradedVector<S> {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        GradedVector {
            ring: self.ring.clone(),
            coeffs,
        }
    }
}

impl<S: Scalar> Sub for &GradedVector<S> {
    type Output = GradedVector<S>;
    fn sub(self, rhs: &GradedVector<S>) -> GradedVector<S> {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        GradedVector {
            ring: self.ring.clone(),
            coeffs,
        }
    }
}

impl<S: Scalar> Neg for &GradedVector<S> {
    type Output = GradedVector<S>;
    fn neg(self) -> GradedVector<S> {
        GradedVector {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<S: Scalar> Mul for &GradedVector<S> {
    type Output = GradedVector<S>;
    fn mul(self, rhs: &GradedVector<S>) -> GradedVector<S> {
        cup(self, rhs).expect("ring mismatch")
    }
}

/// Cup product.
pub fn cup<S: Scalar>(a: &GradedVector<S>, b: &GradedVector<S>) -> Result<GradedVector<S>> {
    check_same(&a.ring, &b.ring)?;
    let ring = &a.ring;
    let ctx = a.ctx();
    let mut out = vec![S::zero_in(ctx); ring.rank()];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_exact_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            if bj.is_exact_zero() {
                continue;
            }
            let prod = ai.clone() * bj.clone();
            for (k, c) in ring.cup_basis(i, j) {
                out[*k] = out[*k].clone() + prod.scale_rational(c);
            }
        }
    }
    Ok(GradedVector {
        ring: ring.clone(),
        coeffs: out,
    })
}

/// Dual (homology) vector; pairs with a graded vector coefficientwise.
#[derive(Clone)]
pub struct HomologyVector<S> {
    ring: Ring,
    coeffs: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for HomologyVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (e, c) in self.ring.basis.iter().zip(&self.coeffs) {
            m.entry(&format!("{}*", e.label), c);
        }
        m.finish()
    }
}

impl<S: Scalar> HomologyVector<S> {
    pub fn new(ring: &Ring, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != ring.rank() {
            return Err(Error::InvalidArgument("homology vector has the wrong length".into()));
        }
        Ok(HomologyVector {
            ring: ring.clone(),
            coeffs,
        })
    }

    /// The point class, dual to the unit.
    pub fn point(ring: &Ring, ctx: S::Ctx) -> Self {
        let mut coeffs = vec![S::zero_in(ctx); ring.rank()];
        coeffs[0] = S::one_in(ctx);
        HomologyVector {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> HomologyVector<T> {
        HomologyVector {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        HomologyVector {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        HomologyVector {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    /// Degrees carried by the nonzero coefficients.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_exact_zero())
            .map(|i| self.ring.degree(i))
            .collect();
        d.dedup();
        d
    }

    /// `⟨α, β⟩`, degree-matched by construction of the dual basis.
    pub fn pair(&self, beta: &GradedVector<S>) -> Result<S> {
        check_same(&self.ring, &beta.ring)?;
        let ctx = beta.ctx();
        Ok(self
            .coeffs
            .iter()
            .zip(&beta.coeffs)
            .fold(S::zero_in(ctx), |acc, (a, b)| acc + a.clone() * b.clone()))
    }
}

/// Virtual vector bundle recorded by its Chern character.
#[derive(Clone, Debug)]
pub struct KClass {
    pub ch: GradedVector<ExactRational>,
    pub label: Option<String>,
}

impl KClass {
    pub fn new(ch: GradedVector<ExactRational>, label: Option<String>) -> Result<Self> {
        if !ch.h0().is_integer() {
            return Err(Error::InvalidArgument("ch_0 must be an integer rank".into()));
        }
        Ok(KClass { ch, label })
    }

    pub fn structure_sheaf(ring: &Ring) -> Self {
        KClass {
            ch: GradedVector::one(ring, ()),
            label: Some("O".into()),
        }
    }

    /// Line bundle with first Chern class `k·divisor`.
    pub fn line_bundle(divisor: &GradedVector<ExactRational>, k: i64) -> Self {
        let ch = divisor.scale(&int(k)).exp().expect("divisor class has no H^0 part");
        KClass {
            ch,
            label: Some(format!("O({k})")),
        }
    }

    pub fn ring(&self) -> &Ring {
        self.ch.ring()
    }

    pub fn rank(&self) -> ExactRational {
        self.ch.h0().clone()
    }

    pub fn dual(&self) -> Self {
        KClass {
            ch: self.ch.star(),
            label: self.label.as_ref().map(|l| format!("{l}^v")),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        KClass {
            ch: &self.ch + &other.ch,
            label: None,
        }
    }
}

/// Ring of H^*(P^{n-1}) = Q[h]/(h^n).
pub fn build_projective_ring(n: usize) -> Ring {
    assert!(n >= 1, "projective ring needs n >= 1");
    let basis = (0..n)
        .map(|p| BasisElement {
            label: match p {
                0 => "1".into(),
                1 => "h".into(),
                _ => format!("h^{p}"),
            },
            degree: p,
        })
        .collect();
    let mut products = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i + j < n {
                products.push((i, j, vec![(i + j, int(1))]));
            }
        }
    }
    let mut integral = vec![ExactRational::zero(); n];
    integral[n - 1] = int(1);
    let mut c1 = vec![ExactRational::zero(); n];
    let mut ch = exp_coeffs(1, n)
        .into_iter()
        .map(|c| c * int(n as i64))
        .collect::<Vec<_>>();
    ch[0] -= int(1);
    if n > 1 {
        c1[1] = int(n as i64);
    }
    CohomologyRing::from_parts(
        format!("P{}", n - 1),
        n - 1,
        basis,
        products,
        integral,
        c1,
        ch,
        n as u32,
    )
    .expect("projective ring tables are consistent")
}

/// Coefficients of e^{a h} truncated at h^{n-1}.
fn exp_coeffs(a: i64, n: usize) -> Vec<ExactRational> {
    (0..n)
        .map(|p| {
            ExactRational::new(
                big(num_bigint::BigInt::from(a).pow(p as u32)).to_integer(),
                factorial(p as u64),
            )
        })
        .collect()
}

/// Künneth product of two rings; the basis is ordered lexicographically by pairs.
pub fn tensor_ring(r1: &Ring, r2: &Ring) -> Ring {
    let (n1, n2) = (r1.rank(), r2.rank());
    let idx = |i: usize, j: usize| i * n2 + j;
    let mut basis = Vec::with_capacity(n1 * n2);
    for a in &r1.basis {
        for b in &r2.basis {
            let label = match (a.degree, b.degree) {
                (0, 0) => "1".to_string(),
                (_, 0) => format!("{}⊗1", a.label),
                (0, _) => format!("1⊗{}", b.label),
                _ => format!("{}⊗{}", a.label, b.label),
            };
            basis.push(BasisElement {
                label,
                degree: a.degree + b.degree,
            });
        }
    }
    let mut products = Vec::new();
    for i1 in 0..n1 {
        for j1 in 0..n2 {
            for i2 in 0..n1 {
                for j2 in 0..n2 {
                    let (a, b) = (idx(i1, j1), idx(i2, j2));
                    if b < a {
                        continue;
                    }
                    let mut terms = Vec::new();
                    for (k1, c1) in r1.cup_basis(i1, i2) {
                        for (k2, c2) in r2.cup_basis(j1, j2) {
                            terms.push((idx(*k1, *k2), c1 * c2));
                        }
                    }
                    products.push((a, b, terms));
                }
            }
        }
    }
    let mut integral = vec![ExactRational::zero(); n1 * n2];
    let mut c1 = integral.clone();
    let mut ch = integral.clone();
    for i in 0..n1 {
        for j in 0..n2 {
            integral[idx(i, j)] = &r1.integral[i] * &r2.integral[j];
        }
    }
    for i in 0..n1 {
        c1[idx(i, 0)] += &r1.c1[i];
        ch[idx(i, 0)] += &r1.ch_tf[i];
    }
    for j in 0..n2 {
        c1[idx(0, j)] += &r2.c1[j];
        ch[idx(0, j)] += &r2.ch_tf[j];
    }
    // a zero-dimensional factor does not constrain divisibility of c1
    let index = match (r1.dim, r2.dim) {
        (0, _) => r2.index,
        (_, 0) => r1.index,
        _ => r1.index.gcd(&r2.index),
    };
    let name = match (r1.dim, r2.dim) {
        (0, _) => r2.name.clone(),
        (_, 0) => r1.name.clone(),
        _ => format!("{}x{}", r1.name, r2.name),
    };
    CohomologyRing::from_parts(name, r1.dim + r2.dim, basis, products, integral, c1, ch, index)
        .expect("tensor tables are consistent")
}

/// Image of H^*(P^n) in a degree-a hypersurface Y ⊂ P^n: basis 1, h, …, h^{n-1}.
pub fn build_hypersurface_ambient_ring(n: usize, a: usize) -> Result<Ring> {
    if n < 2 || a < 1 || a > n {
        return Err(Error::InvalidArgument(format!(
            "degree {a} hypersurface in P{n} is not a positive-dimensional Fano"
        )));
    }
    let p = build_projective_ring(n);
    let basis = p.basis.clone();
    let products = (0..n)
        .flat_map(|i| {
            (i..n)
                .filter(move |j| i + j < n)
                .map(move |j| (i, j, vec![(i + j, int(1))]))
        })
        .collect();
    let mut integral = vec![ExactRational::zero(); n];
    integral[n - 1] = int(a as i64);
    let r = (n + 1 - a) as i64;
    let mut c1 = vec![ExactRational::zero(); n];
    c1[1] = int(r);
    // (n+1) e^h − 1 − e^{ah}
    let e1 = exp_coeffs(1, n);
    let ea = exp_coeffs(a as i64, n);
    let mut ch: Vec<ExactRational> = e1.iter().zip(&ea).map(|(x, y)| x * int(n as i64 + 1) - y).collect();
    ch[0] -= int(1);
    CohomologyRing::from_parts(
        format!("X{a}_in_P{n}"),
        n - 1,
        basis,
        products,
        integral,
        c1,
        ch,
        r as u32,
    )
}

/// Degree-p component of ch(TF) as a class.
fn ch_part(ring: &Ring, p: usize) -> GradedVector<ExactRational> {
    ring.ch_tf_vector().degree_part(p)
}

/// Γ̂_F = exp(−γ c1 + Σ_{k≥2} (−1)^k (k−1)! ζ(k) ch_k(TF)).
pub fn gamma_class(ring: &Ring, c: &ConstantTable) -> Result<GradedVector<BigComplex>> {
    let p = c.prec;
    if ring.dim >= 2 && c.k_max() < ring.dim {
        return Err(Error::ZetaTableTooShort {
            have: c.k_max(),
            need: ring.dim,
        });
    }
    let mut expo = ring
        .c1_vector()
        .to_complex(p)
        .scale(&BigComplex::real(-c.gamma.clone()));
    for k in 2..=ring.dim {
        let coeff = c.zeta(k)?.clone() * BigReal::from_bigint(&factorial(k as u64 - 1), p);
        let coeff = if k % 2 == 0 { coeff } else { -coeff };
        expo = &expo + &ch_part(ring, k).to_complex(p).scale(&BigComplex::real(coeff));
    }
    expo.exp()
}

/// Todd class from ch(TF): log td = c1/2 − Σ_{k≥1} B_{2k}/(2k) · ch_{2k}.
pub fn todd_class(ring: &Ring) -> GradedVector<ExactRational> {
    let b = bernoulli(ring.dim + 2);
    let mut expo = ring.c1_vector().scale(&rat(1, 2));
    let mut k = 1;
    while 2 * k <= ring.dim {
        let coeff = -(&b[2 * k] / int(2 * k as i64));
        expo = &expo + &ch_part(ring, 2 * k).scale(&coeff);
        k += 1;
    }
    expo.exp().expect("log td has no H^0 part")
}

/// Ch(E) = (2πi)^{deg/2} ch(E).
pub fn modified_chern(e: &KClass, c: &ConstantTable) -> GradedVector<BigComplex> {
    let p = c.prec;
    let two_pi = c.pi.clone() * BigReal::from_i64(2, p);
    e.ch.to_complex(p)
        .map_by_degree(|deg, x| x.scale(&two_pi.powi(deg as i64)).mul_i_pow(deg as i64))
}

/// `e^{πi c1}` as a complex class.
pub fn exp_pi_i_c1(ring: &Ring, c: &ConstantTable) -> GradedVector<BigComplex> {
    let p = c.prec;
    let pi_i = BigComplex::new(BigReal::zero(p), c.pi.clone());
    ring.c1_vector()
        .to_complex(p)
        .scale(&pi_i)
        .exp()
        .expect("c1 has no H^0 part")
}

/// `[α, β) = (2π)^{-dim} ∫ (e^{πi c1} e^{πi μ} α) ∪ β`, with μ = p − dim/2 on H^{2p}.
pub fn pair_bracket(
    a: &GradedVector<BigComplex>,
    b: &GradedVector<BigComplex>,
    c: &ConstantTable,
) -> Result<BigComplex> {
    check_same(a.ring(), b.ring())?;
    let ring = a.ring();
    let n = ring.dim as i64;
    // e^{πi(p − n/2)} = i^{2p − n}
    let twisted = a.map_by_degree(|p, x| x.mul_i_pow(2 * p as i64 - n));
    let twisted = cup(&exp_pi_i_c1(ring, c), &twisted)?;
    let total = cup(&twisted, b)?.integrate();
    let two_pi = c.pi.clone() * BigReal::from_i64(2, c.prec);
    Ok(total.scale(&(BigReal::one(c.prec) / two_pi.powi(n))))
}

/// χ(E1, E2) = ∫ ch(E1^∨) ch(E2) td, exactly.
pub fn euler_characteristic(e1: &KClass, e2: &KClass) -> Result<ExactRational> {
    check_same(e1.ring(), e2.ring())?;
    let td = todd_class(e1.ring());
    Ok(cup(&cup(&e1.dual().ch, &e2.ch)?, &td)?.integrate())
}

#[derive(Clone, Debug)]
pub struct HrrCheck {
    pub chi_todd: ExactRational,
    pub chi_gamma: BigComplex,
}

impl HrrCheck {
    pub fn chi_todd_complex(&self, p: Prec) -> BigComplex {
        BigComplex::from_rational(&self.chi_todd, p)
    }

    /// `|chi_todd − chi_gamma|`.
    pub fn discrepancy(&self) -> BigReal {
        (self.chi_todd_complex(self.chi_gamma.prec()) - self.chi_gamma.clone()).abs()
    }
}

/// Computes χ(E1,E2) both from the Todd class and from `[Γ̂Ch(E1), Γ̂Ch(E2))`.
pub fn hrr_check(e1: &KClass, e2: &KClass, c: &ConstantTable) -> Result<HrrCheck> {
    let chi_todd = euler_characteristic(e1, e2)?;
    let gamma = gamma_class(e1.ring(), c)?;
    let a = cup(&gamma, &modified_chern(e1, c))?;
    let b = cup(&gamma, &modified_chern(e2, c))?;
    Ok(HrrCheck {
        chi_todd,
        chi_gamma: pair_bracket(&a, &b, c)?,
    })
}
