//! Gram matrices of line-bundle collections under the pairing `[·,·)`,
//! mutations of marked bases, and the phase window for P^{n−1}.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::ring::{
    build_projective_ring, euler_characteristic, gamma_class, modified_chern, pair_bracket, GradedVector, KClass,
};
use crate::scalars::{BigComplex, BigReal, ConstantTable};

/// `O, O(1), …, O(n−1)` on P^{n−1}.
pub fn beilinson_collection(n: usize) -> Result<Vec<KClass>> {
    if n < 2 {
        return Err(Error::InvalidArgument("beilinson_collection needs n ≥ 2".into()));
    }
    let ring = build_projective_ring(n);
    let h = GradedVector::basis(&ring, 1, ());
    Ok((0..n as i64).map(|k| KClass::line_bundle(&h, k)).collect())
}

/// Exact `χ(E_i, E_j)`.
pub fn chi_matrix(es: &[KClass]) -> Result<Vec<Vec<BigInt>>> {
    es.iter()
        .map(|a| {
            es.iter()
                .map(|b| {
                    let q = euler_characteristic(a, b)?;
                    Ok(q.to_integer())
                })
                .collect()
        })
        .collect()
}

/// Numerical Gram matrix with its nearest-integer rounding.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub entries: Vec<Vec<BigComplex>>,
    pub rounded: Vec<Vec<BigInt>>,
    /// Largest distance of an entry from its rounding.
    pub residual: BigReal,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_integral(&self, digits_lost: i64) -> bool {
        let p = self.residual.prec().digits as i64;
        self.residual.below_pow10(-p + digits_lost)
    }

    /// Rows of `i,j,exact,float`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,exact,float\n");
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                out.push_str(&format!("{i},{j},{},{:e}\n", self.rounded[i][j], x.re.to_f64()));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "exact": self.rounded.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "float": self.entries.iter().map(|r| r.iter().map(|x| x.re.to_f64()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "residual": self.residual.to_f64(),
        })
    }
}

/// `[A_i, A_j)` for all pairs, rounded to integers.
pub fn gram_matrix(classes: &[GradedVector<BigComplex>], c: &ConstantTable) -> Result<GramMatrix> {
    let p = c.prec;
    let mut entries = Vec::with_capacity(classes.len());
    let mut rounded = Vec::with_capacity(classes.len());
    let mut residual = BigReal::zero(p);
    for a in classes {
        let mut row = Vec::with_capacity(classes.len());
        let mut rrow = Vec::with_capacity(classes.len());
        for b in classes {
            let x = pair_bracket(a, b, c)?;
            let k = x.re.round_to_bigint();
            let d = (x.clone() - BigComplex::real(BigReal::from_bigint(&k, p))).abs();
            residual = residual.max(d);
            row.push(x);
            rrow.push(k);
        }
        entries.push(row);
        rounded.push(rrow);
    }
    Ok(GramMatrix {
        entries,
        rounded,
        residual,
    })
}

/// Upper unitriangular in the given order.
pub fn is_unitriangular(g: &[Vec<BigInt>]) -> bool {
    g.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| match i.cmp(&j) {
            std::cmp::Ordering::Equal => x == &BigInt::from(1),
            std::cmp::Ordering::Greater => x.is_zero(),
            std::cmp::Ordering::Less => true,
        })
    })
}

/// An order making `g` upper unitriangular, if one exists (topological sort of
/// the relation "i before j when g_ij ≠ 0").
pub fn unitriangular_order(g: &[Vec<BigInt>]) -> Option<Vec<usize>> {
    let n = g.len();
    if (0..n).any(|i| g[i][i] != BigInt::from(1)) {
        return None;
    }
    let mut indeg = vec![0usize; n];
    for (i, row) in g.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && !x.is_zero() {
                indeg[j] += 1;
            }
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = queue.pop_front() {
        order.push(i);
        for j in 0..n {
            if i != j && !g[i][j].is_zero() {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Signs ε with `ε_i ε_j a_ij = b_ij` for all i, j, if they exist.
pub fn signs_relating(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Option<Vec<i8>> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let mut eps: Vec<Option<i8>> = vec![None; n];
    for start in 0..n {
        if eps[start].is_some() {
            continue;
        }
        eps[start] = Some(1);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let ei = eps[i].expect("set before push");
            for j in 0..n {
                for (x, y) in [(&a[i][j], &b[i][j]), (&a[j][i], &b[j][i])] {
                    if x.abs() != y.abs() {
                        return None;
                    }
                    if x.is_zero() {
                        continue;
                    }
                    let want = if x == y { ei } else { -ei };
                    match eps[j] {
                        None => {
                            eps[j] = Some(want);
                            stack.push(j);
                        }
                        Some(e) if e != want => return None,
                        _ => {}
                    }
                }
            }
        }
    }
    Some(eps.into_iter().map(|e| e.expect("all visited")).collect())
}

#[derive(Clone, Debug)]
pub struct MarkedElement {
    pub class: GradedVector<BigComplex>,
    /// Integer coordinates over the starting collection.
    pub coords: Vec<BigInt>,
    pub mark: BigComplex,
    pub label: String,
}

/// Ordered classes with eigenvalue marks.
#[derive(Clone, Debug)]
pub struct MarkedBasis {
    pub elements: Vec<MarkedElement>,
    /// Exact Gram matrix of the starting collection.
    base_gram: Vec<Vec<BigInt>>,
}

/// `v_k = n e^{−2πik/n}`, the eigenvalues of c1⋆ on P^{n−1}.
pub fn projective_mark(n: usize, k: i64, c: &ConstantTable) -> BigComplex {
    let p = c.prec;
    let theta = -(c.pi.clone() * BigReal::from_i64(2 * k, p)) / BigReal::from_i64(n as i64, p);
    BigComplex::from_polar(&BigReal::from_i64(n as i64, p), &theta)
}

impl MarkedBasis {
    /// `Γ̂ Ch(O(k))` on P^{n−1} for the given k, marked with v_k.
    pub fn from_line_bundles(n: usize, ks: &[i64], c: &ConstantTable) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("need n ≥ 2".into()));
        }
        let ring = build_projective_ring(n);
        let gamma = gamma_class(&ring, c)?;
        let h = GradedVector::basis(&ring, 1, ());
        let bundles: Vec<KClass> = ks.iter().map(|&k| KClass::line_bundle(&h, k)).collect();
        let base_gram = chi_matrix(&bundles)?;
        let m = ks.len();
        let elements = ks
            .iter()
            .zip(&bundles)
            .enumerate()
            .map(|(i, (&k, e))| MarkedElement {
                class: &gamma * &modified_chern(e, c),
                coords: (0..m).map(|j| BigInt::from((i == j) as i64)).collect(),
                mark: projective_mark(n, k, c),
                label: format!("O({k})"),
            })
            .collect();
        Ok(MarkedBasis { elements, base_gram })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.label.as_str()).collect()
    }

    pub fn classes(&self) -> Vec<GradedVector<BigComplex>> {
        self.elements.iter().map(|e| e.class.clone()).collect()
    }

    /// Gram matrix recomputed from the classes.
    pub fn gram(&self, c: &ConstantTable) -> Result<GramMatrix> {
        gram_matrix(&self.classes(), c)
    }

    /// Gram matrix from the integer coordinates, exactly.
    pub fn exact_gram(&self) -> Vec<Vec<BigInt>> {
        let m = self.base_gram.len();
        let form = |x: &[BigInt], y: &[BigInt]| {
            let mut s = BigInt::zero();
            for a in 0..m {
                if x[a].is_zero() {
                    continue;
                }
                for b in 0..m {
                    s += &x[a] * &self.base_gram[a][b] * &y[b];
                }
            }
            s
        };
        self.elements
            .iter()
            .map(|a| self.elements.iter().map(|b| form(&a.coords, &b.coords)).collect())
            .collect()
    }

    fn check_position(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "mutation position {i} outside 1..{}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Integer pairing `[A_a, A_b)` from the classes, rejecting non-integral values.
    fn integral_pairing(&self, a: usize, b: usize, c: &ConstantTable) -> Result<BigInt> {
        let x = pair_bracket(&self.elements[a].class, &self.elements[b].class, c)?;
        let k = x.re.round_to_bigint();
        let d = (x - BigComplex::real(BigReal::from_bigint(&k, c.prec))).abs();
        if !d.below_pow10(-(c.prec.digits as i64) + 10) {
            return Err(Error::InvalidArgument(format!(
                "pairing [A_{a}, A_{b}) is not integral (off by {:e})",
                d.to_f64()
            )));
        }
        Ok(k)
    }

    /// Right mutation at position i (1-based, between A_i and A_{i+1}):
    /// `(…, A_{i+1}, A_i − [A_i, A_{i+1}) A_{i+1}, …)`.
    pub fn right_mutation(&self, i: usize, c: &ConstantTable) -> Result<Self> {
        self.check_position(i)?;
        let (a, b) = (i - 1, i);
        let k = self.integral_pairing(a, b, c)?;
        let mut out = self.clone();
        let (ea, eb) = (&self.elements[a], &self.elements[b]);
        let kc = BigComplex::real(BigReal::from_bigint(&k, c.prec));
        let new = MarkedElement {
            class: &ea.class - &eb.class.scale(&kc),
            coords: ea.coords.iter().zip(&eb.coords).map(|(x, y)| x - &k * y).collect(),
            mark: ea.mark.clone(),
            label: if k.is_zero() {
                ea.label.clone()
            } else {
                format!("R({},{})", ea.label, eb.label)
            },
        };
        out.elements[a] = eb.clone();
        out.elements[b] = new;
        Ok(out)
    }

    /// Left mutation at position i, the inverse of [`Self::right_mutation`] on
    /// semi-orthogonal pairs: `(…, A_{i+1} − [A_i, A_{i+1}) A_i, A_i, …)`.
    pub fn left_mutation(&self, i: usize, c: &ConstantTable) -> Result<Self> {
        self.check_position(i)?;
        let (a, b) = (i - 1, i);
        let k = self.integral_pairing(a, b, c)?;
        let mut out = self.clone();
        let (ea, eb) = (&self.elements[a], &self.elements[b]);
        let kc = BigComplex::real(BigReal::from_bigint(&k, c.prec));
        let new = MarkedElement {
            class: &eb.class - &ea.class.scale(&kc),
            coords: eb.coords.iter().zip(&ea.coords).map(|(x, y)| x - &k * y).collect(),
            mark: eb.mark.clone(),
            label: if k.is_zero() {
                eb.label.clone()
            } else {
                format!("L({},{})", ea.label, eb.label)
            },
        };
        out.elements[a] = new;
        out.elements[b] = ea.clone();
        Ok(out)
    }

    /// True when im(e^{−iφ} u) is weakly decreasing along the basis.
    pub fn ordered_for_phase(&self, phi: &BigReal) -> bool {
        let rot = BigComplex::cis(&-phi.clone());
        let ims: Vec<f64> = self
            .elements
            .iter()
            .map(|e| (e.mark.clone() * rot.clone()).im.to_f64())
            .collect();
        ims.windows(2).all(|w| w[0] >= w[1] - 1e-12)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .elements
            .iter()
            .map(|e| json!({
                "label": e.label,
                "mark": [e.mark.re.to_f64(), e.mark.im.to_f64()],
                "coords": e.coords.iter().map(|x| x.to_i64().map_or_else(|| json!(x.to_string()), |v| json!(v))).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>())
    }
}

/// Per-pair admissibility and the line bundles the phase window pins down.
#[derive(Clone, Debug)]
pub struct PhaseAssignment {
    pub n: usize,
    pub phi: f64,
    /// `(i, j, im((v_i − v_j) e^{−iφ}))` for i < j.
    pub pair_gaps: Vec<(usize, usize, f64)>,
    pub admissible: bool,
    /// `(k, |2πk/n + φ|)` with the value below π/2 + π/n; empty when inadmissible.
    pub assigned: Vec<(i64, f64)>,
    pub bound: f64,
}

impl PhaseAssignment {
    pub fn assigned_ks(&self) -> Vec<i64> {
        self.assigned.iter().map(|a| a.0).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "phi": self.phi,
            "admissible": self.admissible,
            "bound": self.bound,
            "pairs": self.pair_gaps.iter().map(|(i, j, g)| json!({"i": i, "j": j, "im_gap": g})).collect::<Vec<_>>(),
            "assigned": self.assigned.iter().map(|(k, v)| json!({"k": k, "value": v, "bundle": format!("O({k})")})).collect::<Vec<_>>(),
        })
    }
}

/// Admissibility of φ for the marks v_k = n e^{−2πik/n} of P^{n−1} and every
/// integer k with `|2πk/n + φ| < π/2 + π/n`.
pub fn phase_assignment(n: usize, phi: f64) -> Result<PhaseAssignment> {
    if n < 2 {
        return Err(Error::InvalidArgument("phase_assignment needs n ≥ 2".into()));
    }
    use std::f64::consts::PI;
    let nf = n as f64;
    let im_rot = |k: usize| -nf * (2.0 * PI * k as f64 / nf + phi).sin();
    let mut pair_gaps = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pair_gaps.push((i, j, im_rot(i) - im_rot(j)));
        }
    }
    let admissible = pair_gaps.iter().all(|g| g.2.abs() > 1e-12 * nf);
    let bound = PI / 2.0 + PI / nf;
    let mut assigned = Vec::new();
    if admissible {
        let reach = ((bound + phi.abs()) * nf / (2.0 * PI)).ceil() as i64 + 1;
        for k in -reach..=reach {
            let v = (2.0 * PI * k as f64 / nf + phi).abs();
            if v < bound {
                assigned.push((k, v));
            }
        }
    }
    Ok(PhaseAssignment {
        n,
        phi,
        pair_gaps,
        admissible,
        assigned,
        bound,
    })
}
