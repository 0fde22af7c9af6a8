//! Graded nilpotent Lie algebras with exact rational structure constants.
//!
//! The basis is stored in descending weight order, ties kept in input order.
//! With that ordering the span of the first `k` basis vectors is an ideal for
//! every `k` (brackets only raise weight), which gives the Jordan-Hölder flag
//! used by the stratification code. Coordinates supplied in the user's order
//! are translated through a permutation record kept on the algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Identity, Result, ValidationError};
use crate::linalg;
use crate::rational::{pow, Q};

/// Element of the Lie algebra, in internal basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector(pub Vec<Q>);

/// Element of the dual space, in coordinates of the dual basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualPoint(pub Vec<Q>);

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector(vec![Q::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        Vector(linalg::unit(dim, i))
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.0)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Vector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> Self {
        Vector(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn add_scaled(&mut self, c: &Q, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }
}

impl DualPoint {
    pub fn zero(dim: usize) -> Self {
        DualPoint(vec![Q::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        DualPoint(linalg::unit(dim, i))
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.0)
    }

    /// Pairing `<xi, X>`.
    pub fn pair(&self, v: &Vector) -> Q {
        self.0
            .iter()
            .zip(&v.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// A basis vector as it appears in the input: display label plus weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub weight: u32,
}

impl BasisEntry {
    pub fn new(label: impl Into<String>, weight: u32) -> Self {
        BasisEntry {
            label: label.into(),
            weight,
        }
    }
}

/// One bracket relation `[lhs, rhs] = sum c * target`, indices in user order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub lhs: usize,
    pub rhs: usize,
    pub terms: Vec<(Q, usize)>,
}

impl Bracket {
    pub fn new(lhs: usize, rhs: usize, terms: Vec<(Q, usize)>) -> Self {
        Bracket { lhs, rhs, terms }
    }
}

type Terms = Vec<(usize, Q)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    name: String,
    labels: Vec<String>,
    weights: Vec<u32>,
    /// `table[i][j]` lists `(k, c)` with `[X_i, X_j] = sum c X_k`.
    table: Vec<Vec<Terms>>,
    /// `user_to_internal[u]` is the internal index of the `u`-th input vector.
    user_to_internal: Vec<usize>,
    depth: u32,
}

impl GradedLieAlgebra {
    /// Builds and validates an algebra from basis entries and bracket relations
    /// given in input order. A relation `[X_i, X_j]` implies `[X_j, X_i]` by
    /// antisymmetry unless both are listed, in which case they must agree.
    pub fn from_brackets(
        name: impl Into<String>,
        basis: &[BasisEntry],
        brackets: &[Bracket],
    ) -> Result<Self> {
        let m = basis.len();
        if m == 0 {
            return Err(Error::Parse("algebra has no basis vectors".into()));
        }
        for (i, b) in basis.iter().enumerate() {
            if b.weight == 0 {
                return Err(Error::Parse(format!("weight of `{}` must be positive", b.label)));
            }
            if basis[..i].iter().any(|o| o.label == b.label) {
                return Err(Error::Parse(format!("duplicate basis label `{}`", b.label)));
            }
        }

        let mut explicit: BTreeMap<(usize, usize), BTreeMap<usize, Q>> = BTreeMap::new();
        for br in brackets {
            for &idx in [br.lhs, br.rhs].iter().chain(br.terms.iter().map(|(_, k)| k)) {
                if idx >= m {
                    return Err(Error::Parse(format!("basis index {idx} out of range")));
                }
            }
            if explicit.contains_key(&(br.lhs, br.rhs)) {
                return Err(Error::Parse(format!(
                    "bracket [{}, {}] listed twice",
                    basis[br.lhs].label, basis[br.rhs].label
                )));
            }
            let mut row = BTreeMap::new();
            for (c, k) in &br.terms {
                *row.entry(*k).or_insert_with(Q::zero) += c;
            }
            row.retain(|_, c: &mut Q| !c.is_zero());
            explicit.insert((br.lhs, br.rhs), row);
        }

        let label = |i: usize| basis[i].label.clone();
        let antisym_err = |i: usize, j: usize, k: usize, residual: Q| {
            Error::from(ValidationError {
                identity: Identity::Antisymmetry,
                witness: (label(i), label(j), label(k)),
                component: None,
                residual,
            })
        };

        // Antisymmetric completion in user indices.
        let mut user_table: BTreeMap<(usize, usize), BTreeMap<usize, Q>> = BTreeMap::new();
        for (&(i, j), row) in &explicit {
            if i == j {
                if let Some((&k, c)) = row.iter().next() {
                    return Err(antisym_err(i, j, k, c.clone()));
                }
                continue;
            }
            if let Some(rev) = explicit.get(&(j, i)) {
                let targets: std::collections::BTreeSet<usize> =
                    row.keys().chain(rev.keys()).copied().collect();
                for k in targets {
                    let a = row.get(&k).cloned().unwrap_or_else(Q::zero);
                    let b = rev.get(&k).cloned().unwrap_or_else(Q::zero);
                    let residual = &a + &b;
                    if !residual.is_zero() {
                        let (p, r) = if i < j { (i, j) } else { (j, i) };
                        return Err(antisym_err(p, r, k, residual));
                    }
                }
            }
            user_table.insert((i, j), row.clone());
            user_table.insert((j, i), row.iter().map(|(&k, c)| (k, -c)).collect());
        }

        // Stable sort by descending weight.
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| basis[b].weight.cmp(&basis[a].weight));
        let mut user_to_internal = vec![0; m];
        for (internal, &user) in order.iter().enumerate() {
            user_to_internal[user] = internal;
        }

        let mut table = vec![vec![Vec::new(); m]; m];
        for ((i, j), row) in user_table {
            table[user_to_internal[i]][user_to_internal[j]] = row
                .into_iter()
                .map(|(k, c)| (user_to_internal[k], c))
                .collect::<Vec<_>>();
        }
        for row in table.iter_mut() {
            for terms in row.iter_mut() {
                terms.sort_by_key(|(k, _)| *k);
            }
        }

        let alg = GradedLieAlgebra {
            name: name.into(),
            labels: order.iter().map(|&u| basis[u].label.clone()).collect(),
            weights: order.iter().map(|&u| basis[u].weight).collect(),
            table,
            user_to_internal,
            depth: basis.iter().map(|b| b.weight).max().unwrap_or(1),
        };
        alg.validate()?;
        Ok(alg)
    }

    /// Checks grading and the Jacobi identity (antisymmetry holds by
    /// construction). Pairs are scanned in internal order with `i < j`.
    pub fn validate(&self) -> Result<()> {
        let m = self.dim();
        for i in 0..m {
            for j in 0..m {
                let (a, b) = (&self.table[i][j], &self.table[j][i]);
                for (k, c) in a {
                    let back = b.iter().find(|(kk, _)| kk == k).map(|(_, c)| c.clone());
                    let residual = c + back.unwrap_or_else(Q::zero);
                    if !residual.is_zero() || (i == j && !c.is_zero()) {
                        return Err(self.violation(Identity::Antisymmetry, i, j, *k, None, residual));
                    }
                }
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                for (k, c) in &self.table[i][j] {
                    if self.weights[*k] != self.weights[i] + self.weights[j] {
                        return Err(self.violation(Identity::Graded, i, j, *k, None, c.clone()));
                    }
                }
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let (x, y, z) = (self.basis(i), self.basis(j), self.basis(k));
                    let s = self
                        .bracket_unchecked(&x, &self.bracket_unchecked(&y, &z))
                        .add(&self.bracket_unchecked(&y, &self.bracket_unchecked(&z, &x)))
                        .add(&self.bracket_unchecked(&z, &self.bracket_unchecked(&x, &y)));
                    if let Some((comp, r)) = s.0.iter().enumerate().find(|(_, r)| !r.is_zero()) {
                        return Err(self.violation(Identity::Jacobi, i, j, k, Some(comp), r.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    fn violation(
        &self,
        identity: Identity,
        i: usize,
        j: usize,
        k: usize,
        component: Option<usize>,
        residual: Q,
    ) -> Error {
        Error::from(ValidationError {
            identity,
            witness: (
                self.labels[i].clone(),
                self.labels[j].clone(),
                self.labels[k].clone(),
            ),
            component: component.map(|c| self.labels[c].clone()),
            residual,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Weights in internal (descending) order.
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Largest weight `r`; the algebra is nilpotent of step at most `r`.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn basis(&self, i: usize) -> Vector {
        Vector::basis(self.dim(), i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sparse expansion of `[X_i, X_j]` in internal indices.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i][j]
    }

    /// Basis entries in the original input order.
    pub fn user_basis(&self) -> Vec<BasisEntry> {
        self.user_to_internal
            .iter()
            .map(|&i| BasisEntry::new(self.labels[i].clone(), self.weights[i]))
            .collect()
    }

    pub fn user_to_internal(&self) -> &[usize] {
        &self.user_to_internal
    }

    /// Reorders coordinates given in input order into internal order.
    pub fn coords_from_user(&self, user: &[Q]) -> Result<Vec<Q>> {
        self.check_len(user.len())?;
        let mut out = vec![Q::zero(); self.dim()];
        for (u, x) in user.iter().enumerate() {
            out[self.user_to_internal[u]] = x.clone();
        }
        Ok(out)
    }

    pub fn coords_to_user(&self, internal: &[Q]) -> Vec<Q> {
        self.user_to_internal
            .iter()
            .map(|&i| internal[i].clone())
            .collect()
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: len,
            });
        }
        Ok(())
    }

    pub fn bracket(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        self.check_len(a.0.len())?;
        self.check_len(b.0.len())?;
        Ok(self.bracket_unchecked(a, b))
    }

    pub(crate) fn bracket_unchecked(&self, a: &Vector, b: &Vector) -> Vector {
        let m = self.dim();
        let mut out = vec![Q::zero(); m];
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if bj.is_zero() || self.table[i][j].is_empty() {
                    continue;
                }
                let ab = ai * bj;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        Vector(out)
    }

    /// Matrix of `ad(A)`: column `j` holds `[A, X_j]`.
    pub fn ad(&self, a: &Vector) -> Result<Vec<Vec<Q>>> {
        self.check_len(a.0.len())?;
        let m = self.dim();
        let cols: Vec<Vec<Q>> = (0..m)
            .map(|j| self.bracket_unchecked(a, &self.basis(j)).0)
            .collect();
        Ok(linalg::transpose(&cols))
    }

    pub fn dilate_vector(&self, lambda: &Q, v: &Vector) -> Result<Vector> {
        Ok(Vector(self.dilate_coords(lambda, &v.0)?))
    }

    /// Transpose of the dilation acting on the dual basis: each coordinate
    /// scales by the weight of its basis vector, as on the primal side.
    pub fn dilate_dual(&self, lambda: &Q, xi: &DualPoint) -> Result<DualPoint> {
        Ok(DualPoint(self.dilate_coords(lambda, &xi.0)?))
    }

    fn dilate_coords(&self, lambda: &Q, coords: &[Q]) -> Result<Vec<Q>> {
        if !lambda.is_positive() {
            return Err(Error::NonpositiveScale);
        }
        self.check_len(coords.len())?;
        Ok(coords
            .iter()
            .zip(&self.weights)
            .map(|(x, &q)| x * pow(lambda, q))
            .collect())
    }

    /// Sum of the weights, the scaling exponent of Lebesgue measure under dilations.
    pub fn homogeneous_dimension(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().flatten().all(Vec::is_empty)
    }

    /// Re-expresses the algebra in a new basis given by internal coordinate
    /// vectors. Each new vector must be homogeneous; the result is validated.
    pub fn change_basis(
        &self,
        name: impl Into<String>,
        new_basis: &[Vector],
        labels: &[String],
    ) -> Result<GradedLieAlgebra> {
        let m = self.dim();
        if new_basis.len() != m || labels.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: new_basis.len(),
            });
        }
        let mut weights = Vec::with_capacity(m);
        for v in new_basis {
            self.check_len(v.0.len())?;
            let ws: std::collections::BTreeSet<u32> = v
                .0
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, _)| self.weights[i])
                .collect();
            if ws.len() != 1 {
                return Err(Error::WeightMismatch(
                    "change of basis needs nonzero homogeneous vectors".into(),
                ));
            }
            weights.push(*ws.iter().next().unwrap());
        }
        let columns: Vec<Vec<Q>> = new_basis.iter().map(|v| v.0.clone()).collect();
        let p = linalg::transpose(&columns);
        let p_inv = linalg::inverse(&p)
            .ok_or_else(|| Error::InvalidArgument("new basis is not linearly independent".into()))?;
        let basis: Vec<BasisEntry> = labels
            .iter()
            .zip(&weights)
            .map(|(l, &w)| BasisEntry::new(l.clone(), w))
            .collect();
        let mut brackets = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let br = self.bracket_unchecked(&new_basis[a], &new_basis[b]);
                if br.is_zero() {
                    continue;
                }
                let coeffs = linalg::mat_vec(&p_inv, &br.0);
                let terms = coeffs
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (c, k))
                    .collect();
                brackets.push(Bracket::new(a, b, terms));
            }
        }
        GradedLieAlgebra::from_brackets(name, &basis, &brackets)
    }

    /// All nonzero relations `[X_i, X_j]`, `i < j` in input order.
    pub fn user_brackets(&self) -> Vec<Bracket> {
        let m = self.dim();
        let mut internal_to_user = vec![0; m];
        for (u, &i) in self.user_to_internal.iter().enumerate() {
            internal_to_user[i] = u;
        }
        let mut out = Vec::new();
        for ui in 0..m {
            for uj in ui + 1..m {
                let terms = &self.table[self.user_to_internal[ui]][self.user_to_internal[uj]];
                if terms.is_empty() {
                    continue;
                }
                let mut ts: Vec<(Q, usize)> = terms
                    .iter()
                    .map(|(k, c)| (c.clone(), internal_to_user[*k]))
                    .collect();
                ts.sort_by_key(|(_, k)| *k);
                out.push(Bracket::new(ui, uj, ts));
            }
        }
        out
    }
}

impl fmt::Display for GradedLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, depth {}", self.name, self.dim(), self.depth)?;
        let basis: Vec<String> = self
            .labels
            .iter()
            .zip(&self.weights)
            .map(|(l, w)| format!("{l}:{w}"))
            .collect();
        write!(f, ", basis {})", basis.join(" "))
    }
}

/// Fixture algebras used throughout tests and examples.
pub mod fixtures {
    use super::*;
    use crate::rational::q;

    fn entries(spec: &[(&str, u32)]) -> Vec<BasisEntry> {
        spec.iter().map(|(l, w)| BasisEntry::new(*l, *w)).collect()
    }

    /// `H_{2n+1}`: `[X_j, Y_j] = Z`.
    pub fn heisenberg(n: usize) -> GradedLieAlgebra {
        let mut basis = Vec::new();
        for j in 1..=n {
            basis.push(BasisEntry::new(if n == 1 { "X".into() } else { format!("X{j}") }, 1));
        }
        for j in 1..=n {
            basis.push(BasisEntry::new(if n == 1 { "Y".into() } else { format!("Y{j}") }, 1));
        }
        basis.push(BasisEntry::new("Z", 2));
        let brackets: Vec<Bracket> = (0..n)
            .map(|j| Bracket::new(j, n + j, vec![(q(1), 2 * n)]))
            .collect();
        GradedLieAlgebra::from_brackets("heisenberg", &basis, &brackets).expect("valid")
    }

    /// Engel algebra: `[X, Y] = Z`, `[X, Z] = T`.
    pub fn engel() -> GradedLieAlgebra {
        GradedLieAlgebra::from_brackets(
            "engel",
            &entries(&[("X", 1), ("Y", 1), ("Z", 2), ("T", 3)]),
            &[
                Bracket::new(0, 1, vec![(q(1), 2)]),
                Bracket::new(0, 2, vec![(q(1), 3)]),
            ],
        )
        .expect("valid")
    }

    /// `h_3 + R` with a central weight-2 direction `W`.
    pub fn heisenberg_plus_line() -> GradedLieAlgebra {
        GradedLieAlgebra::from_brackets(
            "h3+R",
            &entries(&[("X", 1), ("Y", 1), ("Z", 2), ("W", 2)]),
            &[Bracket::new(0, 1, vec![(q(1), 2)])],
        )
        .expect("valid")
    }

    pub fn abelian(n: usize) -> GradedLieAlgebra {
        let basis: Vec<BasisEntry> = (1..=n).map(|i| BasisEntry::new(format!("E{i}"), 1)).collect();
        GradedLieAlgebra::from_brackets("abelian", &basis, &[]).expect("valid")
    }
}

impl Vector {
    pub fn is_homogeneous_of(&self, weights: &[u32], w: u32) -> bool {
        self.0
            .iter()
            .zip(weights)
            .all(|(x, &q)| x.is_zero() || q == w)
    }
}

impl From<Vec<Q>> for Vector {
    fn from(v: Vec<Q>) -> Self {
        Vector(v)
    }
}

impl From<Vec<Q>> for DualPoint {
    fn from(v: Vec<Q>) -> Self {
        DualPoint(v)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::{q, qr};
    use proptest::prelude::*;

    #[test]
    fn heisenberg_is_valid_depth_two() {
        let h = heisenberg(1);
        assert_eq!(h.depth(), 2);
        assert_eq!(h.labels(), &["Z", "X", "Y"]);
        assert_eq!(h.homogeneous_dimension(), 4);
        let x = h.basis(h.index_of("X").unwrap());
        let y = h.basis(h.index_of("Y").unwrap());
        assert_eq!(h.bracket(&x, &y).unwrap(), h.basis(h.index_of("Z").unwrap()));
    }

    #[test]
    fn abelian_depth_one() {
        let a = abelian(4);
        assert_eq!(a.depth(), 1);
        assert_eq!(a.homogeneous_dimension(), 4);
        assert!(a.is_abelian());
    }

    #[test]
    fn engel_brackets_and_dimension() {
        let e = engel();
        assert_eq!(e.labels(), &["T", "Z", "X", "Y"]);
        assert_eq!(e.homogeneous_dimension(), 7);
        let x = e.basis(e.index_of("X").unwrap());
        let z = e.basis(e.index_of("Z").unwrap());
        assert_eq!(e.bracket(&x, &z).unwrap(), e.basis(e.index_of("T").unwrap()));
    }

    #[test]
    fn broken_grading_reports_witness() {
        let err = GradedLieAlgebra::from_brackets(
            "bad",
            &[BasisEntry::new("X", 1), BasisEntry::new("Y", 1), BasisEntry::new("Z", 3)],
            &[Bracket::new(0, 1, vec![(q(1), 2)])],
        )
        .unwrap_err();
        match err {
            Error::Validation(v) => {
                assert_eq!(v.identity, Identity::Graded);
                assert_eq!(v.witness, ("X".into(), "Y".into(), "Z".into()));
                assert_eq!(v.residual, q(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inconsistent_antisymmetry_rejected() {
        let err = GradedLieAlgebra::from_brackets(
            "bad",
            &[BasisEntry::new("X", 1), BasisEntry::new("Y", 1), BasisEntry::new("Z", 2)],
            &[
                Bracket::new(0, 1, vec![(q(1), 2)]),
                Bracket::new(1, 0, vec![(q(1), 2)]),
            ],
        )
        .unwrap_err();
        assert!(matches!(&err, Error::Validation(v) if v.identity == Identity::Antisymmetry));
        let err = GradedLieAlgebra::from_brackets(
            "bad",
            &[BasisEntry::new("X", 1), BasisEntry::new("Z", 2)],
            &[Bracket::new(0, 0, vec![(q(1), 1)])],
        )
        .unwrap_err();
        assert!(matches!(&err, Error::Validation(v) if v.identity == Identity::Antisymmetry));
    }

    #[test]
    fn jacobi_failure_detected() {
        // [X,Y]=Z, [X,Z]=T, [X,T]=U, [Y,T]=U is graded, but the cyclic sum on
        // (X, Y, Z) is [Y,[Z,X]] = [Y,-T] = -U.
        let basis = [
            BasisEntry::new("X", 1),
            BasisEntry::new("Y", 1),
            BasisEntry::new("Z", 2),
            BasisEntry::new("T", 3),
            BasisEntry::new("U", 4),
        ];
        let brackets = [
            Bracket::new(0, 1, vec![(q(1), 2)]),
            Bracket::new(0, 2, vec![(q(1), 3)]),
            Bracket::new(0, 3, vec![(q(1), 4)]),
            Bracket::new(1, 3, vec![(q(1), 4)]),
        ];
        let err = GradedLieAlgebra::from_brackets("bad", &basis, &brackets).unwrap_err();
        match err {
            Error::Validation(v) => {
                assert_eq!(v.identity, Identity::Jacobi);
                assert_eq!(v.component.as_deref(), Some("U"));
                assert_eq!(v.residual, q(-1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dilation_examples() {
        let h = heisenberg(1);
        let z = h.basis(0);
        assert_eq!(h.dilate_vector(&q(2), &z).unwrap(), z.scale(&q(4)));
        let v = Vector(vec![q(3), qr(-1, 2), q(5)]);
        assert_eq!(h.dilate_vector(&q(1), &v).unwrap(), v);
        assert!(matches!(h.dilate_vector(&q(0), &v), Err(Error::NonpositiveScale)));
        assert!(matches!(h.dilate_dual(&q(-1), &DualPoint(v.0.clone())), Err(Error::NonpositiveScale)));
    }

    #[test]
    fn user_coordinates_round_trip() {
        let e = engel();
        let user = vec![q(1), q(2), q(3), q(4)];
        let internal = e.coords_from_user(&user).unwrap();
        assert_eq!(internal, vec![q(4), q(3), q(1), q(2)]);
        assert_eq!(e.coords_to_user(&internal), user);
        assert!(e.coords_from_user(&user[..3]).is_err());
    }

    #[test]
    fn ad_is_nilpotent_of_order_depth_plus_one() {
        for alg in [heisenberg(1), heisenberg(2), engel(), heisenberg_plus_line(), abelian(3)] {
            for i in 0..alg.dim() {
                let ad = alg.ad(&alg.basis(i)).unwrap();
                let mut p = linalg::identity(alg.dim());
                for _ in 0..=alg.depth() {
                    p = linalg::mat_mul(&p, &ad);
                }
                assert!(p.iter().all(|r| linalg::is_zero_vec(r)), "{alg}");
            }
        }
    }

    #[test]
    fn change_basis_keeps_structure() {
        let h = heisenberg(1);
        // Swap X and Y and flip Z: an automorphism.
        let nb = vec![h.basis(0).neg(), h.basis(2), h.basis(1)];
        let labels: Vec<String> = ["-Z", "Y", "X"].iter().map(|s| s.to_string()).collect();
        let h2 = h.change_basis("swapped", &nb, &labels).unwrap();
        assert_eq!(h2.bracket_basis(1, 2), &[(0usize, q(1))]);
    }

    fn rat() -> impl Strategy<Value = Q> {
        (-9i64..10, 1i64..6).prop_map(|(n, d)| qr(n, d))
    }

    fn vec_of(n: usize) -> impl Strategy<Value = Vector> {
        proptest::collection::vec(rat(), n).prop_map(Vector)
    }

    proptest! {
        #[test]
        fn dilation_is_automorphism(a in vec_of(4), b in vec_of(4), n in 1i64..7, d in 1i64..7) {
            let e = engel();
            let lam = qr(n, d);
            let lhs = e.bracket(&e.dilate_vector(&lam, &a).unwrap(), &e.dilate_vector(&lam, &b).unwrap()).unwrap();
            let rhs = e.dilate_vector(&lam, &e.bracket(&a, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dilation_group_law(v in vec_of(4), a in 1i64..6, b in 1i64..6, c in 1i64..6) {
            let e = engel();
            let (l, m) = (qr(a, b), qr(c, a));
            let lhs = e.dilate_vector(&l, &e.dilate_vector(&m, &v).unwrap()).unwrap();
            prop_assert_eq!(lhs, e.dilate_vector(&(&l * &m), &v).unwrap());
        }

        #[test]
        fn bracket_self_is_zero(a in vec_of(4)) {
            prop_assert!(engel().bracket(&a, &a).unwrap().is_zero());
        }

        /// Perturbing one structure constant of a valid algebra so that an
        /// identity breaks is always caught.
        #[test]
        fn perturbed_constants_rejected(delta in rat().prop_filter("nonzero", |d| !d.is_zero()), which in 0usize..3) {
            let basis = [
                BasisEntry::new("X", 1), BasisEntry::new("Y", 1),
                BasisEntry::new("Z", 2), BasisEntry::new("T", 3),
            ];
            let mut brackets = vec![
                Bracket::new(0, 1, vec![(q(1), 2)]),
                Bracket::new(0, 2, vec![(q(1), 3)]),
            ];
            match which {
                // Off-grade target.
                0 => brackets[0].terms.push((delta, 3)),
                // Explicit reverse entry disagreeing with [X,Y] = Z.
                1 => brackets.push(Bracket::new(1, 0, vec![(q(-1) + delta, 2)])),
                _ => brackets.push(Bracket::new(2, 2, vec![(delta, 3)])),
            }
            prop_assert!(GradedLieAlgebra::from_brackets("p", &basis, &brackets).is_err());
        }
    }

    #[test]
    fn jacobi_perturbation_rejected() {
        // Five-dimensional filiform algebra; any nonzero [Y,T] = c U breaks Jacobi.
        for c in [qr(1, 3), q(-2), q(5)] {
            let basis = [
                BasisEntry::new("X", 1), BasisEntry::new("Y", 1), BasisEntry::new("Z", 2),
                BasisEntry::new("T", 3), BasisEntry::new("U", 4),
            ];
            let valid = [
                Bracket::new(0, 1, vec![(q(1), 2)]),
                Bracket::new(0, 2, vec![(q(1), 3)]),
                Bracket::new(0, 3, vec![(q(1), 4)]),
            ];
            assert!(GradedLieAlgebra::from_brackets("ok", &basis, &valid).is_ok());
            let mut bad = valid.to_vec();
            bad.push(Bracket::new(1, 3, vec![(c, 4)]));
            let err = GradedLieAlgebra::from_brackets("bad", &basis, &bad).unwrap_err();
            assert!(matches!(&err, Error::Validation(v) if v.identity == Identity::Jacobi));
        }
    }
}
