//! The simply connected group in exponential coordinates of the first kind.
//!
//! The product is the Baker-Campbell-Hausdorff series in Dynkin's form,
//! truncated at the depth of the algebra: a right-nested bracket of `L`
//! letters has weight at least `L`, so it vanishes once `L` exceeds the depth.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::algebra::{DualPoint, GradedLieAlgebra, Vector};
use crate::error::Result;
use crate::linalg;
use crate::rational::{factorial, Q};

/// A word over `{A, B}` (false = A, true = B) and its Dynkin coefficient.
pub type DynkinTerm = (Vec<bool>, Q);

fn dynkin_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<DynkinTerm>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<DynkinTerm>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `log(e^A e^B)` on right-nested words of length at most
/// `depth`. Words whose bracket is identically zero are dropped.
pub fn dynkin_terms(depth: u32) -> Arc<Vec<DynkinTerm>> {
    let mut cache = dynkin_cache().lock().expect("dynkin cache poisoned");
    cache
        .entry(depth)
        .or_insert_with(|| Arc::new(compute_dynkin_terms(depth as usize)))
        .clone()
}

fn compute_dynkin_terms(depth: usize) -> Vec<DynkinTerm> {
    let mut acc: BTreeMap<Vec<bool>, Q> = BTreeMap::new();
    for len in 1..=depth {
        for n in 1..=len {
            let mut pairs = Vec::with_capacity(n);
            visit_pair_sequences(n, len, &mut pairs, &mut |seq| {
                let mut word = Vec::with_capacity(len);
                let mut denom = Q::from_integer((len as i64).into());
                for &(r, s) in seq {
                    word.extend(std::iter::repeat_n(false, r));
                    word.extend(std::iter::repeat_n(true, s));
                    denom *= factorial(r) * factorial(s);
                }
                let sign = if n % 2 == 1 { Q::one() } else { -Q::one() };
                let c = sign / (Q::from_integer((n as i64).into()) * denom);
                *acc.entry(word).or_insert_with(Q::zero) += c;
            });
        }
    }
    acc.into_iter()
        .filter(|(w, c)| !c.is_zero() && !(w.len() >= 2 && w[w.len() - 1] == w[w.len() - 2]))
        .collect()
}

/// Visits all sequences of `n` pairs `(r_i, s_i)` with `r_i + s_i >= 1` and
/// total sum `len`.
fn visit_pair_sequences(
    n: usize,
    len: usize,
    current: &mut Vec<(usize, usize)>,
    f: &mut dyn FnMut(&[(usize, usize)]),
) {
    if current.len() == n {
        if len == 0 {
            f(current);
        }
        return;
    }
    let remaining_slots = n - current.len() - 1;
    // Every later pair needs at least one letter.
    for total in 1..=len.saturating_sub(remaining_slots) {
        for r in 0..=total {
            current.push((r, total - r));
            visit_pair_sequences(n, len - total, current, f);
            current.pop();
        }
    }
}

/// `log(exp(A) exp(B))`, exact.
pub fn bch(alg: &GradedLieAlgebra, a: &Vector, b: &Vector) -> Result<Vector> {
    alg.check_len(a.0.len())?;
    alg.check_len(b.0.len())?;
    let terms = dynkin_terms(alg.depth());
    let mut out = Vector::zero(alg.dim());
    for (word, c) in terms.iter() {
        let letter = |x: bool| if x { b } else { a };
        let mut v = letter(word[word.len() - 1]).clone();
        for &x in word[..word.len() - 1].iter().rev() {
            if v.is_zero() {
                break;
            }
            v = alg.bracket_unchecked(letter(x), &v);
        }
        out.add_scaled(c, &v);
    }
    Ok(out)
}

/// Group element `exp(sum coords_i X_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement(pub Vector);

impl GroupElement {
    pub fn identity(dim: usize) -> Self {
        GroupElement(Vector::zero(dim))
    }

    pub fn exp(v: Vector) -> Self {
        GroupElement(v)
    }

    pub fn log(&self) -> &Vector {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        GroupElement(self.0.neg())
    }

    pub fn mul(&self, alg: &GradedLieAlgebra, other: &Self) -> Result<Self> {
        Ok(GroupElement(bch(alg, &self.0, &other.0)?))
    }

    /// Image under the group automorphism integrating the dilation.
    pub fn dilate(&self, alg: &GradedLieAlgebra, lambda: &Q) -> Result<Self> {
        Ok(GroupElement(alg.dilate_vector(lambda, &self.0)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapFrame {
    /// Acts on the Lie algebra.
    Primal,
    /// Acts on the dual space.
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub matrix: Vec<Vec<Q>>,
    pub frame: MapFrame,
}

impl LinearMap {
    pub fn apply(&self, v: &Vector) -> Vector {
        debug_assert_eq!(self.frame, MapFrame::Primal);
        Vector(linalg::mat_vec(&self.matrix, &v.0))
    }

    pub fn apply_dual(&self, xi: &DualPoint) -> DualPoint {
        debug_assert_eq!(self.frame, MapFrame::Dual);
        DualPoint(linalg::mat_vec(&self.matrix, &xi.0))
    }

    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            matrix: linalg::mat_mul(&self.matrix, &other.matrix),
            frame: self.frame,
        }
    }

    /// `(A - I)` nilpotent.
    pub fn is_unipotent(&self) -> bool {
        let n = self.matrix.len();
        let mut shifted = self.matrix.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= Q::one();
        }
        let mut p = shifted.clone();
        for _ in 0..n {
            p = linalg::mat_mul(&p, &shifted);
        }
        p.iter().all(|r| linalg::is_zero_vec(r))
    }
}

/// `Ad(exp A) = sum_{k <= depth} ad(A)^k / k!`.
pub fn ad_matrix(alg: &GradedLieAlgebra, a: &Vector) -> Result<LinearMap> {
    let ad = alg.ad(a)?;
    let m = alg.dim();
    let mut total = linalg::identity(m);
    let mut power = linalg::identity(m);
    for k in 1..=alg.depth() as usize {
        power = linalg::mat_mul(&power, &ad);
        if power.iter().all(|r| linalg::is_zero_vec(r)) {
            break;
        }
        let inv_fact = Q::one() / factorial(k);
        for (trow, prow) in total.iter_mut().zip(&power) {
            for (t, p) in trow.iter_mut().zip(prow) {
                if !p.is_zero() {
                    *t += p * &inv_fact;
                }
            }
        }
    }
    Ok(LinearMap {
        matrix: total,
        frame: MapFrame::Primal,
    })
}

/// Matrix of the coadjoint action of `g = exp(A)`: `xi -> xi o Ad(g^{-1})`,
/// the transpose of `Ad(exp(-A))`.
pub fn coadjoint_matrix(alg: &GradedLieAlgebra, g: &GroupElement) -> Result<LinearMap> {
    let ad_inv = ad_matrix(alg, &g.0.neg())?;
    Ok(LinearMap {
        matrix: linalg::transpose(&ad_inv.matrix),
        frame: MapFrame::Dual,
    })
}

pub fn coadjoint(alg: &GradedLieAlgebra, g: &GroupElement, xi: &DualPoint) -> Result<DualPoint> {
    alg.check_len(xi.0.len())?;
    Ok(coadjoint_matrix(alg, g)?.apply_dual(xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::{engel, heisenberg};
    use crate::rational::{q, qr};
    use proptest::prelude::*;

    fn v(xs: &[Q]) -> Vector {
        Vector(xs.to_vec())
    }

    #[test]
    fn dynkin_low_order_coefficients() {
        let terms = dynkin_terms(3);
        let get = |w: &[bool]| terms.iter().find(|(x, _)| x == w).map(|(_, c)| c.clone());
        assert_eq!(get(&[false]), Some(q(1)));
        assert_eq!(get(&[true]), Some(q(1)));
        // [B,A] = -[A,B], so only the difference is determined.
        let ab = get(&[false, true]).unwrap_or_default();
        let ba = get(&[true, false]).unwrap_or_default();
        assert_eq!(ab - ba, qr(1, 2));
        // Third order: 1/12 [A,[A,B]] - 1/12 [B,[A,B]]; the only nonzero
        // right-nested words are AAB, BAB, ABA, BBA.
        let ab_a = get(&[false, false, true]).unwrap_or_default();
        let ab_b = get(&[true, false, true]).unwrap_or_default();
        let ba_a = get(&[false, true, false]).unwrap_or_default();
        let ba_b = get(&[true, true, false]).unwrap_or_default();
        // [A,[B,A]] = -[A,[A,B]], [B,[B,A]] = -[B,[A,B]].
        assert_eq!(ab_a - ba_a, qr(1, 12));
        assert_eq!(ab_b - ba_b, qr(-1, 12));
    }

    #[test]
    fn heisenberg_bch_closed_form() {
        // Internal order is (Z, X, Y).
        let h = heisenberg(1);
        let a = v(&[q(0), q(2), qr(1, 3)]);
        let b = v(&[q(0), q(-1), q(5)]);
        let expected = v(&[qr(1, 2) * (q(2) * q(5) - q(-1) * qr(1, 3)), q(1), qr(16, 3)]);
        assert_eq!(bch(&h, &a, &b).unwrap(), expected);
    }

    #[test]
    fn identity_and_inverse() {
        let e = engel();
        let a = v(&[q(1), qr(-2, 3), q(4), qr(1, 5)]);
        assert_eq!(bch(&e, &a, &Vector::zero(4)).unwrap(), a);
        assert!(bch(&e, &a, &a.neg()).unwrap().is_zero());
    }

    #[test]
    fn adjoint_examples() {
        let h = heisenberg(1);
        let (z, x, y) = (h.basis(0), h.basis(1), h.basis(2));
        assert_eq!(ad_matrix(&h, &x).unwrap().apply(&y), y.add(&z));
        assert_eq!(ad_matrix(&h, &Vector::zero(3)).unwrap().matrix, linalg::identity(3));

        let e = engel();
        let (t, z, x, y) = (e.basis(0), e.basis(1), e.basis(2), e.basis(3));
        let expected = y.add(&z).add(&t.scale(&qr(1, 2)));
        assert_eq!(ad_matrix(&e, &x).unwrap().apply(&y), expected);
    }

    #[test]
    fn coadjoint_examples() {
        let h = heisenberg(1);
        let zstar = DualPoint::basis(3, 0);
        let (a, b) = (qr(3, 2), q(-4));
        let g = GroupElement::exp(v(&[q(0), a.clone(), b.clone()]));
        // xi + b X* - a Y*
        let expected = DualPoint(vec![q(1), b, -a]);
        assert_eq!(coadjoint(&h, &g, &zstar).unwrap(), expected);
        assert_eq!(coadjoint(&h, &GroupElement::identity(3), &zstar).unwrap(), zstar);
        let xstar = DualPoint::basis(3, 1);
        assert_eq!(coadjoint(&h, &g, &xstar).unwrap(), xstar);
    }

    fn rat() -> impl Strategy<Value = Q> {
        (-6i64..7, 1i64..5).prop_map(|(n, d)| qr(n, d))
    }

    fn vec4() -> impl Strategy<Value = Vector> {
        proptest::collection::vec(rat(), 4).prop_map(Vector)
    }

    proptest! {
        #[test]
        fn bch_associative(a in vec4(), b in vec4(), c in vec4()) {
            let e = engel();
            let left = bch(&e, &bch(&e, &a, &b).unwrap(), &c).unwrap();
            let right = bch(&e, &a, &bch(&e, &b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn dilation_is_group_automorphism(a in vec4(), b in vec4(), n in 1i64..5, d in 1i64..5) {
            let e = engel();
            let lam = qr(n, d);
            let lhs = e.dilate_vector(&lam, &bch(&e, &a, &b).unwrap()).unwrap();
            let rhs = bch(&e, &e.dilate_vector(&lam, &a).unwrap(), &e.dilate_vector(&lam, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ad_is_homomorphism_and_unipotent(a in vec4(), b in vec4()) {
            let e = engel();
            let lhs = ad_matrix(&e, &a).unwrap().compose(&ad_matrix(&e, &b).unwrap());
            let rhs = ad_matrix(&e, &bch(&e, &a, &b).unwrap()).unwrap();
            prop_assert!(lhs.is_unipotent());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn coadjoint_action_law(a in vec4(), b in vec4(), xi in proptest::collection::vec(rat(), 4)) {
            let e = engel();
            let xi = DualPoint(xi);
            let (g, h) = (GroupElement(a), GroupElement(b));
            let gh = g.mul(&e, &h).unwrap();
            let lhs = coadjoint(&e, &gh, &xi).unwrap();
            let rhs = coadjoint(&e, &g, &coadjoint(&e, &h, &xi).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        /// With the dual dilation `xi -> xi o d(delta_lambda)`, the group
        /// element has to be dilated by the inverse scale.
        #[test]
        fn coadjoint_commutes_with_dilation(a in vec4(), xi in proptest::collection::vec(rat(), 4), n in 1i64..5, d in 1i64..5) {
            let e = engel();
            let lam = qr(n, d);
            let xi = DualPoint(xi);
            let g = GroupElement(a);
            let inv = Q::one() / &lam;
            let lhs = coadjoint(&e, &g.dilate(&e, &inv).unwrap(), &e.dilate_dual(&lam, &xi).unwrap()).unwrap();
            let rhs = e.dilate_dual(&lam, &coadjoint(&e, &g, &xi).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
