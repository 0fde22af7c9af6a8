//! Exact linear algebra over the rationals.
//!
//! Every routine first clears denominators row by row and then runs
//! fraction-free (Bareiss) elimination over big integers, so intermediate
//! entries stay integral and every division is exact. Rationals only appear
//! again during back substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Q;

/// Row-echelon form produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn integerize(row: &[Q]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

fn bareiss(rows: &[Vec<Q>], ncols: usize) -> Echelon {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            integerize(r)
        })
        .collect();
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..ncols {
                let num = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero());
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    match rows.first() {
        None => 0,
        Some(first) => bareiss(rows, first.len()).pivots.len(),
    }
}

/// Rank of a list of vectors of known length (an empty list has rank 0).
pub fn rank_of(vectors: &[Vec<Q>], len: usize) -> usize {
    if vectors.is_empty() || len == 0 {
        return 0;
    }
    bareiss(vectors, len).pivots.len()
}

fn back_substitute(ech: &Echelon, ncols: usize, fixed: &[(usize, Q)]) -> Vec<Q> {
    let mut x = vec![Q::zero(); ncols];
    for (c, v) in fixed {
        x[*c] = v.clone();
    }
    for (row, &p) in ech.rows.iter().zip(&ech.pivots).rev() {
        let mut acc = Q::zero();
        for c in p + 1..ncols {
            if !row[c].is_zero() && !x[c].is_zero() {
                acc += Q::from_integer(row[c].clone()) * &x[c];
            }
        }
        x[p] = -acc / Q::from_integer(row[p].clone());
    }
    x
}

/// Basis of `{x : A x = 0}` for an `nrows x ncols` matrix `A`.
pub fn kernel(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    if rows.is_empty() {
        return (0..ncols).map(|i| unit(ncols, i)).collect();
    }
    let ech = bareiss(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| back_substitute(&ech, ncols, &[(f, Q::one())]))
        .collect()
}

/// Some solution of `A x = b`, or `None` when the system is inconsistent.
pub fn solve(rows: &[Vec<Q>], rhs: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let augmented: Vec<Vec<Q>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    if augmented.is_empty() {
        return Some(vec![Q::zero(); ncols]);
    }
    let ech = bareiss(&augmented, ncols + 1);
    if ech.pivots.last() == Some(&ncols) {
        return None;
    }
    // Columns of the echelon form now include the right-hand side at `ncols`.
    let mut x = back_substitute(&ech, ncols + 1, &[(ncols, -Q::one())]);
    x.truncate(ncols);
    Some(x)
}

pub fn inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    if rank(a) != n {
        return None;
    }
    let cols: Option<Vec<Vec<Q>>> = (0..n).map(|k| solve(a, &unit(n, k), n)).collect();
    Some(transpose(&cols?))
}

pub fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

pub fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| unit(n, i)).collect()
}

pub fn transpose(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let Some(first) = a.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(r, v)| !r.is_zero() && !v.is_zero())
                .fold(Q::zero(), |acc, (r, v)| acc + r * v)
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let bt = transpose(b);
    a.iter().map(|row| mat_vec(&bt, row)).collect()
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]])), 3);
        assert_eq!(rank(&[vec![qr(1, 2), qr(1, 3)], vec![qr(3, 2), q(1)]]), 1);
    }

    #[test]
    fn kernel_of_skew_form() {
        // [[0,0,0],[0,0,1],[0,-1,0]] has kernel e_0.
        let k = kernel(&m(&[&[0, 0, 0], &[0, 0, 1], &[0, -1, 0]]), 3);
        assert_eq!(k, vec![vec![q(1), q(0), q(0)]]);
    }

    #[test]
    fn inconsistent_system() {
        assert!(solve(&m(&[&[1, 1], &[1, 1]]), &[q(1), q(2)], 2).is_none());
        let x = solve(&m(&[&[1, 1], &[1, -1]]), &[q(3), q(1)], 2).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<Q>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec((-3i64..4, 1i64..4).prop_map(|(n, d)| qr(n, d)), c),
                r,
            )
        })
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated_and_complements_rank(a in small_matrix()) {
            let ncols = a[0].len();
            let k = kernel(&a, ncols);
            prop_assert_eq!(k.len() + rank(&a), ncols);
            for v in &k {
                prop_assert!(is_zero_vec(&mat_vec(&a, v)));
            }
            prop_assert_eq!(rank_of(&k, ncols), k.len());
        }

        #[test]
        fn inverse_is_two_sided(a in small_matrix()) {
            if a.len() == a[0].len() {
                if let Some(inv) = inverse(&a) {
                    prop_assert_eq!(mat_mul(&a, &inv), identity(a.len()));
                    prop_assert_eq!(mat_mul(&inv, &a), identity(a.len()));
                } else {
                    prop_assert!(rank(&a) < a.len());
                }
            }
        }
    }
}
