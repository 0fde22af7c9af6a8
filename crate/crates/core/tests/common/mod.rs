//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_traits::{One, Zero};
use strata_kit::rational::{q, Q};
use strata_kit::{DualPoint, GradedLieAlgebra};

pub type Mat = Vec<Vec<Q>>;

pub fn zeros(n: usize) -> Mat {
    vec![vec![Q::zero(); n]; n]
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                c[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    c
}

fn add_scaled(a: &mut Mat, c: &Q, b: &Mat) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += c * y;
        }
    }
}

/// `exp(N)` for strictly upper triangular `N`.
pub fn expm(n: &Mat) -> Mat {
    let d = n.len();
    let mut out = zeros(d);
    let mut power = zeros(d);
    for i in 0..d {
        out[i][i] = Q::one();
        power[i][i] = Q::one();
    }
    let mut fact = Q::one();
    for k in 1..d {
        power = mul(&power, n);
        fact *= q(k as i64);
        add_scaled(&mut out, &(Q::one() / &fact), &power);
    }
    out
}

/// `log(U)` for unipotent upper triangular `U`.
pub fn logm(u: &Mat) -> Mat {
    let d = u.len();
    let mut m = u.clone();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= Q::one();
    }
    let mut out = zeros(d);
    let mut power = m.clone();
    for k in 1..d {
        let sign = if k % 2 == 1 { q(1) } else { q(-1) };
        add_scaled(&mut out, &(sign / q(k as i64)), &power);
        power = mul(&power, &m);
    }
    out
}

/// Rank over the rationals by plain Gaussian elimination.
pub fn rank(mut rows: Mat) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Skew matrix `xi([X_a, X_b])` in the internal basis.
pub fn skew_matrix(alg: &GradedLieAlgebra, xi: &DualPoint) -> Mat {
    let m = alg.dim();
    (0..m)
        .map(|i| (0..m).map(|j| xi.pair(&alg.bracket(&alg.basis(i), &alg.basis(j)).unwrap())).collect())
        .collect()
}

/// Jump indices from ranks alone: `j` is in `J^k` exactly when row `j` of
/// the skew form restricted to `g_k` is independent of rows `1..j-1`, since
/// `dim(g_j + g_k(xi)) = k - rank B_k + rank B_k[1..j]`.
pub fn jump_oracle(alg: &GradedLieAlgebra, xi: &DualPoint) -> Vec<Vec<usize>> {
    let b = skew_matrix(alg, xi);
    (1..=alg.dim())
        .map(|k| {
            let block: Mat = b[..k].iter().map(|r| r[..k].to_vec()).collect();
            (1..=k).filter(|&j| rank(block[..j].to_vec()) > rank(block[..j - 1].to_vec())).collect()
        })
        .collect()
}

/// Number of Lyndon words of length `n` over `k` letters, by enumeration.
pub fn lyndon_count(k: usize, n: usize) -> usize {
    let mut count = 0;
    let total = k.pow(n as u32);
    let mut w = vec![0usize; n];
    for code in 0..total {
        let mut c = code;
        for x in w.iter_mut().rev() {
            *x = c % k;
            c /= k;
        }
        // Strictly smaller than every proper rotation.
        if (1..n).all(|s| {
            let rot: Vec<usize> = w[s..].iter().chain(&w[..s]).cloned().collect();
            w < rot
        }) {
            count += 1;
        }
    }
    count
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
}

/// Upper triangular matrix units `E_ij` (1-based) of size `n`.
pub fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = zeros(n);
    m[i - 1][j - 1] = Q::one();
    m
}

pub fn combine(terms: &[(Q, &Mat)]) -> Mat {
    let n = terms[0].1.len();
    let mut out = zeros(n);
    for (c, m) in terms {
        add_scaled(&mut out, c, m);
    }
    out
}

/// Faithful representation given by basis matrices (user order), with
/// `coords` reading coordinates back from a matrix in the image.
pub struct Representation {
    pub basis: Vec<Mat>,
    pub read: fn(&Mat) -> Option<Vec<Q>>,
}

impl Representation {
    pub fn matrix(&self, coords: &[Q]) -> Mat {
        let terms: Vec<(Q, &Mat)> = coords.iter().cloned().zip(&self.basis).collect();
        combine(&terms)
    }
}

/// X = E12, Y = E23, Z = E13.
pub fn heisenberg_rep() -> Representation {
    Representation {
        basis: vec![unit(3, 1, 2), unit(3, 2, 3), unit(3, 1, 3)],
        read: |m| {
            let mut rest = m.clone();
            let c = vec![m[0][1].clone(), m[1][2].clone(), m[0][2].clone()];
            rest[0][1] = Q::zero();
            rest[1][2] = Q::zero();
            rest[0][2] = Q::zero();
            rest.iter().flatten().all(Q::is_zero).then_some(c)
        },
    }
}

/// X = E12 + E23, Y = E34, Z = E24, T = E14.
pub fn engel_rep() -> Representation {
    let x = combine(&[(q(1), &unit(4, 1, 2)), (q(1), &unit(4, 2, 3))]);
    Representation {
        basis: vec![x, unit(4, 3, 4), unit(4, 2, 4), unit(4, 1, 4)],
        read: |m| {
            if m[0][1] != m[1][2] {
                return None;
            }
            let c = vec![m[0][1].clone(), m[2][3].clone(), m[1][3].clone(), m[0][3].clone()];
            let mut rest = m.clone();
            for (i, j) in [(0, 1), (1, 2), (2, 3), (1, 3), (0, 3)] {
                rest[i][j] = Q::zero();
            }
            rest.iter().flatten().all(Q::is_zero).then_some(c)
        },
    }
}
