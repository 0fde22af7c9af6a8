//! Homogeneous quasi-norms and the orbit quasi-norm `inf_g |Ad*(g) xi|`.

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::real::RealAlgebra;

/// `|x| = (sum_i |x_i|^(2N/q_i))^(1/(2N))` with `N` the lcm of the weights.
#[derive(Debug, Clone)]
pub struct QuasiNorm {
    weights: Vec<u32>,
    exponent: u32,
}

impl QuasiNorm {
    pub fn new(weights: &[u32]) -> Self {
        let exponent = weights.iter().fold(1u32, |acc, &w| acc.lcm(&w));
        QuasiNorm { weights: weights.to_vec(), exponent }
    }

    pub fn for_algebra(alg: &RealAlgebra) -> Self {
        Self::new(alg.weights())
    }

    /// The exponent `N`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        // Factor out the largest homogeneous scale so the powers stay finite.
        let scale = x
            .iter()
            .zip(&self.weights)
            .map(|(v, &q)| v.abs().powf(1.0 / q as f64))
            .fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let two_n = 2.0 * self.exponent as f64;
        let sum: f64 = x
            .iter()
            .zip(&self.weights)
            .map(|(v, &q)| {
                let r = v.abs() / scale.powi(q as i32);
                r.powf(two_n / q as f64)
            })
            .sum();
        scale * sum.powf(1.0 / two_n)
    }

    /// The dual space carries the same weights.
    pub fn dual_norm(&self, xi: &[f64]) -> f64 {
        self.norm(xi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitNorm {
    pub value: f64,
    /// `A` with `|Ad*(exp A) xi| = value`.
    pub minimizer: Vec<f64>,
    pub starts: usize,
}

/// Upper bound for `inf_A |Ad*(exp A) xi|` by Nelder-Mead from `budget`
/// starts: the identity, then seeded Gaussian starts. The search variable is
/// `B` with `A = delta_{1/s}(B)`, `s = |xi|`, so dilating `xi` rescales the
/// whole search. Starts with a smaller budget are a prefix of those with a
/// larger one, so the value is non-increasing in the budget.
pub fn orbit_quasi_norm(
    alg: &RealAlgebra,
    qn: &QuasiNorm,
    xi: &[f64],
    budget: usize,
    seed: u64,
) -> OrbitNorm {
    let m = alg.dim();
    let s = qn.dual_norm(xi);
    if s == 0.0 {
        return OrbitNorm { value: 0.0, minimizer: vec![0.0; m], starts: 0 };
    }
    let to_a = |b: &[f64]| alg.dilate(1.0 / s, b);
    let objective = |b: &[f64]| qn.dual_norm(&alg.coadjoint(&to_a(b), xi));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_b = vec![0.0; m];
    let mut best = objective(&best_b);
    for start in 0..budget.max(1) {
        let x0: Vec<f64> = if start == 0 {
            vec![0.0; m]
        } else {
            (0..m).map(|_| StandardNormal.sample(&mut rng)).collect()
        };
        let (b, v) = nelder_mead(&objective, &x0, 0.5, 200 * (m + 1));
        if v < best {
            best = v;
            best_b = b;
        }
    }
    OrbitNorm { value: best, minimizer: to_a(&best_b), starts: budget.max(1) }
}

/// Minimizes `f` from `x0` with an axis-aligned initial simplex of size `step`.
pub fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_evals: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = f(&x);
        simplex.push((x, v));
    }
    let mut evals = n + 1;
    let sort = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    let along = |c: &[f64], x: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(x).map(|(ci, xi)| ci + t * (xi - ci)).collect()
    };
    while evals < max_evals {
        sort(&mut simplex);
        if (simplex[n].1 - simplex[0].1).abs() <= 1e-15 * simplex[0].1.abs().max(1e-300) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let xr = along(&centroid, &worst.0, -1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = along(&centroid, &worst.0, -2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let x = along(&centroid, &worst.0, -0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = along(&centroid, &worst.0, 0.5);
                let v = f(&x);
                (x, v)
            };
            evals += 1;
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for p in simplex.iter_mut().skip(1) {
                    p.0 = along(&best, &p.0, 0.5);
                    p.1 = f(&p.0);
                }
                evals += n;
            }
        }
    }
    sort(&mut simplex);
    simplex.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::{abelian, engel, heisenberg};

    #[test]
    fn heisenberg_center() {
        let qn = QuasiNorm::new(&[2, 1, 1]);
        assert_eq!(qn.exponent(), 2);
        assert!((qn.norm(&[1.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((qn.norm(&[4.0, 0.0, 0.0]) - 2.0).abs() < 1e-15);
        assert_eq!(qn.norm(&[0.0; 3]), 0.0);
    }

    #[test]
    fn euclidean_when_abelian() {
        let qn = QuasiNorm::for_algebra(&RealAlgebra::new(&abelian(3)));
        assert!((qn.norm(&[3.0, 4.0, 12.0]) - 13.0).abs() < 1e-12);
    }

    #[test]
    fn homogeneity() {
        let e = RealAlgebra::new(&engel());
        let qn = QuasiNorm::for_algebra(&e);
        let x = [0.3, -1.2, 2.0, 0.7];
        for lam in [0.01, 0.5, 3.0, 1e3] {
            let lhs = qn.norm(&e.dilate(lam, &x));
            assert!((lhs / (lam * qn.norm(&x)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn minimizes_a_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2);
        let (x, v) = nelder_mead(&f, &[0.0, 0.0], 0.5, 2000);
        assert!(v < 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] + 2.0).abs() < 1e-5);
    }

    #[test]
    fn point_orbit_is_exact() {
        let h = RealAlgebra::new(&heisenberg(1));
        let qn = QuasiNorm::for_algebra(&h);
        let xi = [0.0, 1.0, 0.0];
        let r = orbit_quasi_norm(&h, &qn, &xi, 4, 1);
        assert_eq!(r.value, qn.dual_norm(&xi));
    }

    #[test]
    fn bounded_by_identity_and_monotone() {
        let h = RealAlgebra::new(&heisenberg(1));
        let qn = QuasiNorm::for_algebra(&h);
        let xi = [1.0, 1.0, 0.0];
        let mut last = f64::INFINITY;
        for budget in 1..5 {
            let r = orbit_quasi_norm(&h, &qn, &xi, budget, 9);
            assert!(r.value <= qn.dual_norm(&xi));
            assert!(r.value <= last);
            last = r.value;
        }
        // The orbit of Z* + X* is the plane z = 1; its infimum is 1.
        assert!((last - 1.0).abs() < 1e-6);
    }

    #[test]
    fn dilation_equivariant() {
        let e = RealAlgebra::new(&engel());
        let qn = QuasiNorm::for_algebra(&e);
        let xi = [0.5, 1.0, -0.3, 0.8];
        let base = orbit_quasi_norm(&e, &qn, &xi, 3, 4).value;
        for lam in [0.5, 2.0, 3.0] {
            let v = orbit_quasi_norm(&e, &qn, &e.dilate(lam, &xi), 3, 4).value;
            assert!((v / (lam * base) - 1.0).abs() < 1e-6, "lam={lam}");
        }
    }
}
