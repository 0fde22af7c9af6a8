//! Double-precision copy of an algebra's structure for numerical work.

use crate::algebra::GradedLieAlgebra;
use crate::group::dynkin_terms;
use crate::rational::to_f64;

#[derive(Debug, Clone)]
pub struct RealAlgebra {
    labels: Vec<String>,
    weights: Vec<u32>,
    table: Vec<Vec<Vec<(usize, f64)>>>,
    dynkin: Vec<(Vec<bool>, f64)>,
}

impl RealAlgebra {
    pub fn new(alg: &GradedLieAlgebra) -> Self {
        let m = alg.dim();
        let table = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        alg.bracket_basis(i, j)
                            .iter()
                            .map(|(k, c)| (*k, to_f64(c)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let dynkin = dynkin_terms(alg.depth())
            .iter()
            .map(|(w, c)| (w.clone(), to_f64(c)))
            .collect();
        RealAlgebra {
            labels: alg.labels().to_vec(),
            weights: alg.weights().to_vec(),
            table,
            dynkin,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn depth(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(1)
    }

    pub fn homogeneous_dimension(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn bracket(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0.0 {
                    continue;
                }
                for &(k, c) in &self.table[i][j] {
                    out[k] += ai * bj * c;
                }
            }
        }
        out
    }

    /// `log(exp(a) exp(b))`.
    pub fn bch(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (word, c) in &self.dynkin {
            let letter = |x: bool| if x { b } else { a };
            let mut v = letter(word[word.len() - 1]).to_vec();
            for &x in word[..word.len() - 1].iter().rev() {
                v = self.bracket(letter(x), &v);
            }
            for (o, x) in out.iter_mut().zip(&v) {
                *o += c * x;
            }
        }
        out
    }

    pub fn dilate(&self, lambda: f64, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.weights)
            .map(|(v, &q)| v * lambda.powi(q as i32))
            .collect()
    }

    /// `xi o Ad(exp(-a))`.
    pub fn coadjoint(&self, a: &[f64], xi: &[f64]) -> Vec<f64> {
        let m = self.dim();
        let neg: Vec<f64> = a.iter().map(|x| -x).collect();
        // Row j of the result: xi(Ad(exp(-a)) X_j) = sum_k ad(-a)^k X_j / k!.
        (0..m)
            .map(|j| {
                let mut term = vec![0.0; m];
                term[j] = 1.0;
                let mut acc = term.clone();
                for k in 1..=self.depth() {
                    term = self.bracket(&neg, &term);
                    for (x, t) in acc.iter_mut().zip(&term) {
                        *x += t / factorial(k);
                    }
                }
                acc.iter().zip(xi).map(|(x, y)| x * y).sum()
            })
            .collect()
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::{engel, heisenberg};
    use crate::algebra::{DualPoint, Vector};
    use crate::group::{bch, coadjoint, GroupElement};
    use crate::rational::qr;

    #[test]
    fn agrees_with_exact_arithmetic() {
        for alg in [heisenberg(1), engel()] {
            let r = RealAlgebra::new(&alg);
            let m = alg.dim();
            let a: Vec<_> = (0..m).map(|i| qr(i as i64 + 1, 3)).collect();
            let b: Vec<_> = (0..m).map(|i| qr(2 - i as i64, 5)).collect();
            let af: Vec<f64> = a.iter().map(to_f64).collect();
            let bf: Vec<f64> = b.iter().map(to_f64).collect();
            let exact = bch(&alg, &Vector(a.clone()), &Vector(b.clone())).unwrap();
            for (x, y) in r.bch(&af, &bf).iter().zip(&exact.0) {
                assert!((x - to_f64(y)).abs() < 1e-14);
            }
            let co = coadjoint(&alg, &GroupElement(Vector(a)), &DualPoint(b)).unwrap();
            for (x, y) in r.coadjoint(&af, &bf).iter().zip(&co.0) {
                assert!((x - to_f64(y)).abs() < 1e-14);
            }
        }
    }
}
