//! Homogenization `v(eta) = int_0^inf lambda^{-m} F(t delta_lambda eta) dlambda / lambda`.
//!
//! The integral is a sum over geometric nodes `lambda_j = rho^j` with weight
//! `ln rho`. Dilating `eta` by `rho` shifts the node index by one, so
//! `v(t delta_rho eta) = rho^m v(eta)` up to the truncated tails. The window
//! of nodes follows `|eta|`: only `lambda |eta|` in `[s_min, s_max]` is
//! summed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Frame, GridFunction};
use super::quasinorm::QuasiNorm;
use crate::error::{Error, Result};

/// A function on the dual space.
pub trait DualFunction: Sync {
    fn eval(&self, eta: &[f64]) -> Complex64;
}

impl<F: Fn(&[f64]) -> Complex64 + Sync> DualFunction for F {
    fn eval(&self, eta: &[f64]) -> Complex64 {
        self(eta)
    }
}

impl DualFunction for GridFunction {
    fn eval(&self, eta: &[f64]) -> Complex64 {
        self.interpolate(eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogenizeConfig {
    /// Node ratio `rho > 1`.
    pub ratio: f64,
    pub s_min: f64,
    pub s_max: f64,
    /// Quasi-norm radius at which the input is probed near the origin.
    pub origin_radius: f64,
    /// Largest `|F|` tolerated at that radius.
    pub origin_bound: f64,
}

impl Default for HomogenizeConfig {
    fn default() -> Self {
        HomogenizeConfig {
            ratio: 2f64.powf(1.0 / 8.0),
            s_min: 1e-8,
            s_max: 1e2,
            origin_radius: 1e-3,
            origin_bound: 1e-4,
        }
    }
}

pub struct Homogenized<'a, F: DualFunction + ?Sized> {
    f: &'a F,
    m: f64,
    weights: Vec<u32>,
    norm: QuasiNorm,
    cfg: HomogenizeConfig,
}

/// Checks that `f` is small near the origin and returns the homogenized
/// function of degree `m`.
pub fn homogenize<'a, F: DualFunction + ?Sized>(
    f: &'a F,
    weights: &[u32],
    m: f64,
    cfg: HomogenizeConfig,
) -> Result<Homogenized<'a, F>> {
    if !(cfg.ratio > 1.0 && cfg.s_min > 0.0 && cfg.s_max > cfg.s_min) {
        return Err(Error::InvalidArgument("need ratio > 1 and 0 < s_min < s_max".into()));
    }
    let d = weights.len();
    let eps = cfg.origin_radius;
    let mut probes: Vec<Vec<f64>> = Vec::new();
    for a in 0..d {
        for sign in [1.0, -1.0] {
            let mut u = vec![0.0; d];
            u[a] = sign * eps.powi(weights[a] as i32);
            probes.push(u);
        }
    }
    let norm = QuasiNorm::new(weights);
    let ones = vec![1.0; d];
    let r = norm.dual_norm(&ones);
    probes.push(
        weights
            .iter()
            .map(|&q| (eps / r).powi(q as i32))
            .collect(),
    );
    let worst = probes.iter().map(|u| f.eval(u).norm()).fold(0.0, f64::max);
    if worst > cfg.origin_bound {
        return Err(Error::NotVanishingAtOrigin { value: worst, bound: cfg.origin_bound });
    }
    Ok(Homogenized { f, m, weights: weights.to_vec(), norm, cfg })
}

impl<F: DualFunction + ?Sized> Homogenized<'_, F> {
    pub fn degree(&self) -> f64 {
        self.m
    }

    /// `v(eta)`; the origin is outside the domain.
    pub fn eval(&self, eta: &[f64]) -> Result<Complex64> {
        let s = self.norm.dual_norm(eta);
        if s == 0.0 {
            return Err(Error::OutOfDomain("the origin".into()));
        }
        let ln_rho = self.cfg.ratio.ln();
        let lo = ((self.cfg.s_min / s).ln() / ln_rho).ceil() as i64;
        let hi = ((self.cfg.s_max / s).ln() / ln_rho).floor() as i64;
        let mut total = Complex64::new(0.0, 0.0);
        let mut y = vec![0.0; eta.len()];
        for j in lo..=hi {
            let lambda = self.cfg.ratio.powi(j as i32);
            for (a, (&e, &q)) in eta.iter().zip(&self.weights).enumerate() {
                y[a] = e * lambda.powi(q as i32);
            }
            total += self.f.eval(&y) * lambda.powf(-self.m);
        }
        Ok(total * ln_rho)
    }

    /// `v` at every grid point except the origin, which is set to zero.
    pub fn on_grid(&self, grid: &GridFunction) -> Result<GridFunction> {
        grid.require_frame(Frame::Dual)?;
        let mut out = grid.clone();
        for i in 0..grid.len() {
            let eta = grid.point(i);
            out.data_mut()[i] = match self.eval(&eta) {
                Ok(v) => v,
                Err(Error::OutOfDomain(_)) => Complex64::new(0.0, 0.0),
                Err(e) => return Err(e),
            };
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(weights: &'static [u32]) -> impl Fn(&[f64]) -> Complex64 + Sync {
        let qn = QuasiNorm::new(weights);
        move |eta: &[f64]| {
            let r2 = qn.dual_norm(eta).powi(2);
            Complex64::new(r2 * (-r2).exp(), 0.0)
        }
    }

    const H3: &[u32] = &[2, 1, 1];

    #[test]
    fn grid_ratio_homogeneity() {
        let f = profile(H3);
        let cfg = HomogenizeConfig::default();
        let v = homogenize(&f, H3, 0.0, cfg).unwrap();
        let eta = [0.3, -1.1, 0.4];
        let base = v.eval(&eta).unwrap();
        for k in [1, 5, -3] {
            let lam = cfg.ratio.powi(k);
            let moved: Vec<f64> = eta.iter().zip(H3).map(|(e, &q)| e * lam.powi(q as i32)).collect();
            let r = v.eval(&moved).unwrap();
            assert!((r - base).norm() / base.norm() < 1e-10);
        }
    }

    #[test]
    fn degree_one_scaling() {
        let f = profile(H3);
        let v = homogenize(&f, H3, 1.0, HomogenizeConfig::default()).unwrap();
        let eta = [1.0, 0.2, -0.7];
        let base = v.eval(&eta).unwrap();
        let moved: Vec<f64> = eta.iter().zip(H3).map(|(e, &q)| e * 1.7f64.powi(q as i32)).collect();
        let r = v.eval(&moved).unwrap();
        assert!((r / base - 1.7).norm() < 1e-6);
    }

    #[test]
    fn rejects_gaussian() {
        let g = |eta: &[f64]| Complex64::new((-eta.iter().map(|x| x * x).sum::<f64>()).exp(), 0.0);
        let r = homogenize(&g, H3, 0.0, HomogenizeConfig::default());
        assert!(matches!(r, Err(Error::NotVanishingAtOrigin { .. })));
    }

    #[test]
    fn origin_is_outside() {
        let f = profile(H3);
        let v = homogenize(&f, H3, 0.0, HomogenizeConfig::default()).unwrap();
        assert!(v.eval(&[0.0; 3]).is_err());
    }

    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
    }

    #[test]
    fn matches_one_dimensional_oracle() {
        // v(eta) = int_0^inf p(lambda |eta|) dlambda / lambda = int_0^inf p(u) du / u.
        let oracle = simpson(&|u: f64| u * (-u * u).exp(), 0.0, 12.0, 1e-14);
        assert!((oracle - 0.5).abs() < 1e-12);
        let f = profile(H3);
        let v = homogenize(&f, H3, 0.0, HomogenizeConfig::default()).unwrap();
        for eta in [[0.3, -1.1, 0.4], [5.0, 0.0, 0.0], [0.0, 1e-3, 0.0], [-2.0, 7.0, 3.0]] {
            let got = v.eval(&eta).unwrap().re;
            assert!((got - oracle).abs() / oracle < 1e-8, "{eta:?}: {got}");
        }
    }

    #[test]
    fn substitution_identity() {
        // Reindexing lambda -> lambda mu: homogenize(F o t delta_mu) = mu^m homogenize(F),
        // which is also homogenize(F) o t delta_mu.
        let f = profile(H3);
        let cfg = HomogenizeConfig::default();
        for m in [0.0f64, 1.0, -0.5] {
            for mu in [1.3f64, 0.45] {
                let moved = |eta: &[f64]| {
                    let y: Vec<f64> = eta.iter().zip(H3).map(|(e, &q)| e * mu.powi(q as i32)).collect();
                    f(&y)
                };
                let v = homogenize(&f, H3, m, cfg).unwrap();
                let w = homogenize(&moved, H3, m, cfg).unwrap();
                let eta = [0.8, -0.3, 1.2];
                let scaled: Vec<f64> = eta.iter().zip(H3).map(|(e, &q)| e * mu.powi(q as i32)).collect();
                let lhs = w.eval(&eta).unwrap();
                let rhs = v.eval(&eta).unwrap() * mu.powf(m);
                assert!((lhs - rhs).norm() / rhs.norm() < 1e-8, "m={m} mu={mu}");
                let via = v.eval(&scaled).unwrap();
                assert!((lhs - via).norm() / via.norm() < 1e-8, "m={m} mu={mu}");
            }
        }
    }
}
