//! Dilation actions on sampled functions and the Euclidean Fourier transform
//! in exponential coordinates.
//!
//! `delta_{lambda*} f = lambda^{-Q} f o delta_{1/lambda}` on the primal side;
//! on the dual side `(t delta_lambda)^* F = F o t delta_lambda`. With
//! `F(eta) = int e^{i <eta, x>} f(x) dx` these satisfy
//! `F(delta_{lambda*} f) = (t delta_lambda)^* F(f)`.

use num_complex::Complex64;

use super::grid::{Frame, GridFunction, Interpolation};
use crate::error::{Error, Result};

fn check_scale(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::NonpositiveScale)
    }
}

fn homogeneous_dimension(f: &GridFunction) -> i32 {
    f.weights().iter().sum::<u32>() as i32
}

/// `delta_{lambda*} f` resampled on the same grid with multilinear
/// interpolation.
pub fn pushforward_dilate(f: &GridFunction, lambda: f64) -> Result<GridFunction> {
    pushforward_dilate_with(f, lambda, Interpolation::Linear)
}

pub fn pushforward_dilate_with(
    f: &GridFunction,
    lambda: f64,
    mode: Interpolation,
) -> Result<GridFunction> {
    f.require_frame(Frame::Primal)?;
    check_scale(lambda)?;
    let jac = lambda.powi(-homogeneous_dimension(f));
    let inv: Vec<f64> = f.weights().iter().map(|&q| lambda.powi(-(q as i32))).collect();
    let mut out = f.clone();
    let mut y = vec![0.0; f.dim()];
    for i in 0..f.len() {
        let x = f.point(i);
        for a in 0..f.dim() {
            y[a] = x[a] * inv[a];
        }
        out.data_mut()[i] = f.interpolate_with(&y, mode) * jac;
    }
    Ok(out)
}

/// `delta_{lambda*} f` carried exactly onto the dilated grid: axis `a` is
/// stretched by `lambda^{q_a}` and samples are scaled by `lambda^{-Q}`.
pub fn transport_dilate(f: &GridFunction, lambda: f64) -> Result<GridFunction> {
    f.require_frame(Frame::Primal)?;
    check_scale(lambda)?;
    let jac = lambda.powi(-homogeneous_dimension(f));
    let ranges = f
        .half_ranges()
        .iter()
        .zip(f.weights())
        .map(|(l, &q)| l * lambda.powi(q as i32))
        .collect();
    Ok(f.with_ranges(ranges).map(|z| z * jac))
}

/// `(t delta_lambda)^* F` resampled on the same dual grid.
pub fn dual_pullback_dilate(fhat: &GridFunction, lambda: f64) -> Result<GridFunction> {
    fhat.require_frame(Frame::Dual)?;
    check_scale(lambda)?;
    let scale: Vec<f64> = fhat.weights().iter().map(|&q| lambda.powi(q as i32)).collect();
    let mut out = fhat.clone();
    let mut y = vec![0.0; fhat.dim()];
    for i in 0..fhat.len() {
        let x = fhat.point(i);
        for a in 0..fhat.dim() {
            y[a] = x[a] * scale[a];
        }
        out.data_mut()[i] = fhat.interpolate(&y);
    }
    Ok(out)
}

/// Applies a one-dimensional kernel along each axis in turn.
fn separable(
    input: &GridFunction,
    out_frame: Frame,
    out_ranges: &[f64],
    out_counts: &[usize],
    sign: f64,
) -> Result<GridFunction> {
    let mut out = GridFunction::zeros(out_frame, input.weights(), out_ranges, out_counts)?;
    let d = input.dim();
    let mut shape: Vec<usize> = input.counts().to_vec();
    let mut data: Vec<Complex64> = input.data().to_vec();
    for a in 0..d {
        let xs = input.axis_points(a);
        let etas = out.axis_points(a);
        let kernel: Vec<Complex64> = etas
            .iter()
            .flat_map(|&e| xs.iter().map(move |&x| Complex64::from_polar(1.0, sign * e * x)))
            .collect();
        let (n, k) = (shape[a], etas.len());
        let outer: usize = shape[..a].iter().product();
        let inner: usize = shape[a + 1..].iter().product();
        let mut next = vec![Complex64::new(0.0, 0.0); outer * k * inner];
        for o in 0..outer {
            for j in 0..k {
                let dst = &mut next[(o * k + j) * inner..(o * k + j + 1) * inner];
                for i in 0..n {
                    let c = kernel[j * n + i];
                    let src = &data[(o * n + i) * inner..(o * n + i + 1) * inner];
                    for (t, s) in dst.iter_mut().zip(src) {
                        *t += c * s;
                    }
                }
            }
        }
        data = next;
        shape[a] = k;
    }
    out.data_mut().copy_from_slice(&data);
    Ok(out)
}

/// `F(eta) = sum_x e^{i <eta, x>} f(x) h^m` on the requested dual grid.
pub fn fourier(f: &GridFunction, dual_ranges: &[f64], dual_counts: &[usize]) -> Result<GridFunction> {
    f.require_frame(Frame::Primal)?;
    let vol = f.cell_volume();
    Ok(separable(f, Frame::Dual, dual_ranges, dual_counts, 1.0)?.map(|z| z * vol))
}

/// `f(x) = (2 pi)^{-m} sum_eta e^{-i <eta, x>} F(eta) h_eta^m`.
pub fn inverse_fourier(
    fhat: &GridFunction,
    primal_ranges: &[f64],
    primal_counts: &[usize],
) -> Result<GridFunction> {
    fhat.require_frame(Frame::Dual)?;
    let vol = fhat.cell_volume() / (2.0 * std::f64::consts::PI).powi(fhat.dim() as i32);
    Ok(separable(fhat, Frame::Primal, primal_ranges, primal_counts, -1.0)?.map(|z| z * vol))
}

/// `delta_{lambda*} f = lambda^{-Q} f o delta_{1/lambda}` for `f` given
/// pointwise.
pub fn dilate_fn<'a, F>(f: F, weights: &[u32], lambda: f64) -> impl Fn(&[f64]) -> Complex64 + Sync + 'a
where
    F: Fn(&[f64]) -> Complex64 + Sync + 'a,
{
    let jac = lambda.powi(-(weights.iter().sum::<u32>() as i32));
    let inv: Vec<f64> = weights.iter().map(|&q| lambda.powi(-(q as i32))).collect();
    move |x: &[f64]| {
        let y: Vec<f64> = x.iter().zip(&inv).map(|(v, s)| v * s).collect();
        f(&y) * jac
    }
}

/// A grid as `(half_ranges, counts)`.
pub type GridShape<'a> = (&'a [f64], &'a [usize]);

/// Both sides of `F(delta_{lambda*} f) = F(f) o t delta_lambda` on the dual
/// grid `dual`. The left side samples `delta_{lambda*} f` pointwise on
/// `dilated`; the right side samples `f` on `primal` and evaluates its
/// transform on the stretched dual grid. Unless `dilated` is exactly
/// `primal` stretched by `delta_lambda`, the two are different quadratures.
pub fn equivariance_sides<F>(
    f: F,
    weights: &[u32],
    lambda: f64,
    primal: GridShape,
    dilated: GridShape,
    dual: GridShape,
) -> Result<(GridFunction, GridFunction)>
where
    F: Fn(&[f64]) -> Complex64 + Sync + Clone,
{
    check_scale(lambda)?;
    let pushed = dilate_fn(f.clone(), weights, lambda);
    let g = GridFunction::from_fn(Frame::Primal, weights, dilated.0, dilated.1, pushed)?;
    let lhs = fourier(&g, dual.0, dual.1)?;
    let base = GridFunction::from_fn(Frame::Primal, weights, primal.0, primal.1, f)?;
    let stretched: Vec<f64> = dual
        .0
        .iter()
        .zip(weights)
        .map(|(l, &q)| l * lambda.powi(q as i32))
        .collect();
    let rhs = fourier(&base, &stretched, dual.1)?.with_ranges(dual.0.to_vec());
    Ok((lhs, rhs))
}
