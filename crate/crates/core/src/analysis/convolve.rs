//! Group convolution `(f * g)(x) = int f(y) g(y^{-1} x) dy` in exponential
//! coordinates, with Lebesgue measure as Haar measure.
//!
//! Top-weight coordinates are central, so the top block of `bch(-y, x)` is
//! `x_T - y_T + P(y_R, x_R)` where `R` are the remaining coordinates. For a
//! fixed pair `(x_R, y_R)` the sum over `y_T` is a correlation with a
//! constant fractional shift, evaluated with cubic convolution weights.

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{stencil, Frame, GridFunction, Interpolation};
use super::real::RealAlgebra;
use crate::error::{Error, Result};

/// Resamples axis `a` (of length `n`) onto differences `-(n-1)..=(n-1)`:
/// entry `dd` is the stencil applied at `dd + base`, zero outside.
fn shift_axis(
    data: &[Complex64],
    shape: &mut [usize],
    a: usize,
    base: i64,
    st: &[(i64, f64)],
) -> Vec<Complex64> {
    let n = shape[a];
    let k = 2 * n - 1;
    let outer: usize = shape[..a].iter().product();
    let inner: usize = shape[a + 1..].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * k * inner];
    for o in 0..outer {
        for dd in 0..k {
            let shift = dd as i64 - (n as i64 - 1) + base;
            let dst = (o * k + dd) * inner;
            for &(off, w) in st {
                let i = shift + off;
                if !(0..n as i64).contains(&i) {
                    continue;
                }
                let src = (o * n + i as usize) * inner;
                for m in 0..inner {
                    out[dst + m] += data[src + m] * w;
                }
            }
        }
    }
    shape[a] = k;
    out
}

pub fn convolve(alg: &RealAlgebra, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.require_frame(Frame::Primal)?;
    g.require_frame(Frame::Primal)?;
    if !f.same_grid(g) {
        return Err(Error::GridMismatch("convolution factors must share a grid".into()));
    }
    if f.weights() != alg.weights() {
        return Err(Error::GridMismatch("grid weights differ from the algebra's".into()));
    }
    let d = f.dim();
    let top = alg.depth();
    let t = f.weights().iter().take_while(|&&w| w == top).count();
    let counts = f.counts();
    let nt: usize = counts[..t].iter().product();
    let nr: usize = counts[t..].iter().product();
    let h: Vec<f64> = (0..d).map(|a| f.spacing(a)).collect();
    let l = f.half_ranges();

    // Columns over the top block, one per point of the remaining block.
    let column = |src: &GridFunction, r: usize| -> Vec<Complex64> {
        (0..nt).map(|k| src.data()[k * nr + r]).collect()
    };
    let f_cols: Vec<Vec<Complex64>> = (0..nr).map(|r| column(f, r)).collect();
    let g_cols: Vec<Vec<Complex64>> = (0..nr).map(|r| column(g, r)).collect();
    let f_zero: Vec<bool> = f_cols.iter().map(|c| c.iter().all(|z| z.norm_sqr() == 0.0)).collect();

    let r_counts = &counts[t..];
    let t_counts = &counts[..t];
    let r_point = |mut r: usize| -> Vec<f64> {
        let mut x = vec![0.0; d];
        for a in (t..d).rev() {
            x[a] = -l[a] + (r % counts[a]) as f64 * h[a];
            r /= counts[a];
        }
        x
    };
    // Kernels are indexed by `i - j + (n - 1)` per top axis, row-major, so
    // the flat index is `a(i) - a(j) + c` with `a` the stride-weighted sum.
    let diff_counts: Vec<usize> = t_counts.iter().map(|&n| 2 * n - 1).collect();
    let strides: Vec<usize> = (0..t).map(|a| diff_counts[a + 1..].iter().product()).collect();
    let diff_a: Vec<usize> = (0..nt)
        .map(|mut i| {
            let mut acc = 0;
            for a in (0..t).rev() {
                acc += strides[a] * (i % t_counts[a]);
                i /= t_counts[a];
            }
            acc
        })
        .collect();
    let diff_c: usize = (0..t).map(|a| strides[a] * (t_counts[a] - 1)).sum();
    let vol = f.cell_volume();

    let rows: Vec<Vec<Complex64>> = (0..nr)
        .into_par_iter()
        .map(|xr| {
            let x = r_point(xr);
            let mut out = vec![Complex64::new(0.0, 0.0); nt];
            let mut col = vec![Complex64::new(0.0, 0.0); nt];
            for yr in 0..nr {
                if f_zero[yr] {
                    continue;
                }
                let neg_y: Vec<f64> = r_point(yr).iter().map(|v| -v).collect();
                let b = alg.bch(&neg_y, &x);
                // Interpolate g over the remaining block into one top column.
                let mut corners: Vec<(usize, f64)> = vec![(0, 1.0)];
                for (k, a) in (t..d).enumerate() {
                    let (base, st) = stencil((b[a] + l[a]) / h[a], Interpolation::Cubic);
                    let n = r_counts[k] as i64;
                    let mut next = Vec::with_capacity(corners.len() * st.len());
                    for &(flat, w) in &corners {
                        for &(off, wa) in &st {
                            let i = base + off;
                            if (0..n).contains(&i) {
                                next.push((flat * n as usize + i as usize, w * wa));
                            }
                        }
                    }
                    corners = next;
                    if corners.is_empty() {
                        break;
                    }
                }
                if corners.is_empty() {
                    continue;
                }
                col.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                for &(r, w) in &corners {
                    for (c, gv) in col.iter_mut().zip(&g_cols[r]) {
                        *c += gv * w;
                    }
                }
                // Shift-interpolate the column into a kernel over differences.
                let mut kernel = col.clone();
                let mut shape = t_counts.to_vec();
                for a in 0..t {
                    let (base, st) = stencil((b[a] + l[a]) / h[a], Interpolation::Cubic);
                    kernel = shift_axis(&kernel, &mut shape, a, base, &st);
                }
                let fc = &f_cols[yr];
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    let ai = diff_a[i] + diff_c;
                    for (j, fv) in fc.iter().enumerate() {
                        acc += fv * kernel[ai - diff_a[j]];
                    }
                    *o += acc;
                }
            }
            out
        })
        .collect();

    let mut result = f.clone();
    for (xr, row) in rows.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            result.data_mut()[k * nr + xr] = v * vol;
        }
    }
    Ok(result)
}
