//! Sampled functions on axis-aligned boxes in exponential or dual coordinates.
//!
//! Axis `a` has `counts[a] >= 2` points `-L_a + i * 2 L_a / (counts[a] - 1)`.
//! Samples are stored row-major (last axis fastest).
//!
//! Binary layout, little-endian throughout:
//!
//! ```text
//! magic    8 bytes  "SKGRID01"
//! frame    u8       0 = primal, 1 = dual
//! dim      u32
//! weights  dim x u32
//! ranges   dim x f64   half-widths L_a
//! counts   dim x u64
//! samples  prod(counts) x (f64 re, f64 im)
//! ```
//!
//! The text form is a header of `key: value` lines (`frame`, `weights`,
//! `ranges`, `counts`) followed by one `re im` pair per line.

use std::io::{BufRead, Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Primal,
    Dual,
}

impl Frame {
    fn name(self) -> &'static str {
        match self {
            Frame::Primal => "primal",
            Frame::Dual => "dual",
        }
    }
}

/// Resampling scheme for off-grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    #[default]
    Linear,
    /// Cubic convolution (Keys, `a = -1/2`), zero outside the box.
    Cubic,
}

/// Cubic convolution weights at offsets `-1..=2` for a fractional position
/// `t` in `[0, 1)`.
pub(crate) fn cubic_weights(t: f64) -> [f64; 4] {
    let (t2, t3) = (t * t, t * t * t);
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

/// Integer base index and `(offset, weight)` pairs for fractional grid
/// coordinate `t`. Positions within `1e-12` of a node snap to it.
pub(crate) fn stencil(t: f64, mode: Interpolation) -> (i64, Vec<(i64, f64)>) {
    let mut base = t.floor();
    let mut frac = t - base;
    if frac < 1e-12 {
        frac = 0.0;
    } else if frac > 1.0 - 1e-12 {
        base += 1.0;
        frac = 0.0;
    }
    let base = base as i64;
    if frac == 0.0 {
        return (base, vec![(0, 1.0)]);
    }
    match mode {
        Interpolation::Linear => (base, vec![(0, 1.0 - frac), (1, frac)]),
        Interpolation::Cubic => (base, (-1..=2).zip(cubic_weights(frac)).collect()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    frame: Frame,
    weights: Vec<u32>,
    half_ranges: Vec<f64>,
    counts: Vec<usize>,
    data: Vec<Complex64>,
}

const MAGIC: &[u8; 8] = b"SKGRID01";

impl GridFunction {
    pub fn zeros(
        frame: Frame,
        weights: &[u32],
        half_ranges: &[f64],
        counts: &[usize],
    ) -> Result<Self> {
        let d = weights.len();
        if half_ranges.len() != d || counts.len() != d {
            return Err(Error::GridMismatch(format!(
                "{d} weights but {} ranges and {} counts",
                half_ranges.len(),
                counts.len()
            )));
        }
        if counts.iter().any(|&c| c < 2) {
            return Err(Error::GridMismatch("every axis needs at least 2 points".into()));
        }
        if half_ranges.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::GridMismatch("axis ranges must be positive".into()));
        }
        let n = counts.iter().product();
        Ok(GridFunction {
            frame,
            weights: weights.to_vec(),
            half_ranges: half_ranges.to_vec(),
            counts: counts.to_vec(),
            data: vec![Complex64::new(0.0, 0.0); n],
        })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(
        frame: Frame,
        weights: &[u32],
        half_ranges: &[f64],
        counts: &[usize],
        f: impl Fn(&[f64]) -> Complex64,
    ) -> Result<Self> {
        let mut g = Self::zeros(frame, weights, half_ranges, counts)?;
        let mut x = vec![0.0; g.dim()];
        for i in 0..g.len() {
            g.point_into(i, &mut x);
            g.data[i] = f(&x);
        }
        Ok(g)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn half_ranges(&self) -> &[f64] {
        &self.half_ranges
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.half_ranges[axis] / (self.counts[axis] - 1) as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    pub fn axis_point(&self, axis: usize, i: usize) -> f64 {
        -self.half_ranges[axis] + i as f64 * self.spacing(axis)
    }

    pub fn axis_points(&self, axis: usize) -> Vec<f64> {
        (0..self.counts[axis]).map(|i| self.axis_point(axis, i)).collect()
    }

    /// Multi-index of flat position `i`.
    pub fn unflatten(&self, mut i: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = i % self.counts[a];
            i /= self.counts[a];
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.counts).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        self.point_into(i, &mut x);
        x
    }

    fn point_into(&self, mut i: usize, x: &mut [f64]) {
        for a in (0..self.dim()).rev() {
            x[a] = self.axis_point(a, i % self.counts[a]);
            i /= self.counts[a];
        }
    }

    /// Riemann sum `sum f h^m`.
    pub fn integral(&self) -> Complex64 {
        self.data.iter().sum::<Complex64>() * self.cell_volume()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Multilinear interpolation; zero outside the box.
    pub fn interpolate(&self, x: &[f64]) -> Complex64 {
        let d = self.dim();
        let mut base = vec![0usize; d];
        let mut frac = vec![0.0; d];
        for a in 0..d {
            let t = (x[a] + self.half_ranges[a]) / self.spacing(a);
            let n = self.counts[a];
            if !(t >= 0.0 && t <= (n - 1) as f64) {
                return Complex64::new(0.0, 0.0);
            }
            let i = (t.floor() as usize).min(n - 2);
            base[a] = i;
            frac[a] = t - i as f64;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut flat = 0;
            for a in 0..d {
                let up = (corner >> a) & 1 == 1;
                w *= if up { frac[a] } else { 1.0 - frac[a] };
                flat = flat * self.counts[a] + base[a] + up as usize;
            }
            if w != 0.0 {
                total += self.data[flat] * w;
            }
        }
        total
    }

    /// Tensor-product interpolation; nodes outside the box count as zero.
    pub fn interpolate_with(&self, x: &[f64], mode: Interpolation) -> Complex64 {
        if mode == Interpolation::Linear {
            return self.interpolate(x);
        }
        let mut corners: Vec<(usize, f64)> = vec![(0, 1.0)];
        for a in 0..self.dim() {
            let n = self.counts[a] as i64;
            let (base, st) = stencil((x[a] + self.half_ranges[a]) / self.spacing(a), mode);
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
                return Complex64::new(0.0, 0.0);
            }
        }
        corners.into_iter().map(|(i, w)| self.data[i] * w).sum()
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.frame == other.frame
            && self.weights == other.weights
            && self.counts == other.counts
            && self
                .half_ranges
                .iter()
                .zip(&other.half_ranges)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()))
    }

    pub fn require_frame(&self, frame: Frame) -> Result<()> {
        if self.frame != frame {
            return Err(Error::FrameMismatch {
                expected: frame.name().into(),
                got: self.frame.name().into(),
            });
        }
        Ok(())
    }

    /// `max |self - other| / max |other|` on a shared grid.
    pub fn relative_error(&self, other: &GridFunction) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch("grids differ".into()));
        }
        let diff = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Ok(diff / other.max_abs())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        let mut out = self.clone();
        for z in &mut out.data {
            *z = f(*z);
        }
        out
    }

    /// Same samples on a different box.
    pub(crate) fn with_ranges(&self, half_ranges: Vec<f64>) -> GridFunction {
        GridFunction { half_ranges, ..self.clone() }
    }

    pub fn write_binary(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&[match self.frame {
            Frame::Primal => 0,
            Frame::Dual => 1,
        }])?;
        w.write_all(&(self.dim() as u32).to_le_bytes())?;
        for &q in &self.weights {
            w.write_all(&q.to_le_bytes())?;
        }
        for &l in &self.half_ranges {
            w.write_all(&l.to_le_bytes())?;
        }
        for &n in &self.counts {
            w.write_all(&(n as u64).to_le_bytes())?;
        }
        for z in &self.data {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary(r: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Parse("not a grid file".into()));
        }
        let mut b1 = [0u8; 1];
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b1)?;
        let frame = match b1[0] {
            0 => Frame::Primal,
            1 => Frame::Dual,
            x => return Err(Error::Parse(format!("unknown frame tag {x}"))),
        };
        r.read_exact(&mut b4)?;
        let d = u32::from_le_bytes(b4) as usize;
        let mut weights = Vec::with_capacity(d);
        for _ in 0..d {
            r.read_exact(&mut b4)?;
            weights.push(u32::from_le_bytes(b4));
        }
        let mut ranges = Vec::with_capacity(d);
        for _ in 0..d {
            r.read_exact(&mut b8)?;
            ranges.push(f64::from_le_bytes(b8));
        }
        let mut counts = Vec::with_capacity(d);
        for _ in 0..d {
            r.read_exact(&mut b8)?;
            counts.push(u64::from_le_bytes(b8) as usize);
        }
        let mut g = Self::zeros(frame, &weights, &ranges, &counts)?;
        for z in &mut g.data {
            r.read_exact(&mut b8)?;
            let re = f64::from_le_bytes(b8);
            r.read_exact(&mut b8)?;
            *z = Complex64::new(re, f64::from_le_bytes(b8));
        }
        Ok(g)
    }

    pub fn write_text(&self, w: &mut impl Write) -> Result<()> {
        let join = |xs: Vec<String>| xs.join(" ");
        writeln!(w, "frame: {}", self.frame.name())?;
        writeln!(w, "weights: {}", join(self.weights.iter().map(|x| x.to_string()).collect()))?;
        writeln!(w, "ranges: {}", join(self.half_ranges.iter().map(|x| format!("{x:e}")).collect()))?;
        writeln!(w, "counts: {}", join(self.counts.iter().map(|x| x.to_string()).collect()))?;
        for z in &self.data {
            writeln!(w, "{:e} {:e}", z.re, z.im)?;
        }
        Ok(())
    }

    pub fn read_text(r: &mut impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let mut header = |key: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing `{key}` header")))??;
            line.strip_prefix(&format!("{key}:"))
                .map(|s| s.trim().to_string())
                .ok_or_else(|| Error::Parse(format!("expected `{key}:` header, got `{line}`")))
        };
        let frame = match header("frame")?.as_str() {
            "primal" => Frame::Primal,
            "dual" => Frame::Dual,
            other => return Err(Error::Parse(format!("unknown frame `{other}`"))),
        };
        fn nums<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
            s.split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad number `{t}`"))))
                .collect()
        }
        let weights: Vec<u32> = nums(&header("weights")?)?;
        let ranges: Vec<f64> = nums(&header("ranges")?)?;
        let counts: Vec<usize> = nums(&header("counts")?)?;
        let mut g = Self::zeros(frame, &weights, &ranges, &counts)?;
        let mut filled = 0;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: Vec<f64> = nums(&line)?;
            if v.len() != 2 || filled >= g.len() {
                return Err(Error::Parse("malformed sample line".into()));
            }
            g.data[filled] = Complex64::new(v[0], v[1]);
            filled += 1;
        }
        if filled != g.len() {
            return Err(Error::Parse(format!("expected {} samples, got {filled}", g.len())));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridFunction {
        GridFunction::from_fn(Frame::Primal, &[2, 1], &[1.0, 2.0], &[3, 5], |x| {
            Complex64::new(x[0] + 10.0 * x[1], x[0] * x[1])
        })
        .unwrap()
    }

    #[test]
    fn layout() {
        let g = sample();
        assert_eq!(g.len(), 15);
        assert_eq!(g.point(0), vec![-1.0, -2.0]);
        assert_eq!(g.point(1), vec![-1.0, -1.0]);
        assert_eq!(g.point(14), vec![1.0, 2.0]);
        assert_eq!(g.flatten(&g.unflatten(7)), 7);
        assert_eq!(g.spacing(1), 1.0);
    }

    #[test]
    fn interpolation_is_exact_on_multilinear_data() {
        let g = sample();
        let z = g.interpolate(&[0.25, 0.5]);
        assert!((z - Complex64::new(0.25 + 5.0, 0.125)).norm() < 1e-12);
        assert_eq!(g.interpolate(&[1.5, 0.0]), Complex64::new(0.0, 0.0));
        assert_eq!(g.interpolate(&g.point(4)), g.data()[4]);
    }

    #[test]
    fn cubic_reproduces_quadratics() {
        let g = GridFunction::from_fn(Frame::Primal, &[1], &[3.0], &[13], |x| {
            Complex64::new(x[0] * x[0] - x[0], 0.0)
        })
        .unwrap();
        let z = g.interpolate_with(&[0.3], Interpolation::Cubic);
        assert!((z.re - (0.09 - 0.3)).abs() < 1e-12);
        assert_eq!(g.interpolate_with(&[5.0], Interpolation::Cubic), Complex64::new(0.0, 0.0));
        for t in [0.0, 0.25, 0.5, 0.9] {
            assert!((cubic_weights(t).iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        assert_eq!(stencil(2.9999999999999, Interpolation::Cubic).0, 3);
    }

    #[test]
    fn invalid_grids() {
        assert!(GridFunction::zeros(Frame::Primal, &[1], &[1.0], &[1]).is_err());
        assert!(GridFunction::zeros(Frame::Primal, &[1], &[0.0], &[4]).is_err());
        assert!(GridFunction::zeros(Frame::Primal, &[1, 1], &[1.0], &[4]).is_err());
    }

    #[test]
    fn binary_round_trip() {
        let g = sample();
        let mut buf = Vec::new();
        g.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..8], b"SKGRID01");
        assert_eq!(GridFunction::read_binary(&mut buf.as_slice()).unwrap(), g);
        assert!(GridFunction::read_binary(&mut &b"nonsense"[..]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = sample().map(|z| z * Complex64::new(0.1, -1.0 / 3.0));
        let mut buf = Vec::new();
        g.write_text(&mut buf).unwrap();
        let back = GridFunction::read_text(&mut buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn frame_check() {
        let g = sample();
        assert!(g.require_frame(Frame::Primal).is_ok());
        assert!(matches!(g.require_frame(Frame::Dual), Err(Error::FrameMismatch { .. })));
    }
}
