//! Double-precision numerics on graded groups: quasi-norms, sampled functions,
//! dilations, the Fourier transform, convolution and homogenization.
//!
//! Coordinates follow the algebra's internal basis order (descending weight).

pub mod convolve;
pub mod fourier;
pub mod grid;
pub mod homogenize;
pub mod quasinorm;
pub mod real;

pub use convolve::convolve;
pub use fourier::{
    dilate_fn, dual_pullback_dilate, equivariance_sides, fourier, inverse_fourier,
    pushforward_dilate, pushforward_dilate_with, transport_dilate, GridShape,
};
pub use grid::{Frame, GridFunction, Interpolation};
pub use homogenize::{homogenize, DualFunction, HomogenizeConfig, Homogenized};
pub use quasinorm::{orbit_quasi_norm, OrbitNorm, QuasiNorm};
pub use real::RealAlgebra;
