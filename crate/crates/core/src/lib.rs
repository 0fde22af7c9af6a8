//! Exact computations on graded nilpotent Lie algebras: validation, the
//! group law, coadjoint orbit stratification, free nilpotent covers, and a
//! numerical layer for quasi-norms, Fourier transforms and convolution.

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod error;
pub mod family;
pub mod free;
pub mod group;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod spec_format;
pub mod strata;

pub use algebra::{BasisEntry, Bracket, DualPoint, GradedLieAlgebra, Vector};
pub use error::{Error, Result};
pub use rational::Q;
