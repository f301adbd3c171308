//! Potential theory on balls in R^n (n ≥ 3): the fundamental solution, ball
//! Green's functions and Poisson kernels, weakly singular quadrature,
//! mollifiers and test-function probes, and numerical checks of the
//! representation formula and its derivative form.

pub mod almost_periodic;
pub mod distributional;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod kernels;
pub mod par;
pub mod quadrature;
pub mod representation;

pub use error::{Error, Result};
pub use geometry::{ball_volume, sphere_measure, Dimension, Point};
