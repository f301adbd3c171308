//! Points, dimensions and the dimension-dependent constants of R^n.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Ambient dimension `n >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    pub fn check_axis(self, axis: usize) -> Result<()> {
        if axis >= self.0 {
            return Err(Error::InvalidAxis { axis, dim: self.0 });
        }
        Ok(())
    }

    pub fn check_point(self, p: &[f64]) -> Result<()> {
        if p.len() != self.0 {
            return Err(Error::DimensionMismatch {
                expected: self.0,
                got: p.len(),
            });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "point {p:?} has non-finite coordinates"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A location in R^n.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn origin(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// The unit vector `e_axis` (0-based axis).
    pub fn unit(n: usize, axis: usize) -> Self {
        let mut c = vec![0.0; n];
        c[axis] = 1.0;
        Self(c)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &[f64]) -> Self {
        Self(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &[f64]) -> Self {
        Self(self.0.iter().zip(other).map(|(a, b)| a - b).collect())
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl From<&[f64]> for Point {
    fn from(v: &[f64]) -> Self {
        Self(v.to_vec())
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Self(v.to_vec())
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `∫_0^π sin^k(t) dt`.
pub(crate) fn wallis(k: usize) -> f64 {
    let mut w = if k % 2 == 0 { PI } else { 2.0 };
    let mut j = if k % 2 == 0 { 2 } else { 3 };
    while j <= k {
        w *= (j - 1) as f64 / j as f64;
        j += 2;
    }
    w
}

/// Volume of the unit ball, `α(n) = π^(n/2) / Γ(n/2 + 1)`.
pub fn ball_volume(n: Dimension) -> f64 {
    unit_ball_volume(n.get())
}

/// Surface measure of the unit sphere, `nα(n)`.
pub fn sphere_measure(n: Dimension) -> f64 {
    n.get() as f64 * ball_volume(n)
}

// α(k) = 2π/k · α(k-2), α(0) = 1, α(1) = 2.
pub(crate) fn unit_ball_volume(k: usize) -> f64 {
    let mut v = if k % 2 == 0 { 1.0 } else { 2.0 };
    let mut j = if k % 2 == 0 { 2 } else { 3 };
    while j <= k {
        v *= 2.0 * PI / j as f64;
        j += 2;
    }
    v
}

/// Orthogonal reflection `H = I - 2vvᵀ/|v|²` with `H e₁ = axis`.
///
/// `axis` must be a unit vector. `H` is symmetric, so it maps `axis` back to `e₁`.
#[derive(Debug, Clone)]
pub(crate) struct Frame {
    v: Vec<f64>,
    scale: f64,
}

impl Frame {
    pub(crate) fn aligned_with(axis: &[f64]) -> Self {
        let mut v = axis.iter().map(|a| -a).collect::<Vec<_>>();
        v[0] += 1.0;
        let nv = norm_sq(&v);
        // axis ≈ e₁: identity
        if nv < 1e-30 {
            return Self { v, scale: 0.0 };
        }
        Self { v, scale: 2.0 / nv }
    }

    #[inline]
    pub(crate) fn apply(&self, x: &[f64], out: &mut [f64]) {
        let s = self.scale * dot(&self.v, x);
        for ((o, xi), vi) in out.iter_mut().zip(x).zip(&self.v) {
            *o = xi - s * vi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ball_volume_closed_forms() {
        let d = |n| Dimension::new(n).unwrap();
        assert_relative_eq!(ball_volume(d(3)), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(ball_volume(d(4)), PI * PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(ball_volume(d(5)), 8.0 * PI * PI / 15.0, max_relative = 1e-15);
        assert_relative_eq!(sphere_measure(d(3)), 4.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn rejects_low_dimensions() {
        assert_eq!(Dimension::new(2), Err(Error::InvalidDimension(2)));
        assert!(Dimension::new(0).is_err());
    }

    #[test]
    fn wallis_integrals() {
        assert_relative_eq!(wallis(0), PI);
        assert_relative_eq!(wallis(1), 2.0);
        assert_relative_eq!(wallis(2), PI / 2.0);
        assert_relative_eq!(wallis(3), 4.0 / 3.0);
    }

    #[test]
    fn frame_maps_e1_to_axis() {
        let axis = [0.6, 0.0, 0.8];
        let f = Frame::aligned_with(&axis);
        let mut out = [0.0; 3];
        f.apply(&[1.0, 0.0, 0.0], &mut out);
        for (o, a) in out.iter().zip(&axis) {
            assert!((o - a).abs() < 1e-15);
        }
        let id = Frame::aligned_with(&[1.0, 0.0, 0.0]);
        id.apply(&[0.1, 0.2, 0.3], &mut out);
        assert_eq!(out, [0.1, 0.2, 0.3]);
    }
}
