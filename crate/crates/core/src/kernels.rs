//! Fundamental solution, ball Green's functions and the Poisson kernel.
//!
//! Conventions: `G(x, y)` is the Green's function of the unit ball, `G_r` of
//! `B(0, r)`. The Poisson kernel is exposed with its positive sign,
//! `K_r(x, y) = -∂G_r/∂ν(x, y) = (r² - |x|²) / (nα(n) r |x - y|^n)`, so that
//! `u(x) = ∫ K_r u dS + ∫ f G_r dy`. Axis indices are 0-based.

use crate::error::{Error, Result};
use crate::geometry::{ball_volume, dist, dot, norm, norm_sq, Dimension};

/// Separations below this are treated as hitting the pole.
pub const POLE_GUARD: f64 = 1e-14;

/// Tolerance for "on the sphere" checks, relative to `max(1, r)`.
pub const SPHERE_TOL: f64 = 1e-10;

/// Dimension-dependent constants shared by every kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelContext {
    pub n: Dimension,
    /// `α(n)`, volume of the unit ball.
    pub alpha_n: f64,
    /// `nα(n)`, surface measure of the unit sphere.
    pub surf_n: f64,
    phi_scale: f64,
}

impl KernelContext {
    pub fn new(n: Dimension) -> Self {
        let alpha_n = ball_volume(n);
        let nf = n.get() as f64;
        Self {
            n,
            alpha_n,
            surf_n: nf * alpha_n,
            phi_scale: 1.0 / (nf * (nf - 2.0) * alpha_n),
        }
    }

    pub fn dim(&self) -> usize {
        self.n.get()
    }

    /// `1 / (n(n-2)α(n))`, the constant in front of `|x|^(2-n)`.
    pub fn phi_scale(&self) -> f64 {
        self.phi_scale
    }

    #[inline]
    pub(crate) fn phi_of_norm(&self, r: f64) -> f64 {
        self.phi_scale * r.powi(2 - self.dim() as i32)
    }

    fn check(&self, p: &[f64]) -> Result<()> {
        self.n.check_point(p)
    }

    /// Fundamental solution `Φ(x) = |x|^(2-n) / (n(n-2)α(n))`.
    pub fn phi(&self, x: &[f64]) -> Result<f64> {
        self.check(x)?;
        let r = norm(x);
        if r < POLE_GUARD {
            return Err(Error::Pole(r));
        }
        Ok(self.phi_of_norm(r))
    }

    /// Green's function of the unit ball.
    pub fn green_unit(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.green_r(1.0, x, y)
    }

    /// Green's function of `B(0, r)`:
    /// `Φ(y - x) - Φ((|x|/r)(y - r² x/|x|²))`, extended to `x = 0` by its limit
    /// `Φ(y) - r^(2-n)/(n(n-2)α(n))`.
    pub fn green_r(&self, r: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_pair(r, x, y)?;
        Ok(self.green_r_unchecked(r, x, y))
    }

    fn check_pair(&self, r: f64, x: &[f64], y: &[f64]) -> Result<()> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidRadius(r));
        }
        self.check(x)?;
        self.check(y)?;
        let nx = norm(x);
        if nx >= r {
            return Err(Error::OutsideDomain(format!("|x| = {nx} must be < {r}")));
        }
        let ny = norm(y);
        if ny > r * (1.0 + SPHERE_TOL) {
            return Err(Error::OutsideDomain(format!("|y| = {ny} must be <= {r}")));
        }
        let sep = dist(x, y);
        if sep < POLE_GUARD {
            return Err(Error::Pole(sep));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn green_r_unchecked(&self, r: f64, x: &[f64], y: &[f64]) -> f64 {
        let direct = self.phi_of_norm(dist(x, y));
        self.green_r_image(r, x, y, direct)
    }

    #[inline]
    fn green_r_image(&self, r: f64, x: &[f64], y: &[f64], direct: f64) -> f64 {
        // |(|x|/r)(y - r² x/|x|²)|² = |x|²|y|²/r² - 2 x·y + r²
        let xx = norm_sq(x);
        let image_sq = (xx * norm_sq(y) / (r * r) - 2.0 * dot(x, y) + r * r).max(0.0);
        direct - self.phi_scale * image_sq.powf(0.5 * (2.0 - self.dim() as f64))
    }

    /// Positive Poisson kernel `K_r(x, y)` for `|x| < r`, `|y| = r`.
    pub fn poisson_kernel(&self, x: &[f64], y: &[f64], r: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidRadius(r));
        }
        self.check(x)?;
        self.check(y)?;
        let nx = norm(x);
        if nx >= r {
            return Err(Error::OutsideDomain(format!("|x| = {nx} must be < {r}")));
        }
        let ny = norm(y);
        if (ny - r).abs() > SPHERE_TOL * r.max(1.0) {
            return Err(Error::NotOnSphere { radius: r, norm: ny });
        }
        Ok(self.poisson_kernel_unchecked(x, y, r))
    }

    #[inline]
    pub(crate) fn poisson_kernel_unchecked(&self, x: &[f64], y: &[f64], r: f64) -> f64 {
        (r * r - norm_sq(x)) / (self.surf_n * r * dist(x, y).powi(self.dim() as i32))
    }

    /// `∂K_r(x, y)/∂x_i`.
    pub fn poisson_kernel_dx(&self, i: usize, x: &[f64], y: &[f64], r: f64) -> Result<f64> {
        self.n.check_axis(i)?;
        self.poisson_kernel(x, y, r)?;
        Ok(self.poisson_kernel_dx_unchecked(i, x, y, r))
    }

    #[inline]
    pub(crate) fn poisson_kernel_dx_unchecked(&self, i: usize, x: &[f64], y: &[f64], r: f64) -> f64 {
        let n = self.dim() as i32;
        let d = dist(x, y);
        let num = r * r - norm_sq(x);
        (-2.0 * x[i] / d.powi(n) - n as f64 * num * (x[i] - y[i]) / d.powi(n + 2)) / (self.surf_n * r)
    }

    /// `∂G/∂x_i(x, y)` for the unit ball:
    /// `(1/nα(n)) [ (y_i - x_i)/|y - x|^n - (y_i - x_i|y|²)/| |y|x - y/|y| |^n ]`.
    ///
    /// The second term's printed form is undefined at `y = 0`, which is rejected.
    pub fn green_dx(&self, i: usize, x: &[f64], y: &[f64]) -> Result<f64> {
        self.n.check_axis(i)?;
        self.check_pair(1.0, x, y)?;
        if norm(y) < POLE_GUARD {
            return Err(Error::OutsideDomain(
                "∂G/∂x_i is not defined by its closed form at y = 0".into(),
            ));
        }
        Ok(self.green_r_dx_unchecked(1.0, i, x, y))
    }

    /// `∂G_r/∂x_i(x, y)` for `B(0, r)`.
    pub fn green_r_dx(&self, r: f64, i: usize, x: &[f64], y: &[f64]) -> Result<f64> {
        self.n.check_axis(i)?;
        self.check_pair(r, x, y)?;
        Ok(self.green_r_dx_unchecked(r, i, x, y))
    }

    /// Uses `| |y|x/r - r y/|y| |² = |x|²|y|²/r² - 2x·y + r²`, which stays
    /// smooth through `y = 0`.
    #[inline]
    pub(crate) fn green_r_dx_unchecked(&self, r: f64, i: usize, x: &[f64], y: &[f64]) -> f64 {
        let n = self.dim() as f64;
        let d = dist(x, y);
        let yy = norm_sq(y);
        let image_sq = (norm_sq(x) * yy / (r * r) - 2.0 * dot(x, y) + r * r).max(0.0);
        let direct = (y[i] - x[i]) / d.powi(self.dim() as i32);
        let image = (y[i] - x[i] * yy / (r * r)) / image_sq.powf(0.5 * n);
        (direct - image) / self.surf_n
    }

    /// `∂/∂x_i [K(x, y)]` at `x = 0` for `|y| = 1`, which equals `y_i / α(n)`.
    pub fn mixed_derivative_origin(&self, i: usize, y: &[f64]) -> Result<f64> {
        self.n.check_axis(i)?;
        self.check(y)?;
        let ny = norm(y);
        if (ny - 1.0).abs() > SPHERE_TOL {
            return Err(Error::NotOnSphere { radius: 1.0, norm: ny });
        }
        Ok(y[i] / self.alpha_n)
    }
}
