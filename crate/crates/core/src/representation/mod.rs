//! The representation formula on balls and what is built on it: derivative
//! representation, limit functionals for kernel difference quotients, the
//! spherical averaging identity and recovery of a continuous representative.

mod averaging;
mod limits;

pub use averaging::{
    averaging_identity, averaging_identity_residual, generalized_recovery, AveragingPairing, AveragingTerms,
    AveragingWeight, RecoveryRow,
};
pub use limits::{lemma_lim_surface, lemma_lim_surface_at, lemma_lim_volume, lemma_lim_volume_at};

use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::geometry::{norm, Dimension};
use crate::kernels::KernelContext;
use crate::par;
use crate::quadrature::{focused_sphere_quadrature, singular_ball_quadrature, sphere_quadrature};

/// Discretization of the representation formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepresentationConfig {
    pub surface_level: usize,
    pub volume_level: usize,
    /// Ball radius.
    pub r: f64,
}

impl Default for RepresentationConfig {
    fn default() -> Self {
        Self {
            surface_level: 8,
            volume_level: 8,
            r: 1.0,
        }
    }
}

impl RepresentationConfig {
    pub fn new(surface_level: usize, volume_level: usize, r: f64) -> Result<Self> {
        let cfg = Self {
            surface_level,
            volume_level,
            r,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_level(level: usize) -> Self {
        Self {
            surface_level: level,
            volume_level: level,
            r: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for level in [self.surface_level, self.volume_level] {
            if level < 1 {
                return Err(Error::InvalidLevel(level));
            }
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::InvalidRadius(self.r));
        }
        Ok(())
    }
}

/// `u(x) = ∫_{∂B(0,r)} K_r(x, y) u(y) dS + ∫_{B(0,r)} f(y) G_r(x, y) dy`.
///
/// The surface rule is graded toward `x`, the volume rule is centred at `x`.
pub fn eval_u_ball<U, F>(u_boundary: &U, f: &F, x: &[f64], cfg: &RepresentationConfig) -> Result<f64>
where
    U: ScalarField + ?Sized,
    F: ScalarField + ?Sized,
{
    cfg.validate()?;
    let n = Dimension::new(x.len())?;
    let r = cfg.r;
    if norm(x) >= r {
        return Err(Error::OutsideDomain(format!("|x| = {} must be < {r}", norm(x))));
    }
    let ctx = KernelContext::new(n);
    let origin = vec![0.0; n.get()];
    let sphere = focused_sphere_quadrature(n, &origin, r, x, cfg.surface_level)?;
    let boundary = sphere.integrate(|y| ctx.poisson_kernel_unchecked(x, y, r) * u_boundary.eval(y));
    let ball = singular_ball_quadrature(n, &origin, r, x, cfg.volume_level)?;
    let volume = ball.integrate(|y| f.eval(y) * ctx.green_r_unchecked(r, x, y));
    Ok(boundary + volume)
}

/// `∂u/∂x_i(x0)` from the derivative form of the representation on
/// `B(x0, r)`:
/// `∫_{∂B(0,r)} u(x0 + y) ∂_i K_r(0, y) dS + ∫_{B(0,r)} f(x0 + y) ∂_i G_r(0, y) dy`.
///
/// For `r = 1`, `∂_i K(0, y) = y_i / α(n)`. Fields are given in global
/// coordinates and shifted internally.
pub fn eval_grad_u<U, F>(u: &U, f: &F, x0: &[f64], i: usize, cfg: &RepresentationConfig) -> Result<f64>
where
    U: ScalarField + ?Sized,
    F: ScalarField + ?Sized,
{
    cfg.validate()?;
    let n = Dimension::new(x0.len())?;
    n.check_axis(i)?;
    let r = cfg.r;
    let ctx = KernelContext::new(n);
    let origin = vec![0.0; n.get()];
    let shifted = |g: &dyn Fn(&[f64]) -> f64, y: &[f64]| {
        let p: smallvec::SmallVec<[f64; 8]> = y.iter().zip(x0).map(|(a, b)| a + b).collect();
        g(&p)
    };
    let sphere = sphere_quadrature(n, &origin, r, cfg.surface_level)?;
    let boundary = sphere.integrate(|y| {
        let k = if r == 1.0 {
            y[i] / ctx.alpha_n
        } else {
            ctx.poisson_kernel_dx_unchecked(i, &origin, y, r)
        };
        k * shifted(&|p| u.eval(p), y)
    });
    let ball = singular_ball_quadrature(n, &origin, r, &origin, cfg.volume_level)?;
    let volume = ball.integrate(|y| shifted(&|p| f.eval(p), y) * ctx.green_r_dx_unchecked(r, i, &origin, y));
    Ok(boundary + volume)
}

/// `max_k |(u(x_k + h e_i) - u(x_k))/h - eval_grad_u(x_k)|`.
pub fn difference_quotient_defect<U, F>(
    u: &U,
    f: &F,
    x0_samples: &[Vec<f64>],
    i: usize,
    h: f64,
    cfg: &RepresentationConfig,
) -> Result<f64>
where
    U: ScalarField + ?Sized,
    F: ScalarField + ?Sized,
{
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::InvalidParameter(format!("h = {h} must lie in (0, 1)")));
    }
    let mut worst = 0.0f64;
    for x0 in x0_samples {
        let n = Dimension::new(x0.len())?;
        n.check_axis(i)?;
        let mut xh = x0.clone();
        xh[i] += h;
        let quotient = (u.eval(&xh) - u.eval(x0)) / h;
        let grad = eval_grad_u(u, f, x0, i, cfg)?;
        worst = worst.max((quotient - grad).abs());
    }
    Ok(worst)
}

/// Evaluates `eval_u_ball` at several points, in order.
pub fn eval_u_ball_many<U, F>(u_boundary: &U, f: &F, xs: &[Vec<f64>], cfg: &RepresentationConfig) -> Result<Vec<f64>>
where
    U: ScalarField + ?Sized,
    F: ScalarField + ?Sized,
{
    par::map_collect(xs.len(), |k| eval_u_ball(u_boundary, f, &xs[k], cfg))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Affine, Constant, FnField, TrigPolynomial};

    fn d3() -> Dimension {
        Dimension::new(3).unwrap()
    }

    #[test]
    fn harmonic_examples() {
        let cfg = RepresentationConfig::default();
        let v = eval_u_ball(&Constant(1.0), &Constant(0.0), &[0.3, 0.0, 0.0], &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-8);
        let y3 = Affine::coordinate(d3(), 2).unwrap();
        let v = eval_u_ball(&y3, &Constant(0.0), &[0.0, 0.0, 0.4], &cfg).unwrap();
        assert!((v - 0.4).abs() < 1e-8);
        let q = FnField::new(|y: &[f64]| y[0] * y[0] - y[1] * y[1]);
        let x = [0.2, -0.5, 0.1];
        let v = eval_u_ball(&q, &Constant(0.0), &x, &cfg).unwrap();
        assert!((v - (0.04 - 0.25)).abs() < 1e-6);
        assert!(eval_u_ball(&Constant(1.0), &Constant(0.0), &[1.0, 0.0, 0.0], &cfg).is_err());
    }

    #[test]
    fn trig_oracle_at_origin() {
        let f = TrigPolynomial::cosine(d3(), 1.0, &[1.0, 0.0, 0.0]).unwrap();
        let v = eval_u_ball(&f, &f, &[0.0; 3], &RepresentationConfig::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-4);
    }

    #[test]
    fn radius_two_ball() {
        let f = TrigPolynomial::cosine(d3(), 1.0, &[1.0, 0.5, 0.0]).unwrap();
        let u = f.exact_poisson_inverse().unwrap();
        let cfg = RepresentationConfig::new(10, 10, 2.0).unwrap();
        let x = [0.4, -0.3, 0.6];
        let v = eval_u_ball(&u, &f, &x, &cfg).unwrap();
        assert!((v - u.eval(&x)).abs() < 1e-6);
    }

    #[test]
    fn gradient_examples() {
        let cfg = RepresentationConfig::default();
        let g = eval_grad_u(&Constant(1.0), &Constant(0.0), &[0.0; 3], 1, &cfg).unwrap();
        assert!(g.abs() < 1e-10);
        let y3 = Affine::coordinate(d3(), 2).unwrap();
        let g = eval_grad_u(&y3, &Constant(0.0), &[0.0; 3], 2, &cfg).unwrap();
        assert!((g - 1.0).abs() < 1e-8);
        let f = TrigPolynomial::cosine(d3(), 1.0, &[1.0, 0.0, 0.0]).unwrap();
        let g = eval_grad_u(&f, &f, &[0.2, 0.0, 0.0], 0, &cfg).unwrap();
        assert!((g + 0.2f64.sin()).abs() < 1e-3);
    }

    #[test]
    fn gradient_on_larger_ball() {
        let f = TrigPolynomial::cosine(d3(), 1.0, &[0.5, 1.0, 0.0]).unwrap();
        let u = f.exact_poisson_inverse().unwrap();
        let cfg = RepresentationConfig::new(10, 10, 1.5).unwrap();
        let x0 = [0.3, 0.1, -0.2];
        let g = eval_grad_u(&u, &f, &x0, 1, &cfg).unwrap();
        assert!((g - u.gradient(&x0, 1).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn defect_of_linear_field_is_zero() {
        let y3 = Affine::coordinate(d3(), 2).unwrap();
        let samples = vec![vec![0.0; 3], vec![1.0, -2.0, 0.5]];
        for h in [0.5, 0.125] {
            let d = difference_quotient_defect(&y3, &Constant(0.0), &samples, 2, h, &RepresentationConfig::default())
                .unwrap();
            assert!(d <= 1e-8);
        }
        assert!(difference_quotient_defect(&y3, &Constant(0.0), &samples, 2, 1.0, &RepresentationConfig::default())
            .is_err());
    }
}
