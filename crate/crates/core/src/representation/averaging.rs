//! Spherical averaging of the radius-r representation against a radial weight,
//! and recovery of `u(0)` for a function known only up to null sets.

use std::fmt;
use std::sync::Arc;

use crate::distributional::{Convolved, Mollifier, TestFunction, RADIAL_POINTS_PER_LEVEL};
use crate::error::{Error, Result};
use crate::fields::ScalarField;
use crate::geometry::Dimension;
use crate::kernels::KernelContext;
use crate::par;
use crate::quadrature::{Directions, LineRule, RadialScheme, RayFan};

/// Radial weight `φ` on `[0, R]`, vanishing on `[0, δ] ∪ [R - δ, R]`.
#[derive(Clone)]
pub struct AveragingWeight {
    big_r: f64,
    delta: f64,
    profile: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for AveragingWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AveragingWeight")
            .field("R", &self.big_r)
            .field("delta", &self.delta)
            .finish_non_exhaustive()
    }
}

impl AveragingWeight {
    /// `φ(r) = exp(-1/((r - δ)(R - δ - r)))` on `(δ, R - δ)`.
    pub fn standard(big_r: f64, delta: f64) -> Result<Self> {
        Self::new(big_r, delta, move |r| (-1.0 / ((r - delta) * (big_r - delta - r))).exp())
    }

    /// Custom profile; it is only ever sampled inside `(δ, R - δ)`.
    pub fn new<F>(big_r: f64, delta: f64, profile: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(big_r > 0.0 && big_r.is_finite()) {
            return Err(Error::InvalidRadius(big_r));
        }
        if !(delta > 0.0 && delta < 0.5 * big_r) {
            return Err(Error::InvalidParameter(format!("delta = {delta} must lie in (0, R/2)")));
        }
        Ok(Self {
            big_r,
            delta,
            profile: Arc::new(profile),
        })
    }

    pub fn big_r(&self) -> f64 {
        self.big_r
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= self.delta || r >= self.big_r - self.delta {
            0.0
        } else {
            (self.profile)(r)
        }
    }

    fn rule(&self, level: usize) -> LineRule {
        LineRule::gauss(self.delta, self.big_r - self.delta, RADIAL_POINTS_PER_LEVEL * level)
    }

    /// `ψ(y) = φ(|y|) |y|^(1-n)` as a test function.
    pub fn kernel(&self, n: Dimension) -> TestFunction {
        let w = self.clone();
        let k = n.get() as i32;
        TestFunction::radial(n, move |r| w.eval(r) * r.powi(1 - k), self.delta, self.big_r - self.delta)
            .expect("weight support is a valid shell")
    }
}

/// Which normalization pairs with the `φ(|y|)|y|^(1-n)` kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AveragingPairing {
    /// `I₁ = ∫ φ dr` and `I₃ = ∫ φ(r) ∫_{B(0,r)} f G_r dy dr`; exact for `u ≡ 1`.
    #[default]
    Corrected,
    /// `I₁ = ∫ φ r^(n-1) dr` and `I₃` with the extra `r^(n-1)`.
    Printed,
}

/// Terms of `u(0) ≈ kernel_term / (nα(n) I₁) + I₃ / I₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingTerms {
    pub u0: f64,
    /// `∫_{|y| ≤ R} φ(|y|) |y|^(1-n) u(y) dy`.
    pub kernel_term: f64,
    pub i1: f64,
    pub i3: f64,
    pub rhs: f64,
    pub residual: f64,
}

struct Averager {
    n: Dimension,
    ctx: KernelContext,
    weight: AveragingWeight,
    pairing: AveragingPairing,
    level: usize,
    outer: LineRule,
}

impl Averager {
    fn new(n: Dimension, weight: &AveragingWeight, pairing: AveragingPairing, level: usize) -> Result<Self> {
        if level < 1 {
            return Err(Error::InvalidLevel(level));
        }
        Ok(Self {
            n,
            ctx: KernelContext::new(n),
            weight: weight.clone(),
            pairing,
            level,
            outer: weight.rule(level),
        })
    }

    fn radial_factor(&self, r: f64) -> f64 {
        match self.pairing {
            AveragingPairing::Corrected => 1.0,
            AveragingPairing::Printed => r.powi(self.n.get() as i32 - 1),
        }
    }

    fn i1(&self) -> f64 {
        self.outer.integrate(|r| self.weight.eval(r) * self.radial_factor(r))
    }

    /// `∫ φ(r) [r^(n-1)] ∫_{B(0,r)} f(y) G_r(0, y) dy dr`, inner integrals in
    /// spherical coordinates about the origin.
    fn i3<F: ScalarField + ?Sized>(&self, f: &F) -> Result<f64> {
        let origin = vec![0.0; self.n.get()];
        let dirs = Directions::product(self.n.get(), self.level);
        let scheme = RadialScheme::single(self.level);
        let inner: Vec<f64> = self
            .outer
            .nodes
            .iter()
            .map(|&r| {
                let fan = RayFan::new(&origin, &origin, r, dirs.clone())?;
                Ok(fan.integrate(&scheme, |y| f.eval(y) * self.ctx.green_r_unchecked(r, &origin, y)))
            })
            .collect::<Result<_>>()?;
        Ok(par::sum_by(self.outer.len(), |k| {
            let r = self.outer.nodes[k];
            self.outer.weights[k] * self.weight.eval(r) * self.radial_factor(r) * inner[k]
        }))
    }

    fn rhs(&self, kernel_term: f64, i1: f64, i3: f64) -> f64 {
        kernel_term / (self.ctx.surf_n * i1) + i3 / i1
    }
}

/// All terms of the averaging identity for `u` with `-Δu = f` on `B(0, R)`.
pub fn averaging_identity<U, F>(
    n: Dimension,
    u: &U,
    f: &F,
    weight: &AveragingWeight,
    level: usize,
    pairing: AveragingPairing,
) -> Result<AveragingTerms>
where
    U: ScalarField + ?Sized,
    F: ScalarField + ?Sized,
{
    let avg = Averager::new(n, weight, pairing, level)?;
    let origin = vec![0.0; n.get()];
    let kernel_term = weight.kernel(n).stencil(level)?.apply(u, &origin);
    let i1 = avg.i1();
    let i3 = avg.i3(f)?;
    let rhs = avg.rhs(kernel_term, i1, i3);
    let u0 = u.eval(&origin);
    Ok(AveragingTerms {
        u0,
        kernel_term,
        i1,
        i3,
        rhs,
        residual: (u0 - rhs).abs(),
    })
}

/// `|u(0) - rhs|` with the corrected pairing.
pub fn averaging_identity_residual<U, F>(
    n: Dimension,
    u: &U,
    f: &F,
    weight: &AveragingWeight,
    level: usize,
) -> Result<f64>
where
    U: ScalarField + ?Sized,
    F: ScalarField + ?Sized,
{
    Ok(averaging_identity(n, u, f, weight, level, AveragingPairing::Corrected)?.residual)
}

/// One mollification scale of the recovery pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryRow {
    pub epsilon: f64,
    /// `(ω_ε ∗ u)(0)`.
    pub u_eps_at_0: f64,
    /// `v_ε(0) / (nα(n) I₁) + I₃(f_ε) / I₁` with `v = u ∗ ψ`.
    pub rhs: f64,
}

/// For each `ε`, both sides of the mollified averaging identity at the origin.
///
/// `u_raw` is only ever seen through convolutions, so changing it on a null
/// set does not change the output.
pub fn generalized_recovery<U, F>(
    n: Dimension,
    u_raw: &U,
    f: &F,
    weight: &AveragingWeight,
    epsilons: &[f64],
    level: usize,
) -> Result<Vec<RecoveryRow>>
where
    U: ScalarField + ?Sized,
    F: ScalarField + ?Sized,
{
    let avg = Averager::new(n, weight, AveragingPairing::Corrected, level)?;
    let origin = vec![0.0; n.get()];
    let i1 = avg.i1();
    let psi = Arc::new(weight.kernel(n).stencil(level)?);
    let v = Convolved::new(u_raw, psi);
    epsilons
        .iter()
        .map(|&eps| {
            let m = Mollifier::new(n, eps)?;
            let omega = Arc::new(m.test_function().stencil(level)?);
            let u_eps = omega.apply(u_raw, &origin);
            let v_eps = omega.apply(&v, &origin);
            let f_eps = Convolved::new(f, omega);
            let i3 = avg.i3(&f_eps)?;
            Ok(RecoveryRow {
                epsilon: eps,
                u_eps_at_0: u_eps,
                rhs: avg.rhs(v_eps, i1, i3),
            })
        })
        .collect()
}
