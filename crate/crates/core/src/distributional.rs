//! Mollifiers, test functions and convolution probes.
//!
//! Generalized functions are represented by bounded (possibly discontinuous)
//! evaluable fields; they are only ever observed through convolution with a
//! test function, so values on a null set never matter.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::almost_periodic::LatticeBox;
use crate::error::{Error, Result};
use crate::fields::{ScalarField, TrigPolynomial};
use crate::geometry::{dot, norm, Dimension};
use crate::par::{self, CompensatedSum};
use crate::quadrature::{adaptive_integrate, gauss_legendre, Directions};

/// Radial Gauss points per level for bump-type profiles. Bumps are flat to all
/// orders at the edge of their support and need more radial than angular nodes.
pub const RADIAL_POINTS_PER_LEVEL: usize = 6;

/// `exp(1/(r² - 1))` for `r < 1`, else 0.
#[inline]
pub fn unit_bump(r: f64) -> f64 {
    if r < 1.0 {
        (1.0 / (r * r - 1.0)).exp()
    } else {
        0.0
    }
}

/// The constant `c` making `c · exp(1/(|x|² - 1))` integrate to 1 over the unit ball.
pub fn mollifier_normalization(n: Dimension) -> f64 {
    let k = n.get() as i32;
    let radial = adaptive_integrate(|r| r.powi(k - 1) * unit_bump(r), 0.0, 1.0, 1e-15);
    1.0 / (crate::geometry::sphere_measure(n) * radial)
}

/// `ω_ε(x) = ε^(-n) c exp(1/(|x/ε|² - 1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    pub n: Dimension,
    pub epsilon: f64,
    pub normalization_c: f64,
}

impl Mollifier {
    pub fn new(n: Dimension, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidRadius(epsilon));
        }
        Ok(Self {
            n,
            epsilon,
            normalization_c: mollifier_normalization(n),
        })
    }

    fn radial(&self, r: f64) -> f64 {
        self.normalization_c * self.epsilon.powi(-(self.n.get() as i32)) * unit_bump(r / self.epsilon)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.radial(norm(x))
    }

    /// `ln ω_ε(x)`, `-inf` outside the support. Near the edge `ω_ε` underflows
    /// long before it reaches zero; the logarithm does not.
    pub fn ln_eval(&self, x: &[f64]) -> f64 {
        let r = norm(x) / self.epsilon;
        if r >= 1.0 {
            return f64::NEG_INFINITY;
        }
        self.normalization_c.ln() - self.n.get() as f64 * self.epsilon.ln() + 1.0 / ((r - 1.0) * (r + 1.0))
    }

    pub fn test_function(&self) -> TestFunction {
        let m = *self;
        TestFunction::radial(self.n, move |r| m.radial(r), 0.0, self.epsilon)
            .expect("mollifier radius is positive")
    }
}

#[derive(Clone)]
enum Shape {
    /// `profile(|x|)`, vanishing for `|x| <= inner`.
    Radial {
        profile: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        inner: f64,
    },
    General(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

/// A smooth compactly supported function on R^n.
#[derive(Clone)]
pub struct TestFunction {
    n: Dimension,
    shape: Shape,
    support_radius: f64,
    symmetric: bool,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.shape {
            Shape::Radial { inner, .. } => format!("radial(inner = {inner})"),
            Shape::General(_) => "general".to_string(),
        };
        f.debug_struct("TestFunction")
            .field("n", &self.n.get())
            .field("shape", &kind)
            .field("support_radius", &self.support_radius)
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl TestFunction {
    /// Radial function supported in the shell `inner < |x| < outer`.
    pub fn radial<F>(n: Dimension, profile: F, inner: f64, outer: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(outer > 0.0 && outer.is_finite()) {
            return Err(Error::InvalidRadius(outer));
        }
        if !(0.0..outer).contains(&inner) {
            return Err(Error::InvalidParameter(format!("inner radius {inner} outside [0, {outer})")));
        }
        Ok(Self {
            n,
            shape: Shape::Radial {
                profile: Arc::new(profile),
                inner,
            },
            support_radius: outer,
            symmetric: true,
        })
    }

    /// Arbitrary profile supported in `B(0, support_radius)`; `symmetric`
    /// asserts `profile(-x) = profile(x)`.
    pub fn general<F>(n: Dimension, profile: F, support_radius: f64, symmetric: bool) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if !(support_radius > 0.0 && support_radius.is_finite()) {
            return Err(Error::InvalidRadius(support_radius));
        }
        Ok(Self {
            n,
            shape: Shape::General(Arc::new(profile)),
            support_radius,
            symmetric,
        })
    }

    /// `height · exp(1/(|x/a|² - 1))` on `B(0, a)`.
    pub fn bump(n: Dimension, radius: f64, height: f64) -> Result<Self> {
        Self::radial(n, move |r| height * unit_bump(r / radius), 0.0, radius)
    }

    /// Gaussian `exp(-|x|²/width²)` cut off smoothly by the bump on `B(0, a)`.
    pub fn gaussian_bump(n: Dimension, radius: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidParameter(format!("width {width}")));
        }
        Self::radial(
            n,
            move |r| (-(r * r) / (width * width)).exp() * unit_bump(r / radius),
            0.0,
            radius,
        )
    }

    pub fn dim(&self) -> Dimension {
        self.n
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        if r >= self.support_radius {
            return 0.0;
        }
        match &self.shape {
            Shape::Radial { profile, inner } => {
                if r <= *inner {
                    0.0
                } else {
                    profile(r)
                }
            }
            Shape::General(p) => p(x),
        }
    }

    /// Weighted nodes for `∫ g(z) t(z) dz`: spherical coordinates about the
    /// origin, `6L` radial Gauss points over the support (or shell).
    pub fn stencil(&self, level: usize) -> Result<Stencil> {
        if level < 1 {
            return Err(Error::InvalidLevel(level));
        }
        self.stencil_with(Directions::product(self.n.get(), level), level)
    }

    /// As [`TestFunction::stencil`], with the direction set's polar axis
    /// along `axis`.
    pub fn stencil_oriented(&self, level: usize, axis: &[f64]) -> Result<Stencil> {
        if level < 1 {
            return Err(Error::InvalidLevel(level));
        }
        self.n.check_point(axis)?;
        if norm(axis) == 0.0 {
            return Err(Error::InvalidParameter("orientation axis must be nonzero".into()));
        }
        self.stencil_with(Directions::product(self.n.get(), level).with_polar_direction(axis), level)
    }

    fn stencil_with(&self, dirs: Directions, level: usize) -> Result<Stencil> {
        let dim = self.n.get();
        let inner = match &self.shape {
            Shape::Radial { inner, .. } => *inner,
            Shape::General(_) => 0.0,
        };
        let (gx, gw) = gauss_legendre(RADIAL_POINTS_PER_LEVEL * level);
        let half = 0.5 * (self.support_radius - inner);
        let mid = 0.5 * (self.support_radius + inner);
        let mut offsets = Vec::with_capacity(dirs.len() * gx.len() * dim);
        let mut weights = Vec::with_capacity(dirs.len() * gx.len());
        for (u, wu) in dirs.iter() {
            for (t, w) in gx.iter().zip(&gw) {
                let s = mid + half * t;
                let start = offsets.len();
                offsets.extend(u.iter().map(|c| s * c));
                let value = match &self.shape {
                    Shape::Radial { profile, .. } => profile(s),
                    Shape::General(p) => p(&offsets[start..]),
                };
                weights.push(wu * half * w * s.powi(dim as i32 - 1) * value);
            }
        }
        Ok(Stencil { dim, offsets, weights })
    }

    /// `∫ t` at the given level.
    pub fn mass(&self, level: usize) -> Result<f64> {
        Ok(self.stencil(level)?.mass())
    }
}

/// A discretized test function: `(t ∗ g)(x) ≈ Σ_j w_j g(x - z_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    dim: usize,
    offsets: Vec<f64>,
    weights: Vec<f64>,
}

impl Stencil {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn offset(&self, j: usize) -> &[f64] {
        &self.offsets[j * self.dim..(j + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mass(&self) -> f64 {
        par::sum_slice(&self.weights)
    }

    #[inline]
    fn term<U: ScalarField + ?Sized>(&self, u: &U, x: &[f64], j: usize, buf: &mut [f64]) -> f64 {
        for ((b, xi), zi) in buf.iter_mut().zip(x).zip(self.offset(j)) {
            *b = xi - zi;
        }
        self.weights[j] * u.eval(buf)
    }

    /// `Σ_j w_j u(x - z_j)`, parallel over nodes.
    pub fn apply<U: ScalarField + ?Sized>(&self, u: &U, x: &[f64]) -> f64 {
        par::sum_by(self.len(), |j| {
            let mut buf: SmallVec<[f64; 8]> = SmallVec::from_elem(0.0, self.dim);
            self.term(u, x, j, &mut buf)
        })
    }

    /// Same sum evaluated on the calling thread.
    pub fn apply_seq<U: ScalarField + ?Sized>(&self, u: &U, x: &[f64]) -> f64 {
        let mut stack = [0.0; 8];
        let mut heap = Vec::new();
        let buf = if self.dim <= 8 {
            &mut stack[..self.dim]
        } else {
            heap.resize(self.dim, 0.0);
            &mut heap[..]
        };
        let mut acc = CompensatedSum::new();
        for j in 0..self.len() {
            acc.add(self.term(u, x, j, buf));
        }
        acc.value()
    }
}

/// The field `x ↦ (t ∗ inner)(x)` for a discretized test function `t`.
#[derive(Debug, Clone)]
pub struct Convolved<U> {
    inner: U,
    stencil: Arc<Stencil>,
}

impl<U: ScalarField> Convolved<U> {
    pub fn new(inner: U, stencil: Arc<Stencil>) -> Self {
        Self { inner, stencil }
    }

    pub fn stencil(&self) -> &Stencil {
        &self.stencil
    }

    /// Evaluation with the stencil sum spread over threads.
    pub fn eval_parallel(&self, x: &[f64]) -> f64 {
        self.stencil.apply(&self.inner, x)
    }
}

impl<U: ScalarField> ScalarField for Convolved<U> {
    fn eval(&self, x: &[f64]) -> f64 {
        self.stencil.apply_seq(&self.inner, x)
    }

    fn bound(&self) -> Option<f64> {
        let w: f64 = self.stencil.weights.iter().map(|w| w.abs()).sum();
        self.inner.bound().map(|b| b * w)
    }
}

/// `u_ε = ω_ε ∗ u`, evaluated by quadrature over `B(x, ε)`.
pub fn mollify<U: ScalarField>(u: U, m: &Mollifier, level: usize) -> Result<Convolved<U>> {
    Ok(Convolved::new(u, Arc::new(m.test_function().stencil(level)?)))
}

/// `(u ∗ t)(x) = ∫ u(y) t(x - y) dy`.
pub fn convolve_test<U: ScalarField + ?Sized>(u: &U, t: &TestFunction, x: &[f64], level: usize) -> Result<f64> {
    t.n.check_point(x)?;
    Ok(t.stencil(level)?.apply(u, x))
}

/// `κ(ε, ω) = ∫ ω_ε(ξ) cos(ω · ξ) dξ`, so that `ω_ε ∗ cos(ω·x + θ) = κ cos(ω·x + θ)`.
pub fn mollifier_multiplier(m: &Mollifier, frequency: &[f64], level: usize) -> Result<f64> {
    m.n.check_point(frequency)?;
    let s = m.test_function().stencil(level)?;
    Ok(par::sum_by(s.len(), |j| s.weights[j] * dot(frequency, s.offset(j)).cos()))
}

/// `ω_ε ∗ p` for a trig polynomial, as a trig polynomial (amplitudes scaled by κ).
pub fn mollify_trig(p: &TrigPolynomial, m: &Mollifier, level: usize) -> Result<TrigPolynomial> {
    let stencil = m.test_function().stencil(level)?;
    Ok(p.map_amplitudes(|mode| {
        let kappa = par::sum_by(stencil.len(), |j| {
            stencil.weights[j] * dot(&mode.frequency, stencil.offset(j)).cos()
        });
        mode.amplitude * kappa
    }))
}

/// `max |(u ∗ t)(x)|` over the lattice.
pub fn bounded_generalized_sup<U: ScalarField + ?Sized>(
    u: &U,
    t: &TestFunction,
    bx: &LatticeBox,
    level: usize,
) -> Result<f64> {
    if bx.dim != t.n.get() {
        return Err(Error::DimensionMismatch {
            expected: t.n.get(),
            got: bx.dim,
        });
    }
    let s = t.stencil(level)?;
    Ok(par::max_by(bx.len(), |j| {
        let mut x: SmallVec<[f64; 8]> = SmallVec::from_elem(0.0, bx.dim);
        bx.point(j, &mut x);
        s.apply_seq(u, &x).abs()
    }))
}

/// Both sides of `|a^m - b^m| <= (m/2) |1/b - 1/a| (a^(m+1) + b^(m+1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Relative slack allowed when comparing the two sides.
pub const POWER_SLACK: f64 = 1e-12;

/// Evaluates both sides. The comparison divides out the common factor
/// `|a - b|`, so it is not spoiled by cancellation when `a ≈ b`.
pub fn check_power_inequality(a: f64, b: f64, m: u32) -> Result<PowerInequality> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("a = {a}, b = {b} must be positive")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let mi = m as i32;
    let mf = m as f64;
    let lhs = (a.powi(mi) - b.powi(mi)).abs();
    let rhs = 0.5 * mf * (1.0 / b - 1.0 / a).abs() * (a.powi(mi + 1) + b.powi(mi + 1));
    // a^m - b^m = (a - b) Σ a^(m-1-k) b^k and |1/b - 1/a| = |a - b| / (ab)
    let reduced_lhs: f64 = (0..mi).map(|k| a.powi(mi - 1 - k) * b.powi(k)).sum();
    let reduced_rhs = 0.5 * mf * (a.powi(mi + 1) + b.powi(mi + 1)) / (a * b);
    let holds = reduced_lhs <= reduced_rhs * (1.0 + POWER_SLACK);
    Ok(PowerInequality { lhs, rhs, holds })
}

/// `|∫ φ (u ∗ ψ) - ∫ ψ (u ∗ φ)|` by nested quadrature. Both test functions
/// must be symmetric.
///
/// The right-hand side uses direction sets tilted away from the coordinate
/// axes. With the same point-symmetric nodes on both sides the two sums
/// would agree term by term, so the residual would say nothing about the
/// quadrature.
pub fn fubini_residual<U: ScalarField + ?Sized>(
    u: &U,
    phi: &TestFunction,
    psi: &TestFunction,
    level: usize,
) -> Result<f64> {
    if !phi.symmetric || !psi.symmetric {
        return Err(Error::AsymmetricTestFunction);
    }
    if phi.n != psi.n {
        return Err(Error::DimensionMismatch {
            expected: phi.n.get(),
            got: psi.n.get(),
        });
    }
    let tilt = tilted_axis(phi.n.get());
    let pair = |outer: &Stencil, inner: &Stencil| {
        par::sum_by(outer.len(), |j| outer.weights[j] * inner.apply_seq(u, outer.offset(j)))
    };
    let lhs = pair(&phi.stencil(level)?, &psi.stencil(level)?);
    let rhs = pair(&psi.stencil_oriented(level, &tilt)?, &phi.stencil_oriented(level, &tilt)?);
    Ok((lhs - rhs).abs())
}

fn tilted_axis(dim: usize) -> Vec<f64> {
    (0..dim).map(|k| ((k + 2) as f64).sqrt()).collect()
}
