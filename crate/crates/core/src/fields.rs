//! Scalar fields on R^n, with exact calculus where it is available.

use std::sync::Arc;


use crate::error::{Error, Result};
use crate::geometry::{dot, norm_sq, Dimension};

/// A real field on R^n.
///
/// `eval` must be total on finite points. Exact derivatives are optional; a
/// field that cannot supply them returns `None`.
pub trait ScalarField: Send + Sync {
    fn eval(&self, x: &[f64]) -> f64;

    fn gradient(&self, _x: &[f64], _axis: usize) -> Option<f64> {
        None
    }

    fn laplacian(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    /// A bound on `sup |u|`, if known.
    fn bound(&self) -> Option<f64> {
        None
    }
}

macro_rules! forward_field {
    ($($ty:ty),*) => {$(
        impl<T: ScalarField + ?Sized> ScalarField for $ty {
            fn eval(&self, x: &[f64]) -> f64 {
                (**self).eval(x)
            }
            fn gradient(&self, x: &[f64], axis: usize) -> Option<f64> {
                (**self).gradient(x, axis)
            }
            fn laplacian(&self, x: &[f64]) -> Option<f64> {
                (**self).laplacian(x)
            }
            fn bound(&self) -> Option<f64> {
                (**self).bound()
            }
        }
    )*};
}

forward_field!(&T, Box<T>, Arc<T>);

/// One term `amplitude · cos(frequency · x + phase)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigMode {
    pub amplitude: f64,
    pub frequency: Vec<f64>,
    pub phase: f64,
}

impl TrigMode {
    pub fn new(amplitude: f64, frequency: impl Into<Vec<f64>>, phase: f64) -> Self {
        Self {
            amplitude,
            frequency: frequency.into(),
            phase,
        }
    }

    #[inline]
    fn arg(&self, x: &[f64]) -> f64 {
        dot(&self.frequency, x) + self.phase
    }
}

/// Finite sum of cosine modes.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    modes: Vec<TrigMode>,
}

impl TrigPolynomial {
    pub fn new(n: Dimension, modes: Vec<TrigMode>) -> Result<Self> {
        for m in &modes {
            n.check_point(&m.frequency)?;
            if !(m.amplitude.is_finite() && m.phase.is_finite() && m.frequency.iter().all(|w| w.is_finite())) {
                return Err(Error::InvalidParameter("trig mode with non-finite data".into()));
            }
        }
        Ok(Self { dim: n.get(), modes })
    }

    /// `amplitude · cos(frequency · x)` as a one-mode polynomial.
    pub fn cosine(n: Dimension, amplitude: f64, frequency: &[f64]) -> Result<Self> {
        Self::new(n, vec![TrigMode::new(amplitude, frequency, 0.0)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> &[TrigMode] {
        &self.modes
    }

    /// `∂/∂x_axis` as another trig polynomial: `-a ω_i sin(θ) = a ω_i cos(θ + π/2)`.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        Dimension::new(self.dim)?.check_axis(axis)?;
        let modes = self
            .modes
            .iter()
            .map(|m| TrigMode::new(m.amplitude * m.frequency[axis], m.frequency.clone(), m.phase + std::f64::consts::FRAC_PI_2))
            .collect();
        Ok(Self { dim: self.dim, modes })
    }

    /// The bounded solution of `-Δu = self`: each amplitude divided by `|ω|²`.
    pub fn exact_poisson_inverse(&self) -> Result<Self> {
        let mut modes = Vec::with_capacity(self.modes.len());
        for (k, m) in self.modes.iter().enumerate() {
            let w2 = norm_sq(&m.frequency);
            if w2 == 0.0 {
                return Err(Error::ZeroFrequency(k));
            }
            modes.push(TrigMode::new(m.amplitude / w2, m.frequency.clone(), m.phase));
        }
        Ok(Self { dim: self.dim, modes })
    }

    /// `x ↦ self(x + x0)`, folded into the phases.
    pub fn translated(&self, x0: &[f64]) -> Result<Self> {
        Dimension::new(self.dim)?.check_point(x0)?;
        let modes = self
            .modes
            .iter()
            .map(|m| TrigMode::new(m.amplitude, m.frequency.clone(), m.phase + dot(&m.frequency, x0)))
            .collect();
        Ok(Self { dim: self.dim, modes })
    }

    /// Applies a per-mode multiplier to the amplitudes.
    pub fn map_amplitudes<F: FnMut(&TrigMode) -> f64>(&self, mut f: F) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|m| TrigMode::new(f(m), m.frequency.clone(), m.phase))
            .collect();
        Self { dim: self.dim, modes }
    }
}

impl ScalarField for TrigPolynomial {
    fn eval(&self, x: &[f64]) -> f64 {
        self.modes.iter().map(|m| m.amplitude * m.arg(x).cos()).sum()
    }

    fn gradient(&self, x: &[f64], axis: usize) -> Option<f64> {
        if axis >= self.dim {
            return None;
        }
        Some(
            self.modes
                .iter()
                .map(|m| -m.amplitude * m.frequency[axis] * m.arg(x).sin())
                .sum(),
        )
    }

    fn laplacian(&self, x: &[f64]) -> Option<f64> {
        Some(
            self.modes
                .iter()
                .map(|m| -m.amplitude * norm_sq(&m.frequency) * m.arg(x).cos())
                .sum(),
        )
    }

    fn bound(&self) -> Option<f64> {
        Some(self.modes.iter().map(|m| m.amplitude.abs()).sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl ScalarField for Constant {
    fn eval(&self, _x: &[f64]) -> f64 {
        self.0
    }
    fn gradient(&self, _x: &[f64], _axis: usize) -> Option<f64> {
        Some(0.0)
    }
    fn laplacian(&self, _x: &[f64]) -> Option<f64> {
        Some(0.0)
    }
    fn bound(&self) -> Option<f64> {
        Some(self.0.abs())
    }
}

/// `offset + coeffs · x`. Harmonic and unbounded (unless constant).
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub offset: f64,
    pub coeffs: Vec<f64>,
}

impl Affine {
    pub fn new(offset: f64, coeffs: impl Into<Vec<f64>>) -> Self {
        Self {
            offset,
            coeffs: coeffs.into(),
        }
    }

    /// The coordinate function `x ↦ x_axis`.
    pub fn coordinate(n: Dimension, axis: usize) -> Result<Self> {
        n.check_axis(axis)?;
        let mut coeffs = vec![0.0; n.get()];
        coeffs[axis] = 1.0;
        Ok(Self::new(0.0, coeffs))
    }
}

impl ScalarField for Affine {
    fn eval(&self, x: &[f64]) -> f64 {
        self.offset + dot(&self.coeffs, x)
    }
    fn gradient(&self, _x: &[f64], axis: usize) -> Option<f64> {
        self.coeffs.get(axis).copied()
    }
    fn laplacian(&self, _x: &[f64]) -> Option<f64> {
        Some(0.0)
    }
    fn bound(&self) -> Option<f64> {
        self.coeffs.iter().all(|&c| c == 0.0).then_some(self.offset.abs())
    }
}

/// A closure as a field, with no exact calculus.
#[derive(Clone)]
pub struct FnField<F> {
    f: F,
    bound: Option<f64>,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnField<F> {
    pub fn new(f: F) -> Self {
        Self { f, bound: None }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> ScalarField for FnField<F> {
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
    fn bound(&self) -> Option<f64> {
        self.bound
    }
}

/// `x ↦ inner(x + shift)`.
#[derive(Debug, Clone)]
pub struct Translated<U> {
    inner: U,
    shift: Vec<f64>,
}

impl<U> Translated<U> {
    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn inner(&self) -> &U {
        &self.inner
    }
}

pub fn translate<U: ScalarField>(u: U, x0: &[f64]) -> Translated<U> {
    Translated {
        inner: u,
        shift: x0.to_vec(),
    }
}

impl<U: ScalarField> Translated<U> {
    #[inline]
    fn with_shifted<R>(&self, x: &[f64], f: impl FnOnce(&[f64]) -> R) -> R {
        let d = x.len();
        if d <= 8 {
            let mut y = [0.0; 8];
            for ((a, xi), b) in y.iter_mut().zip(x).zip(&self.shift) {
                *a = xi + b;
            }
            f(&y[..d])
        } else {
            let y: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a + b).collect();
            f(&y)
        }
    }
}

impl<U: ScalarField> ScalarField for Translated<U> {
    fn eval(&self, x: &[f64]) -> f64 {
        self.with_shifted(x, |y| self.inner.eval(y))
    }
    fn gradient(&self, x: &[f64], axis: usize) -> Option<f64> {
        self.with_shifted(x, |y| self.inner.gradient(y, axis))
    }
    fn laplacian(&self, x: &[f64]) -> Option<f64> {
        self.with_shifted(x, |y| self.inner.laplacian(y))
    }
    fn bound(&self) -> Option<f64> {
        self.inner.bound()
    }
}

/// `inner` with its value replaced at a single point; exact calculus is
/// forwarded since it is unaffected away from that point.
#[derive(Debug, Clone)]
pub struct PointOverride<U> {
    inner: U,
    point: Vec<f64>,
    value: f64,
}

impl<U: ScalarField> PointOverride<U> {
    pub fn new(inner: U, point: &[f64], value: f64) -> Self {
        Self {
            inner,
            point: point.to_vec(),
            value,
        }
    }
}

impl<U: ScalarField> ScalarField for PointOverride<U> {
    fn eval(&self, x: &[f64]) -> f64 {
        if x == self.point.as_slice() {
            self.value
        } else {
            self.inner.eval(x)
        }
    }
    fn gradient(&self, x: &[f64], axis: usize) -> Option<f64> {
        self.inner.gradient(x, axis)
    }
    fn laplacian(&self, x: &[f64]) -> Option<f64> {
        self.inner.laplacian(x)
    }
    fn bound(&self) -> Option<f64> {
        self.inner.bound().map(|b| b.max(self.value.abs()))
    }
}
