//! Desk-scale almost-periodicity diagnostics.
//!
//! The supremum over R^n is replaced by a maximum over a uniform lattice on
//! `[-L, L]^n`, so every defect reported here is a lower bound for the true one.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::fields::{ScalarField, TrigPolynomial};
use crate::geometry::{norm_sq, Dimension};
use crate::par;

/// Uniform sampling lattice with `grid_per_axis` points per axis on `[-L, L]^dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeBox {
    pub dim: usize,
    pub half_width: f64,
    pub grid_per_axis: usize,
}

impl LatticeBox {
    pub fn new(n: Dimension, half_width: f64, grid_per_axis: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!("box half-width {half_width}")));
        }
        if grid_per_axis < 2 {
            return Err(Error::InvalidParameter(format!("grid_per_axis {grid_per_axis} < 2")));
        }
        let total = (grid_per_axis as u128).pow(n.get() as u32);
        if total > u64::MAX as u128 / 4 {
            return Err(Error::InvalidParameter("lattice too large".into()));
        }
        Ok(Self {
            dim: n.get(),
            half_width,
            grid_per_axis,
        })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.grid_per_axis - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.grid_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lattice point `index` (row-major, last axis fastest).
    #[inline]
    pub fn point(&self, mut index: usize, out: &mut [f64]) {
        let h = self.spacing();
        for c in out.iter_mut().rev() {
            *c = -self.half_width + h * (index % self.grid_per_axis) as f64;
            index /= self.grid_per_axis;
        }
    }

    /// A stride coprime to `len`, so `j ↦ j·stride mod len` visits every point
    /// once while spreading early samples over the whole box.
    fn scatter_stride(&self) -> usize {
        let len = self.len() as u64;
        if len <= 2 {
            return 1;
        }
        let mut s = ((len as f64) * 0.618_033_988_749_895) as u64;
        s = s.max(1);
        while gcd(s, len) != 1 {
            s += 1;
        }
        s as usize
    }

    #[inline]
    fn scattered(&self, j: usize, stride: usize) -> usize {
        ((j as u64 * stride as u64) % self.len() as u64) as usize
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
fn shift_gap<U: ScalarField + ?Sized>(u: &U, bx: &LatticeBox, shift: &[f64], index: usize) -> f64 {
    let mut x: SmallVec<[f64; 8]> = SmallVec::from_elem(0.0, bx.dim);
    bx.point(index, &mut x);
    let base = u.eval(&x);
    for (xi, ti) in x.iter_mut().zip(shift) {
        *xi += ti;
    }
    (u.eval(&x) - base).abs()
}

/// `max |u(x + T) - u(x)|` over the lattice.
pub fn almost_period_defect<U: ScalarField + ?Sized>(u: &U, shift: &[f64], bx: &LatticeBox) -> Result<f64> {
    Dimension::new(bx.dim)?.check_point(shift)?;
    Ok(par::max_by(bx.len(), |j| shift_gap(u, bx, shift, j)))
}

/// Whether some lattice point has `|u(x + T) - u(x)| >= eps`. Stops at the
/// first violation; points are visited in scattered order.
fn violates<U: ScalarField + ?Sized>(u: &U, shift: &[f64], bx: &LatticeBox, eps: f64, limit: usize) -> bool {
    let stride = bx.scatter_stride();
    let total = bx.len().min(limit);
    let head = total.min(4096);
    let bad = |j: usize| {
        let g = shift_gap(u, bx, shift, bx.scattered(j, stride));
        g >= eps || g.is_nan()
    };
    if (0..head).any(bad) {
        return true;
    }
    par::any(total - head, |j| bad(head + j))
}

/// Lattice points sampled when deciding whether the scan has left the
/// neighbourhood of `T = 0`.
const ESCAPE_SAMPLES: usize = 1 << 16;

/// Smallest `T ∈ (0, t_max]` on a grid of step `min(0.01, eps/10)` such that
/// `T e_axis` is an `eps`-almost-period on the lattice.
///
/// Every continuous field has tiny shifts with small defect, so the scan first
/// waits until the defect has reached `eps` (judged on a scattered subsample
/// of the lattice) and only then accepts candidates, each verified on the
/// full lattice.
pub fn find_almost_period<U: ScalarField + ?Sized>(
    u: &U,
    eps: f64,
    axis: usize,
    t_max: f64,
    bx: &LatticeBox,
) -> Result<Option<f64>> {
    let n = Dimension::new(bx.dim)?;
    n.check_axis(axis)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon {eps}")));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_max {t_max}")));
    }
    let step = (eps / 10.0).min(0.01);
    let steps = (t_max / step * (1.0 + 1e-12)).floor() as usize;
    let mut shift = vec![0.0; bx.dim];
    let mut escaped = false;
    for k in 1..=steps {
        let t = k as f64 * step;
        shift[axis] = t;
        if !escaped {
            escaped = violates(u, &shift, bx, eps, ESCAPE_SAMPLES);
            continue;
        }
        if !violates(u, &shift, bx, eps, usize::MAX) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Per-mode factors bounding how a defect of `f` transfers to its Poisson
/// inverse and to the inverse's `axis` derivative: `(max 1/|ω|², max |ω_i|/|ω|²)`.
pub fn transfer_factors(f: &TrigPolynomial, axis: usize) -> Result<(f64, f64)> {
    Dimension::new(f.dim())?.check_axis(axis)?;
    let mut value = 0.0f64;
    let mut deriv = 0.0f64;
    for (k, m) in f.modes().iter().enumerate() {
        let w2 = norm_sq(&m.frequency);
        if w2 == 0.0 {
            return Err(Error::ZeroFrequency(k));
        }
        value = value.max(1.0 / w2);
        deriv = deriv.max(m.frequency[axis].abs() / w2);
    }
    Ok((value, deriv))
}
