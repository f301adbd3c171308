//! Direction sets on the unit sphere `S^(n-1)`.

use std::f64::consts::PI;

use super::gauss::{polar_rule, LineRule};
use crate::geometry::{norm, Frame};
use crate::par::{self, CompensatedSum};

/// Weighted unit directions approximating surface measure on `S^(dim-1)`.
///
/// Nodes are stored flat with stride `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Directions {
    dim: usize,
    dirs: Vec<f64>,
    weights: Vec<f64>,
}

impl Directions {
    /// Product rule at `level`: `2L` equispaced azimuths and `L` Gauss nodes in
    /// `cos φ` for each polar angle, weighted by its `sin^k φ` Jacobian factor.
    ///
    /// The rule is symmetric under `y ↦ -y`.
    pub fn product(dim: usize, level: usize) -> Self {
        assert!(dim >= 2 && level >= 1);
        if dim == 2 {
            let m = 2 * level;
            let h = PI / level as f64;
            let mut dirs = Vec::with_capacity(2 * m);
            for j in 0..m {
                let th = (j as f64 + 0.5) * h;
                dirs.push(th.cos());
                dirs.push(th.sin());
            }
            return Self {
                dim,
                dirs,
                weights: vec![h; m],
            };
        }
        let (t, wt) = polar_rule(dim - 2, level);
        let sub = Self::product(dim - 1, level);
        let mut dirs = Vec::with_capacity(t.len() * sub.len() * dim);
        let mut weights = Vec::with_capacity(t.len() * sub.len());
        for (ti, wi) in t.iter().zip(&wt) {
            let s = (1.0 - ti * ti).max(0.0).sqrt();
            for (z, wz) in sub.iter() {
                dirs.push(*ti);
                dirs.extend(z.iter().map(|c| s * c));
                weights.push(wi * wz);
            }
        }
        Self { dim, dirs, weights }
    }

    /// Rule with its polar axis along `axis` and the polar angle integrated by
    /// composite Gauss–Legendre on the panels `breaks` (angles in `[0, π]`).
    pub fn meridian(dim: usize, axis: &[f64], breaks: &[f64], points: usize, level: usize) -> Self {
        let fan = MeridianFan::new(dim, axis, level);
        let polar = LineRule::composite(breaks, points);
        let mut dirs = Vec::with_capacity(polar.len() * fan.sub.len() * dim);
        let mut weights = Vec::with_capacity(polar.len() * fan.sub.len());
        let mut local = vec![0.0; dim];
        let mut out = vec![0.0; dim];
        for (phi, wp) in polar.nodes.iter().zip(&polar.weights) {
            let jac = phi.sin().powi(dim as i32 - 2);
            for (z, wz) in fan.sub.iter() {
                fan.direction(*phi, z, &mut local, &mut out);
                dirs.extend_from_slice(&out);
                weights.push(wp * jac * wz);
            }
        }
        Self { dim, dirs, weights }
    }

    /// The same rule with coordinates 0 and `axis` swapped, so the product
    /// rule's polar axis becomes `e_axis`.
    pub fn with_polar_axis(mut self, axis: usize) -> Self {
        assert!(axis < self.dim);
        if axis != 0 {
            for chunk in self.dirs.chunks_exact_mut(self.dim) {
                chunk.swap(0, axis);
            }
        }
        self
    }

    /// The same rule reflected so that its polar axis points along `axis`.
    pub fn with_polar_direction(mut self, axis: &[f64]) -> Self {
        assert_eq!(axis.len(), self.dim);
        let a = norm(axis);
        assert!(a > 0.0);
        let unit: Vec<f64> = axis.iter().map(|c| c / a).collect();
        let frame = Frame::aligned_with(&unit);
        let mut out = vec![0.0; self.dim];
        for chunk in self.dirs.chunks_exact_mut(self.dim) {
            frame.apply(chunk, &mut out);
            chunk.copy_from_slice(&out);
        }
        self
    }

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
    pub fn dir(&self, i: usize) -> &[f64] {
        &self.dirs[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], &f64)> {
        self.dirs.chunks_exact(self.dim).zip(&self.weights)
    }
}

/// Polar angle breakpoints clustered toward `φ = 0` at angular scale `gap`.
pub fn graded_polar_breaks(gap: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut phi = (gap / 4.0).max(1e-6);
    while phi < PI {
        breaks.push(phi);
        phi *= 2.0;
    }
    breaks.push(PI);
    breaks
}

/// The sphere seen as meridians `φ ∈ [0, π]` about an axis, one per node of a
/// lower-dimensional product rule. Used when the integrand needs per-meridian
/// treatment (graded panels, sign-change splitting).
#[derive(Debug, Clone)]
pub struct MeridianFan {
    dim: usize,
    frame: Frame,
    sub: Directions,
}

impl MeridianFan {
    pub fn new(dim: usize, axis: &[f64], level: usize) -> Self {
        assert!(dim >= 3);
        let len = norm(axis);
        let unit: Vec<f64> = axis.iter().map(|a| a / len).collect();
        Self {
            dim,
            frame: Frame::aligned_with(&unit),
            sub: Directions::product(dim - 1, level),
        }
    }

    #[inline]
    fn direction(&self, phi: f64, z: &[f64], local: &mut [f64], out: &mut [f64]) {
        let (s, c) = phi.sin_cos();
        local[0] = c;
        for (l, zi) in local[1..].iter_mut().zip(z) {
            *l = s * zi;
        }
        self.frame.apply(local, out);
    }

    /// `∫_{S^(n-1)} g(y) dS` where `g` is evaluated on unit directions.
    ///
    /// Each meridian is integrated with `points`-point Gauss panels on `breaks`;
    /// with `probes > 0`, `g` is sampled `probes` times per panel and panels are
    /// split at sign changes of `sign_of` so kinks of `|·|`-type integrands sit on
    /// panel boundaries.
    pub fn integrate<G, S>(&self, breaks: &[f64], points: usize, probes: usize, sign_of: S, g: G) -> f64
    where
        G: Fn(&[f64]) -> f64 + Sync + Send,
        S: Fn(&[f64]) -> f64 + Sync + Send,
    {
        let dim = self.dim;
        let (gx, gw) = super::gauss::gauss_legendre(points);
        par::sum_by(self.sub.len(), |k| {
            let z = self.sub.dir(k);
            let mut local = vec![0.0; dim];
            let mut y = vec![0.0; dim];
            let mut eval_sign = |phi: f64| {
                self.direction(phi, z, &mut local, &mut y);
                sign_of(&y)
            };
            let panels = split_at_sign_changes(breaks, probes, &mut eval_sign);
            let mut acc = CompensatedSum::new();
            for (a, b) in panels {
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                for (t, w) in gx.iter().zip(&gw) {
                    let phi = mid + half * t;
                    self.direction(phi, z, &mut local, &mut y);
                    acc.add(half * w * phi.sin().powi(dim as i32 - 2) * g(&y));
                }
            }
            self.sub.weight(k) * acc.value()
        })
    }
}

/// Refines the panels `breaks` by locating sign changes of `f` sampled at
/// `probes` interior points per panel. Roots are bisected to full precision.
pub(crate) fn split_at_sign_changes<F: FnMut(f64) -> f64>(
    breaks: &[f64],
    probes: usize,
    f: &mut F,
) -> Vec<(f64, f64)> {
    let mut panels = Vec::with_capacity(breaks.len());
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        if probes == 0 {
            panels.push((a, b));
            continue;
        }
        let step = (b - a) / probes as f64;
        let mut start = a;
        let mut prev_s = a + 0.5 * step;
        let mut prev_v = f(prev_s);
        for k in 1..probes {
            let s = a + (k as f64 + 0.5) * step;
            let v = f(s);
            if prev_v != 0.0 && v != 0.0 && (prev_v < 0.0) != (v < 0.0) {
                let root = bisect(f, prev_s, s, prev_v);
                if root > start && root < b {
                    panels.push((start, root));
                    start = root;
                }
            }
            prev_s = s;
            prev_v = v;
        }
        panels.push((start, b));
    }
    panels
}

fn bisect<F: FnMut(f64) -> f64>(f: &mut F, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let lo_neg = f_lo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
