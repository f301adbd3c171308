//! Spherical coordinates about an interior point of a ball.
//!
//! Integrating along rays from the point `p` puts the Jacobian `s^(n-1)` in
//! front of the integrand, which cancels singularities `|y - p|^(-k)` for
//! `k <= n - 1`. Each ray is truncated where it leaves the (possibly
//! off-centre) ball.

use super::directions::{split_at_sign_changes, Directions};
use super::gauss::gauss_legendre;
use crate::error::{Error, Result};
use crate::geometry::{dist, dot, norm_sq};
use crate::par::{self, CompensatedSum};

/// How each ray `[0, reach]` is split into Gauss panels.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialScheme {
    /// Gauss–Legendre points per panel.
    pub points: usize,
    /// Distances from the ray origin where panels break; values beyond the
    /// reach of a ray are ignored.
    pub breaks: Vec<f64>,
    /// Interior samples per panel used to detect sign changes (0 disables).
    pub probes: usize,
}

impl RadialScheme {
    pub fn single(points: usize) -> Self {
        Self {
            points,
            breaks: Vec::new(),
            probes: 0,
        }
    }

    /// Panels `[0, s0], [s0, 2 s0], [2 s0, 4 s0], …`.
    pub fn geometric(points: usize, first: f64, limit: f64) -> Self {
        let mut breaks = Vec::new();
        let mut s = first;
        while s < limit {
            breaks.push(s);
            s *= 2.0;
        }
        Self {
            points,
            breaks,
            probes: 0,
        }
    }

    pub fn with_probes(mut self, probes: usize) -> Self {
        self.probes = probes;
        self
    }

    fn panels_for<F: FnMut(f64) -> f64>(&self, reach: f64, sign: Option<&mut F>) -> Vec<(f64, f64)> {
        let mut b = Vec::with_capacity(self.breaks.len() + 2);
        b.push(0.0);
        b.extend(self.breaks.iter().copied().filter(|&s| s > 0.0 && s < reach));
        b.push(reach);
        match sign {
            Some(f) if self.probes > 0 => split_at_sign_changes(&b, self.probes, f),
            _ => b.windows(2).map(|p| (p[0], p[1])).collect(),
        }
    }
}

/// Rays from `origin` covering the ball `B(center, radius)`.
#[derive(Debug, Clone)]
pub struct RayFan {
    origin: Vec<f64>,
    dirs: Directions,
    reach: Vec<f64>,
}

impl RayFan {
    /// `origin` must lie strictly inside the ball.
    pub fn new(origin: &[f64], center: &[f64], radius: f64, dirs: Directions) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidRadius(radius));
        }
        if dist(origin, center) >= radius {
            return Err(Error::OutsideDomain(format!(
                "ray origin {origin:?} is not strictly inside B({center:?}, {radius})"
            )));
        }
        let d: Vec<f64> = origin.iter().zip(center).map(|(o, c)| o - c).collect();
        let dd = norm_sq(&d);
        let reach = dirs
            .iter()
            .map(|(u, _)| {
                // |d + s u| = R  =>  s = -d·u + sqrt((d·u)² - |d|² + R²)
                let du = dot(&d, u);
                let disc = du * du - dd + radius * radius;
                -du + disc.max(0.0).sqrt()
            })
            .collect();
        Ok(Self {
            origin: origin.to_vec(),
            dirs,
            reach,
        })
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn directions(&self) -> &Directions {
        &self.dirs
    }

    /// Distance from the origin to the boundary along each ray.
    pub fn reach(&self) -> &[f64] {
        &self.reach
    }

    /// Node/weight pairs `(y, w)` of the rule, in fixed order.
    pub fn nodes(&self, scheme: &RadialScheme) -> (Vec<f64>, Vec<f64>) {
        let n = self.origin.len();
        let (gx, gw) = gauss_legendre(scheme.points);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (k, (u, wu)) in self.dirs.iter().enumerate() {
            let panels = scheme.panels_for::<fn(f64) -> f64>(self.reach[k], None);
            for (a, b) in panels {
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                for (t, w) in gx.iter().zip(&gw) {
                    let s = mid + half * t;
                    nodes.extend(self.origin.iter().zip(u).map(|(o, ui)| o + s * ui));
                    weights.push(wu * half * w * s.powi(n as i32 - 1));
                }
            }
        }
        (nodes, weights)
    }

    /// `∫_{ball} f(y) dy`.
    pub fn integrate<F>(&self, scheme: &RadialScheme, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync + Send,
    {
        self.integrate_split(scheme, |_| 1.0, f)
    }

    /// `∫_{ball} |signed(y)| · factor(y) dy`, with ray panels split at the sign
    /// changes of `signed` (enable probing in `scheme`).
    pub fn integrate_abs<S, W>(&self, scheme: &RadialScheme, signed: S, factor: W) -> f64
    where
        S: Fn(&[f64]) -> f64 + Sync + Send,
        W: Fn(&[f64]) -> f64 + Sync + Send,
    {
        self.integrate_split(scheme, &signed, |y| signed(y).abs() * factor(y))
    }

    fn integrate_split<S, F>(&self, scheme: &RadialScheme, sign_of: S, f: F) -> f64
    where
        S: Fn(&[f64]) -> f64 + Sync + Send,
        F: Fn(&[f64]) -> f64 + Sync + Send,
    {
        let n = self.origin.len();
        let (gx, gw) = gauss_legendre(scheme.points);
        par::sum_by(self.dirs.len(), |k| {
            let u = self.dirs.dir(k);
            let mut y = vec![0.0; n];
            let origin = &self.origin;
            let at = |s: f64, y: &mut [f64]| {
                for ((yi, o), ui) in y.iter_mut().zip(origin).zip(u) {
                    *yi = o + s * ui;
                }
            };
            let mut probe_buf = vec![0.0; n];
            let mut sign = |s: f64| {
                at(s, &mut probe_buf);
                sign_of(&probe_buf)
            };
            let panels = scheme.panels_for(self.reach[k], Some(&mut sign));
            let mut acc = CompensatedSum::new();
            for (a, b) in panels {
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                for (t, w) in gx.iter().zip(&gw) {
                    let s = mid + half * t;
                    at(s, &mut y);
                    acc.add(half * w * s.powi(n as i32 - 1) * f(&y));
                }
            }
            self.dirs.weight(k) * acc.value()
        })
    }
}
