//! Quadrature over spheres, balls and radial intervals.
//!
//! Level semantics: a rule at level `L` uses `L` Gauss points per radial
//! panel, `L` Gauss nodes in `cos φ` for every polar angle and `2L`
//! equispaced azimuths.

mod adaptive;
mod directions;
mod gauss;
mod rays;

pub use adaptive::adaptive_integrate;
pub use directions::{graded_polar_breaks, Directions, MeridianFan};
pub use gauss::{gauss_legendre, polar_rule, LineRule};
pub use rays::{RadialScheme, RayFan};

use crate::error::{Error, Result};
use crate::geometry::{dist, norm, Dimension, Point};
use crate::par;

fn check_level(level: usize) -> Result<()> {
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    Ok(())
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidRadius(radius));
    }
    Ok(())
}

/// Weighted nodes on a sphere; weights carry surface measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub center: Point,
    pub radius: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Weighted nodes in a ball; weights carry volume measure.
#[derive(Debug, Clone, PartialEq)]
pub struct BallRule {
    pub center: Point,
    pub radius: f64,
    /// Point where a weakly singular integrand is tolerated; never a node.
    pub singular_at: Option<Point>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

macro_rules! node_rule_impl {
    ($ty:ty) => {
        impl $ty {
            pub fn dim(&self) -> usize {
                self.center.len()
            }

            pub fn len(&self) -> usize {
                self.weights.len()
            }

            pub fn is_empty(&self) -> bool {
                self.weights.is_empty()
            }

            #[inline]
            pub fn node(&self, i: usize) -> &[f64] {
                let n = self.dim();
                &self.nodes[i * n..(i + 1) * n]
            }

            pub fn weights(&self) -> &[f64] {
                &self.weights
            }

            pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
                self.nodes.chunks_exact(self.dim()).zip(self.weights.iter().copied())
            }

            pub fn total_weight(&self) -> f64 {
                par::sum_slice(&self.weights)
            }

            /// `Σ w_i f(y_i)` in node order with compensated summation.
            pub fn integrate<F>(&self, f: F) -> f64
            where
                F: Fn(&[f64]) -> f64 + Sync + Send,
            {
                par::sum_by(self.len(), |i| self.weights[i] * f(self.node(i)))
            }
        }
    };
}

node_rule_impl!(SphereRule);
node_rule_impl!(BallRule);

/// Product Gauss rule on the sphere `∂B(center, radius)`.
pub fn sphere_quadrature(n: Dimension, center: &[f64], radius: f64, level: usize) -> Result<SphereRule> {
    n.check_point(center)?;
    check_level(level)?;
    check_radius(radius)?;
    let dirs = Directions::product(n.get(), level);
    Ok(sphere_from_directions(center, radius, &dirs))
}

/// Sphere rule whose polar axis points at `focus` (an interior point) with the
/// polar angle graded toward it, for integrands peaked like the Poisson kernel.
///
/// Falls back to the product rule when `focus` is the centre.
pub fn focused_sphere_quadrature(
    n: Dimension,
    center: &[f64],
    radius: f64,
    focus: &[f64],
    level: usize,
) -> Result<SphereRule> {
    n.check_point(center)?;
    n.check_point(focus)?;
    check_level(level)?;
    check_radius(radius)?;
    let rel: Vec<f64> = focus.iter().zip(center).map(|(f, c)| f - c).collect();
    let r = norm(&rel);
    if r >= radius {
        return Err(Error::OutsideDomain(format!(
            "focus {focus:?} is not inside the sphere"
        )));
    }
    if r == 0.0 {
        return sphere_quadrature(n, center, radius, level);
    }
    let gap = (radius - r) / radius;
    let breaks = graded_polar_breaks(gap);
    let dirs = Directions::meridian(n.get(), &rel, &breaks, level, level);
    Ok(sphere_from_directions(center, radius, &dirs))
}

fn sphere_from_directions(center: &[f64], radius: f64, dirs: &Directions) -> SphereRule {
    let n = center.len();
    let scale = radius.powi(n as i32 - 1);
    let mut nodes = Vec::with_capacity(dirs.len() * n);
    for (u, _) in dirs.iter() {
        nodes.extend(center.iter().zip(u).map(|(c, ui)| c + radius * ui));
    }
    SphereRule {
        center: Point::from(center),
        radius,
        nodes,
        weights: dirs.weights().iter().map(|w| w * scale).collect(),
    }
}

/// Radial Gauss rule (with the `r^(n-1)` Jacobian) tensored with the sphere rule.
pub fn ball_quadrature(n: Dimension, center: &[f64], radius: f64, level: usize) -> Result<BallRule> {
    n.check_point(center)?;
    check_level(level)?;
    check_radius(radius)?;
    let fan = RayFan::new(center, center, radius, Directions::product(n.get(), level))?;
    let (nodes, weights) = fan.nodes(&RadialScheme::single(level));
    Ok(BallRule {
        center: Point::from(center),
        radius,
        singular_at: None,
        nodes,
        weights,
    })
}

/// Ball rule in spherical coordinates about `singularity`, so that integrands
/// with a `|y - p|^(1-n)` or milder singularity at `p` become smooth along rays.
pub fn singular_ball_quadrature(
    n: Dimension,
    domain_center: &[f64],
    radius: f64,
    singularity: &[f64],
    level: usize,
) -> Result<BallRule> {
    n.check_point(domain_center)?;
    n.check_point(singularity)?;
    check_level(level)?;
    check_radius(radius)?;
    if dist(domain_center, singularity) >= radius {
        return Err(Error::OutsideDomain(format!(
            "singularity {singularity:?} must lie strictly inside the ball"
        )));
    }
    let fan = RayFan::new(
        singularity,
        domain_center,
        radius,
        Directions::product(n.get(), level),
    )?;
    let (nodes, weights) = fan.nodes(&RadialScheme::single(level));
    Ok(BallRule {
        center: Point::from(domain_center),
        radius,
        singular_at: Some(Point::from(singularity)),
        nodes,
        weights,
    })
}
