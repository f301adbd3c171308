//! One-dimensional Gauss rules.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::geometry::wallis;

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for iter in 0..100 {
            let (p, d) = legendre_with_derivative(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 * z.abs().max(1.0) || iter == 99 {
                dp = legendre_with_derivative(m, z).1;
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if m == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=m {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Rule for `∫_0^π g(cos φ) sin^k(φ) dφ`, returned as nodes `t = cos φ` and weights
/// for the weight `(1 - t²)^((k-1)/2)` on `[-1, 1]`.
///
/// `k = 1` is plain Gauss–Legendre; other powers use Golub–Welsch on the
/// Gegenbauer recurrence. The result is symmetrized so `t ↦ -t` maps nodes to nodes.
pub fn polar_rule(k: usize, m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1 && m >= 1);
    if k == 1 {
        return gauss_legendre(m);
    }
    let a = (k as f64 - 1.0) / 2.0;
    let mu0 = wallis(k);
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for j in 1..m {
        let jf = j as f64;
        let beta = jf * (jf + 2.0 * a) / (4.0 * (jf + a) * (jf + a) - 1.0);
        let b = beta.sqrt();
        jac[(j - 1, j)] = b;
        jac[(j, j - 1)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut w: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let xs = 0.5 * (x[j] - x[i]);
        let ws = 0.5 * (w[i] + w[j]);
        x[i] = -xs;
        x[j] = xs;
        w[i] = ws;
        w[j] = ws;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    (x, w)
}

/// Nodes and weights on an interval of the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LineRule {
    /// `m`-point Gauss–Legendre rule on `[a, b]`.
    pub fn gauss(a: f64, b: f64, m: usize) -> Self {
        let (x, w) = gauss_legendre(m);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Self {
            nodes: x.iter().map(|t| mid + half * t).collect(),
            weights: w.iter().map(|wi| half * wi).collect(),
        }
    }

    /// Composite Gauss–Legendre with `m` points on each panel `[breaks[j], breaks[j+1]]`.
    pub fn composite(breaks: &[f64], m: usize) -> Self {
        let (x, w) = gauss_legendre(m);
        let mut nodes = Vec::with_capacity(m * breaks.len());
        let mut weights = Vec::with_capacity(m * breaks.len());
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b <= a {
                continue;
            }
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (t, wi) in x.iter().zip(&w) {
                nodes.push(mid + half * t);
                weights.push(half * wi);
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .collect::<crate::par::CompensatedSum>()
            .value()
    }
}
