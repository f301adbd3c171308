//! Adaptive Gauss–Legendre bisection for smooth one-dimensional integrands.

use super::gauss::gauss_legendre;

const ORDER: usize = 16;
const MAX_DEPTH: usize = 48;

/// `∫_a^b f` to roughly `rel_tol` relative accuracy by recursive bisection,
/// comparing a 16-point Gauss rule on each interval against its two halves.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let (x, w) = gauss_legendre(ORDER);
    let rule = |lo: f64, hi: f64| -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * x.iter().zip(&w).map(|(t, wi)| wi * f(mid + half * t)).sum::<f64>()
    };
    let whole = rule(a, b);
    let tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    refine(&rule, a, b, whole, tol, 0)
}

fn refine<R: Fn(f64, f64) -> f64>(rule: &R, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule(a, mid);
    let right = rule(mid, b);
    let both = left + right;
    if (both - whole).abs() <= tol || depth >= MAX_DEPTH {
        return both;
    }
    refine(rule, a, mid, left, 0.5 * tol, depth + 1) + refine(rule, mid, b, right, 0.5 * tol, depth + 1)
}
