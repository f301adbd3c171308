//! L¹ distances between kernel derivatives and their difference quotients.

use crate::error::{Error, Result};
use crate::geometry::{dist, norm, Dimension};
use crate::kernels::KernelContext;
use crate::quadrature::{graded_polar_breaks, Directions, MeridianFan, RadialScheme, RayFan};

/// Interior samples per panel used to locate sign changes of the integrand.
const PROBES: usize = 8;

fn check_h(h: f64, upper: f64) -> Result<()> {
    if !(h > 0.0 && h < upper) {
        return Err(Error::InvalidParameter(format!("h = {h} must lie in (0, {upper})")));
    }
    Ok(())
}

fn shifted(x: &[f64], i: usize, h: f64) -> Vec<f64> {
    let mut xh = x.to_vec();
    xh[i] += h;
    xh
}

/// `∫_{∂B(0,1)} |∂_i K(0, y) - (K(h e_i, y) - K(0, y))/h| dS` for `0 < h < 1`.
///
/// `K = -∂G/∂ν`; the sign flip does not change the absolute value.
pub fn lemma_lim_surface(h: f64, i: usize, n: Dimension, level: usize) -> Result<f64> {
    check_h(h, 1.0)?;
    lemma_lim_surface_at(n, &vec![0.0; n.get()], h, i, level)
}

/// Same functional at an interior point `x`; needs `|x + h e_i| < 1`.
pub fn lemma_lim_surface_at(n: Dimension, x: &[f64], h: f64, i: usize, level: usize) -> Result<f64> {
    n.check_point(x)?;
    n.check_axis(i)?;
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    check_h(h, f64::INFINITY)?;
    let xh = shifted(x, i, h);
    let reach = norm(x).max(norm(&xh));
    if reach >= 1.0 {
        return Err(Error::OutsideDomain(format!("x and x + h e_i must lie inside the unit ball (h = {h})")));
    }
    let ctx = KernelContext::new(n);
    let at_origin = x.iter().all(|&c| c == 0.0);
    let signed = |y: &[f64]| {
        let exact = if at_origin {
            y[i] / ctx.alpha_n
        } else {
            ctx.poisson_kernel_dx_unchecked(i, x, y, 1.0)
        };
        let quotient = (ctx.poisson_kernel_unchecked(&xh, y, 1.0) - ctx.poisson_kernel_unchecked(x, y, 1.0)) / h;
        exact - quotient
    };
    let mut axis = shifted(x, i, 0.5 * h);
    if norm(&axis) < 1e-12 {
        axis = vec![0.0; n.get()];
        axis[i] = 1.0;
    }
    let fan = MeridianFan::new(n.get(), &axis, level);
    let breaks = graded_polar_breaks(1.0 - reach);
    Ok(fan.integrate(&breaks, level, PROBES, signed, |y| signed(y).abs()))
}

/// `∫_{B(0,1)} |∂_i G(0, y) - (G(h e_i, y) - G(0, y))/h| dy` for `0 < h < 1/2`.
pub fn lemma_lim_volume(h: f64, i: usize, n: Dimension, level: usize) -> Result<f64> {
    check_h(h, 0.5)?;
    lemma_lim_volume_at(n, &vec![0.0; n.get()], h, i, level)
}

/// Same functional at an interior point `x`; needs `|x + h e_i| < 1`.
///
/// The integrand is weakly singular at `x` and `x + h e_i`. A smooth
/// partition of unity splits it between two ray fans centred at those points,
/// with radial panels refined geometrically down to the scale `h` and split
/// at sign changes.
pub fn lemma_lim_volume_at(n: Dimension, x: &[f64], h: f64, i: usize, level: usize) -> Result<f64> {
    n.check_point(x)?;
    n.check_axis(i)?;
    if level < 1 {
        return Err(Error::InvalidLevel(level));
    }
    check_h(h, f64::INFINITY)?;
    let xh = shifted(x, i, h);
    if norm(x).max(norm(&xh)) >= 1.0 {
        return Err(Error::OutsideDomain(format!("x and x + h e_i must lie inside the unit ball (h = {h})")));
    }
    let ctx = KernelContext::new(n);
    let signed = |y: &[f64]| {
        let exact = ctx.green_r_dx_unchecked(1.0, i, x, y);
        let quotient = (ctx.green_r_unchecked(1.0, &xh, y) - ctx.green_r_unchecked(1.0, x, y)) / h;
        exact - quotient
    };
    let k = 2 * n.get() as i32;
    // (ρ_A / ρ_B)^k; the weight of the fan at A is 1 / (1 + t)
    let ratio = |y: &[f64]| {
        let rb = dist(y, &xh);
        if rb == 0.0 {
            f64::INFINITY
        } else {
            (dist(y, x) / rb).powi(k)
        }
    };
    let weight_a = |y: &[f64]| 1.0 / (1.0 + ratio(y));
    let weight_b = |y: &[f64]| {
        let t = ratio(y);
        if t.is_infinite() {
            1.0
        } else {
            t / (1.0 + t)
        }
    };
    let origin = vec![0.0; n.get()];
    let scheme = RadialScheme::geometric(level, 0.25 * h, 2.0).with_probes(PROBES);
    let dirs = Directions::product(n.get(), level).with_polar_axis(i);
    let fan_a = RayFan::new(x, &origin, 1.0, dirs.clone())?;
    let fan_b = RayFan::new(&xh, &origin, 1.0, dirs)?;
    let part_a = fan_a.integrate_abs(&scheme, signed, weight_a);
    let part_b = fan_b.integrate_abs(&scheme, signed, weight_b);
    Ok(part_a + part_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> Dimension {
        Dimension::new(3).unwrap()
    }

    #[test]
    fn surface_functional_is_first_order() {
        let a = lemma_lim_surface(0.25, 0, d3(), 8).unwrap();
        let b = lemma_lim_surface(0.125, 0, d3(), 8).unwrap();
        assert!(a > 0.0 && b > 0.0);
        let ratio = b / a;
        assert!((0.4..=0.6).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn surface_functional_is_level_stable() {
        let a = lemma_lim_surface(0.25, 2, d3(), 6).unwrap();
        let b = lemma_lim_surface(0.25, 2, d3(), 8).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn axis_choice_does_not_matter_at_origin() {
        let a = lemma_lim_surface(0.2, 0, d3(), 6).unwrap();
        let b = lemma_lim_surface(0.2, 1, d3(), 6).unwrap();
        assert!((a - b).abs() < 1e-10);
        let a = lemma_lim_volume(0.2, 0, d3(), 6).unwrap();
        let b = lemma_lim_volume(0.2, 2, d3(), 6).unwrap();
        assert!((a - b).abs() < 1e-8 * a);
    }

    #[test]
    fn volume_functional_decreases() {
        let v: Vec<f64> = [0.25, 0.125, 0.0625]
            .iter()
            .map(|&h| lemma_lim_volume(h, 0, d3(), 8).unwrap())
            .collect();
        assert!(v.iter().all(|x| x.is_finite() && *x > 0.0));
        assert!(v[0] > v[1] && v[1] > v[2], "{v:?}");
    }

    #[test]
    fn range_guards() {
        assert!(lemma_lim_surface(1.0, 0, d3(), 4).is_err());
        assert!(lemma_lim_surface(0.0, 0, d3(), 4).is_err());
        assert!(lemma_lim_volume(0.5, 0, d3(), 4).is_err());
        assert!(lemma_lim_volume(0.1, 3, d3(), 4).is_err());
        assert!(lemma_lim_surface_at(d3(), &[0.0, 0.0, 0.9], 0.2, 2, 4).is_err());
    }

    #[test]
    fn off_centre_functionals_shrink_with_h() {
        let x = [0.1, -0.2, 0.3];
        let a = lemma_lim_surface_at(d3(), &x, 0.1, 1, 8).unwrap();
        let b = lemma_lim_surface_at(d3(), &x, 0.05, 1, 8).unwrap();
        assert!(b < a);
        let a = lemma_lim_volume_at(d3(), &x, 0.1, 1, 8).unwrap();
        let b = lemma_lim_volume_at(d3(), &x, 0.05, 1, 8).unwrap();
        assert!(b < a);
    }
}
