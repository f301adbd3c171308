//! The verification suites behind each subcommand.

use std::f64::consts::PI;

use greenball::almost_periodic::{almost_period_defect, find_almost_period, LatticeBox};
use greenball::distributional::{
    check_power_inequality, fubini_residual, mollify, mollify_trig, Mollifier, TestFunction,
};
use greenball::fields::{translate, Affine, Constant, PointOverride, ScalarField};
use greenball::geometry::{dist, norm};
use greenball::kernels::KernelContext;
use greenball::quadrature::{focused_sphere_quadrature, singular_ball_quadrature};
use greenball::representation::{
    averaging_identity, difference_quotient_defect, eval_grad_u, eval_u_ball, generalized_recovery, lemma_lim_surface,
    lemma_lim_volume, AveragingPairing, AveragingWeight, RepresentationConfig,
};
use greenball::{sphere_measure, Dimension, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{trig, Config};
use crate::report::Row;

fn fmt_point(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
    format!("({})", parts.join(" "))
}

fn random_in_ball(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-radius..radius)).collect();
        if norm(&p) <= radius {
            return p;
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let p = random_in_ball(rng, n, 1.0);
        let r = norm(&p);
        if r > 1e-3 {
            return p.iter().map(|c| c / r).collect();
        }
    }
}

fn random_in_box(rng: &mut ChaCha8Rng, n: usize, half: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-half..half)).collect()
}

/// Least-squares slope of `ln v` against `ln h`.
pub fn loglog_slope(h: &[f64], v: &[f64]) -> f64 {
    let xs: Vec<f64> = h.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = v.iter().map(|x| x.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn kernels(cfg: &Config) -> Result<Vec<Row>> {
    let k = &cfg.kernels;
    let mut rows = Vec::new();
    for x in &k.mass_points {
        let n = Dimension::new(x.len())?;
        let ctx = KernelContext::new(n);
        let origin = vec![0.0; n.get()];
        let s = focused_sphere_quadrature(n, &origin, 1.0, x, k.level)?;
        // a rejected node shows up as NaN, which fails the row
        let mass = s.integrate(|y| ctx.poisson_kernel(x, y, 1.0).unwrap_or(f64::NAN));
        rows.push(Row::close("kernel_mass", format!("x={}", fmt_point(x)), mass, 1.0, k.mass_tol));
    }

    let n = Dimension::new(3)?;
    let ctx = KernelContext::new(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let [h_coarse, h_fine] = k.mixed_h;
    let mut worst = [0.0f64; 2];
    for s in 0..k.mixed_samples {
        let y = random_unit(&mut rng, 3);
        let i = s % 3;
        for (slot, h) in [h_coarse, h_fine].into_iter().enumerate() {
            let mut xh = [0.0; 3];
            xh[i] = h;
            let quotient = (ctx.poisson_kernel(&xh, &y, 1.0)? - ctx.poisson_kernel(&[0.0; 3], &y, 1.0)?) / h;
            let err = (ctx.mixed_derivative_origin(i, &y)? - quotient).abs();
            worst[slot] = worst[slot].max(err);
        }
    }
    let [lo, hi] = k.mixed_ratio;
    let ratio = worst[0] / worst[1];
    rows.push(Row::close(
        "mixed_derivative_error_ratio",
        format!("h={h_coarse}/{h_fine} samples={}", k.mixed_samples),
        ratio,
        0.5 * (lo + hi),
        0.5 * (hi - lo),
    ));

    for &dim in &k.singular_dims {
        let d = Dimension::new(dim)?;
        let surf = sphere_measure(d);
        let origin = vec![0.0; dim];
        let p = dim as i32;
        for &delta in &k.singular_deltas {
            let b = singular_ball_quadrature(d, &origin, delta, &origin, k.level)?;
            let v = b.integrate(|y| norm(y).powi(1 - p));
            rows.push(Row::close("singular_centred", format!("n={dim} delta={delta}"), v, surf * delta, k.singular_tol));
            let h = k.singular_shift;
            let mut c = origin.clone();
            c[0] = h;
            let b = singular_ball_quadrature(d, &c, delta + h, &c, k.level)?;
            let v = b.integrate(|y| dist(y, &c).powi(1 - p));
            rows.push(Row::close(
                "singular_shifted",
                format!("n={dim} delta={delta} h={h}"),
                v,
                surf * (delta + h),
                k.singular_tol,
            ));
        }
    }

    // off-centre singularity: (2π/h) [((δ² - h²)/2) ln((δ + h)/(δ - h)) + h δ] in three dimensions
    let (h, delta) = (0.1, 0.25);
    let a = [h, 0.0, 0.0];
    let b = singular_ball_quadrature(n, &[0.0; 3], delta, &a, 2 * k.level)?;
    let v = b.integrate(|y| dist(y, &a).powi(-2));
    let exact = 2.0 * PI / h * (0.5 * (delta * delta - h * h) * ((delta + h) / (delta - h)).ln() + h * delta);
    rows.push(Row::close("singular_off_centre", format!("n=3 delta={delta} a={}", fmt_point(&a)), v, exact, k.singular_tol));
    Ok(rows)
}

pub fn representation(cfg: &Config) -> Result<Vec<Row>> {
    let s = &cfg.representation;
    let rcfg = RepresentationConfig::with_level(s.level);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 4);
    let mut rows = Vec::new();
    for (k, modes) in s.forcings.iter().enumerate() {
        let f = trig(modes)?;
        let u = f.exact_poisson_inverse()?;
        for _ in 0..s.samples {
            let x = random_in_ball(&mut rng, f.dim(), s.sample_radius);
            let v = eval_u_ball(&u, &f, &x, &rcfg)?;
            rows.push(Row::close_rel(
                "representation",
                format!("forcing={k} x={}", fmt_point(&x)),
                v,
                u.eval(&x),
                s.rel_tol,
            ));
        }
    }
    Ok(rows)
}

pub fn gradient(cfg: &Config) -> Result<Vec<Row>> {
    let s = &cfg.gradient;
    let rcfg = RepresentationConfig::with_level(s.level);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 5);
    let mut rows = Vec::new();
    for (k, modes) in s.forcings.iter().enumerate() {
        let f = trig(modes)?;
        let u = f.exact_poisson_inverse()?;
        for j in 0..s.samples {
            let x0 = random_in_box(&mut rng, f.dim(), s.sample_box);
            let i = j % f.dim();
            let g = eval_grad_u(&u, &f, &x0, i, &rcfg)?;
            let exact = u.gradient(&x0, i).ok_or(Error::InvalidParameter("no exact gradient".into()))?;
            rows.push(Row::close("gradient", format!("forcing={k} i={i} x0={}", fmt_point(&x0)), g, exact, s.tol));
        }
    }

    let f = trig(&s.defect_forcing)?;
    let u = f.exact_poisson_inverse()?;
    let n = Dimension::new(f.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 7);
    let samples: Vec<Vec<f64>> = (0..s.defect_samples).map(|_| random_in_box(&mut rng, f.dim(), s.sample_box)).collect();
    let su = u.bound().unwrap_or(f64::INFINITY);
    let sf = f.bound().unwrap_or(f64::INFINITY);
    for &h in &s.defect_h {
        let defect = difference_quotient_defect(&u, &f, &samples, 0, h, &rcfg)?;
        let bound = su * lemma_lim_surface(h, 0, n, s.limit_level)? + sf * lemma_lim_volume(h, 0, n, s.limit_level)?;
        rows.push(Row::at_most("difference_quotient_bound", format!("h={h}"), defect, bound + s.defect_slack));
    }
    Ok(rows)
}

pub fn lemma_lim(cfg: &Config) -> Result<Vec<Row>> {
    let s = &cfg.lemma_lim;
    let n = Dimension::new(s.dim)?;
    if s.h.len() < 2 {
        return Err(Error::InvalidParameter("lemma-lim needs at least two h values".into()));
    }
    let mut rows = Vec::new();
    let functionals: [(&str, fn(f64, usize, Dimension, usize) -> Result<f64>); 2] =
        [("surface", lemma_lim_surface), ("volume", lemma_lim_volume)];
    for (name, functional) in functionals {
        let values: Vec<f64> = s.h.iter().map(|&h| functional(h, s.axis, n, s.level)).collect::<Result<_>>()?;
        for (&h, &v) in s.h.iter().zip(&values) {
            rows.push(Row::at_least(&format!("lemma_lim_{name}"), format!("h={h}"), v, 0.0));
        }
        rows.push(Row::at_least(
            &format!("lemma_lim_{name}_slope"),
            format!("h={}..{}", s.h[0], s.h[s.h.len() - 1]),
            loglog_slope(&s.h, &values),
            s.min_slope,
        ));
        rows.push(Row::at_most(
            &format!("lemma_lim_{name}_ratio"),
            format!("h={}/{}", s.h[s.h.len() - 1], s.h[0]),
            values[values.len() - 1] / values[0],
            s.max_ratio,
        ));
    }
    Ok(rows)
}

pub fn averaging(cfg: &Config) -> Result<Vec<Row>> {
    let s = &cfg.averaging;
    let n = Dimension::new(3)?;
    let w = AveragingWeight::standard(s.big_r, s.delta)?;
    let f = trig(&s.forcing)?;
    let u = f.exact_poisson_inverse()?;
    let y1 = Affine::coordinate(n, 0)?;
    let zero = Constant(0.0);
    let corrected = AveragingPairing::Corrected;
    let mut rows = Vec::new();
    let t = averaging_identity(n, &Constant(1.0), &zero, &w, s.level, corrected)?;
    rows.push(Row::close("averaging_corrected", "u=1 f=0", t.rhs, t.u0, s.exact_tol));
    let t = averaging_identity(n, &y1, &zero, &w, s.level, corrected)?;
    rows.push(Row::close("averaging_corrected", "u=y1 f=0", t.rhs, t.u0, s.exact_tol));
    let t = averaging_identity(n, &u, &f, &w, s.level, corrected)?;
    rows.push(Row::close("averaging_corrected", "u=exact inverse f=forcing", t.rhs, t.u0, s.trig_tol));
    let t = averaging_identity(n, &Constant(1.0), &zero, &w, s.level, AveragingPairing::Printed)?;
    rows.push(Row::at_least("averaging_printed_discrepancy", "u=1 f=0", t.residual, s.printed_min));
    Ok(rows)
}

pub fn recovery(cfg: &Config) -> Result<Vec<Row>> {
    let s = &cfg.recovery;
    let f = trig(&s.forcing)?;
    let u = f.exact_poisson_inverse()?;
    let n = Dimension::new(f.dim())?;
    let w = AveragingWeight::standard(s.big_r, s.delta)?;
    let mut rows = Vec::new();
    for x0 in &s.centres {
        n.check_point(x0)?;
        let raw = PointOverride::new(u.clone(), x0, s.override_value);
        let target = u.eval(x0);
        let table = generalized_recovery(n, &translate(&raw, x0), &translate(&f, x0), &w, &s.epsilons, s.level)?;
        for row in table {
            let inputs = format!("x0={} eps={}", fmt_point(x0), row.epsilon);
            rows.push(Row::close("recovery_sides_agree", inputs.clone(), row.u_eps_at_0, row.rhs, s.agree_tol));
            rows.push(Row::close("recovery_limit", inputs, row.u_eps_at_0, target, s.rate * row.epsilon));
        }
    }

    for &dim in &s.mass_dims {
        for &eps in &s.mass_epsilons {
            let m = Mollifier::new(Dimension::new(dim)?, eps)?;
            let mass = m.test_function().mass(s.mollifier_level)?;
            rows.push(Row::close("mollifier_mass", format!("n={dim} eps={eps}"), mass, 1.0, s.mass_tol));
        }
    }

    let g = trig(&s.convergence_field)?;
    let v = g.exact_poisson_inverse()?;
    let gd = Dimension::new(g.dim())?;
    let bx = LatticeBox::new(gd, s.convergence_box, s.convergence_grid)?;
    let mut errs = Vec::new();
    for &eps in &s.convergence_epsilons {
        let smoothed = mollify(&v, &Mollifier::new(gd, eps)?, s.mollifier_level)?;
        let mut worst = 0.0f64;
        let mut x = vec![0.0; g.dim()];
        for j in 0..bx.len() {
            bx.point(j, &mut x);
            worst = worst.max((smoothed.eval(&x) - v.eval(&x)).abs());
        }
        errs.push(worst);
    }
    if errs.len() >= 2 {
        rows.push(Row::at_least(
            "mollifier_convergence_slope",
            format!("eps={:?}", s.convergence_epsilons),
            loglog_slope(&s.convergence_epsilons, &errs),
            s.min_slope,
        ));
    }

    let m = Mollifier::new(gd, 0.1)?;
    let v_eps = mollify_trig(&v, &m, s.mollifier_level)?;
    let g_eps = mollify(&g, &m, s.mollifier_level)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 10);
    for _ in 0..s.equation_points {
        let x = random_in_box(&mut rng, g.dim(), 5.0);
        let lap = v_eps.laplacian(&x).ok_or(Error::InvalidParameter("no exact laplacian".into()))?;
        rows.push(Row::close("mollified_equation", format!("eps=0.1 x={}", fmt_point(&x)), -lap, g_eps.eval(&x), s.equation_tol));
    }
    Ok(rows)
}

pub fn appendix(cfg: &Config) -> Result<Vec<Row>> {
    let s = &cfg.appendix;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 11);
    let [lo, hi] = s.log10_range;
    if !(lo < hi) || s.max_m == 0 {
        return Err(Error::InvalidParameter("appendix sampling range".into()));
    }
    let mut violations = 0usize;
    for _ in 0..s.samples {
        let a = 10f64.powf(rng.gen_range(lo..hi));
        let b = 10f64.powf(rng.gen_range(lo..hi));
        let m = rng.gen_range(1..=s.max_m);
        if !check_power_inequality(a, b, m)?.holds {
            violations += 1;
        }
    }
    let mut rows = vec![Row::close(
        "power_inequality_violations",
        format!("samples={} m=1..{} log10(a,b) in [{lo}, {hi}]", s.samples, s.max_m),
        violations as f64,
        0.0,
        0.0,
    )];
    for m in 1..=s.max_m {
        for a in [1e-3, 0.7, 3.0, 1e3] {
            let p = check_power_inequality(a, a, m)?;
            rows.push(Row::close("power_inequality_equality", format!("a=b={a} m={m}"), p.lhs - p.rhs, 0.0, 0.0));
        }
    }

    let u = trig(&s.fubini_field)?;
    let n = Dimension::new(u.dim())?;
    let phi = TestFunction::bump(n, 0.6, 1.0)?;
    let psi = TestFunction::gaussian_bump(n, 0.4, 0.3)?;
    let residuals: Vec<f64> = s
        .fubini_levels
        .iter()
        .map(|&l| fubini_residual(&u, &phi, &psi, l))
        .collect::<Result<_>>()?;
    for (k, (&l, &r)) in s.fubini_levels.iter().zip(&residuals).enumerate() {
        if k == 0 {
            rows.push(Row::at_least("fubini_residual", format!("level={l}"), r, 0.0));
        } else {
            rows.push(Row::at_most("fubini_residual_decreasing", format!("level={l}"), r, residuals[k - 1]));
        }
    }
    if let (Some(&l), Some(&r)) = (s.fubini_levels.last(), residuals.last()) {
        rows.push(Row::at_most("fubini_residual_final", format!("level={l}"), r, s.fubini_tol));
    }
    Ok(rows)
}

pub fn almost_period(cfg: &Config) -> Result<Vec<Row>> {
    let s = &cfg.almost_period;
    let f = trig(&s.forcing)?;
    let u = f.exact_poisson_inverse()?;
    let du = u.partial(s.axis)?;
    let n = Dimension::new(f.dim())?;
    let bx = LatticeBox::new(n, s.half_width, s.grid)?;
    let inputs = format!("eps={} L={} grid={}", s.epsilon, s.half_width, s.grid);
    let Some(t) = find_almost_period(&f, s.epsilon, s.axis, s.t_max, &bx)? else {
        return Ok(vec![Row::at_most("almost_period", inputs, f64::INFINITY, s.t_max)]);
    };
    let mut shift = vec![0.0; f.dim()];
    shift[s.axis] = t;
    let mut rows = vec![Row::at_most("almost_period", inputs, t, s.t_max)];
    for (name, field) in [("f", &f), ("u", &u), ("du", &du)] {
        let d = almost_period_defect(field, &shift, &bx)?;
        rows.push(Row::at_most(&format!("almost_period_defect_{name}"), format!("T={t}"), d, s.epsilon));
    }
    Ok(rows)
}
