//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use greenball::almost_periodic::{almost_period_defect, find_almost_period, LatticeBox};
use greenball::distributional::{
    check_power_inequality, fubini_residual, mollify, mollify_trig, Mollifier, TestFunction,
};
use greenball::fields::{
    translate, Affine, Constant, PointOverride, ScalarField, TrigMode, TrigPolynomial,
};
use greenball::geometry::{ball_volume, norm};
use greenball::kernels::KernelContext;
use greenball::quadrature::{focused_sphere_quadrature, singular_ball_quadrature};
use greenball::representation::{
    averaging_identity, averaging_identity_residual, difference_quotient_defect, eval_grad_u,
    eval_u_ball, generalized_recovery, lemma_lim_surface, lemma_lim_volume, AveragingPairing,
    AveragingWeight, RepresentationConfig,
};
use greenball::Dimension;

const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

fn cos_x1() -> TrigPolynomial {
    TrigPolynomial::cosine(dim(3), 1.0, &[1.0, 0.0, 0.0]).unwrap()
}

fn two_mode_forcing() -> TrigPolynomial {
    TrigPolynomial::new(
        dim(3),
        vec![
            TrigMode::new(1.0, [1.0, 2f64.sqrt(), 0.0], 0.0),
            TrigMode::new(0.5, [3f64.sqrt(), 0.0, 0.0], 0.0),
        ],
    )
    .unwrap()
}

fn random_in_ball(rng: &mut ChaCha8Rng, radius: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-radius..radius)).collect();
        if norm(&p) <= radius {
            return p;
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let p = random_in_ball(rng, 1.0);
        let r = norm(&p);
        if r > 1e-3 {
            return p.iter().map(|c| c / r).collect();
        }
    }
}

/// Least-squares slope of `ln v` against `ln h`.
fn loglog_slope(h: &[f64], v: &[f64]) -> f64 {
    let xs: Vec<f64> = h.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = v.iter().map(|x| x.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn kernel_mass() -> Outcome {
    const TOL: f64 = 1e-8;
    let ctx = KernelContext::new(dim(3));
    let mut worst = 0.0f64;
    for x in [[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 0.9, 0.0]] {
        let s = focused_sphere_quadrature(dim(3), &[0.0; 3], 1.0, &x, 8).unwrap();
        let mass = s.integrate(|y| ctx.poisson_kernel(&x, y, 1.0).unwrap());
        worst = worst.max((mass - 1.0).abs());
    }
    outcome(worst <= TOL, format!("max |mass - 1| = {worst:.3e} (tol {TOL:.0e})"))
}

fn mixed_derivative() -> Outcome {
    const RATIO: (f64, f64) = (8.0, 12.0);
    let ctx = KernelContext::new(dim(3));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let origin = [0.0; 3];
    let error = |y: &[f64], i: usize, h: f64| {
        let mut xh = [0.0; 3];
        xh[i] = h;
        let quotient = (ctx.poisson_kernel(&xh, y, 1.0).unwrap() - ctx.poisson_kernel(&origin, y, 1.0).unwrap()) / h;
        (ctx.mixed_derivative_origin(i, y).unwrap() - quotient).abs()
    };
    let mut coarse = 0.0f64;
    let mut fine = 0.0f64;
    let mut c_max = 0.0f64;
    for k in 0..20 {
        let y = random_unit(&mut rng);
        let i = k % 3;
        let (e2, e3) = (error(&y, i, 1e-2), error(&y, i, 1e-3));
        coarse = coarse.max(e2);
        fine = fine.max(e3);
        c_max = c_max.max(e2 / 1e-2).max(e3 / 1e-3);
    }
    let ratio = coarse / fine;
    outcome(
        (RATIO.0..=RATIO.1).contains(&ratio),
        format!("max error {coarse:.3e} (h=1e-2), {fine:.3e} (h=1e-3); ratio {ratio:.3} in [8, 12]; C = {c_max:.3}"),
    )
}

fn weakly_singular() -> Outcome {
    const TOL: f64 = 1e-8;
    let mut worst = 0.0f64;
    for n in 3..=5 {
        let d = dim(n);
        let surf = n as f64 * ball_volume(d);
        let origin = vec![0.0; n];
        for delta in [0.25, 0.5, 0.9] {
            let b = singular_ball_quadrature(d, &origin, delta, &origin, 8).unwrap();
            let v = b.integrate(|y| norm(y).powi(1 - n as i32));
            worst = worst.max((v - surf * delta).abs());
            let h = 0.1;
            let mut p = origin.clone();
            p[0] = h;
            let b = singular_ball_quadrature(d, &p, delta + h, &p, 8).unwrap();
            let v = b.integrate(|y| greenball::geometry::dist(y, &p).powi(1 - n as i32));
            worst = worst.max((v - surf * (delta + h)).abs());
        }
    }
    // Off-centre singularity inside B(0, δ) in three dimensions; the radial
    // reduction gives (2π/h) ∫_0^δ r ln|(r + h)/(r - h)| dr, whose antiderivative
    // is ((r² - h²)/2) ln|(r + h)/(r - h)| + h r.
    let (h, delta) = (0.1, 0.25);
    let b = singular_ball_quadrature(dim(3), &[0.0; 3], delta, &[h, 0.0, 0.0], 16).unwrap();
    let v = b.integrate(|y| 1.0 / greenball::geometry::dist(y, &[h, 0.0, 0.0]).powi(2));
    let exact = 2.0 * PI / h * (0.5 * (delta * delta - h * h) * ((delta + h) / (delta - h)).ln() + h * delta);
    let off = (v - exact).abs();
    let below = v < 4.0 * PI * (delta + h);
    outcome(
        worst <= TOL && off <= TOL && below,
        format!("closed forms max err {worst:.3e}; off-centre err {off:.3e}, below nα(δ+h): {below} (tol {TOL:.0e})"),
    )
}

fn representation_oracle() -> Outcome {
    const TOL: f64 = 1e-4;
    let cfg = RepresentationConfig::with_level(8);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut worst = 0.0f64;
    for f in [cos_x1(), two_mode_forcing()] {
        let u = f.exact_poisson_inverse().unwrap();
        for _ in 0..10 {
            let x = random_in_ball(&mut rng, 0.5);
            let v = eval_u_ball(&u, &f, &x, &cfg).unwrap();
            let exact = u.eval(&x);
            worst = worst.max(((v - exact) / exact).abs());
        }
    }
    outcome(worst <= TOL, format!("max relative error {worst:.3e} (tol {TOL:.0e})"))
}

fn gradient_representation() -> Outcome {
    const TOL: f64 = 1e-3;
    let cfg = RepresentationConfig::with_level(8);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut worst = 0.0f64;
    for f in [cos_x1(), two_mode_forcing()] {
        let u = f.exact_poisson_inverse().unwrap();
        for k in 0..10 {
            let x0: Vec<f64> = (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let i = k % 3;
            let g = eval_grad_u(&u, &f, &x0, i, &cfg).unwrap();
            worst = worst.max((g - u.gradient(&x0, i).unwrap()).abs());
        }
    }
    outcome(worst <= TOL, format!("max |error| {worst:.3e} (tol {TOL:.0e})"))
}

const LIMIT_LEVEL: usize = 10;
const LIMIT_H: [f64; 5] = [0.125, 0.0625, 0.03125, 0.015625, 0.0078125];

fn limit_functionals() -> Outcome {
    const SLOPE: f64 = 0.9;
    const RATIO: f64 = 0.05;
    let surf: Vec<f64> = LIMIT_H.iter().map(|&h| lemma_lim_surface(h, 0, dim(3), LIMIT_LEVEL).unwrap()).collect();
    let vol: Vec<f64> = LIMIT_H.iter().map(|&h| lemma_lim_volume(h, 0, dim(3), LIMIT_LEVEL).unwrap()).collect();
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, v) in [("surface", &surf), ("volume", &vol)] {
        let slope = loglog_slope(&LIMIT_H, v);
        let ratio = v[4] / v[0];
        pass &= slope >= SLOPE && ratio < RATIO;
        detail.push(format!(
            "{name}: values {:?} slope {slope:.4} (>= {SLOPE}) ratio {ratio:.4} (< {RATIO})",
            v.iter().map(|x| format!("{x:.5e}")).collect::<Vec<_>>()
        ));
    }
    outcome(pass, detail.join("; "))
}

fn difference_quotient_bound() -> Outcome {
    const SLACK: f64 = 1e-5;
    let f = cos_x1();
    let u = f.exact_poisson_inverse().unwrap();
    let cfg = RepresentationConfig::with_level(8);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let samples: Vec<Vec<f64>> = (0..5).map(|_| (0..3).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect();
    let (su, sf) = (u.bound().unwrap(), f.bound().unwrap());
    let mut pass = true;
    let mut rows = Vec::new();
    for h in [0.125, 0.0625, 0.03125, 0.015625] {
        let defect = difference_quotient_defect(&u, &f, &samples, 0, h, &cfg).unwrap();
        let bound = su * lemma_lim_surface(h, 0, dim(3), LIMIT_LEVEL).unwrap()
            + sf * lemma_lim_volume(h, 0, dim(3), LIMIT_LEVEL).unwrap()
            + SLACK;
        pass &= defect <= bound;
        rows.push(format!("h={h}: {defect:.3e} <= {bound:.3e}"));
    }
    outcome(pass, rows.join(", "))
}

fn averaging() -> Outcome {
    const TIGHT: f64 = 1e-8;
    const TRIG: f64 = 1e-4;
    const PRINTED_MIN: f64 = 0.1;
    let n = dim(3);
    let w = AveragingWeight::standard(1.0, 0.1).unwrap();
    let one = averaging_identity_residual(n, &Constant(1.0), &Constant(0.0), &w, 8).unwrap();
    let y1 = averaging_identity_residual(n, &Affine::coordinate(n, 0).unwrap(), &Constant(0.0), &w, 8).unwrap();
    let f = cos_x1();
    let trig = averaging_identity_residual(n, &f, &f, &w, 8).unwrap();
    let printed = averaging_identity(n, &Constant(1.0), &Constant(0.0), &w, 8, AveragingPairing::Printed)
        .unwrap()
        .residual;
    outcome(
        one <= TIGHT && y1 <= TIGHT && trig <= TRIG && printed >= PRINTED_MIN,
        format!("u=1: {one:.3e}, u=y1: {y1:.3e} (tol {TIGHT:.0e}); trig: {trig:.3e} (tol {TRIG:.0e}); printed pairing u=1: {printed:.4} (>= {PRINTED_MIN})"),
    )
}

fn recovery() -> Outcome {
    const AGREE: f64 = 1e-6;
    const RATE: f64 = 0.5;
    const LEVEL: usize = 6;
    let n = dim(3);
    let w = AveragingWeight::standard(1.0, 0.1).unwrap();
    let f = cos_x1();
    let eps = [0.2, 0.1, 0.05];
    let mut pass = true;
    let mut rows = Vec::new();
    for x0 in [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]] {
        let raw = PointOverride::new(cos_x1(), &x0, 5.0);
        let w_field = translate(&raw, &x0);
        let f_field = translate(&f, &x0);
        let target = f.eval(&x0);
        for row in generalized_recovery(n, &w_field, &f_field, &w, &eps, LEVEL).unwrap() {
            let agree = (row.u_eps_at_0 - row.rhs).abs();
            let err = (row.u_eps_at_0 - target).abs();
            pass &= agree <= AGREE && err <= RATE * row.epsilon;
            rows.push(format!("x0={x0:?} eps={}: |u-rhs| {agree:.2e}, |u-u(x0)| {err:.2e}", row.epsilon));
        }
    }
    outcome(pass, rows.join("; "))
}

fn mollifier_suite() -> Outcome {
    const MASS: f64 = 1e-10;
    const SLOPE: f64 = 0.9;
    const EQUATION: f64 = 1e-8;
    let mut mass_err = 0.0f64;
    for n in [3, 4] {
        for eps in [1.0, 0.1, 0.01] {
            let m = Mollifier::new(dim(n), eps).unwrap();
            mass_err = mass_err.max((m.test_function().mass(8).unwrap() - 1.0).abs());
        }
    }
    let f = two_mode_forcing();
    let u = f.exact_poisson_inverse().unwrap();
    let bx = LatticeBox::new(dim(3), 2.0, 5).unwrap();
    let eps = [0.2, 0.1, 0.05, 0.025];
    let errs: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let ue = mollify(&u, &Mollifier::new(dim(3), e).unwrap(), 8).unwrap();
            let mut worst = 0.0f64;
            let mut x = [0.0; 3];
            for j in 0..bx.len() {
                bx.point(j, &mut x);
                worst = worst.max((ue.eval(&x) - u.eval(&x)).abs());
            }
            worst
        })
        .collect();
    let slope = loglog_slope(&eps, &errs);
    let m = Mollifier::new(dim(3), 0.1).unwrap();
    let ue = mollify_trig(&u, &m, 8).unwrap();
    let fe = mollify(&f, &m, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let mut eq_err = 0.0f64;
    for _ in 0..10 {
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
        eq_err = eq_err.max((-ue.laplacian(&x).unwrap() - fe.eval(&x)).abs());
    }
    outcome(
        mass_err <= MASS && slope >= SLOPE && eq_err <= EQUATION,
        format!("mass err {mass_err:.3e} (tol {MASS:.0e}); convergence slope {slope:.3} (>= {SLOPE}); -Δu_ε - f_ε {eq_err:.3e} (tol {EQUATION:.0e})"),
    )
}

fn power_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    let mut violations = 0usize;
    for _ in 0..100_000 {
        let a = 10f64.powf(rng.gen_range(-3.0..3.0));
        let b = 10f64.powf(rng.gen_range(-3.0..3.0));
        let m = rng.gen_range(1..=12u32);
        if !check_power_inequality(a, b, m).unwrap().holds {
            violations += 1;
        }
    }
    let mut equality_ok = true;
    for m in 1..=12 {
        for a in [1e-3, 0.7, 3.0, 1e3] {
            let p = check_power_inequality(a, a, m).unwrap();
            equality_ok &= p.lhs == 0.0 && p.rhs == 0.0 && p.holds;
        }
    }
    outcome(
        violations == 0 && equality_ok,
        format!("{violations} violations in 100000 samples; equality rows exact: {equality_ok}"),
    )
}

fn fubini() -> Outcome {
    const TOL: f64 = 1e-6;
    let n = dim(3);
    let u = TrigPolynomial::new(
        n,
        vec![TrigMode::new(1.0, [1.0, 0.0, 0.0], 0.0), TrigMode::new(0.5, [0.0, 2f64.sqrt(), 0.0], 0.0)],
    )
    .unwrap();
    let phi = TestFunction::bump(n, 0.6, 1.0).unwrap();
    let psi = TestFunction::gaussian_bump(n, 0.4, 0.3).unwrap();
    let r: Vec<f64> = (4..=6).map(|l| fubini_residual(&u, &phi, &psi, l).unwrap()).collect();
    let decreasing = r.windows(2).all(|p| p[1] < p[0]);
    outcome(
        r[2] <= TOL && decreasing,
        format!(
            "residuals at levels 4..6: {:?}; level 6 <= {TOL:.0e}; decreasing: {decreasing}",
            r.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>()
        ),
    )
}

fn almost_periodicity() -> Outcome {
    const EPS: f64 = 0.1;
    const T_MAX: f64 = 200.0;
    let n = dim(3);
    let f = TrigPolynomial::new(
        n,
        vec![TrigMode::new(1.0, [1.0, 0.0, 0.0], 0.0), TrigMode::new(1.0, [2f64.sqrt(), 0.0, 0.0], 0.0)],
    )
    .unwrap();
    let u = f.exact_poisson_inverse().unwrap();
    let grad = u.partial(0).unwrap();
    let bx = LatticeBox::new(n, 20.0, 401).unwrap();
    let Some(t) = find_almost_period(&f, EPS, 0, T_MAX, &bx).unwrap() else {
        return outcome(false, "no almost-period found");
    };
    let shift = [t, 0.0, 0.0];
    let df = almost_period_defect(&f, &shift, &bx).unwrap();
    let du = almost_period_defect(&u, &shift, &bx).unwrap();
    let ddu = almost_period_defect(&grad, &shift, &bx).unwrap();
    outcome(
        t <= T_MAX && df < EPS && du < EPS && ddu < EPS,
        format!("T = {t:.2}; defects f {df:.4}, u {du:.4}, du/dx1 {ddu:.4} (< {EPS}) on L = 20, grid 401"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("kernel mass", kernel_mass),
        ("mixed derivative", mixed_derivative),
        ("weakly singular closed forms", weakly_singular),
        ("representation oracle", representation_oracle),
        ("gradient representation", gradient_representation),
        ("difference-quotient limits", limit_functionals),
        ("difference-quotient bound", difference_quotient_bound),
        ("averaging identity", averaging),
        ("generalized recovery", recovery),
        ("mollifier suite", mollifier_suite),
        ("power inequality", power_inequality),
        ("convolution exchange", fubini),
        ("almost periodicity transfer", almost_periodicity),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| outcome(false, "panicked"));
        let secs = start.elapsed().as_secs_f64();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        if !result.pass {
            failed += 1;
        }
        println!("{tag} {:>2} {name} ({secs:.1} s): {}", k + 1, result.detail);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
