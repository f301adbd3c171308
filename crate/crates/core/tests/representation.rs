use greenball::fields::{translate, Affine, Constant, FnField, PointOverride, ScalarField, TrigMode, TrigPolynomial};
use greenball::representation::{
    averaging_identity, eval_u_ball, generalized_recovery, AveragingPairing, AveragingWeight, RepresentationConfig,
};
use greenball::Dimension;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn d3() -> Dimension {
    Dimension::new(3).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..3).map(|_| rng.gen_range(-radius..radius)).collect();
        if greenball::geometry::norm(&p) <= radius {
            return p;
        }
    }
}

#[test]
fn poisson_kernel_has_unit_mass() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in [0.5, 1.0, 2.5] {
        let cfg = RepresentationConfig::new(8, 8, r).unwrap();
        for _ in 0..6 {
            let x = random_point(&mut rng, 0.9 * r);
            let v = eval_u_ball(&Constant(1.0), &Constant(0.0), &x, &cfg).unwrap();
            assert!((v - 1.0).abs() < 1e-8, "r={r} x={x:?}: {v}");
        }
    }
}

#[test]
fn harmonic_functions_are_reproduced() {
    let cfg = RepresentationConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let quad = FnField::new(|y: &[f64]| y[0] * y[0] - y[1] * y[1]);
    for _ in 0..6 {
        let x = random_point(&mut rng, 0.6);
        for i in 0..3 {
            let yi = Affine::coordinate(d3(), i).unwrap();
            let v = eval_u_ball(&yi, &Constant(0.0), &x, &cfg).unwrap();
            assert!((v - x[i]).abs() < 1e-6);
        }
        let v = eval_u_ball(&quad, &Constant(0.0), &x, &cfg).unwrap();
        assert!((v - quad.eval(&x)).abs() < 1e-6);
    }
}

#[test]
fn trig_oracle_inside_half_ball() {
    let f = TrigPolynomial::new(
        d3(),
        vec![TrigMode::new(1.0, [1.0, 0.0, 0.0], 0.0), TrigMode::new(0.5, [0.0, 2.0, 1.0], 0.7)],
    )
    .unwrap();
    let u = f.exact_poisson_inverse().unwrap();
    let cfg = RepresentationConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..8 {
        let x = random_point(&mut rng, 0.5);
        let v = eval_u_ball(&u, &f, &x, &cfg).unwrap();
        assert!((v - u.eval(&x)).abs() < 1e-4, "x={x:?}");
    }
}

#[test]
fn recovery_is_translation_covariant() {
    let w = AveragingWeight::standard(1.0, 0.1).unwrap();
    let f = TrigPolynomial::cosine(d3(), 1.0, &[1.0, 0.0, 0.0]).unwrap();
    let eps = [0.2, 0.1];
    let at_origin = generalized_recovery(d3(), &PointOverride::new(f.clone(), &[0.0; 3], 5.0), &f, &w, &eps, 5).unwrap();
    let worst_origin = at_origin.iter().map(|r| (r.u_eps_at_0 - r.rhs).abs()).fold(0.0, f64::max);
    for x0 in [[1.0, 0.0, 0.0], [0.0, 2.0, -1.0]] {
        let raw = PointOverride::new(f.clone(), &x0, 5.0);
        let rows = generalized_recovery(d3(), &translate(&raw, &x0), &translate(&f, &x0), &w, &eps, 5).unwrap();
        for (row, base) in rows.iter().zip(&at_origin) {
            assert!((row.u_eps_at_0 - row.rhs).abs() <= 1e-6 + worst_origin);
            assert!((row.u_eps_at_0 - f.eval(&x0)).abs() <= 0.5 * row.epsilon);
            // the mollified value at x0 is u(x0) scaled by the same multiplier as at 0
            let ratio = base.u_eps_at_0 / f.eval(&[0.0; 3]);
            assert!((row.u_eps_at_0 - ratio * f.eval(&x0)).abs() < 1e-12);
        }
    }
}

#[test]
fn recovery_sides_agree_at_level_eight() {
    let w = AveragingWeight::standard(1.0, 0.1).unwrap();
    let f = TrigPolynomial::cosine(d3(), 1.0, &[1.0, 0.0, 0.0]).unwrap();
    let raw = PointOverride::new(f.clone(), &[0.0; 3], 5.0);
    let rows = generalized_recovery(d3(), &raw, &f, &w, &[0.1], 8).unwrap();
    assert!((rows[0].u_eps_at_0 - rows[0].rhs).abs() <= 1e-6);
}

#[test]
fn recovery_of_constants_at_every_scale() {
    let w = AveragingWeight::standard(1.0, 0.1).unwrap();
    let rows = generalized_recovery(d3(), &Constant(1.0), &Constant(0.0), &w, &[0.3, 0.1, 0.03], 6).unwrap();
    for row in rows {
        assert!((row.u_eps_at_0 - 1.0).abs() < 1e-8);
        assert!((row.rhs - 1.0).abs() < 1e-8);
    }
}

#[test]
fn both_pairings_side_by_side() {
    let w = AveragingWeight::standard(1.0, 0.1).unwrap();
    let fixed = averaging_identity(d3(), &Constant(1.0), &Constant(0.0), &w, 8, AveragingPairing::Corrected).unwrap();
    let printed = averaging_identity(d3(), &Constant(1.0), &Constant(0.0), &w, 8, AveragingPairing::Printed).unwrap();
    assert!(fixed.residual <= 1e-8);
    assert!(printed.residual >= 0.1);
    assert_eq!(fixed.kernel_term, printed.kernel_term);
}
