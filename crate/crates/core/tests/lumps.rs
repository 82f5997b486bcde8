use approx::assert_relative_eq;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kpwave::dispersion::{derived_constants, PhysicalParams};
use kpwave::kp::KpModel;
use kpwave::lumps::*;
use kpwave::make_grid;

/// `u_1 = 4 (x^2 - y^2 - 3) / (x^2 + y^2 + 3)^2`, written out by hand.
fn u1_closed(x: f64, y: f64) -> f64 {
    let t = x * x + y * y + 3.0;
    4.0 * (x * x - y * y - 3.0) / (t * t)
}

#[test]
fn u1_matches_closed_form() {
    for (x, y) in [(0.0, 0.0), (1.0, 0.5), (-3.2, 7.1), (40.0, -2.0)] {
        assert_relative_eq!(lump_u(1, x, y).unwrap(), u1_closed(x, y), max_relative = 1e-13);
    }
    assert_relative_eq!(lump_u(1, 0.0, 0.0).unwrap(), -4.0 / 3.0, max_relative = 1e-15);
    assert_relative_eq!(tau_star(2, 0.0, 0.0).unwrap(), 1875.0);
}

#[test]
fn only_k_one_and_two() {
    assert!(lump_u(3, 0.0, 0.0).is_err());
    assert!(tau_polynomial(0).is_err());
    assert!(lump_derivative(1, 5, 0, 0.0, 0.0).is_err());
    assert!(kp_residual_pointwise(1, f64::NAN, 0.0).is_err());
}

#[test]
fn derivatives_match_finite_differences() {
    let h = 1e-4;
    for k in [1u8, 2] {
        for (x, y) in [(0.3, -0.7), (1.9, 2.4)] {
            let u = |a: f64, b: f64| lump_u(k, a, b).unwrap();
            let ux = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
            let uyy = (u(x, y + h) - 2.0 * u(x, y) + u(x, y - h)) / (h * h);
            assert_relative_eq!(lump_derivative(k, 1, 0, x, y).unwrap(), ux, max_relative = 1e-6, epsilon = 1e-8);
            assert_relative_eq!(lump_derivative(k, 0, 2, x, y).unwrap(), uyy, max_relative = 1e-4, epsilon = 1e-6);
        }
    }
}

#[test]
fn residual_of_closed_form_by_finite_differences() {
    // independent check of the equation -u_xxxx + u_xx + 3 (u^2)_xx + u_yy = 0
    let h = 2e-2;
    let f = |x: f64, y: f64| {
        let u = u1_closed(x, y);
        (u, u * u)
    };
    for (x, y) in [(0.4, 0.9), (-1.3, 0.2), (2.0, -1.5)] {
        let s = |dx: f64| f(x + dx, y);
        let d2 = |g: &dyn Fn(f64) -> f64| (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h);
        let d4 = (s(2.0 * h).0 - 4.0 * s(h).0 + 6.0 * s(0.0).0 - 4.0 * s(-h).0 + s(-2.0 * h).0) / h.powi(4);
        let uxx = d2(&|d| s(d).0);
        let sqxx = d2(&|d| s(d).1);
        let uyy = (f(x, y + h).0 - 2.0 * f(x, y).0 + f(x, y - h).0) / (h * h);
        let r = -d4 + uxx + 3.0 * sqxx + uyy;
        let scale = d4.abs() + uxx.abs() + 3.0 * sqxx.abs() + uyy.abs();
        assert!(r.abs() < 1e-3 * scale, "residual {r} against scale {scale}");
    }
}

#[test]
fn exact_residual_vanishes_at_rational_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in [1u8, 2] {
        for _ in 0..20 {
            let x = BigRational::new(BigInt::from(rng.random_range(-400..400)), BigInt::from(rng.random_range(1..60)));
            let y = BigRational::new(BigInt::from(rng.random_range(-400..400)), BigInt::from(rng.random_range(1..60)));
            assert!(kp_residual_exact(k, &x, &y).unwrap().is_zero());
        }
    }
}

#[test]
fn tau_evaluates_exactly() {
    let x = 0.5;
    let y = -0.25;
    let r = kp_residual_pointwise(1, x, y).unwrap();
    assert_eq!(r, 0.0);
    let t = tau_polynomial(1).unwrap();
    let x0 = BigRational::new(BigInt::from(1), BigInt::from(2));
    let y0 = BigRational::new(BigInt::from(-1), BigInt::from(4));
    // tau_1(1/2, -1/4) = 1/4 + 1/16 + 3
    assert_eq!(t.eval_exact(&x0, &y0), BigRational::new(BigInt::from(53), BigInt::from(16)));
}

#[test]
fn decay_bound() {
    for k in [1u8, 2] {
        let mut worst: f64 = 0.0;
        for i in 0..400 {
            for j in 0..400 {
                let (x, y) = (-200.0 + i as f64, -200.0 + j as f64 * 1.01);
                let r2 = x * x + y * y;
                worst = worst.max(lump_u(k, x, y).unwrap().abs() * (1.0 + r2));
            }
        }
        assert!(worst < 20.0, "k = {k}: sup |u| (1 + r^2) = {worst}");
    }
}

#[test]
fn mapped_lump_has_the_same_relative_residual() {
    let d = derived_constants(0.8).unwrap();
    let p = PhysicalParams::new(0.8, d.beta_star + 0.2, 0.0, 0.5).unwrap();
    let map = normalization_map(&p).unwrap();
    assert_relative_eq!(map.amp, 6.0 / p.d_alpha);
    let g = lump_grid(128, 30.0, &map).unwrap();
    let zeta = mapped_lump(&g, 1, &p).unwrap();
    let (_, rp) = kp_residual_physical(&zeta, &p);
    let rel_p = rp / KpModel::physical(&p).residual_scale(&zeta);
    let gn = make_grid(128, 128, 30.0, 30.0).unwrap();
    let u = lump_field(&gn, 1, &NormalizationMap::IDENTITY).unwrap();
    let (_, rn) = kp_residual_normalized(&u);
    let rel_n = rn / KpModel::NORMALIZED.residual_scale(&u);
    assert_relative_eq!(rel_p, rel_n, max_relative = 1e-8);
    // a wrong amplitude breaks the residual
    let wrong = NormalizationMap { amp: 1.1 * map.amp, ..map };
    let z2 = lump_field(&g, 1, &wrong).unwrap();
    let (_, rw) = kp_residual_physical(&z2, &p);
    assert!(rw / KpModel::physical(&p).residual_scale(&z2) > 5.0 * rel_p);
}

#[test]
fn normalization_map_needs_beta_above_beta0() {
    let d = derived_constants(0.5).unwrap();
    let p = PhysicalParams::new(0.5, 0.9 * d.beta0, 0.0, 0.5).unwrap();
    assert!(normalization_map(&p).is_err());
}

#[test]
fn spectral_residual_regression() {
    // measured 0.18 in the quadrature norm (2.25e-3 RMS), dominated by the
    // algebraic tail across the periodic boundary
    let g = make_grid(256, 256, 40.0, 40.0).unwrap();
    let u = lump_field(&g, 1, &NormalizationMap::IDENTITY).unwrap();
    let (_, r) = kp_residual_normalized(&u);
    assert!(r < 0.25, "residual {r}");
    let rms = r / (4.0 * 40.0 * 40.0_f64).sqrt();
    assert!(rms < 5e-3, "rms {rms}");
}

#[test]
fn nondegeneracy_even_subspace_small_grid() {
    let g = make_grid(128, 128, 30.0, 30.0).unwrap();
    let rep = nondegeneracy_report(1, &g, Symmetry::Even, &NondegenOptions::default()).unwrap();
    assert_eq!(rep.verdict(), Verdict::Nondegenerate, "{rep:?}");
    assert_eq!(rep.kernel_dimension, 0);
}

#[test]
fn zero_base_state_has_no_kernel() {
    let g = make_grid(32, 32, 10.0, 10.0).unwrap();
    let prob = kpwave::problem::QuadraticProblem::from_kp(&g, &KpModel::NORMALIZED);
    let z = kpwave::RealField2D::zeros(&g);
    let opts = NondegenOptions { min_iter: 5, ..NondegenOptions::default() };
    let rep = operator_report(&prob, &z, Symmetry::Full, &opts).unwrap();
    assert!(rep.singular_values.iter().all(|s| (s - 1.0).abs() < 1e-10));
    assert_eq!(rep.kernel_dimension, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lumps_are_even_in_each_variable(x in -50.0..50.0f64, y in -50.0..50.0f64) {
        for k in [1u8, 2] {
            let u = lump_u(k, x, y).unwrap();
            prop_assert!((u - lump_u(k, -x, y).unwrap()).abs() <= 1e-14 * (1.0 + u.abs()));
            prop_assert!((u - lump_u(k, x, -y).unwrap()).abs() <= 1e-14 * (1.0 + u.abs()));
        }
    }

    #[test]
    fn tau_is_positive(x in -100.0..100.0f64, y in -100.0..100.0f64) {
        prop_assert!(tau_star(1, x, y).unwrap() > 0.0);
        prop_assert!(tau_star(2, x, y).unwrap() > 0.0);
    }

    #[test]
    fn pointwise_residual_is_tiny(x in -40.0..40.0f64, y in -40.0..40.0f64) {
        prop_assert!(kp_residual_pointwise(1, x, y).unwrap().abs() < 1e-10);
        prop_assert!(kp_residual_pointwise(2, x, y).unwrap().abs() < 1e-10);
    }
}
