use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kpwave::band::{admissible_band, cutoff_chi, cutoff_chi_eps, in_band, in_band_eps};
use kpwave::norms::*;
use kpwave::product::{dealiased_product, dealiased_square};
use kpwave::{make_grid, make_grid_strict, Error, MultiplierSpec, RealField2D, SingularPolicy};

fn random(n: usize, lx: f64, ly: f64, seed: u64) -> RealField2D {
    let g = make_grid(n, n, lx, ly).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    RealField2D::from_fn(&g, |_, _| rng.random_range(-1.0..1.0))
}

/// Keep modes with `0 < |k1| <= kmax`, `|k2| <= kmax`.
fn low_pass(f: &RealField2D, kmax: f64) -> RealField2D {
    let g = f.grid().clone();
    let m = MultiplierSpec::from_real_symbol(&g, SingularPolicy::ZeroOut, |a, b| {
        Some(if a != 0.0 && a.abs() <= kmax && b.abs() <= kmax { 1.0 } else { 0.0 })
    });
    m.apply_real(f).unwrap()
}

#[test]
fn grid_validation() {
    assert!(make_grid(0, 8, 1.0, 1.0).is_err());
    assert!(make_grid(7, 8, 1.0, 1.0).is_err());
    assert!(make_grid(8, 8, 0.0, 1.0).is_err());
    assert!(make_grid(8, 8, 1.0, f64::INFINITY).is_err());
    assert!(make_grid_strict(12, 8, 1.0, 1.0).is_err());
    assert!(make_grid(12, 8, 1.0, 1.0).is_ok());
}

#[test]
fn grid_coordinates_and_wavenumbers() {
    let g = make_grid(8, 4, 2.0, 3.0).unwrap();
    assert_eq!(g.x(0), -2.0);
    assert_relative_eq!(g.x(4), 0.0, epsilon = 1e-15);
    assert_relative_eq!(g.dx(), 0.5);
    assert_relative_eq!(g.k1()[1], PI / 2.0);
    assert_relative_eq!(g.k1()[7], -PI / 2.0);
    assert_relative_eq!(g.k1()[4], -2.0 * PI);
    assert_relative_eq!(g.nyquist_x(), 2.0 * PI);
    assert_relative_eq!(g.k2()[1], PI / 3.0);
}

#[test]
fn fields_on_different_grids_are_rejected() {
    let a = random(8, 1.0, 1.0, 1);
    let b = random(8, 2.0, 1.0, 2);
    assert!(matches!(dealiased_product(&a, &b), Err(Error::GridMismatch(_))));
    let g = make_grid(8, 8, 1.0, 1.0).unwrap();
    assert!(RealField2D::new(&g, ndarray::Array2::zeros((8, 4))).is_err());
}

#[test]
fn derivative_of_a_resolved_mode_is_exact() {
    let g = make_grid(32, 16, 3.0, 2.0).unwrap();
    let k = 3.0 * PI / 3.0;
    let f = RealField2D::from_fn(&g, |x, y| (k * x).sin() * (PI * y / 2.0).cos());
    let d = MultiplierSpec::ddx(&g).apply_real(&f).unwrap();
    let exact = RealField2D::from_fn(&g, |x, y| k * (k * x).cos() * (PI * y / 2.0).cos());
    assert!(d.sub(&exact).max_abs() < 1e-12);
    let dy = MultiplierSpec::ddy(&g).apply_real(&f).unwrap();
    let exact = RealField2D::from_fn(&g, |x, y| -(PI / 2.0) * (k * x).sin() * (PI * y / 2.0).sin());
    assert!(dy.sub(&exact).max_abs() < 1e-12);
}

#[test]
fn dealiased_product_of_resolved_modes_is_pointwise() {
    let f = low_pass(&random(32, 4.0, 4.0, 3), 0.3 * 8.0 * PI / 4.0);
    let g = low_pass(&random(32, 4.0, 4.0, 4), 0.3 * 8.0 * PI / 4.0);
    let p = dealiased_product(&f, &g).unwrap();
    assert!(p.sub(&f.pointwise_mul(&g)).max_abs() < 1e-13);
    assert!(dealiased_square(&f).sub(&f.pointwise_mul(&f)).max_abs() < 1e-13);
}

#[test]
fn dealiased_product_drops_unresolved_harmonics() {
    // cos(k x)^2 = (1 + cos 2kx)/2 with 2k beyond Nyquist keeps only 1/2
    let g = make_grid(16, 4, PI, PI).unwrap();
    let f = RealField2D::from_fn(&g, |x, _| (6.0 * x).cos());
    let sq = dealiased_square(&f);
    assert!(sq.sub(&RealField2D::from_fn(&g, |_, _| 0.5)).max_abs() < 1e-13);
}

#[test]
fn multiplier_composition_and_reality() {
    let f = random(16, 2.0, 3.0, 5);
    let g = f.grid().clone();
    let a = MultiplierSpec::from_real_symbol(&g, SingularPolicy::ZeroOut, |k1, k2| Some(1.0 + k1 * k1 + k2 * k2));
    let b = MultiplierSpec::ddx(&g);
    let ab = a.compose(&b).apply_real(&f).unwrap();
    let seq = a.apply_real(&b.apply_real(&f).unwrap()).unwrap();
    assert!(ab.sub(&seq).max_abs() < 1e-10);
    assert!(a.reality_defect() < 1e-15);
    let lim = MultiplierSpec::from_real_symbol(&g, SingularPolicy::ValueAtLimit(Complex64::new(7.0, 0.0)), |k1, _| {
        (k1 != 0.0).then_some(1.0)
    });
    assert_eq!(lim.at(0, 1), Complex64::new(7.0, 0.0));
    assert_eq!(lim.at(1, 1), Complex64::new(1.0, 0.0));
}

#[test]
fn band_membership() {
    assert!(in_band(0.0, 0.0, 0.5));
    assert!(!in_band(0.0, 0.1, 0.5));
    assert!(in_band(0.5, 0.25, 0.5));
    assert!(!in_band(0.6, 0.0, 0.5));
    assert!(!in_band(0.4, 0.21, 0.5));
    assert!(in_band_eps(100.0, 1e4, 0.5, 0.0));
    assert!(in_band_eps(5.0, 2.0, 0.5, 0.1));
    assert!(!in_band_eps(5.0, 30.0, 0.5, 0.1));
    let g = make_grid(16, 16, 10.0, 10.0).unwrap();
    assert!(cutoff_chi(&g, 0.0).is_err());
    assert!(cutoff_chi_eps(&g, 0.5, -1.0).is_err());
}

#[test]
fn band_projection_is_idempotent_and_avoids_k1_zero() {
    let f = random(32, 20.0, 40.0, 6);
    let chi = admissible_band(f.grid(), 0.5, 0.2).unwrap();
    let once = chi.apply_real(&f).unwrap();
    let twice = chi.apply_real(&once).unwrap();
    assert!(once.sub(&twice).max_abs() < 1e-15);
    let s = once.transform();
    for j in 0..32 {
        assert!(s.coeffs()[[0, j]].norm() < 1e-12);
    }
    assert!(norm_ys(&once, 1.0).is_ok());
}

#[test]
fn y_norm_is_infinite_on_the_k1_zero_line() {
    let g = make_grid(16, 16, 5.0, 5.0).unwrap();
    let f = RealField2D::from_fn(&g, |_, y| (PI * y / 5.0).cos());
    assert!(matches!(norm_ys(&f, 1.0), Err(Error::InfiniteNorm(_))));
    assert!(norm_scaled(&f, 0.1).is_err());
    assert!(norm_scaled(&RealField2D::zeros(&g), 0.0).is_err());
}

#[test]
fn single_mode_norms() {
    // f = cos(k1 x) cos(k2 y): ||f||_0^2 = Lx Ly and the weights are exact
    let (lx, ly) = (PI, 2.0 * PI);
    let g = make_grid(16, 16, lx, ly).unwrap();
    let (k1, k2) = (2.0, 1.5);
    let f = RealField2D::from_fn(&g, |x, y| (k1 * x).cos() * (k2 * y).cos());
    let l2 = (lx * ly).sqrt();
    assert_relative_eq!(norm_l2(&f), l2, max_relative = 1e-13);
    let w = 1.0 + k1 * k1 + (k2 / k1).powi(2);
    assert_relative_eq!(norm_ys(&f, 1.0).unwrap(), l2 * w.sqrt(), max_relative = 1e-13);
    assert_relative_eq!(norm_ys(&f, 1.75).unwrap(), l2 * w.powf(0.875), max_relative = 1e-13);
    assert_relative_eq!(sobolev_hs(&f, 2.0), l2 * (1.0 + k1 * k1 + k2 * k2), max_relative = 1e-13);
    let eps = 0.3;
    let ws = 1.0 + (k1 * k1 + (k2 / k1).powi(2)) / (eps * eps);
    assert_relative_eq!(norm_scaled(&f, eps).unwrap(), l2 * ws.sqrt(), max_relative = 1e-13);
    assert_relative_eq!(lp_norm(&f, 2.0), l2, max_relative = 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip(seed in 0u64..1000, lx in 0.5..50.0f64, ly in 0.5..50.0f64) {
        let f = random(16, lx, ly, seed);
        prop_assert!(f.transform().inverse().sub(&f).max_abs() < 1e-13);
        prop_assert!(f.transform().hermitian_defect() < 1e-13);
    }

    #[test]
    fn parseval(seed in 0u64..1000, lx in 0.5..50.0f64, ly in 0.5..50.0f64) {
        let f = random(16, lx, ly, seed);
        let spec = weighted_sum(&f.transform(), |_, _| 1.0);
        let phys = f.norm_l2().powi(2);
        prop_assert!((spec - phys).abs() <= 1e-12 * phys);
        prop_assert!((sobolev_hs(&f, 0.0) - f.norm_l2()).abs() <= 1e-12 * f.norm_l2());
    }

    #[test]
    fn sup_bounded_by_fourier_l1(seed in 0u64..1000, l in 0.5..20.0f64) {
        let f = random(16, l, 2.0 * l, seed);
        prop_assert!(f.max_abs() <= fourier_l1(&f) / (2.0 * PI) * (1.0 + 1e-12));
    }

    #[test]
    fn y_norms_are_monotone_in_s(seed in 0u64..1000, s in 0.0..2.0f64) {
        let f = low_pass(&random(16, 8.0, 8.0, seed), 1e9);
        let a = norm_ys(&f, s).unwrap();
        let b = norm_ys(&f, s + 0.5).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-14));
        prop_assert!(norm_l2(&f) <= a * (1.0 + 1e-14));
        // the x derivative is controlled by Y_1
        let fx = MultiplierSpec::ddx(f.grid()).apply_real(&f).unwrap();
        prop_assert!(norm_l2(&fx) <= norm_ys(&f, 1.0).unwrap() * (1.0 + 1e-14));
    }

    #[test]
    fn scaled_norm_decreases_in_eps(seed in 0u64..1000, e in 0.05..1.0f64) {
        let f = low_pass(&random(16, 8.0, 8.0, seed), 1e9);
        prop_assert!(norm_scaled(&f, e).unwrap() >= norm_scaled(&f, 2.0 * e).unwrap());
        prop_assert!((norm_scaled(&f, 1.0).unwrap() - norm_ys(&f, 1.0).unwrap()).abs() < 1e-12 * norm_ys(&f, 1.0).unwrap());
    }

    #[test]
    fn product_is_commutative_and_bilinear(seed in 0u64..1000, a in -3.0..3.0f64) {
        let f = random(16, 3.0, 3.0, seed);
        let g = random(16, 3.0, 3.0, seed + 1);
        let h = random(16, 3.0, 3.0, seed + 2);
        let fg = dealiased_product(&f, &g).unwrap();
        prop_assert!(fg.sub(&dealiased_product(&g, &f).unwrap()).max_abs() < 1e-13);
        let lhs = dealiased_product(&f.axpy(a, &h), &g).unwrap();
        let rhs = fg.axpy(a, &dealiased_product(&h, &g).unwrap());
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-12);
    }
}
