use approx::assert_relative_eq;
use ndarray::Array2;
use proptest::prelude::*;
use std::f64::consts::PI;

use kpwave::dispersion::{c_fun, t_fun, PhysicalParams};
use kpwave::flatops::*;
use kpwave::{make_grid, Grid, RealField2D};

fn grid() -> Grid {
    make_grid(64, 64, PI, PI).unwrap()
}

/// A smooth field built from a few integer modes.
fn field(g: &Grid, a: [f64; 4]) -> RealField2D {
    RealField2D::from_fn(g, |x, y| {
        a[0] * x.cos() + a[1] * (x + 2.0 * y).sin() + a[2] * (2.0 * x - y).cos() + a[3] * (3.0 * x + y).sin()
    })
}

fn roll(f: &RealField2D, si: usize, sj: usize) -> RealField2D {
    let (nx, ny) = f.grid().shape();
    let v = f.values();
    let out = Array2::from_shape_fn((nx, ny), |(i, j)| v[((i + nx - si) % nx, (j + ny - sj) % ny)]);
    RealField2D::new(f.grid(), out).unwrap()
}

fn params(alpha: f64, eps: f64) -> PhysicalParams {
    PhysicalParams::new(alpha, 1.0, eps, 0.5).unwrap()
}

fn max_diff(a: &RealField2D, b: &RealField2D) -> f64 {
    a.sub(b).max_abs()
}

#[test]
fn identities_hold_to_rounding() {
    let g = grid();
    let eta = field(&g, [1.0, 0.4, -0.3, 0.2]);
    for (a, e) in [(0.0, 0.0), (0.7, 0.1), (-1.2, 0.3)] {
        for (name, d) in identity_defects(&eta, &params(a, e)).unwrap() {
            assert!(d < 1e-11, "alpha {a}, eps {e}: {name} defect {d}");
        }
    }
}

#[test]
fn h0_on_a_single_mode() {
    let g = grid();
    let f = RealField2D::from_fn(&g, |x, _| x.cos());
    let h = h0_apply(&f, 0.0);
    assert!(max_diff(&h, &f.scale(1f64.tanh())) < 1e-13);
    // k = (1, 2): |k|^2 = 5
    let f = RealField2D::from_fn(&g, |x, y| (x + 2.0 * y).sin());
    let a = 0.6;
    assert!(max_diff(&h0_apply(&f, a), &f.scale(5.0 * t_fun(5.0, a))) < 1e-12);
}

#[test]
fn h0_inverse_round_trip() {
    let g = grid();
    let f = field(&g, [0.3, -1.0, 0.5, 0.8]);
    for a in [0.0, 0.9] {
        let back = h0_apply(&h0_inverse_apply(&f, a), a);
        assert!(max_diff(&back, &f) < 1e-12);
    }
    // the mean is sent to zero
    let one = RealField2D::from_fn(&g, |_, _| 1.0);
    assert!(h0_inverse_apply(&one, 0.5).max_abs() < 1e-14);
}

#[test]
fn l_on_cos_x() {
    let g = grid();
    let f = RealField2D::from_fn(&g, |x, _| x.cos());
    let a = 0.3;
    let l = l_apply(&f, a);
    // i L cos x = alpha grad^perp cos x + c(1) grad cos x
    let c = c_fun(1.0, a);
    assert!(max_diff(&l.u1, &RealField2D::from_fn(&g, |x, _| -c * x.sin())) < 1e-12);
    assert!(max_diff(&l.u2, &RealField2D::from_fn(&g, |x, _| a * x.sin())) < 1e-12);
    let l0 = l_apply(&f, 0.0);
    assert!(max_diff(&l0.u1, &RealField2D::from_fn(&g, |x, _| -(1.0 / 1f64.tanh()) * x.sin())) < 1e-12);
    assert!(l0.u2.max_abs() < 1e-14);
}

#[test]
fn s_operators_are_explicit() {
    let g = grid();
    let eta = field(&g, [1.0, 0.5, 0.0, 0.0]);
    let p = params(0.8, 0.2);
    let [c1, c2] = p.c_vec();
    let s1 = s1_apply(&eta, &p);
    assert!(max_diff(&s1.u1, &eta.scale(c2)) < 1e-15);
    assert!(max_diff(&s1.u2, &eta.scale(-c1)) < 1e-15);
    // eta has modes up to |k1| = 1, so eta^2 is resolved exactly
    let s2 = s2_apply(&eta, &p);
    let sq = eta.pointwise_mul(&eta);
    assert!(max_diff(&s2.u1, &sq.scale(-0.4 * c1)) < 1e-12);
}

#[test]
fn operators_commute_with_translation() {
    let g = grid();
    let eta = field(&g, [1.0, 0.4, -0.3, 0.2]);
    let p = params(0.5, 0.1);
    let (si, sj) = (5, 11);
    let sh = roll(&eta, si, sj);
    let t1 = t1_apply(&eta, &p);
    assert!(max_diff(&t1_apply(&sh, &p).u1, &roll(&t1.u1, si, sj)) < 1e-12);
    let j = j2_apply(&eta, &p);
    assert!(max_diff(&j2_apply(&sh, &p), &roll(&j, si, sj)) < 1e-12);
}

#[test]
fn m_bilinear_is_symmetric_and_matches_its_symbol() {
    let g = grid();
    let p = params(0.9, 0.0);
    let v = field(&g, [1.0, 0.0, 0.2, 0.0]);
    let w = field(&g, [0.0, 1.0, 0.0, -0.4]);
    assert!(max_diff(&m_bilinear(&v, &w, &p).unwrap(), &m_bilinear(&w, &v, &p).unwrap()) < 1e-12);

    // plane waves: m(cos px, cos qx) = (1/4) sum over signs of m(s p, t q) e^{i (s p + t q).x}
    let (pk, qk) = ([1.0, 2.0], [2.0, -1.0]);
    let v = RealField2D::from_fn(&g, |x, y| (pk[0] * x + pk[1] * y).cos());
    let w = RealField2D::from_fn(&g, |x, y| (qk[0] * x + qk[1] * y).cos());
    let m = m_bilinear(&v, &w, &p).unwrap();
    let expect = RealField2D::from_fn(&g, |x, y| {
        let mut s = 0.0;
        for sp in [-1.0, 1.0] {
            for sq in [-1.0, 1.0] {
                let a = [sp * pk[0], sp * pk[1]];
                let b = [sq * qk[0], sq * qk[1]];
                let phase = (a[0] + b[0]) * x + (a[1] + b[1]) * y;
                s += 0.25 * m_symbol(a, b, &p) * phase.cos();
            }
        }
        s
    });
    assert!(max_diff(&m, &expect) < 1e-12);
}

#[test]
fn m_symbol_is_symmetric() {
    let p = params(1.1, 0.0);
    for (a, b) in [([0.3, 0.1], [-0.7, 0.2]), ([1.0, 0.0], [0.0, 1.0]), ([0.5, 0.5], [-0.5, -0.5])] {
        assert_relative_eq!(m_symbol(a, b, &p), m_symbol(b, a, &p), max_relative = 1e-13, epsilon = 1e-15);
    }
}

#[test]
fn m1_is_bilinear() {
    let g = grid();
    let a = 0.4;
    let e1 = field(&g, [1.0, 0.0, 0.3, 0.0]);
    let e2 = field(&g, [0.0, 0.5, 0.0, 0.2]);
    let gv = VectorField2D::new(field(&g, [0.2, 0.0, 0.1, 1.0]), field(&g, [0.0, 1.0, 0.0, 0.3])).unwrap();
    let lhs = m1_apply(&e1.axpy(2.0, &e2), &gv, a).unwrap();
    let rhs = m1_apply(&e1, &gv, a).unwrap().add(&m1_apply(&e2, &gv, a).unwrap().scale(2.0));
    assert!(lhs.sub(&rhs).max_abs() < 1e-12);
    let other = make_grid(32, 32, PI, PI).unwrap();
    assert!(m1_apply(&RealField2D::zeros(&other), &gv, a).is_err());
}

#[test]
fn m0_kills_gradients_only() {
    let g = grid();
    let phi = field(&g, [0.3, 1.0, -0.7, 0.1]);
    let a = -0.8;
    assert!(m0_apply(&VectorField2D::gradient(&phi), a).max_abs() < 1e-12);
    let gp = VectorField2D::gradient(&phi).perp();
    assert!(m0_apply(&gp, a).max_abs() > 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identities_for_random_parameters(
        a in -1.4..1.4f64,
        e in 0.0..0.5f64,
        c in prop::array::uniform4(-1.0..1.0f64),
    ) {
        let g = make_grid(32, 32, PI, PI).unwrap();
        let eta = field(&g, c);
        let scale = eta.max_abs().max(1e-3);
        let eta = eta.scale(1.0 / scale);
        for (name, d) in identity_defects(&eta, &params(a, e)).unwrap() {
            prop_assert!(d < 1e-10, "{} defect {}", name, d);
        }
    }

    #[test]
    fn j2_scales_quadratically(k in -3.0..3.0f64) {
        let g = make_grid(32, 32, PI, PI).unwrap();
        let eta = field(&g, [1.0, 0.5, -0.2, 0.1]);
        let p = params(0.6, 0.1);
        let lhs = j2_apply(&eta.scale(k), &p);
        let rhs = j2_apply(&eta, &p).scale(k * k);
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-11 * (1.0 + k * k));
    }
}
