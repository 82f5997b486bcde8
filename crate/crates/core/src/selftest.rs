//! Fast invariant suite over all modules, for the `selftest` command.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constcheck::{b_symbol, Item};
use crate::dispersion::{
    c_fun, derived_constants, g_tilde, kappa, kappa_min, t_fun, unit_identity, verify_no_nonzero_roots,
    PhysicalParams,
};
use crate::error::Result;
use crate::flatops::{h0_apply, j2_apply, j2_from_t, m0_apply, m_bilinear, s1_apply, t1_apply, VectorField2D};
use crate::grid::{make_grid, RealField2D};
use crate::io::{read_field_binary, write_field_binary};
use crate::lumps::{kp_residual_exact, lump_u};
use crate::norms::weighted_sum;
use crate::reconstruct::{reconstruct_eta, trivial_flow};
use crate::solver::fixed_point_map;

/// One row of the suite.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, value: f64, tol: f64) -> Check {
    Check { name, passed: value.is_finite() && value <= tol, detail: format!("{value:.3e} (tol {tol:.0e})") }
}

fn run(name: &'static str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check { name, passed: false, detail: e.to_string() })
}

fn random_field(n: usize, l: f64, seed: u64) -> Result<RealField2D> {
    let g = make_grid(n, n, l, l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = RealField2D::from_fn(&g, |_, _| rng.random_range(-1.0..1.0));
    // keep only well-resolved modes so that products are exact under dealiasing
    let mut s = f.transform();
    let (k1, k2) = (g.k1().to_vec(), g.k2().to_vec());
    let kmax = 0.3 * g.nyquist_x();
    s.coeffs_mut().indexed_iter_mut().for_each(|((i, j), c)| {
        if k1[i].abs() > kmax || k2[j].abs() > kmax || k1[i] == 0.0 {
            *c = 0.0.into();
        }
    });
    Ok(s.inverse())
}

/// Run every check and return the rows in a fixed order.
pub fn run_selftest() -> Vec<Check> {
    vec![
        run("constants: beta0 = beta* = 1/3 as alpha -> 0", || {
            let d = derived_constants(1e-7)?;
            Ok(check("constants: beta0 = beta* = 1/3 as alpha -> 0", (d.beta0 - 1.0 / 3.0).abs().max((d.beta_star - 1.0 / 3.0).abs()), 1e-12))
        }),
        run("dispersion: t(mu) c(mu) = 1", || {
            let e = (0..=100)
                .map(|i| {
                    let mu = i as f64;
                    (t_fun(mu, 0.7) * c_fun(mu, 0.7) - 1.0).abs()
                })
                .fold(0.0, f64::max);
            Ok(check("dispersion: t(mu) c(mu) = 1", e, 1e-12))
        }),
        run("dispersion: alpha c01 (-c02 + c01 cot alpha) = 1", || {
            let e = [0.3, 0.7, 1.2]
                .iter()
                .map(|&a| PhysicalParams::new(a, 1.0, 0.0, 0.5).map(|p| (unit_identity(&p) - 1.0).abs()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(check("dispersion: alpha c01 (-c02 + c01 cot alpha) = 1", e, 1e-12))
        }),
        run("dispersion: g~(0, 0) = 0", || {
            let p = PhysicalParams::new(0.8, 1.0, 0.0, 0.5)?;
            Ok(check("dispersion: g~(0, 0) = 0", g_tilde(0.0, 0.0, &p).abs(), 1e-12))
        }),
        run("root scan: c < kappa_min at alpha = 0.5", || {
            let d = derived_constants(0.5)?;
            let p = PhysicalParams::new(0.5, d.beta_star + 0.1, 0.0, 0.5)?;
            let r = verify_no_nonzero_roots(&p, 1e-6, 100.0, 10_000)?;
            let brute = (0..2001)
                .map(|i| -1.5 + 3.0 * i as f64 / 2000.0)
                .filter_map(|t| kappa(2.0, t, &p).ok())
                .fold(f64::INFINITY, f64::min);
            let mut c = check("root scan: c < kappa_min at alpha = 0.5", r.max_gap, -1e-12);
            c.passed &= brute >= kappa_min(2.0, &p) - 1e-12;
            Ok(c)
        }),
        run("lumps: exact residual of u1, u2 at rational points", || {
            let mut worst = 0usize;
            for k in [1u8, 2] {
                for (a, b) in [(1, 3), (-7, 2), (5, -11)] {
                    let x = BigRational::new(BigInt::from(a), BigInt::from(4));
                    let y = BigRational::new(BigInt::from(b), BigInt::from(5));
                    if !kp_residual_exact(k, &x, &y)?.is_zero() {
                        worst += 1;
                    }
                }
            }
            Ok(check("lumps: exact residual of u1, u2 at rational points", worst as f64, 0.0))
        }),
        run("lumps: u1(0, 0) = -4/3 and evenness", || {
            let e = (lump_u(1, 0.0, 0.0)? + 4.0 / 3.0).abs().max((lump_u(2, 0.7, -1.3)? - lump_u(2, -0.7, 1.3)?).abs());
            Ok(check("lumps: u1(0, 0) = -4/3 and evenness", e, 1e-12))
        }),
        run("grid: round trip and Parseval", || {
            let f = RealField2D::from_fn(&make_grid(64, 32, 3.0, 5.0)?, |x, y| (x * y).sin() + 0.1 * x);
            let back = f.transform().inverse();
            let rt = back.sub(&f).max_abs();
            let spec = weighted_sum(&f.transform(), |_, _| 1.0).sqrt();
            let par = (spec - f.norm_l2()).abs() / f.norm_l2();
            Ok(check("grid: round trip and Parseval", rt.max(par), 1e-12))
        }),
        run("flatops: H(0) cos x = tanh(1) cos x at alpha = 0", || {
            let g = make_grid(32, 8, std::f64::consts::PI, 1.0)?;
            let f = RealField2D::from_fn(&g, |x, _| x.cos());
            let e = h0_apply(&f, 0.0).sub(&f.scale(1f64.tanh())).max_abs();
            Ok(check("flatops: H(0) cos x = tanh(1) cos x at alpha = 0", e, 1e-12))
        }),
        run("flatops: M0 grad = 0", || {
            let phi = random_field(32, 6.0, 3)?;
            let e = m0_apply(&VectorField2D::gradient(&phi), 0.8).max_abs();
            Ok(check("flatops: M0 grad = 0", e, 1e-12))
        }),
        run("flatops: T1 = M0 S1 and J2 = (1 - eps^2)^2 m(eta, eta)", || {
            let eta = random_field(32, 6.0, 5)?.scale(0.3);
            let p = PhysicalParams::new(0.8, 1.0, 0.3, 0.5)?;
            let t = t1_apply(&eta, &p).sub(&m0_apply(&s1_apply(&eta, &p), p.alpha)).max_abs();
            let f = (1.0 - p.eps * p.eps).powi(2);
            let j = j2_apply(&eta, &p).sub(&m_bilinear(&eta, &eta, &p)?.scale(f)).max_abs();
            let jt = j2_apply(&eta, &p).sub(&j2_from_t(&eta, &p)).max_abs();
            Ok(check("flatops: T1 = M0 S1 and J2 = (1 - eps^2)^2 m(eta, eta)", t.max(j).max(jt), 1e-11))
        }),
        run("constcheck: B(0) = 0 for the bilinear items", || {
            let p = PhysicalParams::new(0.8, 1.0, 0.1, 0.5)?;
            let e = [Item::Perp, Item::Div, Item::MForm]
                .iter()
                .filter_map(|&it| b_symbol(it, 0.0, &p, [1.0, 1.0]))
                .fold(0.0, |a: f64, b| a.max(b.abs()));
            Ok(check("constcheck: B(0) = 0 for the bilinear items", e, 1e-10))
        }),
        run("solver: zero is a fixed point", || {
            let g = make_grid(32, 32, 20.0, 20.0)?;
            let p = PhysicalParams::new(0.0, 1.0, 0.2, 0.5)?;
            let z = fixed_point_map(&RealField2D::zeros(&g), &p)?;
            Ok(check("solver: zero is a fixed point", z.max_abs(), 0.0))
        }),
        run("reconstruct: sign flip is exact", || {
            let z = random_field(32, 10.0, 9)?;
            let phys = make_grid(24, 24, 30.0, 200.0)?;
            let a = reconstruct_eta(&z, 0.2, &phys)?.eta;
            let b = reconstruct_eta(&z.scale(-1.0), 0.2, &phys)?.eta;
            Ok(check("reconstruct: sign flip is exact", a.add(&b).max_abs(), 0.0))
        }),
        run("trivial flow: |u*(z)| = |c|", || {
            let c = [0.6, -1.1];
            let u = trivial_flow(0.9, c, -0.5);
            let e = ((u[0] * u[0] + u[1] * u[1]).sqrt() - c[0].hypot(c[1])).abs() + u[2].abs();
            Ok(check("trivial flow: |u*(z)| = |c|", e, 1e-14))
        }),
        run("io: binary field round trip", || {
            let f = random_field(16, 2.0, 13)?;
            let path = std::env::temp_dir().join(format!("kpwave-selftest-{}.bin", std::process::id()));
            write_field_binary(&path, &f)?;
            let g = read_field_binary(&path);
            let _ = std::fs::remove_file(&path);
            let g = g?;
            let same = g.values() == f.values() && g.grid().lx() == f.grid().lx();
            Ok(check("io: binary field round trip", if same { 0.0 } else { 1.0 }, 0.0))
        }),
    ]
}
