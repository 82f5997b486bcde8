//! Acceptance suite: one line per criterion with its measured values and
//! runtime. Exits nonzero if any criterion fails or exceeds its time budget.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kpwave::constcheck::{multiplier_const_checks, ConstCheckOptions, DEFAULT_BAND};
use kpwave::dispersion::*;
use kpwave::lumps::*;
use kpwave::problem::{spectral_norm, QuadraticProblem};
use kpwave::solver::*;
use kpwave::{make_grid, RealField2D};

type Outcome = Result<(bool, String), String>;

fn check(id: usize, title: &str, budget_s: u64, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let res = f();
    let el = t.elapsed();
    let in_time = el <= Duration::from_secs(budget_s);
    let (ok, detail) = match res {
        Ok((ok, d)) => (ok && in_time, d),
        Err(e) => (false, format!("error: {e}")),
    };
    let tag = if ok { "PASS" } else { "FAIL" };
    let time = format!("{:.2} s of {budget_s} s", el.as_secs_f64());
    println!("criterion {id:>2} {tag}  {title} [{time}]  {detail}");
    ok
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1_constants() -> Outcome {
    let d0 = derived_constants(0.0).map_err(e2s)?;
    let dt = derived_constants(1e-8).map_err(e2s)?;
    let third = 1.0 / 3.0;
    let mut dev: f64 = 0.0;
    for d in [d0, dt] {
        dev = dev.max((d.beta0 - third).abs()).max((d.beta_star - third).abs());
    }
    let mut min_gap = f64::INFINITY;
    let mut min_scaled = f64::INFINITY;
    for i in 1..=1500 {
        let a = 1.5 * i as f64 / 1501.0;
        let g = beta_gap(a).map_err(e2s)?;
        min_gap = min_gap.min(g);
        min_scaled = min_scaled.min(g / (a * a));
    }
    let gap0 = beta_gap(0.0).map_err(e2s)?;
    let ok = dev < 1e-12 && min_gap > 0.0 && gap0 == 0.0;
    Ok((ok, format!(
        "|beta0 - 1/3|, |beta* - 1/3| <= {dev:.1e}; min (beta* - beta0) on (0, 1.5) = {min_gap:.3e} > 0, min of gap/alpha^2 = {min_scaled:.4}; gap at 0 = {gap0}"
    )))
}

fn c2_identities() -> Outcome {
    let mut tc: f64 = 0.0;
    for a in [0.0, 0.3, 0.7, 1.2, 1.5] {
        for i in 0..=10_000 {
            let mu = 100.0 * i as f64 / 10_000.0;
            tc = tc.max((t_fun(mu, a) * c_fun(mu, a) - 1.0).abs());
        }
    }
    let mut unit: f64 = 0.0;
    for a in [0.3, 0.7, 1.2] {
        let p = PhysicalParams::new(a, 1.0, 0.0, 0.5).map_err(e2s)?;
        unit = unit.max((unit_identity(&p) - 1.0).abs());
    }
    let mut g0: f64 = 0.0;
    for a in [0.0, 0.3, 0.7, 1.2] {
        let p = PhysicalParams::new(a, 1.0, 0.0, 0.5).map_err(e2s)?;
        g0 = g0.max(g_tilde(0.0, 0.0, &p).abs());
    }
    let ok = tc < 1e-12 && unit < 1e-12 && g0 < 1e-12;
    Ok((ok, format!("max |t c - 1| = {tc:.1e}; max |unit - 1| = {unit:.1e}; max |g~(0,0)| = {g0:.1e}")))
}

fn c3_root_scan() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [0.0, 0.5, 1.0] {
        let d = derived_constants(a).map_err(e2s)?;
        let p = PhysicalParams::new(a, d.beta_star + 0.1, 0.0, 0.5).map_err(e2s)?;
        let r = verify_no_nonzero_roots(&p, 1e-6, 100.0, 10_000).map_err(e2s)?;
        let mut brute_dev: f64 = 0.0;
        for mu in [0.0, 0.3, 2.0, 25.0, 100.0] {
            let n = 100_000;
            let brute = (0..=n)
                .map(|i| -1.5 + 3.0 * i as f64 / n as f64)
                .map(|t| kappa(mu, t, &p))
                .collect::<kpwave::Result<Vec<_>>>()
                .map_err(e2s)?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let km = kappa_min(mu, &p);
            brute_dev = brute_dev.max((brute - km).abs() / km.abs());
        }
        ok &= r.passed() && brute_dev < 1e-8;
        parts.push(format!("alpha {a}: max (c - kappa_min) = {:.3e}, brute rel dev {brute_dev:.1e}", r.max_gap));
    }
    Ok((ok, parts.join("; ")))
}

fn c4_lumps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut sym: f64 = 0.0;
    for k in [1u8, 2] {
        for _ in 0..1000 {
            let (x, y) = (rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
            worst = worst.max(kp_residual_pointwise(k, x, y).map_err(e2s)?.abs());
            let u = lump_u(k, x, y).map_err(e2s)?;
            sym = sym.max((u - lump_u(k, -x, y).map_err(e2s)?).abs());
            sym = sym.max((u - lump_u(k, x, -y).map_err(e2s)?).abs());
        }
    }
    let mut decay = [0.0_f64; 2];
    for (slot, k) in [1u8, 2].into_iter().enumerate() {
        for i in 0..=600 {
            for j in 0..=600 {
                let (x, y) = (-300.0 + i as f64, -300.0 + j as f64);
                let v = lump_u(k, x, y).map_err(e2s)?.abs() * (1.0 + x * x + y * y);
                decay[slot] = decay[slot].max(v);
            }
        }
    }
    // (1 + r^2)|u| along a ray settles to a constant
    let far = |k: u8, r: f64| lump_u(k, r, 0.0).map(|u| u.abs() * (1.0 + r * r));
    let tail = (far(1, 1e4).map_err(e2s)? / far(1, 1e3).map_err(e2s)? - 1.0).abs();
    let ok = worst < 1e-10 && sym < 1e-14 && decay[0] < 20.0 && decay[1] < 20.0 && tail < 1e-3;
    Ok((ok, format!(
        "max |residual| = {worst:.1e} over 2 x 1000 points; evenness defect {sym:.1e}; sup (1+r^2)|u_k| = {:.3}, {:.3}; tail ratio drift {tail:.1e}",
        decay[0], decay[1]
    )))
}

fn c5_quadratic_model() -> Outcome {
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for (a, b) in [(0.0, 1.0), (0.8, 0.7), (1.3, 2.0)] {
        let p = PhysicalParams::new(a, b, 0.0, 0.5).map_err(e2s)?;
        let f = |k1: f64, m: f64| g_tilde(k1, m, &p);
        let gxx = (f(h, 0.0) - 2.0 * f(0.0, 0.0) + f(-h, 0.0)) / (h * h);
        let gmm = (f(0.0, h) - 2.0 * f(0.0, 0.0) + f(0.0, -h)) / (h * h);
        let sec2 = 1.0 / (a / 2.0).cos().powi(2);
        worst = worst.max((gxx / 2.0 / (b - p.beta0) - 1.0).abs());
        worst = worst.max((gmm / 2.0 / sec2 - 1.0).abs());
    }
    Ok((worst < 1e-6, format!("max relative deviation {worst:.2e} over 3 (alpha, beta) pairs")))
}

fn c6_constants() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [0.4, 0.8] {
        let d = derived_constants(a).map_err(e2s)?;
        let p = PhysicalParams::new(a, d.beta_star + 0.1, 0.0, 0.5).map_err(e2s)?;
        let r = multiplier_const_checks(&p, &DEFAULT_BAND, &ConstCheckOptions::default()).map_err(e2s)?;
        ok &= r.passed();
        let orders: Vec<String> = r
            .items
            .iter()
            .map(|it| {
                let e = it.fit.map_or(f64::NAN, |f| f.exponent);
                format!("{}={e:.2}/{}", it.item.label(), it.item.expected_order())
            })
            .collect();
        parts.push(format!("alpha {a}: {}", orders.join(" ")));
    }
    Ok((ok, parts.join("; ")))
}

fn c7_nondegeneracy() -> Outcome {
    let opts = NondegenOptions::default();
    let mut reps = Vec::new();
    for n in [192usize, 256] {
        let g = make_grid(n, n, 40.0, 40.0).map_err(e2s)?;
        let full = nondegeneracy_report(1, &g, Symmetry::Full, &opts).map_err(e2s)?;
        let even = nondegeneracy_report(1, &g, Symmetry::Even, &opts).map_err(e2s)?;
        reps.push((n, full, even));
    }
    let (_, f256, e256) = &reps[1];
    let (_, f192, e192) = &reps[0];
    let stable = |a: f64, b: f64| (a / b - 1.0).abs() <= 0.2;
    let ok = f256.kernel_dimension == 2
        && f256.verdict() == Verdict::Nondegenerate
        && e256.gap > GAP_MIN
        && e256.verdict() == Verdict::Nondegenerate
        && stable(f192.gap, f256.gap)
        && stable(e192.gap, e256.gap);
    let fmt = |v: &[f64]| v.iter().map(|s| format!("{s:.3e}")).collect::<Vec<_>>().join(", ");
    Ok((ok, format!(
        "full 256^2: [{}] kernel {}; even 256^2 gap {:.4}; gaps 192^2 -> 256^2: full {:.4} -> {:.4}, even {:.4} -> {:.4}",
        fmt(&f256.singular_values),
        f256.kernel_dimension,
        e256.gap,
        f192.gap,
        f256.gap,
        e192.gap,
        e256.gap
    )))
}

fn c8_solver_oracle() -> Outcome {
    let p = PhysicalParams::new(0.0, 1.0, 0.0, 0.5).map_err(e2s)?;
    let g = lump_grid(256, 40.0, &normalization_map(&p).map_err(e2s)?).map_err(e2s)?;
    let lump = mapped_lump(&g, 1, &p).map_err(e2s)?;
    let (_, lump_res) = kp_residual_physical(&lump, &p);
    let cfg = SolverConfig { warmup_steps: 0, ..SolverConfig::default() };
    let r = solve(&lump, &p, &cfg, None).map_err(e2s)?;
    let ok = r.converged && r.iterations <= 3 && r.residual_norm <= 10.0 * lump_res;
    Ok((ok, format!(
        "Newton iterations {} (converged {}), final residual {:.3e}, standalone lump residual {lump_res:.3e}",
        r.iterations, r.converged, r.residual_norm
    )))
}

fn c9_continuation() -> Outcome {
    let d = derived_constants(0.8).map_err(e2s)?;
    let eps = [0.2, 0.1, 0.05];
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, b) in [(0.0, 1.0), (0.8, d.beta_star + 0.2)] {
        let p = PhysicalParams::new(a, b, 0.0, 0.5).map_err(e2s)?;
        let g = lump_grid(256, 40.0, &normalization_map(&p).map_err(e2s)?).map_err(e2s)?;
        let c = continuation_in_eps(1, &eps, &p, &SolverConfig::default(), &g).map_err(e2s)?;
        let pfit = c.fit_y1.map_or(f64::NAN, |f| f.exponent);
        ok &= c.all_converged() && c.monotone() && pfit > 0.0;
        let dists: Vec<String> = c.distances.iter().map(|x| format!("{:.3e}", x.y1)).collect();
        parts.push(format!(
            "({a}, {b:.4}): converged {}, Y1 distances [{}], p = {pfit:.3}",
            c.all_converged(),
            dists.join(", ")
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn c10_replace() -> Outcome {
    let p = PhysicalParams::new(0.0, 1.0, 0.0, 0.5).map_err(e2s)?;
    let mut ratios = Vec::new();
    for e in [0.2, 0.1, 0.05] {
        ratios.push(replace_g_with_l_check(&p.with_eps(e).map_err(e2s)?, 0.75, 401).map_err(e2s)?.max_ratio);
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    Ok((hi / lo < 2.0 && lo > 0.0, format!("max ratios {ratios:.4?}, spread {:.3}", hi / lo)))
}

fn c11_consistency() -> Outcome {
    let p = PhysicalParams::new(0.5, 1.0, 0.1, 0.5).map_err(e2s)?;
    let g = lump_grid(128, 30.0, &normalization_map(&p).map_err(e2s)?).map_err(e2s)?;
    let prob = QuadraticProblem::reduced(&g, &p).map_err(e2s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut rand_field = || RealField2D::from_fn(&g, |_, _| rng.random_range(-1.0..1.0));
    let z = prob.project_spec(&rand_field().transform());
    let v = prob.project_spec(&rand_field().transform());
    let jv = prob.jacobian_at(&z).apply(&v).map_err(e2s)?;
    // the residual is quadratic, so a unit central difference is exact
    let one = Complex64::new(1.0, 0.0);
    let fd = prob.residual_spec(&z.add(&v.scale(one))).sub(&prob.residual_spec(&z.sub(&v.scale(one)))).scale(Complex64::new(0.5, 0.0));
    let jac = spectral_norm(&jv.sub(&fd)) / spectral_norm(&jv);

    let f = rand_field();
    let s = f.transform();
    let rt = s.inverse().sub(&f).max_abs() / f.max_abs();
    let pars = (spectral_norm(&s) / f.norm_l2() - 1.0).abs();
    let ok = jac < 1e-12 && rt < 1e-12 && pars < 1e-12;
    Ok((ok, format!("Jacobian vs central difference {jac:.1e}; round trip {rt:.1e}; Parseval {pars:.1e}")))
}

fn main() {
    let results = [
        check(1, "exact constants", 1, c1_constants),
        check(2, "identity suite", 1, c2_identities),
        check(3, "no nonzero roots", 5, c3_root_scan),
        check(4, "lump exactness", 10, c4_lumps),
        check(5, "quadratic local model", 1, c5_quadratic_model),
        check(6, "constant-limit reports", 60, c6_constants),
        check(7, "nondegeneracy", 300, c7_nondegeneracy),
        check(8, "solver oracle equivalence", 120, c8_solver_oracle),
        check(9, "continuation", 900, c9_continuation),
        check(10, "replace-g-with-L scan", 10, c10_replace),
        check(11, "Jacobian and transform consistency", 30, c11_consistency),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed} of {} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
