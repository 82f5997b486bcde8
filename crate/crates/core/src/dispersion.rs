//! Dispersion symbols, derived constants and the no-other-roots scan.
//!
//! `c(mu)` is `sqrt(a^2-mu) cot sqrt(a^2-mu)` below the joint `mu = a^2` and
//! `sqrt(mu-a^2) coth sqrt(mu-a^2)` above it; `t(mu) = 1/c(mu)` uses tan/tanh.

use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Result};
use crate::grid::Grid;
use crate::multiplier::{MultiplierSpec, SingularPolicy};

/// Radius in `z = a^2 - mu` (and in `alpha`) below which series are used.
pub const SERIES_RADIUS: f64 = 1e-4;

/// `sqrt(z) cot sqrt(z)` as an even function of `sqrt(z)`, valid for either sign of `z`.
fn zcot(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        1.0 - z / 3.0 - z * z / 45.0 - 2.0 * z * z * z / 945.0
    } else if z > 0.0 {
        let r = z.sqrt();
        r / r.tan()
    } else {
        let r = (-z).sqrt();
        r / r.tanh()
    }
}

/// `tan(sqrt z)/sqrt z`, valid for either sign of `z`.
fn ztan(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        1.0 + z / 3.0 + 2.0 * z * z / 15.0 + 17.0 * z * z * z / 315.0
    } else if z > 0.0 {
        let r = z.sqrt();
        r.tan() / r
    } else {
        let r = (-z).sqrt();
        r.tanh() / r
    }
}

/// The symbol `c(mu)` for Beltrami constant `alpha`.
pub fn c_fun(mu: f64, alpha: f64) -> f64 {
    zcot(alpha * alpha - mu)
}

/// The symbol `t(mu)`, with `t c = 1`.
pub fn t_fun(mu: f64, alpha: f64) -> f64 {
    ztan(alpha * alpha - mu)
}

/// Constants that depend on `alpha` only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedConstants {
    pub c0: f64,
    pub beta0: f64,
    pub beta_star: f64,
    pub d_alpha: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha.abs() < FRAC_PI_2) {
        return invalid(format!("|alpha| must be below pi/2, got {alpha}"));
    }
    Ok(())
}

/// `c0`, `beta0`, `beta*` and `d_alpha`, switching to series for `|alpha| < 1e-4`.
pub fn derived_constants(alpha: f64) -> Result<DerivedConstants> {
    check_alpha(alpha)?;
    let a = alpha;
    let a2 = a * a;
    if a.abs() < SERIES_RADIUS {
        return Ok(DerivedConstants {
            c0: (1.0 + a2 / 12.0 + a2 * a2 / 120.0).sqrt(),
            beta0: 1.0 / 3.0 - a2 / 90.0 + 13.0 * a2 * a2 / 7560.0,
            beta_star: 1.0 / 3.0 + 13.0 * a2 / 180.0 + 97.0 * a2 * a2 / 7560.0,
            d_alpha: 1.5 + a2 * a2 / 120.0,
        });
    }
    let s = a.sin();
    let w = two_x_minus_sin_two_x(a);
    Ok(DerivedConstants {
        c0: (2.0 / a * (a / 2.0).tan()).sqrt(),
        beta0: w / (4.0 * a2 * s),
        beta_star: w * (a / 2.0).tan() / (2.0 * a2 * s * s),
        d_alpha: a / s + 0.5 * a * a.cos() / s,
    })
}

/// `2x - sin 2x`, by its Taylor series where the difference cancels.
fn two_x_minus_sin_two_x(x: f64) -> f64 {
    let y = 2.0 * x;
    if y.abs() > 1.0 {
        return y - y.sin();
    }
    // y^3/3! - y^5/5! + ...
    let mut term = y * y * y / 6.0;
    let mut sum = 0.0_f64;
    let mut n = 3.0;
    while term.abs() > 1e-18 * sum.abs().max(f64::MIN_POSITIVE) {
        sum += term;
        term *= -y * y / ((n + 1.0) * (n + 2.0));
        n += 2.0;
    }
    sum
}

/// `beta* - beta0` from the closed form `cosec^3 sin^4(a/2) (2a - sin 2a) / a^2`,
/// which is non-negative term by term.
pub fn beta_gap(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let a = alpha;
    if a.abs() < SERIES_RADIUS {
        return Ok(a * a / 12.0);
    }
    let s = a.sin();
    Ok((a / 2.0).sin().powi(4) * two_x_minus_sin_two_x(a) / (s * s * s * a * a))
}

/// Model parameters with cached derived constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub delta: f64,
    pub c0: f64,
    pub c0_vec: [f64; 2],
    pub beta0: f64,
    pub beta_star: f64,
    pub d_alpha: f64,
}

impl PhysicalParams {
    pub fn new(alpha: f64, beta: f64, eps: f64, delta: f64) -> Result<Self> {
        let dc = derived_constants(alpha)?;
        if !(beta > 0.0 && beta.is_finite()) {
            return invalid(format!("beta must be positive, got {beta}"));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return invalid(format!("eps must be non-negative, got {eps}"));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return invalid(format!("delta must be positive, got {delta}"));
        }
        let (s, c) = (alpha / 2.0).sin_cos();
        Ok(Self {
            alpha,
            beta,
            eps,
            delta,
            c0: dc.c0,
            c0_vec: [dc.c0 * c, -dc.c0 * s],
            beta0: dc.beta0,
            beta_star: dc.beta_star,
            d_alpha: dc.d_alpha,
        })
    }

    /// Same parameters with a different `eps`.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, eps, self.delta)
    }

    /// True when `beta > beta*`, the regime where `g` has no nonzero roots.
    pub fn in_hypothesis(&self) -> bool {
        self.beta > self.beta_star
    }

    /// `sec^2(alpha/2)`.
    pub fn sec2_half(&self) -> f64 {
        1.0 / (self.alpha / 2.0).cos().powi(2)
    }

    /// `c = (1 - eps^2) c0`.
    pub fn c_vec(&self) -> [f64; 2] {
        let f = 1.0 - self.eps * self.eps;
        [f * self.c0_vec[0], f * self.c0_vec[1]]
    }
}

/// `g(k)` with wave-speed vector `c`. Undefined at `k = 0`.
pub fn g_with_c(k1: f64, k2: f64, alpha: f64, beta: f64, c: [f64; 2]) -> Result<f64> {
    let q = k1 * k1 + k2 * k2;
    if q == 0.0 {
        return invalid("g is undefined at k = 0; use g_tilde");
    }
    let ck = c[0] * k1 + c[1] * k2;
    let ckp = c[0] * k2 - c[1] * k1;
    Ok(-(alpha * ckp * ck + c_fun(q, alpha) * ck * ck) / q + 1.0 + beta * q)
}

/// `g(k)` with `c = (1 - eps^2) c0`.
pub fn g_full(k1: f64, k2: f64, p: &PhysicalParams) -> Result<f64> {
    g_with_c(k1, k2, p.alpha, p.beta, p.c_vec())
}

/// `g~(k1, m)` with `m = k2/k1`, analytic through the origin.
pub fn g_tilde_with_c(k1: f64, m: f64, alpha: f64, beta: f64, c: [f64; 2]) -> f64 {
    let w = 1.0 + m * m;
    let a = c[0] * m - c[1];
    let b = c[0] + c[1] * m;
    -(alpha * a * b + c_fun(k1 * k1 * w, alpha) * b * b) / w + 1.0 + beta * k1 * k1 * w
}

/// `g~(k1, m)` with `c = (1 - eps^2) c0`.
pub fn g_tilde(k1: f64, m: f64, p: &PhysicalParams) -> f64 {
    g_tilde_with_c(k1, m, p.alpha, p.beta, p.c_vec())
}

/// `g~` with `c = c0`, the form used by the reduced equation.
pub fn g_tilde0(k1: f64, m: f64, p: &PhysicalParams) -> f64 {
    g_tilde_with_c(k1, m, p.alpha, p.beta, p.c0_vec)
}

/// Right-hand side of the `eps` expansion: `g_c0(k) + (2 eps^2 - eps^4) (c0.k)(c0.L(k))/|k|^2`.
pub fn g_three_term(k1: f64, k2: f64, p: &PhysicalParams) -> Result<f64> {
    let g0 = g_with_c(k1, k2, p.alpha, p.beta, p.c0_vec)?;
    let q = k1 * k1 + k2 * k2;
    let [c1, c2] = p.c0_vec;
    let cf = c_fun(q, p.alpha);
    let l = [p.alpha * k2 + cf * k1, -p.alpha * k1 + cf * k2];
    let x = (c1 * k1 + c2 * k2) * (c1 * l[0] + c2 * l[1]) / q;
    let e2 = p.eps * p.eps;
    Ok(g0 + 2.0 * e2 * x - e2 * e2 * x)
}

/// The constant of the `(1/D^2)(c0.L)(c0.D)` limit, `alpha c01 (-c02 + c01 cot alpha)`,
/// equal to one for every admissible `alpha`.
pub fn unit_identity(p: &PhysicalParams) -> f64 {
    let [c1, c2] = p.c0_vec;
    if p.alpha.abs() < SERIES_RADIUS {
        // alpha cot alpha -> 1 and alpha c02 -> 0
        let a = p.alpha;
        let acot = 1.0 - a * a / 3.0;
        return -a * c1 * c2 + c1 * c1 * acot;
    }
    p.alpha * c1 * (-c2 + c1 / p.alpha.tan())
}

/// `kappa(mu, theta) = (1 + beta mu - alpha c0^2 sin cos) / (c0^2 cos^2)`.
pub fn kappa(mu: f64, theta: f64, p: &PhysicalParams) -> Result<f64> {
    let (s, c) = theta.sin_cos();
    if c.abs() < 1e-300 {
        return invalid("kappa is undefined where cos(theta) = 0");
    }
    let c02 = p.c0 * p.c0;
    Ok((1.0 + p.beta * mu - p.alpha * c02 * s * c) / (c02 * c * c))
}

/// Closed-form minimum of `kappa(mu, .)` over `theta`.
pub fn kappa_min(mu: f64, p: &PhysicalParams) -> f64 {
    let c02 = p.c0 * p.c0;
    let w = 1.0 + p.beta * mu;
    w / c02 - c02 * p.alpha * p.alpha / (4.0 * w)
}

/// Minimizer `atan(alpha c0^2 / (2 (1 + beta mu)))` of [`kappa`].
pub fn theta_min(mu: f64, p: &PhysicalParams) -> f64 {
    (p.alpha * p.c0 * p.c0 / (2.0 * (1.0 + p.beta * mu))).atan()
}

/// Outcome of [`verify_no_nonzero_roots`].
#[derive(Clone, Debug)]
pub struct RootScanReport {
    pub alpha: f64,
    pub beta: f64,
    pub beta_star: f64,
    pub in_hypothesis: bool,
    pub samples: usize,
    /// Largest `c(mu) - kappa_min(mu)` on the scan.
    pub max_gap: f64,
    pub argmax_mu: f64,
    /// `c - kappa_min` at the first sample.
    pub margin_at_tol: f64,
    /// Largest `c'(mu) - kappa_min'(mu)` by central differences.
    pub max_slope_gap: f64,
    /// First `mu` where `c >= kappa_min`, if any.
    pub violation: Option<f64>,
}

impl RootScanReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none() && self.max_gap < 0.0
    }
}

/// Sample `c(mu) - kappa_min(mu)` on `[mu_tol, mu_max]` with `n` points.
pub fn verify_no_nonzero_roots(
    p: &PhysicalParams,
    mu_tol: f64,
    mu_max: f64,
    n: usize,
) -> Result<RootScanReport> {
    if !(mu_tol >= 0.0 && mu_max > mu_tol && n >= 2) {
        return invalid("need 0 <= mu_tol < mu_max and at least two samples");
    }
    let h = 1e-5 * (1.0 + mu_max);
    let gap = |mu: f64| c_fun(mu, p.alpha) - kappa_min(mu, p);
    let mut rep = RootScanReport {
        alpha: p.alpha,
        beta: p.beta,
        beta_star: p.beta_star,
        in_hypothesis: p.in_hypothesis(),
        samples: n,
        max_gap: f64::NEG_INFINITY,
        argmax_mu: mu_tol,
        margin_at_tol: gap(mu_tol),
        max_slope_gap: f64::NEG_INFINITY,
        violation: None,
    };
    for i in 0..n {
        let mu = mu_tol + (mu_max - mu_tol) * i as f64 / (n - 1) as f64;
        let g = gap(mu);
        if g > rep.max_gap {
            rep.max_gap = g;
            rep.argmax_mu = mu;
        }
        if g >= 0.0 && rep.violation.is_none() {
            rep.violation = Some(mu);
        }
        let lo = (mu - h).max(0.0);
        let slope = (gap(mu + h) - gap(lo)) / (mu + h - lo);
        rep.max_slope_gap = rep.max_slope_gap.max(slope);
    }
    Ok(rep)
}

/// `eps^-2 g_eps(k) = eps^-2 g~(eps k1, eps k2/k1)` with `c = c0`, or its
/// `eps = 0` limit `(beta - beta0) k1^2 + sec^2(alpha/2) k2^2/k1^2`. The value at
/// `k = 0` is the `m = 0` limit, zero; the rest of `k1 = 0` is zeroed.
pub fn g_eps_symbol(k1: f64, k2: f64, p: &PhysicalParams) -> Option<f64> {
    if k1 == 0.0 {
        return if k2 == 0.0 { Some(0.0) } else { None };
    }
    let m = k2 / k1;
    if p.eps == 0.0 {
        Some((p.beta - p.beta0) * k1 * k1 + p.sec2_half() * m * m)
    } else {
        let e = p.eps;
        Some(g_tilde0(e * k1, e * m, p) / (e * e))
    }
}

pub fn g_eps_multiplier(grid: &Grid, p: &PhysicalParams) -> MultiplierSpec {
    MultiplierSpec::from_real_symbol(grid, SingularPolicy::ZeroOut, |a, b| g_eps_symbol(a, b, p))
}
