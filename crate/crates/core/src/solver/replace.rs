//! Scan comparing the full-dispersion preconditioner symbol with the KP one.

use crate::dispersion::{g_tilde0, PhysicalParams};
use crate::error::{invalid, Result};

/// Largest envelope-normalized symbol difference over the band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReplaceReport {
    pub eps: f64,
    pub theta: f64,
    pub max_ratio: f64,
    /// `(k1, m)` at which the maximum occurs.
    pub argmax: (f64, f64),
    /// Largest raw symbol difference.
    pub max_difference: f64,
}

/// Difference of `eps^2 / (2 eps^2 + g~(eps k1, eps m))` and
/// `1 / (2 + (beta - beta0) k1^2 + sec^2(alpha/2) m^2)`.
pub fn symbol_difference(k1: f64, m: f64, p: &PhysicalParams) -> f64 {
    let e = p.eps;
    let full = e * e / (2.0 * e * e + g_tilde0(e * k1, e * m, p));
    let kp = 1.0 / (2.0 + (p.beta - p.beta0) * k1 * k1 + p.sec2_half() * m * m);
    full - kp
}

/// Scan `|k1|, |m| <= delta/eps` on an `n x n` grid and report the maximum of
/// `|difference| (1 + k1^2 + m^2)^((1+theta)/2) / eps^(1-theta)`.
pub fn replace_g_with_l_check(p: &PhysicalParams, theta: f64, n: usize) -> Result<ReplaceReport> {
    if !(p.eps > 0.0) {
        return invalid("the scan needs eps > 0");
    }
    if !(0.0..=1.0).contains(&theta) {
        return invalid("theta must lie in [0, 1]");
    }
    if n < 2 {
        return invalid("scan needs at least two points per axis");
    }
    let r = p.delta / p.eps;
    let env = p.eps.powf(1.0 - theta);
    let mut rep = ReplaceReport { eps: p.eps, theta, max_ratio: 0.0, argmax: (0.0, 0.0), max_difference: 0.0 };
    for i in 0..n {
        let k1 = -r + 2.0 * r * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let m = -r + 2.0 * r * j as f64 / (n - 1) as f64;
            let d = symbol_difference(k1, m, p).abs();
            let ratio = d * (1.0 + k1 * k1 + m * m).powf(0.5 * (1.0 + theta)) / env;
            rep.max_difference = rep.max_difference.max(d);
            if ratio > rep.max_ratio {
                rep.max_ratio = ratio;
                rep.argmax = (k1, m);
            }
        }
    }
    Ok(rep)
}
