//! Least-squares power-law fits `y ~ C x^p` in log-log coordinates.

/// Fitted exponent with its standard error and prefactor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFit {
    pub exponent: f64,
    /// Standard error of the exponent; `NaN` with only two points.
    pub std_error: f64,
    pub prefactor: f64,
}

impl PowerFit {
    /// Whether `|exponent - target| <= tol`.
    pub fn within(&self, target: f64, tol: f64) -> bool {
        (self.exponent - target).abs() <= tol
    }
}

/// Fit `log y = log C + p log x`. Returns `None` with fewer than two usable
/// points (both coordinates positive and finite).
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Option<PowerFit> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let std_error = if n > 2 {
        let ss: f64 = pts.iter().map(|p| (p.1 - icept - slope * p.0).powi(2)).sum();
        (ss / (nf - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Some(PowerFit { exponent: slope, std_error, prefactor: icept.exp() })
}
