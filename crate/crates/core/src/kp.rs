//! Stationary KP-I models `(mass + cx k1^2 + cy k2^2/k1^2) u^ + nl (u^2)^ = 0`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::dispersion::PhysicalParams;
use crate::error::Result;
use crate::grid::{RealField2D, SpectralField2D};
use crate::product::dealiased_product_spectral;
use crate::problem::QuadraticProblem;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KpModel {
    pub mass: f64,
    pub cx: f64,
    pub cy: f64,
    pub nl: f64,
}

impl KpModel {
    /// `d_x^2(-u_xx + u + 3u^2) + u_yy = 0`.
    pub const NORMALIZED: KpModel = KpModel { mass: 1.0, cx: 1.0, cy: 1.0, nl: 3.0 };

    /// `-(beta - beta0) z_xx + 2 z + sec^2(alpha/2) D2^2/D1^2 z + d_alpha z^2 = 0`.
    pub fn physical(p: &PhysicalParams) -> Self {
        KpModel { mass: 2.0, cx: p.beta - p.beta0, cy: p.sec2_half(), nl: p.d_alpha }
    }

    /// Divided linear symbol; `None` on the `k1 = 0` line away from the origin,
    /// `mass` at the origin.
    pub fn symbol(&self, k1: f64, k2: f64) -> Option<f64> {
        if k1 == 0.0 {
            return if k2 == 0.0 { Some(self.mass) } else { None };
        }
        let m = k2 / k1;
        Some(self.mass + self.cx * k1 * k1 + self.cy * m * m)
    }

    /// Residual of the `d_x^2`-multiplied equation,
    /// `-k1^2 ((mass + cx k1^2) u^ + nl (u^2)^) - cy k2^2 u^`, with a dealiased square.
    pub fn residual_multiplied(&self, u: &RealField2D) -> RealField2D {
        let g = u.grid();
        let s = u.transform();
        let sq = dealiased_product_spectral(&s, &s).expect("same grid");
        let (k1, k2) = (g.k1(), g.k2());
        let c = Array2::from_shape_fn(g.shape(), |(i, j)| {
            let (a, b) = (k1[i], k2[j]);
            let lin = (self.mass + self.cx * a * a) * s.coeffs()[[i, j]]
                + sq.coeffs()[[i, j]] * self.nl;
            lin * (-a * a) - s.coeffs()[[i, j]] * (self.cy * b * b)
        });
        SpectralField2D::new(g, c).expect("shape").inverse()
    }

    /// Scale used for relative residuals: `||d_x^2 (mass u)||_0`.
    pub fn residual_scale(&self, u: &RealField2D) -> f64 {
        let g = u.grid();
        let k1 = g.k1().to_vec();
        let s = u.transform();
        let c = Array2::from_shape_fn(g.shape(), |(i, j)| {
            s.coeffs()[[i, j]] * Complex64::new(-self.mass * k1[i] * k1[i], 0.0)
        });
        SpectralField2D::new(g, c).expect("shape").inverse().norm_l2()
    }

    /// Divided, symmetric linearization at `base`, restricted to `k1 != 0`:
    /// `P (symbol v + 2 nl base v)`.
    pub fn linearized_apply(&self, base: &RealField2D, v: &RealField2D) -> Result<RealField2D> {
        base.grid().check_same(v.grid())?;
        let prob = QuadraticProblem::from_kp(base.grid(), self);
        let jac = prob.jacobian_at(&base.transform());
        Ok(jac.apply(&prob.project(v).transform())?.inverse())
    }
}
