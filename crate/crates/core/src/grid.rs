//! Periodic grids, real and spectral fields, and 2D transforms.
//!
//! Coefficient arrays are stored in FFT order: index `i` along x carries the
//! wavenumber `k1[i] = pi * s(i) / Lx` with `s(i) = i` for `i < nx/2` and
//! `s(i) = i - nx` otherwise. The forward transform is the unnormalized DFT;
//! the inverse divides by `nx * ny`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};

/// Shared handle to a grid. Fields keep one of these.
pub type Grid = Arc<SpectralGrid2D>;

struct Plans {
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    pad_fwd_x: Arc<dyn Fft<f64>>,
    pad_inv_x: Arc<dyn Fft<f64>>,
    pad_fwd_y: Arc<dyn Fft<f64>>,
    pad_inv_y: Arc<dyn Fft<f64>>,
}

/// Periodic grid on `[-Lx, Lx) x [-Ly, Ly)` with `nx x ny` points.
pub struct SpectralGrid2D {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    mx: usize,
    my: usize,
    k1: Vec<f64>,
    k2: Vec<f64>,
    plans: Plans,
}

impl fmt::Debug for SpectralGrid2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid2D")
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .finish()
    }
}

fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn padded_len(n: usize) -> usize {
    let m = (3 * n).div_ceil(2);
    m + (m % 2)
}

/// Build a grid. `nx`, `ny` must be even and positive, `Lx`, `Ly` positive.
pub fn make_grid(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Grid> {
    SpectralGrid2D::new(nx, ny, lx, ly, false)
}

/// Like [`make_grid`] but also requires power-of-two sizes.
pub fn make_grid_strict(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Grid> {
    SpectralGrid2D::new(nx, ny, lx, ly, true)
}

impl SpectralGrid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64, strict: bool) -> Result<Grid> {
        if nx == 0 || ny == 0 || !nx.is_multiple_of(2) || !ny.is_multiple_of(2) {
            return invalid(format!("grid sizes must be even and positive, got {nx} x {ny}"));
        }
        if strict && (!nx.is_power_of_two() || !ny.is_power_of_two()) {
            return invalid(format!("grid sizes must be powers of two, got {nx} x {ny}"));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return invalid(format!("half-periods must be positive, got {lx}, {ly}"));
        }
        let k1 = (0..nx).map(|i| PI * signed_index(i, nx) as f64 / lx).collect();
        let k2 = (0..ny).map(|j| PI * signed_index(j, ny) as f64 / ly).collect();
        let (mx, my) = (padded_len(nx), padded_len(ny));
        let mut planner = FftPlanner::new();
        let plans = Plans {
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
            pad_fwd_x: planner.plan_fft_forward(mx),
            pad_inv_x: planner.plan_fft_inverse(mx),
            pad_fwd_y: planner.plan_fft_forward(my),
            pad_inv_y: planner.plan_fft_inverse(my),
        };
        Ok(Arc::new(Self { nx, ny, lx, ly, mx, my, k1, k2, plans }))
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn lx(&self) -> f64 {
        self.lx
    }
    pub fn ly(&self) -> f64 {
        self.ly
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn dx(&self) -> f64 {
        2.0 * self.lx / self.nx as f64
    }
    pub fn dy(&self) -> f64 {
        2.0 * self.ly / self.ny as f64
    }
    /// Physical cell area.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }
    /// Wavenumber cell area, `(pi/Lx)(pi/Ly)`.
    pub fn dk_area(&self) -> f64 {
        PI * PI / (self.lx * self.ly)
    }
    pub fn x(&self, i: usize) -> f64 {
        -self.lx + i as f64 * self.dx()
    }
    pub fn y(&self, j: usize) -> f64 {
        -self.ly + j as f64 * self.dy()
    }
    /// x wavenumbers in FFT order.
    pub fn k1(&self) -> &[f64] {
        &self.k1
    }
    /// y wavenumbers in FFT order.
    pub fn k2(&self) -> &[f64] {
        &self.k2
    }
    /// Largest positive x wavenumber magnitude, `pi nx / (2 Lx)`.
    pub fn nyquist_x(&self) -> f64 {
        PI * (self.nx / 2) as f64 / self.lx
    }
    pub fn nyquist_y(&self) -> f64 {
        PI * (self.ny / 2) as f64 / self.ly
    }
    /// Integer mode index of FFT position `i` along x.
    pub fn index_x(&self, i: usize) -> i64 {
        signed_index(i, self.nx)
    }
    pub fn index_y(&self, j: usize) -> i64 {
        signed_index(j, self.ny)
    }
    /// Padded sizes used by the dealiased product.
    pub fn padded_shape(&self) -> (usize, usize) {
        (self.mx, self.my)
    }

    pub fn same_as(&self, other: &SpectralGrid2D) -> bool {
        std::ptr::eq(self, other)
            || (self.nx == other.nx
                && self.ny == other.ny
                && self.lx == other.lx
                && self.ly == other.ly)
    }

    pub(crate) fn check_same(&self, other: &SpectralGrid2D) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }

    /// In-place 2D FFT on an `nx x ny` array.
    pub(crate) fn fft2(&self, data: &mut Array2<Complex64>, forward: bool) {
        let (px, py) = if forward {
            (&self.plans.fwd_x, &self.plans.fwd_y)
        } else {
            (&self.plans.inv_x, &self.plans.inv_y)
        };
        fft2_with(data, px.as_ref(), py.as_ref());
        if !forward {
            let s = 1.0 / (self.nx * self.ny) as f64;
            data.mapv_inplace(|c| c * s);
        }
    }

    /// In-place 2D FFT on a padded `mx x my` array.
    pub(crate) fn fft2_padded(&self, data: &mut Array2<Complex64>, forward: bool) {
        let (px, py) = if forward {
            (&self.plans.pad_fwd_x, &self.plans.pad_fwd_y)
        } else {
            (&self.plans.pad_inv_x, &self.plans.pad_inv_y)
        };
        fft2_with(data, px.as_ref(), py.as_ref());
        if !forward {
            let s = 1.0 / (self.mx * self.my) as f64;
            data.mapv_inplace(|c| c * s);
        }
    }
}

fn fft2_with(data: &mut Array2<Complex64>, px: &dyn Fft<f64>, py: &dyn Fft<f64>) {
    let (n0, n1) = data.dim();
    assert_eq!((n0, n1), (px.len(), py.len()));
    {
        let buf = data.as_slice_mut().expect("standard layout");
        py.process(buf);
    }
    let mut t = data.t().as_standard_layout().into_owned();
    px.process(t.as_slice_mut().expect("standard layout"));
    data.assign(&t.t());
}

/// Real samples of a scalar field.
#[derive(Clone, Debug)]
pub struct RealField2D {
    grid: Grid,
    values: Array2<f64>,
}

/// Complex DFT coefficients of a field (FFT order).
#[derive(Clone, Debug)]
pub struct SpectralField2D {
    grid: Grid,
    coeffs: Array2<Complex64>,
}

impl RealField2D {
    pub fn new(grid: &Grid, values: Array2<f64>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::GridMismatch(format!(
                "values have shape {:?}, grid is {:?}",
                values.dim(),
                grid.shape()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("field contains non-finite values");
        }
        Ok(Self { grid: grid.clone(), values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), values: Array2::zeros(grid.shape()) }
    }

    /// Sample `f(x, y)` at the grid points.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let values = Array2::from_shape_fn(grid.shape(), |(i, j)| f(grid.x(i), grid.y(j)));
        Self { grid: grid.clone(), values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }
    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn transform(&self) -> SpectralField2D {
        let mut c = self.values.mapv(|v| Complex64::new(v, 0.0));
        self.grid.fft2(&mut c, true);
        SpectralField2D { grid: self.grid.clone(), coeffs: c }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.mapv(f) }
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|v| a * v)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        let mut v = self.values.clone();
        v.scaled_add(a, &other.values);
        Self { grid: self.grid.clone(), values: v }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    /// Plain pointwise product (no dealiasing).
    pub fn pointwise_mul(&self, other: &Self) -> Self {
        let mut v = self.values.clone();
        Zip::from(&mut v).and(&other.values).for_each(|a, &b| *a *= b);
        Self { grid: self.grid.clone(), values: v }
    }

    /// Quadrature of the L2 inner product, `sum f g dA`.
    pub fn dot(&self, other: &Self) -> f64 {
        let s: f64 = Zip::from(&self.values).and(&other.values).fold(0.0, |acc, &a, &b| acc + a * b);
        s * self.grid.cell_area()
    }

    /// Discrete L2 norm with cell-area quadrature.
    pub fn norm_l2(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Value at grid point `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }
}

impl SpectralField2D {
    pub fn new(grid: &Grid, coeffs: Array2<Complex64>) -> Result<Self> {
        if coeffs.dim() != grid.shape() {
            return Err(Error::GridMismatch(format!(
                "coefficients have shape {:?}, grid is {:?}",
                coeffs.dim(),
                grid.shape()
            )));
        }
        Ok(Self { grid: grid.clone(), coeffs })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), coeffs: Array2::zeros(grid.shape()) }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }
    pub fn coeffs_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeffs
    }

    /// Inverse transform to complex physical samples.
    pub fn inverse_complex(&self) -> Array2<Complex64> {
        let mut c = self.coeffs.clone();
        self.grid.fft2(&mut c, false);
        c
    }

    /// Inverse transform keeping the real part. Use for fields that represent
    /// real functions; see [`SpectralField2D::hermitian_defect`].
    pub fn inverse(&self) -> RealField2D {
        let c = self.inverse_complex();
        RealField2D { grid: self.grid.clone(), values: c.mapv(|z| z.re) }
    }

    /// Relative size of the anti-Hermitian part, `max |c(-k) - conj c(k)| / max |c|`.
    pub fn hermitian_defect(&self) -> f64 {
        let (nx, ny) = self.grid.shape();
        let mut num = 0.0_f64;
        let mut den = 0.0_f64;
        for i in 0..nx {
            for j in 0..ny {
                let a = self.coeffs[[i, j]];
                let b = self.coeffs[[(nx - i) % nx, (ny - j) % ny]];
                num = num.max((a - b.conj()).norm());
                den = den.max(a.norm());
            }
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// Energy `sum |c|^2` of the coefficient array.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self { grid: self.grid.clone(), coeffs: self.coeffs.mapv(|c| c * a) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { grid: self.grid.clone(), coeffs: &self.coeffs + &other.coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { grid: self.grid.clone(), coeffs: &self.coeffs - &other.coeffs }
    }

    /// Samples of the continuous Fourier transform `(1/2pi) int f e^{-ik.x}`
    /// at the lattice, up to the unit-modulus phase of the grid origin.
    pub fn ft_magnitude_scale(&self) -> f64 {
        self.grid.cell_area() / (2.0 * PI)
    }
}

/// Complex physical samples, used when an operator output is not real.
pub fn transform_complex(grid: &Grid, values: &Array2<Complex64>) -> SpectralField2D {
    let mut c = values.clone();
    grid.fft2(&mut c, true);
    SpectralField2D { grid: grid.clone(), coeffs: c }
}
