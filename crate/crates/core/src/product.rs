//! Dealiased products by zero padding to 3/2 of the grid size.

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{Grid, RealField2D, SpectralField2D};

/// Target positions and weights for copying source mode `i` of an `n`-point
/// axis into an `m`-point axis. The Nyquist mode is split evenly between
/// `+n/2` and `-n/2` so that real fields stay real.
fn pad_targets(i: usize, n: usize, m: usize) -> ([(usize, f64); 2], usize) {
    let h = n / 2;
    if i < h {
        ([(i, 1.0), (0, 0.0)], 1)
    } else if i == h {
        ([(m - h, 0.5), (h, 0.5)], 2)
    } else {
        ([(m - (n - i), 1.0), (0, 0.0)], 1)
    }
}

fn pad(grid: &Grid, c: &Array2<Complex64>) -> Array2<Complex64> {
    let (nx, ny) = grid.shape();
    let (mx, my) = grid.padded_shape();
    let s = (mx * my) as f64 / (nx * ny) as f64;
    let mut p = Array2::<Complex64>::zeros((mx, my));
    for i in 0..nx {
        let (ti, ni) = pad_targets(i, nx, mx);
        for j in 0..ny {
            let (tj, nj) = pad_targets(j, ny, my);
            let v = c[[i, j]] * s;
            for &(a, wa) in &ti[..ni] {
                for &(b, wb) in &tj[..nj] {
                    p[[a, b]] += v * (wa * wb);
                }
            }
        }
    }
    p
}

fn truncate(grid: &Grid, p: &Array2<Complex64>) -> Array2<Complex64> {
    let (nx, ny) = grid.shape();
    let (mx, my) = grid.padded_shape();
    let s = (nx * ny) as f64 / (mx * my) as f64;
    let sources = |i: usize, n: usize, m: usize| -> Vec<usize> {
        let h = n / 2;
        if i < h {
            vec![i]
        } else if i == h {
            vec![m - h, h]
        } else {
            vec![m - (n - i)]
        }
    };
    let sx: Vec<Vec<usize>> = (0..nx).map(|i| sources(i, nx, mx)).collect();
    let sy: Vec<Vec<usize>> = (0..ny).map(|j| sources(j, ny, my)).collect();
    Array2::from_shape_fn((nx, ny), |(i, j)| {
        let mut v = Complex64::new(0.0, 0.0);
        for &a in &sx[i] {
            for &b in &sy[j] {
                v += p[[a, b]];
            }
        }
        v * s
    })
}

/// Dealiased product of two spectral fields (complex in general).
pub fn dealiased_product_spectral(
    f: &SpectralField2D,
    g: &SpectralField2D,
) -> Result<SpectralField2D> {
    f.grid().check_same(g.grid())?;
    let grid = f.grid();
    let mut a = pad(grid, f.coeffs());
    let mut b = pad(grid, g.coeffs());
    grid.fft2_padded(&mut a, false);
    grid.fft2_padded(&mut b, false);
    Zip::from(&mut a).and(&b).for_each(|x, &y| *x *= y);
    grid.fft2_padded(&mut a, true);
    SpectralField2D::new(grid, truncate(grid, &a))
}

/// Dealiased product of two real fields.
pub fn dealiased_product(f: &RealField2D, g: &RealField2D) -> Result<RealField2D> {
    f.grid().check_same(g.grid())?;
    Ok(dealiased_product_spectral(&f.transform(), &g.transform())?.inverse())
}

/// Dealiased square of a real field.
pub fn dealiased_square(f: &RealField2D) -> RealField2D {
    let s = f.transform();
    dealiased_product_spectral(&s, &s).expect("same grid").inverse()
}

/// One factor of a product, kept as physical values on the padded grid so
/// that repeated products with it cost one padded transform less.
#[derive(Clone, Debug)]
pub struct PaddedFactor {
    grid: Grid,
    values: Array2<Complex64>,
}

impl PaddedFactor {
    pub fn new(f: &SpectralField2D) -> Self {
        let grid = f.grid().clone();
        let mut a = pad(&grid, f.coeffs());
        grid.fft2_padded(&mut a, false);
        Self { grid, values: a }
    }

    /// Dealiased product of the stored factor with `g`.
    pub fn mul(&self, g: &SpectralField2D) -> Result<SpectralField2D> {
        self.grid.check_same(g.grid())?;
        let mut b = pad(&self.grid, g.coeffs());
        self.grid.fft2_padded(&mut b, false);
        Zip::from(&mut b).and(&self.values).for_each(|x, &y| *x *= y);
        self.grid.fft2_padded(&mut b, true);
        SpectralField2D::new(&self.grid, truncate(&self.grid, &b))
    }
}
