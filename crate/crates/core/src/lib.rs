//! Pseudospectral laboratory for the full-dispersion KP-I reduction of
//! three-dimensional Beltrami gravity-capillary waves.
//!
//! Fields live on periodic grids ([`grid`]) and operators are Fourier
//! multipliers ([`multiplier`]). On top of that sit the exact dispersion
//! functions ([`dispersion`]), the flat-state operators ([`flatops`]), the
//! KP-I lumps ([`lumps`]) and the reduced-equation solver ([`solver`]).
//!
//! Parameter checks are written as `!(x > 0.0)` so that NaN is rejected.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod band;
pub mod constcheck;
pub mod dispersion;
pub mod error;
pub mod fit;
pub mod flatops;
pub mod grid;
pub mod io;
pub mod kp;
pub mod krylov;
pub mod lumps;
pub mod multiplier;
pub mod norms;
pub mod problem;
pub mod product;
pub mod reconstruct;
pub mod selftest;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{make_grid, make_grid_strict, Grid, RealField2D, SpectralField2D, SpectralGrid2D};
pub use multiplier::{apply_multiplier, MultiplierSpec, SingularPolicy};
pub use dispersion::PhysicalParams;
