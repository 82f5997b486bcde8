//! Field, table and manifest files, plus plot scripts.
//!
//! Field CSV: header `x,y,value`, one row per grid point with `x` varying
//! slowest, numbers in `{:.16e}` (17 significant digits).
//!
//! Binary field: the 8-byte magic `KPWFLD01`, then `nx`, `ny` as little-endian
//! `u64`, `Lx`, `Ly` as little-endian `f64`, then `nx * ny` little-endian
//! `f64` values with `x` varying slowest.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{make_grid, Grid, RealField2D};

pub const BINARY_MAGIC: &[u8; 8] = b"KPWFLD01";

/// Full-precision decimal form used in every text output.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_field_csv(path: &Path, f: &RealField2D) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "y", "value"])?;
    let g = f.grid();
    for i in 0..g.nx() {
        for j in 0..g.ny() {
            w.write_record([fmt_f64(g.x(i)), fmt_f64(g.y(j)), fmt_f64(f.at(i, j))])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Read a field CSV written by [`write_field_csv`]. The grid is recovered
/// from the distinct coordinates, which must form a full uniform lattice.
pub fn read_field_csv(path: &Path) -> Result<RealField2D> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let num = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Invalid(format!("bad number in column {k} of {}", path.display())))
        };
        rows.push((num(0)?, num(1)?, num(2)?));
    }
    let distinct = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let xs = distinct(rows.iter().map(|r| r.0).collect());
    let ys = distinct(rows.iter().map(|r| r.1).collect());
    let (nx, ny) = (xs.len(), ys.len());
    if nx < 2 || ny < 2 || nx * ny != rows.len() {
        return Err(Error::Invalid(format!("{} is not a full lattice", path.display())));
    }
    // x(0) = -Lx and x(n-1) = -Lx + (n-1) 2Lx/n
    let lx = -xs[0];
    let ly = -ys[0];
    let grid = make_grid(nx, ny, lx, ly)?;
    let mut v = Array2::zeros((nx, ny));
    for (x, y, val) in rows {
        let i = ((x + lx) / grid.dx()).round() as usize;
        let j = ((y + ly) / grid.dy()).round() as usize;
        if i >= nx || j >= ny {
            return Err(Error::Invalid(format!("point ({x}, {y}) is off the lattice")));
        }
        v[[i, j]] = val;
    }
    RealField2D::new(&grid, v)
}

pub fn write_field_binary(path: &Path, f: &RealField2D) -> Result<()> {
    let g = f.grid();
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&(g.nx() as u64).to_le_bytes())?;
    w.write_all(&(g.ny() as u64).to_le_bytes())?;
    w.write_all(&g.lx().to_le_bytes())?;
    w.write_all(&g.ly().to_le_bytes())?;
    for v in f.values().iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field_binary(path: &Path) -> Result<RealField2D> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(Error::Invalid(format!("{} lacks the field magic", path.display())));
    }
    let mut b = [0u8; 8];
    let mut next = |r: &mut BufReader<File>| -> Result<[u8; 8]> {
        r.read_exact(&mut b)?;
        Ok(b)
    };
    let nx = u64::from_le_bytes(next(&mut r)?) as usize;
    let ny = u64::from_le_bytes(next(&mut r)?) as usize;
    let lx = f64::from_le_bytes(next(&mut r)?);
    let ly = f64::from_le_bytes(next(&mut r)?);
    let grid = make_grid(nx, ny, lx, ly)?;
    let mut vals = Vec::with_capacity(nx * ny);
    for _ in 0..nx * ny {
        vals.push(f64::from_le_bytes(next(&mut r)?));
    }
    let v = Array2::from_shape_vec((nx, ny), vals).map_err(|e| Error::Invalid(e.to_string()))?;
    RealField2D::new(&grid, v)
}

/// Read a field in either format, recognizing the binary magic.
pub fn read_field(path: &Path) -> Result<RealField2D> {
    let mut head = [0u8; 8];
    let n = File::open(path)?.read(&mut head)?;
    if n == 8 && &head == BINARY_MAGIC {
        read_field_binary(path)
    } else {
        read_field_csv(path)
    }
}

/// Write a field as CSV or binary; returns the path actually written, with
/// the extension set to `csv` or `bin`.
pub fn write_field(path: &Path, f: &RealField2D, binary: bool) -> Result<PathBuf> {
    let p = path.with_extension(if binary { "bin" } else { "csv" });
    if binary {
        write_field_binary(&p, f)?;
    } else {
        write_field_csv(&p, f)?;
    }
    Ok(p)
}

/// Headered numeric table.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| fmt_f64(*v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Table with string cells, for mixed reports.
pub fn write_text_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Grid description stored in manifests.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

impl GridMeta {
    pub fn of(g: &Grid) -> Self {
        Self { nx: g.nx(), ny: g.ny(), lx: g.lx(), ly: g.ly() }
    }
}

/// Record of one run, written as TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub parameters: BTreeMap<String, toml::Value>,
    pub grid: Option<GridMeta>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
    pub seed: Option<u64>,
    pub threads: usize,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters: BTreeMap::new(),
            grid: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            wall_clock_seconds: 0.0,
            seed: None,
            threads: 1,
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<toml::Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), v.into());
        self
    }

    pub fn output(&mut self, p: &Path) -> &mut Self {
        self.outputs.push(p.display().to_string());
        self
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }
}

/// `beta` as given in a config: a number or `"auto"` (`beta* + 0.1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Value(f64),
    Keyword(BetaKeyword),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaKeyword {
    Auto,
}

/// Offset added to `beta*` by `beta = auto`.
pub const BETA_AUTO_OFFSET: f64 = 0.1;

impl BetaSpec {
    pub fn resolve(self, alpha: f64) -> Result<f64> {
        match self {
            BetaSpec::Value(v) => Ok(v),
            BetaSpec::Keyword(BetaKeyword::Auto) => {
                Ok(crate::dispersion::derived_constants(alpha)?.beta_star + BETA_AUTO_OFFSET)
            }
        }
    }
}

impl std::str::FromStr for BetaSpec {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(BetaSpec::Keyword(BetaKeyword::Auto))
        } else {
            s.parse().map(BetaSpec::Value).map_err(|_| format!("beta must be a number or 'auto', got '{s}'"))
        }
    }
}

/// Run configuration file. Every key is optional; command-line flags win.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub beta: Option<BetaSpec>,
    pub delta: Option<f64>,
    pub eps: Option<Vec<f64>>,
    pub k: Option<u8>,
    pub n: Option<usize>,
    /// Half-width of the domain in normalized lump coordinates.
    pub l: Option<f64>,
    pub method: Option<String>,
    pub symmetry: Option<String>,
    pub max_iter: Option<usize>,
    pub tol_residual: Option<f64>,
    pub krylov_tol: Option<f64>,
    pub krylov_max_iter: Option<usize>,
    pub warmup_steps: Option<usize>,
    pub theta: Option<f64>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

/// Gnuplot script drawing a field CSV as a heat map.
pub fn write_gnuplot_field(script: &Path, data: &Path, title: &str) -> Result<()> {
    let png = script.with_extension("png");
    let s = format!(
        "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,700\n\
         set output '{}'\nset title '{}'\nset xlabel 'x'\nset ylabel 'y'\n\
         plot '{}' using 1:2:3 with image notitle\n",
        png.display(),
        title,
        data.display()
    );
    std::fs::write(script, s)?;
    Ok(())
}

/// Gnuplot script drawing columns of a table against its first column.
/// `logscale` names the logarithmic axes, e.g. `"xy"` or `"y"`.
pub fn write_gnuplot_lines(
    script: &Path,
    data: &Path,
    title: &str,
    columns: &[(usize, &str)],
    logscale: Option<&str>,
) -> Result<()> {
    let png = script.with_extension("png");
    let plots: Vec<String> = columns
        .iter()
        .map(|(c, name)| format!("'{}' using 1:{} with linespoints title '{}'", data.display(), c, name))
        .collect();
    let s = format!(
        "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\n\
         set output '{}'\nset title '{}'\n{}plot {}\n",
        png.display(),
        title,
        logscale.map(|a| format!("set logscale {a}\n")).unwrap_or_default(),
        plots.join(", \\\n     ")
    );
    std::fs::write(script, s)?;
    Ok(())
}
