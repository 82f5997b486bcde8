//! Field files (CSV and binary), run manifests and run configs.

use kpwave::io::*;
use kpwave::{make_grid, RealField2D};

fn main() -> kpwave::Result<()> {
    let dir = std::env::temp_dir().join("kpwave-io-example");
    std::fs::create_dir_all(&dir)?;
    let g = make_grid(32, 16, 10.0, 20.0)?;
    let f = RealField2D::from_fn(&g, |x, y| (-(x * x) / 10.0 - y * y / 40.0).exp());

    let csv = write_field(&dir.join("field"), &f, false)?;
    let bin = write_field(&dir.join("field"), &f, true)?;
    for p in [&csv, &bin] {
        let back = read_field(p)?;
        println!("{}: {} bytes, round trip defect {:.1e}", p.display(), std::fs::metadata(p)?.len(), back.sub(&f).max_abs());
    }

    let cfg = RunConfig::from_toml("alpha = 0.8\nbeta = \"auto\"\neps = [0.2, 0.1, 0.05]\n")?;
    let beta = cfg.beta.unwrap_or(BetaSpec::Keyword(BetaKeyword::Auto)).resolve(cfg.alpha.unwrap_or(0.0))?;
    println!("config: alpha {:?}, beta auto -> {beta:.6}, eps {:?}", cfg.alpha, cfg.eps);
    if let Err(e) = RunConfig::from_toml("alpah = 1") {
        println!("misspelled key rejected: {e}");
    }

    let mut m = RunManifest::new("example");
    m.param("alpha", 0.8).param("beta", beta);
    m.grid = Some(GridMeta::of(&g));
    m.output(&csv).output(&bin);
    println!("manifest:\n{}", m.to_toml()?);
    Ok(())
}
