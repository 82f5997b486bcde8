//! Smallest singular values of the linearized KP operator at the lump, in the
//! full space (two translation modes) and in the even subspace (none).

use kpwave::lumps::*;
use kpwave::make_grid;

fn main() -> kpwave::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(128);
    let g = make_grid(n, n, 40.0, 40.0)?;
    for sym in [Symmetry::Full, Symmetry::Even] {
        let r = nondegeneracy_report(1, &g, sym, &NondegenOptions::default())?;
        println!("{sym:?} on {n}^2, L = 40: verdict {:?}", r.verdict());
        println!("  singular values {:?}", r.singular_values);
        println!("  kernel dimension {}, gap {:.4}, Lanczos iterations {}", r.kernel_dimension, r.gap, r.iterations);
        if let Some(t) = r.translation_residual {
            println!("  translation modes: |K v| / |v| = {t:.2e}");
        }
    }
    Ok(())
}
