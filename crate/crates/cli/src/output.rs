//! Output-path resolution and deterministic number formatting.

use std::path::{Path, PathBuf};

/// Environment variable holding the default output directory for relative
/// paths.
pub const OUT_DIR_ENV: &str = "SPINTOP_OUT_DIR";

/// Resolve a user-supplied path against `SPINTOP_OUT_DIR` when relative.
pub fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Round to 15 significant decimal digits; all printed numbers go through
/// this so outputs are identical across platforms at the printed precision.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().expect("round-trip of a finite float")
}

/// Fixed scientific form with 15 significant digits for CSV cells.
pub fn csv_num(x: f64) -> String {
    format!("{x:.14e}")
}
