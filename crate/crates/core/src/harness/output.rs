//! CSV and JSON serialization. Floats carry 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use super::{OpenCurveRow, ProtocolResult, SnapshotMeta};
use crate::error::{Error, Result};
use crate::squeezing::MomentReport;
use crate::wigner::PhaseSpaceGrid;

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn pairs_csv(header: &str, rows: &[(f64, f64)]) -> String {
    let mut s = format!("{header}\n");
    for (x, y) in rows {
        let _ = writeln!(s, "{},{}", format_float(*x), format_float(*y));
    }
    s
}

pub fn amplitude_csv(rows: &[(f64, f64)]) -> String {
    pairs_csv("a_bar,fidelity", rows)
}

pub fn coupling_csv(rows: &[(f64, f64)]) -> String {
    pairs_csv("g_over_omega_m,fidelity", rows)
}

pub fn moment_csv(rows: &[MomentReport]) -> String {
    let mut s = String::from("r,p,ratio\n");
    for row in rows {
        let _ = writeln!(s, "{},{},{}", format_float(row.r), row.p, format_float(row.ratio));
    }
    s
}

pub fn open_curves_csv(rows: &[OpenCurveRow]) -> String {
    let mut s = String::from("combo,g_t,fidelity\n");
    for row in rows {
        let _ = writeln!(s, "{},{},{}", row.combo, format_float(row.g_t), format_float(row.fidelity));
    }
    s
}

/// First row: empty corner then the real axis; each further row: the
/// imaginary coordinate then `W` along the real axis.
pub fn wigner_csv(grid: &PhaseSpaceGrid) -> String {
    let mut s = String::new();
    for x in grid.re_axis() {
        let _ = write!(s, ",{}", format_float(*x));
    }
    s.push('\n');
    for (i, y) in grid.im_axis().iter().enumerate() {
        s.push_str(&format_float(*y));
        for j in 0..grid.re_axis().len() {
            let _ = write!(s, ",{}", format_float(grid.value(i, j)));
        }
        s.push('\n');
    }
    s
}

pub fn snapshot_json(meta: &SnapshotMeta) -> String {
    let value = json!({
        "label": meta.label,
        "xi": { "re": meta.xi_re, "im": meta.xi_im },
        "cutoff": meta.cutoff,
        "convention": meta.convention,
    });
    serde_json::to_string_pretty(&value).expect("plain JSON value") + "\n"
}

pub fn protocol_json(result: &ProtocolResult) -> String {
    let value = json!({
        "plus_probability": result.plus_probability,
        "minus_probability": result.minus_probability,
        "fidelity_plus_vs_analytic": result.fidelity_plus_vs_analytic,
        "fidelity_minus_vs_analytic": result.fidelity_minus_vs_analytic,
        "xi": { "re": result.xi.re, "im": result.xi.im },
        "t_end": result.t_end,
        "warnings": result.warnings,
    });
    serde_json::to_string_pretty(&value).expect("plain JSON value") + "\n"
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
