//! Output plumbing: atomic file writes, the run manifest, and CSV assembly.
//!
//! CSV files are UTF-8 with a header row and LF line endings; floats are
//! written in Rust's shortest round-trip decimal form, so re-parsing a CSV
//! recovers bit-identical doubles and reruns diff cleanly.

use crate::config::canonical_sha256;
use crate::error::Result;
use secrecy_core::CaseTag;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Writes `contents` to `path` via a temporary file in the same directory
/// plus a rename, so readers never observe a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = PathBuf::from(format!("{}.tmp", path.display()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes the `<out>.manifest.json` sidecar: command name, SHA-256 of the
/// canonicalized config, effective seed (null when the command used none),
/// tool version, and a timestamp (the only field excluded from the
/// determinism contract).
pub fn write_manifest(
    out: &Path,
    command: &str,
    raw_config: &str,
    seed: Option<u64>,
) -> Result<()> {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = serde_json::json!({
        "command": command,
        "config_sha256": canonical_sha256(raw_config)?,
        "seed": seed,
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": timestamp,
    });
    let path = PathBuf::from(format!("{}.manifest.json", out.display()));
    let pretty =
        serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail");
    write_atomic(&path, &format!("{pretty}\n"))
}

/// Shortest round-trip decimal form of a double.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// CSV cell pair for a case tag: the case code and the alpha column (empty
/// unless the blended case).
pub fn case_cells(case: &CaseTag) -> (&'static str, String) {
    match case {
        CaseTag::Case1 => ("1", String::new()),
        CaseTag::Case2 => ("2", String::new()),
        CaseTag::Case3 { alpha } => ("3", fmt_f64(*alpha)),
    }
}

/// Builds a CSV from a header and rows of cells.
pub fn csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len(), "ragged CSV row");
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for v in [
            0.1,
            1.0 / 3.0,
            2.0f64.powi(-40),
            3.1622776601683795,
            f64::MAX,
        ] {
            let parsed: f64 = fmt_f64(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits(), "round trip failed for {v}");
        }
    }

    #[test]
    fn case_cells_cover_all_tags() {
        assert_eq!(case_cells(&CaseTag::Case1), ("1", String::new()));
        assert_eq!(case_cells(&CaseTag::Case2), ("2", String::new()));
        let (code, alpha) = case_cells(&CaseTag::Case3 { alpha: 0.25 });
        assert_eq!(code, "3");
        assert_eq!(alpha, "0.25");
    }

    #[test]
    fn csv_assembles_header_and_rows_with_lf() {
        let text = csv(
            &["a".into(), "b".into()],
            &[vec!["1".into(), "2".into()], vec!["3".into(), "4".into()]],
        );
        assert_eq!(text, "a,b\n1,2\n3,4\n");
    }
}
