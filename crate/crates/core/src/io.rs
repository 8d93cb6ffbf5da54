//! Reading and writing response data and scan tables.
//!
//! All tabular files are plain comma-separated text. Lines starting with
//! `#` are comments; `# key: value` comments carry optional metadata (the
//! `label` key names a curve). A single header line is allowed and
//! ignored. Parse errors report 1-based line numbers.
//!
//! Curve files hold `mu,p` rows. Grid files hold `t_ns,mu,p` rows and
//! must be rectangular: every tabulated time must cover exactly the same
//! energies. Scan tables are written with a fixed column order so that
//! repeated runs are byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use crate::detector::{ResponseCurve, TimeResolvedResponse};
use crate::error::{Error, Result};
use crate::scan::AttackPoint;

/// Output encoding for scan tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFormat {
    Csv,
    Json,
}

/// Column order of CSV scan tables, fixed across releases.
pub const SCAN_COLUMNS: &str = "mu,t,p_f0,p_f1,p_h0,p_h1,qber,transmittance,loss_db";

struct Row<'a> {
    line: usize,
    fields: Vec<&'a str>,
}

/// Split file content into metadata, and data rows of `columns` fields.
/// The first data-looking line may be a textual header; it is skipped.
fn tabulate<'a>(
    path: &Path,
    content: &'a str,
    columns: usize,
) -> Result<(Option<String>, Vec<Row<'a>>)> {
    let mut label = None;
    let mut rows: Vec<Row<'a>> = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in content.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                if key.trim().eq_ignore_ascii_case("label") {
                    label = Some(value.trim().to_string());
                }
            }
            continue;
        }
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        if !seen_data && fields.iter().all(|f| f.parse::<f64>().is_err()) {
            // Header line such as `mu,p`.
            continue;
        }
        if fields.len() != columns {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                line,
                reason: format!("expected {columns} comma-separated fields, got {}", fields.len()),
            });
        }
        seen_data = true;
        rows.push(Row { line, fields });
    }
    Ok((label, rows))
}

fn parse_field(path: &Path, line: usize, name: &str, text: &str) -> Result<f64> {
    text.parse::<f64>().map_err(|_| Error::Malformed {
        path: path.to_path_buf(),
        line,
        reason: format!("field `{name}`: `{text}` is not a number"),
    })
}

fn check_knot(path: &Path, line: usize, mu: f64, p: f64) -> Result<()> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::Malformed {
            path: path.to_path_buf(),
            line,
            reason: format!("mu must be finite and positive, got {mu}"),
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Malformed {
            path: path.to_path_buf(),
            line,
            reason: format!("p must lie in [0, 1], got {p}"),
        });
    }
    Ok(())
}

/// Load a `mu,p` response curve.
///
/// Rows may appear in any order; duplicate energies are rejected. The
/// curve label comes from a `# label:` comment, defaulting to the file
/// stem.
pub fn load_curve(path: &Path) -> Result<ResponseCurve> {
    let content = std::fs::read_to_string(path)?;
    let (label, rows) = tabulate(path, &content, 2)?;
    let mut points: Vec<(usize, f64, f64)> = Vec::with_capacity(rows.len());
    for row in &rows {
        let mu = parse_field(path, row.line, "mu", row.fields[0])?;
        let p = parse_field(path, row.line, "p", row.fields[1])?;
        check_knot(path, row.line, mu, p)?;
        points.push((row.line, mu, p));
    }
    if points.len() < 2 {
        return Err(Error::InvalidDataset {
            path: path.to_path_buf(),
            reason: format!("a response curve needs at least 2 data rows, found {}", points.len()),
        });
    }
    points.sort_by(|a, b| a.1.total_cmp(&b.1));
    for pair in points.windows(2) {
        if pair[0].1 == pair[1].1 {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                line: pair[1].0,
                reason: format!("duplicate mu value {} (first on line {})", pair[1].1, pair[0].0),
            });
        }
    }
    let label = label
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "curve".to_string());
    ResponseCurve::new(label, points.into_iter().map(|(_, mu, p)| (mu, p)).collect())
}

/// Load a rectangular `t_ns,mu,p` time-resolved response grid.
///
/// Every `(t, mu)` cell must appear exactly once; gaps and duplicates are
/// reported with the offending coordinates.
pub fn load_grid(path: &Path) -> Result<TimeResolvedResponse> {
    let content = std::fs::read_to_string(path)?;
    let (label, rows) = tabulate(path, &content, 3)?;
    let mut cells: Vec<(usize, f64, f64, f64)> = Vec::with_capacity(rows.len());
    for row in &rows {
        let t = parse_field(path, row.line, "t_ns", row.fields[0])?;
        let mu = parse_field(path, row.line, "mu", row.fields[1])?;
        let p = parse_field(path, row.line, "p", row.fields[2])?;
        if !t.is_finite() {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                line: row.line,
                reason: format!("t_ns must be finite, got {t}"),
            });
        }
        check_knot(path, row.line, mu, p)?;
        cells.push((row.line, t, mu, p));
    }
    if cells.is_empty() {
        return Err(Error::InvalidDataset {
            path: path.to_path_buf(),
            reason: "no data rows".to_string(),
        });
    }

    let mut times: Vec<f64> = cells.iter().map(|c| c.1).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut axis: Vec<f64> = cells.iter().map(|c| c.2).collect();
    axis.sort_by(f64::total_cmp);
    axis.dedup();

    let index_of = |grid: &[f64], v: f64| grid.partition_point(|&x| x < v);
    let mut table: Vec<Option<(usize, f64)>> = vec![None; times.len() * axis.len()];
    for &(line, t, mu, p) in &cells {
        let slot = &mut table[index_of(&times, t) * axis.len() + index_of(&axis, mu)];
        if let Some((first, _)) = *slot {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                line,
                reason: format!("duplicate cell t = {t}, mu = {mu} (first on line {first})"),
            });
        }
        *slot = Some((line, p));
    }
    for (i, &t) in times.iter().enumerate() {
        for (j, &mu) in axis.iter().enumerate() {
            if table[i * axis.len() + j].is_none() {
                return Err(Error::InvalidDataset {
                    path: path.to_path_buf(),
                    reason: format!("grid is not rectangular: missing row for t = {t}, mu = {mu}"),
                });
            }
        }
    }

    let label = label
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "grid".to_string());
    let curves = times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let points = axis
                .iter()
                .enumerate()
                .map(|(j, &mu)| (mu, table[i * axis.len() + j].expect("checked above").1))
                .collect();
            ResponseCurve::new(format!("{label}[t={t}]"), points)
        })
        .collect::<Result<Vec<_>>>()?;
    TimeResolvedResponse::new(times, curves)
}

/// Write a curve in the format [`load_curve`] reads, preserving the label
/// and full `f64` precision.
pub fn write_curve(curve: &ResponseCurve, path: &Path) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "# label: {}", curve.label());
    out.push_str("mu,p\n");
    for &(mu, p) in curve.points() {
        let _ = writeln!(out, "{mu},{p}");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Write a grid in the format [`load_grid`] reads, preserving full `f64`
/// precision. Row order: times outer, energies inner.
pub fn write_grid(grid: &TimeResolvedResponse, path: &Path, label: &str) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "# label: {label}");
    out.push_str("t_ns,mu,p\n");
    for (&t, curve) in grid.times().iter().zip(grid.curves()) {
        for &(mu, p) in curve.points() {
            let _ = writeln!(out, "{t},{mu},{p}");
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Write a scan table. CSV uses [`SCAN_COLUMNS`] with an empty `t` field
/// for untimed points; JSON is a pretty-printed array of points. Output
/// bytes are a pure function of the input.
pub fn write_scan(points: &[AttackPoint], path: &Path, format: ScanFormat) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Empty { what: "scan table" });
    }
    let out = match format {
        ScanFormat::Csv => {
            let mut out = String::with_capacity(64 * (points.len() + 1));
            out.push_str(SCAN_COLUMNS);
            out.push('\n');
            for p in points {
                let _ = write!(out, "{},", p.mu);
                if let Some(t) = p.t {
                    let _ = write!(out, "{t}");
                }
                let _ = writeln!(
                    out,
                    ",{},{},{},{},{},{},{}",
                    p.p_f0, p.p_f1, p.p_h0, p.p_h1, p.qber, p.transmittance, p.loss_db
                );
            }
            out
        }
        ScanFormat::Json => {
            let mut out = serde_json::to_string_pretty(points).expect("plain data serializes");
            out.push('\n');
            out
        }
    };
    std::fs::write(path, out)?;
    Ok(())
}
