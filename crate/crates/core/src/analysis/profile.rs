//! Line profiles through retrieved frames.

use std::ops::Range;

use crate::error::AnalysisError;
use crate::field::RealField2D;

/// Row-averaged profile over `rows`, normalised to its maximum.
/// An all-zero selection is returned unnormalised.
pub fn extract_profile(frame: &RealField2D, rows: Range<usize>) -> Result<Vec<f64>, AnalysisError> {
    if rows.is_empty() {
        return Err(AnalysisError::Empty("row range".into()));
    }
    if rows.end > frame.ny {
        return Err(AnalysisError::Invalid(format!(
            "rows {rows:?} exceed frame height {}",
            frame.ny
        )));
    }
    let count = rows.len() as f64;
    let mut out = vec![0.0; frame.nx];
    for iy in rows {
        for (o, v) in out.iter_mut().zip(frame.row(iy)) {
            *o += v;
        }
    }
    for o in &mut out {
        *o /= count;
    }
    let max = out.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        for o in &mut out {
            *o /= max;
        }
    }
    Ok(out)
}

/// Position (in samples, fractional) where `values` first crosses `level`
/// between `start` and `end`, scanning in index order.
pub fn crossing(values: &[f64], level: f64, start: usize, end: usize) -> Option<f64> {
    let end = end.min(values.len());
    for i in start..end.saturating_sub(1) {
        let (a, b) = (values[i], values[i + 1]);
        if (a - level) * (b - level) <= 0.0 && a != b {
            return Some(i as f64 + (level - a) / (b - a));
        }
    }
    None
}

/// Distance between the `lo` and `hi` fractional levels of a single
/// monotone edge inside `[start, end)`, after normalising by `plateau`.
pub fn edge_width(
    values: &[f64],
    dx: f64,
    start: usize,
    end: usize,
    plateau: f64,
    lo: f64,
    hi: f64,
) -> Result<f64, AnalysisError> {
    if plateau <= 0.0 {
        return Err(AnalysisError::Invalid("plateau must be positive".into()));
    }
    let norm: Vec<f64> = values.iter().map(|v| v / plateau).collect();
    let a = crossing(&norm, lo, start, end)
        .ok_or_else(|| AnalysisError::Empty(format!("no {lo} crossing")))?;
    let b = crossing(&norm, hi, start, end)
        .ok_or_else(|| AnalysisError::Empty(format!("no {hi} crossing")))?;
    Ok((a - b).abs() * dx)
}

/// 10-90 % width of an edge.
pub fn edge_width_10_90(
    values: &[f64],
    dx: f64,
    start: usize,
    end: usize,
    plateau: f64,
) -> Result<f64, AnalysisError> {
    edge_width(values, dx, start, end, plateau, 0.1, 0.9)
}
