//! Maximum linear channel density under a visibility threshold.

use crate::analysis::special::erf_inv;
use crate::error::AnalysisError;

/// Buffer width (mm) needed between channels so that the closed-form
/// visibility stays at `v_lim` after diffusing for `t`:
/// `4 sqrt(D t) erf_inv(2 V / (1 + V))`.
pub fn buffer_width(v_lim: f64, d: f64, t: f64) -> Result<f64, AnalysisError> {
    if !(v_lim > 0.0 && v_lim < 1.0) {
        return Err(AnalysisError::Domain {
            function: "channel_density (v_lim)",
            value: v_lim,
        });
    }
    if !(d >= 0.0 && t >= 0.0) {
        return Err(AnalysisError::Invalid(format!(
            "D and t must be non-negative (D = {d}, t = {t})"
        )));
    }
    Ok(4.0 * (d * t).sqrt() * erf_inv(2.0 * v_lim / (1.0 + v_lim))?)
}

/// Channel density `Lambda` in channels per mm.
pub fn channel_density(v_lim: f64, d: f64, t: f64, b: f64) -> Result<f64, AnalysisError> {
    if !(b > 0.0) {
        return Err(AnalysisError::Invalid(format!(
            "channel width must be positive, got {b}"
        )));
    }
    Ok(1.0 / (buffer_width(v_lim, d, t)? + b))
}
