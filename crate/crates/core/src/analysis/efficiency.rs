use crate::engine::protocol::RunResult;
use crate::error::AnalysisError;

/// Retrieved echo energy (after the first gradient flip) over the probe
/// energy that entered the cell.
pub fn retrieval_efficiency(run: &RunResult) -> Result<f64, AnalysisError> {
    let m = &run.metrics;
    if !(m.input_energy > 0.0) {
        return Err(AnalysisError::ZeroInput);
    }
    Ok(m.retrieved_energy / m.input_energy)
}
