//! Single-exponential least squares.

use crate::error::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    pub amplitude: f64,
    pub rate: f64,
}

impl ExpFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude * (-self.rate * x).exp()
    }
}

/// Fits `y = A exp(-k x)` by weighted linear regression on `ln y` with
/// weights `y^2`, which approximates the unweighted nonlinear fit. Points
/// with `y <= 0` are skipped.
pub fn fit_exponential(xs: &[f64], ys: &[f64]) -> Result<ExpFit, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::Invalid(format!(
            "length mismatch: {} x values, {} y values",
            xs.len(),
            ys.len()
        )));
    }
    let pts: Vec<(f64, f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > 0.0)
        .map(|(&x, &y)| (x, y.ln(), y * y))
        .collect();
    if pts.len() < 2 {
        return Err(AnalysisError::Empty("need two positive samples".into()));
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::Invalid("x values are all equal".into()));
    }
    let slope = sxy / sxx;
    Ok(ExpFit {
        amplitude: (my - slope * mx).exp(),
        rate: -slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_exponential() {
        let xs: Vec<f64> = (0..6).map(|i| i as f64 * 0.2).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.8 * (-4.0 * x).exp()).collect();
        let f = fit_exponential(&xs, &ys).unwrap();
        assert!((f.rate - 4.0).abs() < 1e-12);
        assert!((f.amplitude - 0.8).abs() < 1e-12);
        assert!((f.eval(0.5) - 0.8 * (-2.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn skips_non_positive_points() {
        let f = fit_exponential(&[0.0, 1.0, 2.0], &[1.0, (-1.0f64).exp(), 0.0]).unwrap();
        assert!((f.rate - 1.0).abs() < 1e-12);
        assert!(fit_exponential(&[0.0, 1.0], &[1.0, -1.0]).is_err());
    }
}
