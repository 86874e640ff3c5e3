use crate::error::EngineError;

/// Longitudinal Zeeman gradient whose sign flips at `flip_times`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSchedule {
    /// Slope `eta` before the first flip (rad/(us mm)).
    pub eta0: f64,
    pub flip_times: Vec<f64>,
}

impl GradientSchedule {
    pub fn new(eta0: f64, flip_times: Vec<f64>) -> Result<Self, EngineError> {
        if !eta0.is_finite() {
            return Err(EngineError::Schedule(format!("eta0 must be finite, got {eta0}")));
        }
        if flip_times.iter().any(|t| !t.is_finite()) {
            return Err(EngineError::Schedule("flip times must be finite".into()));
        }
        if flip_times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(EngineError::Schedule(
                "flip times must be strictly increasing".into(),
            ));
        }
        Ok(Self { eta0, flip_times })
    }

    /// Slope that spreads the two-photon line over `linewidth` (rad/us)
    /// across a cell of length `cell_length`.
    pub fn eta_for_linewidth(linewidth: f64, cell_length: f64) -> f64 {
        linewidth / cell_length
    }

    fn flips_before(&self, t: f64) -> usize {
        self.flip_times.partition_point(|&f| f < t)
    }

    pub fn eta(&self, t: f64) -> f64 {
        if self.flips_before(t) % 2 == 0 {
            self.eta0
        } else {
            -self.eta0
        }
    }

    /// Exact integral of `eta` over `[t0, t1]`.
    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        let mut acc = 0.0;
        let mut t = t0;
        let done = self.flip_times.partition_point(|&f| f <= t0);
        let mut sign = if done % 2 == 0 { 1.0 } else { -1.0 };
        for &f in self.flip_times.iter().filter(|&&f| f > t0 && f < t1) {
            acc += sign * (f - t);
            t = f;
            sign = -sign;
        }
        acc += sign * (t1 - t);
        acc * self.eta0
    }

    pub fn first_flip(&self) -> Option<f64> {
        self.flip_times.first().copied()
    }
}

/// `n_rephasings` flips starting at the base schedule's first flip and
/// spaced by `period`.
pub fn multi_flip_schedule(
    base: &GradientSchedule,
    n_rephasings: usize,
    period: f64,
) -> Result<GradientSchedule, EngineError> {
    if n_rephasings == 0 || !(period > 0.0) {
        return Err(EngineError::Schedule(format!(
            "need at least one rephasing and a positive period (n = {n_rephasings}, period = {period})"
        )));
    }
    let t0 = base
        .first_flip()
        .ok_or_else(|| EngineError::Schedule("base schedule has no flip".into()))?;
    GradientSchedule::new(
        base.eta0,
        (0..n_rephasings).map(|k| t0 + k as f64 * period).collect(),
    )
}
