//! Fringe visibility between neighbouring channels and its diffusion-limited
//! closed form.

use crate::analysis::special::erf;
use crate::error::AnalysisError;

/// Channels of width `b` separated by gaps of width `a`. `origin` is the
/// lab-frame x position (mm) of the centre of one separation; the adjacent
/// channel centre sits at `origin + (a + b) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelGeometry {
    pub a: f64,
    pub b: f64,
    pub origin: f64,
}

impl ChannelGeometry {
    pub fn new(a: f64, b: f64) -> Result<Self, AnalysisError> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(AnalysisError::Invalid(format!(
                "channel geometry needs a > 0 and b > 0 (a = {a}, b = {b})"
            )));
        }
        Ok(Self { a, b, origin: 0.0 })
    }

    /// Square grating with `lppm` line pairs per mm; `duty = b / (a + b)`.
    pub fn from_line_pairs(lppm: f64, duty: f64) -> Result<Self, AnalysisError> {
        if !(lppm > 0.0 && duty > 0.0 && duty < 1.0) {
            return Err(AnalysisError::Invalid(format!(
                "need lppm > 0 and duty in (0, 1) (lppm = {lppm}, duty = {duty})"
            )));
        }
        let period = 1.0 / lppm;
        Self::new(period * (1.0 - duty), period * duty)
    }

    pub fn with_origin(mut self, origin: f64) -> Self {
        self.origin = origin;
        self
    }

    pub fn period(&self) -> f64 {
        self.a + self.b
    }

    pub fn channel_center(&self) -> f64 {
        self.origin + 0.5 * self.period()
    }
}

/// Uniformly sampled 1D intensity profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    /// Position of `values[0]` (mm).
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl Profile {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Self {
        Self { x0, dx, values }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.values.len().saturating_sub(1))
    }

    /// Linear interpolation at `x`.
    pub fn sample(&self, x: f64) -> Result<f64, AnalysisError> {
        let n = self.values.len();
        let out = || AnalysisError::OutOfProfile {
            x,
            min: self.x0,
            max: self.x_max(),
        };
        if n == 0 {
            return Err(out());
        }
        let f = (x - self.x0) / self.dx;
        let tol = 1e-9;
        if f < -tol || f > (n - 1) as f64 + tol {
            return Err(out());
        }
        let f = f.clamp(0.0, (n - 1) as f64);
        let i = (f.floor() as usize).min(n.saturating_sub(2));
        if n == 1 {
            return Ok(self.values[0]);
        }
        let w = f - i as f64;
        Ok(self.values[i] * (1.0 - w) + self.values[i + 1] * w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityResult {
    pub v: f64,
    pub i_peak: f64,
    pub i_valley: f64,
    pub background: f64,
}

/// Michelson contrast between the channel centre and the separation centre.
///
/// `background` is subtracted from both samples before the ratio is formed;
/// a negative value therefore adds a floor.
pub fn visibility(
    profile: &Profile,
    geometry: &ChannelGeometry,
    background: f64,
) -> Result<VisibilityResult, AnalysisError> {
    let i_peak = profile.sample(geometry.channel_center())?;
    let i_valley = profile.sample(geometry.origin)?;
    let p = i_peak - background;
    let v = i_valley - background;
    let denom = p + v;
    if denom == 0.0 {
        return Err(AnalysisError::UndefinedVisibility);
    }
    Ok(VisibilityResult {
        v: (p - v) / denom,
        i_peak,
        i_valley,
        background,
    })
}

/// Closed-form visibility of narrow separations under diffusion,
/// `V = (2 / erf(a / (4 sqrt(D t))) - 1)^-1`.
pub fn visibility_approx(a: f64, d: f64, t: f64) -> Result<f64, AnalysisError> {
    visibility_approx_with_background(a, d, t, 0.0)
}

/// Same model with a constant `background` added to the normalised
/// intensity: `V = erf(u) / (2 - erf(u) + 2 B)`. At `t = 0` this is
/// `1 / (1 + 2 B)`.
pub fn visibility_approx_with_background(
    a: f64,
    d: f64,
    t: f64,
    background: f64,
) -> Result<f64, AnalysisError> {
    if !(a >= 0.0 && d >= 0.0 && t >= 0.0) {
        return Err(AnalysisError::Invalid(format!(
            "visibility_approx needs a, D, t >= 0 (a = {a}, D = {d}, t = {t})"
        )));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let spread = (d * t).sqrt();
    let e = if spread == 0.0 {
        1.0
    } else {
        erf(a / (4.0 * spread))
    };
    Ok(e / (2.0 - e + 2.0 * background))
}

/// Contrast of a fringe relative to an untouched reference fringe:
/// `(P - G) / (P_ref + G_ref)`, gaps sampled half a period either side.
/// Equals the Michelson visibility when both fringes are identical and
/// tends to zero when the tested fringe is erased.
pub fn relative_fringe_visibility(
    profile: &Profile,
    fringe_center: f64,
    reference_center: f64,
    period: f64,
    background: f64,
) -> Result<f64, AnalysisError> {
    let gap = |c: f64| -> Result<f64, AnalysisError> {
        Ok(0.5 * (profile.sample(c - 0.5 * period)? + profile.sample(c + 0.5 * period)?))
    };
    let p = profile.sample(fringe_center)? - background;
    let g = gap(fringe_center)? - background;
    let pr = profile.sample(reference_center)? - background;
    let gr = gap(reference_center)? - background;
    let denom = pr + gr;
    if denom == 0.0 {
        return Err(AnalysisError::UndefinedVisibility);
    }
    Ok((p - g) / denom)
}
