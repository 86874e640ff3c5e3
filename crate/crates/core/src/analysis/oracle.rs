//! Brute-force diffusion of a multi-channel square profile.
//!
//! The exact profile is sampled on a dense grid (cell-averaged coverage of
//! each channel), convolved with a sampled and renormalised heat kernel of
//! variance `2 D t`, and the fringe visibility is read at the central
//! separation. Nothing here goes through the error function, which keeps it
//! independent of the closed form it is used to check.

use crate::analysis::visibility::ChannelGeometry;
use crate::error::AnalysisError;

/// Minimum dense-grid resolution: samples per separation and per channel.
pub const MIN_POINTS_PER_FEATURE: usize = 50;
const MAX_SAMPLES: usize = 20_000_000;
const KERNEL_REACH_SIGMAS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceOptions {
    pub points_per_feature: usize,
    /// Samples per kernel standard deviation.
    pub points_per_sigma: usize,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        Self {
            points_per_feature: 200,
            points_per_sigma: 8,
        }
    }
}

/// Visibility after diffusion, with `background` added to the intensity.
pub fn brute_force_visibility(
    geometry: &ChannelGeometry,
    d: f64,
    t: f64,
    n_channels: usize,
    background: f64,
) -> Result<f64, AnalysisError> {
    brute_force_visibility_with(
        geometry,
        d,
        t,
        n_channels,
        background,
        BruteForceOptions::default(),
    )
}

pub fn brute_force_visibility_with(
    geometry: &ChannelGeometry,
    d: f64,
    t: f64,
    n_channels: usize,
    background: f64,
    options: BruteForceOptions,
) -> Result<f64, AnalysisError> {
    if n_channels < 3 {
        return Err(AnalysisError::Invalid(format!(
            "need at least 3 channels, got {n_channels}"
        )));
    }
    if options.points_per_feature < MIN_POINTS_PER_FEATURE {
        return Err(AnalysisError::UnderResolved(format!(
            "{} points per feature, minimum {MIN_POINTS_PER_FEATURE}",
            options.points_per_feature
        )));
    }
    if !(d >= 0.0 && t >= 0.0) {
        return Err(AnalysisError::Invalid(format!(
            "D and t must be non-negative (D = {d}, t = {t})"
        )));
    }
    let (a, b) = (geometry.a, geometry.b);
    let period = a + b;
    let sigma = (2.0 * d * t).sqrt();

    // Channel k covers [a/2 + k P, a/2 + b + k P]; the gap at 0 sits between
    // k = -1 and k = 0, and the tested channel centre is k = 0.
    let k_lo = -(n_channels.div_ceil(2) as i64);
    let k_hi = (n_channels / 2) as i64 - 1;
    let coverage = |lo: f64, hi: f64| -> f64 {
        let mut s = 0.0;
        for k in k_lo..=k_hi {
            let c0 = 0.5 * a + k as f64 * period;
            let c1 = c0 + b;
            s += (hi.min(c1) - lo.max(c0)).max(0.0);
        }
        s / (hi - lo)
    };

    let centre = 0.5 * period;
    if sigma == 0.0 {
        let peak = coverage(centre - 1e-12, centre + 1e-12) + background;
        let valley = coverage(-1e-12, 1e-12) + background;
        return michelson(peak, valley);
    }

    let mut h = a.min(b) / options.points_per_feature as f64;
    h = h.min(sigma / options.points_per_sigma as f64);
    let reach = KERNEL_REACH_SIGMAS * sigma;
    let x_min = k_lo as f64 * period - reach;
    let x_max = (k_hi + 1) as f64 * period + reach;
    let n = ((x_max - x_min) / h).ceil() as usize;
    if n > MAX_SAMPLES {
        return Err(AnalysisError::UnderResolved(format!(
            "dense grid would need {n} samples (limit {MAX_SAMPLES})"
        )));
    }
    let samples: Vec<f64> = (0..n)
        .map(|j| {
            let lo = x_min + j as f64 * h;
            coverage(lo, lo + h)
        })
        .collect();

    let convolve_at = |x: f64| -> f64 {
        let inv = 1.0 / (2.0 * sigma * sigma);
        let (mut num, mut den) = (0.0, 0.0);
        let j0 = (((x - reach) - x_min) / h).floor().max(0.0) as usize;
        let j1 = ((((x + reach) - x_min) / h).ceil() as usize).min(n);
        for (j, s) in samples.iter().enumerate().take(j1).skip(j0) {
            let xj = x_min + (j as f64 + 0.5) * h;
            let w = (-(x - xj) * (x - xj) * inv).exp();
            num += w * s;
            den += w;
        }
        num / den
    };

    let peak = convolve_at(centre) + background;
    let valley = convolve_at(0.0) + background;
    michelson(peak, valley)
}

fn michelson(peak: f64, valley: f64) -> Result<f64, AnalysisError> {
    let s = peak + valley;
    if s == 0.0 {
        return Err(AnalysisError::UndefinedVisibility);
    }
    Ok((peak - valley) / s)
}

/// One row of a visibility-decay comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPoint {
    pub t: f64,
    pub model: f64,
    pub oracle: f64,
}

/// Closed-form model against the brute-force oracle for a square grating.
pub fn visibility_decay_curve(
    geometry: &ChannelGeometry,
    d: f64,
    times: &[f64],
    background: f64,
    n_channels: usize,
) -> Result<Vec<DecayPoint>, AnalysisError> {
    times
        .iter()
        .map(|&t| {
            Ok(DecayPoint {
                t,
                model: crate::analysis::visibility::visibility_approx_with_background(
                    geometry.a, d, t, background,
                )?,
                oracle: brute_force_visibility(geometry, d, t, n_channels, background)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::visibility::visibility_approx;

    #[test]
    fn no_diffusion_keeps_full_contrast() {
        let g = ChannelGeometry::new(0.3, 0.7).unwrap();
        assert_eq!(brute_force_visibility(&g, 0.0, 10.0, 5, 0.0).unwrap(), 1.0);
        let v = brute_force_visibility(&g, 0.0, 10.0, 5, 0.1).unwrap();
        assert!((v - 1.0 / 1.2).abs() < 1e-12);
    }

    #[test]
    fn blurred_square_wave_reference() {
        // Period 1 mm square wave, variance 2 D t with D = 35 cm^2/s and
        // t = 15 us. Reference from an 81-channel erf sum in 40-digit
        // arithmetic: 0.16024482613022870.
        let g = ChannelGeometry::from_line_pairs(1.0, 0.5).unwrap();
        let v = brute_force_visibility(&g, 3.5e-3, 15.0, 81, 0.0).unwrap();
        assert!((v - 0.160_244_826_130_228_7).abs() < 1e-6, "{v}");
    }

    #[test]
    fn agrees_with_closed_form_in_regime() {
        let g = ChannelGeometry::new(0.1, 1.0).unwrap();
        let d = 1.0;
        let t = 0.01; // sqrt(Dt)/b = 0.1
        let bf = brute_force_visibility(&g, d, t, 9, 0.0).unwrap();
        let ap = visibility_approx(0.1, d, t).unwrap();
        assert!((bf - ap).abs() < 0.05);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = ChannelGeometry::new(0.1, 1.0).unwrap();
        assert!(brute_force_visibility(&g, 1.0, 0.01, 2, 0.0).is_err());
        let opts = BruteForceOptions {
            points_per_feature: 10,
            points_per_sigma: 8,
        };
        assert!(matches!(
            brute_force_visibility_with(&g, 1.0, 0.01, 5, 0.0, opts),
            Err(AnalysisError::UnderResolved(_))
        ));
    }
}
