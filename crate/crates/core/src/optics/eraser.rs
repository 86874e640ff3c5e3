//! Decoherence from an off-resonant "eraser" beam.
//!
//! The eraser is treated as driving a two-level transition: the local
//! ground-state decoherence rate is `kappa` times the photon scattering rate
//! at the local saturation ratio. It only adds decay; it never couples
//! coherently to the probe.

use crate::error::OpticsError;
use crate::field::RealField2D;
use crate::optics::mask::IntensityMask;

/// Default decoherence events per scattered photon.
pub const DEFAULT_KAPPA: f64 = 1.0;

/// Scattering rate of a driven two-level atom,
/// `R = (Gamma / 2) s / (1 + 4 (Delta / Gamma)^2 + s)`.
pub fn scattering_rate(s: f64, delta_e: f64, gamma: f64) -> f64 {
    let x = delta_e / gamma;
    0.5 * gamma * s / (1.0 + 4.0 * x * x + s)
}

/// Saturation ratio that produces scattering rate `rate`.
pub fn saturation_for_rate(rate: f64, delta_e: f64, gamma: f64) -> Result<f64, OpticsError> {
    let limit = 0.5 * gamma;
    if !(rate >= 0.0 && rate < limit) {
        return Err(OpticsError::RateUnreachable { rate, limit });
    }
    let x = delta_e / gamma;
    Ok(rate * (1.0 + 4.0 * x * x) / (limit - rate))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EraserPulse {
    pub mask: IntensityMask,
    /// Peak saturation ratio `I / I_sat`.
    pub s_peak: f64,
    /// Detuning from the D1 line (rad/us).
    pub delta_e: f64,
    pub t_on: f64,
    pub t_off: f64,
}

impl EraserPulse {
    pub fn new(
        mask: IntensityMask,
        s_peak: f64,
        delta_e: f64,
        t_on: f64,
        t_off: f64,
    ) -> Result<Self, OpticsError> {
        if !(s_peak >= 0.0 && s_peak.is_finite()) {
            return Err(OpticsError::Invalid(format!(
                "eraser saturation must be non-negative, got {s_peak}"
            )));
        }
        if !(t_off > t_on) {
            return Err(OpticsError::Invalid(format!(
                "eraser window [{t_on}, {t_off}] has no duration"
            )));
        }
        Ok(Self {
            mask,
            s_peak,
            delta_e,
            t_on,
            t_off,
        })
    }

    /// Pulse whose peak pixel decays `|sigma|` by `1/e` (`|sigma|^2` by
    /// `1/e^2`) after `decay_time` of exposure.
    pub fn calibrated(
        mask: IntensityMask,
        decay_time: f64,
        delta_e: f64,
        gamma: f64,
        kappa: f64,
        t_on: f64,
        t_off: f64,
    ) -> Result<Self, OpticsError> {
        if !(decay_time > 0.0 && kappa > 0.0) {
            return Err(OpticsError::Invalid(format!(
                "decay time and kappa must be positive ({decay_time}, {kappa})"
            )));
        }
        let s = saturation_for_rate(1.0 / (kappa * decay_time), delta_e, gamma)?;
        Self::new(mask, s, delta_e, t_on, t_off)
    }

    pub fn duration(&self) -> f64 {
        self.t_off - self.t_on
    }

    /// Length of `[t0, t1]` that overlaps the pulse.
    pub fn overlap(&self, t0: f64, t1: f64) -> f64 {
        (t1.min(self.t_off) - t0.max(self.t_on)).max(0.0)
    }

    pub fn peak_rate(&self, kappa: f64, gamma: f64) -> f64 {
        kappa * scattering_rate(self.s_peak, self.delta_e, gamma)
    }
}

/// Decoherence rate map `kappa R(s_peak * mask)` while the pulse is on,
/// zero otherwise.
pub fn eraser_gamma_field(pulse: &EraserPulse, t: f64, kappa: f64, gamma: f64) -> RealField2D {
    let on = t >= pulse.t_on && t <= pulse.t_off;
    rate_map(pulse, kappa, gamma, if on { 1.0 } else { 0.0 })
}

/// Decoherence rate averaged over `[t0, t1]`, so that `rate * (t1 - t0)`
/// is the exact exposure accumulated inside the interval.
pub fn eraser_gamma_field_averaged(
    pulse: &EraserPulse,
    t0: f64,
    t1: f64,
    kappa: f64,
    gamma: f64,
) -> RealField2D {
    let fraction = pulse.overlap(t0, t1) / (t1 - t0);
    rate_map(pulse, kappa, gamma, fraction)
}

fn rate_map(pulse: &EraserPulse, kappa: f64, gamma: f64, fraction: f64) -> RealField2D {
    let (nx, ny) = (pulse.mask.nx(), pulse.mask.ny());
    if fraction == 0.0 {
        return RealField2D::zeros(nx, ny);
    }
    RealField2D {
        nx,
        ny,
        data: pulse
            .mask
            .values()
            .iter()
            .map(|&m| fraction * kappa * scattering_rate(pulse.s_peak * m, pulse.delta_e, gamma))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, GridConfig};
    use crate::units::PhysicalConstants;
    use proptest::prelude::*;

    fn grid() -> crate::grid::SimulationGrid {
        make_grid(&GridConfig {
            nx: 4,
            ny: 2,
            ..GridConfig::single_pixel(8, 0.01, 1.0)
        })
        .unwrap()
    }

    #[test]
    fn zero_intensity_scatters_nothing() {
        assert_eq!(scattering_rate(0.0, 100.0, 36.0), 0.0);
    }

    #[test]
    fn resonant_half_saturation() {
        let g = 36.128;
        assert!((scattering_rate(1.0, 0.0, g) - g / 4.0).abs() < 1e-14);
    }

    #[test]
    fn far_detuned_reference_value() {
        // Gamma = 2 pi 5.75 MHz, Delta = 2 pi 1.5 GHz, s = 10;
        // 40-digit reference 6.6358009144455153e-4 rad/us.
        let c = PhysicalConstants::rubidium85_d1();
        let r = scattering_rate(10.0, c.delta_e, c.gamma);
        assert!(((r - 6.635_800_914_445_515e-4) / r).abs() < 1e-12);
    }

    #[test]
    fn saturation_inverts_rate() {
        let c = PhysicalConstants::rubidium85_d1();
        let rate = c.gamma / 18.0;
        let s = saturation_for_rate(rate, c.delta_e, c.gamma).unwrap();
        assert!(((scattering_rate(s, c.delta_e, c.gamma) - rate) / rate).abs() < 1e-12);
        assert!(saturation_for_rate(c.gamma, c.delta_e, c.gamma).is_err());
    }

    #[test]
    fn window_and_mask_gate_the_field() {
        let g = grid();
        let c = PhysicalConstants::rubidium85_d1();
        let p = EraserPulse::new(IntensityMask::uniform(&g, 1.0), 1e4, c.delta_e, 1.0, 2.0).unwrap();
        assert!(eraser_gamma_field(&p, 0.5, 1.0, c.gamma).data.iter().all(|&v| v == 0.0));
        assert!(eraser_gamma_field(&p, 1.5, 1.0, c.gamma).data.iter().all(|&v| v > 0.0));
        let dark = EraserPulse::new(IntensityMask::uniform(&g, 0.0), 1e4, c.delta_e, 1.0, 2.0).unwrap();
        assert!(eraser_gamma_field(&dark, 1.5, 1.0, c.gamma).data.iter().all(|&v| v == 0.0));
        let half = eraser_gamma_field_averaged(&p, 0.5, 1.5, 1.0, c.gamma);
        let full = eraser_gamma_field(&p, 1.5, 1.0, c.gamma);
        assert!((half.data[0] - 0.5 * full.data[0]).abs() < 1e-15);
    }

    #[test]
    fn eighteen_gamma_calibration_gives_1_over_e_squared() {
        let g = grid();
        let c = PhysicalConstants::rubidium85_d1();
        let tau = c.us_from_gamma_units(18.0);
        assert!((tau - 0.498_2).abs() < 1e-3);
        let p = EraserPulse::calibrated(IntensityMask::uniform(&g, 1.0), tau, c.delta_e, c.gamma, 1.0, 0.0, 1.0)
            .unwrap();
        let rate = eraser_gamma_field(&p, 0.5, 1.0, c.gamma).data[0];
        // |sigma|^2 decays as exp(-2 rate t).
        let remaining = (-2.0 * rate * tau).exp();
        assert!((remaining - (-2.0f64).exp()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn rate_monotone_and_bounded(s in 0.0f64..1e7, ds in 1e-3f64..1e3, d in 0.0f64..1e4, dd in 1e-3f64..100.0) {
            let gamma = 36.128;
            let r = scattering_rate(s, d, gamma);
            prop_assert!(r < gamma / 2.0);
            prop_assert!(scattering_rate(s + ds, d, gamma) >= r);
            prop_assert!(scattering_rate(s, d + dd, gamma) <= r);
            prop_assert!(scattering_rate(s, -d, gamma) == r);
        }
    }
}
