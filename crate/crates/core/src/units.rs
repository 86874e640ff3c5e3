//! Internal unit system and physical constants.
//!
//! Everything inside the simulator is expressed in microseconds, millimetres
//! and radians per microsecond. Intensities are carried as saturation ratios
//! `I / I_sat`. Conversions to laboratory units happen only at the I/O edge,
//! through the helpers below.

use std::f64::consts::PI;

/// Marker for the internal unit system (us, mm, rad/us, I/I_sat).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnitSystem;

impl UnitSystem {
    pub const TIME: &'static str = "us";
    pub const LENGTH: &'static str = "mm";
    pub const ANGULAR_FREQUENCY: &'static str = "rad/us";

    pub fn us_from_s(s: f64) -> f64 {
        s * 1.0e6
    }

    pub fn s_from_us(us: f64) -> f64 {
        us / 1.0e6
    }

    pub fn mm_from_cm(cm: f64) -> f64 {
        cm * 10.0
    }

    pub fn cm_from_mm(mm: f64) -> f64 {
        mm / 10.0
    }

    /// cm^2/s to mm^2/us. `35 cm^2/s` maps to exactly `3.5e-3`.
    pub fn diffusion_from_cm2_per_s(d: f64) -> f64 {
        // 1 cm^2/s = 100 mm^2 / 1e6 us; a single division keeps the result
        // correctly rounded.
        d / 10_000.0
    }

    pub fn diffusion_to_cm2_per_s(d: f64) -> f64 {
        d * 10_000.0
    }

    /// Ordinary frequency in MHz to angular frequency in rad/us.
    pub fn angular_from_mhz(f_mhz: f64) -> f64 {
        2.0 * PI * f_mhz
    }

    pub fn mhz_from_angular(w: f64) -> f64 {
        w / (2.0 * PI)
    }

    pub fn angular_from_ghz(f_ghz: f64) -> f64 {
        2.0 * PI * f_ghz * 1.0e3
    }

    pub fn ghz_from_angular(w: f64) -> f64 {
        w / (2.0 * PI * 1.0e3)
    }

    /// Angular frequency in rad/s to rad/us.
    pub fn angular_from_rad_per_s(w: f64) -> f64 {
        w / 1.0e6
    }

    pub fn rad_per_s_from_angular(w: f64) -> f64 {
        w * 1.0e6
    }

    /// Linear density in 1/cm to 1/mm.
    pub fn per_mm_from_per_cm(x: f64) -> f64 {
        x / 10.0
    }

    pub fn per_cm_from_per_mm(x: f64) -> f64 {
        x * 10.0
    }
}

/// Atomic constants for the 85Rb D1 line used by the default scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Excited-state linewidth Gamma (rad/us).
    pub gamma: f64,
    /// Write/read detuning Delta_w (rad/us).
    pub delta_w: f64,
    /// Eraser detuning Delta_e (rad/us).
    pub delta_e: f64,
}

impl PhysicalConstants {
    /// 5.75 MHz natural linewidth of 5P1/2.
    pub const LINEWIDTH_MHZ: f64 = 5.75;
    pub const WRITE_DETUNING_GHZ: f64 = 2.0;
    pub const ERASER_DETUNING_GHZ: f64 = 1.5;

    pub fn rubidium85_d1() -> Self {
        Self {
            gamma: UnitSystem::angular_from_mhz(Self::LINEWIDTH_MHZ),
            delta_w: UnitSystem::angular_from_ghz(Self::WRITE_DETUNING_GHZ),
            delta_e: UnitSystem::angular_from_ghz(Self::ERASER_DETUNING_GHZ),
        }
    }

    /// Converts a time expressed in units of 1/Gamma to microseconds.
    pub fn us_from_gamma_units(&self, n: f64) -> f64 {
        n / self.gamma
    }

    pub fn gamma_units_from_us(&self, t: f64) -> f64 {
        t * self.gamma
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::rubidium85_d1()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn diffusion_conversion_is_exact() {
        assert_eq!(UnitSystem::diffusion_from_cm2_per_s(35.0), 3.5e-3);
    }

    #[test]
    fn linewidth_in_internal_units() {
        let c = PhysicalConstants::rubidium85_d1();
        assert!((c.gamma - 36.128_315_516_282_62).abs() < 1e-12);
        // 18 / Gamma is just under half a microsecond.
        assert!((c.us_from_gamma_units(18.0) - 0.498_224).abs() < 1e-6);
        assert!(c.gamma > 0.0 && c.delta_e > 0.0 && c.delta_w > 0.0);
    }

    fn rel(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            ((a - b) / b).abs()
        }
    }

    proptest! {
        #[test]
        fn round_trips(x in -1.0e6f64..1.0e6) {
            prop_assert!(rel(UnitSystem::s_from_us(UnitSystem::us_from_s(x)), x) <= 1e-12);
            prop_assert!(rel(UnitSystem::cm_from_mm(UnitSystem::mm_from_cm(x)), x) <= 1e-12);
            prop_assert!(rel(UnitSystem::diffusion_to_cm2_per_s(UnitSystem::diffusion_from_cm2_per_s(x)), x) <= 1e-12);
            prop_assert!(rel(UnitSystem::mhz_from_angular(UnitSystem::angular_from_mhz(x)), x) <= 1e-12);
            prop_assert!(rel(UnitSystem::ghz_from_angular(UnitSystem::angular_from_ghz(x)), x) <= 1e-12);
            prop_assert!(rel(UnitSystem::rad_per_s_from_angular(UnitSystem::angular_from_rad_per_s(x)), x) <= 1e-12);
            prop_assert!(rel(UnitSystem::per_cm_from_per_mm(UnitSystem::per_mm_from_per_cm(x)), x) <= 1e-12);
        }
    }
}
