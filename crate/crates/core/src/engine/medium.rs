use crate::error::EngineError;

/// Atomic medium constants in internal units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Raman coupling strength g (rad/us per field unit).
    pub g: f64,
    /// Effective linear atomic density (per mm, per field unit).
    pub n_lin: f64,
    /// Write/read detuning from the excited state (rad/us).
    pub delta_w: f64,
    /// Background ground-state decoherence rate (1/us).
    pub gamma0: f64,
    /// Transverse diffusion coefficient (mm^2/us).
    pub d: f64,
}

impl MediumParams {
    /// Chooses `g = N` so that `g N omega_ref^2 / delta_w^2 = beta`.
    /// Only the product enters the observable dynamics.
    pub fn from_coupling(beta: f64, omega_ref: f64, delta_w: f64, gamma0: f64, d: f64) -> Self {
        let s = beta.max(0.0).sqrt() * delta_w.abs() / omega_ref;
        Self {
            g: s,
            n_lin: s,
            delta_w,
            gamma0,
            d,
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let checks = [
            ("g", self.g),
            ("n_lin", self.n_lin),
            ("gamma0", self.gamma0),
            ("D", self.d),
        ];
        for (name, v) in checks {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(EngineError::Medium(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if !(self.delta_w != 0.0 && self.delta_w.is_finite()) {
            return Err(EngineError::Medium(format!(
                "delta_w must be finite and non-zero, got {}",
                self.delta_w
            )));
        }
        Ok(())
    }

    /// Spin-wave drive per unit probe amplitude, `g Omega / Delta_w`.
    pub fn spin_coupling(&self, omega: f64) -> f64 {
        self.g * omega / self.delta_w
    }

    /// Field source per unit spin wave, `N Omega / Delta_w`.
    pub fn field_coupling(&self, omega: f64) -> f64 {
        self.n_lin * omega / self.delta_w
    }

    /// Effective coupling `beta = g N Omega^2 / Delta_w^2` (1/(us mm)).
    pub fn beta(&self, omega: f64) -> f64 {
        self.spin_coupling(omega) * self.field_coupling(omega)
    }

    /// Intensity transmission of a probe through the broadened line,
    /// `exp(-2 pi beta / eta)`.
    pub fn transmission(&self, omega: f64, eta: f64) -> f64 {
        (-2.0 * std::f64::consts::PI * self.beta(omega) / eta.abs()).exp()
    }
}

/// Coupling for which the broadened line has optical depth `depth`
/// (transmission `exp(-depth)`).
pub fn beta_for_optical_depth(depth: f64, eta: f64) -> f64 {
    depth * eta.abs() / (2.0 * std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_product_is_beta() {
        let m = MediumParams::from_coupling(0.015, 600.0, 12_566.0, 0.0, 0.0);
        assert!((m.beta(600.0) - 0.015).abs() < 1e-15);
        assert!((m.beta(300.0) - 0.015 / 4.0).abs() < 1e-15);
        assert_eq!(m.beta(0.0), 0.0);
        m.validate().unwrap();
    }

    #[test]
    fn default_depth_absorbs_ninety_five_percent() {
        let eta = 2.0 * std::f64::consts::PI / 200.0;
        let beta = beta_for_optical_depth(3.0, eta);
        assert!((beta - 0.015).abs() < 1e-15);
        let m = MediumParams::from_coupling(beta, 1.0, 1.0, 0.0, 0.0);
        assert!(1.0 - m.transmission(1.0, eta) > 0.9);
    }

    #[test]
    fn invalid_medium_rejected() {
        let mut m = MediumParams::from_coupling(0.01, 1.0, 1.0, 0.0, 0.0);
        m.gamma0 = -1.0;
        assert!(m.validate().is_err());
        let m = MediumParams::from_coupling(0.01, 1.0, 0.0, 0.0, 0.0);
        assert!(m.validate().is_err());
    }
}
