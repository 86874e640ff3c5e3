//! Control, read and eraser beams, and the probe pulse.

use num_complex::Complex64;

use crate::engine::medium::MediumParams;
use crate::error::EngineError;
use crate::field::RealField2D;
use crate::grid::SimulationGrid;
use crate::optics::eraser::{eraser_gamma_field_averaged, EraserPulse};
use crate::optics::mask::IntensityMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamKind {
    Write,
    Read,
    Eraser,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Peak Rabi frequency of a coherent control beam (rad/us).
    Coherent { rabi: f64 },
    /// Peak saturation ratio and detuning (rad/us) of an eraser beam.
    Eraser { s_peak: f64, delta_e: f64 },
}

/// Top-hat pulse in time with a transverse intensity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamPulse {
    pub mask: IntensityMask,
    pub drive: Drive,
    pub t_on: f64,
    pub t_off: f64,
    pub kind: BeamKind,
    pub label: String,
}

impl BeamPulse {
    pub fn control(
        kind: BeamKind,
        mask: IntensityMask,
        rabi: f64,
        t_on: f64,
        t_off: f64,
        label: impl Into<String>,
    ) -> Self {
        Self {
            mask,
            drive: Drive::Coherent { rabi },
            t_on,
            t_off,
            kind,
            label: label.into(),
        }
    }

    pub fn eraser(pulse: EraserPulse, label: impl Into<String>) -> Self {
        Self {
            drive: Drive::Eraser {
                s_peak: pulse.s_peak,
                delta_e: pulse.delta_e,
            },
            t_on: pulse.t_on,
            t_off: pulse.t_off,
            mask: pulse.mask,
            kind: BeamKind::Eraser,
            label: label.into(),
        }
    }

    pub fn overlap(&self, t0: f64, t1: f64) -> f64 {
        (t1.min(self.t_off) - t0.max(self.t_on)).max(0.0)
    }

    pub fn as_eraser(&self) -> Option<EraserPulse> {
        match self.drive {
            Drive::Eraser { s_peak, delta_e } => Some(EraserPulse {
                mask: self.mask.clone(),
                s_peak,
                delta_e,
                t_on: self.t_on,
                t_off: self.t_off,
            }),
            Drive::Coherent { .. } => None,
        }
    }

    fn validate(&self, grid: &SimulationGrid) -> Result<(), EngineError> {
        if !(self.t_on < self.t_off) {
            return Err(EngineError::Schedule(format!(
                "pulse '{}' has t_on = {} not before t_off = {}",
                self.label, self.t_on, self.t_off
            )));
        }
        if !self.mask.matches(grid) {
            return Err(EngineError::Schedule(format!(
                "mask of pulse '{}' is {}x{}, grid is {}x{}",
                self.label,
                self.mask.nx(),
                self.mask.ny(),
                grid.nx(),
                grid.ny()
            )));
        }
        match (self.kind, self.drive) {
            (BeamKind::Eraser, Drive::Eraser { s_peak, .. }) if s_peak >= 0.0 => Ok(()),
            (BeamKind::Write | BeamKind::Read, Drive::Coherent { rabi }) if rabi >= 0.0 => Ok(()),
            _ => Err(EngineError::Schedule(format!(
                "pulse '{}' has an invalid drive for its kind",
                self.label
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BeamSchedule {
    pub pulses: Vec<BeamPulse>,
}

impl BeamSchedule {
    pub fn new(pulses: Vec<BeamPulse>) -> Self {
        Self { pulses }
    }

    pub fn validate(&self, grid: &SimulationGrid) -> Result<(), EngineError> {
        self.pulses.iter().try_for_each(|p| p.validate(grid))
    }

    pub fn coherent(&self) -> impl Iterator<Item = &BeamPulse> {
        self.pulses
            .iter()
            .filter(|p| matches!(p.drive, Drive::Coherent { .. }))
    }

    pub fn erasers(&self) -> Vec<EraserPulse> {
        self.pulses.iter().filter_map(BeamPulse::as_eraser).collect()
    }

    /// Largest Rabi frequency any pixel can see with all coherent beams on.
    pub fn peak_rabi(&self, pixels: usize) -> f64 {
        (0..pixels)
            .map(|p| {
                self.coherent()
                    .map(|b| match b.drive {
                        Drive::Coherent { rabi } => rabi * rabi * b.mask.values()[p],
                        Drive::Eraser { .. } => 0.0,
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// Time-averaged `Omega^2` per pixel over `[t0, t1]`; beams add in
    /// intensity.
    pub fn omega_sq_averaged(&self, t0: f64, t1: f64, out: &mut [f64]) {
        out.fill(0.0);
        let span = t1 - t0;
        for b in self.coherent() {
            let f = b.overlap(t0, t1) / span;
            if f == 0.0 {
                continue;
            }
            if let Drive::Coherent { rabi } = b.drive {
                let w = f * rabi * rabi;
                for (o, m) in out.iter_mut().zip(b.mask.values()) {
                    *o += w * m;
                }
            }
        }
    }

    /// Total decoherence rate per pixel averaged over `[t0, t1]`.
    pub fn gamma_averaged(
        &self,
        erasers: &[EraserPulse],
        t0: f64,
        t1: f64,
        gamma0: f64,
        kappa: f64,
        linewidth: f64,
        out: &mut [f64],
    ) {
        out.fill(gamma0);
        for e in erasers {
            if e.overlap(t0, t1) == 0.0 {
                continue;
            }
            let RealField2D { data, .. } = eraser_gamma_field_averaged(e, t0, t1, kappa, linewidth);
            for (o, r) in out.iter_mut().zip(data) {
                *o += r;
            }
        }
    }

    /// Descriptions of eraser pulses that overlap a coherent pulse both in
    /// time and on at least one pixel.
    pub fn eraser_overlap_warnings(&self, threshold: f64) -> Vec<String> {
        let mut warnings = Vec::new();
        for e in self.pulses.iter().filter(|p| p.kind == BeamKind::Eraser) {
            for c in self.coherent() {
                if e.overlap(c.t_on, c.t_off) == 0.0 {
                    continue;
                }
                let shared = e
                    .mask
                    .values()
                    .iter()
                    .zip(c.mask.values())
                    .any(|(a, b)| *a > threshold && *b > threshold);
                if shared {
                    warnings.push(format!(
                        "eraser '{}' overlaps {:?} beam '{}' in time and space; it only adds decoherence there",
                        e.label, c.kind, c.label
                    ));
                }
            }
        }
        warnings
    }
}

/// Gaussian probe pulse with a transverse intensity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePulse {
    pub mask: IntensityMask,
    /// Optional smooth illumination envelope multiplying the mask.
    pub illumination: Option<Vec<f64>>,
    /// Peak field amplitude.
    pub amplitude: f64,
    pub t_center: f64,
    /// Full width of the intensity envelope at `1/e^2` (us).
    pub width: f64,
    /// Two-photon detuning (rad/us); resonant where `eta (z - L/2) = detuning`.
    pub detuning: f64,
}

impl ProbePulse {
    pub fn new(mask: IntensityMask, t_center: f64, width: f64) -> Self {
        Self {
            mask,
            illumination: None,
            amplitude: 1.0,
            t_center,
            width,
            detuning: 0.0,
        }
    }

    /// Gaussian illumination `exp(-2 r^2 / w^2)` with 1/e^2 radius `w` (mm).
    pub fn with_gaussian_illumination(mut self, grid: &SimulationGrid, radius: f64) -> Self {
        let mut env = Vec::with_capacity(grid.pixel_count());
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let r2 = grid.x(ix).powi(2) + grid.y(iy).powi(2);
                env.push((-2.0 * r2 / (radius * radius)).exp());
            }
        }
        self.illumination = Some(env);
        self
    }

    pub fn validate(&self, grid: &SimulationGrid) -> Result<(), EngineError> {
        if !self.mask.matches(grid) {
            return Err(EngineError::Schedule("probe mask does not match grid".into()));
        }
        if !(self.width > 0.0 && self.amplitude.is_finite() && self.detuning.is_finite()) {
            return Err(EngineError::Schedule(format!(
                "probe needs a positive width and finite amplitude (width = {})",
                self.width
            )));
        }
        Ok(())
    }

    /// Field amplitude per pixel: square root of the local intensity.
    pub fn pixel_amplitudes(&self) -> Vec<f64> {
        let m = self.mask.values();
        match &self.illumination {
            Some(env) => m
                .iter()
                .zip(env)
                .map(|(a, b)| self.amplitude * (a * b).sqrt())
                .collect(),
            None => m.iter().map(|a| self.amplitude * a.sqrt()).collect(),
        }
    }

    /// Complex temporal envelope at `t`, peak 1.
    pub fn envelope(&self, t: f64) -> Complex64 {
        let w = 0.5 * self.width;
        let u = (t - self.t_center) / w;
        Complex64::from_polar((-u * u).exp(), -self.detuning * t)
    }
}

/// `dt <= 0.1 / max(beta_peak L, |eta| L)`.
pub fn stability_limit(medium: &MediumParams, peak_rabi: f64, eta: f64, cell_length: f64) -> f64 {
    let rate = (medium.beta(peak_rabi) * cell_length).max(eta.abs() * cell_length);
    if rate > 0.0 {
        0.1 / rate
    } else {
        f64::INFINITY
    }
}

/// Largest step not above `limit` that divides `t_max` evenly, capped at
/// `max_dt`.
pub fn choose_dt(t_max: f64, limit: f64, max_dt: f64) -> f64 {
    let bound = limit.min(max_dt);
    let n = (t_max / bound).ceil().max(1.0);
    t_max / n
}
