//! TOML scenario files.
//!
//! Keys carry their unit in the name (`_us`, `_mm`, `_mhz`, ...). Unknown
//! keys are rejected. See `presets/*.toml` for complete examples.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{
    beta_for_optical_depth, choose_dt, multi_flip_schedule, stability_limit, BeamKind, BeamPulse,
    BeamSchedule, GradientSchedule, MediumParams, OutputSettings, ProbePulse, Scenario,
};
use crate::error::ConfigError;
use crate::grid::{make_grid, GridConfig, SimulationGrid};
use crate::optics::eraser::{saturation_for_rate, EraserPulse};
use crate::optics::mask::IntensityMask;
use crate::optics::target::make_resolution_target;
use crate::optics::zones::{make_zone_masks, ZoneMaskSet};
use crate::scenario::pgm::{image_to_mask, Placement};
use crate::scenario::presets;
use crate::units::{PhysicalConstants, UnitSystem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub grid: GridSection,
    #[serde(default)]
    pub medium: MediumSection,
    #[serde(default)]
    pub gradient: GradientSection,
    #[serde(default)]
    pub probe: ProbeSection,
    #[serde(default)]
    pub write: WriteSection,
    #[serde(default)]
    pub readout: ReadoutSection,
    #[serde(default)]
    pub eraser: Vec<EraserSection>,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub analysis: Option<AnalysisSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "one")]
    pub nx: usize,
    #[serde(default = "one")]
    pub ny: usize,
    #[serde(default = "default_nz")]
    pub nz: usize,
    #[serde(default = "default_width")]
    pub width_mm: f64,
    #[serde(default = "default_height")]
    pub height_mm: f64,
    #[serde(default = "default_cell")]
    pub cell_length_mm: f64,
    /// Defaults to one probe width past the last mirror time.
    #[serde(default)]
    pub t_max_us: Option<f64>,
    /// Fixed step; must satisfy the stability rule. Chosen automatically
    /// when absent.
    #[serde(default)]
    pub dt_us: Option<f64>,
    #[serde(default = "default_max_dt")]
    pub max_dt_us: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumSection {
    /// Optical depth of the broadened line at write intensity 1.
    #[serde(default)]
    pub optical_depth: Option<f64>,
    /// Alternative to `optical_depth`: `g N Omega_ref^2 / Delta_w^2`.
    #[serde(default)]
    pub coupling_beta_per_us_mm: Option<f64>,
    #[serde(default)]
    pub gamma0_per_us: f64,
    #[serde(default = "default_diffusion")]
    pub diffusion_cm2_per_s: f64,
    #[serde(default = "default_write_detuning")]
    pub write_detuning_ghz: f64,
    #[serde(default = "default_eraser_detuning")]
    pub eraser_detuning_ghz: f64,
    #[serde(default = "default_linewidth")]
    pub linewidth_mhz: f64,
    /// Rabi frequency of a control beam with `intensity_rel = 1`.
    #[serde(default = "default_rabi")]
    pub reference_rabi_mhz: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "one")]
    pub diffusion_every_steps: usize,
}

impl Default for MediumSection {
    fn default() -> Self {
        Self {
            optical_depth: None,
            coupling_beta_per_us_mm: None,
            gamma0_per_us: 0.0,
            diffusion_cm2_per_s: default_diffusion(),
            write_detuning_ghz: default_write_detuning(),
            eraser_detuning_ghz: default_eraser_detuning(),
            linewidth_mhz: default_linewidth(),
            reference_rabi_mhz: default_rabi(),
            kappa: default_kappa(),
            diffusion_every_steps: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradientSection {
    /// Width of the Zeeman-broadened Raman line across the cell.
    #[serde(default = "default_raman_width")]
    pub raman_linewidth_mhz: f64,
    #[serde(default)]
    pub flip_times_us: Option<Vec<f64>>,
    /// Echo delay after the probe centre; places one flip halfway.
    #[serde(default)]
    pub storage_time_us: Option<f64>,
    #[serde(default = "one")]
    pub rephasings: usize,
    #[serde(default)]
    pub rephasing_period_us: Option<f64>,
}

impl Default for GradientSection {
    fn default() -> Self {
        Self {
            raman_linewidth_mhz: default_raman_width(),
            flip_times_us: None,
            storage_time_us: None,
            rephasings: 1,
            rephasing_period_us: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbePattern {
    Uniform,
    Image,
    Logo,
    Target,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    #[serde(default = "default_pattern")]
    pub pattern: ProbePattern,
    /// PGM file for `pattern = "image"`, relative to the config file.
    #[serde(default)]
    pub image: Option<String>,
    /// Object size before magnification; defaults to the bundled logo's
    /// 8 x 2 mm.
    #[serde(default = "default_object_width")]
    pub object_width_mm: f64,
    #[serde(default = "default_object_height")]
    pub object_height_mm: f64,
    #[serde(default = "default_magnification")]
    pub magnification: f64,
    #[serde(default)]
    pub line_pairs_per_mm: Option<f64>,
    #[serde(default = "default_duty")]
    pub duty: f64,
    /// Optional rectangular aperture (full widths) applied to the pattern.
    #[serde(default)]
    pub aperture_width_mm: Option<f64>,
    #[serde(default)]
    pub aperture_height_mm: Option<f64>,
    #[serde(default)]
    pub aperture_edge_mm: f64,
    #[serde(default = "default_probe_center")]
    pub center_us: f64,
    /// Full `1/e^2` width of the intensity envelope.
    #[serde(default = "default_probe_width")]
    pub width_us: f64,
    #[serde(default)]
    pub detuning_mhz: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    /// Gaussian illumination envelope (`1/e^2` radius); off when absent.
    #[serde(default)]
    pub illumination_radius_mm: Option<f64>,
}

impl Default for ProbeSection {
    fn default() -> Self {
        Self {
            pattern: default_pattern(),
            image: None,
            object_width_mm: default_object_width(),
            object_height_mm: default_object_height(),
            magnification: default_magnification(),
            line_pairs_per_mm: None,
            duty: default_duty(),
            aperture_width_mm: None,
            aperture_height_mm: None,
            aperture_edge_mm: 0.0,
            center_us: default_probe_center(),
            width_us: default_probe_width(),
            detuning_mhz: 0.0,
            amplitude: default_amplitude(),
            illumination_radius_mm: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WriteSection {
    #[serde(default = "default_amplitude")]
    pub intensity_rel: f64,
    #[serde(default)]
    pub start_us: f64,
    /// Defaults to 0.6 probe widths after the probe centre, or the first
    /// flip if earlier.
    #[serde(default)]
    pub end_us: Option<f64>,
}

impl Default for WriteSection {
    fn default() -> Self {
        Self {
            intensity_rel: 1.0,
            start_us: 0.0,
            end_us: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReadoutMode {
    Full,
    Zones,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutSection {
    #[serde(default = "default_readout_mode")]
    pub mode: ReadoutMode,
    #[serde(default = "default_amplitude")]
    pub intensity_rel: f64,
    /// Full-plane read window; defaults to the first flip and `t_max`.
    #[serde(default)]
    pub start_us: Option<f64>,
    #[serde(default)]
    pub end_us: Option<f64>,
    #[serde(default)]
    pub boundaries_mm: Vec<f64>,
    #[serde(default = "default_edge")]
    pub edge_width_mm: f64,
    #[serde(default)]
    pub windows_us: Vec<[f64; 2]>,
}

impl Default for ReadoutSection {
    fn default() -> Self {
        Self {
            mode: default_readout_mode(),
            intensity_rel: 1.0,
            start_us: None,
            end_us: None,
            boundaries_mm: Vec::new(),
            edge_width_mm: default_edge(),
            windows_us: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EraserSection {
    #[serde(default)]
    pub label: Option<String>,
    pub x_min_mm: f64,
    pub x_max_mm: f64,
    #[serde(default)]
    pub y_min_mm: Option<f64>,
    #[serde(default)]
    pub y_max_mm: Option<f64>,
    #[serde(default)]
    pub edge_width_mm: f64,
    pub start_us: f64,
    pub duration_us: f64,
    /// Peak `|sigma|` 1/e time in units of 1/Gamma.
    #[serde(default)]
    pub decay_time_gamma_units: Option<f64>,
    #[serde(default)]
    pub decay_time_us: Option<f64>,
    /// Peak saturation ratio `I / I_sat`.
    #[serde(default)]
    pub saturation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// 0 disables periodic frames.
    #[serde(default = "default_frame_interval")]
    pub frame_interval_us: f64,
    #[serde(default)]
    pub snapshot_times_us: Vec<f64>,
    #[serde(default = "yes")]
    pub write_frames: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            frame_interval_us: default_frame_interval(),
            snapshot_times_us: Vec::new(),
            write_frames: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Duration of every eraser pulse; 0 removes the erasers.
    EraserDurationUs,
    /// Echo delay after the probe centre.
    StorageTimeUs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalysisKind {
    /// Leakage and boundary sharpness of a zoned readout.
    Zones,
    /// Fringe peaks and relative visibility around an erased fringe.
    Fringes,
    /// Michelson visibility of a grating against the diffusion models.
    Visibility,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub kind: AnalysisKind,
    /// Row range `[first, end)` averaged into the profile; all rows if absent.
    #[serde(default)]
    pub rows: Option<[usize; 2]>,
    /// Subtracted from the normalised profile before visibilities.
    #[serde(default)]
    pub background: f64,
    #[serde(default)]
    pub target_fringe_mm: f64,
    #[serde(default)]
    pub reference_fringe_mm: Option<f64>,
    /// Background added to the closed-form model curve.
    #[serde(default)]
    pub model_background: f64,
}

fn one() -> usize {
    1
}
fn yes() -> bool {
    true
}
fn default_nz() -> usize {
    256
}
fn default_width() -> f64 {
    12.0
}
fn default_height() -> f64 {
    4.0
}
fn default_cell() -> f64 {
    crate::grid::DEFAULT_CELL_LENGTH_MM
}
fn default_max_dt() -> f64 {
    0.02
}
fn default_diffusion() -> f64 {
    35.0
}
fn default_write_detuning() -> f64 {
    PhysicalConstants::WRITE_DETUNING_GHZ
}
fn default_eraser_detuning() -> f64 {
    PhysicalConstants::ERASER_DETUNING_GHZ
}
fn default_linewidth() -> f64 {
    PhysicalConstants::LINEWIDTH_MHZ
}
fn default_rabi() -> f64 {
    100.0
}
fn default_kappa() -> f64 {
    crate::optics::eraser::DEFAULT_KAPPA
}
fn default_raman_width() -> f64 {
    1.0
}
fn default_pattern() -> ProbePattern {
    ProbePattern::Uniform
}
fn default_object_width() -> f64 {
    8.0
}
fn default_object_height() -> f64 {
    2.0
}
fn default_magnification() -> f64 {
    1.25
}
fn default_duty() -> f64 {
    0.5
}
fn default_probe_center() -> f64 {
    2.0
}
fn default_probe_width() -> f64 {
    2.0
}
fn default_amplitude() -> f64 {
    1.0
}
fn default_readout_mode() -> ReadoutMode {
    ReadoutMode::Full
}
fn default_edge() -> f64 {
    crate::optics::zones::DEFAULT_EDGE_WIDTH_MM
}
fn default_frame_interval() -> f64 {
    0.1
}

/// Default optical depth of the broadened line: 95 % absorption.
pub const DEFAULT_OPTICAL_DEPTH: f64 = 3.0;

/// A scenario ready to run plus what the analysis needs to know about it.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltScenario {
    pub scenario: Scenario,
    pub zones: Option<ZoneMaskSet>,
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    /// Reads a config file; relative image paths resolve against its
    /// directory.
    pub fn load(path: &Path) -> Result<(Self, PathBuf), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        let base = path.parent().map(Path::to_owned).unwrap_or_default();
        Ok((Self::from_toml(&text)?, base))
    }

    pub fn constants(&self) -> PhysicalConstants {
        PhysicalConstants {
            gamma: UnitSystem::angular_from_mhz(self.medium.linewidth_mhz),
            delta_w: UnitSystem::angular_from_ghz(self.medium.write_detuning_ghz),
            delta_e: UnitSystem::angular_from_ghz(self.medium.eraser_detuning_ghz),
        }
    }

    pub fn eta(&self) -> f64 {
        GradientSchedule::eta_for_linewidth(
            UnitSystem::angular_from_mhz(self.gradient.raman_linewidth_mhz),
            self.grid.cell_length_mm,
        )
    }

    fn flip_times(&self) -> Result<Vec<f64>, ConfigError> {
        let g = &self.gradient;
        let first = match (&g.flip_times_us, g.storage_time_us) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "gradient: give either flip_times_us or storage_time_us, not both",
                ))
            }
            (Some(f), None) => return Ok(f.clone()),
            (None, Some(t)) if t > 0.0 => self.probe.center_us + 0.5 * t,
            (None, Some(t)) => return Err(invalid(format!("gradient.storage_time_us must be positive, got {t}"))),
            (None, None) => return Ok(Vec::new()),
        };
        if g.rephasings <= 1 {
            return Ok(vec![first]);
        }
        let period = g
            .rephasing_period_us
            .unwrap_or(2.0 * (first - self.probe.center_us));
        let base = GradientSchedule::new(self.eta(), vec![first])?;
        Ok(multi_flip_schedule(&base, g.rephasings, period)?.flip_times)
    }

    fn t_max(&self, flips: &[f64]) -> f64 {
        if let Some(t) = self.grid.t_max_us {
            return t;
        }
        let tp = self.probe.center_us;
        let mut t = tp + self.probe.width_us * 1.5;
        if let Some(&last) = flips.last() {
            let prev = if flips.len() > 1 { flips[flips.len() - 2] } else { tp };
            t = t.max(2.0 * last - prev + self.probe.width_us);
        }
        for w in &self.readout.windows_us {
            t = t.max(w[1]);
        }
        for e in &self.eraser {
            t = t.max(e.start_us + e.duration_us);
        }
        t
    }

    /// Applies one sweep value to a copy of this configuration.
    pub fn with_sweep_value(&self, parameter: SweepParameter, value: f64) -> ScenarioConfig {
        let mut c = self.clone();
        c.sweep = None;
        match parameter {
            SweepParameter::EraserDurationUs => {
                if value <= 0.0 {
                    c.eraser.clear();
                } else {
                    for e in &mut c.eraser {
                        e.duration_us = value;
                    }
                }
            }
            SweepParameter::StorageTimeUs => {
                c.gradient.flip_times_us = None;
                c.gradient.storage_time_us = Some(value);
                c.grid.t_max_us = None;
                c.readout.start_us = None;
                c.readout.end_us = None;
            }
        }
        c
    }

    pub fn build(&self, base_dir: Option<&Path>) -> Result<BuiltScenario, ConfigError> {
        let g = &self.grid;
        let m = &self.medium;
        let constants = self.constants();
        let flips = self.flip_times()?;
        let t_max = self.t_max(&flips);
        if g.nx == 0 || g.ny == 0 || g.nz == 0 {
            return Err(invalid("grid: nx, ny and nz must be at least 1"));
        }
        let provisional = make_grid(&GridConfig {
            nx: g.nx,
            ny: g.ny,
            nz: g.nz,
            dx: g.width_mm / g.nx as f64,
            dy: g.height_mm / g.ny as f64,
            dz: g.cell_length_mm / g.nz as f64,
            dt: t_max,
            t_max,
            cell_length: g.cell_length_mm,
            dt_limit: None,
        })?;

        let eta = self.eta();
        let omega_ref = UnitSystem::angular_from_mhz(m.reference_rabi_mhz);
        let beta = match (m.optical_depth, m.coupling_beta_per_us_mm) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "medium: give either optical_depth or coupling_beta_per_us_mm, not both",
                ))
            }
            (Some(d), None) => beta_for_optical_depth(d, eta),
            (None, Some(b)) => b,
            (None, None) => beta_for_optical_depth(DEFAULT_OPTICAL_DEPTH, eta),
        };
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(invalid(format!("medium: coupling must be non-negative, got {beta}")));
        }
        let medium = MediumParams::from_coupling(
            beta,
            omega_ref,
            constants.delta_w,
            m.gamma0_per_us,
            UnitSystem::diffusion_from_cm2_per_s(m.diffusion_cm2_per_s),
        );

        let probe = self.build_probe(&provisional, base_dir)?;
        let (mut beams, zones) = self.build_beams(&provisional, &flips, t_max, omega_ref)?;
        beams.pulses.extend(self.build_erasers(&provisional, &constants)?);

        let limit = stability_limit(&medium, beams.peak_rabi(provisional.pixel_count()), eta, g.cell_length_mm);
        let dt = match g.dt_us {
            Some(dt) => dt,
            None => choose_dt(t_max, limit, g.max_dt_us),
        };
        let grid = make_grid(&GridConfig {
            dt,
            dt_limit: Some(limit),
            ..grid_config(&provisional, t_max)
        })?;

        let frame_interval = (self.output.frame_interval_us > 0.0).then_some(self.output.frame_interval_us);
        let scenario = Scenario {
            grid,
            medium,
            gradient: GradientSchedule::new(eta, flips)?,
            beams,
            probe,
            constants,
            kappa: m.kappa,
            diffusion_every: m.diffusion_every_steps,
            output: OutputSettings {
                frame_interval,
                snapshot_times: self.output.snapshot_times_us.clone(),
            },
        };
        scenario.validate()?;
        Ok(BuiltScenario { scenario, zones })
    }

    fn build_probe(&self, grid: &SimulationGrid, base_dir: Option<&Path>) -> Result<Option<ProbePulse>, ConfigError> {
        let p = &self.probe;
        let placement = Placement::imaged(p.object_width_mm, p.object_height_mm, p.magnification);
        let mask = match p.pattern {
            ProbePattern::None => return Ok(None),
            ProbePattern::Uniform => IntensityMask::uniform(grid, 1.0),
            ProbePattern::Logo => {
                let img = presets::logo();
                image_to_mask(&img, grid, placement, "bundled logo")
            }
            ProbePattern::Image => {
                let rel = p
                    .image
                    .as_ref()
                    .ok_or_else(|| invalid("probe: pattern = \"image\" needs an image path"))?;
                let path = base_dir.map(|b| b.join(rel)).unwrap_or_else(|| PathBuf::from(rel));
                if !path.exists() {
                    return Err(invalid(format!("probe: image {} does not exist", path.display())));
                }
                crate::scenario::pgm::load_mask(&path, grid, placement)?
            }
            ProbePattern::Target => {
                let lppm = p
                    .line_pairs_per_mm
                    .ok_or_else(|| invalid("probe: pattern = \"target\" needs line_pairs_per_mm"))?;
                make_resolution_target(grid, lppm, p.duty, 0.0)?
            }
        };
        let mask = match (p.aperture_width_mm, p.aperture_height_mm) {
            (None, None) => mask,
            (w, h) => {
                let (hw, hh) = (0.5 * w.unwrap_or(1e9), 0.5 * h.unwrap_or(1e9));
                let ap = IntensityMask::rectangle(grid, (-hw, hw), (-hh, hh), p.aperture_edge_mm);
                mask.multiply(&ap)?
            }
        };
        let mut probe = ProbePulse::new(mask, p.center_us, p.width_us);
        probe.amplitude = p.amplitude;
        probe.detuning = UnitSystem::angular_from_mhz(p.detuning_mhz);
        if let Some(r) = p.illumination_radius_mm {
            if !(r > 0.0) {
                return Err(invalid(format!("probe: illumination_radius_mm must be positive, got {r}")));
            }
            probe = probe.with_gaussian_illumination(grid, r);
        }
        Ok(Some(probe))
    }

    fn build_beams(
        &self,
        grid: &SimulationGrid,
        flips: &[f64],
        t_max: f64,
        omega_ref: f64,
    ) -> Result<(BeamSchedule, Option<ZoneMaskSet>), ConfigError> {
        let w = &self.write;
        let r = &self.readout;
        for (name, v) in [("write", w.intensity_rel), ("readout", r.intensity_rel)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name}.intensity_rel must be non-negative, got {v}")));
            }
        }
        let full = IntensityMask::uniform(grid, 1.0);
        let first_flip = flips.first().copied();
        let write_end = w.end_us.unwrap_or_else(|| {
            let natural = self.probe.center_us + 0.6 * self.probe.width_us;
            first_flip.map_or(natural, |f| natural.min(f))
        });
        let mut pulses = vec![BeamPulse::control(
            BeamKind::Write,
            full.clone(),
            omega_ref * w.intensity_rel.sqrt(),
            w.start_us,
            write_end,
            "write",
        )];
        let read_rabi = omega_ref * r.intensity_rel.sqrt();
        let mut zones = None;
        match r.mode {
            ReadoutMode::None => {}
            ReadoutMode::Full => {
                let start = r.start_us.or(first_flip).unwrap_or(write_end);
                let end = r.end_us.unwrap_or(t_max);
                pulses.push(BeamPulse::control(BeamKind::Read, full, read_rabi, start, end, "read"));
            }
            ReadoutMode::Zones => {
                let windows: Vec<(f64, f64)> = r.windows_us.iter().map(|w| (w[0], w[1])).collect();
                let set = make_zone_masks(grid, &r.boundaries_mm, r.edge_width_mm, &windows)?;
                for (k, z) in set.zones.iter().enumerate() {
                    pulses.push(BeamPulse::control(
                        BeamKind::Read,
                        z.mask.clone(),
                        read_rabi,
                        z.t_on,
                        z.t_off,
                        format!("read{}", k + 1),
                    ));
                }
                zones = Some(set);
            }
        }
        Ok((BeamSchedule::new(pulses), zones))
    }

    fn build_erasers(&self, grid: &SimulationGrid, c: &PhysicalConstants) -> Result<Vec<BeamPulse>, ConfigError> {
        let kappa = self.medium.kappa;
        self.eraser
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let label = e.label.clone().unwrap_or_else(|| format!("eraser{}", k + 1));
                let mask = IntensityMask::rectangle(
                    grid,
                    (e.x_min_mm, e.x_max_mm),
                    (e.y_min_mm.unwrap_or(-1e9), e.y_max_mm.unwrap_or(1e9)),
                    e.edge_width_mm,
                );
                let decay = match (e.decay_time_gamma_units, e.decay_time_us, e.saturation) {
                    (Some(n), None, None) => Some(c.us_from_gamma_units(n)),
                    (None, Some(t), None) => Some(t),
                    (None, None, Some(_)) => None,
                    _ => {
                        return Err(invalid(format!(
                            "eraser '{label}': give exactly one of decay_time_gamma_units, decay_time_us, saturation"
                        )))
                    }
                };
                let s = match decay {
                    Some(t) if t > 0.0 && kappa > 0.0 => saturation_for_rate(1.0 / (kappa * t), c.delta_e, c.gamma)?,
                    Some(t) => {
                        return Err(invalid(format!(
                            "eraser '{label}': decay time and kappa must be positive (decay {t} us, kappa {kappa})"
                        )))
                    }
                    None => e.saturation.unwrap_or_default(),
                };
                let pulse = EraserPulse::new(mask, s, c.delta_e, e.start_us, e.start_us + e.duration_us)?;
                Ok(BeamPulse::eraser(pulse, label))
            })
            .collect()
    }
}

fn grid_config(g: &SimulationGrid, t_max: f64) -> GridConfig {
    GridConfig {
        nx: g.nx(),
        ny: g.ny(),
        nz: g.nz(),
        dx: g.dx(),
        dy: g.dy(),
        dz: g.dz(),
        dt: g.dt(),
        t_max,
        cell_length: g.cell_length(),
        dt_limit: None,
    }
}
