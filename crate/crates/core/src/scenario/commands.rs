//! Running configured experiments (single runs and sweeps) and the
//! stand-alone model commands.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::analysis::capacity::channel_density;
use crate::analysis::fit::{fit_exponential, ExpFit};
use crate::analysis::oracle::{visibility_decay_curve, DecayPoint};
use crate::analysis::profile::extract_profile;
use crate::analysis::visibility::{visibility_approx_with_background, ChannelGeometry};
use crate::engine::{run_protocol, RunResult};
use crate::error::{AnalysisError, ConfigError, Error};
use crate::optics::eraser::scattering_rate;
use crate::scenario::config::{AnalysisKind, BuiltScenario, ProbePattern, ScenarioConfig, SweepParameter};
use crate::scenario::evaluate::{fringe_report, grating_report, zone_report, FringeReport, GratingReport, ZoneReport};
use crate::scenario::pgm::GrayImage;
use crate::units::UnitSystem;

/// Channels on each side of the centre used by the diffusion oracle.
pub const ORACLE_CHANNELS: usize = 41;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RunAnalysis {
    Zones(ZoneReport),
    Fringes(FringeReport),
    Visibility(GratingReport),
}

#[derive(Debug, Clone)]
pub struct SingleRun {
    pub label: String,
    pub sweep_value: Option<f64>,
    pub built: BuiltScenario,
    pub result: RunResult,
    pub analysis: Option<RunAnalysis>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErasurePoint {
    pub eraser_duration_us: f64,
    pub visibility: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErasureReport {
    pub points: Vec<ErasurePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<ErasureFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErasureFit {
    pub fit_amplitude: f64,
    pub fit_rate_per_us: f64,
    /// Amplitude 1/e time of the spin wave, `2 / rate`.
    pub fitted_time_constant_us: f64,
    pub input_time_constant_us: f64,
    pub fitted_gamma_units: f64,
    pub input_gamma_units: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StoragePoint {
    pub storage_time_us: f64,
    pub simulated: f64,
    pub model: f64,
    pub oracle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepReport {
    Erasure(ErasureReport),
    VisibilityDecay { points: Vec<StoragePoint> },
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    pub config: ScenarioConfig,
    pub runs: Vec<SingleRun>,
    pub sweep: Option<SweepReport>,
}

/// Builds and runs `config` (every sweep value if it has a sweep) and
/// evaluates the configured analysis. `log` receives progress lines.
pub fn run_experiment(
    config: &ScenarioConfig,
    base_dir: Option<&std::path::Path>,
    mut log: impl FnMut(&str),
) -> Result<Experiment, Error> {
    let name = config.name.clone().unwrap_or_else(|| "run".to_owned());
    let variants: Vec<(String, Option<f64>, ScenarioConfig)> = match &config.sweep {
        None => vec![(name.clone(), None, config.clone())],
        Some(s) => {
            if s.values.is_empty() {
                return Err(ConfigError::Invalid("sweep.values is empty".into()).into());
            }
            s.values
                .iter()
                .enumerate()
                .map(|(i, &v)| (format!("run{i:02}"), Some(v), config.with_sweep_value(s.parameter, v)))
                .collect()
        }
    };
    // Build everything first so a bad sweep value fails before any work.
    let built: Vec<BuiltScenario> = variants
        .iter()
        .map(|(_, _, c)| c.build(base_dir))
        .collect::<Result<_, _>>()?;

    let mut runs = Vec::new();
    for ((label, value, cfg), b) in variants.into_iter().zip(built) {
        let g = &b.scenario.grid;
        log(&format!(
            "{label}: {}x{}x{} grid, dt {:.5} us, {} steps",
            g.nx(),
            g.ny(),
            g.nz(),
            g.dt(),
            g.steps()
        ));
        let start = Instant::now();
        let result = run_protocol(&b.scenario)?;
        let elapsed = start.elapsed();
        let analysis = analyse(&cfg, &b, &result)?;
        log(&format!(
            "{label}: efficiency {:.4}, {:.1} s",
            result.metrics.efficiency,
            elapsed.as_secs_f64()
        ));
        runs.push(SingleRun {
            label,
            sweep_value: value,
            built: b,
            result,
            analysis,
            elapsed,
        });
    }
    let sweep = match &config.sweep {
        Some(s) => sweep_report(config, s.parameter, &runs)?,
        None => None,
    };
    Ok(Experiment {
        name,
        config: config.clone(),
        runs,
        sweep,
    })
}

fn target_geometry(config: &ScenarioConfig) -> Result<ChannelGeometry, AnalysisError> {
    let p = &config.probe;
    match (p.pattern, p.line_pairs_per_mm) {
        (ProbePattern::Target, Some(l)) => ChannelGeometry::from_line_pairs(l, p.duty),
        _ => Err(AnalysisError::Invalid(
            "this analysis needs a probe with pattern = \"target\"".into(),
        )),
    }
}

fn analyse(config: &ScenarioConfig, built: &BuiltScenario, run: &RunResult) -> Result<Option<RunAnalysis>, Error> {
    let Some(a) = &config.analysis else {
        return Ok(None);
    };
    let grid = &run.grid;
    Ok(Some(match a.kind {
        AnalysisKind::Zones => {
            let zones = built.zones.as_ref().ok_or_else(|| {
                ConfigError::Invalid("analysis kind \"zones\" needs readout.mode = \"zones\"".into())
            })?;
            RunAnalysis::Zones(zone_report(run, zones, a.rows)?)
        }
        AnalysisKind::Fringes => {
            let geo = target_geometry(config)?;
            let period = geo.period();
            let reference = a.reference_fringe_mm.unwrap_or(a.target_fringe_mm - 4.0 * period);
            RunAnalysis::Fringes(fringe_report(
                &run.retrieved_map,
                grid,
                period,
                a.target_fringe_mm,
                reference,
                a.rows,
                a.background,
            )?)
        }
        AnalysisKind::Visibility => {
            let geo = target_geometry(config)?;
            RunAnalysis::Visibility(grating_report(&run.retrieved_map, &geo, grid, a.rows, a.background)?)
        }
    }))
}

/// Amplitude 1/e time of the first eraser at its peak intensity.
pub fn eraser_time_constant(config: &ScenarioConfig) -> Option<f64> {
    let e = config.eraser.first()?;
    let c = config.constants();
    if let Some(n) = e.decay_time_gamma_units {
        return Some(c.us_from_gamma_units(n));
    }
    if let Some(t) = e.decay_time_us {
        return Some(t);
    }
    let s = e.saturation?;
    Some(1.0 / (config.medium.kappa * scattering_rate(s, c.delta_e, c.gamma)))
}

fn sweep_report(
    config: &ScenarioConfig,
    parameter: SweepParameter,
    runs: &[SingleRun],
) -> Result<Option<SweepReport>, Error> {
    match parameter {
        SweepParameter::EraserDurationUs => {
            let points: Vec<ErasurePoint> = runs
                .iter()
                .filter_map(|r| match &r.analysis {
                    Some(RunAnalysis::Fringes(f)) => Some(ErasurePoint {
                        eraser_duration_us: r.sweep_value.unwrap_or(0.0),
                        visibility: f.relative_visibility,
                    }),
                    _ => None,
                })
                .collect();
            if points.is_empty() {
                return Ok(None);
            }
            let xs: Vec<f64> = points.iter().map(|p| p.eraser_duration_us).collect();
            let ys: Vec<f64> = points.iter().map(|p| p.visibility).collect();
            // Too few positive points leaves the fit out.
            let fit = match (eraser_time_constant(config), fit_exponential(&xs, &ys)) {
                (Some(input), Ok(fit)) => Some(erasure_fit(fit, input, config)),
                _ => None,
            };
            Ok(Some(SweepReport::Erasure(ErasureReport { points, fit })))
        }
        SweepParameter::StorageTimeUs => {
            let geo = target_geometry(config)?;
            let d = UnitSystem::diffusion_from_cm2_per_s(config.medium.diffusion_cm2_per_s);
            let bg = config.analysis.as_ref().map_or(0.0, |a| a.model_background);
            let mut points = Vec::new();
            for r in runs {
                let Some(RunAnalysis::Visibility(v)) = &r.analysis else {
                    continue;
                };
                let t = r.sweep_value.unwrap_or(0.0);
                points.push(StoragePoint {
                    storage_time_us: t,
                    simulated: v.visibility,
                    model: visibility_approx_with_background(geo.a, d, t, bg)?,
                    oracle: crate::analysis::oracle::brute_force_visibility(&geo, d, t, ORACLE_CHANNELS, bg)?,
                });
            }
            Ok(Some(SweepReport::VisibilityDecay { points }))
        }
    }
}

fn erasure_fit(fit: ExpFit, input: f64, config: &ScenarioConfig) -> ErasureFit {
    let c = config.constants();
    let fitted = 2.0 / fit.rate;
    ErasureFit {
        fit_amplitude: fit.amplitude,
        fit_rate_per_us: fit.rate,
        fitted_time_constant_us: fitted,
        input_time_constant_us: input,
        fitted_gamma_units: c.gamma_units_from_us(fitted),
        input_gamma_units: c.gamma_units_from_us(input),
        relative_error: (fitted - input).abs() / input,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityResult {
    pub per_mm: f64,
    pub per_cm: f64,
    pub buffer_mm: f64,
}

/// Maximum linear channel density; `d` in cm^2/s, `t` in us, `b` in mm.
pub fn capacity(d_cm2_per_s: f64, t_us: f64, v_lim: f64, b_mm: f64) -> Result<CapacityResult, AnalysisError> {
    let d = UnitSystem::diffusion_from_cm2_per_s(d_cm2_per_s);
    let per_mm = channel_density(v_lim, d, t_us, b_mm)?;
    Ok(CapacityResult {
        per_mm,
        per_cm: UnitSystem::per_cm_from_per_mm(per_mm),
        buffer_mm: 1.0 / per_mm - b_mm,
    })
}

/// Closed-form visibility against exact diffusion of a square grating.
pub fn visibility_decay(
    line_pairs_per_mm: f64,
    d_cm2_per_s: f64,
    times_us: &[f64],
    background: f64,
) -> Result<Vec<DecayPoint>, AnalysisError> {
    let geo = ChannelGeometry::from_line_pairs(line_pairs_per_mm, 0.5)?;
    let d = UnitSystem::diffusion_from_cm2_per_s(d_cm2_per_s);
    visibility_decay_curve(&geo, d, times_us, background, ORACLE_CHANNELS)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErasureModelPoint {
    pub eraser_duration_us: f64,
    pub visibility: f64,
}

/// Two-level-atom prediction `V(w) = V0 exp(-2 R w)` for an eraser at
/// saturation `s` and detuning `delta_e_ghz`.
pub fn erase_decay_model(
    saturation: f64,
    delta_e_ghz: f64,
    linewidth_mhz: f64,
    kappa: f64,
    v0: f64,
    widths_us: &[f64],
) -> Vec<ErasureModelPoint> {
    let rate = kappa
        * scattering_rate(
            saturation,
            UnitSystem::angular_from_ghz(delta_e_ghz),
            UnitSystem::angular_from_mhz(linewidth_mhz),
        );
    widths_us
        .iter()
        .map(|&w| ErasureModelPoint {
            eraser_duration_us: w,
            visibility: v0 * (-2.0 * rate * w).exp(),
        })
        .collect()
}

/// Row-averaged, max-normalised profile of a PGM frame. The image's top
/// row is row 0.
pub fn image_profile(image: &GrayImage, rows: std::ops::Range<usize>) -> Result<Vec<f64>, AnalysisError> {
    let frame = crate::field::RealField2D {
        nx: image.width,
        ny: image.height,
        data: image.pixels.iter().map(|&p| p as f64 / 255.0).collect(),
    };
    extract_profile(&frame, rows)
}
