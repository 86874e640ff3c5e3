//! Write, storage, rephasing and masked readout on a full transverse grid.

use crate::engine::beams::{BeamKind, BeamSchedule, ProbePulse};
use crate::engine::gradient::GradientSchedule;
use crate::engine::medium::MediumParams;
use crate::engine::solver::{step_spinwave, EngineState, PixelCoefficients, StepDrive};
use crate::error::EngineError;
use crate::field::{ComplexField3D, RealField2D};
use crate::grid::SimulationGrid;
use crate::optics::diffusion::Diffuser;
use crate::units::PhysicalConstants;

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSettings {
    /// Spacing of echo frames (us); `None` disables periodic frames.
    pub frame_interval: Option<f64>,
    /// Times at which spin-wave snapshots are taken.
    pub snapshot_times: Vec<f64>,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            frame_interval: Some(0.1),
            snapshot_times: Vec::new(),
        }
    }
}

/// Fully resolved simulation input.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub grid: SimulationGrid,
    pub medium: MediumParams,
    pub gradient: GradientSchedule,
    pub beams: BeamSchedule,
    pub probe: Option<ProbePulse>,
    pub constants: PhysicalConstants,
    /// Decoherence events per scattered eraser photon.
    pub kappa: f64,
    /// Diffusion is applied once every this many steps, with the kernel
    /// for the accumulated time.
    pub diffusion_every: usize,
    pub output: OutputSettings,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), EngineError> {
        self.medium.validate()?;
        self.beams.validate(&self.grid)?;
        if let Some(p) = &self.probe {
            p.validate(&self.grid)?;
        }
        if self.diffusion_every == 0 {
            return Err(EngineError::Schedule("diffusion_every must be at least 1".into()));
        }
        if !(self.kappa >= 0.0) {
            return Err(EngineError::Schedule(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        let t_max = self.grid.t_max();
        let times = self
            .beams
            .pulses
            .iter()
            .flat_map(|p| [p.t_on, p.t_off])
            .chain(self.gradient.flip_times.iter().copied());
        for t in times {
            if !(0.0..=t_max * (1.0 + 1e-12)).contains(&t) {
                return Err(EngineError::Schedule(format!(
                    "schedule time {t} us lies outside [0, {t_max}] us"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub t: f64,
    /// `|E(x, y, L, t)|^2`.
    pub intensity: RealField2D,
}

/// Echo energy per pixel integrated over a read window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowFrame {
    pub label: String,
    pub t_on: f64,
    pub t_off: f64,
    pub energy: RealField2D,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSnapshot {
    pub t: f64,
    /// `integral |sigma|^2 dz` per pixel.
    pub column_energy: RealField2D,
    /// `sum over pixels |sigma|^2` per z slice.
    pub z_profile: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: f64,
    /// Probe power entering the cell, integrated over the plane.
    pub input_power: f64,
    /// Power leaving the exit face.
    pub output_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunMetrics {
    pub input_energy: f64,
    /// Output energy before the first gradient flip.
    pub transmitted_energy: f64,
    /// Output energy after the first gradient flip.
    pub retrieved_energy: f64,
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub grid: SimulationGrid,
    pub frames: Vec<Frame>,
    pub window_frames: Vec<WindowFrame>,
    /// Per-pixel echo energy after the first flip.
    pub retrieved_map: RealField2D,
    pub snapshots: Vec<SpinSnapshot>,
    pub trace: Vec<TracePoint>,
    pub metrics: RunMetrics,
    pub warnings: Vec<String>,
    pub final_sigma: ComplexField3D,
}

fn snapshot(t: f64, sigma: &ComplexField3D, grid: &SimulationGrid) -> SpinSnapshot {
    let nz = grid.nz();
    let mut z_profile = vec![0.0; nz];
    for p in 0..grid.pixel_count() {
        for (acc, v) in z_profile.iter_mut().zip(sigma.line(p)) {
            *acc += v.norm_sqr();
        }
    }
    SpinSnapshot {
        t,
        column_energy: RealField2D {
            nx: grid.nx(),
            ny: grid.ny(),
            data: sigma.line_norms_sq(),
        },
        z_profile,
    }
}

/// Coupling and decoherence per pixel, averaged over `[t0, t1]`.
pub fn pixel_coefficients(scenario: &Scenario, t0: f64, t1: f64, out: &mut PixelCoefficients) {
    let erasers = scenario.beams.erasers();
    fill_coefficients(scenario, &erasers, t0, t1, out);
}

fn fill_coefficients(
    s: &Scenario,
    erasers: &[crate::optics::eraser::EraserPulse],
    t0: f64,
    t1: f64,
    out: &mut PixelCoefficients,
) {
    s.beams.omega_sq_averaged(t0, t1, &mut out.spin);
    for (a, b) in out.spin.iter_mut().zip(out.field.iter_mut()) {
        let omega = a.sqrt();
        *a = s.medium.spin_coupling(omega);
        *b = s.medium.field_coupling(omega);
    }
    s.beams.gamma_averaged(
        erasers,
        t0,
        t1,
        s.medium.gamma0,
        s.kappa,
        s.constants.gamma,
        &mut out.gamma,
    );
}

/// Runs the whole protocol from `t = 0` to the grid's `t_max`.
pub fn run_protocol(s: &Scenario) -> Result<RunResult, EngineError> {
    s.validate()?;
    let grid = &s.grid;
    let npix = grid.pixel_count();
    let (nx, ny) = (grid.nx(), grid.ny());
    let da = grid.pixel_area();
    let dt = grid.dt();
    let steps = grid.steps();
    let erasers = s.beams.erasers();
    let amplitudes = s
        .probe
        .as_ref()
        .map(ProbePulse::pixel_amplitudes)
        .unwrap_or_else(|| vec![0.0; npix]);
    let diffuser = if s.medium.d > 0.0 {
        let d = Diffuser::new(
            crate::field::FieldShape::of(grid),
            s.medium.d,
            dt * s.diffusion_every as f64,
        )?;
        (!d.is_identity()).then_some(d)
    } else {
        None
    };
    let mut scratch = Vec::new();

    let reads: Vec<_> = s
        .beams
        .pulses
        .iter()
        .filter(|p| p.kind == BeamKind::Read)
        .collect();
    let mut window_frames: Vec<WindowFrame> = reads
        .iter()
        .map(|p| WindowFrame {
            label: p.label.clone(),
            t_on: p.t_on,
            t_off: p.t_off,
            energy: RealField2D::zeros(nx, ny),
        })
        .collect();
    let mut boundaries: Vec<f64> = reads.iter().flat_map(|p| [p.t_on, p.t_off]).collect();
    boundaries.sort_by(f64::total_cmp);

    let first_flip = s.gradient.first_flip();
    let mut state = EngineState::new(grid);
    let mut coeff = PixelCoefficients::zeros(npix);
    let mut frames = Vec::new();
    let mut snapshots = Vec::new();
    let mut trace = Vec::with_capacity(steps);
    let mut metrics = RunMetrics::default();
    let mut retrieved_map = RealField2D::zeros(nx, ny);
    let mut next_frame = s.output.frame_interval.map(|_| 0.0);
    let mut pending_snaps: Vec<f64> = s.output.snapshot_times.clone();
    pending_snaps.sort_by(f64::total_cmp);
    let mut snap_iter = pending_snaps.into_iter().peekable();
    let mut intensity = vec![0.0; npix];

    for n in 0..steps {
        let t0 = n as f64 * dt;
        let t1 = (n + 1) as f64 * dt;
        state.t_now = t0;
        fill_coefficients(s, &erasers, t0, t1, &mut coeff);
        let drive = StepDrive {
            gradient: &s.gradient,
            coefficients: &coeff,
            probe: s.probe.as_ref(),
            probe_amplitudes: &amplitudes,
        };
        step_spinwave(&mut state, grid, &drive, dt)?;
        if let Some(d) = &diffuser {
            if (n + 1) % s.diffusion_every == 0 {
                d.apply(&mut state.sigma, &mut scratch);
            }
        }

        let tm = 0.5 * (t0 + t1);
        for (i, e) in intensity.iter_mut().zip(&state.last_echo) {
            *i = e.norm_sqr();
        }
        let input_power = state.last_input.iter().map(|e| e.norm_sqr()).sum::<f64>() * da;
        let output_power = intensity.iter().sum::<f64>() * da;
        metrics.input_energy += input_power * dt;
        let after_flip = first_flip.is_some_and(|f| tm > f);
        if after_flip {
            metrics.retrieved_energy += output_power * dt;
            for (m, i) in retrieved_map.data.iter_mut().zip(&intensity) {
                *m += i * dt * da;
            }
        } else {
            metrics.transmitted_energy += output_power * dt;
        }
        for w in window_frames.iter_mut().filter(|w| tm >= w.t_on && tm < w.t_off) {
            for (m, i) in w.energy.data.iter_mut().zip(&intensity) {
                *m += i * dt * da;
            }
        }
        trace.push(TracePoint {
            t: tm,
            input_power,
            output_power,
        });

        let mut want_frame = boundaries.iter().any(|&b| b >= t0 && b < t1);
        if let (Some(next), Some(every)) = (next_frame.as_mut(), s.output.frame_interval) {
            if tm >= *next {
                want_frame = true;
                while *next <= tm {
                    *next += every;
                }
            }
        }
        if want_frame {
            frames.push(Frame {
                t: tm,
                intensity: RealField2D {
                    nx,
                    ny,
                    data: intensity.clone(),
                },
            });
        }
        while snap_iter.peek().is_some_and(|&ts| ts < t1) {
            snap_iter.next();
            snapshots.push(snapshot(t1, &state.sigma, grid));
        }
    }

    metrics.efficiency = if metrics.input_energy > 0.0 {
        metrics.retrieved_energy / metrics.input_energy
    } else {
        0.0
    };
    Ok(RunResult {
        grid: grid.clone(),
        frames,
        window_frames,
        retrieved_map,
        snapshots,
        trace,
        metrics,
        warnings: s.beams.eraser_overlap_warnings(0.01),
        final_sigma: state.sigma,
    })
}
