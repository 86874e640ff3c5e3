//! Per-pixel integration of the coupled spin-wave / probe equations
//!
//! ```text
//! d sigma / dt = -(gamma + i eta(t) z) sigma + i a E
//! d E / dz     = i b sigma
//! ```
//!
//! with `a = g Omega / Delta_w`, `b = N Omega / Delta_w` and `z` measured
//! from the cell centre. The field equation is re-solved at every stage
//! (instantaneous propagation). Time stepping is an exponential midpoint
//! scheme: decay and dephasing are applied exactly, the source term by the
//! midpoint rule.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::engine::beams::ProbePulse;
use crate::engine::gradient::GradientSchedule;
use crate::error::EngineError;
use crate::field::ComplexField3D;
use crate::grid::SimulationGrid;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Probe envelope on cell centres plus the value at the exit face.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldLine {
    pub values: Vec<Complex64>,
    pub exit: Complex64,
}

/// Cumulative trapezoid integration of `dE/dz = i b sigma` from
/// `E(0) = probe_bc`, with `sigma` sampled at cell centres of width `dz`.
pub fn solve_field_slice(sigma: &[Complex64], field_coupling: f64, dz: f64, probe_bc: Complex64) -> FieldLine {
    let mut values = vec![ZERO; sigma.len()];
    let exit = solve_into(sigma, field_coupling, dz, probe_bc, &mut values);
    FieldLine { values, exit }
}

fn solve_into(sigma: &[Complex64], b: f64, dz: f64, bc: Complex64, out: &mut [Complex64]) -> Complex64 {
    if b == 0.0 || sigma.is_empty() {
        out.fill(bc);
        return bc;
    }
    let h = I * (0.5 * b * dz);
    let mut e = bc + h * sigma[0];
    out[0] = e;
    for k in 1..sigma.len() {
        e += h * (sigma[k - 1] + sigma[k]);
        out[k] = e;
    }
    e + h * sigma[sigma.len() - 1]
}

/// Per-pixel coefficients held constant over one step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PixelCoefficients {
    /// `a = g Omega / Delta_w`.
    pub spin: Vec<f64>,
    /// `b = N Omega / Delta_w`.
    pub field: Vec<f64>,
    /// Total decoherence rate (1/us).
    pub gamma: Vec<f64>,
}

impl PixelCoefficients {
    pub fn zeros(pixels: usize) -> Self {
        Self {
            spin: vec![0.0; pixels],
            field: vec![0.0; pixels],
            gamma: vec![0.0; pixels],
        }
    }

    pub fn uniform(pixels: usize, spin: f64, field: f64, gamma: f64) -> Self {
        Self {
            spin: vec![spin; pixels],
            field: vec![field; pixels],
            gamma: vec![gamma; pixels],
        }
    }
}

/// Echo sample: exit-face envelope per pixel at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoSample {
    pub t: f64,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineState {
    pub sigma: ComplexField3D,
    pub t_now: f64,
    /// Exit-face field at the midpoint of the last step.
    pub last_echo: Vec<Complex64>,
    /// Entrance-face probe at the midpoint of the last step.
    pub last_input: Vec<Complex64>,
    /// Full echo history, kept only when `record_echo` is set.
    pub echo_out: Vec<EchoSample>,
    pub record_echo: bool,
}

impl EngineState {
    pub fn new(grid: &SimulationGrid) -> Self {
        Self {
            sigma: ComplexField3D::zeros(grid),
            t_now: 0.0,
            last_echo: vec![ZERO; grid.pixel_count()],
            last_input: vec![ZERO; grid.pixel_count()],
            echo_out: Vec::new(),
            record_echo: false,
        }
    }

    pub fn recording(mut self) -> Self {
        self.record_echo = true;
        self
    }
}

/// Time-dependent inputs for one step.
pub struct StepDrive<'a> {
    pub gradient: &'a GradientSchedule,
    pub coefficients: &'a PixelCoefficients,
    pub probe: Option<&'a ProbePulse>,
    /// Probe field amplitude per pixel.
    pub probe_amplitudes: &'a [f64],
}

/// Advances every pixel by `dt`.
pub fn step_spinwave(
    state: &mut EngineState,
    grid: &SimulationGrid,
    drive: &StepDrive<'_>,
    dt: f64,
) -> Result<(), EngineError> {
    let nz = grid.nz();
    let dz = grid.dz();
    let t0 = state.t_now;
    let tm = t0 + 0.5 * dt;
    let h1 = drive.gradient.integral(t0, tm);
    let h2 = drive.gradient.integral(tm, t0 + dt);
    let zc: Vec<f64> = (0..nz).map(|k| grid.z_centered(k)).collect();
    let p1: Vec<Complex64> = zc.iter().map(|z| Complex64::cis(-h1 * z)).collect();
    let p2: Vec<Complex64> = zc.iter().map(|z| Complex64::cis(-h2 * z)).collect();
    let p12: Vec<Complex64> = p1.iter().zip(&p2).map(|(a, b)| a * b).collect();
    let (env0, envh) = match drive.probe {
        Some(p) => (p.envelope(t0), p.envelope(tm)),
        None => (ZERO, ZERO),
    };
    let c = drive.coefficients;
    let amps = drive.probe_amplitudes;

    let ctx = PixelStep {
        p1: &p1,
        p2: &p2,
        p12: &p12,
        dt,
        dz,
    };
    state
        .sigma
        .as_mut_slice()
        .par_chunks_mut(nz)
        .zip(state.last_echo.par_iter_mut())
        .zip(state.last_input.par_iter_mut())
        .enumerate()
        .with_min_len(8)
        .for_each_init(
            || vec![ZERO; nz],
            |scratch, (p, ((line, echo), input))| {
                let amp = amps.get(p).copied().unwrap_or(0.0);
                let bc0 = env0 * amp;
                let bch = envh * amp;
                *input = bch;
                *echo = ctx.advance(line, scratch, c.spin[p], c.field[p], c.gamma[p], bc0, bch);
            },
        );

    state.t_now = t0 + dt;
    if let Some(p) = state.last_echo.iter().position(|e| !e.is_finite()) {
        let iz = state
            .sigma
            .line(p)
            .iter()
            .position(|v| !v.is_finite());
        return Err(match iz {
            Some(iz) => EngineError::NonFinite { t: state.t_now, pixel: p, iz },
            None => EngineError::NonFiniteEcho { t: tm, pixel: p },
        });
    }
    if state.record_echo {
        state.echo_out.push(EchoSample {
            t: tm,
            values: state.last_echo.clone(),
        });
    }
    Ok(())
}

struct PixelStep<'a> {
    p1: &'a [Complex64],
    p2: &'a [Complex64],
    p12: &'a [Complex64],
    dt: f64,
    dz: f64,
}

impl PixelStep<'_> {
    /// Updates one z-line in place and returns the exit field at the
    /// midpoint, or NaN if the line became non-finite.
    #[allow(clippy::too_many_arguments)]
    fn advance(
        &self,
        sigma: &mut [Complex64],
        scratch: &mut [Complex64],
        a: f64,
        b: f64,
        gamma: f64,
        bc0: Complex64,
        bch: Complex64,
    ) -> Complex64 {
        let half = (-0.5 * gamma * self.dt).exp();
        let full = half * half;
        let mut norm = 0.0;
        if a == 0.0 || b == 0.0 {
            for (s, p) in sigma.iter_mut().zip(self.p12) {
                *s *= p * full;
                norm += s.norm_sqr();
            }
            return if norm.is_finite() { bch } else { nan() };
        }
        // Stage 1: field at t_n, then spin wave at the midpoint.
        solve_into(sigma, b, self.dz, bc0, scratch);
        let ia_half = I * (0.5 * a * self.dt);
        for ((e, s), p) in scratch.iter_mut().zip(sigma.iter()).zip(self.p1) {
            *e = (s + ia_half * *e) * (p * half);
        }
        // Stage 2: field from the midpoint spin wave, solved in place.
        let h = I * (0.5 * b * self.dz);
        let mut prev = scratch[0];
        let mut e = bch + h * prev;
        scratch[0] = e;
        for k in 1..scratch.len() {
            let cur = scratch[k];
            e += h * (prev + cur);
            scratch[k] = e;
            prev = cur;
        }
        let exit = e + h * prev;
        // Stage 3: full step.
        let ia_dt = I * (a * self.dt * half);
        for (((s, e), p12), p2) in sigma.iter_mut().zip(scratch.iter()).zip(self.p12).zip(self.p2) {
            *s = *s * (p12 * full) + ia_dt * p2 * e;
            norm += s.norm_sqr();
        }
        if norm.is_finite() && exit.is_finite() {
            exit
        } else {
            nan()
        }
    }
}

fn nan() -> Complex64 {
    Complex64::new(f64::NAN, f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::beams::ProbePulse;
    use crate::grid::{make_grid, GridConfig};
    use crate::optics::mask::IntensityMask;
    use proptest::prelude::*;

    fn grid(nz: usize) -> SimulationGrid {
        make_grid(&GridConfig::single_pixel(nz, 0.01, 1.0)).unwrap()
    }

    fn random_line(nz: usize, seed: f64) -> Vec<Complex64> {
        (0..nz)
            .map(|k| {
                let x = (k as f64 + seed) * 0.7548;
                Complex64::new(x.sin(), (1.3 * x).cos())
            })
            .collect()
    }

    #[test]
    fn free_propagation_without_source() {
        let s = vec![ZERO; 16];
        let f = solve_field_slice(&s, 3.0, 0.5, Complex64::new(1.0, 0.0));
        assert!(f.values.iter().all(|&v| v == Complex64::new(1.0, 0.0)));
        assert_eq!(f.exit, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn control_off_ignores_spin_wave() {
        let s = random_line(16, 0.0);
        let bc = Complex64::new(0.3, -0.2);
        let f = solve_field_slice(&s, 0.0, 0.5, bc);
        assert!(f.values.iter().all(|&v| v == bc));
    }

    #[test]
    fn constant_spin_wave_gives_linear_ramp() {
        let g = grid(64);
        let c = Complex64::new(0.4, 0.7);
        let b = 0.03;
        let bc = Complex64::new(1.0, 0.5);
        let f = solve_field_slice(&vec![c; 64], b, g.dz(), bc);
        for k in 0..64 {
            let want = bc + I * b * c * g.z(k);
            assert!((f.values[k] - want).norm() < 1e-14, "k = {k}");
        }
        let want = bc + I * b * c * g.cell_length();
        assert!((f.exit - want).norm() < 1e-13);
    }

    fn dark_drive<'a>(gradient: &'a GradientSchedule, coeff: &'a PixelCoefficients) -> StepDrive<'a> {
        StepDrive {
            gradient,
            coefficients: coeff,
            probe: None,
            probe_amplitudes: &[],
        }
    }

    #[test]
    fn pure_dephasing_keeps_modulus_and_rotates_phase() {
        let g = grid(32);
        let grad = GradientSchedule::new(0.05, vec![]).unwrap();
        let coeff = PixelCoefficients::zeros(1);
        let mut st = EngineState::new(&g);
        st.sigma.line_mut(0).copy_from_slice(&random_line(32, 1.0));
        let before = st.sigma.clone();
        let dt = 0.01;
        step_spinwave(&mut st, &g, &dark_drive(&grad, &coeff), dt).unwrap();
        for k in 0..32 {
            let want = before.line(0)[k] * Complex64::cis(-0.05 * g.z_centered(k) * dt);
            assert!((st.sigma.line(0)[k] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn decay_halves_modulus() {
        let g = grid(16);
        let grad = GradientSchedule::new(0.05, vec![]).unwrap();
        let dt = 0.01;
        let coeff = PixelCoefficients::uniform(1, 0.0, 0.0, std::f64::consts::LN_2 / dt);
        let mut st = EngineState::new(&g);
        st.sigma.line_mut(0).copy_from_slice(&random_line(16, 2.0));
        let before = st.sigma.line_norms_sq()[0];
        step_spinwave(&mut st, &g, &dark_drive(&grad, &coeff), dt).unwrap();
        for (a, b) in st.sigma.line(0).iter().zip(random_line(16, 2.0)) {
            assert!((a.norm() - 0.5 * b.norm()).abs() < 1e-14);
        }
        assert!((st.sigma.line_norms_sq()[0] - 0.25 * before).abs() < 1e-12);
    }

    #[test]
    fn dephase_rephase_identity() {
        let g = grid(128);
        let grad = GradientSchedule::new(0.0314, vec![1.0]).unwrap();
        let coeff = PixelCoefficients::zeros(1);
        let mut st = EngineState::new(&g);
        st.sigma.line_mut(0).copy_from_slice(&random_line(128, 3.0));
        let start = st.sigma.clone();
        // 1.0 is not a multiple of dt; the flip falls inside a step.
        let steps = 153;
        let dt = 2.0 / steps as f64;
        for n in 0..steps {
            // Exact step times put a half-step boundary on the flip.
            st.t_now = n as f64 * dt;
            step_spinwave(&mut st, &g, &dark_drive(&grad, &coeff), dt).unwrap();
        }
        let err: f64 = st
            .sigma
            .line(0)
            .iter()
            .zip(start.line(0))
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err / start.line_norms_sq()[0].sqrt() < 1e-9);
    }

    #[test]
    fn non_finite_state_is_reported() {
        let g = grid(8);
        let grad = GradientSchedule::new(0.0, vec![]).unwrap();
        let coeff = PixelCoefficients::zeros(1);
        let mut st = EngineState::new(&g);
        st.sigma.line_mut(0)[3] = Complex64::new(f64::NAN, 0.0);
        let err = step_spinwave(&mut st, &g, &dark_drive(&grad, &coeff), 0.01).unwrap_err();
        assert_eq!(err, EngineError::NonFinite { t: 0.01, pixel: 0, iz: 3 });
    }

    #[test]
    fn echo_history_is_monotone_when_recorded() {
        let g = grid(16);
        let grad = GradientSchedule::new(0.0314, vec![]).unwrap();
        let coeff = PixelCoefficients::uniform(1, 0.1, 0.1, 0.0);
        let probe = ProbePulse::new(IntensityMask::uniform(&g, 1.0), 0.5, 0.4);
        let mut st = EngineState::new(&g).recording();
        let drive = StepDrive {
            gradient: &grad,
            coefficients: &coeff,
            probe: Some(&probe),
            probe_amplitudes: &[1.0],
        };
        for _ in 0..10 {
            step_spinwave(&mut st, &g, &drive, 0.1).unwrap();
        }
        assert_eq!(st.echo_out.len(), 10);
        assert!(st.echo_out.windows(2).all(|w| w[0].t < w[1].t));
    }

    proptest! {
        #[test]
        fn dark_steps_conserve_excitation(seed in 0.0f64..100.0, eta in -0.1f64..0.1, dt in 1e-3f64..0.05) {
            let g = grid(64);
            let grad = GradientSchedule::new(eta, vec![0.02]).unwrap();
            let coeff = PixelCoefficients::zeros(1);
            let mut st = EngineState::new(&g);
            st.sigma.line_mut(0).copy_from_slice(&random_line(64, seed));
            let mut prev = st.sigma.line_norms_sq()[0];
            for _ in 0..5 {
                step_spinwave(&mut st, &g, &dark_drive(&grad, &coeff), dt).unwrap();
                let now = st.sigma.line_norms_sq()[0];
                prop_assert!(((now - prev) / prev).abs() <= 1e-9);
                prev = now;
            }
        }
    }
}
