//! Gradient echo memory dynamics.

pub mod beams;
pub mod gradient;
pub mod medium;
pub mod protocol;
pub mod solver;

pub use beams::{choose_dt, stability_limit, BeamKind, BeamPulse, BeamSchedule, Drive, ProbePulse};
pub use gradient::{multi_flip_schedule, GradientSchedule};
pub use medium::{beta_for_optical_depth, MediumParams};
pub use protocol::{
    pixel_coefficients, run_protocol, Frame, OutputSettings, RunMetrics, RunResult, Scenario,
    SpinSnapshot, TracePoint, WindowFrame,
};
pub use solver::{
    solve_field_slice, step_spinwave, EchoSample, EngineState, FieldLine, PixelCoefficients,
    StepDrive,
};
