//! Configuration files, presets, image I/O, reports and the commands
//! behind the `gemsim` binary.

pub mod commands;
pub mod config;
pub mod evaluate;
pub mod pgm;
pub mod presets;
pub mod report;

pub use commands::{run_experiment, Experiment, RunAnalysis, SingleRun, SweepReport};
pub use config::{BuiltScenario, ScenarioConfig};
pub use pgm::{GrayImage, Placement};
