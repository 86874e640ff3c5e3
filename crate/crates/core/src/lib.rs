//! Simulation of gradient echo memory in a warm vapour: storage and
//! spatially multiplexed readout of transverse images, atomic diffusion,
//! and localized erasure with an off-resonant beam.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod field;
pub mod grid;
pub mod optics;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
