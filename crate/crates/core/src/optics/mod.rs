//! Transverse optics: beam masks, read zones, test patterns, atomic
//! diffusion and the eraser beam.

pub mod diffusion;
pub mod eraser;
pub mod mask;
pub mod target;
pub mod zones;

pub use diffusion::{diffuse, lattice_kernel, Diffuser};
pub use eraser::{
    eraser_gamma_field, eraser_gamma_field_averaged, saturation_for_rate, scattering_rate,
    EraserPulse,
};
pub use mask::{smooth_step, IntensityMask, MaskProvenance};
pub use target::{make_resolution_target, target_geometry};
pub use zones::{make_zone_masks, Zone, ZoneMaskSet};
