//! Diffuses a stored grating's coherence on the simulation lattice and
//! compares the visibility of the coherence and of the retrieved intensity
//! `|sigma|^2` with the closed-form model.
//!
//! cargo run --release --example diffusion_blur [line_pairs_per_mm]

use gemsim::analysis::visibility::{visibility, visibility_approx, ChannelGeometry, Profile};
use gemsim::field::ComplexField3D;
use gemsim::grid::{make_grid, GridConfig};
use gemsim::optics::{make_resolution_target, Diffuser};
use gemsim::units::UnitSystem;
use num_complex::Complex64;

fn main() -> gemsim::Result<()> {
    let lppm: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.0);
    let grid = make_grid(&GridConfig {
        nx: 256,
        dx: 0.05,
        ..GridConfig::single_pixel(1, 0.01, 1.0)
    })?;
    let target = make_resolution_target(&grid, lppm, 0.5, 0.0)?;
    let mut field = ComplexField3D::zeros(&grid);
    for (v, &m) in field.as_mut_slice().iter_mut().zip(target.values()) {
        *v = Complex64::new(m.sqrt(), 0.0);
    }
    let d = UnitSystem::diffusion_from_cm2_per_s(35.0);
    let step = 1.0;
    let diffuser = Diffuser::new(field.shape(), d, step)?;
    let geo = ChannelGeometry::from_line_pairs(lppm, 0.5)?;
    let mut scratch = Vec::new();
    println!("t_us,coherence,intensity,model");
    for n in 0..=40 {
        if n % 5 == 0 {
            let amp: Vec<f64> = field.as_slice().iter().map(|c| c.re).collect();
            let int: Vec<f64> = field.as_slice().iter().map(|c| c.norm_sqr()).collect();
            let va = visibility(&Profile::new(grid.x(0), grid.dx(), amp), &geo, 0.0)?.v;
            let vi = visibility(&Profile::new(grid.x(0), grid.dx(), int), &geo, 0.0)?.v;
            println!("{n},{va:.4},{vi:.4},{:.4}", visibility_approx(geo.a, d, n as f64)?);
        }
        diffuser.apply(&mut field, &mut scratch);
    }
    Ok(())
}
