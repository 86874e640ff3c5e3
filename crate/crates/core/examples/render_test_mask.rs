//! Writes the bundled logo and a resolution target as PGM files, and the
//! logo resampled onto the default 128 x 48 grid.
//!
//! cargo run --example render_test_mask [out_dir]

use std::path::PathBuf;

use gemsim::field::RealField2D;
use gemsim::grid::{make_grid, GridConfig};
use gemsim::optics::make_resolution_target;
use gemsim::scenario::pgm::{frame_to_image, image_to_mask, Placement};
use gemsim::scenario::presets;

fn main() -> gemsim::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/masks".into()));
    std::fs::create_dir_all(&out).map_err(|source| gemsim::Error::Io { path: out.clone(), source })?;
    let logo = presets::logo();
    logo.write(&out.join("logo.pgm"))?;

    let grid = make_grid(&GridConfig {
        nx: 128,
        ny: 48,
        dx: 12.0 / 128.0,
        dy: 4.0 / 48.0,
        ..GridConfig::single_pixel(1, 0.01, 1.0)
    })?;
    let mask = image_to_mask(&logo, &grid, Placement::imaged(8.0, 2.0, 1.25), "logo");
    let as_frame = |values: &[f64]| RealField2D { nx: grid.nx(), ny: grid.ny(), data: values.to_vec() };
    frame_to_image(&as_frame(mask.values()), 1.0).write(&out.join("logo_on_grid.pgm"))?;
    let target = make_resolution_target(&grid, 1.0, 0.5, 0.0)?;
    frame_to_image(&as_frame(target.values()), 1.0).write(&out.join("target_1lppm.pgm"))?;

    for row in 0..logo.height {
        let line: String = (0..logo.width).step_by(2).map(|c| if logo.get(c, row) > 127 { '#' } else { '.' }).collect();
        println!("{line}");
    }
    println!("wrote {}", out.display());
    Ok(())
}
