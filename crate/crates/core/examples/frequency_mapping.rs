//! Spectral-to-spatial mapping: probes at different detunings are stored
//! at different positions along the cell, z = delta / eta. In a dense
//! medium the light is partly absorbed before reaching its resonant slice,
//! which pulls every peak toward the entrance face by the same amount.
//!
//! cargo run --release --example frequency_mapping

use gemsim::engine::run_protocol;
use gemsim::scenario::ScenarioConfig;

fn main() -> gemsim::Result<()> {
    println!("optical_depth,detuning_khz,expected_z_mm,peak_z_mm");
    for od in [0.1, 3.0] {
        for k in -2..=2 {
            let det_khz = 150.0 * k as f64;
            let cfg = ScenarioConfig::from_toml(&format!(
                "[grid]\nnz = 400\nt_max_us = 9.0\n[medium]\noptical_depth = {od}\n\
             [probe]\nwidth_us = 6.0\ncenter_us = 4.5\ndetuning_mhz = {}\n\
             [readout]\nmode = \"none\"\n[write]\nend_us = 9.0\n\
             [output]\nframe_interval_us = 0.0\nsnapshot_times_us = [8.9]\n",
                det_khz * 1e-3
            ))?;
            let s = cfg.build(None)?.scenario;
            let run = run_protocol(&s)?;
            let profile = &run.snapshots[0].z_profile;
            let (iz, _) = profile
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap();
            let delta = 2.0 * std::f64::consts::PI * det_khz * 1e-3;
            println!(
                "{od},{det_khz},{:.3},{:.3}",
                delta / s.gradient.eta0,
                s.grid.z_centered(iz)
            );
        }
    }
    Ok(())
}
