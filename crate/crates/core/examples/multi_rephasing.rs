//! Repeated gradient flips with a weak read beam: each rephasing releases
//! part of the stored pulse as a separate echo.
//!
//! cargo run --release --example multi_rephasing [read_intensity]

use gemsim::engine::{multi_flip_schedule, run_protocol};
use gemsim::scenario::ScenarioConfig;

fn main() -> gemsim::Result<()> {
    let read: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.05);
    let cfg = ScenarioConfig::from_toml(&format!(
        "[grid]\nnz = 256\nt_max_us = 16.0\n\
         [gradient]\nflip_times_us = [3.5]\n\
         [write]\nend_us = 3.4\n\
         [readout]\nintensity_rel = {read}\nstart_us = 3.5\n"
    ))?;
    let mut built = cfg.build(None)?;
    let base = built.scenario.gradient.clone();
    built.scenario.gradient = multi_flip_schedule(&base, 3, 3.0)?;
    let flips = built.scenario.gradient.flip_times.clone();
    let run = run_protocol(&built.scenario)?;

    println!("flips at {flips:?} us");
    let mut edges = vec![flips[0]];
    edges.extend(flips.iter().skip(1).copied());
    edges.push(run.grid.t_max());
    for (k, w) in edges.windows(2).enumerate() {
        let seg: Vec<_> = run.trace.iter().filter(|p| p.t > w[0] && p.t <= w[1]).collect();
        let energy: f64 = seg.iter().map(|p| p.output_power).sum::<f64>() * run.grid.dt();
        let peak = seg.iter().max_by(|a, b| a.output_power.total_cmp(&b.output_power)).unwrap();
        println!("echo {}: peak at {:.3} us, energy {:.5}", k + 1, peak.t, energy);
    }
    println!("input {:.5}, total retrieved {:.5}", run.metrics.input_energy, run.metrics.retrieved_energy);
    Ok(())
}
