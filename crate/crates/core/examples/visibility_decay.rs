//! Visibility of a stored grating under diffusion: closed-form model,
//! exact diffusion of the ideal grating, and the full simulation.
//!
//! cargo run --release --example visibility_decay [background]

use gemsim::scenario::commands::{run_experiment, visibility_decay, SweepReport};
use gemsim::scenario::presets;

fn main() -> gemsim::Result<()> {
    let background: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.1);
    let times: Vec<f64> = (0..=8).map(|i| 5.0 * i as f64).collect();
    println!("1 lp/mm, D = 35 cm^2/s, background {background}");
    println!("t_us,model,exact");
    for p in visibility_decay(1.0, 35.0, &times, background)? {
        println!("{},{:.4},{:.4}", p.t, p.model, p.oracle);
    }

    println!("\nsimulated storage (no background):");
    let exp = run_experiment(&presets::preset("fig3")?, None, |m| eprintln!("{m}"))?;
    if let Some(SweepReport::VisibilityDecay { points }) = &exp.sweep {
        println!("storage_us,simulated,model,exact");
        for p in points {
            println!("{},{:.4},{:.4},{:.4}", p.storage_time_us, p.simulated, p.model, p.oracle);
        }
    }
    Ok(())
}
