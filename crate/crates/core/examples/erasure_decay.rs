//! Eraser pulse-width sweep on a 1.5 lp/mm grating: fringe visibility
//! against width, single-exponential fit and the recovered decay time.
//!
//! cargo run --release --example erasure_decay [decay_time_gamma_units]

use gemsim::scenario::commands::{run_experiment, SweepReport};
use gemsim::scenario::presets;

fn main() -> gemsim::Result<()> {
    let mut cfg = presets::preset("fig4")?;
    if let Some(n) = std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        cfg.eraser[0].decay_time_gamma_units = Some(n);
    }
    let exp = run_experiment(&cfg, None, |m| eprintln!("{m}"))?;
    let Some(SweepReport::Erasure(r)) = &exp.sweep else {
        unreachable!("fig4 sweeps the eraser duration");
    };
    let e = r.fit.as_ref().expect("visibility stays positive");
    println!("width_us,visibility,fit");
    for p in &r.points {
        let fit = e.fit_amplitude * (-e.fit_rate_per_us * p.eraser_duration_us).exp();
        println!("{},{:.5},{:.5}", p.eraser_duration_us, p.visibility, fit);
    }
    println!("fitted {:.4} us = {:.2}/Gamma, input {:.4} us = {:.2}/Gamma ({:.2} % off)",
        e.fitted_time_constant_us, e.fitted_gamma_units,
        e.input_time_constant_us, e.input_gamma_units, 100.0 * e.relative_error);
    Ok(())
}
