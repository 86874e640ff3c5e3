//! Deletes a single fringe of a stored grating with a narrow eraser and
//! compares the fringe and its neighbours with an unerased run.
//!
//! cargo run --release --example localized_erasure [out_dir]

use gemsim::scenario::commands::{run_experiment, RunAnalysis};
use gemsim::scenario::presets;
use gemsim::scenario::report::write_experiment;

fn main() -> gemsim::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/localized_erasure".into());
    let exp = run_experiment(&presets::preset("fig4-single")?, None, |m| eprintln!("{m}"))?;
    write_experiment(&exp, out.as_ref())?;
    let fringes: Vec<_> = exp
        .runs
        .iter()
        .filter_map(|r| match &r.analysis {
            Some(RunAnalysis::Fringes(f)) => Some((r.sweep_value.unwrap_or(0.0), f)),
            _ => None,
        })
        .collect();
    let (_, base) = fringes[0];
    for (w, f) in &fringes {
        println!("eraser {w} us: target {:.4} ({:.1} % of unerased), neighbours {:+.2} % / {:+.2} %",
            f.target_peak,
            100.0 * f.target_peak / base.target_peak,
            100.0 * (f.left_neighbor_peak / base.left_neighbor_peak - 1.0),
            100.0 * (f.right_neighbor_peak / base.right_neighbor_peak - 1.0));
    }
    println!("profiles in {out}/run*/profile.csv");
    Ok(())
}
