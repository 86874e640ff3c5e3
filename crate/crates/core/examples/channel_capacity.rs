//! Channel density allowed by diffusion for a visibility threshold, as a
//! function of channel width.
//!
//! cargo run --example channel_capacity [D_cm2_per_s] [t_us] [v_lim]

use gemsim::analysis::capacity::buffer_width;
use gemsim::scenario::commands::capacity;
use gemsim::units::UnitSystem;

fn main() -> gemsim::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let d = args.first().copied().unwrap_or(35.0);
    let t = args.get(1).copied().unwrap_or(15.0);
    let v_lim = args.get(2).copied().unwrap_or(0.9);
    let a = buffer_width(v_lim, UnitSystem::diffusion_from_cm2_per_s(d), t)?;
    println!("D = {d} cm^2/s, t = {t} us, V_lim = {v_lim}: buffer a = {a:.4} mm");
    println!("b_mm,lambda_per_mm,lambda_per_cm");
    for i in 1..=20 {
        let b = 0.01 * i as f64;
        let r = capacity(d, t, v_lim, b)?;
        println!("{b:.2},{:.4},{:.3}", r.per_mm, r.per_cm);
    }
    Ok(())
}
