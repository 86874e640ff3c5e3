//! Single-pixel gradient echo: store a Gaussian pulse, flip the gradient,
//! and print the transmitted and retrieved output trace.

use gemsim::engine::{
    beta_for_optical_depth, choose_dt, run_protocol, stability_limit, BeamKind, BeamPulse,
    BeamSchedule, GradientSchedule, MediumParams, OutputSettings, ProbePulse, Scenario,
};
use gemsim::grid::{make_grid, GridConfig};
use gemsim::optics::IntensityMask;
use gemsim::units::{PhysicalConstants, UnitSystem};

fn main() -> gemsim::Result<()> {
    let constants = PhysicalConstants::rubidium85_d1();
    let cell = 200.0;
    let eta = GradientSchedule::eta_for_linewidth(UnitSystem::angular_from_mhz(1.0), cell);
    let omega = UnitSystem::angular_from_mhz(100.0);
    let depth: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3.0);
    let medium = MediumParams::from_coupling(beta_for_optical_depth(depth, eta), omega, constants.delta_w, 0.0, 0.0);

    let (t_probe, t_flip, t_max) = (2.0, 3.5, 8.0);
    let dt = choose_dt(t_max, stability_limit(&medium, omega, eta, cell), 0.02);
    let grid = make_grid(&GridConfig::single_pixel(256, dt, t_max))?;
    let full = IntensityMask::uniform(&grid, 1.0);
    let beams = BeamSchedule::new(vec![
        BeamPulse::control(BeamKind::Write, full.clone(), omega, 0.0, t_flip, "write"),
        BeamPulse::control(BeamKind::Read, full.clone(), omega, t_flip, t_max, "read"),
    ]);
    let scenario = Scenario {
        grid,
        medium,
        gradient: GradientSchedule::new(eta, vec![t_flip])?,
        beams,
        probe: Some(ProbePulse::new(full, t_probe, 2.0)),
        constants,
        kappa: 1.0,
        diffusion_every: 1,
        output: OutputSettings { frame_interval: None, snapshot_times: vec![] },
    };
    let run = run_protocol(&scenario)?;
    let m = run.metrics;
    println!("optical depth {depth}, dt = {dt:.5} us");
    println!("input {:.5}  transmitted {:.5}  retrieved {:.5}  efficiency {:.4}",
        m.input_energy, m.transmitted_energy, m.retrieved_energy, m.efficiency);
    let peak = run
        .trace
        .iter()
        .filter(|p| p.t > t_flip)
        .max_by(|a, b| a.output_power.total_cmp(&b.output_power))
        .unwrap();
    println!("echo peak at t = {:.3} us (mirror time {:.3} us)", peak.t, 2.0 * t_flip - t_probe);
    println!("t_us,input_power,output_power");
    for p in run.trace.iter().step_by(25) {
        println!("{:.3},{:.6},{:.6}", p.t, p.input_power, p.output_power);
    }
    Ok(())
}
