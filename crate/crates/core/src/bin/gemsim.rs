use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gemsim::error::{AnalysisError, ConfigError, Error};
use gemsim::scenario::commands::{self, RunAnalysis, SweepReport};
use gemsim::scenario::report::write_experiment;
use gemsim::scenario::{presets, GrayImage, ScenarioConfig};

#[derive(Parser)]
#[command(name = "gemsim", version, about = "Gradient echo memory image simulator")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a bundled preset.
    Run(RunArgs),
    /// Maximum channel density for a visibility threshold.
    Capacity(CapacityArgs),
    /// Closed-form visibility decay against exact diffusion.
    VisibilityDecay(DecayArgs),
    /// Visibility vs eraser pulse width: two-level model, or a simulated
    /// sweep with an exponential fit.
    EraseDecay(EraseArgs),
    /// Row-averaged profile of a PGM frame.
    Profile(ProfileArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML).
    config: Option<PathBuf>,
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Output directory (default: out/<name>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the preset's TOML and exit.
    #[arg(long, requires = "preset")]
    print: bool,
    /// List presets and exit.
    #[arg(long)]
    list_presets: bool,
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct CapacityArgs {
    /// Diffusion coefficient (cm^2/s).
    #[arg(long = "D", alias = "d", default_value_t = 35.0)]
    d: f64,
    /// Total storage time (us).
    #[arg(long, default_value_t = 15.0)]
    t: f64,
    #[arg(long, default_value_t = 0.9)]
    vlim: f64,
    /// Channel width (mm).
    #[arg(long)]
    b: f64,
}

#[derive(Args)]
struct DecayArgs {
    #[arg(long, default_value_t = 1.0)]
    lppm: f64,
    /// Diffusion coefficient (cm^2/s).
    #[arg(long = "D", alias = "d", default_value_t = 35.0)]
    d: f64,
    /// Comma-separated storage times (us).
    #[arg(long = "t-list", value_delimiter = ',', default_value = "0,5,10,15,20,25,30,35,40")]
    t_list: Vec<f64>,
    /// Normalised background added to the intensity.
    #[arg(long, default_value_t = 0.1)]
    background: f64,
    /// CSV output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EraseArgs {
    /// Simulate this scenario file's eraser sweep instead of the model.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Amplitude decay time in units of 1/Gamma.
    #[arg(long, default_value_t = 18.0)]
    decay_gamma: f64,
    #[arg(long, default_value_t = 1.5)]
    delta_e_ghz: f64,
    #[arg(long, default_value_t = 5.75)]
    linewidth_mhz: f64,
    /// Comma-separated pulse widths (us).
    #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.4,0.6,0.8,1.0")]
    widths: Vec<f64>,
    /// Output directory for simulated sweeps, CSV file for the model.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    frame: PathBuf,
    /// Row range `first:end` counted from the top of the image.
    #[arg(long)]
    rows: Option<String>,
    /// Pixel pitch (mm) for the position column.
    #[arg(long, default_value_t = 1.0)]
    pixel_mm: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Capacity(a) => capacity(a),
        Command::VisibilityDecay(a) => visibility_decay(a),
        Command::EraseDecay(a) => erase_decay(a),
        Command::Profile(a) => profile(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load(config: Option<PathBuf>, preset: Option<String>) -> Result<(ScenarioConfig, Option<PathBuf>), Error> {
    match (config, preset) {
        (Some(path), _) => {
            let (c, base) = ScenarioConfig::load(&path)?;
            Ok((c, Some(base)))
        }
        (None, Some(name)) => Ok((presets::preset(&name)?, None)),
        (None, None) => Err(ConfigError::Invalid("give a scenario file or --preset <name>".into()).into()),
    }
}

fn run(a: RunArgs) -> Result<(), Error> {
    if a.list_presets {
        for n in presets::preset_names() {
            println!("{n}");
        }
        return Ok(());
    }
    if a.print {
        let name = a.preset.as_deref().unwrap_or_default();
        let src = presets::preset_source(name)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown preset '{name}'")))?;
        print!("{src}");
        return Ok(());
    }
    let quiet = a.quiet;
    let (cfg, base) = load(a.config, a.preset)?;
    let exp = commands::run_experiment(&cfg, base.as_deref(), |m| {
        if !quiet {
            eprintln!("{m}");
        }
    })?;
    let out = a
        .out
        .unwrap_or_else(|| PathBuf::from("out").join(&exp.name));
    write_experiment(&exp, &out)?;
    print_experiment(&exp);
    println!("output: {}", out.display());
    Ok(())
}

fn print_experiment(exp: &commands::Experiment) {
    for r in &exp.runs {
        let m = &r.result.metrics;
        let value = r.sweep_value.map(|v| format!(" value={v}")).unwrap_or_default();
        println!(
            "{}{value}: input {:.6} transmitted {:.6} retrieved {:.6} efficiency {:.4}",
            r.label, m.input_energy, m.transmitted_energy, m.retrieved_energy, m.efficiency
        );
        match &r.analysis {
            Some(RunAnalysis::Zones(z)) => {
                for w in &z.windows {
                    println!(
                        "  {} [{}, {}] us: in-zone {:.4e} outside {:.4e} ratio {:.4}",
                        w.label, w.t_on_us, w.t_off_us, w.in_zone_energy, w.outside_energy, w.leak_ratio
                    );
                }
                for e in &z.edges {
                    println!(
                        "  zone {} edge at {:+.3} mm: 10-90 width {:.3} mm",
                        e.zone, e.boundary_mm, e.width_mm
                    );
                }
            }
            Some(RunAnalysis::Fringes(f)) => println!(
                "  target {:.4} neighbours {:.4} / {:.4} relative visibility {:.4}",
                f.target_peak, f.left_neighbor_peak, f.right_neighbor_peak, f.relative_visibility
            ),
            Some(RunAnalysis::Visibility(v)) => println!("  visibility {:.4}", v.visibility),
            None => {}
        }
        for w in &r.result.warnings {
            println!("  warning: {w}");
        }
    }
    match &exp.sweep {
        Some(SweepReport::Erasure(e)) => {
            if let Some(f) = &e.fit {
                println!(
                    "fitted decay {:.4} us ({:.2} / Gamma), input {:.4} us ({:.2} / Gamma), error {:.2} %",
                    f.fitted_time_constant_us,
                    f.fitted_gamma_units,
                    f.input_time_constant_us,
                    f.input_gamma_units,
                    100.0 * f.relative_error
                );
            }
        }
        Some(SweepReport::VisibilityDecay { points }) => {
            println!("storage_us  simulated  model  oracle");
            for p in points {
                println!("{:>10}  {:.4}  {:.4}  {:.4}", p.storage_time_us, p.simulated, p.model, p.oracle);
            }
        }
        None => {}
    }
}

fn capacity(a: CapacityArgs) -> Result<(), Error> {
    let r = commands::capacity(a.d, a.t, a.vlim, a.b)?;
    println!("Lambda = {:.6} mm^-1 = {:.4} cm^-1", r.per_mm, r.per_cm);
    println!("buffer a = {:.6} mm, channel b = {} mm", r.buffer_mm, a.b);
    Ok(())
}

fn output(out: Option<&PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match out {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|source| Error::Io {
            path: p.clone(),
            source,
        })?),
        None => Box::new(std::io::stdout()),
    })
}

fn csv_out<T: serde::Serialize>(out: Option<&PathBuf>, rows: &[T]) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(output(out)?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: out.cloned().unwrap_or_default(),
        source,
    })
}

fn visibility_decay(a: DecayArgs) -> Result<(), Error> {
    #[derive(serde::Serialize)]
    struct Row {
        t_us: f64,
        v_model: f64,
        v_bruteforce: f64,
    }
    let pts = commands::visibility_decay(a.lppm, a.d, &a.t_list, a.background)?;
    let rows: Vec<Row> = pts
        .iter()
        .map(|p| Row {
            t_us: p.t,
            v_model: p.model,
            v_bruteforce: p.oracle,
        })
        .collect();
    csv_out(a.out.as_ref(), &rows)
}

fn erase_decay(a: EraseArgs) -> Result<(), Error> {
    if a.config.is_some() || a.preset.is_some() {
        let (cfg, base) = load(a.config, a.preset)?;
        let exp = commands::run_experiment(&cfg, base.as_deref(), |m| eprintln!("{m}"))?;
        let out = a.out.unwrap_or_else(|| PathBuf::from("out").join(&exp.name));
        write_experiment(&exp, &out)?;
        print_experiment(&exp);
        println!("output: {}", out.display());
        return Ok(());
    }
    let c = gemsim::units::PhysicalConstants {
        gamma: gemsim::units::UnitSystem::angular_from_mhz(a.linewidth_mhz),
        delta_e: gemsim::units::UnitSystem::angular_from_ghz(a.delta_e_ghz),
        ..Default::default()
    };
    let tau = c.us_from_gamma_units(a.decay_gamma);
    let s = gemsim::optics::eraser::saturation_for_rate(1.0 / tau, c.delta_e, c.gamma)?;
    eprintln!("saturation {s:.4} for a {tau:.4} us decay");
    let pts = commands::erase_decay_model(s, a.delta_e_ghz, a.linewidth_mhz, 1.0, 1.0, &a.widths);
    csv_out(a.out.as_ref(), &pts)
}

fn parse_rows(s: &str, height: usize) -> Result<std::ops::Range<usize>, Error> {
    let bad = || ConfigError::Invalid(format!("--rows expects first:end, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = if b.trim().is_empty() {
        height
    } else {
        b.trim().parse().map_err(|_| bad())?
    };
    Ok(a..b)
}

fn profile(a: ProfileArgs) -> Result<(), Error> {
    #[derive(serde::Serialize)]
    struct Row {
        column: usize,
        x_mm: f64,
        value: f64,
    }
    let img = GrayImage::read(&a.frame)?;
    let rows = match &a.rows {
        Some(s) => parse_rows(s, img.height)?,
        None => 0..img.height,
    };
    if rows.end > img.height {
        return Err(AnalysisError::Invalid(format!("rows {rows:?} exceed image height {}", img.height)).into());
    }
    let values = commands::image_profile(&img, rows)?;
    let x0 = -0.5 * (img.width as f64 - 1.0) * a.pixel_mm;
    let out: Vec<Row> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| Row {
            column: i,
            x_mm: x0 + i as f64 * a.pixel_mm,
            value: v,
        })
        .collect();
    csv_out(a.out.as_ref(), &out)
}
