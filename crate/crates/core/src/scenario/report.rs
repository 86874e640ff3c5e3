//! Writing experiment results: CSV tables, PGM frames and a TOML summary.
//!
//! Layout of an output directory:
//!
//! ```text
//! summary.toml          configuration echo, metrics, analysis, sweep results
//! sweep.csv             one row per run (sweeps only)
//! erasure.csv           eraser duration vs visibility (eraser sweeps)
//! visibility.csv        storage time vs simulated / model / oracle (storage sweeps)
//! <run>/metrics.csv
//! <run>/echo_trace.csv
//! <run>/frames.csv      index of periodic frames
//! <run>/frames/frame_NNNN.pgm   common scale across the run
//! <run>/windows.csv
//! <run>/window_<label>.pgm      own maximum
//! <run>/window_<label>_raw.pgm  common scale across windows
//! <run>/retrieved.pgm
//! <run>/profile.csv     analysis profile, when rows are configured
//! <run>/snapshot_NN.pgm and snapshots.csv
//! ```
//!
//! Nothing time- or machine-dependent is written, so identical inputs give
//! identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::engine::RunResult;
use crate::error::Error;
use crate::field::RealField2D;
use crate::scenario::commands::{Experiment, RunAnalysis, SingleRun, SweepReport};
use crate::scenario::evaluate::row_profile;
use crate::scenario::pgm::frame_to_image;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn create_dir(path: &Path) -> Result<(), Error> {
    fs::create_dir_all(path).map_err(io_err(path))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, Error> {
    let f = fs::File::create(path).map_err(io_err(path))?;
    Ok(csv::Writer::from_writer(f))
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), Error> {
    let mut w = csv_writer(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

fn write_pgm(frame: &RealField2D, scale: f64, path: &Path) -> Result<(), Error> {
    frame_to_image(frame, scale).write(path)?;
    Ok(())
}

#[derive(Serialize)]
struct MetricsRow {
    run: String,
    sweep_value: Option<f64>,
    input_energy: f64,
    transmitted_energy: f64,
    retrieved_energy: f64,
    efficiency: f64,
    analysis_value: Option<f64>,
}

#[derive(Serialize)]
struct TraceRow {
    t_us: f64,
    input_power: f64,
    output_power: f64,
}

#[derive(Serialize)]
struct FrameRow {
    index: usize,
    file: String,
    t_us: f64,
    peak_intensity: f64,
    total_intensity: f64,
}

#[derive(Serialize)]
struct WindowRow {
    label: String,
    t_on_us: f64,
    t_off_us: f64,
    energy: f64,
    peak: f64,
    file: String,
}

#[derive(Serialize)]
struct ProfileRow {
    x_mm: f64,
    value: f64,
}

#[derive(Serialize)]
struct SnapshotRow {
    index: usize,
    t_us: f64,
    total: f64,
    file: String,
}

/// Headline scalar of an analysis, used in `sweep.csv`.
pub fn analysis_value(a: &RunAnalysis) -> f64 {
    match a {
        RunAnalysis::Zones(z) => z.max_leak_ratio,
        RunAnalysis::Fringes(f) => f.relative_visibility,
        RunAnalysis::Visibility(v) => v.visibility,
    }
}

fn metrics_row(run: &SingleRun) -> MetricsRow {
    let m = &run.result.metrics;
    MetricsRow {
        run: run.label.clone(),
        sweep_value: run.sweep_value,
        input_energy: m.input_energy,
        transmitted_energy: m.transmitted_energy,
        retrieved_energy: m.retrieved_energy,
        efficiency: m.efficiency,
        analysis_value: run.analysis.as_ref().map(analysis_value),
    }
}

fn safe_label(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Writes one run into `dir`.
pub fn write_run(run: &SingleRun, rows: Option<[usize; 2]>, dir: &Path, frames: bool) -> Result<(), Error> {
    create_dir(dir)?;
    let r: &RunResult = &run.result;
    write_rows(&dir.join("metrics.csv"), &[metrics_row(run)])?;
    let trace: Vec<TraceRow> = r
        .trace
        .iter()
        .map(|p| TraceRow {
            t_us: p.t,
            input_power: p.input_power,
            output_power: p.output_power,
        })
        .collect();
    write_rows(&dir.join("echo_trace.csv"), &trace)?;

    if frames && !r.frames.is_empty() {
        let fdir = dir.join("frames");
        create_dir(&fdir)?;
        let scale = r.frames.iter().map(|f| f.intensity.max()).fold(0.0, f64::max);
        let mut index = Vec::new();
        for (i, f) in r.frames.iter().enumerate() {
            let name = format!("frame_{i:04}.pgm");
            write_pgm(&f.intensity, scale, &fdir.join(&name))?;
            index.push(FrameRow {
                index: i,
                file: format!("frames/{name}"),
                t_us: f.t,
                peak_intensity: f.intensity.max(),
                total_intensity: f.intensity.sum(),
            });
        }
        write_rows(&dir.join("frames.csv"), &index)?;
    }

    if !r.window_frames.is_empty() {
        let common = r.window_frames.iter().map(|w| w.energy.max()).fold(0.0, f64::max);
        let mut rows_out = Vec::new();
        for w in &r.window_frames {
            let name = format!("window_{}.pgm", safe_label(&w.label));
            write_pgm(&w.energy, w.energy.max(), &dir.join(&name))?;
            write_pgm(&w.energy, common, &dir.join(format!("window_{}_raw.pgm", safe_label(&w.label))))?;
            rows_out.push(WindowRow {
                label: w.label.clone(),
                t_on_us: w.t_on,
                t_off_us: w.t_off,
                energy: w.energy.sum(),
                peak: w.energy.max(),
                file: name,
            });
        }
        write_rows(&dir.join("windows.csv"), &rows_out)?;
    }

    write_pgm(&r.retrieved_map, r.retrieved_map.max(), &dir.join("retrieved.pgm"))?;
    if rows.is_some() || r.grid.ny() == 1 {
        let p = row_profile(&r.retrieved_map, &r.grid, rows)?;
        let out: Vec<ProfileRow> = p
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| ProfileRow { x_mm: p.x(i), value: v })
            .collect();
        write_rows(&dir.join("profile.csv"), &out)?;
    }

    if !r.snapshots.is_empty() {
        let mut out = Vec::new();
        for (i, s) in r.snapshots.iter().enumerate() {
            let name = format!("snapshot_{i:02}.pgm");
            write_pgm(&s.column_energy, s.column_energy.max(), &dir.join(&name))?;
            out.push(SnapshotRow {
                index: i,
                t_us: s.t,
                total: s.column_energy.sum(),
                file: name,
            });
        }
        write_rows(&dir.join("snapshots.csv"), &out)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RunSummary<'a> {
    label: &'a str,
    sweep_value: Option<f64>,
    nx: usize,
    ny: usize,
    nz: usize,
    dx_mm: f64,
    dy_mm: f64,
    dz_mm: f64,
    dt_us: f64,
    t_max_us: f64,
    steps: usize,
    input_energy: f64,
    transmitted_energy: f64,
    retrieved_energy: f64,
    efficiency: f64,
    warnings: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    analysis: Option<&'a RunAnalysis>,
}

#[derive(Serialize)]
struct Summary<'a> {
    name: &'a str,
    runs: Vec<RunSummary<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<&'a SweepReport>,
    config: &'a crate::scenario::config::ScenarioConfig,
}

pub fn summary_toml(exp: &Experiment) -> String {
    let runs = exp
        .runs
        .iter()
        .map(|r| {
            let g = &r.result.grid;
            let m = &r.result.metrics;
            RunSummary {
                label: &r.label,
                sweep_value: r.sweep_value,
                nx: g.nx(),
                ny: g.ny(),
                nz: g.nz(),
                dx_mm: g.dx(),
                dy_mm: g.dy(),
                dz_mm: g.dz(),
                dt_us: g.dt(),
                t_max_us: g.t_max(),
                steps: g.steps(),
                input_energy: m.input_energy,
                transmitted_energy: m.transmitted_energy,
                retrieved_energy: m.retrieved_energy,
                efficiency: m.efficiency,
                warnings: &r.result.warnings,
                analysis: r.analysis.as_ref(),
            }
        })
        .collect();
    let s = Summary {
        name: &exp.name,
        runs,
        sweep: exp.sweep.as_ref(),
        config: &exp.config,
    };
    toml::to_string(&s).expect("summary serialises")
}

/// Writes the whole experiment into `out` and returns the run directories.
pub fn write_experiment(exp: &Experiment, out: &Path) -> Result<Vec<PathBuf>, Error> {
    create_dir(out)?;
    let rows = exp.config.analysis.as_ref().and_then(|a| a.rows);
    let frames = exp.config.output.write_frames;
    let single = exp.runs.len() == 1 && exp.config.sweep.is_none();
    let mut dirs = Vec::new();
    for run in &exp.runs {
        let dir = if single { out.to_owned() } else { out.join(&run.label) };
        write_run(run, rows, &dir, frames)?;
        dirs.push(dir);
    }
    if !single {
        let rows: Vec<MetricsRow> = exp.runs.iter().map(metrics_row).collect();
        write_rows(&out.join("sweep.csv"), &rows)?;
    }
    match &exp.sweep {
        Some(SweepReport::Erasure(e)) => write_rows(&out.join("erasure.csv"), &e.points)?,
        Some(SweepReport::VisibilityDecay { points }) => write_rows(&out.join("visibility.csv"), points)?,
        None => {}
    }
    let path = out.join("summary.toml");
    fs::write(&path, summary_toml(exp)).map_err(io_err(&path))?;
    Ok(dirs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::commands::run_experiment;
    use crate::scenario::config::ScenarioConfig;

    #[test]
    fn writes_trace_and_summary_for_single_pixel() {
        let cfg = ScenarioConfig::from_toml(
            "name = \"tiny\"\n[grid]\nnz = 32\n[gradient]\nstorage_time_us = 3.0\n[output]\nsnapshot_times_us = [3.0]\n",
        )
        .unwrap();
        let exp = run_experiment(&cfg, None, |_| {}).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_experiment(&exp, dir.path()).unwrap();
        let trace = fs::read_to_string(dir.path().join("echo_trace.csv")).unwrap();
        assert!(trace.starts_with("t_us,input_power,output_power\n"));
        assert_eq!(trace.lines().count(), exp.runs[0].result.trace.len() + 1);
        let summary: toml::Value = toml::from_str(&fs::read_to_string(dir.path().join("summary.toml")).unwrap()).unwrap();
        assert_eq!(summary["name"].as_str(), Some("tiny"));
        assert!(dir.path().join("snapshot_00.pgm").exists());
        assert!(dir.path().join("frames/frame_0000.pgm").exists());
    }
}
