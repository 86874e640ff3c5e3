//! Metrics computed from a finished run: zone leakage and boundary width,
//! fringe peaks around an erased fringe, and grating visibility.

use std::ops::Range;

use serde::Serialize;

use crate::analysis::profile::{edge_width_10_90, extract_profile};
use crate::analysis::visibility::{relative_fringe_visibility, visibility, ChannelGeometry, Profile};
use crate::engine::RunResult;
use crate::error::AnalysisError;
use crate::field::RealField2D;
use crate::grid::SimulationGrid;
use crate::optics::zones::ZoneMaskSet;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoneWindowReport {
    pub label: String,
    pub t_on_us: f64,
    pub t_off_us: f64,
    pub in_zone_energy: f64,
    /// Energy more than one edge width outside the zone.
    pub outside_energy: f64,
    pub leak_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeReport {
    pub zone: usize,
    pub boundary_mm: f64,
    pub width_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoneReport {
    pub windows: Vec<ZoneWindowReport>,
    pub edges: Vec<EdgeReport>,
    pub configured_edge_mm: f64,
    pub pixel_mm: f64,
    pub max_leak_ratio: f64,
    pub max_edge_error_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FringeReport {
    pub target_mm: f64,
    pub reference_mm: f64,
    /// Peak intensities normalised to the reference fringe peak.
    pub target_peak: f64,
    pub left_neighbor_peak: f64,
    pub right_neighbor_peak: f64,
    pub reference_peak_raw: f64,
    pub relative_visibility: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GratingReport {
    pub visibility: f64,
    pub peak: f64,
    pub valley: f64,
}

fn row_range(rows: Option<[usize; 2]>, ny: usize) -> Range<usize> {
    match rows {
        Some([a, b]) => a..b,
        None => 0..ny,
    }
}

/// Row-averaged profile of `frame` (not normalised).
pub fn row_profile(frame: &RealField2D, grid: &SimulationGrid, rows: Option<[usize; 2]>) -> Result<Profile, AnalysisError> {
    let range = row_range(rows, frame.ny);
    if range.is_empty() || range.end > frame.ny {
        return Err(AnalysisError::Invalid(format!(
            "profile rows {range:?} do not fit a frame of height {}",
            frame.ny
        )));
    }
    let n = range.len() as f64;
    let mut values = vec![0.0; frame.nx];
    for iy in range {
        for (v, r) in values.iter_mut().zip(frame.row(iy)) {
            *v += r / n;
        }
    }
    Ok(Profile::new(grid.x(0), grid.dx(), values))
}

/// Leakage of each read window outside its zone and the 10-90 % width of
/// every interior boundary, measured on the profile through `rows`.
pub fn zone_report(
    run: &RunResult,
    zones: &ZoneMaskSet,
    rows: Option<[usize; 2]>,
) -> Result<ZoneReport, AnalysisError> {
    let grid = &run.grid;
    let w = zones.edge_width;
    let nb = zones.boundaries.len();
    if run.window_frames.len() != zones.zones.len() {
        return Err(AnalysisError::Invalid(format!(
            "{} window frames for {} zones",
            run.window_frames.len(),
            zones.zones.len()
        )));
    }
    let limits = |k: usize| {
        let left = if k == 0 { f64::NEG_INFINITY } else { zones.boundaries[k - 1] };
        let right = if k == nb { f64::INFINITY } else { zones.boundaries[k] };
        (left, right)
    };
    let mut windows = Vec::new();
    let mut edges = Vec::new();
    for (k, wf) in run.window_frames.iter().enumerate() {
        let (left, right) = limits(k);
        let (mut inside, mut outside) = (0.0, 0.0);
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let x = grid.x(ix);
                let e = wf.energy.get(ix, iy);
                if x >= left && x <= right {
                    inside += e;
                } else if x < left - w || x > right + w {
                    outside += e;
                }
            }
        }
        windows.push(ZoneWindowReport {
            label: wf.label.clone(),
            t_on_us: wf.t_on,
            t_off_us: wf.t_off,
            in_zone_energy: inside,
            outside_energy: outside,
            leak_ratio: if inside > 0.0 { outside / inside } else { f64::INFINITY },
        });

        let profile = row_profile(&wf.energy, grid, rows)?;
        for (boundary, sign) in [(left, 1.0), (right, -1.0)] {
            if !boundary.is_finite() {
                continue;
            }
            let plateau = profile.sample(boundary + sign * 1.5 * w)?;
            let a = grid.column_at(boundary - 1.5 * w).unwrap_or(0);
            let b = grid.column_at(boundary + 1.5 * w).map_or(grid.nx(), |c| c + 1);
            let width = edge_width_10_90(&profile.values, grid.dx(), a, b, plateau)?;
            edges.push(EdgeReport {
                zone: k,
                boundary_mm: boundary,
                width_mm: width,
            });
        }
    }
    let max_leak_ratio = windows.iter().map(|r| r.leak_ratio).fold(0.0, f64::max);
    let max_edge_error_mm = edges.iter().map(|e| (e.width_mm - w).abs()).fold(0.0, f64::max);
    Ok(ZoneReport {
        windows,
        edges,
        configured_edge_mm: w,
        pixel_mm: grid.dx(),
        max_leak_ratio,
        max_edge_error_mm,
    })
}

/// Peaks of the target fringe and its two neighbours relative to a
/// reference fringe, plus the target's relative visibility.
pub fn fringe_report(
    map: &RealField2D,
    grid: &SimulationGrid,
    period: f64,
    target: f64,
    reference: f64,
    rows: Option<[usize; 2]>,
    background: f64,
) -> Result<FringeReport, AnalysisError> {
    let mut profile = row_profile(map, grid, rows)?;
    let reference_peak_raw = profile.sample(reference)?;
    if !(reference_peak_raw > 0.0) {
        return Err(AnalysisError::UndefinedVisibility);
    }
    for v in &mut profile.values {
        *v /= reference_peak_raw;
    }
    Ok(FringeReport {
        target_mm: target,
        reference_mm: reference,
        target_peak: profile.sample(target)?,
        left_neighbor_peak: profile.sample(target - period)?,
        right_neighbor_peak: profile.sample(target + period)?,
        reference_peak_raw,
        relative_visibility: relative_fringe_visibility(&profile, target, reference, period, background)?,
    })
}

/// Michelson visibility of a grating around `x = 0` on the profile
/// normalised to its maximum.
pub fn grating_report(
    map: &RealField2D,
    geometry: &ChannelGeometry,
    grid: &SimulationGrid,
    rows: Option<[usize; 2]>,
    background: f64,
) -> Result<GratingReport, AnalysisError> {
    let range = row_range(rows, map.ny);
    let values = extract_profile(map, range)?;
    let profile = Profile::new(grid.x(0), grid.dx(), values);
    let r = visibility(&profile, geometry, background)?;
    Ok(GratingReport {
        visibility: r.v,
        peak: r.i_peak,
        valley: r.i_valley,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, GridConfig};

    fn grid(nx: usize, ny: usize, dx: f64) -> SimulationGrid {
        make_grid(&GridConfig {
            nx,
            ny,
            dx,
            dy: dx,
            ..GridConfig::single_pixel(4, 0.01, 1.0)
        })
        .unwrap()
    }

    #[test]
    fn profile_averages_selected_rows() {
        let g = grid(4, 3, 0.5);
        let mut f = RealField2D::zeros(4, 3);
        f.set(1, 0, 3.0);
        f.set(1, 1, 1.0);
        let p = row_profile(&f, &g, Some([0, 2])).unwrap();
        assert_eq!(p.values, vec![0.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.x0, -0.75);
        assert!(row_profile(&f, &g, Some([2, 5])).is_err());
    }

    #[test]
    fn fringes_of_a_clean_grating() {
        let g = grid(96, 1, 1.0 / 12.0);
        let target = crate::optics::target::make_resolution_target(&g, 1.5, 0.5, 0.0).unwrap();
        let map = RealField2D {
            nx: 96,
            ny: 1,
            data: target.values().to_vec(),
        };
        let period = 2.0 / 3.0;
        let r = fringe_report(&map, &g, period, period / 2.0, period / 2.0 - 4.0 * period, None, 0.0).unwrap();
        assert!((r.target_peak - 1.0).abs() < 1e-12);
        assert!((r.left_neighbor_peak - 1.0).abs() < 1e-12);
        assert!((r.relative_visibility - 1.0).abs() < 1e-12);
        let geo = ChannelGeometry::from_line_pairs(1.5, 0.5).unwrap();
        assert!((grating_report(&map, &geo, &g, None, 0.0).unwrap().visibility - 1.0).abs() < 1e-12);
    }
}
