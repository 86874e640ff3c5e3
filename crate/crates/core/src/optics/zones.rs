//! Read-beam zones: complementary masks that tile the plane along `x`.

use crate::error::OpticsError;
use crate::grid::SimulationGrid;
use crate::optics::mask::{smooth_step, IntensityMask};

/// 10-90 % boundary width between read zones: 900 um.
pub const DEFAULT_EDGE_WIDTH_MM: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct Zone {
    pub mask: IntensityMask,
    pub t_on: f64,
    pub t_off: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZoneMaskSet {
    pub zones: Vec<Zone>,
    pub edge_width: f64,
    pub boundaries: Vec<f64>,
}

impl ZoneMaskSet {
    /// Sum of all zone masks at pixel `p`.
    pub fn coverage(&self, p: usize) -> f64 {
        self.zones.iter().map(|z| z.mask.values()[p]).sum()
    }
}

/// Builds `boundaries.len() + 1` zones. Zone 0 lies left of the first
/// boundary, the last zone right of the final one. Edges are error-function
/// shaped and the zone masks telescope, so they sum to one everywhere.
pub fn make_zone_masks(
    grid: &SimulationGrid,
    boundaries_x: &[f64],
    edge_width: f64,
    windows: &[(f64, f64)],
) -> Result<ZoneMaskSet, OpticsError> {
    if !(edge_width > 0.0) {
        return Err(OpticsError::Invalid(format!(
            "edge width must be positive, got {edge_width}"
        )));
    }
    if boundaries_x.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OpticsError::UnsortedBoundaries);
    }
    if windows.len() != boundaries_x.len() + 1 {
        return Err(OpticsError::WindowCount {
            expected: boundaries_x.len() + 1,
            boundaries: boundaries_x.len(),
            actual: windows.len(),
        });
    }
    let (min, max) = grid.x_extent();
    if let Some(&x) = boundaries_x.iter().find(|&&x| x <= min || x >= max) {
        return Err(OpticsError::BoundaryOutsideDomain { x, min, max });
    }
    for &(on, off) in windows {
        if !(on < off) {
            return Err(OpticsError::Invalid(format!(
                "read window [{on}, {off}] is empty"
            )));
        }
    }

    let m = boundaries_x.len();
    let step = |j: usize, x: f64| smooth_step(x, boundaries_x[j], edge_width);
    let zones = windows
        .iter()
        .enumerate()
        .map(|(k, &(t_on, t_off))| {
            let mask = IntensityMask::from_fn(grid, format!("zone {k}"), |x, _| {
                let left = if k == 0 { 1.0 } else { step(k - 1, x) };
                let right = if k == m { 0.0 } else { step(k, x) };
                left - right
            });
            Zone { mask, t_on, t_off }
        })
        .collect();
    Ok(ZoneMaskSet {
        zones,
        edge_width,
        boundaries: boundaries_x.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::profile::edge_width_10_90;
    use crate::grid::{make_grid, GridConfig};

    fn grid(nx: usize, dx: f64) -> SimulationGrid {
        make_grid(&GridConfig {
            nx,
            ny: 3,
            dx,
            dy: dx,
            ..GridConfig::single_pixel(8, 0.01, 1.0)
        })
        .unwrap()
    }

    #[test]
    fn sharp_boundary_splits_the_plane() {
        let g = grid(64, 0.1);
        let z = make_zone_masks(&g, &[0.0], g.dx(), &[(0.0, 1.0), (1.0, 2.0)]).unwrap();
        let left = &z.zones[0].mask;
        for ix in 0..64 {
            let x = g.x(ix);
            let v = left.get(ix, 1);
            if x < -0.15 {
                assert!(v > 0.99, "x = {x}, v = {v}");
            } else if x > 0.15 {
                assert!(v < 0.01, "x = {x}, v = {v}");
            }
        }
    }

    #[test]
    fn masks_sum_to_one() {
        let g = grid(128, 0.09375);
        let z = make_zone_masks(
            &g,
            &[-1.6, 1.6],
            0.9,
            &[(1.0, 1.5), (1.5, 2.0), (2.0, 2.5)],
        )
        .unwrap();
        for p in 0..g.pixel_count() {
            assert!((z.coverage(p) - 1.0).abs() <= 1e-12);
        }
        assert!(z
            .zones
            .iter()
            .all(|zone| zone.mask.values().iter().all(|&v| (0.0..=1.0).contains(&v))));
    }

    #[test]
    fn edge_width_is_nine_hundred_microns() {
        let g = grid(128, 0.09375);
        let z = make_zone_masks(&g, &[0.0], 0.9, &[(0.0, 1.0), (1.0, 2.0)]).unwrap();
        let row: Vec<f64> = (0..128).map(|ix| z.zones[0].mask.get(ix, 0)).collect();
        let w = edge_width_10_90(&row, g.dx(), 0, 128, 1.0).unwrap();
        assert!((w - 0.9).abs() <= g.dx(), "{w}");
        // Piecewise-linear interpolation of a smooth edge is far tighter.
        assert!((w - 0.9).abs() < 0.01, "{w}");
    }

    #[test]
    fn invalid_layouts_rejected() {
        let g = grid(64, 0.1);
        assert_eq!(
            make_zone_masks(&g, &[1.0, 0.0], 0.9, &[(0.0, 1.0); 3]),
            Err(OpticsError::UnsortedBoundaries)
        );
        assert!(matches!(
            make_zone_masks(&g, &[5.0], 0.9, &[(0.0, 1.0); 2]),
            Err(OpticsError::BoundaryOutsideDomain { .. })
        ));
        assert!(matches!(
            make_zone_masks(&g, &[0.0], 0.9, &[(0.0, 1.0)]),
            Err(OpticsError::WindowCount { .. })
        ));
    }
}
