use crate::analysis::visibility::ChannelGeometry;
use crate::error::OpticsError;
use crate::grid::SimulationGrid;
use crate::optics::mask::{IntensityMask, MaskProvenance};

/// Vertical-stripe binary grating sampled at pixel centres.
///
/// `duty = b / (a + b)` is the bright fraction. Stripes are phased so that
/// a dark gap is centred on `x = origin`, matching [`ChannelGeometry`].
pub fn make_resolution_target(
    grid: &SimulationGrid,
    line_pairs_per_mm: f64,
    duty: f64,
    origin: f64,
) -> Result<IntensityMask, OpticsError> {
    if !(line_pairs_per_mm > 0.0 && line_pairs_per_mm.is_finite()) {
        return Err(OpticsError::Invalid(format!(
            "line pairs per mm must be positive, got {line_pairs_per_mm}"
        )));
    }
    if !(duty > 0.0 && duty <= 1.0) {
        return Err(OpticsError::Invalid(format!(
            "duty must lie in (0, 1], got {duty}"
        )));
    }
    let period = 1.0 / line_pairs_per_mm;
    let period_px = period / grid.dx();
    if period_px < 4.0 {
        return Err(OpticsError::Unresolvable { period_px });
    }
    let a = period * (1.0 - duty);
    let b = period * duty;
    let label = format!("resolution target {line_pairs_per_mm} lp/mm, duty {duty}");
    let mut values = Vec::with_capacity(grid.pixel_count());
    for _iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            let phase = (grid.x(ix) - origin - 0.5 * a).rem_euclid(period);
            values.push(if phase < b { 1.0 } else { 0.0 });
        }
    }
    IntensityMask::from_values(grid.nx(), grid.ny(), values, MaskProvenance::Generated(label))
}

/// Channel geometry of a grating built by [`make_resolution_target`].
pub fn target_geometry(
    line_pairs_per_mm: f64,
    duty: f64,
    origin: f64,
) -> Result<ChannelGeometry, crate::error::AnalysisError> {
    Ok(ChannelGeometry::from_line_pairs(line_pairs_per_mm, duty)?.with_origin(origin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, GridConfig};

    fn grid(nx: usize, dx: f64) -> SimulationGrid {
        make_grid(&GridConfig {
            nx,
            ny: 2,
            dx,
            dy: dx,
            ..GridConfig::single_pixel(8, 0.01, 1.0)
        })
        .unwrap()
    }

    fn row(m: &IntensityMask) -> Vec<f64> {
        (0..m.nx()).map(|ix| m.get(ix, 0)).collect()
    }

    #[test]
    fn one_line_pair_per_mm() {
        let g = grid(40, 0.05);
        let m = make_resolution_target(&g, 1.0, 0.5, 0.0).unwrap();
        let r = row(&m);
        // Gap centred at x = 0 (pixels 19, 20), stripes 10 px wide.
        assert_eq!(r[19], 0.0);
        assert_eq!(r[20], 0.0);
        assert_eq!(&r[25..35], &[1.0; 10]);
        assert_eq!(r[24], 0.0);
        assert_eq!(r[35], 0.0);
        let bright = r.iter().filter(|&&v| v == 1.0).count();
        assert_eq!(bright, 20);
    }

    #[test]
    fn one_and_a_half_line_pairs_per_mm() {
        let g = grid(96, 1.0 / 12.0);
        let m = make_resolution_target(&g, 1.5, 0.5, 0.0).unwrap();
        let r = row(&m);
        // 0.6667 mm period = 8 pixels.
        for ix in 0..88 {
            assert_eq!(r[ix], r[ix + 8]);
        }
        assert_eq!(r.iter().filter(|&&v| v == 1.0).count(), 48);
        let geo = target_geometry(1.5, 0.5, 0.0).unwrap();
        assert!((geo.period() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn full_duty_is_all_bright() {
        let g = grid(20, 0.1);
        let m = make_resolution_target(&g, 1.0, 1.0, 0.0).unwrap();
        assert!(m.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn unresolvable_frequency_rejected() {
        let g = grid(20, 0.1);
        assert!(matches!(
            make_resolution_target(&g, 3.0, 0.5, 0.0),
            Err(OpticsError::Unresolvable { .. })
        ));
        assert!(make_resolution_target(&g, 1.0, 0.0, 0.0).is_err());
    }
}
