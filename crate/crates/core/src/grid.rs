//! Discretisation of the storage cell.
//!
//! Transverse pixels are centred on the optical axis: pixel `ix` sits at
//! `x = (ix + 1/2 - nx/2) dx`. Longitudinal samples are cell-centred,
//! `z_k = (k + 1/2) dz`, so that `nz * dz` is exactly the cell length and the
//! entrance face is `z = 0`.

use crate::error::GridError;

/// Default cell length: a 20 cm vapour cell.
pub const DEFAULT_CELL_LENGTH_MM: f64 = 200.0;

const CELL_LENGTH_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub dt: f64,
    pub t_max: f64,
    pub cell_length: f64,
    /// Stability bound on `dt` supplied by the engine; `None` skips the check.
    pub dt_limit: Option<f64>,
}

impl GridConfig {
    /// Single-pixel grid with `nz` slices spanning the default cell.
    pub fn single_pixel(nz: usize, dt: f64, t_max: f64) -> Self {
        Self {
            nx: 1,
            ny: 1,
            nz,
            dx: 1.0,
            dy: 1.0,
            dz: DEFAULT_CELL_LENGTH_MM / nz as f64,
            dt,
            t_max,
            cell_length: DEFAULT_CELL_LENGTH_MM,
            dt_limit: None,
        }
    }
}

/// Validated grid. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationGrid {
    nx: usize,
    ny: usize,
    nz: usize,
    dx: f64,
    dy: f64,
    dz: f64,
    dt: f64,
    t_max: f64,
}

pub fn make_grid(config: &GridConfig) -> Result<SimulationGrid, GridError> {
    for (name, value) in [("nx", config.nx), ("ny", config.ny), ("nz", config.nz)] {
        if value == 0 {
            return Err(GridError::EmptyAxis { name, value });
        }
    }
    for (name, value) in [
        ("dx", config.dx),
        ("dy", config.dy),
        ("dz", config.dz),
        ("dt", config.dt),
        ("t_max", config.t_max),
        ("cell_length", config.cell_length),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(GridError::NonPositiveSpacing { name, value });
        }
    }
    let actual = config.nz as f64 * config.dz;
    if ((actual - config.cell_length) / config.cell_length).abs() > CELL_LENGTH_RTOL {
        return Err(GridError::CellLengthMismatch {
            expected: config.cell_length,
            actual,
        });
    }
    if let Some(limit) = config.dt_limit {
        if config.dt > limit * (1.0 + 1e-12) {
            return Err(GridError::Unstable {
                dt: config.dt,
                limit,
            });
        }
    }
    Ok(SimulationGrid {
        nx: config.nx,
        ny: config.ny,
        nz: config.nz,
        dx: config.dx,
        dy: config.dy,
        dz: config.dz,
        dt: config.dt,
        t_max: config.t_max,
    })
}

impl SimulationGrid {
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn nz(&self) -> usize {
        self.nz
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn dy(&self) -> f64 {
        self.dy
    }
    pub fn dz(&self) -> f64 {
        self.dz
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn cell_length(&self) -> f64 {
        self.nz as f64 * self.dz
    }

    pub fn pixel_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn pixel_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Number of time steps needed to reach `t_max`.
    pub fn steps(&self) -> usize {
        (self.t_max / self.dt - 1e-9).ceil().max(1.0) as usize
    }

    pub fn x(&self, ix: usize) -> f64 {
        (ix as f64 + 0.5 - self.nx as f64 / 2.0) * self.dx
    }

    pub fn y(&self, iy: usize) -> f64 {
        (iy as f64 + 0.5 - self.ny as f64 / 2.0) * self.dy
    }

    pub fn z(&self, iz: usize) -> f64 {
        (iz as f64 + 0.5) * self.dz
    }

    /// Position relative to the cell centre, where the Zeeman shift vanishes.
    pub fn z_centered(&self, iz: usize) -> f64 {
        self.z(iz) - 0.5 * self.cell_length()
    }

    pub fn x_extent(&self) -> (f64, f64) {
        let half = 0.5 * self.nx as f64 * self.dx;
        (-half, half)
    }

    pub fn y_extent(&self) -> (f64, f64) {
        let half = 0.5 * self.ny as f64 * self.dy;
        (-half, half)
    }

    pub fn pixel_index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    /// Inverse of [`pixel_index`](Self::pixel_index).
    pub fn pixel_coords(&self, p: usize) -> (usize, usize) {
        (p % self.nx, p / self.nx)
    }

    /// Index of the transverse column nearest to `x`, if inside the grid.
    pub fn column_at(&self, x: f64) -> Option<usize> {
        let f = x / self.dx + self.nx as f64 / 2.0 - 0.5;
        let i = f.round();
        (i >= 0.0 && (i as usize) < self.nx).then_some(i as usize)
    }

    pub fn with_time(&self, dt: f64, t_max: f64) -> Result<SimulationGrid, GridError> {
        make_grid(&GridConfig {
            nx: self.nx,
            ny: self.ny,
            nz: self.nz,
            dx: self.dx,
            dy: self.dy,
            dz: self.dz,
            dt,
            t_max,
            cell_length: self.cell_length(),
            dt_limit: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> GridConfig {
        GridConfig::single_pixel(256, 0.01, 1.0)
    }

    #[test]
    fn single_pixel_grid_is_valid() {
        let g = make_grid(&base()).unwrap();
        assert_eq!((g.nx(), g.ny(), g.nz()), (1, 1, 256));
        assert_eq!(g.pixel_count(), 1);
        assert!((g.cell_length() - 200.0).abs() < 1e-12);
        assert_eq!(g.x(0), 0.0);
    }

    #[test]
    fn twenty_centimetre_cell_accepted() {
        let mut c = base();
        c.dz = 0.78125;
        let g = make_grid(&c).unwrap();
        assert_eq!(g.cell_length(), 200.0);
        assert_eq!(g.z(0), 0.390625);
        assert_eq!(g.z_centered(128), 0.390625);
    }

    #[test]
    fn zero_spacing_rejected() {
        let mut c = base();
        c.dz = 0.0;
        assert!(matches!(
            make_grid(&c),
            Err(GridError::NonPositiveSpacing { name: "dz", .. })
        ));
    }

    #[test]
    fn mismatched_cell_length_rejected() {
        let mut c = base();
        c.dz = 0.78;
        assert!(matches!(
            make_grid(&c),
            Err(GridError::CellLengthMismatch { .. })
        ));
    }

    #[test]
    fn empty_axis_and_unstable_dt_rejected() {
        let mut c = base();
        c.ny = 0;
        assert!(matches!(make_grid(&c), Err(GridError::EmptyAxis { .. })));
        let mut c = base();
        c.dt_limit = Some(0.005);
        assert!(matches!(make_grid(&c), Err(GridError::Unstable { .. })));
    }

    #[test]
    fn transverse_coordinates_are_centred() {
        let c = GridConfig {
            nx: 4,
            ny: 3,
            dx: 0.5,
            dy: 1.0,
            ..base()
        };
        let g = make_grid(&c).unwrap();
        assert_eq!(g.x(0), -0.75);
        assert_eq!(g.x(3), 0.75);
        assert_eq!(g.y(1), 0.0);
        assert_eq!(g.x_extent(), (-1.0, 1.0));
        assert_eq!(g.column_at(0.7), Some(3));
        assert_eq!(g.column_at(5.0), None);
        let p = g.pixel_index(2, 1);
        assert_eq!(g.pixel_coords(p), (2, 1));
        assert_eq!(g.steps(), 100);
    }
}
