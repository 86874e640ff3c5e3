//! Complex and real field containers.
//!
//! 3D fields are stored pixel-major with `z` fastest: element `(ix, iy, iz)`
//! lives at `((iy * nx) + ix) * nz + iz`, so each pixel's z-line is a
//! contiguous slice. 2D fields use the same pixel ordering.

use num_complex::Complex64;

use crate::error::GridError;
use crate::grid::SimulationGrid;

/// Shape and spacing copied from the grid a field belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldShape {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl FieldShape {
    pub fn of(grid: &SimulationGrid) -> Self {
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            nz: grid.nz(),
            dx: grid.dx(),
            dy: grid.dy(),
            dz: grid.dz(),
        }
    }

    pub fn pixels(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy * self.dz
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField3D {
    shape: FieldShape,
    data: Vec<Complex64>,
}

impl ComplexField3D {
    pub fn zeros(grid: &SimulationGrid) -> Self {
        let shape = FieldShape::of(grid);
        Self {
            shape,
            data: vec![Complex64::new(0.0, 0.0); shape.cells()],
        }
    }

    pub fn from_vec(shape: FieldShape, data: Vec<Complex64>) -> Result<Self, GridError> {
        if data.len() != shape.cells() {
            return Err(GridError::ShapeMismatch {
                expected: shape.cells(),
                actual: data.len(),
            });
        }
        Ok(Self { shape, data })
    }

    pub fn shape(&self) -> FieldShape {
        self.shape
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Contiguous z-line of pixel `p`.
    pub fn line(&self, p: usize) -> &[Complex64] {
        let nz = self.shape.nz;
        &self.data[p * nz..(p + 1) * nz]
    }

    pub fn line_mut(&mut self, p: usize) -> &mut [Complex64] {
        let nz = self.shape.nz;
        &mut self.data[p * nz..(p + 1) * nz]
    }

    pub fn get(&self, ix: usize, iy: usize, iz: usize) -> Complex64 {
        self.data[(iy * self.shape.nx + ix) * self.shape.nz + iz]
    }

    pub fn set(&mut self, ix: usize, iy: usize, iz: usize, v: Complex64) {
        let i = (iy * self.shape.nx + ix) * self.shape.nz + iz;
        self.data[i] = v;
    }

    /// `sum |f|^2 dz` for every pixel.
    pub fn line_norms_sq(&self) -> Vec<f64> {
        let dz = self.shape.dz;
        (0..self.shape.pixels())
            .map(|p| self.line(p).iter().map(|c| c.norm_sqr()).sum::<f64>() * dz)
            .collect()
    }

    /// Location of the first non-finite element, if any.
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        let nz = self.shape.nz;
        self.data
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
            .map(|i| (i / nz, i % nz))
    }

    pub fn scale(&mut self, factor: Complex64) {
        for c in &mut self.data {
            *c *= factor;
        }
    }
}

/// Integral approximation `sum |f|^2 dx dy dz`.
pub fn field_norm_sq(f: &ComplexField3D) -> f64 {
    f.data.iter().map(|c| c.norm_sqr()).sum::<f64>() * f.shape.cell_volume()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField2D {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<Complex64>,
}

impl ComplexField2D {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            data: vec![Complex64::new(0.0, 0.0); nx * ny],
        }
    }

    pub fn intensity(&self) -> RealField2D {
        RealField2D {
            nx: self.nx,
            ny: self.ny,
            data: self.data.iter().map(|c| c.norm_sqr()).collect(),
        }
    }
}

/// Real-valued map over the transverse plane, row-major with rows along `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField2D {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<f64>,
}

impl RealField2D {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            data: vec![0.0; nx * ny],
        }
    }

    pub fn filled(nx: usize, ny: usize, value: f64) -> Self {
        Self {
            nx,
            ny,
            data: vec![value; nx * ny],
        }
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.data[iy * self.nx + ix]
    }

    pub fn set(&mut self, ix: usize, iy: usize, v: f64) {
        self.data[iy * self.nx + ix] = v;
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn row(&self, iy: usize) -> &[f64] {
        &self.data[iy * self.nx..(iy + 1) * self.nx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, GridConfig};
    use proptest::prelude::*;

    fn unit_grid(nx: usize, ny: usize, nz: usize) -> SimulationGrid {
        make_grid(&GridConfig {
            nx,
            ny,
            nz,
            dx: 1.0,
            dy: 1.0,
            dz: 1.0,
            dt: 0.1,
            t_max: 1.0,
            cell_length: nz as f64,
            dt_limit: None,
        })
        .unwrap()
    }

    #[test]
    fn zero_field_has_zero_norm() {
        let f = ComplexField3D::zeros(&unit_grid(3, 2, 5));
        assert_eq!(field_norm_sq(&f), 0.0);
    }

    #[test]
    fn single_unit_cell() {
        let mut f = ComplexField3D::zeros(&unit_grid(1, 1, 1));
        f.set(0, 0, 0, Complex64::new(1.0, 0.0));
        assert_eq!(field_norm_sq(&f), 1.0);
    }

    #[test]
    fn unit_amplitude_scales_with_cell_count() {
        let g = make_grid(&GridConfig {
            nx: 4,
            ny: 3,
            nz: 8,
            dx: 0.5,
            dy: 0.25,
            dz: 25.0,
            dt: 0.1,
            t_max: 1.0,
            cell_length: 200.0,
            dt_limit: None,
        })
        .unwrap();
        let mut f = ComplexField3D::zeros(&g);
        for c in f.as_mut_slice() {
            *c = Complex64::from_polar(1.0, 0.3);
        }
        let n = (4 * 3 * 8) as f64;
        assert!((field_norm_sq(&f) - n * 0.5 * 0.25 * 25.0).abs() < 1e-12);
    }

    #[test]
    fn layout_is_z_fastest() {
        let mut f = ComplexField3D::zeros(&unit_grid(2, 2, 3));
        f.set(1, 0, 2, Complex64::new(5.0, 0.0));
        assert_eq!(f.line(1)[2].re, 5.0);
        f.line_mut(3)[0] = Complex64::new(0.0, 1.0);
        assert_eq!(f.get(1, 1, 0).im, 1.0);
        assert!(f.first_non_finite().is_none());
        f.line_mut(2)[1] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(f.first_non_finite(), Some((2, 1)));
    }

    proptest! {
        #[test]
        fn norm_is_phase_invariant(vals in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 12), phase in -7.0f64..7.0) {
            let g = unit_grid(2, 2, 3);
            let data: Vec<Complex64> = vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let mut f = ComplexField3D::from_vec(FieldShape::of(&g), data).unwrap();
            let before = field_norm_sq(&f);
            f.scale(Complex64::from_polar(1.0, phase));
            let after = field_norm_sq(&f);
            prop_assert!((after - before).abs() <= 1e-12 * before.max(1e-300));
        }
    }
}
