use crate::analysis::special::{erf, erf_inv};
use crate::error::OpticsError;
use crate::grid::SimulationGrid;

#[derive(Debug, Clone, PartialEq)]
pub enum MaskProvenance {
    LoadedImage(String),
    Generated(String),
}

/// Transverse intensity profile with values in `[0, 1]`, row-major over
/// the grid's pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityMask {
    nx: usize,
    ny: usize,
    values: Vec<f64>,
    provenance: MaskProvenance,
}

impl IntensityMask {
    /// Builds a mask, clamping every value into `[0, 1]` (NaN becomes 0).
    pub fn from_values(
        nx: usize,
        ny: usize,
        values: Vec<f64>,
        provenance: MaskProvenance,
    ) -> Result<Self, OpticsError> {
        if values.len() != nx * ny {
            return Err(OpticsError::Invalid(format!(
                "mask has {} values for a {nx}x{ny} grid",
                values.len()
            )));
        }
        let values = values
            .into_iter()
            .map(|v| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) })
            .collect();
        Ok(Self {
            nx,
            ny,
            values,
            provenance,
        })
    }

    pub fn uniform(grid: &SimulationGrid, value: f64) -> Self {
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            values: vec![value.clamp(0.0, 1.0); grid.pixel_count()],
            provenance: MaskProvenance::Generated(format!("uniform {value}")),
        }
    }

    pub fn from_fn(
        grid: &SimulationGrid,
        label: impl Into<String>,
        f: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut values = Vec::with_capacity(grid.pixel_count());
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                values.push(f(grid.x(ix), grid.y(iy)).clamp(0.0, 1.0));
            }
        }
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            values,
            provenance: MaskProvenance::Generated(label.into()),
        }
    }

    /// Soft-edged rectangle; `edge_width` is the 10-90 % transition length
    /// of each edge (0 gives a hard edge).
    pub fn rectangle(
        grid: &SimulationGrid,
        x_range: (f64, f64),
        y_range: (f64, f64),
        edge_width: f64,
    ) -> Self {
        let label = format!("rectangle x{x_range:?} y{y_range:?}");
        Self::from_fn(grid, label, |x, y| {
            let fx = smooth_step(x, x_range.0, edge_width) - smooth_step(x, x_range.1, edge_width);
            let fy = if grid.ny() == 1 {
                1.0
            } else {
                smooth_step(y, y_range.0, edge_width) - smooth_step(y, y_range.1, edge_width)
            };
            fx * fy
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn provenance(&self) -> &MaskProvenance {
        &self.provenance
    }

    pub fn matches(&self, grid: &SimulationGrid) -> bool {
        self.nx == grid.nx() && self.ny == grid.ny()
    }

    /// Pointwise product, e.g. a pattern restricted to an aperture.
    pub fn multiply(&self, other: &IntensityMask) -> Result<IntensityMask, OpticsError> {
        if self.nx != other.nx || self.ny != other.ny {
            return Err(OpticsError::Invalid("mask shapes differ".into()));
        }
        Ok(IntensityMask {
            nx: self.nx,
            ny: self.ny,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
            provenance: self.provenance.clone(),
        })
    }

    pub fn complement(&self) -> IntensityMask {
        IntensityMask {
            nx: self.nx,
            ny: self.ny,
            values: self.values.iter().map(|v| 1.0 - v).collect(),
            provenance: MaskProvenance::Generated("complement".into()),
        }
    }
}

/// Ratio between the 10-90 % width of a Gaussian-blurred edge and its sigma,
/// `2 sqrt(2) erf_inv(0.8)`.
pub fn ten_ninety_per_sigma() -> f64 {
    2.0 * std::f64::consts::SQRT_2 * erf_inv(0.8).expect("0.8 is inside (-1, 1)")
}

/// Rising error-function edge at `center` with the given 10-90 % width.
pub fn smooth_step(x: f64, center: f64, edge_width: f64) -> f64 {
    if edge_width <= 0.0 {
        return if x >= center { 1.0 } else { 0.0 };
    }
    let sigma = edge_width / ten_ninety_per_sigma();
    0.5 * (1.0 + erf((x - center) / (sigma * std::f64::consts::SQRT_2)))
}
