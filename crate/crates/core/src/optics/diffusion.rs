//! Transverse atomic diffusion of the spin wave.
//!
//! Each call convolves every z-slice with the discrete heat kernel
//! `K_n = exp(-tau) I_n(tau)`, `tau = 2 D dt / dx^2`, separably along `x`
//! and `y`. This kernel has variance exactly `2 D dt` in both axes and
//! composes exactly: two steps of `dt` equal one step of `2 dt`.
//! Outside the grid the field is taken as zero.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::OpticsError;
use crate::field::{ComplexField3D, FieldShape};

/// Kernel taps smaller than this fraction of the centre tap are dropped.
const TAIL_CUTOFF: f64 = 1e-17;

/// Symmetric one-sided lattice heat kernel `[K_0, K_1, ..., K_R]`,
/// normalised so that `K_0 + 2 sum K_n = 1`.
pub fn lattice_kernel(tau: f64) -> Vec<f64> {
    if tau <= 0.0 {
        return vec![1.0];
    }
    let reach = (tau + 12.0 * tau.sqrt() + 20.0).ceil() as usize;
    let start = 2 * reach + 50;
    // Miller backward recurrence I_{n-1} = I_{n+1} + (2n / tau) I_n.
    let mut vals = vec![0.0f64; start + 2];
    vals[start] = 1e-300;
    for n in (1..=start).rev() {
        vals[n - 1] = vals[n + 1] + (2.0 * n as f64 / tau) * vals[n];
        if vals[n - 1] > 1e250 {
            for v in vals[n - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals[1..].iter().sum::<f64>();
    let mut k: Vec<f64> = vals.iter().map(|v| v / norm).collect();
    let k0 = k[0];
    let last = k.iter().rposition(|&v| v >= TAIL_CUTOFF * k0).unwrap_or(0);
    k.truncate(last + 1);
    let total = k[0] + 2.0 * k[1..].iter().sum::<f64>();
    k.iter_mut().for_each(|v| *v /= total);
    k
}

/// Reusable separable diffusion step for a fixed grid, `D` and `dt`.
#[derive(Debug, Clone)]
pub struct Diffuser {
    shape: FieldShape,
    kx: Vec<f64>,
    ky: Vec<f64>,
}

impl Diffuser {
    /// `d` in mm^2/us, `dt` in us. Fails if the 5 sigma reach of the kernel
    /// exceeds half the domain along a resolved axis.
    pub fn new(shape: FieldShape, d: f64, dt: f64) -> Result<Self, OpticsError> {
        if !(d >= 0.0 && d.is_finite() && dt >= 0.0 && dt.is_finite()) {
            return Err(OpticsError::Invalid(format!(
                "diffusion needs D >= 0 and dt >= 0 (D = {d}, dt = {dt})"
            )));
        }
        let sigma = (2.0 * d * dt).sqrt();
        let axis = |n: usize, h: f64| -> Result<Vec<f64>, OpticsError> {
            if n == 1 {
                return Ok(vec![1.0]);
            }
            let half_domain = 0.5 * n as f64 * h;
            if 5.0 * sigma > half_domain {
                return Err(OpticsError::KernelTooWide {
                    reach: 5.0 * sigma,
                    half_domain,
                });
            }
            Ok(lattice_kernel(2.0 * d * dt / (h * h)))
        };
        Ok(Self {
            shape,
            kx: axis(shape.nx, shape.dx)?,
            ky: axis(shape.ny, shape.dy)?,
        })
    }

    pub fn kernel_x(&self) -> &[f64] {
        &self.kx
    }

    pub fn kernel_y(&self) -> &[f64] {
        &self.ky
    }

    pub fn is_identity(&self) -> bool {
        self.kx.len() == 1 && self.ky.len() == 1
    }

    /// Applies one step in place; `scratch` is resized as needed.
    pub fn apply(&self, field: &mut ComplexField3D, scratch: &mut Vec<Complex64>) {
        if self.is_identity() {
            return;
        }
        let FieldShape { nx, ny, nz, .. } = self.shape;
        debug_assert_eq!(field.shape().cells(), nx * ny * nz);
        scratch.resize(nx * ny * nz, Complex64::new(0.0, 0.0));
        let data = field.as_mut_slice();

        if self.kx.len() > 1 {
            let row_len = nx * nz;
            let kx = &self.kx;
            scratch
                .par_chunks_mut(row_len)
                .zip(data.par_chunks(row_len))
                .for_each(|(out, inp)| convolve_lines(out, inp, nx, nz, kx));
            data.copy_from_slice(scratch);
        }
        if self.ky.len() > 1 {
            let row_len = nx * nz;
            let ky = &self.ky;
            let src: &[Complex64] = data;
            scratch
                .par_chunks_mut(row_len)
                .enumerate()
                .for_each(|(iy, out)| {
                    out.fill(Complex64::new(0.0, 0.0));
                    let r = ky.len() - 1;
                    let lo = iy.saturating_sub(r);
                    let hi = (iy + r).min(ny - 1);
                    for jy in lo..=hi {
                        let w = ky[iy.abs_diff(jy)];
                        let row = &src[jy * row_len..(jy + 1) * row_len];
                        for (o, v) in out.iter_mut().zip(row) {
                            *o += v * w;
                        }
                    }
                });
            data.copy_from_slice(scratch);
        }
    }
}

/// Convolves `n` consecutive lines of length `nz` along the line index.
fn convolve_lines(out: &mut [Complex64], inp: &[Complex64], n: usize, nz: usize, k: &[f64]) {
    let r = k.len() - 1;
    for i in 0..n {
        let o = &mut out[i * nz..(i + 1) * nz];
        o.fill(Complex64::new(0.0, 0.0));
        let lo = i.saturating_sub(r);
        let hi = (i + r).min(n - 1);
        for j in lo..=hi {
            let w = k[i.abs_diff(j)];
            for (a, v) in o.iter_mut().zip(&inp[j * nz..(j + 1) * nz]) {
                *a += v * w;
            }
        }
    }
}

/// One diffusion step of length `dt` returning a new field.
pub fn diffuse(sigma: &ComplexField3D, d: f64, dt: f64) -> Result<ComplexField3D, OpticsError> {
    let diffuser = Diffuser::new(sigma.shape(), d, dt)?;
    let mut out = sigma.clone();
    let mut scratch = Vec::new();
    diffuser.apply(&mut out, &mut scratch);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_norm_sq;
    use crate::grid::{make_grid, GridConfig, SimulationGrid};
    use proptest::prelude::*;

    fn grid(nx: usize, ny: usize, nz: usize, dx: f64) -> SimulationGrid {
        make_grid(&GridConfig {
            nx,
            ny,
            dx,
            dy: dx,
            ..GridConfig::single_pixel(nz, 0.01, 1.0)
        })
        .unwrap()
    }

    fn impulse(g: &SimulationGrid) -> ComplexField3D {
        let mut f = ComplexField3D::zeros(g);
        f.set(g.nx() / 2, g.ny() / 2, 0, Complex64::new(1.0, 0.0));
        f
    }

    #[test]
    fn kernel_matches_bessel_reference() {
        // exp(-1) I_n(1) for n = 0, 1, 2, 3 to 16 digits.
        let k = lattice_kernel(1.0);
        let reference = [
            0.465_759_607_593_640_44,
            0.207_910_415_349_708_45,
            0.049_938_776_894_223_539,
            0.008_155_307_772_814_294,
        ];
        for (a, b) in k.iter().zip(reference) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn kernel_sum_and_variance_exact() {
        for &tau in &[1e-6, 0.01, 0.3, 1.0, 7.5, 60.0] {
            let k = lattice_kernel(tau);
            let sum = k[0] + 2.0 * k[1..].iter().sum::<f64>();
            let var: f64 = k.iter().enumerate().map(|(n, v)| 2.0 * (n * n) as f64 * v).sum();
            assert!((sum - 1.0).abs() < 1e-14, "tau {tau}: sum {sum}");
            assert!(((var - tau) / tau).abs() < 1e-12, "tau {tau}: var {var}");
        }
        assert_eq!(lattice_kernel(0.0), vec![1.0]);
    }

    #[test]
    fn impulse_variance_is_two_d_dt() {
        let g = grid(65, 65, 2, 0.05);
        let d = 3.5e-3;
        let dt = 5.0;
        let out = diffuse(&impulse(&g), d, dt).unwrap();
        let (mut m0, mut mx, mut my) = (0.0, 0.0, 0.0);
        for iy in 0..g.ny() {
            for ix in 0..g.nx() {
                let v = out.get(ix, iy, 0).re;
                m0 += v;
                mx += v * g.x(ix).powi(2);
                my += v * g.y(iy).powi(2);
            }
        }
        let expect = 2.0 * d * dt;
        assert!((m0 - 1.0).abs() < 1e-12);
        assert!(((mx / m0 - expect) / expect).abs() < 1e-6, "{}", mx / m0);
        assert!(((my / m0 - expect) / expect).abs() < 1e-6, "{}", my / m0);
        // Other z slices untouched.
        assert!(out.line_norms_sq().iter().sum::<f64>() > 0.0);
        assert_eq!(out.get(0, 0, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn semigroup_two_half_steps_equal_one_step() {
        let g = grid(64, 48, 3, 0.09375);
        let mut f = ComplexField3D::zeros(&g);
        for (i, v) in f.as_mut_slice().iter_mut().enumerate() {
            *v = Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos());
        }
        let d = 3.5e-3;
        let dt = 0.4;
        let once = diffuse(&f, d, 2.0 * dt).unwrap();
        let twice = diffuse(&diffuse(&f, d, dt).unwrap(), d, dt).unwrap();
        // Interior: more than 10 sigma of the combined step from every edge.
        let margin = (10.0 * (4.0 * d * dt).sqrt() / g.dx()).ceil() as usize;
        let (mut diff, mut norm) = (0.0, 0.0);
        for iy in margin..g.ny() - margin {
            for ix in margin..g.nx() - margin {
                for iz in 0..g.nz() {
                    diff += (once.get(ix, iy, iz) - twice.get(ix, iy, iz)).norm_sqr();
                    norm += once.get(ix, iy, iz).norm_sqr();
                }
            }
        }
        let rel = (diff / norm).sqrt();
        assert!(rel < 1e-10, "{rel}");
    }

    #[test]
    fn zero_diffusion_is_identity_and_wide_kernel_rejected() {
        let g = grid(8, 8, 2, 0.1);
        let f = impulse(&g);
        assert_eq!(diffuse(&f, 0.0, 1.0).unwrap(), f);
        assert!(matches!(
            diffuse(&f, 1.0, 1.0),
            Err(OpticsError::KernelTooWide { .. })
        ));
    }

    #[test]
    fn single_row_grid_diffuses_only_along_x() {
        let g = grid(32, 1, 1, 0.1);
        let out = diffuse(&impulse(&g), 1e-3, 1.0).unwrap();
        assert!(out.get(15, 0, 0).re > 0.0);
        let total: f64 = out.as_slice().iter().map(|v| v.re).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn norm_never_increases(seed in 0u64..1000, d in 0.0f64..5e-3, dt in 0.0f64..1.0) {
            let g = grid(24, 12, 2, 0.1);
            let mut f = ComplexField3D::zeros(&g);
            for (i, v) in f.as_mut_slice().iter_mut().enumerate() {
                let a = (i as f64 + seed as f64) * 0.618;
                *v = Complex64::new(a.sin(), (1.7 * a).cos());
            }
            let before = field_norm_sq(&f);
            let after = field_norm_sq(&diffuse(&f, d, dt).unwrap());
            prop_assert!(after <= before * (1.0 + 1e-12));
        }
    }
}
