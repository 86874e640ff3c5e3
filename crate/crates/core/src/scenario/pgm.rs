//! Binary (P5) 8-bit portable graymap reading and writing.

use std::path::Path;

use crate::error::PgmError;
use crate::field::RealField2D;
use crate::grid::SimulationGrid;
use crate::optics::mask::{IntensityMask, MaskProvenance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    /// Row-major, first row at the top.
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![0; width * height],
        }
    }

    pub fn get(&self, col: usize, row: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, col: usize, row: usize, v: u8) {
        self.pixels[row * self.width + col] = v;
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, PgmError> {
        let mut pos = 0;
        let magic = token(bytes, &mut pos)?;
        if magic != "P5" {
            return Err(PgmError::Header(format!("expected magic P5, found {magic:?}")));
        }
        let mut field = |name: &str| -> Result<u32, PgmError> {
            let t = token(bytes, &mut pos)?;
            t.parse::<u32>()
                .map_err(|_| PgmError::Header(format!("{name} is not a number: {t:?}")))
        };
        let width = field("width")? as usize;
        let height = field("height")? as usize;
        let maxval = field("maxval")?;
        if width == 0 || height == 0 {
            return Err(PgmError::Header(format!("empty image {width}x{height}")));
        }
        if maxval != 255 {
            return Err(PgmError::Depth(maxval));
        }
        // Exactly one whitespace byte separates the header from the raster.
        if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
            return Err(PgmError::Header("missing whitespace after maxval".into()));
        }
        pos += 1;
        let expected = width * height;
        let data = &bytes[pos..];
        if data.len() < expected {
            return Err(PgmError::Truncated {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels: data[..expected].to_vec(),
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn read(path: &Path) -> Result<Self, PgmError> {
        let bytes = std::fs::read(path).map_err(|source| PgmError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&bytes)
    }

    pub fn write(&self, path: &Path) -> Result<(), PgmError> {
        std::fs::write(path, self.to_bytes()).map_err(|source| PgmError::Io {
            path: path.to_owned(),
            source,
        })
    }

    /// Bilinear sample at fractional pixel coordinates (pixel centres at
    /// integers); zero outside the image.
    fn sample(&self, u: f64, v: f64) -> f64 {
        let px = |c: isize, r: isize| -> f64 {
            if c < 0 || r < 0 || c as usize >= self.width || r as usize >= self.height {
                0.0
            } else {
                self.get(c as usize, r as usize) as f64 / 255.0
            }
        };
        if u < -0.5 || v < -0.5 || u > self.width as f64 - 0.5 || v > self.height as f64 - 0.5 {
            return 0.0;
        }
        let u = u.clamp(0.0, (self.width - 1) as f64);
        let v = v.clamp(0.0, (self.height - 1) as f64);
        let (c0, r0) = (u.floor() as isize, v.floor() as isize);
        let (fu, fv) = (u - c0 as f64, v - r0 as f64);
        let top = px(c0, r0) * (1.0 - fu) + px(c0 + 1, r0) * fu;
        let bottom = px(c0, r0 + 1) * (1.0 - fu) + px(c0 + 1, r0 + 1) * fu;
        top * (1.0 - fv) + bottom * fv
    }
}

fn token(bytes: &[u8], pos: &mut usize) -> Result<String, PgmError> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    if start == *pos {
        return Err(PgmError::Header("unexpected end of header".into()));
    }
    Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

/// Where an image lands in the transverse plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    /// Size of the image in the memory plane (mm).
    pub width: f64,
    pub height: f64,
    pub center_x: f64,
    pub center_y: f64,
}

impl Placement {
    /// Object of size `width x height` imaged with `magnification`,
    /// centred on the axis.
    pub fn imaged(width: f64, height: f64, magnification: f64) -> Self {
        Self {
            width: width * magnification,
            height: height * magnification,
            center_x: 0.0,
            center_y: 0.0,
        }
    }

    /// Image stretched over the whole grid.
    pub fn fill(grid: &SimulationGrid) -> Self {
        Self {
            width: grid.nx() as f64 * grid.dx(),
            height: grid.ny() as f64 * grid.dy(),
            center_x: 0.0,
            center_y: 0.0,
        }
    }
}

/// Resamples `image` onto the grid. The top image row maps to the largest
/// `y`; values become `v / 255`.
pub fn image_to_mask(image: &GrayImage, grid: &SimulationGrid, placement: Placement, label: &str) -> IntensityMask {
    let mut values = Vec::with_capacity(grid.pixel_count());
    let su = image.width as f64 / placement.width;
    let sv = image.height as f64 / placement.height;
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            let u = (grid.x(ix) - placement.center_x + 0.5 * placement.width) * su - 0.5;
            let v = (placement.center_y + 0.5 * placement.height - grid.y(iy)) * sv - 0.5;
            values.push(image.sample(u, v));
        }
    }
    IntensityMask::from_values(
        grid.nx(),
        grid.ny(),
        values,
        MaskProvenance::LoadedImage(label.to_owned()),
    )
    .expect("one value per pixel")
}

pub fn load_mask(path: &Path, grid: &SimulationGrid, placement: Placement) -> Result<IntensityMask, PgmError> {
    let image = GrayImage::read(path)?;
    Ok(image_to_mask(&image, grid, placement, &path.display().to_string()))
}

/// Converts a frame to 8 bits as `round(255 v / scale)`, clamped; the top
/// image row is the largest `y`.
pub fn frame_to_image(frame: &RealField2D, scale: f64) -> GrayImage {
    let mut img = GrayImage::new(frame.nx, frame.ny);
    for row in 0..frame.ny {
        let iy = frame.ny - 1 - row;
        for ix in 0..frame.nx {
            let v = if scale > 0.0 { frame.get(ix, iy) / scale } else { 0.0 };
            img.set(ix, row, (v * 255.0).round().clamp(0.0, 255.0) as u8);
        }
    }
    img
}

/// Writes `frame` with values in `[0, 1]` mapped to `0..=255`.
pub fn save_frame(frame: &RealField2D, path: &Path) -> Result<(), PgmError> {
    frame_to_image(frame, 1.0).write(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, GridConfig};

    fn grid(nx: usize, ny: usize) -> SimulationGrid {
        make_grid(&GridConfig {
            nx,
            ny,
            dx: 0.1,
            dy: 0.1,
            ..GridConfig::single_pixel(4, 0.01, 1.0)
        })
        .unwrap()
    }

    #[test]
    fn parse_with_comments() {
        let mut bytes = b"P5\n# made by hand\n3 2\n# depth\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 128, 255, 1, 2, 3]);
        let img = GrayImage::parse(&bytes).unwrap();
        assert_eq!((img.width, img.height), (3, 2));
        assert_eq!(img.get(2, 0), 255);
        assert_eq!(GrayImage::parse(&img.to_bytes()).unwrap(), img);
    }

    #[test]
    fn malformed_files_rejected() {
        assert!(matches!(GrayImage::parse(b"P2\n1 1\n255\n0"), Err(PgmError::Header(_))));
        assert!(matches!(GrayImage::parse(b"P5\n1 1\n65535\n00"), Err(PgmError::Depth(65535))));
        assert!(matches!(
            GrayImage::parse(b"P5\n2 2\n255\n\x00\x01"),
            Err(PgmError::Truncated { expected: 4, actual: 2 })
        ));
        assert!(matches!(GrayImage::parse(b"P5\n2"), Err(PgmError::Header(_))));
    }

    #[test]
    fn white_image_gives_unit_mask() {
        let g = grid(20, 10);
        let img = GrayImage {
            width: 7,
            height: 5,
            pixels: vec![255; 35],
        };
        let m = image_to_mask(&img, &g, Placement::fill(&g), "white");
        assert!(m.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn round_trip_through_grid() {
        let g = grid(16, 8);
        let mut img = GrayImage::new(16, 8);
        for (i, p) in img.pixels.iter_mut().enumerate() {
            *p = ((i * 37) % 256) as u8;
        }
        let m = image_to_mask(&img, &g, Placement::fill(&g), "ramp");
        let frame = RealField2D {
            nx: 16,
            ny: 8,
            data: m.values().to_vec(),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.pgm");
        save_frame(&frame, &path).unwrap();
        assert_eq!(GrayImage::read(&path).unwrap(), img);
        let again = load_mask(&path, &g, Placement::fill(&g)).unwrap();
        assert_eq!(again.values(), m.values());
    }

    #[test]
    fn magnified_placement_covers_expected_area() {
        // 8 x 2 mm object at magnification 1.25 covers 10 x 2.5 mm.
        let g = make_grid(&GridConfig {
            nx: 128,
            ny: 48,
            dx: 12.0 / 128.0,
            dy: 4.0 / 48.0,
            ..GridConfig::single_pixel(4, 0.01, 1.0)
        })
        .unwrap();
        let img = GrayImage {
            width: 160,
            height: 40,
            pixels: vec![255; 6400],
        };
        let m = image_to_mask(&img, &g, Placement::imaged(8.0, 2.0, 1.25), "block");
        let lit = m.values().iter().filter(|&&v| v > 0.5).count() as f64;
        let area = lit * g.pixel_area();
        assert!((area - 25.0).abs() < 1.5, "{area}");
        assert_eq!(m.get(0, 24), 0.0);
        assert_eq!(m.get(64, 24), 1.0);
    }
}
