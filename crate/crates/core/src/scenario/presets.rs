//! Built-in scenarios and the bundled test image.

use crate::error::ConfigError;
use crate::scenario::config::ScenarioConfig;
use crate::scenario::pgm::GrayImage;

/// Name and TOML source of every preset.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig2", include_str!("../../presets/fig2.toml")),
    ("fig3", include_str!("../../presets/fig3.toml")),
    ("fig4", include_str!("../../presets/fig4.toml")),
    ("fig4-single", include_str!("../../presets/fig4-single.toml")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn preset_source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn preset(name: &str) -> Result<ScenarioConfig, ConfigError> {
    let src = preset_source(name).ok_or_else(|| {
        ConfigError::Invalid(format!(
            "unknown preset '{name}'; available: {}",
            preset_names().join(", ")
        ))
    })?;
    ScenarioConfig::from_toml(src)
}

pub const LOGO_WIDTH: usize = 160;
pub const LOGO_HEIGHT: usize = 40;
/// Image rows `[start, end)` covered by the full-width bar under the
/// lettering.
pub const LOGO_BAR_ROWS: (usize, usize) = (28, 38);

const GLYPHS: [(char, [&str; 7]); 4] = [
    ('N', ["#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#", "#...#"]),
    ('I', ["#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"]),
    ('S', [".####", "#....", "#....", ".###.", "....#", "....#", "####."]),
    ('T', ["#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."]),
];

/// 160 x 40 block-letter logo with a solid bar beneath it, used as the
/// default stored image. Strokes are 6 px wide and 3 px tall.
pub fn logo() -> GrayImage {
    let mut img = GrayImage::new(LOGO_WIDTH, LOGO_HEIGHT);
    let (sx, sy) = (6, 3);
    let (left, top, gap) = (5, 2, 10);
    for (k, (_, rows)) in GLYPHS.iter().enumerate() {
        let x0 = left + k * (5 * sx + gap);
        for (r, line) in rows.iter().enumerate() {
            for (c, ch) in line.chars().enumerate() {
                if ch != '#' {
                    continue;
                }
                for dy in 0..sy {
                    for dx in 0..sx {
                        img.set(x0 + c * sx + dx, top + r * sy + dy, 255);
                    }
                }
            }
        }
    }
    for row in LOGO_BAR_ROWS.0..LOGO_BAR_ROWS.1 {
        for col in 0..LOGO_WIDTH {
            img.set(col, row, 255);
        }
    }
    img
}
