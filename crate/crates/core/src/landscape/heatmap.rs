//! Binary PGM (P5) heatmaps of a landscape.
//!
//! One pixel per grid point, γ ascending left to right and β ascending
//! bottom to top. Energies map linearly from `[min, max]` onto `[0, 255]`; a
//! constant landscape is uniform 128. The bounds go in a comment line.

use super::io::CsvRow;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Heatmap {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub pixels: Vec<u8>,
    pub energy_min: f64,
    pub energy_max: f64,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

fn distinct(mut xs: Vec<f64>) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

impl Heatmap {
    pub fn from_rows(rows: &[CsvRow]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let gammas = distinct(rows.iter().map(|r| r.gamma).collect());
        let betas = distinct(rows.iter().map(|r| r.beta).collect());
        let (width, height) = (gammas.len(), betas.len());
        if width * height != rows.len() {
            return Err(Error::InvalidConfig(format!(
                "{} rows do not form a full {width}×{height} grid",
                rows.len()
            )));
        }
        let energy_min = rows.iter().map(|r| r.energy).fold(f64::INFINITY, f64::min);
        let energy_max = rows.iter().map(|r| r.energy).fold(f64::NEG_INFINITY, f64::max);
        let mut pixels = vec![0u8; width * height];
        let mut filled = vec![false; width * height];
        for r in rows {
            let x = gammas.binary_search_by(|g| g.total_cmp(&r.gamma)).unwrap();
            let y = height - 1 - betas.binary_search_by(|b| b.total_cmp(&r.beta)).unwrap();
            let at = y * width + x;
            if filled[at] {
                return Err(Error::InvalidConfig(format!(
                    "duplicate grid point ({}, {})",
                    r.gamma, r.beta
                )));
            }
            filled[at] = true;
            pixels[at] = if energy_max > energy_min {
                ((r.energy - energy_min) / (energy_max - energy_min) * 255.0).round() as u8
            } else {
                128
            };
        }
        Ok(Heatmap {
            width,
            height,
            pixels,
            energy_min,
            energy_max,
            gammas,
            betas,
        })
    }

    /// Pixel value at a grid coordinate.
    pub fn value_at(&self, gamma: f64, beta: f64) -> Option<u8> {
        let x = self.gammas.iter().position(|&g| g == gamma)?;
        let y = self.height - 1 - self.betas.iter().position(|&b| b == beta)?;
        Some(self.pixels[y * self.width + x])
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!(
            "P5\n# energy_min={} energy_max={}\n{} {}\n255\n",
            self.energy_min, self.energy_max, self.width, self.height
        )
        .into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

pub fn render_pgm(rows: &[CsvRow]) -> Result<Vec<u8>> {
    Ok(Heatmap::from_rows(rows)?.to_pgm())
}
