//! Landscape CSV and extremal-report JSON.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::stats::ExtremalReport;
use super::LandscapeGrid;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "gamma,beta,energy,two_sigma,n_compilations,shots,backend";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub gamma: f64,
    pub beta: f64,
    pub energy: f64,
    pub two_sigma: f64,
    pub n_compilations: usize,
    pub shots: u64,
    pub backend: String,
}

/// One row per point, in the grid's (γ-major) order.
pub fn landscape_rows(l: &LandscapeGrid, point_two_sigma: &[f64]) -> Result<Vec<CsvRow>> {
    if point_two_sigma.len() != l.points.len() {
        return Err(Error::GridMismatch(format!(
            "{} points but {} uncertainties",
            l.points.len(),
            point_two_sigma.len()
        )));
    }
    Ok(l.points
        .iter()
        .zip(point_two_sigma)
        .map(|(p, &s)| CsvRow {
            gamma: p.gamma,
            beta: p.beta,
            energy: p.energy,
            two_sigma: s,
            n_compilations: l.n_compilations,
            shots: l.shots,
            backend: l.backend.clone(),
        })
        .collect())
}

pub fn write_landscape_csv<W: Write>(w: W, rows: &[CsvRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    if rows.is_empty() {
        out.write_record(CSV_HEADER.split(','))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_landscape_csv<R: Read>(r: R) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_reader(r);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse {
            path: "header".into(),
            message: format!("expected '{CSV_HEADER}', found '{}'", header.join(",")),
        });
    }
    reader
        .deserialize()
        .enumerate()
        .map(|(k, row)| {
            row.map_err(|e| Error::Parse {
                path: format!("row {}", k + 1),
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn report_to_json(report: &ExtremalReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}
