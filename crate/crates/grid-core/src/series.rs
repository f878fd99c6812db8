use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// An hourly time series.
///
/// All series in the repository share one convention: one value per step,
/// a step of `resolution` hours (1.0 everywhere in practice), and a length
/// that must cover the scenario horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    resolution: f64,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Self {
        TimeSeries { values, resolution: 1.0 }
    }

    pub fn constant(value: f64, len: usize) -> Self {
        TimeSeries::new(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Hours per step.
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, step: usize) -> f64 {
        self.values[step]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// First `h` steps as a new series. Errors if the series is shorter.
    pub fn truncated(&self, h: usize, name: &str) -> Result<TimeSeries> {
        if self.values.len() < h {
            return Err(Error::validation(format!(
                "series '{}' has {} steps, scenario horizon needs {}",
                name,
                self.values.len(),
                h
            )));
        }
        Ok(TimeSeries::new(self.values[..h].to_vec()))
    }

    /// Checks that every value lies in [0, 1] (availability-type series).
    pub fn check_availability(&self, name: &str) -> Result<()> {
        for (i, v) in self.values.iter().enumerate() {
            if !(0.0..=1.0).contains(v) {
                return Err(Error::validation(format!(
                    "availability series '{}' must lie in [0,1], got {} at step {}",
                    name, v, i
                )));
            }
        }
        Ok(())
    }

    /// Checks that every value is non-negative (demand-type series).
    pub fn check_demand(&self, name: &str) -> Result<()> {
        for (i, v) in self.values.iter().enumerate() {
            if *v < 0.0 || !v.is_finite() {
                return Err(Error::validation(format!(
                    "demand series '{}' must be >= 0 and finite, got {} at step {}",
                    name, v, i
                )));
            }
        }
        Ok(())
    }
}

/// Reads a columnar time-series file: one header line, one value per
/// subsequent line.
pub fn read_series(path: &Path) -> Result<TimeSeries> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        if idx == 0 {
            continue; // header
        }
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::ParseLine {
            path: path.to_path_buf(),
            line: idx + 1,
            detail: format!("expected a number, got '{}'", line),
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            detail: "series file has a header but no values".into(),
        });
    }
    Ok(TimeSeries::new(values))
}

/// Writes a series in the columnar format read by [`read_series`].
pub fn write_series(path: &Path, header: &str, values: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(values.len() * 8 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for v in values {
        out.push_str(&format!("{}\n", v));
    }
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
