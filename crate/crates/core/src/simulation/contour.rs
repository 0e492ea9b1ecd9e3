use std::str::FromStr;

use serde::Serialize;

use super::calibration::normal_index;
use crate::error::{Error, Result};
use crate::indices::IndexKind;

/// `count` evenly spaced points from `start` to `end`, parsed from `a:b:n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisRange {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(Error::Domain(format!("axis range needs start < end, got {start}:{end}")));
        }
        if count < 2 {
            return Err(Error::Domain(format!("axis needs at least 2 points, got {count}")));
        }
        Ok(Self { start, end, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let span = self.end - self.start;
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.end } else { self.start + span * k as f64 / last })
            .collect()
    }
}

impl FromStr for AxisRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("expected a:b:n, got '{s}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
        let end = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
        let count = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
        Self::new(start, end, count)
    }
}

/// Closed-form index values on a (μ, σ) grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourGrid {
    pub index: IndexKind,
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    /// `values[i][j]` is the index at `(mu[i], sigma[j])`.
    pub values: Vec<Vec<f64>>,
}

impl ContourGrid {
    /// Long-form `(mu, sigma, value)` records, μ-major.
    pub fn records(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.mu.iter().enumerate().flat_map(move |(i, &mu)| {
            self.sigma
                .iter()
                .enumerate()
                .map(move |(j, &sigma)| (mu, sigma, self.values[i][j]))
        })
    }
}

pub fn contour_grid(index: IndexKind, mu: AxisRange, sigma: AxisRange) -> Result<ContourGrid> {
    if sigma.start <= 0.0 {
        return Err(Error::Domain("sigma axis must stay positive".into()));
    }
    let (mus, sigmas) = (mu.points(), sigma.points());
    let values = mus
        .iter()
        .map(|&m| sigmas.iter().map(|&s| normal_index(index, m, s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ContourGrid {
        index,
        mu: mus,
        sigma: sigmas,
        values,
    })
}
