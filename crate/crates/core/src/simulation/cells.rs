use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{sample_normal, RngStream};
use crate::error::{Error, Result};
use crate::indices::IndexKind;
use crate::inference::{fit_test, Method, TestSpec};
use crate::Empirical;

/// One Monte Carlo design point: `F = N(0,1)`, `G = N(mu, sigma²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationCell {
    pub mu: f64,
    pub sigma: f64,
    pub n: usize,
    pub m: usize,
    pub index: IndexKind,
    pub delta0: f64,
    pub alpha: f64,
    pub method: Method,
    /// Bootstrap replicates per test.
    pub replicates: usize,
    pub reps: usize,
    pub seed: u64,
}

impl SimulationCell {
    pub fn spec(&self) -> Result<TestSpec> {
        TestSpec::new(self.index, self.delta0, self.alpha, self.method)?.with_replicates(self.replicates)
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < 1 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.n < 2 || self.m < 2 {
            return Err(Error::Config("sample sizes must be at least 2".into()));
        }
        if !(self.mu.is_finite() && self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::Domain(format!("bad cell parameters mu={} sigma={}", self.mu, self.sigma)));
        }
        self.spec().map(|_| ())
    }

    /// Cells that differ only in `(δ₀, α)` share their simulated data.
    fn data_key(&self) -> (u64, u64, usize, usize, IndexKind, Method, usize, usize, u64) {
        (
            self.mu.to_bits(),
            self.sigma.to_bits(),
            self.n,
            self.m,
            self.index,
            self.method,
            self.replicates,
            self.reps,
            self.seed,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellOutcome {
    pub rejections: usize,
    pub reps: usize,
    pub rate: f64,
    /// Binomial standard error `√(p(1−p)/reps)`.
    pub mc_se: f64,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub cell: SimulationCell,
    pub outcome: std::result::Result<CellOutcome, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
}

/// Samples of replication `r`: x from stream 0, y from stream 1, test from stream 2.
pub fn replication_samples(cell: &SimulationCell, r: u64) -> Result<(Empirical, Empirical, RngStream)> {
    let rep = RngStream::new(cell.seed, 0).substream(r);
    let x = Empirical::from_values(&sample_normal(rep.substream(0), 0.0, 1.0, cell.n)?)?;
    let y = Empirical::from_values(&sample_normal(rep.substream(1), cell.mu, cell.sigma, cell.m)?)?;
    Ok((x, y, rep.substream(2)))
}

/// Fraction of replications in which the configured test rejects.
pub fn run_cell(cell: &SimulationCell) -> Result<CellOutcome> {
    run_group(&[*cell]).map(|mut v| v.remove(0))
}

/// Runs every cell; a failing cell is reported in its row and the rest continue.
pub fn run_table(cells: &[SimulationCell]) -> TableReport {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut by_key: HashMap<_, usize> = HashMap::new();
    for (i, cell) in cells.iter().enumerate() {
        let slot = *by_key.entry(cell.data_key()).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(i);
    }

    let mut outcomes: Vec<Option<std::result::Result<CellOutcome, String>>> = vec![None; cells.len()];
    for members in groups {
        let group: Vec<SimulationCell> = members.iter().map(|&i| cells[i]).collect();
        match run_group(&group) {
            Ok(results) => {
                for (&i, res) in members.iter().zip(results) {
                    outcomes[i] = Some(Ok(res));
                }
            }
            Err(e) => {
                for &i in &members {
                    outcomes[i] = Some(Err(e.to_string()));
                }
            }
        }
    }

    TableReport {
        rows: cells
            .iter()
            .zip(outcomes)
            .map(|(cell, outcome)| TableRow {
                cell: *cell,
                outcome: outcome.expect("every cell belongs to a group"),
            })
            .collect(),
    }
}

fn run_group(group: &[SimulationCell]) -> Result<Vec<CellOutcome>> {
    for cell in group {
        cell.validate()?;
    }
    let start = Instant::now();
    let lead = group[0];
    let spec = lead.spec()?;

    let decisions: Vec<Vec<bool>> = (0..lead.reps as u64)
        .into_par_iter()
        .map(|r| {
            let (x, y, stream) = replication_samples(&lead, r)?;
            let fit = fit_test(stream, &x, &y, &spec)?;
            group
                .iter()
                .map(|c| fit.decide(c.delta0, c.alpha).map(|rep| rep.reject))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<_>>()?;

    let wall_time = start.elapsed();
    Ok((0..group.len())
        .map(|k| {
            let rejections = decisions.iter().filter(|d| d[k]).count();
            let reps = lead.reps;
            let rate = rejections as f64 / reps as f64;
            CellOutcome {
                rejections,
                reps,
                rate,
                mc_se: (rate * (1.0 - rate) / reps as f64).sqrt(),
                wall_time,
            }
        })
        .collect())
}

/// Normal designs `(σ, [μ for index 0.01, 0.05, 0.10])` used by the rejection-rate tables.
pub const PI_DESIGN: [(f64, [f64; 3]); 3] = [
    (0.7, [0.443, 0.143, -0.050]),
    (1.0, [-0.025, -0.125, -0.251]),
    (1.5, [0.770, 0.287, -0.017]),
];

pub const GAMMA_DESIGN: [(f64, [f64; 3]); 3] = [
    (1.1, [0.233, 0.164, 0.128]),
    (1.5, [1.163, 0.822, 0.641]),
    (2.0, [2.326, 1.645, 1.282]),
];

pub const DESIGN_LEVELS: [f64; 3] = [0.01, 0.05, 0.10];

/// The full rejection-rate design for one index: every (σ, μ) × δ₀ × size, α = 0.05.
///
/// Rows are ordered by δ₀, then size, then σ, then μ.
pub fn reference_design(
    index: IndexKind,
    method: Method,
    sizes: &[usize],
    replicates: usize,
    reps: usize,
    seed: u64,
) -> Vec<SimulationCell> {
    let design = match index {
        IndexKind::Pi => &PI_DESIGN,
        IndexKind::Gamma => &GAMMA_DESIGN,
    };
    let mut cells = Vec::new();
    for &delta0 in &DESIGN_LEVELS {
        for &n in sizes {
            for &(sigma, means) in design {
                for mu in means {
                    cells.push(SimulationCell {
                        mu,
                        sigma,
                        n,
                        m: n,
                        index,
                        delta0,
                        alpha: 0.05,
                        method,
                        replicates,
                        reps,
                        seed,
                    });
                }
            }
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell() -> SimulationCell {
        SimulationCell {
            mu: 0.143,
            sigma: 0.7,
            n: 100,
            m: 100,
            index: IndexKind::Pi,
            delta0: 0.05,
            alpha: 0.05,
            method: Method::Bootstrap,
            replicates: 50,
            reps: 1,
            seed: 1,
        }
    }

    #[test]
    fn single_replication_is_zero_or_one() {
        let out = run_cell(&cell()).unwrap();
        assert!(out.rate == 0.0 || out.rate == 1.0);
        assert_eq!(out.reps, 1);
    }

    #[test]
    fn empty_table() {
        assert!(run_table(&[]).rows.is_empty());
    }

    #[test]
    fn grouping_does_not_change_results() {
        let mut a = cell();
        a.reps = 40;
        let mut b = a;
        b.delta0 = 0.10;
        let mut c = a;
        c.mu = 0.443;
        let table = run_table(&[a, b, c]);
        for (row, alone) in table.rows.iter().zip([a, b, c]) {
            assert_eq!(row.outcome.as_ref().unwrap().rejections, run_cell(&alone).unwrap().rejections);
        }
    }

    #[test]
    fn failing_cells_are_annotated() {
        let mut bad = cell();
        bad.replicates = 10;
        let good = SimulationCell { reps: 3, ..cell() };
        let table = run_table(&[bad, good]);
        assert!(table.rows[0].outcome.is_err());
        assert!(table.rows[1].outcome.is_ok());
        assert!(run_cell(&SimulationCell { reps: 0, ..cell() }).is_err());
    }

    #[test]
    fn design_shapes() {
        let cells = reference_design(IndexKind::Gamma, Method::Bootstrap, &[100, 1000], 200, 10, 0);
        assert_eq!(cells.len(), 3 * 2 * 9);
        assert!(cells.iter().all(|c| c.n == c.m && c.alpha == 0.05));
        assert_eq!(cells[0].sigma, 1.1);
        assert_eq!(cells[0].mu, 0.233);
    }
}
