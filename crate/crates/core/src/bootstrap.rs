//! Resampling engine for two-sample statistics.
//!
//! Replicate `b` draws from `stream.substream(b)`, resampling `x` first and
//! then `y` from the same generator. Replicates may run on any number of
//! threads; they are collected and reduced in index order.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{fill_normal, EmpiricalDistribution, RngStream};
use crate::error::{ensure_positive, Error, Result};
use crate::indices::{gamma_empirical, gamma_normal, pi_empirical, pi_normal};
use crate::Empirical;

pub const MIN_REPLICATES: usize = 50;
pub const DEFAULT_REPLICATES: usize = 200;

/// How bootstrap samples are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Draw with replacement from each sample.
    Nonparametric,
    /// Draw fresh normals at each sample's maximum-likelihood fit.
    ParametricNormal,
}

/// A scalar functional of two samples with a known range.
pub trait TwoSampleStatistic: Sync {
    fn evaluate(&self, x: &Empirical, y: &Empirical) -> f64;

    /// Bias-corrected values are clipped into this interval.
    fn range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
}

/// The statistics the test procedures bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexStatistic {
    /// `π(F_n, G_m)`.
    Pi,
    /// `γ̂_{n,m}` from the ψ curve.
    GammaHat,
    /// π at the fitted normal laws.
    PluginPi,
    /// γ at the fitted normal laws.
    PluginGamma,
}

impl TwoSampleStatistic for IndexStatistic {
    fn evaluate(&self, x: &Empirical, y: &Empirical) -> f64 {
        match self {
            IndexStatistic::Pi => pi_empirical(x, y),
            IndexStatistic::GammaHat => gamma_empirical(x, y).gamma_hat,
            IndexStatistic::PluginPi | IndexStatistic::PluginGamma => {
                let (sx, sy) = (x.variance_ml().sqrt(), y.variance_ml().sqrt());
                if !(sx > 0.0 && sy > 0.0) {
                    return f64::NAN;
                }
                let value = if *self == IndexStatistic::PluginPi {
                    pi_normal(x.mean(), sx, y.mean(), sy)
                } else {
                    gamma_normal(x.mean(), sx, y.mean(), sy)
                };
                value.unwrap_or(f64::NAN)
            }
        }
    }
}

/// Wraps a closure as a statistic with an explicit range.
pub struct FnStatistic<F> {
    pub f: F,
    pub range: (f64, f64),
}

impl<F> TwoSampleStatistic for FnStatistic<F>
where
    F: Fn(&Empirical, &Empirical) -> f64 + Sync,
{
    fn evaluate(&self, x: &Empirical, y: &Empirical) -> f64 {
        (self.f)(x, y)
    }

    fn range(&self) -> (f64, f64) {
        self.range
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapResult {
    pub raw_estimate: f64,
    pub boot_mean: f64,
    /// `2·raw − boot_mean`, clipped into the statistic's range.
    pub bias_corrected: f64,
    /// Replicate standard deviation times `√(nm/(n+m))`.
    pub boot_se: f64,
    #[serde(skip)]
    pub replicates: Vec<f64>,
}

impl BootstrapResult {
    pub fn count(&self) -> usize {
        self.replicates.len()
    }
}

/// `n` draws with replacement from `s`, returned sorted.
pub fn resample(stream: RngStream, s: &Empirical) -> Empirical {
    resample_with(&mut stream.generator(), s)
}

fn resample_with<R: Rng>(rng: &mut R, s: &Empirical) -> Empirical {
    let n = s.len();
    // counting the hit indices yields the resample already in order
    let mut hits = vec![0u32; n];
    for _ in 0..n {
        hits[rng.random_range(0..n)] += 1;
    }
    let values = s.values();
    let mut out = Vec::with_capacity(n);
    for (k, &c) in hits.iter().enumerate() {
        out.extend(std::iter::repeat_n(values[k], c as usize));
    }
    EmpiricalDistribution::from_sorted_unchecked(out)
}

/// `n` fresh N(mu_hat, sigma_hat²) draws, sorted.
///
/// Unlike [`EmpiricalDistribution::from_values`] this admits `n = 1`.
pub fn resample_parametric_normal(
    stream: RngStream,
    mu_hat: f64,
    sigma_hat: f64,
    n: usize,
) -> Result<Empirical> {
    ensure_positive("sigma_hat", sigma_hat)?;
    Ok(parametric_with(&mut stream.generator(), mu_hat, sigma_hat, n))
}

fn parametric_with<R: Rng>(rng: &mut R, mu: f64, sigma: f64, n: usize) -> Empirical {
    let mut v = fill_normal(rng, mu, sigma, n);
    v.sort_by(f64::total_cmp);
    EmpiricalDistribution::from_sorted_unchecked(v)
}

/// Bootstraps `stat` on independent resamples of `x` and `y`.
pub fn boot_stat<S: TwoSampleStatistic + ?Sized>(
    stream: RngStream,
    x: &Empirical,
    y: &Empirical,
    stat: &S,
    replicates: usize,
    scheme: Scheme,
) -> Result<BootstrapResult> {
    if replicates < MIN_REPLICATES {
        return Err(Error::Config(format!(
            "at least {MIN_REPLICATES} bootstrap replicates are required, got {replicates}"
        )));
    }
    let fits = match scheme {
        Scheme::Nonparametric => None,
        Scheme::ParametricNormal => {
            let (sx, sy) = (x.variance_ml().sqrt(), y.variance_ml().sqrt());
            if !(sx > 0.0 && sy > 0.0) {
                return Err(Error::Degenerate("a sample has zero variance".into()));
            }
            Some(((x.mean(), sx), (y.mean(), sy)))
        }
    };
    let raw_estimate = stat.evaluate(x, y);
    if !raw_estimate.is_finite() {
        return Err(Error::Numerical("statistic is not finite on the observed samples".into()));
    }

    let values: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream.substream(b).generator();
            let (xb, yb) = match fits {
                None => (resample_with(&mut rng, x), resample_with(&mut rng, y)),
                Some(((mx, sx), (my, sy))) => (
                    parametric_with(&mut rng, mx, sx, x.len()),
                    parametric_with(&mut rng, my, sy, y.len()),
                ),
            };
            stat.evaluate(&xb, &yb)
        })
        .collect();

    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("a bootstrap replicate is not finite".into()));
    }
    Ok(summarize(raw_estimate, values, x.len(), y.len(), stat.range()))
}

fn summarize(raw: f64, replicates: Vec<f64>, n: usize, m: usize, range: (f64, f64)) -> BootstrapResult {
    let b = replicates.len() as f64;
    let all_equal = replicates.windows(2).all(|w| w[0] == w[1]);
    let boot_mean = if all_equal {
        replicates[0]
    } else {
        replicates.iter().sum::<f64>() / b
    };
    let var = replicates.iter().map(|v| (v - boot_mean).powi(2)).sum::<f64>() / (b - 1.0);
    let scale = (n as f64 * m as f64 / (n + m) as f64).sqrt();
    BootstrapResult {
        raw_estimate: raw,
        boot_mean,
        bias_corrected: (2.0 * raw - boot_mean).clamp(range.0, range.1),
        boot_se: if all_equal { 0.0 } else { var.sqrt() * scale },
        replicates,
    }
}
