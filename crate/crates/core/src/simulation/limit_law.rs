//! Sampler for the limit law of the normalised empirical π index.
//!
//! Under `√(nm/(n+m))(π̂ − π)`, the limit is the supremum of
//! `√λ·B₁(t) − √(1−λ)·B₂(t − π)` over the contact set: the levels `t` where
//! `G(x) = t` and `F(x) = t − π` for some `x`, i.e. where the supremum
//! defining π is attained. `B₁` and `B₂` are independent Brownian bridges.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::distributions::{ContinuousModel, RngStream};
use crate::error::{ensure_unit_open, Error, Result};

pub const MIN_GRID: usize = 1000;

/// Contact levels of a pair of laws, detected on a quantile-spaced scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactSet {
    pub pi: f64,
    /// Ascending levels `t`; the bridge `B₂` is read at `t − π`.
    pub levels: Vec<f64>,
}

impl ContactSet {
    /// Scans `x` over the `F` and `G` quantiles at `(k − ½)/grid` and keeps
    /// every `G(x)` within `2/grid` of the attained supremum.
    pub fn detect<F, G>(f: &F, g: &G, grid: usize) -> Result<Self>
    where
        F: ContinuousModel + ?Sized,
        G: ContinuousModel + ?Sized,
    {
        if grid < MIN_GRID {
            return Err(Error::Config(format!("grid must be at least {MIN_GRID}, got {grid}")));
        }
        let step = 1.0 / grid as f64;
        let points: Vec<(f64, f64)> = (0..grid)
            .flat_map(|k| {
                let p = (k as f64 + 0.5) * step;
                [f.quantile(p), g.quantile(p)]
            })
            .map(|x| (g.cdf(x), f.cdf(x)))
            .collect();
        if points.iter().any(|(gx, fx)| !(gx.is_finite() && fx.is_finite())) {
            return Err(Error::Numerical("non-finite distribution function on the scan".into()));
        }
        let pi = points.iter().map(|(gx, fx)| gx - fx).fold(0.0f64, f64::max);
        let tol = 2.0 * step;

        let mut levels: Vec<f64> = points
            .iter()
            .filter(|(gx, fx)| (gx - fx - pi).abs() <= tol)
            .map(|&(gx, _)| gx.clamp(pi, 1.0))
            .collect();
        if pi <= tol {
            // the supremum is also approached in both tails, where both bridges vanish
            levels.extend([pi, 1.0]);
        }
        if levels.is_empty() {
            return Err(Error::Numerical("empty contact set".into()));
        }
        levels.sort_by(f64::total_cmp);
        levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        Ok(Self { pi, levels })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// One draw of the supremum, with both bridges simulated exactly at the
    /// contact levels.
    pub fn draw<R: Rng>(&self, rng: &mut R, lambda: f64) -> f64 {
        let first = bridge_at(rng, self.levels.iter().copied());
        let second = bridge_at(rng, self.levels.iter().map(|t| (t - self.pi).max(0.0)));
        let (a, b) = (lambda.sqrt(), (1.0 - lambda).sqrt());
        first
            .iter()
            .zip(&second)
            .map(|(u, v)| a * u - b * v)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A Brownian bridge at ascending times in `[0, 1]`, via `W(t) − t·W(1)`.
fn bridge_at<R: Rng>(rng: &mut R, times: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut w = 0.0;
    let mut last = 0.0;
    let mut path: Vec<(f64, f64)> = times
        .map(|t| {
            let z: f64 = rng.sample(StandardNormal);
            w += z * (t - last).max(0.0).sqrt();
            last = t;
            (t, w)
        })
        .collect();
    let z: f64 = rng.sample(StandardNormal);
    let w1 = w + z * (1.0 - last).max(0.0).sqrt();
    path.iter_mut().map(|(t, w)| *w - *t * w1).collect()
}

/// `draws` independent draws of the limit law at sampling fraction `lambda`.
/// Draw `d` uses `stream.substream(d)`.
pub fn limit_law_sample<F, G>(
    stream: RngStream,
    f: &F,
    g: &G,
    lambda: f64,
    grid: usize,
    draws: usize,
) -> Result<Vec<f64>>
where
    F: ContinuousModel + ?Sized,
    G: ContinuousModel + ?Sized,
{
    ensure_unit_open("lambda", lambda)?;
    let contact = ContactSet::detect(f, g, grid)?;
    Ok((0..draws as u64)
        .into_par_iter()
        .map(|d| contact.draw(&mut stream.substream(d).generator(), lambda))
        .collect())
}
