//! Brute-force population indices for arbitrary continuous laws.
//!
//! These are deliberately naive grid evaluations; they serve as independent
//! checks on the closed forms.

use crate::distributions::ContinuousModel;
use crate::error::{Error, Result};

/// `max_x (G(x) − F(x))` over `lo, lo + step, …, hi`, clipped at 0.
pub fn pi_population_oracle<F, G>(f: &F, g: &G, lo: f64, hi: f64, step: f64) -> Result<f64>
where
    F: ContinuousModel + ?Sized,
    G: ContinuousModel + ?Sized,
{
    if !matches!(lo.partial_cmp(&hi), Some(std::cmp::Ordering::Less)) || step.is_nan() || step <= 0.0 {
        return Err(Error::Domain(format!(
            "grid needs lo < hi and step > 0 (lo={lo}, hi={hi}, step={step})"
        )));
    }
    let points = ((hi - lo) / step).floor() as usize;
    let best = (0..=points)
        .map(|k| {
            let x = lo + k as f64 * step;
            g.cdf(x) - f.cdf(x)
        })
        .fold(0.0, f64::max);
    Ok(best)
}

/// Fraction of midpoints `(k − ½)/grid` where `F⁻¹(t) > G⁻¹(t)`.
pub fn gamma_population_oracle<F, G>(f: &F, g: &G, grid: usize) -> Result<f64>
where
    F: ContinuousModel + ?Sized,
    G: ContinuousModel + ?Sized,
{
    if grid < 1000 {
        return Err(Error::Domain(format!("grid must be at least 1000, got {grid}")));
    }
    let hits = (1..=grid)
        .filter(|&k| {
            let t = (k as f64 - 0.5) / grid as f64;
            f.quantile(t) > g.quantile(t)
        })
        .count();
    Ok(hits as f64 / grid as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Normal;
    use crate::indices::{gamma_normal, pi_normal};

    #[test]
    fn equal_laws_give_zero() {
        let f = Normal::normal(0.4, 1.3).unwrap();
        assert_eq!(pi_population_oracle(&f, &f, -12.0, 12.0, 1e-3).unwrap(), 0.0);
        assert_eq!(gamma_population_oracle(&f, &f, 1000).unwrap(), 0.0);
    }

    #[test]
    fn restricted_window_misses_the_maximum() {
        let f = Normal::normal(0.0, 1.0).unwrap();
        let g = Normal::normal(0.287, 1.5).unwrap();
        let full = pi_normal(0.0, 1.0, 0.287, 1.5).unwrap();
        // the maximiser lies left of zero for these parameters
        let narrow = pi_population_oracle(&f, &g, 0.5, 3.0, 1e-4).unwrap();
        assert!(narrow < full);
    }

    #[test]
    fn swapped_arguments_complement() {
        let f = Normal::normal(0.0, 1.0).unwrap();
        let g = Normal::normal(0.6, 1.8).unwrap();
        let grid = 4000;
        let a = gamma_population_oracle(&f, &g, grid).unwrap();
        let b = gamma_population_oracle(&g, &f, grid).unwrap();
        assert!((a + b - 1.0).abs() <= 2.0 / grid as f64);
        assert!((a - gamma_normal(0.0, 1.0, 0.6, 1.8).unwrap()).abs() <= 2.0 / grid as f64);
    }

    #[test]
    fn validates_arguments() {
        let f = Normal::normal(0.0, 1.0).unwrap();
        assert!(pi_population_oracle(&f, &f, 1.0, 0.0, 0.1).is_err());
        assert!(pi_population_oracle(&f, &f, 0.0, 1.0, 0.0).is_err());
        assert!(gamma_population_oracle(&f, &f, 999).is_err());
    }
}
