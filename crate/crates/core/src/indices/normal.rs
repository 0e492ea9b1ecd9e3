//! Closed forms for two normal laws.
//!
//! Both indices are invariant under a common affine change of variable, so
//! `(N(μ₁,σ₁²), N(μ₂,σ₂²))` reduces to `(N(0,1), N(μ,σ²))` with
//! `μ = (μ₂−μ₁)/σ₁`, `σ = σ₂/σ₁`.

use crate::distributions::{std_normal_cdf, std_normal_sf};
use crate::error::{ensure_positive, Error, Result};

/// Canonical `(μ, σ)` of the second law relative to the first.
pub fn canonical_pair(mu1: f64, sigma1: f64, mu2: f64, sigma2: f64) -> Result<(f64, f64)> {
    ensure_positive("sigma1", sigma1)?;
    ensure_positive("sigma2", sigma2)?;
    if !(mu1.is_finite() && mu2.is_finite()) {
        return Err(Error::Domain("means must be finite".into()));
    }
    Ok(((mu2 - mu1) / sigma1, sigma2 / sigma1))
}

/// Real roots of the density-crossing equation for `N(0,1)` vs `N(μ,σ²)`, σ ≠ 1:
/// `(σ²−1)x² + 2μx − (μ² + 2σ² ln σ) = 0`.
///
/// The discriminant `μ²σ² + 2σ²(σ²−1) ln σ` is nonnegative because
/// `(σ²−1) ln σ ≥ 0`.
pub fn density_crossings(mu: f64, sigma: f64) -> [f64; 2] {
    let a = sigma * sigma - 1.0;
    let b = 2.0 * mu;
    let c = -(mu * mu + 2.0 * sigma * sigma * sigma.ln());
    let disc = (b * b - 4.0 * a * c).max(0.0);
    // cancellation-free form of the quadratic formula
    let root = disc.sqrt();
    let q = if b >= 0.0 { -0.5 * (b + root) } else { -0.5 * (b - root) };
    if q == 0.0 {
        // mu = 0 and sigma = 1; excluded by callers
        return [0.0, 0.0];
    }
    [q / a, c / q]
}

/// π(N(0,1), N(μ,σ²)) on the canonical pair.
fn pi_canonical(mu: f64, sigma: f64) -> f64 {
    if sigma == 1.0 {
        // supremum of Φ(x−μ) − Φ(x) at x = μ/2
        return (2.0 * std_normal_cdf(-mu / 2.0) - 1.0).max(0.0);
    }
    density_crossings(mu, sigma)
        .iter()
        .map(|&x| std_normal_cdf((x - mu) / sigma) - std_normal_cdf(x))
        .fold(0.0, f64::max)
        .clamp(0.0, 1.0)
}

/// γ(N(0,1), N(μ,σ²)) on the canonical pair.
fn gamma_canonical(mu: f64, sigma: f64) -> f64 {
    if sigma == 1.0 {
        return if mu >= 0.0 { 0.0 } else { 1.0 };
    }
    std_normal_sf(mu / (sigma - 1.0).abs())
}

/// `π(N(μ₁,σ₁²), N(μ₂,σ₂²)) = sup_x (G(x) − F(x))`.
pub fn pi_normal(mu1: f64, sigma1: f64, mu2: f64, sigma2: f64) -> Result<f64> {
    let (mu, sigma) = canonical_pair(mu1, sigma1, mu2, sigma2)?;
    Ok(pi_canonical(mu, sigma))
}

/// `γ(N(μ₁,σ₁²), N(μ₂,σ₂²))`, the mass of quantile levels where `F⁻¹ > G⁻¹`.
pub fn gamma_normal(mu1: f64, sigma1: f64, mu2: f64, sigma2: f64) -> Result<f64> {
    let (mu, sigma) = canonical_pair(mu1, sigma1, mu2, sigma2)?;
    Ok(gamma_canonical(mu, sigma))
}

/// Abscissa where the two normal distribution functions cross (σ₁ ≠ σ₂).
pub fn cdf_crossing(mu1: f64, sigma1: f64, mu2: f64, sigma2: f64) -> Result<f64> {
    canonical_pair(mu1, sigma1, mu2, sigma2)?;
    if sigma1 == sigma2 {
        return Err(Error::Singular("equal scales: the distribution functions never cross".into()));
    }
    // (x − μ₁)/σ₁ = (x − μ₂)/σ₂
    Ok((mu1 * sigma2 - mu2 * sigma1) / (sigma2 - sigma1))
}
