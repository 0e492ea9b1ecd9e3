use crate::error::{ensure_positive, ensure_unit_open, Error, Result};
use crate::indices::{gamma_normal, pi_normal, IndexKind};

/// `index(N(0,1), N(mu, sigma²))`.
pub fn normal_index(kind: IndexKind, mu: f64, sigma: f64) -> Result<f64> {
    match kind {
        IndexKind::Pi => pi_normal(0.0, 1.0, mu, sigma),
        IndexKind::Gamma => gamma_normal(0.0, 1.0, mu, sigma),
    }
}

/// The mean μ with `index(N(0,1), N(μ, σ²)) = target`, by bisection.
///
/// Both indices decrease in μ, so the root is unique when it exists.
pub fn calibrated_mean(sigma: f64, target: f64, kind: IndexKind) -> Result<f64> {
    ensure_positive("sigma", sigma)?;
    ensure_unit_open("target", target)?;
    if kind == IndexKind::Gamma && sigma == 1.0 {
        return Err(Error::Domain("gamma only takes the values 0 and 1 when sigma = 1".into()));
    }
    let excess = |mu: f64| normal_index(kind, mu, sigma).map(|v| v - target);

    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while excess(lo)? <= 0.0 {
        lo *= 2.0;
        if lo < -1e6 {
            return Err(Error::Domain(format!("target {target} is not reachable for sigma={sigma}")));
        }
    }
    while excess(hi)? >= 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Domain(format!("target {target} is not reachable for sigma={sigma}")));
        }
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
