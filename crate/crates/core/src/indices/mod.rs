//! The contamination index π and the crossing-mass index γ.
//!
//! `π(F,G) = sup_x (G(x) − F(x))` is the smallest mixing weight that makes
//! `F` and `G` contaminated versions of two stochastically ordered laws
//! (trimming interpretation). `γ(F,G) = ℓ{t : F⁻¹(t) > G⁻¹(t)}` is the share of
//! quantile levels where `G` falls short of `F` (Winsorizing interpretation).
//! Both vanish exactly when `F ≤st G`, and `π ≤ γ` always holds.

mod empirical;
mod normal;
mod oracle;

use serde::Serialize;

pub use empirical::{gamma_empirical, pi_empirical, PsiCurve};
pub use normal::{canonical_pair, cdf_crossing, density_crossings, gamma_normal, pi_normal};
pub use oracle::{gamma_population_oracle, pi_population_oracle};

use crate::error::{Error, Result};

/// Which index a procedure targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Pi,
    Gamma,
}

impl std::fmt::Display for IndexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            IndexKind::Pi => "pi",
            IndexKind::Gamma => "gamma",
        })
    }
}

impl std::str::FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(IndexKind::Pi),
            "gamma" => Ok(IndexKind::Gamma),
            other => Err(Error::Config(format!("unknown index '{other}' (expected pi|gamma)"))),
        }
    }
}

/// A pair `(π, γ)` with `0 ≤ π ≤ γ ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceIndices {
    pub pi: f64,
    pub gamma: f64,
}

impl DominanceIndices {
    pub fn new(pi: f64, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&pi) || !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("indices must lie in [0, 1]: pi={pi}, gamma={gamma}")));
        }
        if pi > gamma + 1e-9 {
            return Err(Error::Domain(format!("pi={pi} exceeds gamma={gamma}")));
        }
        Ok(Self { pi, gamma })
    }

    /// Both indices of `N(μ₂,σ₂²)` against `N(μ₁,σ₁²)`.
    pub fn normal(mu1: f64, sigma1: f64, mu2: f64, sigma2: f64) -> Result<Self> {
        Self::new(
            pi_normal(mu1, sigma1, mu2, sigma2)?,
            gamma_normal(mu1, sigma1, mu2, sigma2)?,
        )
    }

    pub fn is_stochastically_ordered(&self) -> bool {
        self.pi == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_enforced() {
        assert!(DominanceIndices::new(0.2, 0.1).is_err());
        assert!(DominanceIndices::new(-0.1, 0.1).is_err());
        let d = DominanceIndices::normal(0.0, 1.0, 0.337, 1.5).unwrap();
        assert!(d.pi <= d.gamma);
        assert!(!d.is_stochastically_ordered());
        assert!(DominanceIndices::normal(0.0, 1.0, 1.0, 1.0).unwrap().is_stochastically_ordered());
    }

    #[test]
    fn index_kind_parses() {
        assert_eq!("pi".parse::<IndexKind>().unwrap(), IndexKind::Pi);
        assert_eq!("gamma".parse::<IndexKind>().unwrap(), IndexKind::Gamma);
        assert!("alpha".parse::<IndexKind>().is_err());
    }
}
