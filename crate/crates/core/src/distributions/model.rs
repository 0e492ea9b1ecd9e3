use rand::{Rng, RngCore};
use rand_distr::StandardNormal as ZigguratNormal;
use serde::{Deserialize, Serialize};

use super::normal::{inverse_cdf, std_normal_cdf, std_normal_pdf};
use crate::error::{ensure_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    StandardNormal,
    LocationScale,
    Other,
}

/// A continuous univariate law.
///
/// `quantile` is only called with probabilities strictly inside (0, 1).
pub trait ContinuousModel: Send + Sync {
    fn cdf(&self, x: f64) -> f64;
    fn quantile(&self, p: f64) -> f64;
    fn density(&self, x: f64) -> f64;

    fn kind(&self) -> ModelKind {
        ModelKind::Other
    }

    /// One draw; the default is inversion of a uniform on (0, 1).
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let u: f64 = rng.random();
        // random() is in [0, 1); shift into the open interval
        self.quantile(u.max(f64::MIN_POSITIVE))
    }
}

impl<M: ContinuousModel + ?Sized> ContinuousModel for &M {
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn quantile(&self, p: f64) -> f64 {
        (**self).quantile(p)
    }
    fn density(&self, x: f64) -> f64 {
        (**self).density(x)
    }
    fn kind(&self) -> ModelKind {
        (**self).kind()
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        (**self).sample(rng)
    }
}

/// Φ, the N(0, 1) law.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StandardNormal;

impl ContinuousModel for StandardNormal {
    fn cdf(&self, x: f64) -> f64 {
        std_normal_cdf(x)
    }

    fn quantile(&self, p: f64) -> f64 {
        inverse_cdf(p)
    }

    fn density(&self, x: f64) -> f64 {
        std_normal_pdf(x)
    }

    fn kind(&self) -> ModelKind {
        ModelKind::StandardNormal
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        rng.sample(ZigguratNormal)
    }
}

/// `F(x) = F₀((x − θ)/λ)` over a continuous, strictly increasing reference `F₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocationScale<M> {
    location: f64,
    scale: f64,
    reference: M,
}

/// N(μ, σ²).
pub type Normal = LocationScale<StandardNormal>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluate {
    Cdf,
    Quantile,
    Density,
}

impl<M: ContinuousModel> LocationScale<M> {
    pub fn new(location: f64, scale: f64, reference: M) -> Result<Self> {
        if !location.is_finite() {
            return Err(Error::Domain(format!("location must be finite, got {location}")));
        }
        ensure_positive("scale", scale)?;
        Ok(Self {
            location,
            scale,
            reference,
        })
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn reference(&self) -> &M {
        &self.reference
    }

    /// Evaluates the CDF, quantile or density at `arg`.
    pub fn eval(&self, what: Evaluate, arg: f64) -> Result<f64> {
        match what {
            Evaluate::Cdf => Ok(self.cdf(arg)),
            Evaluate::Density => Ok(self.density(arg)),
            Evaluate::Quantile => {
                if arg > 0.0 && arg < 1.0 {
                    Ok(self.quantile(arg))
                } else {
                    Err(Error::Domain(format!("quantile needs p in (0, 1), got {arg}")))
                }
            }
        }
    }
}

impl LocationScale<StandardNormal> {
    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Self::new(mean, sd, StandardNormal)
    }
}

impl<M: ContinuousModel> ContinuousModel for LocationScale<M> {
    fn cdf(&self, x: f64) -> f64 {
        self.reference.cdf((x - self.location) / self.scale)
    }

    fn quantile(&self, p: f64) -> f64 {
        self.scale * self.reference.quantile(p) + self.location
    }

    fn density(&self, x: f64) -> f64 {
        self.reference.density((x - self.location) / self.scale) / self.scale
    }

    fn kind(&self) -> ModelKind {
        ModelKind::LocationScale
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        self.location + self.scale * self.reference.sample(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_parameters_leave_reference_unchanged() {
        let m = Normal::normal(0.0, 1.0).unwrap();
        for &x in &[-3.0, -0.4, 0.0, 1.2, 5.0] {
            assert_eq!(m.cdf(x), StandardNormal.cdf(x));
            assert_eq!(m.density(x), StandardNormal.density(x));
        }
        for &p in &[0.01, 0.3, 0.5, 0.99] {
            assert_eq!(m.quantile(p), StandardNormal.quantile(p));
        }
    }

    #[test]
    fn median_sits_at_location() {
        let m = Normal::normal(1.0, 2.0).unwrap();
        assert_eq!(m.eval(Evaluate::Cdf, 1.0).unwrap(), 0.5);
        let q = m.eval(Evaluate::Quantile, 0.975).unwrap();
        assert!((q - (1.0 + 2.0 * 1.959963984540054)).abs() < 1e-6);
        assert!(m.eval(Evaluate::Quantile, 1.0).is_err());
    }

    #[test]
    fn rejects_nonpositive_scale() {
        assert!(Normal::normal(0.0, 0.0).is_err());
        assert!(Normal::normal(0.0, -1.0).is_err());
        assert!(Normal::normal(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn quantile_identity_on_grid() {
        let m = Normal::normal(-0.7, 3.1).unwrap();
        for k in 1..200 {
            let y = k as f64 / 200.0;
            let expected = 3.1 * StandardNormal.quantile(y) - 0.7;
            assert!((m.quantile(y) - expected).abs() <= 1e-9);
        }
    }

    #[test]
    fn density_integrates_to_one() {
        let m = Normal::normal(2.0, 0.5).unwrap();
        let h = 1e-3;
        let total: f64 = (0..8000).map(|i| m.density(-2.0 + (i as f64 + 0.5) * h) * h).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn composed_reparametrisation() {
        let inner = Normal::normal(0.3, 1.7).unwrap();
        let outer = LocationScale::new(-1.1, 0.6, inner).unwrap();
        let flat = Normal::normal(-1.1 + 0.6 * 0.3, 0.6 * 1.7).unwrap();
        for k in 0..=100 {
            let x = -6.0 + 0.12 * k as f64;
            assert!((outer.cdf(x) - flat.cdf(x)).abs() <= 1e-12);
            assert!((outer.density(x) - flat.density(x)).abs() <= 1e-12);
        }
        for k in 1..100 {
            let p = k as f64 / 100.0;
            assert!((outer.quantile(p) - flat.quantile(p)).abs() <= 1e-12);
        }
    }

    #[test]
    fn default_sampler_inverts_uniforms() {
        struct Uniform01;
        impl ContinuousModel for Uniform01 {
            fn cdf(&self, x: f64) -> f64 {
                x.clamp(0.0, 1.0)
            }
            fn quantile(&self, p: f64) -> f64 {
                p
            }
            fn density(&self, x: f64) -> f64 {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mean: f64 = (0..20_000).map(|_| Uniform01.sample(&mut rng)).sum::<f64>() / 20_000.0;
        assert!((mean - 0.5).abs() < 0.01);
        assert_eq!(Uniform01.kind(), ModelKind::Other);
    }
}
