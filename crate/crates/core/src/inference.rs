//! One-sided tests of `H₀: index ≥ δ₀` against `H₁: index < δ₀` and the dual
//! upper confidence bounds.
//!
//! Every procedure has the same shape: with `k = √(nm/(n+m))`, reject when
//! `k·(estimate − δ₀) < σ·Φ⁻¹(α)`; the bound is `estimate − σ·Φ⁻¹(α)/k`,
//! so the test rejects exactly when the bound falls below `δ₀`. Procedures
//! differ only in the estimate and in σ:
//!
//! | method           | estimate                    | σ                                |
//! |------------------|-----------------------------|----------------------------------|
//! | least favorable  | `π(F_n, G_m)`               | `√(¼ − δ₀²λ(1−λ))`               |
//! | bootstrap, π     | bias-corrected `π(F_n,G_m)` | bootstrap SE                     |
//! | bootstrap, γ     | `γ̂_{n,m}`                   | bootstrap SE                     |
//! | plug-in normal   | bias-corrected closed form  | parametric-bootstrap SE          |

use serde::{Deserialize, Serialize};

use crate::bootstrap::{boot_stat, IndexStatistic, Scheme, DEFAULT_REPLICATES, MIN_REPLICATES};
use crate::distributions::{std_normal_quantile, ContinuousModel, RngStream};
use crate::error::{ensure_unit_open, Error, Result};
use crate::indices::{gamma_empirical, pi_empirical, IndexKind};
use crate::Empirical;

/// Lower bound applied to bootstrap standard errors.
pub const SIGMA_FLOOR: f64 = 1e-6;

/// Relative variance gap under which the nonparametric γ test is flagged.
pub const GAMMA_VARIANCE_FLAG: f64 = 0.05;

/// Relative scale gap under which the plug-in γ test is flagged.
pub const PLUGIN_SCALE_FLAG: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    LeastFavorable,
    Bootstrap,
    PluginNormal,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lf" | "least-favorable" => Ok(Method::LeastFavorable),
            "boot" | "bootstrap" => Ok(Method::Bootstrap),
            "plugin" | "plugin-normal" => Ok(Method::PluginNormal),
            other => Err(Error::Config(format!("unknown method '{other}' (expected lf|boot|plugin)"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::LeastFavorable => "lf",
            Method::Bootstrap => "boot",
            Method::PluginNormal => "plugin",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestSpec {
    pub index: IndexKind,
    /// Null boundary, π₀ or γ₀.
    pub delta0: f64,
    pub alpha: f64,
    pub method: Method,
    /// Bootstrap replicates.
    pub replicates: usize,
    /// Apply the bootstrap bias correction to γ̂ as well (off by default).
    pub bias_correct_gamma: bool,
}

impl TestSpec {
    pub fn new(index: IndexKind, delta0: f64, alpha: f64, method: Method) -> Result<Self> {
        let spec = Self {
            index,
            delta0,
            alpha,
            method,
            replicates: DEFAULT_REPLICATES,
            bias_correct_gamma: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_replicates(mut self, replicates: usize) -> Result<Self> {
        self.replicates = replicates;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_unit_open("delta0", self.delta0)?;
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::Domain(format!("alpha must lie in (0, 0.5), got {}", self.alpha)));
        }
        if self.method == Method::LeastFavorable && self.index == IndexKind::Gamma {
            return Err(Error::Config(
                "the least-favorable test is only defined for the pi index".into(),
            ));
        }
        if self.method != Method::LeastFavorable && self.replicates < MIN_REPLICATES {
            return Err(Error::Config(format!(
                "at least {MIN_REPLICATES} bootstrap replicates are required, got {}",
                self.replicates
            )));
        }
        Ok(())
    }

    fn expect(&self, index: Option<IndexKind>, method: Method) -> Result<()> {
        self.validate()?;
        if self.method != method || index.is_some_and(|i| i != self.index) {
            return Err(Error::Config(format!(
                "procedure does not match spec (index {}, method {})",
                self.index, self.method
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub index: IndexKind,
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub delta0: f64,
    pub alpha: f64,
    pub estimate_raw: f64,
    pub estimate_used: f64,
    pub sigma_used: f64,
    /// `√(nm/(n+m))·(estimate_used − δ₀)`.
    pub statistic: f64,
    /// `sigma_used·Φ⁻¹(α)`.
    pub critical: f64,
    pub reject: bool,
    /// Upper confidence bound at level `1 − α`.
    pub upper_bound: f64,
    /// `n/(n+m)`.
    pub lambda_nm: f64,
    pub degeneracy_flag: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Sigma {
    LeastFavorable,
    Fixed(f64),
}

/// Everything a test needs that does not depend on `(δ₀, α)`.
///
/// Fitting once and deciding at several boundaries gives exactly the
/// reports that separate calls with the same stream would.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFit {
    index: IndexKind,
    method: Method,
    n: usize,
    m: usize,
    estimate_raw: f64,
    estimate_used: f64,
    sigma: Sigma,
    degenerate: bool,
}

impl TestFit {
    pub fn estimate_used(&self) -> f64 {
        self.estimate_used
    }

    pub fn decide(&self, delta0: f64, alpha: f64) -> Result<TestReport> {
        ensure_unit_open("delta0", delta0)?;
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(Error::Domain(format!("alpha must lie in (0, 0.5), got {alpha}")));
        }
        let (n, m) = (self.n as f64, self.m as f64);
        let lambda_nm = n / (n + m);
        let sigma_used = match self.sigma {
            Sigma::LeastFavorable => least_favorable_sd(delta0, lambda_nm)?,
            Sigma::Fixed(s) => s,
        };
        let root = (n * m / (n + m)).sqrt();
        let z = std_normal_quantile(alpha)?;
        let statistic = root * (self.estimate_used - delta0);
        let critical = sigma_used * z;
        Ok(TestReport {
            index: self.index,
            method: self.method,
            n: self.n,
            m: self.m,
            delta0,
            alpha,
            estimate_raw: self.estimate_raw,
            estimate_used: self.estimate_used,
            sigma_used,
            statistic,
            critical,
            reject: statistic < critical,
            upper_bound: (self.estimate_used - sigma_used * z / root).min(1.0),
            lambda_nm,
            degeneracy_flag: self.degenerate,
        })
    }
}

/// `σ̄_π(λ) = √(¼ − π²λ(1−λ))`, the least-favorable limit scale.
pub fn least_favorable_sd(pi0: f64, lambda_nm: f64) -> Result<f64> {
    ensure_unit_open("pi0", pi0)?;
    ensure_unit_open("lambda", lambda_nm)?;
    // λπ ≤ ½ and (1−λ)π ≤ ½ hold on the open unit square
    Ok((0.25 - pi0 * pi0 * lambda_nm * (1.0 - lambda_nm)).sqrt())
}

/// Fits whichever procedure `spec` names.
pub fn fit_test(stream: RngStream, x: &Empirical, y: &Empirical, spec: &TestSpec) -> Result<TestFit> {
    spec.validate()?;
    let (n, m) = (x.len(), y.len());
    match (spec.method, spec.index) {
        (Method::LeastFavorable, _) => Ok(TestFit {
            index: IndexKind::Pi,
            method: Method::LeastFavorable,
            n,
            m,
            estimate_raw: pi_empirical(x, y),
            estimate_used: pi_empirical(x, y),
            sigma: Sigma::LeastFavorable,
            degenerate: false,
        }),
        (Method::Bootstrap, IndexKind::Pi) => {
            let boot = boot_stat(stream, x, y, &IndexStatistic::Pi, spec.replicates, Scheme::Nonparametric)?;
            Ok(TestFit {
                index: IndexKind::Pi,
                method: Method::Bootstrap,
                n,
                m,
                estimate_raw: boot.raw_estimate,
                estimate_used: boot.bias_corrected,
                sigma: Sigma::Fixed(boot.boot_se.max(SIGMA_FLOOR)),
                degenerate: false,
            })
        }
        (Method::Bootstrap, IndexKind::Gamma) => {
            let curve = gamma_empirical(x, y);
            let boot = boot_stat(stream, x, y, &IndexStatistic::GammaHat, spec.replicates, Scheme::Nonparametric)?;
            let (vx, vy) = (x.variance_ml(), y.variance_ml());
            let close_variances = vx > 0.0 && (vy / vx - 1.0).abs() < GAMMA_VARIANCE_FLAG;
            Ok(TestFit {
                index: IndexKind::Gamma,
                method: Method::Bootstrap,
                n,
                m,
                estimate_raw: curve.gamma_hat,
                estimate_used: if spec.bias_correct_gamma {
                    boot.bias_corrected
                } else {
                    curve.gamma_hat
                },
                sigma: Sigma::Fixed(boot.boot_se.max(SIGMA_FLOOR)),
                degenerate: curve.degenerate || close_variances,
            })
        }
        (Method::PluginNormal, index) => {
            let (sx, sy) = (x.variance_ml().sqrt(), y.variance_ml().sqrt());
            if !(sx > 0.0 && sy > 0.0) {
                return Err(Error::Degenerate("plug-in fit needs positive sample variances".into()));
            }
            let stat = match index {
                IndexKind::Pi => IndexStatistic::PluginPi,
                IndexKind::Gamma => IndexStatistic::PluginGamma,
            };
            let boot = boot_stat(stream, x, y, &stat, spec.replicates, Scheme::ParametricNormal)?;
            Ok(TestFit {
                index,
                method: Method::PluginNormal,
                n,
                m,
                estimate_raw: boot.raw_estimate,
                estimate_used: boot.bias_corrected,
                sigma: Sigma::Fixed(boot.boot_se.max(SIGMA_FLOOR)),
                degenerate: index == IndexKind::Gamma && ((sx - sy) / sx).abs() < PLUGIN_SCALE_FLAG,
            })
        }
    }
}

/// Runs whichever procedure `spec` names.
pub fn run_test(stream: RngStream, x: &Empirical, y: &Empirical, spec: &TestSpec) -> Result<TestReport> {
    fit_test(stream, x, y, spec)?.decide(spec.delta0, spec.alpha)
}

/// Least-favorable π test: conservative, needs no resampling.
pub fn test_pi_least_favorable(x: &Empirical, y: &Empirical, spec: &TestSpec) -> Result<TestReport> {
    spec.expect(Some(IndexKind::Pi), Method::LeastFavorable)?;
    // the stream is never consumed
    run_test(RngStream::new(0, 0), x, y, spec)
}

/// Bootstrap bias-corrected π test with bootstrap standard error.
pub fn test_pi_bootstrap(stream: RngStream, x: &Empirical, y: &Empirical, spec: &TestSpec) -> Result<TestReport> {
    spec.expect(Some(IndexKind::Pi), Method::Bootstrap)?;
    run_test(stream, x, y, spec)
}

/// γ test built on the ψ-curve estimate and its bootstrap standard error.
pub fn test_gamma(stream: RngStream, x: &Empirical, y: &Empirical, spec: &TestSpec) -> Result<TestReport> {
    spec.expect(Some(IndexKind::Gamma), Method::Bootstrap)?;
    run_test(stream, x, y, spec)
}

/// Normal-model plug-in test for either index.
pub fn test_plugin_normal(stream: RngStream, x: &Empirical, y: &Empirical, spec: &TestSpec) -> Result<TestReport> {
    spec.expect(None, Method::PluginNormal)?;
    run_test(stream, x, y, spec)
}

/// Asymptotic standard deviation of `√(nm/(n+m))·(γ̂ − γ)`:
///
/// `σ² = γ*(1−γ*)·[(1−λ)g²(x*) + λf²(x*)] / (g(x*) − f(x*))²`
///
/// where `x*` is the crossing point of the distribution functions and
/// `γ* = F(x*) = G(x*)`.
pub fn gamma_asymptotic_sd<F, G>(f: &F, g: &G, crossing_x: f64, gamma_star: f64, lambda: f64) -> Result<f64>
where
    F: ContinuousModel + ?Sized,
    G: ContinuousModel + ?Sized,
{
    ensure_unit_open("lambda", lambda)?;
    if !(0.0..=1.0).contains(&gamma_star) {
        return Err(Error::Domain(format!("gamma_star must lie in [0, 1], got {gamma_star}")));
    }
    let (fd, gd) = (f.density(crossing_x), g.density(crossing_x));
    let gap = gd - fd;
    if gap.abs() <= 1e-12 * fd.max(gd) || gap == 0.0 {
        return Err(Error::Singular(format!(
            "densities coincide at the crossing point x*={crossing_x}"
        )));
    }
    let var = gamma_star * (1.0 - gamma_star) * ((1.0 - lambda) * gd * gd + lambda * fd * fd) / (gap * gap);
    Ok(var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{sample_normal, Normal};
    use crate::indices::cdf_crossing;

    fn emp(v: &[f64]) -> Empirical {
        Empirical::from_values(v).unwrap()
    }

    fn normal_pair(seed: u64, n: usize, mu: f64, sigma: f64) -> (Empirical, Empirical) {
        let s = RngStream::new(seed, 0);
        let x = sample_normal(s.substream(0), 0.0, 1.0, n).unwrap();
        let y = sample_normal(s.substream(1), mu, sigma, n).unwrap();
        (emp(&x), emp(&y))
    }

    #[test]
    fn least_favorable_scale() {
        assert!((least_favorable_sd(1e-9, 0.3).unwrap() - 0.5).abs() < 1e-12);
        let s = least_favorable_sd(0.05, 0.5).unwrap();
        assert!((s - (0.25f64 - 0.000625).sqrt()).abs() < 1e-15);
        assert!((s - 0.499374609).abs() < 1e-9);
        assert_eq!(least_favorable_sd(0.2, 0.3).unwrap(), least_favorable_sd(0.2, 0.7).unwrap());
        assert!(least_favorable_sd(0.0, 0.5).is_err());
        assert!(least_favorable_sd(0.1, 1.0).is_err());
    }

    #[test]
    fn least_favorable_rejection_region() {
        // reject iff pi_hat < 0.05 - 0.499375 * 1.644854 / sqrt(500)
        let threshold = 0.05 - least_favorable_sd(0.05, 0.5).unwrap() * 1.6448536269514722 / 500f64.sqrt();
        assert!((threshold - 0.013268).abs() < 1e-5);
        let spec = TestSpec::new(IndexKind::Pi, 0.05, 0.05, Method::LeastFavorable).unwrap();
        let fit = |est: f64| TestFit {
            index: IndexKind::Pi,
            method: Method::LeastFavorable,
            n: 1000,
            m: 1000,
            estimate_raw: est,
            estimate_used: est,
            sigma: Sigma::LeastFavorable,
            degenerate: false,
        };
        assert!(fit(threshold - 1e-9).decide(spec.delta0, spec.alpha).unwrap().reject);
        assert!(!fit(threshold + 1e-9).decide(spec.delta0, spec.alpha).unwrap().reject);
        let at_boundary = fit(0.05).decide(0.05, 0.05).unwrap();
        assert_eq!(at_boundary.statistic, 0.0);
        assert!(!at_boundary.reject);
    }

    #[test]
    fn least_favorable_on_equal_laws_is_sane() {
        // π = 0 lies in the alternative, so this is power, not level. With
        // c = √500·0.013268 the one-sided KS limit gives P(√k·π̂ < c) = 1 − e^(−2c²).
        let spec = TestSpec::new(IndexKind::Pi, 0.05, 0.05, Method::LeastFavorable).unwrap();
        let reps = 1000;
        let rejections = (0..reps)
            .filter(|&r| {
                let (x, y) = normal_pair(500 + r, 1000, 0.0, 1.0);
                test_pi_least_favorable(&x, &y, &spec).unwrap().reject
            })
            .count();
        let c = 500f64.sqrt() * (0.05 - least_favorable_sd(0.05, 0.5).unwrap() * 1.6448536269514722 / 500f64.sqrt());
        let limit = 1.0 - (-2.0 * c * c).exp();
        let rate = rejections as f64 / reps as f64;
        assert!((rate - limit).abs() <= 0.04, "rate {rate} vs limit {limit}");
    }

    #[test]
    fn spec_validation() {
        assert!(TestSpec::new(IndexKind::Gamma, 0.05, 0.05, Method::LeastFavorable).is_err());
        assert!(TestSpec::new(IndexKind::Pi, 0.0, 0.05, Method::Bootstrap).is_err());
        assert!(TestSpec::new(IndexKind::Pi, 0.05, 0.5, Method::Bootstrap).is_err());
        let s = TestSpec::new(IndexKind::Pi, 0.05, 0.05, Method::Bootstrap).unwrap();
        assert!(s.with_replicates(10).is_err());
        let (x, y) = normal_pair(1, 50, 0.0, 1.0);
        assert!(test_gamma(RngStream::new(0, 0), &x, &y, &s).is_err());
        assert_eq!("lf".parse::<Method>().unwrap(), Method::LeastFavorable);
        assert_eq!("plugin-normal".parse::<Method>().unwrap(), Method::PluginNormal);
    }

    #[test]
    fn identical_constant_samples_reject() {
        let x = emp(&vec![3.0; 2000]);
        let spec = TestSpec::new(IndexKind::Pi, 0.05, 0.05, Method::Bootstrap).unwrap();
        let r = test_pi_bootstrap(RngStream::new(4, 4), &x, &x, &spec).unwrap();
        assert_eq!(r.estimate_used, 0.0);
        assert_eq!(r.sigma_used, SIGMA_FLOOR);
        assert!(r.reject);
        assert!(r.upper_bound < 0.05);
    }

    #[test]
    fn gamma_at_boundary_does_not_reject() {
        let (x, y) = normal_pair(3, 300, 0.337, 1.5);
        let base = TestSpec::new(IndexKind::Gamma, 0.3, 0.05, Method::Bootstrap).unwrap();
        let fit = fit_test(RngStream::new(1, 1), &x, &y, &base).unwrap();
        let r = fit.decide(fit.estimate_used(), 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(!r.reject);
    }

    #[test]
    fn reports_are_dual_and_bounds_dominate() {
        for seed in 0..20 {
            let (x, y) = normal_pair(seed, 200, 0.3, 1.4);
            for (index, method) in [
                (IndexKind::Pi, Method::LeastFavorable),
                (IndexKind::Pi, Method::Bootstrap),
                (IndexKind::Gamma, Method::Bootstrap),
                (IndexKind::Pi, Method::PluginNormal),
                (IndexKind::Gamma, Method::PluginNormal),
            ] {
                let spec = TestSpec::new(index, 0.02 + 0.01 * seed as f64, 0.05, method)
                    .unwrap()
                    .with_replicates(60)
                    .unwrap();
                let r = run_test(RngStream::new(seed, 9), &x, &y, &spec).unwrap();
                assert_eq!(r.reject, r.upper_bound < r.delta0);
                assert!(r.upper_bound >= r.estimate_used.min(1.0));
                assert!(r.upper_bound <= 1.0);
            }
        }
    }

    #[test]
    fn rejection_is_monotone_in_delta0() {
        let (x, y) = normal_pair(21, 400, 0.4, 0.8);
        for method in [Method::LeastFavorable, Method::Bootstrap] {
            let spec = TestSpec::new(IndexKind::Pi, 0.05, 0.05, method).unwrap().with_replicates(100).unwrap();
            let fit = fit_test(RngStream::new(2, 0), &x, &y, &spec).unwrap();
            let mut rejected = false;
            for k in 1..200 {
                let r = fit.decide(k as f64 / 200.0, 0.05).unwrap();
                if rejected {
                    assert!(r.reject, "{method:?} at {}", r.delta0);
                }
                rejected |= r.reject;
            }
            assert!(rejected);
        }
    }

    #[test]
    fn plugin_estimate_is_the_closed_form_at_the_fit() {
        let (x, y) = normal_pair(8, 500, 0.287, 1.5);
        let spec = TestSpec::new(IndexKind::Pi, 0.05, 0.05, Method::PluginNormal).unwrap().with_replicates(50).unwrap();
        let r = test_plugin_normal(RngStream::new(0, 1), &x, &y, &spec).unwrap();
        let direct = crate::indices::pi_normal(x.mean(), x.variance_ml().sqrt(), y.mean(), y.variance_ml().sqrt()).unwrap();
        assert_eq!(r.estimate_raw, direct);
    }

    #[test]
    fn plugin_errors_and_flags() {
        let flat = emp(&[1.0, 1.0, 1.0, 1.0]);
        let (x, _) = normal_pair(2, 100, 0.0, 1.0);
        let spec = TestSpec::new(IndexKind::Pi, 0.05, 0.05, Method::PluginNormal).unwrap();
        assert!(matches!(test_plugin_normal(RngStream::new(0, 0), &flat, &x, &spec), Err(Error::Degenerate(_))));
        let shifted = x.map_increasing(|v| v + 0.5);
        let gspec = TestSpec::new(IndexKind::Gamma, 0.05, 0.05, Method::PluginNormal).unwrap();
        assert!(test_plugin_normal(RngStream::new(0, 0), &x, &shifted, &gspec).unwrap().degeneracy_flag);
    }

    #[test]
    fn gamma_flags_close_variances() {
        let (x, _) = normal_pair(5, 300, 0.0, 1.0);
        let y = x.map_increasing(|v| 1.01 * v + 0.2);
        let spec = TestSpec::new(IndexKind::Gamma, 0.05, 0.05, Method::Bootstrap).unwrap();
        assert!(test_gamma(RngStream::new(0, 0), &x, &y, &spec).unwrap().degeneracy_flag);
    }

    #[test]
    fn asymptotic_sd_formula() {
        let f = Normal::normal(0.0, 1.0).unwrap();
        let g = Normal::normal(1.0, 6f64.sqrt()).unwrap();
        let xs = cdf_crossing(0.0, 1.0, 1.0, 6f64.sqrt()).unwrap();
        assert_eq!(gamma_asymptotic_sd(&f, &g, xs, 0.0, 0.5).unwrap(), 0.0);
        let gs = f.cdf(xs);
        let (fd, gd) = (f.density(xs), g.density(xs));
        let expect = (gs * (1.0 - gs) * 0.5 * (fd * fd + gd * gd)).sqrt() / (gd - fd).abs();
        assert!((gamma_asymptotic_sd(&f, &g, xs, gs, 0.5).unwrap() - expect).abs() < 1e-14);
        // at λ = ½ and γ* = ½ the formula is symmetric in (f, g)
        let a = gamma_asymptotic_sd(&f, &g, xs, 0.5, 0.5).unwrap();
        let b = gamma_asymptotic_sd(&g, &f, xs, 0.5, 0.5).unwrap();
        assert!((a - b).abs() < 1e-14);
        assert!(matches!(gamma_asymptotic_sd(&f, &f, 0.3, 0.4, 0.5), Err(Error::Singular(_))));
    }
}
