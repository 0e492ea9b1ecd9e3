use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A sorted sample with step-function CDF `F_n` and left-continuous quantile
/// `F_n⁻¹(t) = min{x : t ≤ F_n(x)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution<T> {
    values: Vec<T>,
    mean: T,
}

impl<T: Scalar> EmpiricalDistribution<T> {
    /// Builds from at least two finite values; ties are allowed.
    pub fn from_values(values: &[T]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Input(format!(
                "a sample needs at least 2 values, got {}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::Input(format!("non-finite value at position {pos}")));
        }
        let mut sorted = values.to_vec();
        sort_values(&mut sorted);
        Ok(Self::from_sorted_unchecked(sorted))
    }

    /// Wraps data that is already sorted and finite (resampling fast path).
    pub(crate) fn from_sorted_unchecked(values: Vec<T>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let total = values.iter().fold(T::zero(), |acc, &v| acc + v);
        let mean = total / T::from_count(values.len());
        Self { values, mean }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    /// Maximum-likelihood variance (divisor n).
    pub fn variance_ml(&self) -> T {
        let ss = self.values.iter().fold(T::zero(), |acc, &v| {
            let d = v - self.mean;
            acc + d * d
        });
        ss / T::from_count(self.values.len())
    }

    /// Number of observations `<= x`.
    pub fn count_le(&self, x: T) -> usize {
        self.values.partition_point(|&v| v <= x)
    }

    /// `F_n(x)`.
    pub fn cdf(&self, x: T) -> T {
        T::from_count(self.count_le(x)) / T::from_count(self.len())
    }

    /// `F_n⁻¹(t)`: the ⌈tn⌉-th order statistic, with `t = 0` mapped to the minimum.
    pub fn quantile(&self, t: T) -> T {
        let k = t.ceil_times(self.len()).clamp(1, self.len());
        self.values[k - 1]
    }

    /// Applies a strictly increasing map; the order is preserved.
    pub fn map_increasing<U: Scalar>(&self, f: impl Fn(T) -> U) -> EmpiricalDistribution<U> {
        EmpiricalDistribution::from_sorted_unchecked(self.values.iter().map(|&v| f(v)).collect())
    }
}

fn sort_values<T: Scalar>(values: &mut [T]) {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values are totally ordered"));
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn sorts_and_averages() {
        let e = EmpiricalDistribution::from_values(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(e.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(e.mean(), 2.0);
        assert_eq!(e.len(), 3);
    }

    #[test]
    fn ties_are_allowed() {
        let e = EmpiricalDistribution::from_values(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(e.mean(), 1.0);
        assert_eq!(e.variance_ml(), 0.0);
        assert_eq!(e.cdf(1.0), 1.0);
        assert_eq!(e.cdf(0.999), 0.0);
    }

    #[test]
    fn rejects_short_or_non_finite() {
        assert!(EmpiricalDistribution::<f64>::from_values(&[]).is_err());
        assert!(EmpiricalDistribution::from_values(&[1.0]).is_err());
        assert!(EmpiricalDistribution::from_values(&[1.0, f64::NAN]).is_err());
        assert!(EmpiricalDistribution::from_values(&[1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn quantile_uses_ceiling_convention() {
        let e = EmpiricalDistribution::from_values(&[4.0, 2.0, 1.0, 3.0]).unwrap();
        assert_eq!(e.quantile(0.5), 2.0);
        assert_eq!(e.quantile(0.25), 1.0);
        assert_eq!(e.quantile(0.26), 2.0);
        assert_eq!(e.quantile(1.0), 4.0);
        assert_eq!(e.quantile(0.0), 1.0);
    }

    #[test]
    fn quantile_is_constant_on_left_open_cells() {
        for n in 2..=20usize {
            let raw: Vec<Ratio<i64>> = (0..n as i64).map(|i| Ratio::from_integer((i * 7) % 11 + i)).collect();
            let e = EmpiricalDistribution::from_values(&raw).unwrap();
            for k in 1..=n {
                let expected = e.values()[k - 1];
                let lo = Ratio::new(k as i64 - 1, n as i64);
                let hi = Ratio::new(k as i64, n as i64);
                // a few interior points and the closed right end
                for j in 1..=5 {
                    let t = lo + (hi - lo) * Ratio::new(j, 5);
                    assert_eq!(e.quantile(t), expected, "n={n} k={k} t={t}");
                }
                if k > 1 {
                    assert_eq!(e.quantile(lo), e.values()[k - 2]);
                }
            }
            // the f64 path agrees at the same points
            let ef = e.map_increasing(|v| *v.numer() as f64 / *v.denom() as f64);
            for k in 1..=n {
                assert_eq!(ef.quantile(k as f64 / n as f64), ef.values()[k - 1]);
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let e = EmpiricalDistribution::from_values(&[0.5, -1.0, 2.0, 2.0, 7.0]).unwrap();
        for &t in &[0.01, 0.2, 0.21, 0.4, 0.6, 0.61, 0.8, 0.99, 1.0] {
            let q = e.quantile(t);
            assert!(t <= e.cdf(q));
            // q is the smallest sample point with that property
            for &v in e.values().iter().filter(|&&v| v < q) {
                assert!(t > e.cdf(v));
            }
        }
    }

    #[test]
    fn f32_samples_work() {
        let e = EmpiricalDistribution::from_values(&[2.0f32, 1.0, 4.0, 3.0]).unwrap();
        assert_eq!(e.mean(), 2.5);
        assert_eq!(e.quantile(0.5), 2.0);
    }
}
