//! Exact estimators over the sample step functions.

use serde::Serialize;

use crate::distributions::EmpiricalDistribution;
use crate::scalar::Scalar;

/// `sup_x (G_m(x) − F_n(x))`, the one-sided Kolmogorov–Smirnov statistic.
///
/// Both step functions are right-continuous and vanish at −∞, so the
/// supremum is attained at a pooled jump point or equals 0. Candidates are
/// compared as integers (`j·n − i·m`), so the argmax does not depend on `T`.
pub fn pi_empirical<T: Scalar>(x: &EmpiricalDistribution<T>, y: &EmpiricalDistribution<T>) -> T {
    let (xs, ys) = (x.values(), y.values());
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut best: i128 = 0;
    let mut best_at = (0usize, 0usize);
    // once y is exhausted G_m = 1 and the difference can only fall
    while j < m {
        let v = if i < n && xs[i] < ys[j] { xs[i] } else { ys[j] };
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        let score = j as i128 * n as i128 - i as i128 * m as i128;
        if score > best {
            best = score;
            best_at = (i, j);
        }
    }
    if best <= 0 {
        T::zero()
    } else {
        T::from_count(best_at.1) / T::from_count(m) - T::from_count(best_at.0) / T::from_count(n)
    }
}

/// The empirical ψ curve
/// `ψ_{n,m}(γ) = 2∫₀^γ (F_n⁻¹ − G_m⁻¹) − (X̄_n − Ȳ_m)` sampled at its breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiCurve<T> {
    /// `{0} ∪ {i/n} ∪ {j/m}`, ascending, ending at 1.
    pub breakpoints: Vec<T>,
    /// ψ at each breakpoint; ψ is affine in between.
    pub values: Vec<T>,
    /// Smallest breakpoint attaining `max |ψ|`.
    pub gamma_star: T,
    pub psi_at_star: T,
    /// `γ*` when `ψ(γ*) ≥ 0`, else `1 − γ*`.
    pub gamma_hat: T,
    /// Lebesgue measure of `{t : F_n⁻¹(t) > G_m⁻¹(t)}`.
    pub crossing_mass: T,
    /// ψ vanishes identically (e.g. equal samples); `gamma_hat` is then 0.
    pub degenerate: bool,
}

impl<T: Scalar> PsiCurve<T> {
    pub fn psi_start(&self) -> T {
        self.values[0]
    }

    pub fn psi_end(&self) -> T {
        *self.values.last().expect("curve has at least two points")
    }

    pub fn max_abs(&self) -> T {
        self.psi_at_star.abs_value()
    }
}

/// Builds the ψ curve and the crossing-point estimate `γ̂_{n,m}`.
pub fn gamma_empirical<T: Scalar>(
    x: &EmpiricalDistribution<T>,
    y: &EmpiricalDistribution<T>,
) -> PsiCurve<T> {
    let (xs, ys) = (x.values(), y.values());
    let (n, m) = (xs.len(), ys.len());
    let two = T::one() + T::one();

    let mut breakpoints = Vec::with_capacity(n + m + 1);
    let mut values = Vec::with_capacity(n + m + 1);
    let mut psi = T::zero() - (x.mean() - y.mean());
    let mut t = T::zero();
    let mut crossing_mass = T::zero();
    breakpoints.push(t);
    values.push(psi);

    // on (t, next] the quantiles are xs[i] and ys[j]
    let (mut i, mut j) = (0usize, 0usize);
    while i < n && j < m {
        let x_edge = (i as u128 + 1) * m as u128;
        let y_edge = (j as u128 + 1) * n as u128;
        let next = if x_edge <= y_edge {
            T::from_count(i + 1) / T::from_count(n)
        } else {
            T::from_count(j + 1) / T::from_count(m)
        };
        let width = next - t;
        let gap = xs[i] - ys[j];
        psi = psi + two * gap * width;
        if gap > T::zero() {
            crossing_mass = crossing_mass + width;
        }
        t = next;
        breakpoints.push(t);
        values.push(psi);
        if x_edge <= y_edge {
            i += 1;
        }
        if y_edge <= x_edge {
            j += 1;
        }
    }

    let max_abs = values
        .iter()
        .map(|v| v.abs_value())
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let tol = T::tie_tolerance();
    let degenerate = max_abs <= tol;
    let (gamma_star, psi_at_star) = if degenerate {
        (T::zero(), values[0])
    } else {
        let k = values
            .iter()
            .position(|v| v.abs_value() >= max_abs - tol)
            .expect("maximum is attained");
        (breakpoints[k], values[k])
    };
    let gamma_hat = if degenerate {
        T::zero()
    } else if psi_at_star >= T::zero() {
        gamma_star
    } else {
        T::one() - gamma_star
    };

    PsiCurve {
        breakpoints,
        values,
        gamma_star,
        psi_at_star,
        gamma_hat,
        crossing_mass,
        degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Empirical, Exact, ExactEmpirical};
    use num_rational::Ratio;

    fn emp(v: &[f64]) -> Empirical {
        Empirical::from_values(v).unwrap()
    }

    fn exact(v: &[i64]) -> ExactEmpirical {
        let r: Vec<Exact> = v.iter().map(|&a| Ratio::from_integer(a as i128)).collect();
        ExactEmpirical::from_values(&r).unwrap()
    }

    #[test]
    fn pi_of_identical_samples_is_zero() {
        let x = emp(&[0.3, 1.2, -0.5, 2.2]);
        assert_eq!(pi_empirical(&x, &x), 0.0);
    }

    #[test]
    fn pi_small_hand_case() {
        // enumerate G_m − F_n at 1⁻,1,2⁻,2,3⁻,3,4⁻,4 for x=[1,3], y=[2,4]:
        // 0,-.5,-.5,0,0,-.5,-.5,0 -> sup 0; with roles swapped the max is .5 at 1
        let x = emp(&[1.0, 3.0]);
        let y = emp(&[2.0, 4.0]);
        assert_eq!(pi_empirical(&x, &y), 0.0);
        assert_eq!(pi_empirical(&y, &x), 0.5);
    }

    #[test]
    fn pi_is_zero_under_separation() {
        let x = emp(&[0.0, 1.0, 2.0]);
        let y = emp(&[2.5, 3.0, 8.0, 9.0]);
        assert_eq!(pi_empirical(&x, &y), 0.0);
        assert_eq!(pi_empirical(&y, &x), 1.0);
    }

    #[test]
    fn pi_with_ties_across_samples() {
        let x = exact(&[1, 2, 2, 5]);
        let y = exact(&[2, 2, 3]);
        // at 2: G = 2/3, F = 3/4; at 3: G = 1, F = 3/4
        assert_eq!(pi_empirical(&x, &y), Ratio::new(1, 4));
    }

    #[test]
    fn psi_monotone_gap() {
        let c = gamma_empirical(&emp(&[0.0, 2.0]), &emp(&[1.0, 3.0]));
        assert_eq!(c.breakpoints, vec![0.0, 0.5, 1.0]);
        assert_eq!(c.values, vec![1.0, 0.0, -1.0]);
        assert_eq!(c.gamma_star, 0.0);
        assert_eq!(c.psi_at_star, 1.0);
        assert_eq!(c.gamma_hat, 0.0);
        assert_eq!(c.crossing_mass, 0.0);
        assert!(!c.degenerate);
    }

    #[test]
    fn psi_single_crossing() {
        let c = gamma_empirical(&emp(&[0.0, 10.0]), &emp(&[5.0, 6.0]));
        assert_eq!(c.values, vec![0.5, -4.5, -0.5]);
        assert_eq!(c.gamma_star, 0.5);
        assert_eq!(c.psi_at_star, -4.5);
        assert_eq!(c.gamma_hat, 0.5);
        assert_eq!(c.crossing_mass, 0.5);
    }

    #[test]
    fn psi_of_equal_samples_is_flat() {
        let x = emp(&[1.0, 4.0, 2.0]);
        let c = gamma_empirical(&x, &x);
        assert!(c.degenerate);
        assert!(c.values.iter().all(|v| *v == 0.0));
        assert_eq!(c.gamma_star, 0.0);
        assert_eq!(c.gamma_hat, 0.0);
    }

    #[test]
    fn breakpoints_merge_both_grids() {
        let c = gamma_empirical(&exact(&[1, 2, 3]), &exact(&[0, 5]));
        let expect: Vec<Exact> = vec![
            Ratio::from_integer(0),
            Ratio::new(1, 3),
            Ratio::new(1, 2),
            Ratio::new(2, 3),
            Ratio::from_integer(1),
        ];
        assert_eq!(c.breakpoints, expect);
        assert_eq!(c.psi_start(), -c.psi_end());
    }

    #[test]
    fn crossing_mass_bounds_pi() {
        let x = exact(&[0, 3, 4, 9, 10]);
        let y = exact(&[1, 2, 6, 7]);
        let c = gamma_empirical(&x, &y);
        assert!(pi_empirical(&x, &y) <= c.crossing_mass);
        assert!(pi_empirical(&y, &x) <= gamma_empirical(&y, &x).crossing_mass);
    }
}
