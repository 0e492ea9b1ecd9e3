//! Numeric types accepted by the empirical (step-function) machinery.
//!
//! Everything built on sorted samples only needs ring arithmetic, division by
//! sample sizes and ordering, so it runs unchanged over `f32`, `f64` and exact
//! rationals. Closed forms and sampling stay in `f64`.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

/// A value type for samples and the functionals computed from them.
pub trait Scalar: Num + Copy + PartialOrd + Debug + Send + Sync + 'static {
    /// Exact (where possible) image of a count.
    fn from_count(n: usize) -> Self;

    fn to_f64(self) -> f64;

    fn is_finite_value(self) -> bool;

    /// Absolute gap under which two values count as tied when locating a maximum.
    fn tie_tolerance() -> Self;

    /// `ceil(self * n)` for `self` in `[0, 1]`.
    fn ceil_times(self, n: usize) -> usize;

    fn abs_value(self) -> Self {
        if self < Self::zero() {
            Self::zero() - self
        } else {
            self
        }
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn from_count(n: usize) -> Self {
                n as $t
            }

            fn to_f64(self) -> f64 {
                self as f64
            }

            fn is_finite_value(self) -> bool {
                self.is_finite()
            }

            fn tie_tolerance() -> Self {
                $tol
            }

            fn ceil_times(self, n: usize) -> usize {
                // t = k/n rounded to the nearest float must map back to k.
                let r = self * n as $t;
                let k = r.round();
                if (r - k).abs() <= 8.0 * <$t>::EPSILON * k.max(1.0) {
                    k as usize
                } else {
                    r.ceil() as usize
                }
            }
        }
    };
}

float_scalar!(f64, 1e-12);
float_scalar!(f32, 1e-6);

macro_rules! ratio_scalar {
    ($i:ty) => {
        impl Scalar for Ratio<$i> {
            fn from_count(n: usize) -> Self {
                Ratio::from_integer(n as $i)
            }

            fn to_f64(self) -> f64 {
                ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
            }

            fn is_finite_value(self) -> bool {
                true
            }

            fn tie_tolerance() -> Self {
                Ratio::from_integer(0)
            }

            fn ceil_times(self, n: usize) -> usize {
                (self * Ratio::from_integer(n as $i)).ceil().to_integer() as usize
            }
        }
    };
}

ratio_scalar!(i64);
ratio_scalar!(i128);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_ceil_snaps_grid_points() {
        for n in 1..=50usize {
            for k in 0..=n {
                let t = k as f64 / n as f64;
                assert_eq!(t.ceil_times(n), k, "k={k} n={n}");
            }
        }
        assert_eq!(0.51f64.ceil_times(4), 3);
        assert_eq!(0.49f64.ceil_times(4), 2);
    }

    #[test]
    fn ratio_ceil_is_exact() {
        let t = Ratio::new(1i64, 3);
        assert_eq!(t.ceil_times(3), 1);
        assert_eq!(t.ceil_times(4), 2);
        assert_eq!(Ratio::new(0i64, 1).ceil_times(7), 0);
    }
}
