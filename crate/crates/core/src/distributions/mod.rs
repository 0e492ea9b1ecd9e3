//! Distribution primitives shared by every other module.

mod empirical;
mod model;
pub mod normal;
mod rng;

pub use empirical::EmpiricalDistribution;
pub use model::{ContinuousModel, Evaluate, LocationScale, ModelKind, Normal, StandardNormal};
pub use normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile, std_normal_sf};
pub use rng::{sample_normal, RngStream};

pub(crate) use rng::fill_normal;
