#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod cauchy;
pub mod density;
pub mod error;
pub mod fap;
pub mod quadrature;
pub mod rng;
pub mod samples;
pub mod sim;
pub mod special;
pub mod verify;

pub use cauchy::{independent_sum, CauchyParams, MultivariateCauchy, UnivariateCauchy};
pub use density::Density;
pub use error::{Error, Result};
pub use fap::{ChannelGeometry, Dimension, DriftVector, FapDensity, FapPoint};
pub use samples::PointCloud;
pub use sim::{FapSampleSet, SimConfig};

/// Version string recorded in output sidecars and manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
