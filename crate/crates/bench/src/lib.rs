//! Benchmark fixtures shared by the bench targets.

use faplab_core::{ChannelGeometry, Dimension, DriftVector, SimConfig};

pub fn unit_geometry(dimension: Dimension) -> ChannelGeometry {
    ChannelGeometry::new(dimension, 1.0, 1.0).expect("unit geometry is valid")
}

/// Zero-drift run with a short horizon so censoring bounds the cost.
pub fn short_run(dimension: Dimension, dt: f64, n: usize) -> SimConfig {
    let g = unit_geometry(dimension);
    SimConfig::new(g, DriftVector::zero(dimension), dt, n, 20_000, 1).expect("valid config")
}
