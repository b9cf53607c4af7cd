//! Logarithmic-moment constraint, dispersion, entropy, mutual information
//! and closed-form capacities of the zero-drift FAP channels.

mod dispersion;
mod entropy;
mod kdtree;
mod maxent;
mod table;

pub use dispersion::{dispersion_of, feasibility, log_moment, ConstraintSpec, DispersionLevel, Source};
pub use entropy::{entropy_estimate, entropy_knn, EntropyEstimate, EntropyInput, EntropyMethod};
pub use kdtree::KdTree2;
pub use maxent::{
    certify_maxent, constraint_value, family_log_moment, family_normalizer, FamilyPoint, maxent_free_form_1d, maxent_profile, Certification,
    FreeFormMaxEnt, LagrangianDensity, MaxEntProfile,
};
pub use table::{capacity_table, CapacityRow, CapacityTable};

use serde::{Deserialize, Serialize};

use crate::cauchy::{independent_sum, CauchyParams, MultivariateCauchy, UnivariateCauchy};
use crate::error::{invalid, Error, Result};
use crate::fap::{zero_drift_reduction, ChannelGeometry};

/// `I(X; Y) = h(Y) − h(N)` for `Y = X + N` with the zero-drift noise of `g`.
pub fn mutual_information(input: &CauchyParams, g: &ChannelGeometry) -> Result<f64> {
    let p = g.dimension.transverse();
    if input.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: input.dim(),
        });
    }
    let noise = zero_drift_reduction(g, &vec![0.0; p])?;
    let output = independent_sum(input, &noise)?;
    let h_y = output.entropy().expect("sum with a Cauchy noise law is non-degenerate");
    let h_n = noise.entropy().expect("noise is non-degenerate");
    Ok(h_y - h_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Fap2d,
    Fap3d,
    Gaussian,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Fap2d => "fap2d",
            ChannelKind::Fap3d => "fap3d",
            ChannelKind::Gaussian => "gaussian",
        }
    }
}

/// A capacity-achieving law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum AchievingLaw {
    Cauchy { params: CauchyParams },
    Gaussian { mean: f64, variance: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub channel: ChannelKind,
    pub a: f64,
    /// `λ` for the FAP channels, `σ` for the Gaussian baseline.
    pub floor: f64,
    /// Nats.
    pub capacity: f64,
    pub achieving_output: AchievingLaw,
    pub achieving_input: AchievingLaw,
    /// The achieving input follows from the sum rule rather than being a
    /// stated result (3D channel).
    pub input_derived: bool,
}

fn cauchy_law(p: usize, scale: f64) -> Result<CauchyParams> {
    if scale == 0.0 {
        return Ok(CauchyParams::point_mass(vec![0.0; p]));
    }
    match p {
        1 => UnivariateCauchy::new(0.0, scale).map(CauchyParams::Univariate),
        _ => MultivariateCauchy::isotropic(vec![0.0; p], scale).map(CauchyParams::Multivariate),
    }
}

/// Closed-form capacity at dispersion (or amplitude) level `a`.
///
/// FAP 2D: `ln(A/λ)`, output `Cauchy(0, A)`, input `Cauchy(0, A − λ)`.
/// FAP 3D: `2 ln(A/λ)`, output `Cauchy₂(0, A² I)`, input `Cauchy₂(0, (A − λ)² I)`.
/// Gaussian: `ln(A/σ)` with `A² = σ² + P`.
pub fn capacity_closed_form(channel: ChannelKind, a: f64, floor: f64) -> Result<CapacityResult> {
    if !(floor > 0.0) || !floor.is_finite() {
        return Err(invalid(format!("noise floor must be positive, got {floor}")));
    }
    if !a.is_finite() || a < floor {
        return Err(Error::BelowNoiseFloor { a, floor });
    }
    let ratio = (a / floor).ln();
    let (capacity, output, input) = match channel {
        ChannelKind::Fap2d => (
            ratio,
            AchievingLaw::Cauchy { params: cauchy_law(1, a)? },
            AchievingLaw::Cauchy {
                params: cauchy_law(1, a - floor)?,
            },
        ),
        ChannelKind::Fap3d => (
            2.0 * ratio,
            AchievingLaw::Cauchy { params: cauchy_law(2, a)? },
            AchievingLaw::Cauchy {
                params: cauchy_law(2, a - floor)?,
            },
        ),
        ChannelKind::Gaussian => (
            ratio,
            AchievingLaw::Gaussian {
                mean: 0.0,
                variance: a * a,
            },
            AchievingLaw::Gaussian {
                mean: 0.0,
                variance: a * a - floor * floor,
            },
        ),
    };
    Ok(CapacityResult {
        channel,
        a,
        floor,
        capacity,
        achieving_output: output,
        achieving_input: input,
        input_derived: channel == ChannelKind::Fap3d,
    })
}
