use serde::{Deserialize, Serialize};

use crate::cauchy::CauchyParams;
use crate::density::{expectation_of_norm, Density};
use crate::error::{invalid, Error, Result};
use crate::fap::ChannelGeometry;
use crate::quadrature::QuadSettings;
use crate::samples::PointCloud;
use crate::special::w2;

/// Relative slack on the interval test in [`feasibility`], covering the
/// bisection and quadrature tolerances.
const FEASIBILITY_SLACK: f64 = 1e-9;

/// The logarithmic constraint `E ln(1 + ‖Y/k‖²) = c` on ℝ^p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub p: usize,
    pub target: f64,
}

impl ConstraintSpec {
    /// Standard constant `c(p) = w₂((1 + p)/2; p/2)`: `2 ln 2` for `p = 1`,
    /// `2` for `p = 2`.
    pub fn new(p: usize) -> Result<Self> {
        if p == 0 {
            return Err(invalid("constraint dimension must be at least 1"));
        }
        let target = w2(0.5 * (1.0 + p as f64), 0.5 * p as f64)?;
        Ok(Self { p, target })
    }

    pub fn with_target(p: usize, target: f64) -> Result<Self> {
        if p == 0 {
            return Err(invalid("constraint dimension must be at least 1"));
        }
        if !(target > 0.0) || !target.is_finite() {
            return Err(invalid(format!("constraint value must be positive, got {target}")));
        }
        Ok(Self { p, target })
    }
}

/// Largest allowed output dispersion `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionLevel {
    pub a: f64,
}

impl DispersionLevel {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("dispersion level must be positive, got {a}")));
        }
        Ok(Self { a })
    }
}

/// A law given by its density, by samples, or as a point mass.
#[derive(Clone, Copy)]
pub enum Source<'a> {
    Pdf(&'a dyn Density),
    Samples(&'a PointCloud),
    PointMass(&'a [f64]),
}

impl<'a> Source<'a> {
    pub fn law(params: &'a CauchyParams) -> Self {
        match params {
            CauchyParams::Degenerate { location } => Source::PointMass(location),
            CauchyParams::Univariate(u) => Source::Pdf(u),
            CauchyParams::Multivariate(m) => Source::Pdf(m),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Source::Pdf(d) => d.dim(),
            Source::Samples(s) => s.dim(),
            Source::PointMass(c) => c.len(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Source::Pdf(_) => false,
            Source::Samples(s) => s.coords().iter().all(|c| *c == 0.0),
            Source::PointMass(c) => c.iter().all(|v| *v == 0.0),
        }
    }

    /// Robust length scale used to seed the bisection bracket.
    fn typical_scale(&self) -> f64 {
        match self {
            Source::Pdf(d) => d.scale() + d.center()[0].hypot(d.center()[1]),
            Source::Samples(s) => {
                let m = s.median_norm();
                if m > 0.0 {
                    m
                } else {
                    s.iter().map(norm).fold(0.0, f64::max)
                }
            }
            Source::PointMass(c) => norm(c),
        }
    }
}

fn norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `E ln(1 + ‖Y/k‖²)`.
pub fn log_moment(src: Source<'_>, k: f64, p: usize) -> Result<f64> {
    log_moment_with(src, k, p, &QuadSettings::default())
}

pub fn log_moment_with(src: Source<'_>, k: f64, p: usize, settings: &QuadSettings) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain {
            function: "log_moment",
            arg: k,
            reason: "scale k must be positive",
        });
    }
    if src.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: src.dim(),
        });
    }
    let inv = 1.0 / k;
    match src {
        Source::Pdf(d) => expectation_of_norm(d, |r, _| ((r * inv) * (r * inv)).ln_1p(), settings),
        Source::Samples(s) => {
            if s.is_empty() {
                return Err(Error::Empty("log-moment sample"));
            }
            let sum: f64 = s
                .iter()
                .map(|y| {
                    let q: f64 = y.iter().map(|v| (v * inv) * (v * inv)).sum();
                    q.ln_1p()
                })
                .sum();
            Ok(sum / s.len() as f64)
        }
        Source::PointMass(c) => {
            let r = norm(c) * inv;
            Ok((r * r).ln_1p())
        }
    }
}

/// Dispersion `P₁(Y)`: the `k` with `E ln(1 + ‖Y/k‖²) = c(p)`.
///
/// Bisection in `ln k` from the bracket `[10⁻⁶ s, 10⁶ s]`, `s` a robust
/// scale of the input, widened when needed. `Y = 0` almost surely has
/// dispersion 0 by convention.
pub fn dispersion_of(src: Source<'_>, spec: &ConstraintSpec) -> Result<f64> {
    if src.dim() != spec.p {
        return Err(Error::DimensionMismatch {
            expected: spec.p,
            got: src.dim(),
        });
    }
    if src.is_zero() {
        return Ok(0.0);
    }
    let s = src.typical_scale();
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Bracket(format!("no usable scale for the input (got {s})")));
    }
    solve_decreasing_in_scale(|k| log_moment(src, k, spec.p).map(|v| v - spec.target), s)
}

/// Root of `phi`, strictly decreasing in `k > 0` and changing sign, by
/// bisection in `ln k` from `[10⁻⁶ s, 10⁶ s]` widened as needed.
pub(crate) fn solve_decreasing_in_scale<F: FnMut(f64) -> Result<f64>>(mut phi: F, s: f64) -> Result<f64> {
    let (mut lo, mut hi) = (1e-6 * s, 1e6 * s);
    let mut widen = 0;
    while phi(lo)? <= 0.0 {
        lo *= 1e-3;
        widen += 1;
        if widen > 20 || lo == 0.0 {
            return Err(Error::Bracket("log-moment stays below its target as k shrinks".into()));
        }
    }
    widen = 0;
    while phi(hi)? >= 0.0 {
        hi *= 1e3;
        widen += 1;
        if widen > 20 || !hi.is_finite() {
            return Err(Error::Bracket("log-moment stays above its target as k grows".into()));
        }
    }
    for _ in 0..200 {
        if hi / lo - 1.0 <= 1e-13 {
            break;
        }
        let mid = (lo * hi).sqrt();
        if phi(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Whether `Y` meets the output constraint: some `k ∈ [λ, A]` satisfies the
/// log-moment equality, i.e. the dispersion lies in `[λ, A]`.
pub fn feasibility(
    src: Source<'_>,
    level: DispersionLevel,
    g: &ChannelGeometry,
    spec: &ConstraintSpec,
) -> Result<bool> {
    if level.a < g.lambda {
        return Err(Error::BelowNoiseFloor {
            a: level.a,
            floor: g.lambda,
        });
    }
    let p = g.dimension.transverse();
    if spec.p != p {
        return Err(Error::DimensionMismatch { expected: p, got: spec.p });
    }
    let d = dispersion_of(src, spec)?;
    Ok(d >= g.lambda * (1.0 - FEASIBILITY_SLACK) && d <= level.a * (1.0 + FEASIBILITY_SLACK))
}
