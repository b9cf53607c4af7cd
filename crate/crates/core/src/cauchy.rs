//! Univariate and multivariate Cauchy laws: densities, entropies, exact
//! samplers and the closure rules for independent sums and linear
//! combinations.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::density::Density;
use crate::error::{invalid, Error, Result};
use crate::rng;
use crate::samples::PointCloud;
use crate::special::{cauchy_entropy_constant, log_gamma};

/// `Cauchy(x₀, γ)` with density `1 / (πγ [1 + ((x − x₀)/γ)²])`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnivariateCauchy {
    location: f64,
    scale: f64,
}

impl UnivariateCauchy {
    pub fn new(location: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(invalid(format!("Cauchy scale must be positive, got {scale}")));
        }
        if !location.is_finite() {
            return Err(invalid("Cauchy location must be finite"));
        }
        Ok(Self { location, scale })
    }

    pub fn standard() -> Self {
        Self {
            location: 0.0,
            scale: 1.0,
        }
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.location) / self.scale;
        1.0 / (PI * self.scale * (1.0 + z * z))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        0.5 + ((x - self.location) / self.scale).atan() / PI
    }

    pub fn quantile(&self, u: f64) -> f64 {
        self.location + self.scale * (PI * (u - 0.5)).tan()
    }

    /// `ln(4πγ)`; independent of the location.
    pub fn entropy(&self) -> f64 {
        (4.0 * PI * self.scale).ln()
    }

    /// `n` i.i.d. draws via `x₀ + γ tan(π(U − ½))`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = rng::seeded(seed);
        (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                self.quantile(u)
            })
            .collect()
    }
}

impl Density for UnivariateCauchy {
    fn dim(&self) -> usize {
        1
    }
    fn pdf(&self, y: &[f64]) -> f64 {
        UnivariateCauchy::pdf(self, y[0])
    }
    fn center(&self) -> [f64; 2] {
        [self.location, 0.0]
    }
    fn scale(&self) -> f64 {
        self.scale
    }
}

/// `Cauchy_p(μ, Σ)`: the multivariate t law with one degree of freedom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultivariateCauchy {
    location: Vec<f64>,
    /// Row-major p × p scale matrix.
    scale_matrix: Vec<f64>,
    #[serde(skip)]
    chol: Vec<f64>,
    #[serde(skip)]
    log_det: f64,
}

impl MultivariateCauchy {
    pub fn new(location: Vec<f64>, scale_matrix: Vec<f64>) -> Result<Self> {
        let p = location.len();
        if p == 0 {
            return Err(invalid("multivariate Cauchy needs dimension at least 1"));
        }
        if scale_matrix.len() != p * p {
            return Err(Error::DimensionMismatch {
                expected: p * p,
                got: scale_matrix.len(),
            });
        }
        if location.iter().chain(&scale_matrix).any(|v| !v.is_finite()) {
            return Err(invalid("non-finite Cauchy parameter"));
        }
        for i in 0..p {
            for j in 0..i {
                let (a, b) = (scale_matrix[i * p + j], scale_matrix[j * p + i]);
                if (a - b).abs() > 1e-12 * (a.abs() + b.abs()).max(1.0) {
                    return Err(invalid("scale matrix must be symmetric"));
                }
            }
        }
        let chol = cholesky(&scale_matrix, p)?;
        let log_det = 2.0 * (0..p).map(|i| chol[i * p + i].ln()).sum::<f64>();
        Ok(Self {
            location,
            scale_matrix,
            chol,
            log_det,
        })
    }

    /// `Cauchy_p(μ, γ² I)`.
    pub fn isotropic(location: Vec<f64>, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(invalid(format!("Cauchy scale must be positive, got {gamma}")));
        }
        let p = location.len();
        let mut m = vec![0.0; p * p];
        for i in 0..p {
            m[i * p + i] = gamma * gamma;
        }
        Self::new(location, m)
    }

    pub fn dim(&self) -> usize {
        self.location.len()
    }

    pub fn location(&self) -> &[f64] {
        &self.location
    }

    pub fn scale_matrix(&self) -> &[f64] {
        &self.scale_matrix
    }

    /// `ln |Σ|`.
    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    /// `γ` when `Σ = γ² I`.
    pub fn isotropic_scale(&self) -> Option<f64> {
        let p = self.dim();
        let d = self.scale_matrix[0];
        for i in 0..p {
            for j in 0..p {
                let v = self.scale_matrix[i * p + j];
                let want = if i == j { d } else { 0.0 };
                if (v - want).abs() > 1e-12 * d {
                    return None;
                }
            }
        }
        Some(d.sqrt())
    }

    /// `(x − μ)ᵀ Σ⁻¹ (x − μ)` through the Cholesky factor.
    fn mahalanobis(&self, x: &[f64]) -> f64 {
        let p = self.dim();
        let mut z = [0.0; 8];
        let mut heap;
        let z: &mut [f64] = if p <= 8 {
            &mut z[..p]
        } else {
            heap = vec![0.0; p];
            &mut heap
        };
        let mut q = 0.0;
        for i in 0..p {
            let mut s = x[i] - self.location[i];
            for k in 0..i {
                s -= self.chol[i * p + k] * z[k];
            }
            z[i] = s / self.chol[i * p + i];
            q += z[i] * z[i];
        }
        q
    }

    fn log_norm(&self) -> f64 {
        let p = self.dim() as f64;
        // ln Γ((1+p)/2) − ln Γ(1/2) − (p/2) ln π − ½ ln|Σ|
        log_gamma(0.5 * (1.0 + p)).expect("positive") - 0.5 * PI.ln() - 0.5 * p * PI.ln() - 0.5 * self.log_det
    }

    pub fn pdf(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.pdf_unchecked(x))
    }

    fn pdf_unchecked(&self, x: &[f64]) -> f64 {
        let p = self.dim() as f64;
        let q = self.mahalanobis(x);
        (self.log_norm() - 0.5 * (1.0 + p) * q.ln_1p()).exp()
    }

    /// `½ ln|Σ| + Φ(p)`.
    pub fn entropy(&self) -> f64 {
        0.5 * self.log_det + cauchy_entropy_constant(self.dim()).expect("dimension ≥ 1")
    }

    /// `n` draws of `μ + L G / |Z|` with `L Lᵀ = Σ`, `G` standard normal in
    /// ℝ^p and `Z` an independent standard normal.
    pub fn sample(&self, n: usize, seed: u64) -> PointCloud {
        let p = self.dim();
        let mut rng = rng::seeded(seed);
        let mut out = PointCloud::with_capacity(p, n);
        let mut g = vec![0.0; p];
        let mut y = vec![0.0; p];
        for _ in 0..n {
            for gi in g.iter_mut() {
                *gi = rng.sample(StandardNormal);
            }
            let z: f64 = rng.sample(StandardNormal);
            let inv = 1.0 / z.abs();
            for i in 0..p {
                let mut s = 0.0;
                for k in 0..=i {
                    s += self.chol[i * p + k] * g[k];
                }
                y[i] = self.location[i] + s * inv;
            }
            out.push(&y);
        }
        out
    }

    /// Law of `vᵀX`: `Cauchy(vᵀμ, √(vᵀΣv))`.
    pub fn linear_combination(&self, v: &[f64]) -> Result<UnivariateCauchy> {
        let p = self.dim();
        if v.len() != p {
            return Err(Error::DimensionMismatch { expected: p, got: v.len() });
        }
        if v.iter().all(|c| *c == 0.0) {
            return Err(Error::Degenerate("zero combination vector".into()));
        }
        let loc: f64 = v.iter().zip(&self.location).map(|(a, b)| a * b).sum();
        let mut quad = 0.0;
        for i in 0..p {
            for j in 0..p {
                quad += v[i] * self.scale_matrix[i * p + j] * v[j];
            }
        }
        UnivariateCauchy::new(loc, quad.sqrt())
    }
}

impl Density for MultivariateCauchy {
    fn dim(&self) -> usize {
        MultivariateCauchy::dim(self)
    }
    fn pdf(&self, y: &[f64]) -> f64 {
        self.pdf_unchecked(y)
    }
    fn center(&self) -> [f64; 2] {
        [self.location[0], self.location.get(1).copied().unwrap_or(0.0)]
    }
    fn scale(&self) -> f64 {
        (self.log_det / self.dim() as f64 * 0.5).exp()
    }
    fn radial_pdf(&self, r: f64) -> Option<f64> {
        let gamma = self.isotropic_scale()?;
        let p = self.dim() as f64;
        let q = (r / gamma) * (r / gamma);
        Some((self.log_norm() - 0.5 * (1.0 + p) * q.ln_1p()).exp())
    }
}

fn cholesky(m: &[f64], p: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..=i {
            let mut s = m[i * p + j];
            for k in 0..j {
                s -= l[i * p + k] * l[j * p + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return Err(Error::NotPositiveDefinite);
                }
                l[i * p + i] = s.sqrt();
            } else {
                l[i * p + j] = s / l[j * p + j];
            }
        }
    }
    Ok(l)
}

/// Any member of the Cauchy family used by the channel models, plus the
/// point mass that acts as the identity for independent sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CauchyParams {
    /// All mass at `location` (zero scale).
    Degenerate { location: Vec<f64> },
    Univariate(UnivariateCauchy),
    Multivariate(MultivariateCauchy),
}

impl CauchyParams {
    pub fn dim(&self) -> usize {
        match self {
            CauchyParams::Degenerate { location } => location.len(),
            CauchyParams::Univariate(_) => 1,
            CauchyParams::Multivariate(m) => m.dim(),
        }
    }

    pub fn point_mass(location: Vec<f64>) -> Self {
        CauchyParams::Degenerate { location }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, CauchyParams::Degenerate { .. })
    }

    /// Location and isotropic scale (`0` for the point mass), if isotropic.
    pub fn location_and_scale(&self) -> Option<(Vec<f64>, f64)> {
        match self {
            CauchyParams::Degenerate { location } => Some((location.clone(), 0.0)),
            CauchyParams::Univariate(u) => Some((vec![u.location()], u.scale())),
            CauchyParams::Multivariate(m) => m.isotropic_scale().map(|g| (m.location().to_vec(), g)),
        }
    }

    /// Differential entropy in nats; `None` for the point mass.
    pub fn entropy(&self) -> Option<f64> {
        match self {
            CauchyParams::Degenerate { .. } => None,
            CauchyParams::Univariate(u) => Some(u.entropy()),
            CauchyParams::Multivariate(m) => Some(m.entropy()),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> PointCloud {
        match self {
            CauchyParams::Degenerate { location } => {
                let mut out = PointCloud::with_capacity(location.len(), n);
                for _ in 0..n {
                    out.push(location);
                }
                out
            }
            CauchyParams::Univariate(u) => PointCloud::from_scalars(u.sample(n, seed)),
            CauchyParams::Multivariate(m) => m.sample(n, seed),
        }
    }

    fn from_location_scale(location: Vec<f64>, scale: f64, multivariate: bool) -> Result<Self> {
        if scale == 0.0 {
            return Ok(CauchyParams::Degenerate { location });
        }
        if multivariate {
            MultivariateCauchy::isotropic(location, scale).map(CauchyParams::Multivariate)
        } else {
            UnivariateCauchy::new(location[0], scale).map(CauchyParams::Univariate)
        }
    }
}

impl From<UnivariateCauchy> for CauchyParams {
    fn from(u: UnivariateCauchy) -> Self {
        CauchyParams::Univariate(u)
    }
}

impl From<MultivariateCauchy> for CauchyParams {
    fn from(m: MultivariateCauchy) -> Self {
        CauchyParams::Multivariate(m)
    }
}

/// Law of `U + V` for independent `U`, `V`: scales add, locations add.
///
/// Supported for two univariate laws, or two isotropic multivariate laws of
/// the same dimension; the point mass is accepted on either side.
pub fn independent_sum(a: &CauchyParams, b: &CauchyParams) -> Result<CauchyParams> {
    if a.dim() != b.dim() {
        return Err(Error::Unsupported(format!(
            "sum of Cauchy laws in dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let multivariate = matches!(a, CauchyParams::Multivariate(_)) || matches!(b, CauchyParams::Multivariate(_));
    let (la, sa) = a
        .location_and_scale()
        .ok_or_else(|| Error::Unsupported("sum with a non-isotropic scale matrix".into()))?;
    let (lb, sb) = b
        .location_and_scale()
        .ok_or_else(|| Error::Unsupported("sum with a non-isotropic scale matrix".into()))?;
    let location: Vec<f64> = la.iter().zip(&lb).map(|(x, y)| x + y).collect();
    CauchyParams::from_location_scale(location, sa + sb, multivariate)
}
