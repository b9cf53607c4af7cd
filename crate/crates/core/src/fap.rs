//! First-arrival-position channel densities in 2D and 3D with drift.
//!
//! Coordinates: the receiver is the hyperplane at height 0, the transmitter
//! sits at height `λ`. The last drift component is the traversal component;
//! a positive value pushes particles away from the receiver and a negative
//! one toward it.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cauchy::{CauchyParams, MultivariateCauchy, UnivariateCauchy};
use crate::density::Density;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_plane, integrate_radial_plane, integrate_real_line, QuadSettings};
use crate::special::bessel_k1_scaled;

/// Ambient dimension of the diffusion channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimension {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
}

impl Dimension {
    pub fn from_n(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(invalid(format!("channel dimension must be 2 or 3, got {n}"))),
        }
    }

    pub fn n(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    /// Number of coordinates on the receiver plane.
    pub fn transverse(self) -> usize {
        self.n() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelGeometry {
    pub dimension: Dimension,
    /// Transmission distance.
    pub lambda: f64,
    /// Microscopic diffusion coefficient (`σ² = 2D`).
    pub sigma2: f64,
}

impl ChannelGeometry {
    pub fn new(dimension: Dimension, lambda: f64, sigma2: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(invalid(format!("lambda must be positive, got {lambda}")));
        }
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(invalid(format!("sigma2 must be positive, got {sigma2}")));
        }
        Ok(Self {
            dimension,
            lambda,
            sigma2,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DriftVector(Vec<f64>);

impl DriftVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.len() < 2 || components.len() > 3 {
            return Err(invalid(format!("drift must have 2 or 3 components, got {}", components.len())));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(invalid("drift components must be finite"));
        }
        Ok(Self(components))
    }

    pub fn zero(dimension: Dimension) -> Self {
        Self(vec![0.0; dimension.n()])
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0.0)
    }

    /// Component normal to the receiver plane.
    pub fn traversal(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// Components parallel to the receiver plane.
    pub fn transverse(&self) -> &[f64] {
        &self.0[..self.0.len() - 1]
    }

    fn check(&self, g: &ChannelGeometry) -> Result<()> {
        if self.len() != g.dimension.n() {
            return Err(Error::DimensionMismatch {
                expected: g.dimension.n(),
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// Release point `x` and arrival point `y`, both on their hyperplanes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FapPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl FapPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { x, y }
    }

    fn check(&self, g: &ChannelGeometry) -> Result<()> {
        let want = g.dimension.transverse();
        for len in [self.x.len(), self.y.len()] {
            if len != want {
                return Err(Error::DimensionMismatch { expected: want, got: len });
            }
        }
        Ok(())
    }
}

/// FAP density in 2D with nonzero drift `v = (v₁, v₂)`.
pub fn fap_pdf_2d(g: &ChannelGeometry, v: &DriftVector, pt: &FapPoint) -> Result<f64> {
    if g.dimension != Dimension::Two {
        return Err(Error::DimensionMismatch { expected: 2, got: g.dimension.n() });
    }
    v.check(g)?;
    pt.check(g)?;
    if v.is_zero() {
        return Err(Error::ZeroDrift);
    }
    Ok(pdf_2d(g, v.components(), pt.y[0] - pt.x[0]))
}

fn pdf_2d(g: &ChannelGeometry, v: &[f64], d1: f64) -> f64 {
    let (v1, v2) = (v[0], v[1]);
    let speed = v1.hypot(v2);
    let s2 = g.sigma2;
    let r = d1.hypot(g.lambda);
    let z = speed * r / s2;
    // K₁(z) = e^{−z}·k1s(z), folded into one exponent to avoid overflow.
    let expo = (-v2 * g.lambda + v1 * d1 - speed * r) / s2;
    let k1s = bessel_k1_scaled(z).unwrap_or(0.0);
    speed * g.lambda / (s2 * PI) * expo.exp() * k1s / r
}

/// FAP density in 3D with drift `v = (v₁, v₂, v₃)`; zero drift is allowed.
pub fn fap_pdf_3d(g: &ChannelGeometry, v: &DriftVector, pt: &FapPoint) -> Result<f64> {
    if g.dimension != Dimension::Three {
        return Err(Error::DimensionMismatch { expected: 3, got: g.dimension.n() });
    }
    v.check(g)?;
    pt.check(g)?;
    Ok(pdf_3d(g, v.components(), pt.y[0] - pt.x[0], pt.y[1] - pt.x[1]))
}

fn pdf_3d(g: &ChannelGeometry, v: &[f64], d1: f64, d2: f64) -> f64 {
    let s2 = g.sigma2;
    let speed = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let big_r = (d1 * d1 + d2 * d2 + g.lambda * g.lambda).sqrt();
    let a = speed * big_r / s2;
    let expo = (-v[2] * g.lambda + v[0] * d1 + v[1] * d2) / s2 - a;
    g.lambda / (2.0 * PI) * expo.exp() * (1.0 + a) / (big_r * big_r * big_r)
}

/// Zero-drift FAP law: `Cauchy(x₁, λ)` in 2D, `Cauchy₂(x, λ² I)` in 3D.
pub fn zero_drift_reduction(g: &ChannelGeometry, x: &[f64]) -> Result<CauchyParams> {
    let want = g.dimension.transverse();
    if x.len() != want {
        return Err(Error::DimensionMismatch { expected: want, got: x.len() });
    }
    match g.dimension {
        Dimension::Two => UnivariateCauchy::new(x[0], g.lambda).map(CauchyParams::Univariate),
        Dimension::Three => MultivariateCauchy::isotropic(x.to_vec(), g.lambda).map(CauchyParams::Multivariate),
    }
}

/// The FAP density for a fixed release point, as a function of the arrival
/// point. Zero drift is evaluated through the Cauchy reduction.
#[derive(Debug, Clone)]
pub struct FapDensity {
    geometry: ChannelGeometry,
    drift: DriftVector,
    x: Vec<f64>,
    reduction: Option<CauchyParams>,
}

impl FapDensity {
    pub fn new(geometry: ChannelGeometry, drift: DriftVector, x: Vec<f64>) -> Result<Self> {
        drift.check(&geometry)?;
        let reduction = if drift.is_zero() {
            Some(zero_drift_reduction(&geometry, &x)?)
        } else {
            let want = geometry.dimension.transverse();
            if x.len() != want {
                return Err(Error::DimensionMismatch { expected: want, got: x.len() });
            }
            None
        };
        Ok(Self {
            geometry,
            drift,
            x,
            reduction,
        })
    }

    pub fn geometry(&self) -> &ChannelGeometry {
        &self.geometry
    }

    pub fn drift(&self) -> &DriftVector {
        &self.drift
    }
}

impl Density for FapDensity {
    fn dim(&self) -> usize {
        self.geometry.dimension.transverse()
    }

    fn pdf(&self, y: &[f64]) -> f64 {
        match &self.reduction {
            Some(CauchyParams::Univariate(u)) => u.pdf(y[0]),
            Some(CauchyParams::Multivariate(m)) => Density::pdf(m, y),
            _ => match self.geometry.dimension {
                Dimension::Two => pdf_2d(&self.geometry, self.drift.components(), y[0] - self.x[0]),
                Dimension::Three => pdf_3d(
                    &self.geometry,
                    self.drift.components(),
                    y[0] - self.x[0],
                    y[1] - self.x[1],
                ),
            },
        }
    }

    /// Release point shifted by the transverse drift over the ballistic
    /// travel time, when the traversal drift points at the receiver.
    fn center(&self) -> [f64; 2] {
        let mut c = [self.x[0], self.x.get(1).copied().unwrap_or(0.0)];
        let vt = self.drift.traversal();
        if vt < 0.0 {
            let t = self.geometry.lambda / -vt;
            for (ci, vi) in c.iter_mut().zip(self.drift.transverse()) {
                *ci += vi * t;
            }
        }
        c
    }

    fn scale(&self) -> f64 {
        self.geometry.lambda
    }

    fn radial_pdf(&self, r: f64) -> Option<f64> {
        if self.geometry.dimension != Dimension::Three || self.drift.transverse().iter().any(|c| *c != 0.0) {
            return None;
        }
        if self.x.iter().any(|c| *c != 0.0) {
            return None;
        }
        Some(pdf_3d(&self.geometry, self.drift.components(), r, 0.0))
    }
}

/// `∫ f(y | x) dy` over the receiver plane: the probability that a particle
/// is ever absorbed.
pub fn arrival_probability(g: &ChannelGeometry, v: &DriftVector) -> Result<f64> {
    arrival_probability_with(g, v, &QuadSettings::with_tol(1e-12, 1e-10))
}

pub fn arrival_probability_with(g: &ChannelGeometry, v: &DriftVector, s: &QuadSettings) -> Result<f64> {
    let origin = vec![0.0; g.dimension.transverse()];
    let d = FapDensity::new(*g, v.clone(), origin)?;
    let value = match g.dimension {
        Dimension::Two => integrate_real_line(|y| d.pdf(&[y]), d.center()[0], d.scale(), s)?.value,
        Dimension::Three => match d.radial_pdf(0.0) {
            Some(_) => integrate_radial_plane(|r| d.radial_pdf(r).unwrap_or(0.0), d.scale(), s)?.value,
            None => integrate_plane(|a, b| d.pdf(&[a, b]), d.center(), d.scale(), s)?.value,
        },
    };
    Ok(value)
}

/// Axis of a rectangular evaluation grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridAxis {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points == 0 || !(lo.is_finite() && hi.is_finite()) || (points > 1 && !(hi > lo)) {
            return Err(invalid(format!("bad grid axis [{lo}, {hi}] with {points} points")));
        }
        Ok(Self { lo, hi, points })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.lo + step * i as f64).collect()
    }
}

/// Density values on a rectangular grid, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub axes: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub fn evaluate<D: Density + ?Sized>(d: &D, axes: &[GridAxis]) -> Result<Self> {
        if axes.len() != d.dim() {
            return Err(Error::DimensionMismatch {
                expected: d.dim(),
                got: axes.len(),
            });
        }
        let axes: Vec<Vec<f64>> = axes.iter().map(GridAxis::values).collect();
        let values = match axes.len() {
            1 => axes[0].iter().map(|&a| d.pdf(&[a])).collect(),
            _ => axes[0]
                .iter()
                .flat_map(|&a| axes[1].iter().map(move |&b| d.pdf(&[a, b])))
                .collect(),
        };
        Ok(Self { axes, values })
    }

    /// CSV with header `y1[,y2],density`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header: Vec<String> = (1..=self.axes.len()).map(|i| format!("y{i}")).collect();
        writeln!(w, "{},density", header.join(","))?;
        match self.axes.len() {
            1 => {
                for (a, f) in self.axes[0].iter().zip(&self.values) {
                    writeln!(w, "{a},{f}")?;
                }
            }
            _ => {
                let mut it = self.values.iter();
                for a in &self.axes[0] {
                    for b in &self.axes[1] {
                        writeln!(w, "{a},{b},{}", it.next().expect("grid size"))?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(n: usize, lambda: f64, sigma2: f64) -> ChannelGeometry {
        ChannelGeometry::new(Dimension::from_n(n).unwrap(), lambda, sigma2).unwrap()
    }

    fn drift(v: &[f64]) -> DriftVector {
        DriftVector::new(v.to_vec()).unwrap()
    }

    fn pdf2(g: &ChannelGeometry, v: &[f64], x: f64, y: f64) -> f64 {
        fap_pdf_2d(g, &drift(v), &FapPoint::new(vec![x], vec![y])).unwrap()
    }

    fn pdf3(g: &ChannelGeometry, v: &[f64], x: [f64; 2], y: [f64; 2]) -> f64 {
        fap_pdf_3d(g, &drift(v), &FapPoint::new(x.to_vec(), y.to_vec())).unwrap()
    }

    #[test]
    fn small_drift_2d_at_origin() {
        let g = geo(2, 1.0, 1.0);
        assert!((pdf2(&g, &[0.0, 1e-8], 0.0, 0.0) - 1.0 / PI).abs() <= 1e-4);
    }

    #[test]
    fn symmetric_without_transverse_drift() {
        let g = geo(2, 1.3, 0.7);
        for v2 in [-2.0, 0.5, 3.0] {
            for i in 1..40 {
                let d = i as f64 * 0.25;
                let a = pdf2(&g, &[0.0, v2], 0.4, 0.4 + d);
                let b = pdf2(&g, &[0.0, v2], 0.4, 0.4 - d);
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn traversal_sign_ratio() {
        let g = geo(2, 1.0, 1.0);
        let toward = pdf2(&g, &[0.0, -1.0], 0.0, 0.0);
        let away = pdf2(&g, &[0.0, 1.0], 0.0, 0.0);
        assert!((toward / away - std::f64::consts::E.powi(2)).abs() <= 1e-12);
    }

    #[test]
    fn zero_drift_is_explicit_error_in_2d() {
        let g = geo(2, 1.0, 1.0);
        let r = fap_pdf_2d(&g, &drift(&[0.0, 0.0]), &FapPoint::new(vec![0.0], vec![0.0]));
        assert_eq!(r, Err(Error::ZeroDrift));
    }

    #[test]
    fn zero_drift_3d_values() {
        let g = geo(3, 1.0, 1.0);
        assert!((pdf3(&g, &[0.0, 0.0, 0.0], [0.0, 0.0], [0.0, 0.0]) - 0.5 / PI).abs() <= 1e-15);
        let want = 0.5 / PI * 3f64.powf(-1.5);
        assert!((pdf3(&g, &[0.0, 0.0, 1e-8], [0.0, 0.0], [1.0, 1.0]) - want).abs() <= 1e-4);
    }

    #[test]
    fn rotation_invariant_without_transverse_drift() {
        let g = geo(3, 0.8, 1.4);
        for v3 in [-1.0, 0.0, 2.0] {
            for k in 1..20 {
                let r = 0.3 * k as f64;
                let base = pdf3(&g, &[0.0, 0.0, v3], [0.0, 0.0], [r, 0.0]);
                for j in 1..12 {
                    let phi = j as f64 * 0.5;
                    let rot = pdf3(&g, &[0.0, 0.0, v3], [0.0, 0.0], [r * phi.cos(), r * phi.sin()]);
                    assert!((rot - base).abs() <= 1e-12 * base.max(1e-300));
                }
            }
        }
    }

    #[test]
    fn reduction_parameters() {
        let g = geo(2, 2.0, 1.0);
        let CauchyParams::Univariate(u) = zero_drift_reduction(&g, &[0.0]).unwrap() else {
            panic!()
        };
        assert_eq!((u.location(), u.scale()), (0.0, 2.0));
        assert!((u.pdf(0.0) - 0.5 / PI).abs() <= 1e-15);
        let g3 = geo(3, 1.0, 1.0);
        let CauchyParams::Multivariate(m) = zero_drift_reduction(&g3, &[0.0, 0.0]).unwrap() else {
            panic!()
        };
        assert_eq!(m.scale_matrix(), &[1.0, 0.0, 0.0, 1.0]);
    }

    fn sup_gap_2d(speed: f64) -> f64 {
        let g = geo(2, 1.0, 1.0);
        let u = UnivariateCauchy::new(0.0, 1.0).unwrap();
        (0..=400)
            .map(|i| -10.0 + 0.05 * i as f64)
            .map(|y| (pdf2(&g, &[0.0, speed], 0.0, y) - u.pdf(y)).abs())
            .fold(0.0, f64::max)
    }

    fn sup_gap_3d(speed: f64) -> f64 {
        let g = geo(3, 1.0, 1.0);
        let m = MultivariateCauchy::isotropic(vec![0.0, 0.0], 1.0).unwrap();
        let mut gap: f64 = 0.0;
        for i in 0..=40 {
            for j in 0..=40 {
                let y = [-10.0 + 0.5 * i as f64, -10.0 + 0.5 * j as f64];
                gap = gap.max((pdf3(&g, &[0.0, 0.0, speed], [0.0, 0.0], y) - m.pdf(&y).unwrap()).abs());
            }
        }
        gap
    }

    #[test]
    fn pointwise_limit_monotone() {
        let speeds = [1e-2, 1e-4, 1e-6, 1e-8];
        let g2: Vec<f64> = speeds.iter().map(|&s| sup_gap_2d(s)).collect();
        let g3: Vec<f64> = speeds.iter().map(|&s| sup_gap_3d(s)).collect();
        assert!(g2[3] < 1e-3 && g3[3] < 1e-3);
        assert!(g2.windows(2).all(|w| w[1] < w[0]), "{g2:?}");
        assert!(g3.windows(2).all(|w| w[1] < w[0]), "{g3:?}");
    }

    #[test]
    fn translation_covariance() {
        let g = geo(2, 1.0, 0.5);
        let g3 = geo(3, 1.0, 0.5);
        for shift in [-3.0, 0.7, 12.0] {
            for k in -10..=10 {
                let d = 0.3 * k as f64;
                let a = pdf2(&g, &[0.4, -0.6], 0.0, d);
                let b = pdf2(&g, &[0.4, -0.6], shift, shift + d);
                assert!((a - b).abs() <= 1e-12 * a);
                let a3 = pdf3(&g3, &[0.4, -0.2, 0.6], [0.0, 0.0], [d, -d]);
                let b3 = pdf3(&g3, &[0.4, -0.2, 0.6], [shift, -shift], [shift + d, -shift - d]);
                assert!((a3 - b3).abs() <= 1e-12 * a3);
            }
        }
    }

    #[test]
    fn positive_on_the_receiver() {
        let g = geo(2, 1.0, 1.0);
        let g3 = geo(3, 1.0, 1.0);
        for v in [[1.0, 1.0], [-2.0, -3.0], [0.1, 4.0]] {
            for k in -20..=20 {
                let y = 0.5 * k as f64;
                assert!(pdf2(&g, &v, 0.0, y) > 0.0);
                assert!(pdf3(&g3, &[v[0], -v[0], v[1]], [0.0, 0.0], [y, 0.3 * y]) > 0.0);
            }
        }
    }

    #[test]
    fn arrival_probability_zero_drift() {
        for n in [2, 3] {
            let g = geo(n, 1.0, 1.0);
            let p = arrival_probability(&g, &DriftVector::zero(g.dimension)).unwrap();
            assert!((p - 1.0).abs() <= 1e-6, "n={n}: {p}");
        }
    }

    /// A Brownian motion started at height λ with vertical drift `w` hits
    /// zero with probability `exp(−2wλ/σ²)` for `w > 0`, and surely otherwise.
    fn hit_probability(lambda: f64, sigma2: f64, w: f64) -> f64 {
        if w > 0.0 {
            (-2.0 * w * lambda / sigma2).exp()
        } else {
            1.0
        }
    }

    #[test]
    fn arrival_probability_matches_hitting_law() {
        for (v1, v2) in [(0.0, -1.0), (0.5, -2.0), (0.0, 0.5), (1.0, 1.0), (-0.3, 2.0)] {
            let g = geo(2, 1.0, 1.0);
            let p = arrival_probability(&g, &drift(&[v1, v2])).unwrap();
            let want = hit_probability(1.0, 1.0, v2);
            assert!((p - want).abs() <= 1e-8, "v=({v1},{v2}) {p} vs {want}");
        }
        for v in [[0.0, 0.0, -1.0], [0.0, 0.0, 0.7], [0.4, -0.2, 0.5], [0.5, 0.5, -1.5]] {
            let g = geo(3, 1.2, 0.8);
            let p = arrival_probability(&g, &drift(&v)).unwrap();
            let want = hit_probability(1.2, 0.8, v[2]);
            assert!((p - want).abs() <= 1e-6, "v={v:?} {p} vs {want}");
        }
    }

    #[test]
    fn marginal_of_3d_is_2d() {
        use crate::quadrature::integrate_real_line;
        let lambda = 1.5;
        let g3 = geo(3, lambda, 1.0);
        let g2 = geo(2, lambda, 1.0);
        let d3 = FapDensity::new(g3, DriftVector::zero(g3.dimension), vec![0.0, 0.0]).unwrap();
        let d2 = FapDensity::new(g2, DriftVector::zero(g2.dimension), vec![0.0]).unwrap();
        let s = QuadSettings::default();
        for y1 in [-4.0, -0.5, 0.0, 1.0, 7.0] {
            let m = integrate_real_line(|y2| d3.pdf(&[y1, y2]), 0.0, lambda, &s).unwrap().value;
            assert!((m - d2.pdf(&[y1])).abs() <= 1e-6);
        }
    }

    #[test]
    fn grid_csv_layout() {
        let g = geo(3, 1.0, 1.0);
        let d = FapDensity::new(g, DriftVector::zero(g.dimension), vec![0.0, 0.0]).unwrap();
        let axes = [GridAxis::new(-1.0, 1.0, 3).unwrap(), GridAxis::new(0.0, 1.0, 2).unwrap()];
        let grid = DensityGrid::evaluate(&d, &axes).unwrap();
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "y1,y2,density");
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("-1,0,"));
        assert!(lines[2].starts_with("-1,1,"));
        assert!(lines[3].starts_with("0,0,"));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ChannelGeometry::new(Dimension::Two, 0.0, 1.0).is_err());
        assert!(ChannelGeometry::new(Dimension::Two, 1.0, -1.0).is_err());
        assert!(Dimension::from_n(4).is_err());
        let g = geo(2, 1.0, 1.0);
        let bad = fap_pdf_2d(&g, &drift(&[1.0, 1.0, 1.0]), &FapPoint::new(vec![0.0], vec![0.0]));
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }
}
