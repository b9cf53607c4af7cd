//! Densities on ℝ and ℝ² and the quadrature-backed expectations over them.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_plane, integrate_radial_plane, integrate_real_line, QuadSettings};

/// A probability density on ℝ^dim with hints for the tail substitution.
pub trait Density {
    fn dim(&self) -> usize;

    /// Density at `y`; `y.len() == self.dim()`.
    fn pdf(&self, y: &[f64]) -> f64;

    /// Point the tan/polar substitution is centred on.
    fn center(&self) -> [f64; 2];

    /// Length scale of the tan substitution.
    fn scale(&self) -> f64;

    /// When the density depends only on `‖y − center‖`, its radial profile.
    fn radial_pdf(&self, _r: f64) -> Option<f64> {
        None
    }
}

impl<D: Density + ?Sized> Density for &D {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn pdf(&self, y: &[f64]) -> f64 {
        (**self).pdf(y)
    }
    fn center(&self) -> [f64; 2] {
        (**self).center()
    }
    fn scale(&self) -> f64 {
        (**self).scale()
    }
    fn radial_pdf(&self, r: f64) -> Option<f64> {
        (**self).radial_pdf(r)
    }
}

/// `E_f[g(Y)] = ∫ g(y) f(y) dy`, with `g` receiving the point `y` and the
/// density value there. Points where `f` vanishes contribute nothing.
pub fn expectation<D, G>(d: &D, mut g: G, settings: &QuadSettings) -> Result<f64>
where
    D: Density + ?Sized,
    G: FnMut(&[f64], f64) -> f64,
{
    let c = d.center();
    let s = d.scale();
    match d.dim() {
        1 => integrate_real_line(
            |y| {
                let f = d.pdf(&[y]);
                if f == 0.0 {
                    0.0
                } else {
                    g(&[y], f) * f
                }
            },
            c[0],
            s,
            settings,
        )
        .map(|i| i.value),
        2 => integrate_plane(
            |a, b| {
                let y = [a, b];
                let f = d.pdf(&y);
                if f == 0.0 {
                    0.0
                } else {
                    g(&y, f) * f
                }
            },
            c,
            s,
            settings,
        )
        .map(|i| i.value),
        p => Err(Error::Unsupported(format!("quadrature in dimension {p}"))),
    }
}

/// `E_f[g(‖Y‖, f(Y))]`. Densities that are isotropic about the origin are
/// reduced to a single radial integral.
pub fn expectation_of_norm<D, G>(d: &D, mut g: G, settings: &QuadSettings) -> Result<f64>
where
    D: Density + ?Sized,
    G: FnMut(f64, f64) -> f64,
{
    if d.dim() == 2 && d.center() == [0.0, 0.0] && d.radial_pdf(0.0).is_some() {
        return integrate_radial_plane(
            |r| {
                let f = d.radial_pdf(r).unwrap_or(0.0);
                if f == 0.0 {
                    0.0
                } else {
                    g(r, f) * f
                }
            },
            d.scale(),
            settings,
        )
        .map(|i| i.value);
    }
    expectation(d, |y, f| g(y.iter().map(|v| v * v).sum::<f64>().sqrt(), f), settings)
}

/// Total probability mass `∫ f`.
pub fn total_mass<D: Density + ?Sized>(d: &D, settings: &QuadSettings) -> Result<f64> {
    expectation_of_norm(d, |_, _| 1.0, settings)
}

/// `−∫ f ln f` by quadrature.
pub fn entropy_by_quadrature<D: Density + ?Sized>(d: &D, settings: &QuadSettings) -> Result<f64> {
    expectation_of_norm(d, |_, f| -f.ln(), settings)
}

/// Density of `c·Y` for a density of `Y` and a nonzero constant `c`.
#[derive(Debug, Clone)]
pub struct Scaled<D> {
    inner: D,
    factor: f64,
}

impl<D: Density> Scaled<D> {
    pub fn new(inner: D, factor: f64) -> Result<Self> {
        if factor == 0.0 || !factor.is_finite() {
            return Err(crate::error::invalid("scaling factor must be finite and nonzero"));
        }
        Ok(Self { inner, factor })
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }
}

impl<D: Density> Density for Scaled<D> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn pdf(&self, y: &[f64]) -> f64 {
        let jac = self.factor.abs().powi(self.dim() as i32);
        match y.len() {
            1 => self.inner.pdf(&[y[0] / self.factor]) / jac,
            2 => self.inner.pdf(&[y[0] / self.factor, y[1] / self.factor]) / jac,
            _ => {
                let z: Vec<f64> = y.iter().map(|v| v / self.factor).collect();
                self.inner.pdf(&z) / jac
            }
        }
    }

    fn center(&self) -> [f64; 2] {
        let c = self.inner.center();
        [c[0] * self.factor, c[1] * self.factor]
    }

    fn scale(&self) -> f64 {
        self.inner.scale() * self.factor.abs()
    }

    fn radial_pdf(&self, r: f64) -> Option<f64> {
        let jac = self.factor.abs().powi(self.dim() as i32);
        self.inner.radial_pdf(r / self.factor.abs()).map(|f| f / jac)
    }
}
