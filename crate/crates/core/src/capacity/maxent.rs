//! Maximum entropy under the logarithmic constraint.
//!
//! The stationary points of `h(f) − β E_f ln(1 + ‖y/k‖²)` are the profiles
//! `f_μ(y) ∝ (1 + ‖y/k‖²)^{−μ}` with `μ > p/2`. Their normalizer and
//! constraint value are computed here by quadrature in `θ = arctan ‖y/k‖`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::dispersion::{solve_decreasing_in_scale, ConstraintSpec};
use crate::density::Density;
use crate::error::{invalid, Error, Result};
use crate::quadrature::tanh_sinh;
use crate::special::log_gamma;

const TS_TOL: f64 = 1e-14;

fn check_mu(mu: f64, p: usize) -> Result<()> {
    if p == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if !(mu > 0.5 * p as f64) || !mu.is_finite() {
        return Err(Error::Domain {
            function: "lagrangian family",
            arg: mu,
            reason: "exponent must exceed p/2 for a normalizable profile",
        });
    }
    Ok(())
}

/// Surface area of the unit sphere in ℝ^p.
fn sphere_area(p: usize) -> f64 {
    let half = 0.5 * p as f64;
    2.0 * (half * PI.ln() - log_gamma(half).expect("positive")).exp()
}

/// `(ln ∫ w, ∫ w·g / ∫ w)` for the radial weight of `f_μ` written in
/// `x = π/2 − arctan r`, where `w = sin^a x · cos^{p−1} x` with
/// `a = 2μ − 1 − p > −1`. `g` receives `(sin x, cos x, ln sin x)`.
///
/// For `a < 0` the endpoint singularity is removed by `x = (π/2) v^{1/(a+1)}`.
fn radial_expectation<G: Fn(f64, f64, f64) -> f64>(mu: f64, p: usize, g: G) -> Result<(f64, f64)> {
    let a = 2.0 * mu - 1.0 - p as f64;
    let pm1 = (p - 1) as i32;
    if a >= 0.0 {
        let w = |dl: f64, dr: f64| {
            let (sx, cx) = (dl.sin(), dr.sin());
            let ls = sx.ln();
            ((ls * a).exp() * cx.powi(pm1), sx, cx, ls)
        };
        let mass = tanh_sinh(|_, dl, dr| w(dl, dr).0, 0.0, FRAC_PI_2, TS_TOL)?.value;
        let moment = tanh_sinh(
            |_, dl, dr| {
                let (wv, sx, cx, ls) = w(dl, dr);
                if wv == 0.0 {
                    0.0
                } else {
                    wv * g(sx, cx, ls)
                }
            },
            0.0,
            FRAC_PI_2,
            TS_TOL,
        )?
        .value;
        return Ok((mass.ln(), moment / mass));
    }
    let b = a + 1.0;
    let w = |v: f64| {
        let lx = FRAC_PI_2.ln() + v.ln() / b;
        let x = lx.exp();
        let (sx, cx) = x.sin_cos();
        // (sin x / x)^a, with sin x / x → 1 as x → 0.
        let sinc = if x < 1e-8 { 1.0 - x * x / 6.0 } else { sx / x };
        let ls = lx + sinc.ln();
        ((sinc.ln() * a).exp() * cx.powi(pm1), sx, cx, ls)
    };
    let mass = tanh_sinh(|_, dl, _| w(dl).0, 0.0, 1.0, TS_TOL)?.value;
    let moment = tanh_sinh(
        |_, dl, _| {
            let (wv, sx, cx, ls) = w(dl);
            if wv == 0.0 {
                0.0
            } else {
                wv * g(sx, cx, ls)
            }
        },
        0.0,
        1.0,
        TS_TOL,
    )?
    .value;
    let log_prefactor = b * FRAC_PI_2.ln() - b.ln();
    Ok((log_prefactor + mass.ln(), moment / mass))
}

/// `∫_{ℝ^p} (1 + ‖y‖²)^{−μ} dy`.
pub fn family_normalizer(mu: f64, p: usize) -> Result<f64> {
    check_mu(mu, p)?;
    let (log_mass, _) = radial_expectation(mu, p, |_, _, _| 0.0)?;
    Ok(sphere_area(p) * log_mass.exp())
}

/// `E ln(1 + ‖Y‖²)` under `f_μ` with unit scale.
pub fn constraint_value(mu: f64, p: usize) -> Result<f64> {
    family_log_moment(mu, p, 1.0)
}

/// `E ln(1 + ‖Y/k‖²)` under `f_μ` with unit scale.
pub fn family_log_moment(mu: f64, p: usize, k: f64) -> Result<f64> {
    check_mu(mu, p)?;
    if !(k > 0.0) || !k.is_finite() {
        return Err(invalid(format!("scale must be positive, got {k}")));
    }
    let (lk, k2) = (k.ln(), k * k);
    // ln(1 + cot² x / k²) = ln(k² sin² x + cos² x) − 2 ln k − 2 ln sin x
    let g = |sx: f64, cx: f64, ls: f64| (k2 * sx * sx + cx * cx).ln() - 2.0 * lk - 2.0 * ls;
    Ok(radial_expectation(mu, p, g)?.1)
}

/// `f(y) = (1 + ‖y/k‖²)^{−μ} / (k^p Z(μ))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianDensity {
    p: usize,
    mu: f64,
    k: f64,
    log_norm: f64,
}

impl LagrangianDensity {
    pub fn new(p: usize, mu: f64, k: f64) -> Result<Self> {
        if !(1..=2).contains(&p) {
            return Err(Error::Unsupported(format!("profile densities in dimension {p}")));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(invalid(format!("profile scale must be positive, got {k}")));
        }
        let z = family_normalizer(mu, p)?;
        Ok(Self {
            p,
            mu,
            k,
            log_norm: z.ln() + p as f64 * k.ln(),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `h(f) = ln(k^p Z) + μ E ln(1 + ‖Y/k‖²)`.
    pub fn entropy(&self) -> Result<f64> {
        Ok(self.log_norm + self.mu * constraint_value(self.mu, self.p)?)
    }

    fn at_radius(&self, r: f64) -> f64 {
        let z = r / self.k;
        (-self.log_norm - self.mu * (z * z).ln_1p()).exp()
    }
}

impl Density for LagrangianDensity {
    fn dim(&self) -> usize {
        self.p
    }
    fn pdf(&self, y: &[f64]) -> f64 {
        self.at_radius(y.iter().map(|v| v * v).sum::<f64>().sqrt())
    }
    fn center(&self) -> [f64; 2] {
        [0.0, 0.0]
    }
    fn scale(&self) -> f64 {
        self.k
    }
    fn radial_pdf(&self, r: f64) -> Option<f64> {
        (self.p == 2).then(|| self.at_radius(r))
    }
}

/// The max-entropy solution at scale `k`: exponent, entropy and the
/// normalized profile on a grid of radii `[0, 10k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxEntProfile {
    pub p: usize,
    pub k: f64,
    pub target: f64,
    pub mu: f64,
    /// `∫ (1 + ‖y/k‖²)^{−μ} dy`.
    pub normalizer: f64,
    pub entropy: f64,
    pub radii: Vec<f64>,
    pub density: Vec<f64>,
}

/// Solve for `μ` with `E_{f_μ} ln(1 + ‖Y/k‖²) = c` by bisection; the
/// constraint value falls strictly from `+∞` at `μ = p/2` to 0 as `μ → ∞`.
pub fn maxent_profile(spec: &ConstraintSpec, k: f64) -> Result<MaxEntProfile> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(invalid(format!("scale must be positive, got {k}")));
    }
    let p = spec.p;
    let c = spec.target;
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid(format!("constraint value {c} is outside the attainable range (0, ∞)")));
    }
    let half = 0.5 * p as f64;
    let value = |eps: f64| constraint_value(half + eps, p);
    let (mut lo, mut hi) = (0.25, 2.0);
    while value(lo)? < c {
        lo *= 0.25;
        if lo < 1e-6 {
            return Err(invalid(format!("constraint value {c} is beyond the attainable range")));
        }
    }
    while value(hi)? > c {
        hi *= 4.0;
        if hi > 1e8 {
            return Err(invalid(format!("constraint value {c} is below the attainable range")));
        }
    }
    while hi - lo > 1e-14 * (half + hi) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if value(mid)? > c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = half + 0.5 * (lo + hi);
    let normalizer = family_normalizer(mu, p)? * k.powi(p as i32);
    let radii: Vec<f64> = (0..=200).map(|i| 0.05 * k * i as f64).collect();
    let density = radii
        .iter()
        .map(|&r| (-normalizer.ln() - mu * ((r / k) * (r / k)).ln_1p()).exp())
        .collect();
    Ok(MaxEntProfile {
        p,
        k,
        target: c,
        mu,
        normalizer,
        entropy: normalizer.ln() + mu * c,
        radii,
        density,
    })
}

/// One scanned member of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub mu: f64,
    pub k: f64,
    pub dispersion: f64,
    pub entropy: f64,
}

/// Outcome of scanning the family at dispersion budget `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub p: usize,
    pub a: f64,
    pub achieving_mu: f64,
    pub achieving_entropy: f64,
    pub scanned: Vec<FamilyPoint>,
    /// `max h(f_μ) − h(achiever)` over the scan.
    pub max_excess: f64,
}

/// Scan `f_μ` over a grid of exponents, each at scales giving dispersion
/// `A`, `0.9A` and `0.5A`, and compare entropies with the achiever.
pub fn certify_maxent(p: usize, a: f64) -> Result<Certification> {
    let spec = ConstraintSpec::new(p)?;
    let best = maxent_profile(&spec, a)?;
    let half = 0.5 * p as f64;
    let mut scanned = Vec::new();
    for i in 0..40 {
        // ε from 0.05 to 20, geometric.
        let eps = 0.05 * (400f64).powf(i as f64 / 39.0);
        let mu = half + eps;
        let d1 = solve_decreasing_in_scale(|k| Ok(family_log_moment(mu, p, k)? - spec.target), 1.0)?;
        let h1 = family_normalizer(mu, p)?.ln() + mu * constraint_value(mu, p)?;
        for frac in [1.0, 0.9, 0.5] {
            let k = frac * a / d1;
            scanned.push(FamilyPoint {
                mu,
                k,
                dispersion: frac * a,
                entropy: h1 + p as f64 * k.ln(),
            });
        }
    }
    let max_excess = scanned
        .iter()
        .map(|f| f.entropy - best.entropy)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Certification {
        p,
        a,
        achieving_mu: best.mu,
        achieving_entropy: best.entropy,
        scanned,
        max_excess,
    })
}

/// Free-form discrete maximum entropy for `p = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeFormMaxEnt {
    pub cells: usize,
    /// Multiplier of the constraint in the dual.
    pub beta: f64,
    /// Exponent of the implied density of `Y`: `μ = 1 + β`.
    pub implied_mu: f64,
    pub entropy: f64,
}

/// Maximize `h(Y)` subject to `E ln(1 + Y²) = c` over all densities, by
/// passing to `U = arctan Y` and discretizing `U` into `cells` equal cells.
///
/// `h(Y) = h(U) + E ln(1 + Y²)`, so the problem is a discrete max-entropy
/// with one linear constraint, solved through its one-dimensional dual:
/// `q_j ∝ exp(−β g_j)` with `g_j = −2 ln cos u_j`.
pub fn maxent_free_form_1d(c: f64, cells: usize) -> Result<FreeFormMaxEnt> {
    if cells < 10 {
        return Err(invalid("need at least 10 cells"));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid(format!("constraint value must be positive, got {c}")));
    }
    let width = PI / cells as f64;
    let g: Vec<f64> = (0..cells)
        .map(|j| {
            let dist = width * (j as f64 + 0.5).min(cells as f64 - j as f64 - 0.5);
            -2.0 * dist.sin().ln()
        })
        .collect();
    let gmax = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if c >= gmax {
        return Err(invalid(format!("constraint value {c} is not attainable on {cells} cells")));
    }
    // Mean of g under q_β, shifted by min g (= 0) for stability.
    let mean_g = |beta: f64| {
        let (mut z, mut m) = (0.0, 0.0);
        for &gj in &g {
            let w = (-beta * gj).exp();
            z += w;
            m += w * gj;
        }
        m / z
    };
    let (mut lo, mut hi) = (-1.0, 1.0);
    while mean_g(lo) < c {
        lo *= 2.0;
        if lo < -1e6 {
            return Err(Error::Bracket("free-form dual".into()));
        }
    }
    while mean_g(hi) > c {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Bracket("free-form dual".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mean_g(mid) > c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let weights: Vec<f64> = g.iter().map(|gj| (-beta * gj).exp()).collect();
    let z: f64 = weights.iter().sum();
    let h_u: f64 = weights
        .iter()
        .map(|w| {
            let q = w / z;
            if q > 0.0 {
                -q * (q / width).ln()
            } else {
                0.0
            }
        })
        .sum();
    let e_g: f64 = weights.iter().zip(&g).map(|(w, gj)| w / z * gj).sum();
    Ok(FreeFormMaxEnt {
        cells,
        beta,
        implied_mu: 1.0 + beta,
        entropy: h_u + e_g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{entropy_by_quadrature, total_mass};
    use crate::quadrature::QuadSettings;
    use crate::special::digamma;
    use std::f64::consts::LN_2;

    fn closed_form_constraint(mu: f64, p: usize) -> f64 {
        digamma(mu).unwrap() - digamma(mu - 0.5 * p as f64).unwrap()
    }

    fn closed_form_normalizer(mu: f64, p: usize) -> f64 {
        let half = 0.5 * p as f64;
        (half * PI.ln() + log_gamma(mu - half).unwrap() - log_gamma(mu).unwrap()).exp()
    }

    #[test]
    fn family_integrals_match_closed_forms() {
        for p in [1, 2, 3] {
            for eps in [0.02, 0.3, 1.0, 4.0, 25.0] {
                let mu = 0.5 * p as f64 + eps;
                let got = constraint_value(mu, p).unwrap();
                let want = closed_form_constraint(mu, p);
                assert!((got - want).abs() <= 1e-9 * want.max(1.0), "p={p} mu={mu}: {got} vs {want}");
                let z = family_normalizer(mu, p).unwrap();
                let zw = closed_form_normalizer(mu, p);
                assert!((z - zw).abs() <= 1e-10 * zw, "p={p} mu={mu}: {z} vs {zw}");
            }
        }
        assert!(constraint_value(0.5, 1).is_err());
    }

    #[test]
    fn solves_standard_constraints() {
        let p1 = maxent_profile(&ConstraintSpec::new(1).unwrap(), 1.0).unwrap();
        assert!((p1.mu - 1.0).abs() <= 1e-6);
        assert!((p1.entropy - (4.0 * PI).ln()).abs() <= 1e-9);
        let p2 = maxent_profile(&ConstraintSpec::new(2).unwrap(), 2.0).unwrap();
        assert!((p2.mu - 1.5).abs() <= 1e-6);
        assert!((p2.entropy - (2.0 * PI * 3f64.exp() * 4.0).ln()).abs() <= 1e-9);
        // Cauchy(0, 1) at the origin.
        assert!((p1.density[0] - 1.0 / PI).abs() <= 1e-9);
    }

    #[test]
    fn exponent_decreases_with_target() {
        let mus: Vec<f64> = [1.0, 2.0 * LN_2, 2.0]
            .iter()
            .map(|&c| maxent_profile(&ConstraintSpec::with_target(1, c).unwrap(), 1.0).unwrap().mu)
            .collect();
        assert!(mus[0] > mus[1] && mus[1] > mus[2], "{mus:?}");
        assert!(maxent_profile(&ConstraintSpec { p: 1, target: 0.0 }, 1.0).is_err());
    }

    #[test]
    fn lagrangian_density_is_normalized() {
        let s = QuadSettings::default();
        for (p, mu) in [(1, 1.2), (1, 3.0), (2, 1.7), (2, 4.0)] {
            let d = LagrangianDensity::new(p, mu, 1.7).unwrap();
            assert!((total_mass(&d, &s).unwrap() - 1.0).abs() <= 1e-8);
            let h = entropy_by_quadrature(&d, &s).unwrap();
            assert!((h - d.entropy().unwrap()).abs() <= 1e-7);
        }
    }

    #[test]
    fn family_dispersion_agrees_with_generic_path() {
        use super::super::dispersion::{dispersion_of, Source};
        let spec = ConstraintSpec::new(1).unwrap();
        for mu in [1.2, 2.0, 5.0] {
            let d = LagrangianDensity::new(1, mu, 1.0).unwrap();
            let generic = dispersion_of(Source::Pdf(&d), &spec).unwrap();
            let family = solve_decreasing_in_scale(|k| Ok(family_log_moment(mu, 1, k)? - spec.target), 1.0).unwrap();
            assert!((generic - family).abs() <= 1e-9 * family, "{mu}: {generic} vs {family}");
        }
    }

    #[test]
    fn certification_bounds_the_family() {
        for (p, a) in [(1, 2.0), (2, 2.0)] {
            let c = certify_maxent(p, a).unwrap();
            assert!(c.max_excess <= 1e-6, "p={p}: {}", c.max_excess);
            assert!(c.max_excess > -0.1);
        }
    }

    #[test]
    fn free_form_recovers_cauchy() {
        let ff = maxent_free_form_1d(2.0 * LN_2, 100_000).unwrap();
        assert!((ff.implied_mu - 1.0).abs() <= 1e-3, "{ff:?}");
        assert!((ff.entropy - (4.0 * PI).ln()).abs() <= 1e-3);
        for c in [1.0, 2.0] {
            let ff = maxent_free_form_1d(c, 100_000).unwrap();
            let lag = maxent_profile(&ConstraintSpec::with_target(1, c).unwrap(), 1.0).unwrap();
            assert!((ff.implied_mu - lag.mu).abs() <= 2e-3, "{c}: {ff:?} vs {}", lag.mu);
            assert!((ff.entropy - lag.entropy).abs() <= 2e-3);
        }
    }
}
