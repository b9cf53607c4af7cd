//! Numerical integration used by every analytic check in the crate.
//!
//! Heavy-tailed densities are integrated over ℝ through `y = c + s·tan θ`
//! and over the plane through polar coordinates with the radial
//! substitution `r = s·tan θ`, so the tails land on a bounded interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Tolerances for the adaptive rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl QuadSettings {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    // QUADPACK error scaling.
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let resabs = abs_k * half.abs();
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: err,
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` on `[a, b]`.
/// Non-finite integrand values are an error reported through the estimate.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, s: &QuadSettings) -> Result<Integral> {
    let first = gk15(&mut f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut evaluations = 15;
    while error > s.abs_tol.max(s.rel_tol * value.abs()) {
        if !value.is_finite() {
            break;
        }
        if heap.len() >= s.max_intervals {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                intervals: heap.len(),
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point.
            heap.push(worst);
            break;
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed drift from the incremental updates.
    let (mut v, mut e) = (0.0, 0.0);
    for seg in heap.iter() {
        v += seg.value;
        e += seg.error;
    }
    if !v.is_finite() || e > s.abs_tol.max(s.rel_tol * v.abs()) * 10.0 {
        return Err(Error::Quadrature {
            estimate: v,
            error: e,
            intervals: heap.len(),
        });
    }
    Ok(Integral {
        value: v,
        error: e,
        evaluations,
    })
}

/// Tanh–sinh (double exponential) quadrature on `[a, b]` for integrands
/// with algebraic or logarithmic endpoint singularities.
///
/// The integrand receives `(x, x − a, b − x)`, with the endpoint distances
/// computed without cancellation so that singular factors can be evaluated
/// accurately close to the ends.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    let half = 0.5 * (b - a);
    let t_max = 6.5;
    let mut h = 1.0;
    let mut evaluations = 0;

    let node = |t: f64, f: &mut F| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        // 1 - tanh(u) = 2 / (1 + e^{2u}) without cancellation.
        let comp = 2.0 / (1.0 + (2.0 * u).exp());
        let comp_neg = 2.0 / (1.0 + (-2.0 * u).exp());
        let weight = FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        if weight == 0.0 {
            return 0.0;
        }
        let dl = half * comp_neg; // x - a
        let dr = half * comp; // b - x
        if dl <= 0.0 || dr <= 0.0 {
            return 0.0;
        }
        let x = if dl < dr { a + dl } else { b - dr };
        let v = f(x, dl, dr);
        if v == 0.0 {
            0.0
        } else {
            v * weight
        }
    };

    let mut sum = node(0.0, &mut f);
    evaluations += 1;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > t_max {
            break;
        }
        sum += node(t, &mut f) + node(-t, &mut f);
        evaluations += 2;
        k += 1;
    }
    let mut estimate = sum * h * half;
    for _level in 0..12 {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            sum += node(t, &mut f) + node(-t, &mut f);
            evaluations += 2;
            k += 2;
        }
        let refined = sum * h * half;
        let diff = (refined - estimate).abs();
        estimate = refined;
        if diff <= tol.max(tol * refined.abs()) && h < 0.2 {
            return Ok(Integral {
                value: refined,
                error: diff,
                evaluations,
            });
        }
    }
    Err(Error::Quadrature {
        estimate,
        error: f64::NAN,
        intervals: evaluations,
    })
}

/// `∫_ℝ f(y) dy` through `y = center + scale·tan θ`.
pub fn integrate_real_line<F: FnMut(f64) -> f64>(
    mut f: F,
    center: f64,
    scale: f64,
    s: &QuadSettings,
) -> Result<Integral> {
    integrate(
        |theta| {
            let t = theta.tan();
            let v = f(center + scale * t);
            if v == 0.0 {
                0.0
            } else {
                v * scale * (1.0 + t * t)
            }
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        s,
    )
}

/// `∫_ℝ² f(y) dy` in polar coordinates about `center` with radial
/// substitution `r = scale·tan θ`. `f` receives the point `(y1, y2)`.
pub fn integrate_plane<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    center: [f64; 2],
    scale: f64,
    s: &QuadSettings,
) -> Result<Integral> {
    let inner = QuadSettings {
        abs_tol: s.abs_tol * 0.1,
        rel_tol: s.rel_tol * 0.1,
        ..*s
    };
    let mut inner_err: Option<Error> = None;
    let mut inner_evals = 0;
    let outer = integrate(
        |phi| {
            let (sp, cp) = phi.sin_cos();
            let radial = integrate(
                |theta| {
                    let t = theta.tan();
                    let r = scale * t;
                    let v = f(center[0] + r * cp, center[1] + r * sp);
                    if v == 0.0 {
                        0.0
                    } else {
                        v * r * scale * (1.0 + t * t)
                    }
                },
                0.0,
                FRAC_PI_2,
                &inner,
            );
            match radial {
                Ok(i) => {
                    inner_evals += i.evaluations;
                    i.value
                }
                Err(e) => {
                    inner_err.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        2.0 * PI,
        s,
    );
    if let Some(e) = inner_err {
        return Err(e);
    }
    outer.map(|i| Integral {
        evaluations: inner_evals,
        ..i
    })
}

/// `∫_ℝ² f(‖y‖) dy = 2π ∫₀^∞ f(r) r dr` for isotropic integrands.
pub fn integrate_radial_plane<F: FnMut(f64) -> f64>(mut f: F, scale: f64, s: &QuadSettings) -> Result<Integral> {
    integrate(
        |theta| {
            let t = theta.tan();
            let r = scale * t;
            let v = f(r);
            if v == 0.0 {
                0.0
            } else {
                2.0 * PI * v * r * scale * (1.0 + t * t)
            }
        },
        0.0,
        FRAC_PI_2,
        s,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let i = integrate(|x| 3.0 * x * x, 0.0, 2.0, &QuadSettings::default()).unwrap();
        assert!((i.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn log_endpoint_singularity() {
        // ∫₀¹ ln x dx = -1
        let i = integrate(|x| x.ln(), 0.0, 1.0, &QuadSettings::default()).unwrap();
        assert!((i.value + 1.0).abs() < 1e-12, "{}", i.value);
    }

    #[test]
    fn tanh_sinh_power_singularity() {
        // ∫₀¹ x^{-0.9} dx = 10, evaluated through the endpoint distance.
        let i = tanh_sinh(|_x, dl, _dr| dl.powf(-0.9), 0.0, 1.0, 1e-12).unwrap();
        assert!((i.value - 10.0).abs() < 1e-9, "{}", i.value);
        // ∫₀¹ (1-x)^{-1/2} dx = 2
        let i = tanh_sinh(|_x, _dl, dr| dr.powf(-0.5), 0.0, 1.0, 1e-13).unwrap();
        assert!((i.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn real_line_cauchy_mass() {
        for scale in [0.1, 1.0, 10.0] {
            let f = |y: f64| scale / (PI * (y * y + scale * scale));
            let i = integrate_real_line(f, 0.0, scale, &QuadSettings::default()).unwrap();
            assert!((i.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_gaussian_mass() {
        let f = |a: f64, b: f64| (-(a * a + b * b) / 2.0).exp() / (2.0 * PI);
        let i = integrate_plane(f, [0.3, -0.2], 1.0, &QuadSettings::with_tol(1e-10, 1e-10)).unwrap();
        assert!((i.value - 1.0).abs() < 1e-9);
        let r = integrate_radial_plane(|r| (-(r * r) / 2.0).exp() / (2.0 * PI), 1.0, &QuadSettings::default())
            .unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reports_failure() {
        let s = QuadSettings {
            max_intervals: 3,
            ..QuadSettings::default()
        };
        assert!(matches!(
            integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, &s),
            Err(Error::Quadrature { .. })
        ));
    }
}
