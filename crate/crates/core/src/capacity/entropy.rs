use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kdtree::KdTree2;
use crate::density::{entropy_by_quadrature, total_mass, Density};
use crate::error::{Error, Result};
use crate::quadrature::QuadSettings;
use crate::samples::PointCloud;
use crate::special::digamma;

/// Fewest samples accepted by the sample-based estimators.
pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    Quadrature,
    Knn,
    HistogramTransformed,
}

/// Differential entropy in nats with a standard error (0 for quadrature).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub method: EntropyMethod,
    pub std_error: f64,
}

#[derive(Clone, Copy)]
pub enum EntropyInput<'a> {
    Pdf(&'a dyn Density),
    Samples(&'a PointCloud),
}

pub fn entropy_estimate(input: EntropyInput<'_>, method: EntropyMethod) -> Result<EntropyEstimate> {
    match (input, method) {
        (EntropyInput::Pdf(d), EntropyMethod::Quadrature) => entropy_quadrature(d),
        (EntropyInput::Samples(s), EntropyMethod::Knn) => entropy_knn(s),
        (EntropyInput::Samples(s), EntropyMethod::HistogramTransformed) => entropy_histogram_transformed(s),
        (EntropyInput::Pdf(_), m) => Err(Error::Unsupported(format!("{m:?} estimator needs samples"))),
        (EntropyInput::Samples(_), m) => Err(Error::Unsupported(format!("{m:?} estimator needs a density"))),
    }
}

fn entropy_quadrature(d: &dyn Density) -> Result<EntropyEstimate> {
    let s = QuadSettings::default();
    let mass = total_mass(d, &s)?;
    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized { integral: mass });
    }
    Ok(EntropyEstimate {
        value: entropy_by_quadrature(d, &s)?,
        method: EntropyMethod::Quadrature,
        std_error: 0.0,
    })
}

fn check_samples(s: &PointCloud) -> Result<()> {
    if s.len() < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "entropy estimation needs at least {MIN_SAMPLES} samples, got {}",
            s.len()
        )));
    }
    if s.coords().iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter("non-finite sample".into()));
    }
    Ok(())
}

fn mean_and_se(terms: &[f64]) -> (f64, f64) {
    let n = terms.len() as f64;
    let mean = terms.iter().sum::<f64>() / n;
    let var = terms.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Kozachenko–Leonenko first-nearest-neighbour estimator
/// `ψ(n) − ψ(1) + ln V_p + (p/n) Σ ln ρᵢ`, with `V_p` the unit-ball volume
/// and `ρᵢ` the distance from sample `i` to its nearest neighbour. The
/// estimator is consistent but carries an `O(n^{−1/p})`-type bias that the
/// heavy tails make slow to vanish. `p ∈ {1, 2}`.
pub fn entropy_knn(s: &PointCloud) -> Result<EntropyEstimate> {
    check_samples(s)?;
    let n = s.len();
    let p = s.dim();
    let log_rho: Vec<f64> = match p {
        1 => {
            let mut xs = s.coords().to_vec();
            xs.sort_by(f64::total_cmp);
            (0..n)
                .map(|i| {
                    let left = if i > 0 { xs[i] - xs[i - 1] } else { f64::INFINITY };
                    let right = if i + 1 < n { xs[i + 1] - xs[i] } else { f64::INFINITY };
                    left.min(right).ln()
                })
                .collect()
        }
        2 => {
            let tree = KdTree2::new(s.iter().map(|y| [y[0], y[1]]));
            (0..n)
                .into_par_iter()
                .with_min_len(4096)
                .map(|i| 0.5 * tree.nearest_other_sq(i).ln())
                .collect()
        }
        _ => return Err(Error::Unsupported(format!("knn entropy in dimension {p}"))),
    };
    if log_rho.contains(&f64::NEG_INFINITY) {
        return Err(Error::Degenerate("duplicate samples give a zero neighbour distance".into()));
    }
    let ln_ball = match p {
        1 => 2f64.ln(),
        _ => PI.ln(),
    };
    let terms: Vec<f64> = log_rho.iter().map(|l| p as f64 * l).collect();
    let (mean, se) = mean_and_se(&terms);
    let offset = digamma(n as f64)? - digamma(1.0)? + ln_ball;
    Ok(EntropyEstimate {
        value: offset + mean,
        method: EntropyMethod::Knn,
        std_error: se,
    })
}

/// Univariate estimator: histogram entropy of `U = arctan(Y/s)` on
/// `(−π/2, π/2)` plus the exact Jacobian term `E ln(s (1 + (Y/s)²))`, with
/// `s` the median of `|Y|`. Bins: `⌈2 n^{1/3}⌉`.
fn entropy_histogram_transformed(s: &PointCloud) -> Result<EntropyEstimate> {
    check_samples(s)?;
    if s.dim() != 1 {
        return Err(Error::Unsupported("transformed histogram entropy is univariate".into()));
    }
    let n = s.len();
    let scale = s.median_norm();
    if !(scale > 0.0) {
        return Err(Error::Degenerate("median |y| is zero".into()));
    }
    let bins = (2.0 * (n as f64).cbrt()).ceil() as usize;
    let width = PI / bins as f64;
    let ys = s.coords();
    let bin_of = |y: f64| {
        let u = (y / scale).atan() + 0.5 * PI;
        ((u / width) as usize).min(bins - 1)
    };
    let mut counts = vec![0usize; bins];
    for &y in ys {
        counts[bin_of(y)] += 1;
    }
    let nf = n as f64;
    let terms: Vec<f64> = ys
        .iter()
        .map(|&y| {
            let dens = counts[bin_of(y)] as f64 / (nf * width);
            let z = y / scale;
            -dens.ln() + scale.ln() + (z * z).ln_1p()
        })
        .collect();
    let (mean, se) = mean_and_se(&terms);
    Ok(EntropyEstimate {
        value: mean,
        method: EntropyMethod::HistogramTransformed,
        std_error: se,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cauchy::{MultivariateCauchy, UnivariateCauchy};
    use crate::density::Scaled;

    #[test]
    fn quadrature_path() {
        let u = UnivariateCauchy::standard();
        let e = entropy_estimate(EntropyInput::Pdf(&u), EntropyMethod::Quadrature).unwrap();
        assert!((e.value - (4.0 * PI).ln()).abs() <= 1e-8);
        assert_eq!(e.std_error, 0.0);
        let m = MultivariateCauchy::isotropic(vec![0.0, 0.0], 1.0).unwrap();
        let e = entropy_estimate(EntropyInput::Pdf(&m), EntropyMethod::Quadrature).unwrap();
        assert!((e.value - ((2.0 * PI).ln() + 3.0)).abs() <= 1e-4);
    }

    struct Unnormalized(UnivariateCauchy);

    impl Density for Unnormalized {
        fn dim(&self) -> usize {
            1
        }
        fn pdf(&self, y: &[f64]) -> f64 {
            2.0 * self.0.pdf(y[0])
        }
        fn center(&self) -> [f64; 2] {
            [0.0, 0.0]
        }
        fn scale(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn rejects_unnormalized_density() {
        let d = Unnormalized(UnivariateCauchy::standard());
        assert!(matches!(
            entropy_estimate(EntropyInput::Pdf(&d), EntropyMethod::Quadrature),
            Err(Error::NotNormalized { .. })
        ));
        let ok = Scaled::new(UnivariateCauchy::standard(), 3.0).unwrap();
        let e = entropy_estimate(EntropyInput::Pdf(&ok), EntropyMethod::Quadrature).unwrap();
        assert!((e.value - (12.0 * PI).ln()).abs() <= 1e-8);
    }

    #[test]
    fn sample_estimators_reject_small_or_mismatched_input() {
        let few = PointCloud::from_scalars(vec![1.0; 10]);
        assert!(entropy_knn(&few).is_err());
        let u = UnivariateCauchy::standard();
        assert!(entropy_estimate(EntropyInput::Pdf(&u), EntropyMethod::Knn).is_err());
        let dup = PointCloud::from_scalars((0..2000).map(|i| (i / 2) as f64).collect());
        assert!(matches!(entropy_knn(&dup), Err(Error::Degenerate(_))));
    }

    #[test]
    fn knn_univariate_cauchy() {
        let s = PointCloud::from_scalars(UnivariateCauchy::standard().sample(200_000, 21));
        let e = entropy_knn(&s).unwrap();
        assert!((e.value - (4.0 * PI).ln()).abs() <= 4.0 * e.std_error + 0.005, "{e:?}");
    }

    #[test]
    fn knn_bivariate_cauchy() {
        let m = MultivariateCauchy::isotropic(vec![0.0, 0.0], 2.0).unwrap();
        let s = m.sample(200_000, 22);
        let e = entropy_knn(&s).unwrap();
        assert!((e.value - m.entropy()).abs() <= 4.0 * e.std_error + 0.01, "{e:?} vs {}", m.entropy());
    }

    #[test]
    fn knn_gaussian_oracle() {
        use rand::Rng;
        use rand_distr::StandardNormal;
        let mut rng = crate::rng::seeded(5);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let e = entropy_knn(&PointCloud::from_scalars(xs)).unwrap();
        let want = 0.5 * (2.0 * PI * std::f64::consts::E).ln();
        assert!((e.value - want).abs() <= 4.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn histogram_transformed_cauchy() {
        let s = PointCloud::from_scalars(UnivariateCauchy::new(0.0, 3.0).unwrap().sample(200_000, 23));
        let e = entropy_estimate(EntropyInput::Samples(&s), EntropyMethod::HistogramTransformed).unwrap();
        assert!((e.value - (12.0 * PI).ln()).abs() <= 4.0 * e.std_error + 0.005, "{e:?}");
    }
}
