//! Monte Carlo first-arrival simulation.
//!
//! [`simulate_first_arrival`] integrates drifted Brownian motion with the
//! Euler–Maruyama scheme until the traversal coordinate crosses the
//! receiver. [`sample_exact_zero_drift`] draws the zero-drift arrival law
//! exactly through the first-passage time of the traversal coordinate.
//!
//! The transverse coordinates are independent of the traversal path, so only
//! the traversal coordinate is stepped. At the crossing step `n` with
//! crossing fraction `f`, the interpolated transverse position
//! `X_{n−1} + f (X_n − X_{n−1})` is drawn directly from its conditional law
//! `x + v⊥ t + σ (√((n−1)dt) G₁ + f √dt G₂)`, which matches stepping every
//! coordinate.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fap::{ChannelGeometry, DriftVector};
use crate::rng;
use crate::samples::PointCloud;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FAPLAB_THREADS";

/// Censored fractions above this attach a warning to the sample set.
pub const CENSOR_WARN_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingRule {
    #[default]
    LinearInterpolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub geometry: ChannelGeometry,
    pub drift: DriftVector,
    pub dt: f64,
    pub n_particles: usize,
    pub max_steps: u64,
    pub seed: u64,
    pub crossing_rule: CrossingRule,
}

impl SimConfig {
    pub fn new(
        geometry: ChannelGeometry,
        drift: DriftVector,
        dt: f64,
        n_particles: usize,
        max_steps: u64,
        seed: u64,
    ) -> Result<Self> {
        let cfg = Self {
            geometry,
            drift,
            dt,
            n_particles,
            max_steps,
            seed,
            crossing_rule: CrossingRule::LinearInterpolation,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.drift.len() != self.geometry.dimension.n() {
            return Err(Error::DimensionMismatch {
                expected: self.geometry.dimension.n(),
                got: self.drift.len(),
            });
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.n_particles == 0 {
            return Err(invalid("need at least one particle"));
        }
        if self.max_steps == 0 {
            return Err(invalid("max_steps must be at least 1"));
        }
        Ok(())
    }
}

/// How a sample set was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "sampler", rename_all = "snake_case")]
pub enum Provenance {
    EulerMaruyama { config: SimConfig, x_in: Vec<f64> },
    ExactZeroDrift {
        geometry: ChannelGeometry,
        x_in: Vec<f64>,
        n: usize,
        seed: u64,
    },
}

/// Arrival positions and times of the absorbed particles, in particle order.
#[derive(Debug, Clone, PartialEq)]
pub struct FapSampleSet {
    pub positions: PointCloud,
    pub hit_times: Vec<f64>,
    pub particle_ids: Vec<u64>,
    pub censored_ids: Vec<u64>,
    pub provenance: Provenance,
    pub warning: Option<String>,
}

impl FapSampleSet {
    pub fn n_particles(&self) -> usize {
        self.particle_ids.len() + self.censored_ids.len()
    }

    pub fn censored_count(&self) -> usize {
        self.censored_ids.len()
    }

    pub fn censored_fraction(&self) -> f64 {
        self.censored_count() as f64 / self.n_particles() as f64
    }

    /// Fraction of particles absorbed within the step cap.
    pub fn hit_fraction(&self) -> f64 {
        self.particle_ids.len() as f64 / self.n_particles() as f64
    }

    /// One row per particle: `particle_id,y1[,y2],hit_time,censored`.
    /// Censored rows leave the position and time fields empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let dim = self.positions.dim();
        let ys: Vec<String> = (1..=dim).map(|i| format!("y{i}")).collect();
        writeln!(w, "particle_id,{},hit_time,censored", ys.join(","))?;
        let blanks = ",".repeat(dim);
        let mut hit = 0;
        let mut cen = 0;
        while hit < self.particle_ids.len() || cen < self.censored_ids.len() {
            let take_hit = cen >= self.censored_ids.len()
                || (hit < self.particle_ids.len() && self.particle_ids[hit] < self.censored_ids[cen]);
            if take_hit {
                write!(w, "{}", self.particle_ids[hit])?;
                for c in self.positions.point(hit) {
                    write!(w, ",{c}")?;
                }
                writeln!(w, ",{},0", self.hit_times[hit])?;
                hit += 1;
            } else {
                writeln!(w, "{}{blanks},,1", self.censored_ids[cen])?;
                cen += 1;
            }
        }
        Ok(())
    }

    /// Configuration echo written next to the CSV.
    pub fn sidecar(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.provenance).expect("provenance serializes");
        let obj = v.as_object_mut().expect("tagged enum is an object");
        if let Some(cfg) = obj.remove("config") {
            for (k, val) in cfg.as_object().expect("config is an object") {
                obj.insert(k.clone(), val.clone());
            }
        }
        if let Some(g) = obj.remove("geometry") {
            for (k, val) in g.as_object().expect("geometry is an object") {
                obj.insert(k.clone(), val.clone());
            }
        }
        obj.insert("n_absorbed".into(), self.particle_ids.len().into());
        obj.insert("censored_count".into(), self.censored_count().into());
        obj.insert("warning".into(), self.warning.clone().into());
        obj.insert("version".into(), crate::VERSION.into());
        v
    }
}

/// Runs `f` on a pool sized by [`THREADS_ENV`] when set, else the global pool.
pub fn with_worker_pool<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => {
            let n: usize = s
                .trim()
                .parse()
                .map_err(|_| invalid(format!("{THREADS_ENV} must be a positive integer, got {s:?}")))?;
            if n == 0 {
                return Err(invalid(format!("{THREADS_ENV} must be positive")));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

enum Outcome {
    Hit { t: f64, pos: [f64; 2] },
    Censored,
}

fn check_x_in(g: &ChannelGeometry, x_in: &[f64]) -> Result<()> {
    let want = g.dimension.transverse();
    if x_in.len() != want {
        return Err(Error::DimensionMismatch { expected: want, got: x_in.len() });
    }
    if x_in.iter().any(|c| !c.is_finite()) {
        return Err(invalid("release point must be finite"));
    }
    Ok(())
}

fn run_particle(cfg: &SimConfig, x_in: &[f64], index: u64) -> Outcome {
    let mut rng = rng::stream(cfg.seed, index);
    let g = &cfg.geometry;
    let sigma = g.sigma2.sqrt();
    let sd = (g.sigma2 * cfg.dt).sqrt();
    let step_drift = cfg.drift.traversal() * cfg.dt;
    let mut z = g.lambda;
    let mut n: u64 = 0;
    while n < cfg.max_steps {
        n += 1;
        let noise: f64 = rng.sample(StandardNormal);
        let next = z + step_drift + sd * noise;
        if next <= 0.0 {
            let f = z / (z - next);
            let prior = (n - 1) as f64 * cfg.dt;
            let t = prior + f * cfg.dt;
            let mut pos = [0.0; 2];
            for (p, (x, v)) in pos.iter_mut().zip(x_in.iter().zip(cfg.drift.transverse())) {
                let g1: f64 = rng.sample(StandardNormal);
                let g2: f64 = rng.sample(StandardNormal);
                *p = x + v * t + sigma * (prior.sqrt() * g1 + f * cfg.dt.sqrt() * g2);
            }
            return Outcome::Hit { t, pos };
        }
        z = next;
    }
    Outcome::Censored
}

fn collect(outcomes: Vec<Outcome>, dim: usize, provenance: Provenance) -> FapSampleSet {
    let mut positions = PointCloud::with_capacity(dim, outcomes.len());
    let mut hit_times = Vec::with_capacity(outcomes.len());
    let mut particle_ids = Vec::with_capacity(outcomes.len());
    let mut censored_ids = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Hit { t, pos } => {
                positions.push(&pos[..dim]);
                hit_times.push(t);
                particle_ids.push(i as u64);
            }
            Outcome::Censored => censored_ids.push(i as u64),
        }
    }
    let total = particle_ids.len() + censored_ids.len();
    let frac = censored_ids.len() as f64 / total as f64;
    let warning = (frac > CENSOR_WARN_FRACTION).then(|| {
        format!(
            "WARNING: {} of {} particles ({:.1}%) censored at the step cap; fit statistics use the rest only",
            censored_ids.len(),
            total,
            100.0 * frac
        )
    });
    FapSampleSet {
        positions,
        hit_times,
        particle_ids,
        censored_ids,
        provenance,
        warning,
    }
}

/// Euler–Maruyama first-arrival simulation from `(x_in, λ)`.
///
/// Output is identical for a given seed regardless of worker count.
pub fn simulate_first_arrival(cfg: &SimConfig, x_in: &[f64]) -> Result<FapSampleSet> {
    cfg.validate()?;
    check_x_in(&cfg.geometry, x_in)?;
    let outcomes: Vec<Outcome> = with_worker_pool(|| {
        (0..cfg.n_particles)
            .into_par_iter()
            .with_min_len(16)
            .map(|i| run_particle(cfg, x_in, i as u64))
            .collect()
    })?;
    let provenance = Provenance::EulerMaruyama {
        config: cfg.clone(),
        x_in: x_in.to_vec(),
    };
    Ok(collect(outcomes, cfg.geometry.dimension.transverse(), provenance))
}

/// Exact zero-drift arrivals: `T = λ²/(σ² Z²)` and offset `√(σ² T) G`.
pub fn sample_exact_zero_drift(g: &ChannelGeometry, x_in: &[f64], n: usize, seed: u64) -> Result<FapSampleSet> {
    check_x_in(g, x_in)?;
    if n == 0 {
        return Err(invalid("need at least one sample"));
    }
    let dim = g.dimension.transverse();
    let outcomes: Vec<Outcome> = with_worker_pool(|| {
        (0..n)
            .into_par_iter()
            .with_min_len(1024)
            .map(|i| {
                let mut rng = rng::stream(seed, i as u64);
                let z: f64 = rng.sample(StandardNormal);
                let t = g.lambda * g.lambda / (g.sigma2 * z * z);
                let spread = (g.sigma2 * t).sqrt();
                let mut pos = [0.0; 2];
                for (p, x) in pos.iter_mut().zip(x_in) {
                    let gi: f64 = rng.sample(StandardNormal);
                    *p = x + spread * gi;
                }
                Outcome::Hit { t, pos }
            })
            .collect()
    })?;
    let provenance = Provenance::ExactZeroDrift {
        geometry: *g,
        x_in: x_in.to_vec(),
        n,
        seed,
    };
    Ok(collect(outcomes, dim, provenance))
}

/// One-sample Kolmogorov–Smirnov statistic against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("KS sample"));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("KS sample"));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cauchy::UnivariateCauchy;
    use crate::fap::Dimension;

    fn geo(n: usize) -> ChannelGeometry {
        ChannelGeometry::new(Dimension::from_n(n).unwrap(), 1.0, 1.0).unwrap()
    }

    #[test]
    fn ks_enumeration() {
        let d = ks_statistic(&[0.1, 0.2, 0.3], |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.7).abs() <= 1e-15);
        assert!(ks_statistic(&[], |x| x).is_err());
    }

    #[test]
    fn ks_self_comparison_bound() {
        let xs: Vec<f64> = (0..50).map(|i| (i * 37 % 50) as f64).collect();
        let n = xs.len() as f64;
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        // Midpoint of each empirical step.
        let cdf = |x: f64| (sorted.partition_point(|v| *v <= x) as f64 - 0.5) / n;
        let d = ks_statistic(&xs, cdf).unwrap();
        assert!((d - 0.5 / n).abs() <= 1e-15);
    }

    #[test]
    fn two_sample_ks_basics() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&a, &[10.0, 11.0]).unwrap(), 1.0);
        assert!((ks_two_sample(&[1.0, 2.0], &[1.5, 2.5]).unwrap() - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn exact_sampler_median_and_ks() {
        let s = sample_exact_zero_drift(&geo(2), &[0.5], 100_000, 3).unwrap();
        let mut ys = s.positions.column(0);
        let c = UnivariateCauchy::new(0.5, 1.0).unwrap();
        assert!(ks_statistic(&ys, |x| c.cdf(x)).unwrap() < 0.0052);
        let mid = ys.len() / 2;
        let (_, med, _) = ys.select_nth_unstable_by(mid, f64::total_cmp);
        assert!((*med - 0.5).abs() <= 0.02);
        assert_eq!(s.censored_count(), 0);
    }

    #[test]
    fn exact_sampler_3d_marginals() {
        let s = sample_exact_zero_drift(&geo(3), &[0.0, 0.0], 100_000, 8).unwrap();
        let reference = UnivariateCauchy::standard().sample(100_000, 99);
        for j in 0..2 {
            assert!(ks_two_sample(&s.positions.column(j), &reference).unwrap() < 0.01);
        }
    }

    #[test]
    fn sampler_rejects_bad_input() {
        assert!(sample_exact_zero_drift(&geo(2), &[0.0, 0.0], 10, 1).is_err());
        assert!(sample_exact_zero_drift(&geo(2), &[0.0], 0, 1).is_err());
        let bad = SimConfig::new(geo(2), DriftVector::zero(Dimension::Two), 0.0, 10, 10, 1);
        assert!(bad.is_err());
        let bad = SimConfig::new(geo(2), DriftVector::zero(Dimension::Three), 1e-3, 10, 10, 1);
        assert!(bad.is_err());
    }

    #[test]
    fn censoring_and_warning() {
        let cfg = SimConfig::new(geo(2), DriftVector::zero(Dimension::Two), 1e-3, 200, 10, 4).unwrap();
        let s = simulate_first_arrival(&cfg, &[0.0]).unwrap();
        assert_eq!(s.n_particles(), 200);
        assert!(s.censored_fraction() > CENSOR_WARN_FRACTION);
        assert!(s.warning.as_deref().unwrap().contains("censored"));
        assert_eq!(s.positions.len() + s.censored_count(), 200);
        assert_eq!(s.hit_times.len(), s.positions.len());
    }

    #[test]
    fn hit_times_and_ids_are_consistent() {
        let cfg = SimConfig::new(
            geo(3),
            DriftVector::new(vec![0.5, 0.0, -2.0]).unwrap(),
            1e-3,
            500,
            100_000,
            11,
        )
        .unwrap();
        let s = simulate_first_arrival(&cfg, &[1.0, -1.0]).unwrap();
        assert_eq!(s.censored_count(), 0);
        assert!(s.hit_times.iter().all(|t| *t > 0.0));
        assert!(s.particle_ids.windows(2).all(|w| w[0] < w[1]));
        let mean_y1 = s.positions.column(0).iter().sum::<f64>() / 500.0;
        // Ballistic estimate: x + v₁ λ / |v₃|.
        assert!((mean_y1 - 1.25).abs() < 0.1, "{mean_y1}");
    }

    #[test]
    fn csv_rows_in_particle_order() {
        let cfg = SimConfig::new(geo(2), DriftVector::zero(Dimension::Two), 5e-2, 40, 20, 5).unwrap();
        let s = simulate_first_arrival(&cfg, &[0.0]).unwrap();
        assert!(s.censored_count() > 0 && !s.particle_ids.is_empty());
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("particle_id,y1,hit_time,censored"));
        for (i, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 4);
            assert_eq!(fields[0], i.to_string());
            if fields[3] == "1" {
                assert!(fields[1].is_empty() && fields[2].is_empty());
            }
        }
        let side = s.sidecar();
        assert_eq!(side["sampler"], "euler_maruyama");
        assert_eq!(side["n_particles"], 40);
        assert_eq!(side["dt"], 5e-2);
        assert_eq!(side["version"], crate::VERSION);
    }
}
