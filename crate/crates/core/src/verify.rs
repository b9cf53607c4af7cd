//! Self-check suite over the library's invariants.

use std::f64::consts::PI;
use std::time::Instant;

use serde::Serialize;

use crate::capacity::{
    capacity_closed_form, capacity_table, certify_maxent, dispersion_of, entropy_knn, log_moment, ChannelKind,
    ConstraintSpec, Source,
};
use crate::cauchy::{independent_sum, CauchyParams, MultivariateCauchy, UnivariateCauchy};
use crate::density::{entropy_by_quadrature, total_mass, Density, Scaled};
use crate::error::Result;
use crate::fap::{arrival_probability, ChannelGeometry, Dimension, DriftVector, FapDensity};
use crate::quadrature::{integrate_real_line, QuadSettings};
use crate::samples::PointCloud;
use crate::sim::{ks_statistic, ks_two_sample, sample_exact_zero_drift, simulate_first_arrival, SimConfig};
use crate::special::{bessel_k1, digamma, log_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Smaller samples and coarser time steps.
    pub quick: bool,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { quick: false, seed: 42 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type CheckFn = fn(&SuiteOptions) -> Result<(bool, String)>;

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("special_functions", "digamma_recurrence", digamma_recurrence),
    ("special_functions", "digamma_monotone", digamma_monotone),
    ("special_functions", "k1_small_argument_law", k1_small_argument_law),
    ("special_functions", "log_gamma_convex", log_gamma_convex),
    ("cauchy", "normalization", cauchy_normalization),
    ("cauchy", "entropy_quadrature_agreement", cauchy_entropy_quadrature),
    ("cauchy", "sum_rule_ks", sum_rule_ks),
    ("cauchy", "entropy_scaling", entropy_scaling),
    ("fap_channel", "pointwise_limit", fap_pointwise_limit),
    ("fap_channel", "translation_covariance", fap_translation_covariance),
    ("fap_channel", "positivity", fap_positivity),
    ("fap_channel", "marginal_3d_is_2d", fap_marginal),
    ("particle_sim", "em_vs_exact_sampler", sim_em_vs_exact),
    ("particle_sim", "dt_refinement", sim_dt_refinement),
    ("particle_sim", "hit_fraction_vs_quadrature", sim_hit_fraction),
    ("particle_sim", "determinism_across_workers", sim_determinism),
    ("capacity", "log_moment_monotone", capacity_log_moment_monotone),
    ("capacity", "dispersion_homogeneity", capacity_dispersion_homogeneity),
    ("capacity", "capacity_chain_2d", capacity_chain_2d),
    ("capacity", "capacity_chain_3d", capacity_chain_3d),
    ("capacity", "knn_sampling_consistency", capacity_knn_consistency),
    ("capacity", "capacity_endpoint", capacity_endpoint),
    ("cli", "table_column_identity", table_identity),
];

/// Names of all checks as `module/name`.
pub fn check_names() -> Vec<String> {
    CHECKS.iter().map(|(m, n, _)| format!("{m}/{n}")).collect()
}

/// Runs every check, in a fixed order. A check that errors counts as failed.
pub fn run_suite(opts: &SuiteOptions) -> Vec<CheckOutcome> {
    run_checks(opts, |_| {})
}

/// Like [`run_suite`], calling `progress` after each check.
pub fn run_checks(opts: &SuiteOptions, mut progress: impl FnMut(&CheckOutcome)) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(module, name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f(opts) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            let out = CheckOutcome {
                module,
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            };
            progress(&out);
            out
        })
        .collect()
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn digamma_recurrence(_: &SuiteOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for t in grid(0.1, 100.0, 2000) {
        worst = worst.max((digamma(t + 1.0)? - digamma(t)? - 1.0 / t).abs());
    }
    Ok((worst <= 1e-12, format!("max residual {worst:.2e}")))
}

fn digamma_monotone(_: &SuiteOptions) -> Result<(bool, String)> {
    let vals = grid(0.01, 50.0, 5000).map(digamma).collect::<Result<Vec<_>>>()?;
    let ok = vals.windows(2).all(|w| w[1] > w[0]);
    Ok((ok, "strictly increasing on [0.01, 50]".into()))
}

fn k1_small_argument_law(_: &SuiteOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for e in grid(-8.0, -4.0, 41) {
        let x = 10f64.powf(e);
        let r = (x * bessel_k1(x)? - 1.0).abs() / (5e-4 * x.ln().abs());
        worst = worst.max(r);
    }
    Ok((worst <= 1.0, format!("max |xK1(x)-1| / (5e-4 |ln x|) = {worst:.2e}")))
}

fn log_gamma_convex(_: &SuiteOptions) -> Result<(bool, String)> {
    let h = 1e-3;
    let mut worst = f64::INFINITY;
    for t in grid(0.01, 100.0, 1000) {
        let d2 = log_gamma(t + h)? - 2.0 * log_gamma(t)? + log_gamma((t - h).max(1e-9))?;
        worst = worst.min(d2);
    }
    Ok((worst >= 0.0, format!("min second difference {worst:.2e}")))
}

fn cauchy_normalization(_: &SuiteOptions) -> Result<(bool, String)> {
    let s = QuadSettings::default();
    let mut worst1: f64 = 0.0;
    let mut worst2: f64 = 0.0;
    for g in [0.1, 1.0, 10.0] {
        worst1 = worst1.max((total_mass(&UnivariateCauchy::new(0.0, g)?, &s)? - 1.0).abs());
        let m = MultivariateCauchy::isotropic(vec![0.0, 0.0], g)?;
        worst2 = worst2.max((total_mass(&m, &s)? - 1.0).abs());
    }
    Ok((
        worst1 <= 1e-9 && worst2 <= 1e-6,
        format!("univariate {worst1:.1e}, bivariate {worst2:.1e}"),
    ))
}

fn cauchy_entropy_quadrature(_: &SuiteOptions) -> Result<(bool, String)> {
    let s = QuadSettings::default();
    let mut w1: f64 = 0.0;
    let mut w2: f64 = 0.0;
    for g in [0.1, 1.0, 10.0] {
        let u = UnivariateCauchy::new(0.0, g)?;
        w1 = w1.max((entropy_by_quadrature(&u, &s)? - u.entropy()).abs());
        let m = MultivariateCauchy::isotropic(vec![0.0, 0.0], g)?;
        w2 = w2.max((entropy_by_quadrature(&m, &s)? - m.entropy()).abs());
    }
    Ok((w1 <= 1e-8 && w2 <= 1e-4, format!("univariate {w1:.1e}, bivariate {w2:.1e}")))
}

/// Largest two-sample KS over both coordinates and the radius.
fn ks_2d(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    let norms = |c: &PointCloud| c.iter().map(|y| y[0].hypot(y[1])).collect::<Vec<_>>();
    let mut d = ks_two_sample(&norms(a), &norms(b))?;
    for j in 0..2 {
        d = d.max(ks_two_sample(&a.column(j), &b.column(j))?);
    }
    Ok(d)
}

/// Two-sample KS between `U + V` and the closed-form law of the sum.
pub fn sum_rule_ks_statistic(u: &CauchyParams, v: &CauchyParams, n: usize, seed: u64) -> Result<f64> {
    let su = u.sample(n, seed);
    let sv = v.sample(n, seed.wrapping_add(1));
    let sum = su.add(&sv)?;
    let law = independent_sum(u, v)?;
    let direct = law.sample(n, seed.wrapping_add(2));
    match sum.dim() {
        1 => ks_two_sample(sum.coords(), direct.coords()),
        _ => ks_2d(&sum, &direct),
    }
}

/// Scale pairs used for the distributional sum-rule checks.
pub const SUM_PAIRS: [(f64, f64); 3] = [(1.0, 2.0), (0.5, 0.5), (3.0, 0.2)];

fn sum_rule_ks(o: &SuiteOptions) -> Result<(bool, String)> {
    let n = if o.quick { 20_000 } else { 100_000 };
    let tol = 0.01 * (100_000.0 / n as f64).sqrt();
    let mut worst: f64 = 0.0;
    for (i, (a, b)) in SUM_PAIRS.iter().enumerate() {
        let seed = o.seed.wrapping_add(10 * i as u64);
        let u: CauchyParams = UnivariateCauchy::new(0.0, *a)?.into();
        let v: CauchyParams = UnivariateCauchy::new(0.0, *b)?.into();
        worst = worst.max(sum_rule_ks_statistic(&u, &v, n, seed)?);
        let u: CauchyParams = MultivariateCauchy::isotropic(vec![0.0, 0.0], *a)?.into();
        let v: CauchyParams = MultivariateCauchy::isotropic(vec![0.0, 0.0], *b)?.into();
        worst = worst.max(sum_rule_ks_statistic(&u, &v, n, seed + 5)?);
    }
    Ok((worst < tol, format!("max KS {worst:.4} (< {tol:.4}) at n={n}")))
}

fn entropy_scaling(_: &SuiteOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for c in [0.5, 2.0, 10.0] {
        let u0 = UnivariateCauchy::new(0.0, 1.3)?;
        let u1 = UnivariateCauchy::new(0.0, 1.3 * c)?;
        worst = worst.max((u1.entropy() - u0.entropy() - c.ln()).abs());
        let s0 = vec![2.0, 0.4, 0.4, 1.0];
        let s1: Vec<f64> = s0.iter().map(|v| v * c * c).collect();
        let m0 = MultivariateCauchy::new(vec![0.0, 0.0], s0)?;
        let m1 = MultivariateCauchy::new(vec![0.0, 0.0], s1)?;
        worst = worst.max((m1.entropy() - m0.entropy() - 2.0 * c.ln()).abs());
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.1e}")))
}

fn geometry(n: usize, lambda: f64, sigma2: f64) -> Result<ChannelGeometry> {
    ChannelGeometry::new(Dimension::from_n(n)?, lambda, sigma2)
}

fn fap_pointwise_limit(_: &SuiteOptions) -> Result<(bool, String)> {
    let mut details = Vec::new();
    let mut ok = true;
    for n in [2, 3] {
        let g = geometry(n, 1.0, 1.0)?;
        let zero = FapDensity::new(g, DriftVector::zero(g.dimension), vec![0.0; n - 1])?;
        let mut gaps = Vec::new();
        for speed in [1e-2, 1e-4, 1e-6, 1e-8] {
            let mut v = vec![0.0; n];
            v[n - 1] = speed;
            let d = FapDensity::new(g, DriftVector::new(v)?, vec![0.0; n - 1])?;
            let mut gap: f64 = 0.0;
            if n == 2 {
                for y in grid(-10.0, 10.0, 401) {
                    gap = gap.max((d.pdf(&[y]) - zero.pdf(&[y])).abs());
                }
            } else {
                for a in grid(-10.0, 10.0, 41) {
                    for b in grid(-10.0, 10.0, 41) {
                        gap = gap.max((d.pdf(&[a, b]) - zero.pdf(&[a, b])).abs());
                    }
                }
            }
            gaps.push(gap);
        }
        ok &= gaps.windows(2).all(|w| w[1] < w[0]) && gaps[3] < 1e-3;
        details.push(format!("{n}D {:?}", gaps.iter().map(|g| format!("{g:.1e}")).collect::<Vec<_>>()));
    }
    Ok((ok, details.join("; ")))
}

fn fap_translation_covariance(_: &SuiteOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (n, v) in [(2, vec![0.7, -0.4]), (3, vec![0.3, -0.6, 0.5])] {
        let g = geometry(n, 1.2, 0.8)?;
        let base = FapDensity::new(g, DriftVector::new(v.clone())?, vec![0.0; n - 1])?;
        for shift in [-2.5, 4.0] {
            let x = vec![shift; n - 1];
            let moved = FapDensity::new(g, DriftVector::new(v.clone())?, x)?;
            for d in grid(-5.0, 5.0, 21) {
                let y0 = vec![d; n - 1];
                let y1: Vec<f64> = y0.iter().map(|c| c + shift).collect();
                let (a, b) = (base.pdf(&y0), moved.pdf(&y1));
                worst = worst.max((a - b).abs() / a);
            }
        }
    }
    Ok((worst <= 1e-12, format!("max relative difference {worst:.1e}")))
}

fn fap_positivity(_: &SuiteOptions) -> Result<(bool, String)> {
    let mut count = 0;
    for (n, v) in [(2, vec![1.0, 1.0]), (2, vec![-2.0, -3.0]), (3, vec![0.5, 0.5, 1.5])] {
        let g = geometry(n, 1.0, 1.0)?;
        let d = FapDensity::new(g, DriftVector::new(v)?, vec![0.0; n - 1])?;
        for y in grid(-20.0, 20.0, 81) {
            let pt = vec![y; n - 1];
            if !(d.pdf(&pt) > 0.0) {
                count += 1;
            }
        }
    }
    Ok((count == 0, format!("{count} non-positive values")))
}

fn fap_marginal(_: &SuiteOptions) -> Result<(bool, String)> {
    let g3 = geometry(3, 1.5, 1.0)?;
    let g2 = geometry(2, 1.5, 1.0)?;
    let d3 = FapDensity::new(g3, DriftVector::zero(g3.dimension), vec![0.0, 0.0])?;
    let d2 = FapDensity::new(g2, DriftVector::zero(g2.dimension), vec![0.0])?;
    let s = QuadSettings::default();
    let mut worst: f64 = 0.0;
    for y1 in grid(-8.0, 8.0, 17) {
        let m = integrate_real_line(|y2| d3.pdf(&[y1, y2]), 0.0, 1.5, &s)?.value;
        worst = worst.max((m - d2.pdf(&[y1])).abs());
    }
    Ok((worst <= 1e-6, format!("max difference {worst:.1e}")))
}

fn zero_drift_config(dt: f64, n: usize, max_steps: u64, seed: u64) -> Result<SimConfig> {
    let g = geometry(2, 1.0, 1.0)?;
    SimConfig::new(g, DriftVector::zero(g.dimension), dt, n, max_steps, seed)
}

fn sim_em_vs_exact(o: &SuiteOptions) -> Result<(bool, String)> {
    let (dt, n) = if o.quick { (1e-3, 5_000) } else { (1e-4, 20_000) };
    let t_max = 100.0;
    let cfg = zero_drift_config(dt, n, (t_max / dt) as u64, o.seed)?;
    let em = simulate_first_arrival(&cfg, &[0.0])?;
    let exact = sample_exact_zero_drift(&cfg.geometry, &[0.0], n, o.seed.wrapping_add(1))?;
    // Apply the same censoring horizon to the exact sample.
    let exact_kept: Vec<f64> = exact
        .hit_times
        .iter()
        .zip(exact.positions.coords())
        .filter(|(t, _)| **t <= t_max)
        .map(|(_, y)| *y)
        .collect();
    let d = ks_two_sample(em.positions.coords(), &exact_kept)?;
    let tol = 0.02 * (20_000.0 / n as f64).sqrt();
    Ok((
        d < tol,
        format!("two-sample KS {d:.4} (< {tol:.4}), dt={dt}, n={n}, censored {:.2}%", 100.0 * em.censored_fraction()),
    ))
}

fn sim_dt_refinement(o: &SuiteOptions) -> Result<(bool, String)> {
    let (dts, n) = if o.quick {
        ([4e-3, 2e-3, 1e-3], 4_000)
    } else {
        ([4e-4, 2e-4, 1e-4], 20_000)
    };
    let c = UnivariateCauchy::standard();
    let mut ks = Vec::new();
    for dt in dts {
        let cfg = zero_drift_config(dt, n, (100.0 / dt) as u64, o.seed)?;
        let s = simulate_first_arrival(&cfg, &[0.0])?;
        ks.push(ks_statistic(s.positions.coords(), |x| c.cdf(x))?);
    }
    let noise = 1.0 / (n as f64).sqrt();
    let ok = ks.windows(2).all(|w| w[1] <= w[0] + noise);
    Ok((
        ok,
        format!("KS {:?} for dt {:?}, noise allowance {noise:.4}", ks.iter().map(|k| format!("{k:.4}")).collect::<Vec<_>>(), dts),
    ))
}

/// Traversal drifts for the hit-fraction cross-check: two toward the
/// receiver, one away.
pub const HIT_FRACTION_DRIFTS: [f64; 3] = [-5.0, -1.0, 3.0];

/// Simulated hit fraction, quadrature arrival probability and the binomial
/// standard error at that probability, for 2D with `λ = σ² = 1`.
pub fn hit_fraction_comparison(v2: f64, dt: f64, n: usize, seed: u64) -> Result<(f64, f64, f64)> {
    let g = geometry(2, 1.0, 1.0)?;
    let drift = DriftVector::new(vec![0.0, v2])?;
    let p = arrival_probability(&g, &drift)?;
    // Away from the receiver, the arrival time given arrival has tail
    // exp(−v² t / 2σ²); stop where that is negligible.
    let horizon = if v2 <= 0.0 { 50.0 } else { (32.0 / (v2 * v2)).max(4.0) };
    let cfg = SimConfig::new(g, drift, dt, n, (horizon / dt) as u64, seed)?;
    let s = simulate_first_arrival(&cfg, &[0.0])?;
    let se = (p * (1.0 - p) / n as f64).max(0.0).sqrt();
    Ok((s.hit_fraction(), p, se))
}

fn sim_hit_fraction(o: &SuiteOptions) -> Result<(bool, String)> {
    let (dt, n) = if o.quick { (1e-3, 10_000) } else { (1e-4, 100_000) };
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, v2) in HIT_FRACTION_DRIFTS.iter().enumerate() {
        let (frac, p, se) = hit_fraction_comparison(*v2, dt, n, o.seed.wrapping_add(i as u64))?;
        ok &= (frac - p).abs() <= 3.0 * se + 1e-6;
        parts.push(format!("v2={v2}: {frac:.5} vs {p:.5} (se {se:.1e})"));
    }
    Ok((ok, parts.join("; ")))
}

fn sim_determinism(o: &SuiteOptions) -> Result<(bool, String)> {
    let g = geometry(3, 1.0, 1.0)?;
    let cfg = SimConfig::new(g, DriftVector::new(vec![0.2, 0.0, -0.5])?, 1e-3, 2_000, 200_000, o.seed)?;
    let run = |threads: usize| -> Result<_> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::Error::InvalidParameter(e.to_string()))?;
        pool.install(|| simulate_first_arrival(&cfg, &[0.0, 0.0]))
    };
    let one = run(1)?;
    let many = run(8)?;
    Ok((one == many, "1 vs 8 workers".into()))
}

fn capacity_log_moment_monotone(o: &SuiteOptions) -> Result<(bool, String)> {
    let samples = PointCloud::from_scalars(UnivariateCauchy::standard().sample(10_000, o.seed));
    let ks = [1e-6, 1e-3, 0.1, 1.0, 10.0, 1e3, 1e6];
    let vals = ks
        .iter()
        .map(|&k| log_moment(Source::Samples(&samples), k, 1))
        .collect::<Result<Vec<_>>>()?;
    let ok = vals.windows(2).all(|w| w[1] < w[0]) && vals[0] > 20.0 && vals[6] < 1e-4;
    Ok((ok, format!("from {:.2} at k=1e-6 to {:.1e} at k=1e6", vals[0], vals[6])))
}

fn capacity_dispersion_homogeneity(_: &SuiteOptions) -> Result<(bool, String)> {
    let s1 = ConstraintSpec::new(1)?;
    let s2 = ConstraintSpec::new(2)?;
    let u = UnivariateCauchy::new(0.0, 1.3)?;
    let m = MultivariateCauchy::isotropic(vec![0.0, 0.0], 0.7)?;
    let du = dispersion_of(Source::Pdf(&u), &s1)?;
    let dm = dispersion_of(Source::Pdf(&m), &s2)?;
    let mut worst: f64 = 0.0;
    for c in [0.5, 2.0, 10.0] {
        let su = Scaled::new(u, c)?;
        let sm = Scaled::new(m.clone(), c)?;
        worst = worst.max((dispersion_of(Source::Pdf(&su), &s1)? - c * du).abs() / c);
        worst = worst.max((dispersion_of(Source::Pdf(&sm), &s2)? - c * dm).abs() / c);
    }
    Ok((worst <= 1e-8, format!("max |d(cY) - c d(Y)| / c = {worst:.1e}")))
}

fn capacity_chain(p: usize, a: f64) -> Result<(bool, String)> {
    let spec = ConstraintSpec::new(p)?;
    let (disp, closed) = match p {
        1 => {
            let y = UnivariateCauchy::new(0.0, a)?;
            (dispersion_of(Source::Pdf(&y), &spec)?, (4.0 * PI * a).ln())
        }
        _ => {
            let y = MultivariateCauchy::isotropic(vec![0.0, 0.0], a)?;
            (dispersion_of(Source::Pdf(&y), &spec)?, (2.0 * PI * 3f64.exp() * a * a).ln())
        }
    };
    let cert = certify_maxent(p, a)?;
    let ok = (disp - a).abs() <= 1e-9 * a
        && (cert.achieving_entropy - closed).abs() <= 1e-9
        && cert.max_excess <= 1e-6;
    Ok((
        ok,
        format!(
            "dispersion {disp:.10}, entropy {:.10} vs {closed:.10}, mu {:.8}, max family excess {:.1e}",
            cert.achieving_entropy, cert.achieving_mu, cert.max_excess
        ),
    ))
}

fn capacity_chain_2d(_: &SuiteOptions) -> Result<(bool, String)> {
    capacity_chain(1, 2.0)
}

fn capacity_chain_3d(_: &SuiteOptions) -> Result<(bool, String)> {
    capacity_chain(2, 2.0)
}

fn capacity_knn_consistency(o: &SuiteOptions) -> Result<(bool, String)> {
    let n = if o.quick { 20_000 } else { 200_000 };
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [1.5, 4.0] {
        let out = [
            CauchyParams::from(UnivariateCauchy::new(0.0, a)?),
            CauchyParams::from(MultivariateCauchy::isotropic(vec![0.0, 0.0], a)?),
        ];
        for law in out {
            let e = entropy_knn(&law.sample(n, o.seed))?;
            let h = law.entropy().expect("non-degenerate");
            let z = (e.value - h).abs() / e.std_error;
            ok &= z <= 3.0;
            parts.push(format!("p={} A={a}: {:.4} vs {h:.4} ({z:.1} se)", law.dim(), e.value));
        }
    }
    Ok((ok, parts.join("; ")))
}

fn capacity_endpoint(_: &SuiteOptions) -> Result<(bool, String)> {
    let mut ok = true;
    for kind in [ChannelKind::Fap2d, ChannelKind::Fap3d, ChannelKind::Gaussian] {
        let caps = grid(1.0, 10.0, 91)
            .map(|a| capacity_closed_form(kind, a, 1.0).map(|r| r.capacity))
            .collect::<Result<Vec<_>>>()?;
        ok &= caps[0] == 0.0 && caps.windows(2).all(|w| w[1] > w[0]);
    }
    Ok((ok, "zero at the floor, strictly increasing on [1, 10]".into()))
}

fn table_identity(_: &SuiteOptions) -> Result<(bool, String)> {
    let a: Vec<f64> = grid(1.0, 20.0, 96).collect();
    let t = capacity_table(&a, 1.0, 1.0)?;
    let ok = t
        .rows
        .iter()
        .all(|r| r.c_3d == r.c_2d.map(|c| 2.0 * c) && r.c_gauss == r.c_2d);
    Ok((ok, format!("{} rows", t.rows.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names = check_names();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn cheap_checks_pass() {
        let o = SuiteOptions { quick: true, seed: 1 };
        for f in [digamma_recurrence, entropy_scaling, fap_translation_covariance, table_identity] {
            let (ok, detail) = f(&o).unwrap();
            assert!(ok, "{detail}");
        }
    }
}
