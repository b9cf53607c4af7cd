#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use faplab_core::capacity::{
    capacity_closed_form, capacity_table, maxent_profile, AchievingLaw, ChannelKind, ConstraintSpec,
};
use faplab_core::fap::{DensityGrid, GridAxis};
use faplab_core::sim::{sample_exact_zero_drift, simulate_first_arrival, with_worker_pool};
use faplab_core::verify::{run_checks, SuiteOptions};
use faplab_core::{ChannelGeometry, Dimension, DriftVector, Error as CoreError, FapDensity, SimConfig};

use manifest::{RunManifest, Sink};

#[derive(Parser, Debug)]
#[command(name = "faplab", version, about = "First-arrival-position channel experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic FAP density on a grid.
    Density(DensityArgs),
    /// Monte Carlo first-arrival positions.
    Simulate(SimulateArgs),
    /// Closed-form capacity and achieving laws.
    Capacity(CapacityArgs),
    /// Max-entropy exponent and radial profile.
    Maxent(MaxentArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
    /// Capacity table and per-channel curve files.
    Table1(TableArgs),
    /// Re-run a recorded manifest into a new directory.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Channel {
    Fap2d,
    Fap3d,
    Gaussian,
}

impl From<Channel> for ChannelKind {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Fap2d => ChannelKind::Fap2d,
            Channel::Fap3d => ChannelKind::Fap3d,
            Channel::Gaussian => ChannelKind::Gaussian,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct ChannelArgs {
    /// Spatial dimension, 2 or 3.
    #[arg(short = 'n', long = "dimension", default_value_t = 2)]
    dimension: usize,
    /// Distance between transmitter and receiver planes.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Diffusion variance rate.
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    vx: f64,
    /// Traversal drift in 2D; transverse in 3D. Positive points away from the receiver.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    vy: f64,
    /// Traversal drift in 3D.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    vz: f64,
    /// Transmitter transverse position, first coordinate.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x1: f64,
    /// Transmitter transverse position, second coordinate (3D).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x2: f64,
}

impl ChannelArgs {
    fn geometry(&self) -> Result<ChannelGeometry> {
        Ok(ChannelGeometry::new(Dimension::from_n(self.dimension)?, self.lambda, self.sigma2)?)
    }

    fn drift(&self) -> Result<DriftVector> {
        match self.dimension {
            2 => {
                if self.vz != 0.0 {
                    bail!(CoreError::InvalidParameter("--vz applies to 3D channels only".into()));
                }
                Ok(DriftVector::new(vec![self.vx, self.vy])?)
            }
            _ => Ok(DriftVector::new(vec![self.vx, self.vy, self.vz])?),
        }
    }

    fn transmitter(&self) -> Result<Vec<f64>> {
        match self.dimension {
            2 => {
                if self.x2 != 0.0 {
                    bail!(CoreError::InvalidParameter("--x2 applies to 3D channels only".into()));
                }
                Ok(vec![self.x1])
            }
            _ => Ok(vec![self.x1, self.x2]),
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct DensityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    channel: ChannelArgs,
    /// Grid half-width around the transmitter [default: 10 λ].
    #[arg(long)]
    half_width: Option<f64>,
    /// Points per axis.
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    #[arg(long, default_value_t = 100_000)]
    particles: usize,
    #[arg(long, default_value_t = 10_000_000)]
    max_steps: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Draw from the exact zero-drift law instead of stepping.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct CapacityArgs {
    #[arg(long, value_enum)]
    channel: Channel,
    /// Output dispersion level (FAP) or output amplitude √(σ²+P) (Gaussian).
    #[arg(long = "A")]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Gaussian noise variance.
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct MaxentArgs {
    /// Number of transverse dimensions, 1 or 2.
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Constraint value [default: the Cauchy value for this p].
    #[arg(long)]
    target: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct VerifyArgs {
    /// Smaller samples and coarser steps.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct TableArgs {
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Gaussian noise variance.
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value_t = 1.0)]
    a_min: f64,
    #[arg(long, default_value_t = 10.0)]
    a_max: f64,
    #[arg(long, default_value_t = 91)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ReplayArgs {
    /// Manifest written by an earlier run.
    #[arg(long)]
    manifest: PathBuf,
    /// Directory for the reproduced outputs.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_worker_pool(|| run(cli.command)) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> ExitCode {
    match e.downcast_ref::<CoreError>() {
        Some(CoreError::BelowNoiseFloor { .. }) => ExitCode::from(3),
        Some(CoreError::InvalidParameter(_) | CoreError::Domain { .. } | CoreError::DimensionMismatch { .. }) => {
            ExitCode::from(2)
        }
        _ => ExitCode::FAILURE,
    }
}

fn params<T: Serialize>(args: &T) -> Result<Value> {
    Ok(serde_json::to_value(args)?)
}

fn run(cmd: Command) -> Result<ExitCode> {
    let start = Instant::now();
    let (name, parameters, seed, sink, code) = match cmd {
        Command::Density(a) => ("density", params(&a)?, None, density(&a)?, ExitCode::SUCCESS),
        Command::Simulate(a) => ("simulate", params(&a)?, Some(a.seed), simulate(&a)?, ExitCode::SUCCESS),
        Command::Capacity(a) => ("capacity", params(&a)?, None, capacity(&a)?, ExitCode::SUCCESS),
        Command::Maxent(a) => ("maxent", params(&a)?, None, maxent(&a)?, ExitCode::SUCCESS),
        Command::Verify(a) => {
            let (sink, ok) = verify(&a)?;
            let code = if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE };
            ("verify", params(&a)?, Some(a.seed), sink, code)
        }
        Command::Table1(a) => ("table1", params(&a)?, None, table1(&a)?, ExitCode::SUCCESS),
        Command::Replay(a) => return replay(&a),
    };
    sink.finish(name, parameters, seed, start.elapsed().as_secs_f64())?;
    Ok(code)
}

fn replay(a: &ReplayArgs) -> Result<ExitCode> {
    let m = RunManifest::load(&a.manifest)?;
    if m.version != faplab_core::VERSION {
        eprintln!("warning: manifest written by version {}, running {}", m.version, faplab_core::VERSION);
    }
    let p = m.parameters;
    let cmd = match m.subcommand.as_str() {
        "density" => Command::Density(with_out(p, &a.out)?),
        "simulate" => Command::Simulate(with_out(p, &a.out)?),
        "capacity" => Command::Capacity(with_out(p, &a.out)?),
        "maxent" => Command::Maxent(with_out(p, &a.out)?),
        "verify" => Command::Verify(with_out(p, &a.out)?),
        "table1" => Command::Table1(with_out(p, &a.out)?),
        other => bail!(CoreError::InvalidParameter(format!("manifest names unknown subcommand {other:?}"))),
    };
    run(cmd)
}

/// Parameters from a manifest with the output directory replaced.
fn with_out<T: serde::de::DeserializeOwned + HasOut>(p: Value, out: &std::path::Path) -> Result<T> {
    let mut args: T = serde_json::from_value(p).context("manifest parameters do not match the subcommand")?;
    args.set_out(out.to_path_buf());
    Ok(args)
}

trait HasOut {
    fn set_out(&mut self, out: PathBuf);
}

macro_rules! has_out {
    ($($t:ty),*) => {
        $(impl HasOut for $t {
            fn set_out(&mut self, out: PathBuf) {
                self.out = Some(out);
            }
        })*
    };
}

has_out!(DensityArgs, SimulateArgs, CapacityArgs, MaxentArgs, VerifyArgs, TableArgs);

fn density(a: &DensityArgs) -> Result<Sink> {
    let g = a.channel.geometry()?;
    let x = a.channel.transmitter()?;
    let d = FapDensity::new(g, a.channel.drift()?, x.clone())?;
    let half = a.half_width.unwrap_or(10.0 * g.lambda);
    if !(half > 0.0) {
        bail!(CoreError::InvalidParameter(format!("half width must be positive, got {half}")));
    }
    let axes = x
        .iter()
        .map(|&c| GridAxis::new(c - half, c + half, a.points))
        .collect::<faplab_core::Result<Vec<_>>>()?;
    let grid = DensityGrid::evaluate(&d, &axes)?;
    let mut sink = Sink::new(a.out.clone())?;
    match a.format {
        Format::Csv => sink.emit("density.csv", true, |w| grid.write_csv(w))?,
        Format::Json => {
            let mut obj = Map::new();
            for (i, axis) in grid.axes.iter().enumerate() {
                obj.insert(format!("y{}", i + 1), json!(axis));
            }
            obj.insert("density".into(), json!(grid.values));
            sink.emit("density.json", true, |w| write_json(w, &Value::Object(obj)))?;
        }
    }
    Ok(sink)
}

fn write_json(w: &mut dyn std::io::Write, v: &Value) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)
}

fn simulate(a: &SimulateArgs) -> Result<Sink> {
    let g = a.channel.geometry()?;
    let x = a.channel.transmitter()?;
    let drift = a.channel.drift()?;
    let set = if a.exact {
        if !drift.is_zero() {
            bail!(CoreError::InvalidParameter("--exact requires zero drift".into()));
        }
        sample_exact_zero_drift(&g, &x, a.particles, a.seed)?
    } else {
        let cfg = SimConfig::new(g, drift, a.dt, a.particles, a.max_steps, a.seed)?;
        simulate_first_arrival(&cfg, &x)?
    };
    if let Some(w) = &set.warning {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "{} of {} particles absorbed ({:.3}% censored)",
        set.particle_ids.len(),
        set.n_particles(),
        100.0 * set.censored_fraction()
    );
    let mut sink = Sink::new(a.out.clone())?;
    sink.emit("samples.csv", true, |w| set.write_csv(w))?;
    sink.emit("samples.json", false, |w| write_json(w, &set.sidecar()))?;
    Ok(sink)
}

fn capacity(a: &CapacityArgs) -> Result<Sink> {
    let kind = ChannelKind::from(a.channel);
    let floor = match kind {
        ChannelKind::Gaussian => {
            if !(a.sigma2 > 0.0) {
                bail!(CoreError::InvalidParameter(format!("sigma2 must be positive, got {}", a.sigma2)));
            }
            a.sigma2.sqrt()
        }
        _ => a.lambda,
    };
    let r = capacity_closed_form(kind, a.a, floor)?;
    let mut obj = Map::new();
    obj.insert("channel".into(), json!(kind.name()));
    obj.insert("a".into(), json!(r.a));
    obj.insert("floor".into(), json!(r.floor));
    obj.insert("capacity".into(), json!(r.capacity));
    for (prefix, law) in [("output", &r.achieving_output), ("input", &r.achieving_input)] {
        match law {
            AchievingLaw::Cauchy { params } => {
                obj.insert(format!("{prefix}_family"), json!("cauchy"));
                obj.insert(format!("{prefix}_dim"), json!(params.dim()));
                let scale = params.location_and_scale().map_or(0.0, |(_, s)| s);
                obj.insert(format!("{prefix}_scale"), json!(scale));
            }
            AchievingLaw::Gaussian { mean, variance } => {
                obj.insert(format!("{prefix}_family"), json!("gaussian"));
                obj.insert(format!("{prefix}_mean"), json!(mean));
                obj.insert(format!("{prefix}_variance"), json!(variance));
            }
        }
    }
    obj.insert("input_derived".into(), json!(r.input_derived));
    let mut sink = Sink::new(a.out.clone())?;
    sink.emit("capacity.json", true, |w| write_json(w, &Value::Object(obj)))?;
    Ok(sink)
}

fn maxent(a: &MaxentArgs) -> Result<Sink> {
    let spec = match a.target {
        Some(t) => ConstraintSpec::with_target(a.p, t)?,
        None => ConstraintSpec::new(a.p)?,
    };
    let prof = maxent_profile(&spec, a.k)?;
    let mut sink = Sink::new(a.out.clone())?;
    match a.format {
        Format::Json => {
            let v = json!({
                "p": prof.p,
                "k": prof.k,
                "target": prof.target,
                "mu": prof.mu,
                "normalizer": prof.normalizer,
                "entropy": prof.entropy,
                "radius": prof.radii,
                "density": prof.density,
            });
            sink.emit("maxent.json", true, |w| write_json(w, &v))?;
        }
        Format::Csv => {
            eprintln!("mu = {}, entropy = {}", prof.mu, prof.entropy);
            sink.emit("maxent.csv", true, |w| {
                writeln!(w, "radius,density")?;
                for (r, f) in prof.radii.iter().zip(&prof.density) {
                    writeln!(w, "{r},{f}")?;
                }
                Ok(())
            })?;
        }
    }
    Ok(sink)
}

fn verify(a: &VerifyArgs) -> Result<(Sink, bool)> {
    let opts = SuiteOptions {
        quick: a.quick,
        seed: a.seed,
    };
    let start = Instant::now();
    let results = run_checks(&opts, |c| {
        println!(
            "{} {}/{}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.module,
            c.name,
            c.detail
        );
        eprintln!("  ({:.1} s)", c.seconds);
    });
    let failed = results.iter().filter(|c| !c.passed).count();
    println!("{} checks, {} failed", results.len(), failed);
    eprintln!("total {:.1} s", start.elapsed().as_secs_f64());
    let mut sink = Sink::new(a.out.clone())?;
    if sink.has_dir() {
        let mut obj = Map::new();
        for c in &results {
            obj.insert(format!("{}/{}", c.module, c.name), json!(c.passed));
        }
        obj.insert("failed".into(), json!(failed));
        sink.emit("verify.json", false, |w| write_json(w, &Value::Object(obj)))?;
    }
    Ok((sink, failed == 0))
}

fn table1(a: &TableArgs) -> Result<Sink> {
    if a.points < 2 || !(a.a_max > a.a_min) {
        bail!(CoreError::InvalidParameter("need at least 2 points and a_max > a_min".into()));
    }
    if !(a.sigma2 > 0.0) {
        bail!(CoreError::InvalidParameter(format!("sigma2 must be positive, got {}", a.sigma2)));
    }
    let span = a.a_max - a.a_min;
    let levels: Vec<f64> = (0..a.points)
        .map(|i| a.a_min + span * i as f64 / (a.points - 1) as f64)
        .collect();
    let t = capacity_table(&levels, a.lambda, a.sigma2.sqrt())?;
    let mut sink = Sink::new(a.out.clone())?;
    match a.format {
        Format::Csv => sink.emit("table1.csv", true, |w| t.write_csv(w))?,
        Format::Json => {
            let col = |f: fn(&faplab_core::capacity::CapacityRow) -> Option<f64>| -> Vec<Option<f64>> {
                t.rows.iter().map(f).collect()
            };
            let v = json!({
                "lambda": t.lambda,
                "sigma": t.sigma,
                "a": t.rows.iter().map(|r| r.a).collect::<Vec<_>>(),
                "c_gauss": col(|r| r.c_gauss),
                "c_2d": col(|r| r.c_2d),
                "c_3d": col(|r| r.c_3d),
            });
            sink.emit("table1.json", true, |w| write_json(w, &v))?;
        }
    }
    for kind in [ChannelKind::Gaussian, ChannelKind::Fap2d, ChannelKind::Fap3d] {
        sink.emit(&format!("fig2_{}.dat", kind.name()), false, |w| t.write_dat(kind, w))?;
    }
    Ok(sink)
}
