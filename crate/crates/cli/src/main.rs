//! `lgq`: spectra of leaky quantum graphs from the command line.
//!
//! Every subcommand builds a JSON experiment config (from a preset and/or
//! flags named after the config keys), runs it and writes
//! `<prefix>.csv` plus `<prefix>.manifest.json`.

mod parse;
mod presets;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use lgq::experiment::{is_config_error, run_with_manifest, ExperimentConfig, Manifest};
use serde_json::{json, Map, Value};

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "lgq", version, about = "Bound states of leaky quantum graphs via point interactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum of a full or cut ring.
    Ring(RingArgs),
    /// Error of one ring level against the exact value as N grows.
    RingConvergence(RingConvergenceArgs),
    /// Sweep a star graph over one parameter.
    StarSweep(StarSweepArgs),
    /// Sweep a nearly closed loop over its leg length.
    ResonanceSweep(ResonanceSweepArgs),
    /// Sweep a Z-shaped graph over its arm length.
    ZlineSweep(ZlineSweepArgs),
    /// Evaluate one eigenfunction on a lattice.
    Eigenfunction(EigenfunctionArgs),
    /// Threshold of a periodic polymer of point interactions.
    Polymer(PolymerArgs),
    /// Exact levels of the full ring.
    OracleRing(OracleRingArgs),
    /// Lowest level of a two-arm star from the Nyström oracle.
    BsStar(BsStarArgs),
    /// Run a JSON config or re-run a manifest.
    Run {
        config: PathBuf,
        /// Overrides the prefix stored in the config.
        #[arg(long)]
        output: Option<String>,
    },
    /// Check a JSON config without computing anything.
    Validate { config: PathBuf },
    /// List presets, or print one as JSON.
    Presets { name: Option<String> },
}

#[derive(Args)]
struct Common {
    /// Start from a named preset (see `lgq presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Output prefix for `<prefix>.csv` and `<prefix>.manifest.json`.
    #[arg(long)]
    output: Option<String>,
    /// Print the assembled config and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args, Default)]
struct Resolution {
    /// Number of points (per arm for stars).
    #[arg(long, conflicts_with = "spacing")]
    count: Option<usize>,
    /// Distance between neighbouring points.
    #[arg(long)]
    spacing: Option<f64>,
}

#[derive(Args, Default)]
struct Solver {
    #[arg(long)]
    kappa_min: Option<f64>,
    #[arg(long)]
    kappa_max: Option<f64>,
    /// Lowest energy searched (sets kappa_max).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "kappa_max")]
    e_min: Option<f64>,
    /// Highest energy searched (sets kappa_min).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "kappa_min")]
    e_max: Option<f64>,
    #[arg(long)]
    scan_points: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    degeneracy_tol: Option<f64>,
    #[arg(long)]
    no_cross_check: bool,
}

#[derive(Args, Default)]
struct Gaps {
    /// |dE/dp| below this counts as a plateau (default 1e-3 γ²).
    #[arg(long)]
    slope_threshold: Option<f64>,
    #[arg(long)]
    min_plateau_points: Option<usize>,
    /// Report only features with energy in `lo,hi`.
    #[arg(long, allow_hyphen_values = true, value_parser = |s: &str| parse::tuple(s, 2))]
    energy_window: Option<parse::List>,
    /// Restrict to one sector of the geometry's symmetry: even or odd.
    #[arg(long)]
    parity: Option<String>,
}

#[derive(Args)]
struct RingArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    radius: Option<f64>,
    /// Removed arc, e.g. `pi/3`.
    #[arg(long, alias = "theta", value_parser = parse::angle)]
    cut_angle: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    resolution: Resolution,
    #[command(flatten)]
    solver: Solver,
}

#[derive(Args)]
struct RingConvergenceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Comma-separated point counts.
    #[arg(long, value_delimiter = ',')]
    counts: Option<Vec<usize>>,
    /// Level index, counted without multiplicity.
    #[arg(long)]
    level: Option<usize>,
    #[command(flatten)]
    solver: Solver,
}

#[derive(Args)]
struct StarSweepArgs {
    #[command(flatten)]
    common: Common,
    /// Angles between consecutive arms, comma-separated.
    #[arg(long, value_parser = parse::grid)]
    angles: Option<parse::List>,
    #[arg(long, value_parser = parse::grid)]
    arm_lengths: Option<parse::List>,
    /// `beta`, `arm_length` or `arm_length_<j>`.
    #[arg(long)]
    parameter: Option<String>,
    /// `a,b,c` or `start:stop:count`.
    #[arg(long, value_parser = parse::grid)]
    values: Option<parse::List>,
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    resolution: Resolution,
    #[command(flatten)]
    solver: Solver,
    #[command(flatten)]
    gaps: Gaps,
}

#[derive(Args)]
struct ResonanceSweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    radius: Option<f64>,
    /// Bottleneck width Δ; the gap angle is calibrated to it.
    #[arg(long, conflicts_with = "gap_angle")]
    bottleneck: Option<f64>,
    #[arg(long, value_parser = parse::angle)]
    gap_angle: Option<f64>,
    #[arg(long, value_parser = parse::angle)]
    flare_angle: Option<f64>,
    #[arg(long, value_parser = parse::grid)]
    leg_lengths: Option<parse::List>,
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    resolution: Resolution,
    #[command(flatten)]
    solver: Solver,
    #[command(flatten)]
    gaps: Gaps,
}

#[derive(Args)]
struct ZlineSweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    mid_length: Option<f64>,
    #[arg(long, alias = "theta", value_parser = parse::angle)]
    bend_angle: Option<f64>,
    #[arg(long, value_parser = parse::grid)]
    arm_lengths: Option<parse::List>,
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    resolution: Resolution,
    #[command(flatten)]
    solver: Solver,
    #[command(flatten)]
    gaps: Gaps,
}

#[derive(Args)]
struct EigenfunctionArgs {
    #[command(flatten)]
    common: Common,
    /// Geometry as JSON, e.g. `{"type":"ring","radius":10}`.
    #[arg(long)]
    geometry: Option<String>,
    /// Ring radius (ring geometries only).
    #[arg(long)]
    radius: Option<f64>,
    /// Removed arc of a ring, e.g. `pi/3`.
    #[arg(long, alias = "cut-angle", value_parser = parse::angle)]
    theta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// State index counted with multiplicity, 0 = ground state.
    #[arg(long)]
    state: Option<usize>,
    /// `x_min,x_max,y_min,y_max`.
    #[arg(long, allow_hyphen_values = true, value_parser = |s: &str| parse::tuple(s, 4))]
    window: Option<parse::List>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[command(flatten)]
    resolution: Resolution,
    #[command(flatten)]
    solver: Solver,
}

#[derive(Args)]
struct PolymerArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Points per period.
    #[arg(long)]
    n: Option<u32>,
    /// Period length.
    #[arg(long)]
    l0: Option<f64>,
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct OracleRingArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct BsStarArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = parse::angle)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    arm_length: Option<f64>,
    #[arg(long)]
    nodes_per_arm: Option<usize>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn config(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_CONFIG, error: error.into() }
    }

    fn solver(error: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_SOLVER, error: error.into() }
    }
}

fn classify(e: lgq::Error) -> Failure {
    if is_config_error(&e) {
        Failure::config(e)
    } else {
        Failure::solver(e)
    }
}

/// Config object under construction.
struct Builder(Map<String, Value>);

impl Builder {
    fn new(experiment: &str, common: &Common) -> Result<Self, Failure> {
        let mut map = match &common.preset {
            None => Map::new(),
            Some(name) => {
                let preset = presets::find(name).ok_or_else(|| {
                    Failure::config(anyhow::anyhow!("unknown preset `{name}`; run `lgq presets` for the list"))
                })?;
                if preset.experiment != experiment {
                    return Err(Failure::config(anyhow::anyhow!(
                        "preset `{name}` is a `{}` experiment, not `{experiment}`",
                        preset.experiment
                    )));
                }
                match preset.config() {
                    Value::Object(m) => m,
                    _ => unreachable!("presets are objects"),
                }
            }
        };
        map.insert("experiment".into(), json!(experiment));
        if let Some(out) = &common.output {
            map.insert("output".into(), json!(out));
        }
        Ok(Builder(map))
    }

    fn set<T: serde::Serialize>(&mut self, key: &str, value: Option<T>) -> &mut Self {
        if let Some(v) = value {
            self.0.insert(key.into(), json!(v));
        }
        self
    }

    fn child(&mut self, key: &str) -> &mut Map<String, Value> {
        let entry = self.0.entry(key).or_insert_with(|| json!({}));
        if !entry.is_object() {
            *entry = json!({});
        }
        entry.as_object_mut().expect("object")
    }

    fn resolution(&mut self, r: &Resolution) -> &mut Self {
        if let Some(n) = r.count {
            self.0.insert("resolution".into(), json!({ "count": n }));
        }
        if let Some(h) = r.spacing {
            self.0.insert("resolution".into(), json!({ "spacing": h }));
        }
        self
    }

    fn solver(&mut self, s: &Solver) -> &mut Self {
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                self.child("solver").insert(k.into(), v);
            }
        };
        put("kappa_min", s.kappa_min.map(|v| json!(v)));
        put("kappa_max", s.kappa_max.map(|v| json!(v)));
        put("kappa_max", s.e_min.map(|e| json!((-e).max(0.0).sqrt())));
        put("kappa_min", s.e_max.map(|e| json!((-e).max(0.0).sqrt())));
        put("scan_points", s.scan_points.map(|v| json!(v)));
        put("tol", s.tol.map(|v| json!(v)));
        put("degeneracy_tol", s.degeneracy_tol.map(|v| json!(v)));
        put("cross_check", s.no_cross_check.then_some(json!(false)));
        self
    }

    fn gaps(&mut self, g: &Gaps) -> &mut Self {
        self.set("parity", g.parity.clone());
        if g.slope_threshold.is_none() && g.min_plateau_points.is_none() && g.energy_window.is_none() {
            return self;
        }
        if !self.0.get("gaps").is_some_and(Value::is_object) {
            let gamma = self.0.get("gamma").and_then(Value::as_f64).unwrap_or(1.0);
            self.0.insert("gaps".into(), json!({ "slope_threshold": 1e-3 * gamma * gamma }));
        }
        let gaps = self.child("gaps");
        if let Some(v) = g.slope_threshold {
            gaps.insert("slope_threshold".into(), json!(v));
        }
        if let Some(v) = g.min_plateau_points {
            gaps.insert("min_plateau_points".into(), json!(v));
        }
        if let Some(w) = &g.energy_window {
            gaps.insert("energy_window".into(), json!(w.0));
        }
        self
    }

    fn finish(self, print: bool) -> Result<Option<ExperimentConfig>, Failure> {
        let value = Value::Object(self.0);
        if print {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            return Ok(None);
        }
        let config: ExperimentConfig = serde_json::from_value(value).map_err(Failure::config)?;
        Ok(Some(config))
    }
}

fn ring_geometry(b: &mut Builder, radius: Option<f64>, cut: Option<f64>) -> Result<(), Failure> {
    if radius.is_none() && cut.is_none() {
        return Ok(());
    }
    let ring = b.child("geometry");
    if ring.is_empty() {
        ring.insert("type".into(), json!("ring"));
        ring.insert("radius".into(), json!(10.0));
    }
    if ring.get("type").and_then(Value::as_str) != Some("ring") {
        return Err(Failure::config(anyhow::anyhow!("--radius/--theta apply to ring geometries only")));
    }
    if let Some(r) = radius {
        ring.insert("radius".into(), json!(r));
    }
    if let Some(c) = cut {
        ring.insert("cut_angle".into(), json!(c));
    }
    Ok(())
}

fn build(command: Command) -> Result<Option<ExperimentConfig>, Failure> {
    match command {
        Command::Ring(a) => {
            let mut b = Builder::new("ring", &a.common)?;
            b.set("radius", a.radius).set("cut_angle", a.cut_angle).set("gamma", a.gamma);
            b.resolution(&a.resolution).solver(&a.solver);
            b.finish(a.common.print_config)
        }
        Command::RingConvergence(a) => {
            let mut b = Builder::new("ring-convergence", &a.common)?;
            b.set("radius", a.radius).set("gamma", a.gamma).set("counts", a.counts).set("level", a.level);
            b.solver(&a.solver);
            b.finish(a.common.print_config)
        }
        Command::StarSweep(a) => {
            let mut b = Builder::new("star-sweep", &a.common)?;
            if a.angles.is_some() || a.arm_lengths.is_some() {
                let star = b.child("geometry");
                star.entry("type").or_insert_with(|| json!("star"));
                if let Some(v) = a.angles {
                    star.insert("angles".into(), json!(v.0));
                }
                if let Some(v) = a.arm_lengths {
                    star.insert("arm_lengths".into(), json!(v.0));
                }
            }
            b.set("parameter", a.parameter).set("values", a.values.map(|v| v.0)).set("gamma", a.gamma);
            b.resolution(&a.resolution).solver(&a.solver).gaps(&a.gaps);
            b.finish(a.common.print_config)
        }
        Command::ResonanceSweep(a) => {
            let mut b = Builder::new("resonance-sweep", &a.common)?;
            if a.gap_angle.is_some() {
                b.0.remove("bottleneck");
            }
            if a.bottleneck.is_some() {
                b.0.remove("gap_angle");
            }
            b.set("radius", a.radius)
                .set("bottleneck", a.bottleneck)
                .set("gap_angle", a.gap_angle)
                .set("flare_angle", a.flare_angle)
                .set("leg_lengths", a.leg_lengths.map(|v| v.0))
                .set("gamma", a.gamma);
            b.resolution(&a.resolution).solver(&a.solver).gaps(&a.gaps);
            b.finish(a.common.print_config)
        }
        Command::ZlineSweep(a) => {
            let mut b = Builder::new("zline-sweep", &a.common)?;
            b.set("mid_length", a.mid_length)
                .set("bend_angle", a.bend_angle)
                .set("arm_lengths", a.arm_lengths.map(|v| v.0))
                .set("gamma", a.gamma);
            b.resolution(&a.resolution).solver(&a.solver).gaps(&a.gaps);
            b.finish(a.common.print_config)
        }
        Command::Eigenfunction(a) => {
            let mut b = Builder::new("eigenfunction", &a.common)?;
            if let Some(g) = &a.geometry {
                let v: Value = serde_json::from_str(g).context("--geometry is not valid JSON").map_err(Failure::config)?;
                b.0.insert("geometry".into(), v);
            }
            ring_geometry(&mut b, a.radius, a.theta)?;
            b.set("gamma", a.gamma).set("state", a.state).set("nx", a.nx).set("ny", a.ny);
            b.set(
                "window",
                a.window.map(|parse::List(w)| json!({ "x_min": w[0], "x_max": w[1], "y_min": w[2], "y_max": w[3] })),
            );
            b.resolution(&a.resolution).solver(&a.solver);
            b.finish(a.common.print_config)
        }
        Command::Polymer(a) => {
            let mut b = Builder::new("polymer", &a.common)?;
            b.set("alpha", a.alpha).set("n", a.n).set("l0", a.l0).set("terms", a.terms).set("tol", a.tol);
            b.finish(a.common.print_config)
        }
        Command::OracleRing(a) => {
            let mut b = Builder::new("oracle-ring", &a.common)?;
            b.set("radius", a.radius).set("gamma", a.gamma).set("tol", a.tol);
            b.finish(a.common.print_config)
        }
        Command::BsStar(a) => {
            let mut b = Builder::new("bs-star", &a.common)?;
            b.set("beta", a.beta)
                .set("gamma", a.gamma)
                .set("arm_length", a.arm_length)
                .set("nodes_per_arm", a.nodes_per_arm);
            b.finish(a.common.print_config)
        }
        Command::Run { .. } | Command::Validate { .. } | Command::Presets { .. } => unreachable!("handled in main"),
    }
}

/// Read a config file; a manifest is accepted and its embedded config used.
fn load(path: &Path) -> Result<ExperimentConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::config)?;
    let value: Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid JSON", path.display()))
        .map_err(Failure::config)?;
    let config = if value.get("schema_version").is_some() {
        serde_json::from_value::<Manifest>(value).map(|m| m.config)
    } else {
        serde_json::from_value::<ExperimentConfig>(value)
    };
    config.with_context(|| format!("invalid config {}", path.display())).map_err(Failure::config)
}

fn default_prefix(config: &ExperimentConfig) -> String {
    let tag = serde_json::to_value(&config.experiment)
        .ok()
        .and_then(|v| v.get("experiment").and_then(Value::as_str).map(str::to_owned))
        .unwrap_or_else(|| "experiment".into());
    format!("lgq-{tag}")
}

fn execute(config: &ExperimentConfig) -> Result<(), Failure> {
    config.validate().map_err(classify)?;
    let (outcome, manifest) = run_with_manifest(config).map_err(classify)?;
    let prefix = config.output.clone().unwrap_or_else(|| default_prefix(config));
    let csv_path = format!("{prefix}.csv");
    let manifest_path = format!("{prefix}.manifest.json");
    if let Some(dir) = Path::new(&prefix).parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create {}", dir.display()))
            .map_err(Failure::solver)?;
    }
    std::fs::write(&csv_path, &outcome.csv)
        .with_context(|| format!("cannot write {csv_path}"))
        .map_err(Failure::solver)?;
    let mut text = serde_json::to_string_pretty(&manifest).map_err(Failure::solver)?;
    text.push('\n');
    std::fs::write(&manifest_path, text)
        .with_context(|| format!("cannot write {manifest_path}"))
        .map_err(Failure::solver)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if outcome.csv.lines().count() <= 41 {
        print!("{}", outcome.csv);
    }
    eprintln!("wrote {csv_path} and {manifest_path} in {:.2} s", manifest.wall_time_seconds);
    Ok(())
}

fn list_presets(name: Option<String>) -> Result<(), Failure> {
    match name {
        Some(n) => {
            let p = presets::find(&n).ok_or_else(|| Failure::config(anyhow::anyhow!("unknown preset `{n}`")))?;
            println!("{}", serde_json::to_string_pretty(&p.config()).expect("json"));
        }
        None => {
            for p in presets::PRESETS {
                println!("{:<15} {:<17} {}", p.name, p.experiment, p.about);
            }
        }
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Presets { name } => list_presets(name),
        Command::Validate { config } => {
            let c = load(&config)?;
            c.validate().map_err(Failure::config)?;
            println!("{}: ok", config.display());
            Ok(())
        }
        Command::Run { config, output } => {
            let mut c = load(&config)?;
            if output.is_some() {
                c.output = output;
            }
            execute(&c)
        }
        other => match build(other)? {
            Some(config) => execute(&config),
            None => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
