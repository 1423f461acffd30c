//! JSON experiment descriptions and their execution.
//!
//! A config names one experiment kind plus its parameters; running it
//! yields a CSV table and a JSON report. [`Manifest`] bundles the config
//! with the report so a run can be repeated from its own output.

use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{bottleneck, calibrate_gap_angle, discretize, GraphSpec, Resolution};
use crate::oracles::{self, StarBs};
use crate::spectral::{
    eval_eigenfunction, find_eigenvalues, null_vectors, LambdaSystem, Parity, SolverOptions, Spectrum, Window,
};
use crate::sweeps::{convergence_fit, gap_report, sweep, GapOptions, SweepSpec};

/// Version of the CSV/manifest layout.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// Spectrum of a full or cut ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub radius: f64,
    #[serde(default)]
    pub cut_angle: f64,
    pub gamma: f64,
    pub resolution: Resolution,
    #[serde(default)]
    pub solver: SolverOptions,
}

/// Error of one full-ring level against the exact value as `N` grows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConvergenceConfig {
    pub radius: f64,
    pub gamma: f64,
    pub counts: Vec<usize>,
    /// Index of the level, counted without multiplicity.
    #[serde(default)]
    pub level: usize,
    #[serde(default)]
    pub solver: SolverOptions,
}

/// Sweep of a star graph over one parameter (`beta`, `arm_length`, …).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarSweepConfig {
    pub geometry: GraphSpec,
    pub parameter: String,
    pub values: Vec<f64>,
    pub gamma: f64,
    pub resolution: Resolution,
    #[serde(default)]
    pub solver: SolverOptions,
    /// Default [`GapOptions::for_gamma`].
    #[serde(default)]
    pub gaps: Option<GapOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

/// Near-loop sweep over the leg length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceSweepConfig {
    pub radius: f64,
    /// Target bottleneck width; the gap angle is calibrated to it.
    #[serde(default)]
    pub bottleneck: Option<f64>,
    /// Used when `bottleneck` is absent.
    #[serde(default)]
    pub gap_angle: Option<f64>,
    /// Default `π − gap_angle/2`: legs leave horizontally.
    #[serde(default)]
    pub flare_angle: Option<f64>,
    pub leg_lengths: Vec<f64>,
    pub gamma: f64,
    pub resolution: Resolution,
    #[serde(default)]
    pub solver: SolverOptions,
    /// Default [`GapOptions::for_gamma`].
    #[serde(default)]
    pub gaps: Option<GapOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

/// Z-shaped graph swept over the arm length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZlineSweepConfig {
    pub mid_length: f64,
    pub bend_angle: f64,
    pub arm_lengths: Vec<f64>,
    pub gamma: f64,
    pub resolution: Resolution,
    #[serde(default)]
    pub solver: SolverOptions,
    /// Default [`GapOptions::for_gamma`].
    #[serde(default)]
    pub gaps: Option<GapOptions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

/// Eigenfunction of the `state`-th level (counted with multiplicity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenfunctionConfig {
    pub geometry: GraphSpec,
    pub gamma: f64,
    pub resolution: Resolution,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub state: usize,
    /// Default: bounding box of the points, padded by `3/κ₀`.
    #[serde(default)]
    pub window: Option<Window>,
    #[serde(default = "default_lattice")]
    pub nx: usize,
    #[serde(default = "default_lattice")]
    pub ny: usize,
}

fn default_lattice() -> usize {
    101
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolymerConfig {
    pub alpha: f64,
    pub n: u32,
    #[serde(default = "one")]
    pub l0: f64,
    #[serde(default = "default_terms")]
    pub terms: usize,
    #[serde(default = "default_polymer_tol")]
    pub tol: f64,
}

fn one() -> f64 {
    1.0
}

fn default_terms() -> usize {
    1_000_000
}

fn default_polymer_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleRingConfig {
    pub radius: f64,
    pub gamma: f64,
    #[serde(default = "default_oracle_tol")]
    pub tol: f64,
}

fn default_oracle_tol() -> f64 {
    1e-12
}

/// Two-arm star through the Nyström Birman–Schwinger oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BsStarConfig {
    pub beta: f64,
    pub gamma: f64,
    /// Default `30/γ`.
    #[serde(default)]
    pub arm_length: Option<f64>,
    #[serde(default = "default_nodes")]
    pub nodes_per_arm: usize,
}

fn default_nodes() -> usize {
    300
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Experiment {
    Ring(RingConfig),
    RingConvergence(RingConvergenceConfig),
    StarSweep(StarSweepConfig),
    ResonanceSweep(ResonanceSweepConfig),
    ZlineSweep(ZlineSweepConfig),
    Eigenfunction(EigenfunctionConfig),
    Polymer(PolymerConfig),
    OracleRing(OracleRingConfig),
    BsStar(BsStarConfig),
}

/// An experiment plus where to write its output.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Path prefix for `<prefix>.csv` and `<prefix>.manifest.json`.
    pub output: Option<String>,
}

impl Serialize for ExperimentConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut v = serde_json::to_value(&self.experiment).map_err(serde::ser::Error::custom)?;
        if let (Some(out), Value::Object(map)) = (&self.output, &mut v) {
            map.insert("output".into(), Value::String(out.clone()));
        }
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExperimentConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut v = Value::deserialize(d)?;
        let output = match &mut v {
            Value::Object(map) => match map.remove("output") {
                None | Some(Value::Null) => None,
                Some(Value::String(s)) => Some(s),
                Some(_) => return Err(serde::de::Error::custom("`output` must be a string")),
            },
            _ => return Err(serde::de::Error::custom("config must be a JSON object")),
        };
        let experiment = Experiment::deserialize(v).map_err(serde::de::Error::custom)?;
        Ok(ExperimentConfig { experiment, output })
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(field, format!("must be positive, got {v}")))
    }
}

fn monotone(field: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::param(field, "must not be empty"));
    }
    if !values.windows(2).all(|w| w[1] > w[0]) || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param(field, "must be finite and strictly increasing"));
    }
    Ok(())
}

impl ResonanceSweepConfig {
    /// Base geometry with the calibrated gap angle.
    pub fn geometry(&self) -> Result<GraphSpec> {
        positive("radius", self.radius)?;
        let gap_angle = match (self.bottleneck, self.gap_angle) {
            (Some(delta), _) => {
                positive("bottleneck", delta)?;
                calibrate_gap_angle(self.radius, PI, delta)?
            }
            (None, Some(g)) => g,
            (None, None) => return Err(Error::param("bottleneck", "give either `bottleneck` or `gap_angle`")),
        };
        let flare_angle = self.flare_angle.unwrap_or(PI - 0.5 * gap_angle);
        let leg_length = self.leg_lengths.first().copied().unwrap_or(1.0);
        let spec = GraphSpec::NearLoop { radius: self.radius, gap_angle, flare_angle, leg_length };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        Ok(SweepSpec {
            geometry: self.geometry()?,
            parameter: "leg_length".into(),
            values: self.leg_lengths.clone(),
            gamma: self.gamma,
            resolution: self.resolution,
            solver: self.solver,
            parity: self.parity,
        })
    }
}

impl ZlineSweepConfig {
    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            geometry: GraphSpec::ZLine {
                mid_length: self.mid_length,
                bend_angle: self.bend_angle,
                arm_length: self.arm_lengths.first().copied().unwrap_or(1.0),
            },
            parameter: "arm_length".into(),
            values: self.arm_lengths.clone(),
            gamma: self.gamma,
            resolution: self.resolution,
            solver: self.solver,
            parity: self.parity,
        }
    }
}

impl StarSweepConfig {
    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            geometry: self.geometry.clone(),
            parameter: self.parameter.clone(),
            values: self.values.clone(),
            gamma: self.gamma,
            resolution: self.resolution,
            solver: self.solver,
            parity: self.parity,
        }
    }
}

impl ExperimentConfig {
    /// Schema and range checks; performs no spectral computation.
    pub fn validate(&self) -> Result<()> {
        match &self.experiment {
            Experiment::Ring(c) => {
                positive("gamma", c.gamma)?;
                c.solver.validate()?;
                GraphSpec::Ring { radius: c.radius, cut_angle: c.cut_angle }.validate()
            }
            Experiment::RingConvergence(c) => {
                positive("radius", c.radius)?;
                positive("gamma", c.gamma)?;
                c.solver.validate()?;
                if c.counts.len() < 3 || c.counts.contains(&0) {
                    return Err(Error::param("counts", "need at least three positive sizes"));
                }
                Ok(())
            }
            Experiment::StarSweep(c) => {
                if !matches!(c.geometry, GraphSpec::Star { .. }) {
                    return Err(Error::param("geometry", "star-sweep needs a star geometry"));
                }
                monotone("values", &c.values)?;
                c.sweep_spec().validate()
            }
            Experiment::ResonanceSweep(c) => {
                monotone("leg_lengths", &c.leg_lengths)?;
                c.sweep_spec()?.validate()
            }
            Experiment::ZlineSweep(c) => {
                monotone("arm_lengths", &c.arm_lengths)?;
                c.sweep_spec().validate()
            }
            Experiment::Eigenfunction(c) => {
                positive("gamma", c.gamma)?;
                c.solver.validate()?;
                if c.nx == 0 || c.ny == 0 {
                    return Err(Error::param("nx", "lattice must be non-empty"));
                }
                c.geometry.validate()
            }
            Experiment::Polymer(c) => {
                positive("l0", c.l0)?;
                positive("tol", c.tol)?;
                if c.n == 0 {
                    return Err(Error::param("n", "must be at least 1"));
                }
                if c.terms < 10_000 {
                    return Err(Error::param("terms", "series cutoff must be at least 10⁴"));
                }
                if !c.alpha.is_finite() {
                    return Err(Error::param("alpha", "must be finite"));
                }
                Ok(())
            }
            Experiment::OracleRing(c) => {
                positive("radius", c.radius)?;
                positive("gamma", c.gamma)?;
                positive("tol", c.tol)
            }
            Experiment::BsStar(c) => {
                positive("gamma", c.gamma)?;
                if !(c.beta > 0.0 && c.beta <= PI) {
                    return Err(Error::param("beta", format!("must lie in (0, π], got {}", c.beta)));
                }
                if let Some(l) = c.arm_length {
                    positive("arm_length", l)?;
                }
                if c.nodes_per_arm < 50 {
                    return Err(Error::param("nodes_per_arm", "must be at least 50"));
                }
                Ok(())
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Result of [`run`]: the CSV body and a structured report.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub csv: String,
    pub report: Value,
    /// Non-fatal problems, e.g. failed sweep points.
    pub warnings: Vec<String>,
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Solver(e.to_string()))
}

fn spectrum_outcome(spectrum: &Spectrum, extra: Value) -> Result<Outcome> {
    let csv = csv_string(|b| spectrum.write_csv(b))?;
    let warnings = spectrum
        .levels
        .iter()
        .filter_map(|l| l.warning.map(|w| format!("level {:.9e}: {w:?}", l.energy)))
        .collect();
    let mut report = serde_json::to_value(spectrum)?;
    if let (Value::Object(map), Value::Object(more)) = (&mut report, extra) {
        map.extend(more);
    }
    Ok(Outcome { csv, report, warnings })
}

fn sweep_outcome(spec: &SweepSpec, gaps: Option<GapOptions>, extra: Value) -> Result<Outcome> {
    let sr = sweep(spec)?;
    let csv = csv_string(|b| sr.write_csv(b))?;
    let warnings: Vec<String> =
        sr.failures().map(|r| format!("{} = {}: {}", sr.parameter, r.value, r.error.as_deref().unwrap_or(""))).collect();
    let gaps = if sr.rows.len() >= 3 {
        Some(gap_report(&sr, &gaps.unwrap_or_else(|| GapOptions::for_gamma(spec.gamma)))?)
    } else {
        None
    };
    let chain = match spec.resolution {
        Resolution::Spacing(h) => Some(oracles::chain_threshold(spec.gamma, h)?.energy),
        Resolution::Count(_) => None,
    };
    let report = json!({
        "parameter": sr.parameter,
        "solver": sr.solver,
        "parity": spec.parity,
        "threshold": oracles::line_threshold(spec.gamma),
        "chain_threshold": chain,
        "levels_per_row": sr.rows.iter().map(|r| r.energies.len()).collect::<Vec<_>>(),
        "below_threshold_per_row": sr.rows.iter().map(|r| r.above_threshold.iter().filter(|a| !**a).count()).collect::<Vec<_>>(),
        "below_chain_threshold_per_row": chain.map(|c| {
            sr.rows.iter().map(|r| r.energies.iter().filter(|&&e| e < c).count()).collect::<Vec<_>>()
        }),
        "gaps": gaps,
        "geometry": extra,
    });
    Ok(Outcome { csv, report, warnings })
}

/// Execute an experiment. Config problems surface as
/// [`Error::Parameter`]/[`Error::Geometry`]; everything else is a solver failure.
pub fn run(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    match &config.experiment {
        Experiment::Ring(c) => {
            let spec = GraphSpec::Ring { radius: c.radius, cut_angle: c.cut_angle };
            let sys = LambdaSystem::new(discretize(&spec, c.gamma, c.resolution)?)?;
            let spectrum = find_eigenvalues(&sys, &c.solver)?;
            spectrum_outcome(&spectrum, json!({ "points": sys.len(), "alpha": sys.graph().alpha }))
        }
        Experiment::RingConvergence(c) => {
            let exact = oracles::ring_spectrum(c.radius, c.gamma, 1e-13)?;
            let target = exact
                .levels
                .get(c.level)
                .ok_or_else(|| Error::param("level", format!("the ring has only {} levels", exact.levels.len())))?
                .energy;
            let mut rows = Vec::new();
            for &n in &c.counts {
                let spec = GraphSpec::Ring { radius: c.radius, cut_angle: 0.0 };
                let sys = LambdaSystem::new(discretize(&spec, c.gamma, Resolution::Count(n))?)?;
                let spectrum = find_eigenvalues(&sys, &c.solver)?;
                let e = spectrum
                    .levels
                    .get(c.level)
                    .ok_or_else(|| Error::NoRoot(format!("level {} not found at N = {n}", c.level)))?
                    .energy;
                rows.push((n, e, (e - target).abs()));
            }
            let csv = csv_string(|b| {
                let mut w = csv::Writer::from_writer(b);
                w.write_record(["N", "E_point", "E_exact", "error"])?;
                for (n, e, err) in &rows {
                    w.write_record([n.to_string(), format!("{e:.12e}"), format!("{target:.12e}"), format!("{err:.12e}")])?;
                }
                w.flush()?;
                Ok(())
            })?;
            let fit = convergence_fit(&rows.iter().map(|r| (r.0 as f64, r.2)).collect::<Vec<_>>()).ok();
            Ok(Outcome { csv, report: json!({ "exact": target, "fit": fit }), warnings: Vec::new() })
        }
        Experiment::StarSweep(c) => sweep_outcome(&c.sweep_spec(), c.gaps, json!({})),
        Experiment::ResonanceSweep(c) => {
            let spec = c.sweep_spec()?;
            let extra = json!({ "geometry": spec.geometry, "bottleneck": bottleneck(&spec.geometry)? });
            sweep_outcome(&spec, c.gaps, extra)
        }
        Experiment::ZlineSweep(c) => sweep_outcome(&c.sweep_spec(), c.gaps, json!({})),
        Experiment::Eigenfunction(c) => {
            let sys = LambdaSystem::new(discretize(&c.geometry, c.gamma, c.resolution)?)?;
            let spectrum = find_eigenvalues(&sys, &c.solver)?;
            let mut seen = 0;
            let level = spectrum
                .levels
                .iter()
                .find(|l| {
                    seen += l.multiplicity;
                    seen > c.state
                })
                .ok_or_else(|| Error::NoRoot(format!("only {seen} states found, state {} requested", c.state)))?;
            let vectors = null_vectors(&sys, level.energy, level.multiplicity, c.solver.tol.max(level.residual))?;
            let coefficients = &vectors[c.state + level.multiplicity - seen];
            let window = c.window.unwrap_or_else(|| {
                let pad = 3.0 / level.kappa;
                let pts = &sys.graph().points;
                let fold = |f: fn(f64, f64) -> f64, init: f64, g: fn(&crate::geometry::Point) -> f64| {
                    pts.iter().map(g).fold(init, f)
                };
                Window {
                    x_min: fold(f64::min, f64::INFINITY, |p| p.x) - pad,
                    x_max: fold(f64::max, f64::NEG_INFINITY, |p| p.x) + pad,
                    y_min: fold(f64::min, f64::INFINITY, |p| p.y) - pad,
                    y_max: fold(f64::max, f64::NEG_INFINITY, |p| p.y) + pad,
                }
            });
            let grid = eval_eigenfunction(&sys, coefficients, level.kappa, window, c.nx, c.ny)?;
            let csv = csv_string(|b| grid.write_csv(b))?;
            let report = json!({
                "energy": level.energy,
                "kappa": level.kappa,
                "multiplicity": level.multiplicity,
                "state": c.state,
                "window": window,
                "spectrum": spectrum.energies(),
            });
            Ok(Outcome { csv, report, warnings: Vec::new() })
        }
        Experiment::Polymer(c) => {
            let root = oracles::polymer_threshold(c.alpha, c.n, c.l0, c.terms, c.tol)?;
            let csv = format!("kappa,E,residual\n{:.15e},{:.15e},{:.3e}\n", root.kappa, root.energy, root.residual);
            Ok(Outcome { csv, report: serde_json::to_value(root)?, warnings: Vec::new() })
        }
        Experiment::OracleRing(c) => {
            let spectrum = oracles::ring_spectrum(c.radius, c.gamma, c.tol)?;
            spectrum_outcome(&spectrum, json!({}))
        }
        Experiment::BsStar(c) => {
            let arm_length = c.arm_length.unwrap_or(30.0 / c.gamma);
            let bs = StarBs::two_arm(c.beta, c.gamma, arm_length, c.nodes_per_arm)?;
            let root = bs.lowest_root()?;
            let csv = match root {
                Some(r) => format!("kappa,E\n{:.12e},{:.12e}\n", r.kappa, r.energy),
                None => "kappa,E\n".to_string(),
            };
            let warnings = if root.is_none() {
                vec!["no bound state below the threshold at this resolution".to_string()]
            } else {
                Vec::new()
            };
            Ok(Outcome { csv, report: json!({ "root": root, "arm_length": arm_length }), warnings })
        }
    }
}

/// Reproducibility record written next to every CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: String,
    pub generator: String,
    pub config: ExperimentConfig,
    pub threads: usize,
    pub wall_time_seconds: f64,
    pub warnings: Vec<String>,
    pub report: Value,
}

/// Run and wrap the outcome in a manifest.
pub fn run_with_manifest(config: &ExperimentConfig) -> Result<(Outcome, Manifest)> {
    let start = Instant::now();
    let outcome = run(config)?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION.into(),
        generator: format!("lgq {}", env!("CARGO_PKG_VERSION")),
        config: config.clone(),
        threads: crate::budget::worker_budget(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        warnings: outcome.warnings.clone(),
        report: outcome.report.clone(),
    };
    Ok((outcome, manifest))
}

/// Whether an error stems from the configuration rather than the numerics.
pub fn is_config_error(e: &Error) -> bool {
    matches!(e, Error::Parameter { .. } | Error::Geometry(_) | Error::Json(_) | Error::Domain { .. })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"experiment":"oracle-ring","radius":10,"gamma":0.5,"colour":"red"}"#;
        assert!(ExperimentConfig::from_json(text).is_err());
    }

    #[test]
    fn output_round_trips() {
        let text = r#"{"experiment":"polymer","alpha":1.0,"n":8,"output":"out/p"}"#;
        let c = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(c.output.as_deref(), Some("out/p"));
        let again = ExperimentConfig::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn negative_gamma_names_the_field() {
        let text = r#"{"experiment":"ring","radius":10,"gamma":-1,"resolution":{"count":10}}"#;
        let err = ExperimentConfig::from_json(text).unwrap().validate().unwrap_err();
        assert!(err.to_string().contains("gamma"), "{err}");
        assert!(is_config_error(&err));
    }

    #[test]
    fn polymer_run() {
        let c = ExperimentConfig::from_json(r#"{"experiment":"polymer","alpha":1.0,"n":8,"terms":10000}"#).unwrap();
        let out = run(&c).unwrap();
        assert!(out.csv.starts_with("kappa,E,residual\n"));
        assert!(out.report["residual"].as_f64().unwrap() < 1e-10);
    }

    #[test]
    fn oracle_ring_run() {
        let c = ExperimentConfig::from_json(r#"{"experiment":"oracle-ring","radius":10,"gamma":0.5}"#).unwrap();
        let out = run(&c).unwrap();
        assert_eq!(out.csv.lines().count(), 4);
        assert_eq!(out.report["provenance"], "oracle:ring_exact");
    }
}
