//! Spectra along one-parameter geometry families, and the metrics read off
//! the resulting curves: local minima of adjacent gaps (avoided crossings),
//! flat stretches (plateaux) and power-law convergence rates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{Error, Result};
use crate::geometry::{discretize, GraphSpec, Resolution};
use crate::spectral::{find_eigenvalues, LambdaSystem, Parity, SolverOptions, Spectrum};

/// What to sweep: a base geometry and the name of the parameter to vary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub geometry: GraphSpec,
    pub parameter: String,
    pub values: Vec<f64>,
    pub gamma: f64,
    pub resolution: Resolution,
    #[serde(default)]
    pub solver: SolverOptions,
    /// Follow only one sector of the geometry's natural symmetry, so that
    /// crossings between sectors do not masquerade as small gaps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

/// Outcome at one grid value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    /// Ascending, repeated by multiplicity.
    pub energies: Vec<f64>,
    pub above_threshold: Vec<bool>,
    /// Set when the solve failed; `energies` is then empty.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameter: String,
    pub rows: Vec<SweepRow>,
    pub solver: SolverOptions,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::param("values", "grid is empty"));
        }
        let increasing = self.values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) || self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("values", "grid must be finite and strictly monotone"));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::param("gamma", "must be positive"));
        }
        self.solver.validate()?;
        for &v in &self.values {
            let spec = self.geometry.with_parameter(&self.parameter, v)?;
            if self.parity.is_some() && spec.natural_involution().is_none() {
                return Err(Error::param("parity", format!("geometry has no symmetry at {} = {v}", self.parameter)));
            }
        }
        Ok(())
    }

    /// Spectrum at one grid value.
    pub fn solve_at(&self, value: f64) -> Result<Spectrum> {
        let spec = self.geometry.with_parameter(&self.parameter, value)?;
        let graph = discretize(&spec, self.gamma, self.resolution)?;
        let mut sys = LambdaSystem::new(graph)?;
        if let Some(parity) = self.parity {
            let g = spec
                .natural_involution()
                .ok_or_else(|| Error::param("parity", "geometry has no symmetry"))?;
            sys = sys.restricted(g, parity)?;
        }
        find_eigenvalues(&sys, &self.solver)
    }
}

fn row_from(value: f64, outcome: Result<Spectrum>) -> SweepRow {
    match outcome {
        Ok(s) => {
            let mut energies = Vec::new();
            let mut above = Vec::new();
            for l in &s.levels {
                for _ in 0..l.multiplicity {
                    energies.push(l.energy);
                    above.push(l.above_threshold);
                }
            }
            SweepRow { value, energies, above_threshold: above, error: None }
        }
        Err(e) => SweepRow { value, energies: Vec::new(), above_threshold: Vec::new(), error: Some(e.to_string()) },
    }
}

/// Solve every grid value independently (in parallel) and collect rows in
/// grid order. Failures at single values are recorded, not propagated.
pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let rows = budget::pool().install(|| {
        spec.values.par_iter().map(|&v| row_from(v, spec.solve_at(v))).collect::<Vec<_>>()
    });
    Ok(SweepResult { parameter: spec.parameter.clone(), rows, solver: spec.solver })
}

impl SweepResult {
    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    pub fn max_levels(&self) -> usize {
        self.rows.iter().map(|r| r.energies.len()).max().unwrap_or(0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    /// Curve `j` (sorted index), `None` where the row has fewer levels.
    pub fn curve(&self, j: usize) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.energies.get(j).copied()).collect()
    }

    /// Keep only energies inside `[e_min, e_max]`.
    pub fn restricted(&self, e_min: f64, e_max: f64) -> SweepResult {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let keep: Vec<usize> = (0..r.energies.len()).filter(|&k| r.energies[k] >= e_min && r.energies[k] <= e_max).collect();
                SweepRow {
                    value: r.value,
                    energies: keep.iter().map(|&k| r.energies[k]).collect(),
                    above_threshold: keep.iter().map(|&k| r.above_threshold[k]).collect(),
                    error: r.error.clone(),
                }
            })
            .collect();
        SweepResult { parameter: self.parameter.clone(), rows, solver: self.solver }
    }

    /// CSV `param,E_1,…,E_m`, `NA` for absent levels.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let m = self.max_levels();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["param".to_string()];
        header.extend((1..=m).map(|j| format!("E_{j}")));
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![format!("{:.12e}", r.value)];
            rec.extend((0..m).map(|j| r.energies.get(j).map_or_else(|| "NA".to_string(), |e| format!("{e:.12e}"))));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Knobs of [`gap_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GapOptions {
    /// `|dE/dp|` below this counts as flat.
    pub slope_threshold: f64,
    /// Shortest plateau, in grid points.
    pub min_plateau_points: usize,
    /// Only report minima and plateaux whose energy lies in `[lo, hi]`.
    /// Curves are still indexed over the full spectrum.
    pub energy_window: Option<(f64, f64)>,
}

impl GapOptions {
    /// Default threshold `1e-3 · γ²` per unit parameter.
    pub fn for_gamma(gamma: f64) -> Self {
        GapOptions { slope_threshold: 1e-3 * gamma * gamma, min_plateau_points: 3, energy_window: None }
    }
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions::for_gamma(1.0)
    }
}

/// Interior local minimum of the gap between curves `lower` and `lower + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapMinimum {
    pub lower: usize,
    pub value: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub curve: usize,
    pub start: f64,
    pub end: f64,
    pub points: usize,
    /// Largest `|dE/dp|` inside the segment.
    pub slope_bound: f64,
    pub mean_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountChange {
    Birth,
    Death,
}

/// Curve `curve` appears or disappears between two adjacent grid values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub curve: usize,
    pub value: f64,
    pub kind: CountChange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub minima: Vec<GapMinimum>,
    pub plateaus: Vec<Plateau>,
    pub markers: Vec<Marker>,
    pub options: GapOptions,
}

impl GapReport {
    pub fn min_gap(&self) -> Option<f64> {
        self.minima.iter().map(|m| m.gap).min_by(f64::total_cmp)
    }
}

/// Split a curve into maximal runs of consecutive defined values.
fn runs(curve: &[Option<f64>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, v) in curve.iter().enumerate() {
        match (v, start) {
            (Some(_), None) => start = Some(i),
            (None, Some(s)) => {
                out.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, curve.len()));
    }
    out
}

/// Avoided-crossing minima, plateaux and birth/death markers of a sweep.
///
/// Curves are matched across the grid by sorted index.
pub fn gap_report(sr: &SweepResult, opts: &GapOptions) -> Result<GapReport> {
    if sr.rows.len() < 3 {
        return Err(Error::param("sweep", "gap analysis needs at least 3 grid values"));
    }
    if !(opts.slope_threshold > 0.0) {
        return Err(Error::param("slope_threshold", "must be positive"));
    }
    let p = sr.values();
    let m = sr.max_levels();
    let inside = |e: f64| opts.energy_window.is_none_or(|(lo, hi)| e >= lo && e <= hi);
    let curves: Vec<Vec<Option<f64>>> = (0..m).map(|j| sr.curve(j)).collect();

    let mut minima = Vec::new();
    for j in 0..m.saturating_sub(1) {
        let gap: Vec<Option<f64>> = curves[j].iter().zip(&curves[j + 1]).map(|(a, b)| Some((*b)? - (*a)?)).collect();
        for (s, e) in runs(&gap) {
            for i in s + 1..e.saturating_sub(1) {
                let (a, g, b) = (gap[i - 1].unwrap(), gap[i].unwrap(), gap[i + 1].unwrap());
                let mid = 0.5 * (curves[j][i].unwrap() + curves[j + 1][i].unwrap());
                if g < a && g <= b && inside(mid) {
                    minima.push(GapMinimum { lower: j, value: p[i], gap: g });
                }
            }
        }
    }

    let mut plateaus = Vec::new();
    for (j, curve) in curves.iter().enumerate() {
        for (s, e) in runs(curve) {
            if e - s < 2 {
                continue;
            }
            let slope: Vec<f64> = (s..e)
                .map(|i| {
                    let (lo, hi) = (i.max(s + 1) - 1, (i + 1).min(e - 1));
                    (curve[hi].unwrap() - curve[lo].unwrap()) / (p[hi] - p[lo])
                })
                .collect();
            let mut i = 0;
            while i < slope.len() {
                if slope[i].abs() >= opts.slope_threshold {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < slope.len() && slope[i].abs() < opts.slope_threshold {
                    i += 1;
                }
                let seg = s + start..s + i;
                let mean_energy = seg.clone().map(|k| curve[k].unwrap()).sum::<f64>() / seg.len() as f64;
                if seg.len() >= opts.min_plateau_points && inside(mean_energy) {
                    plateaus.push(Plateau {
                        curve: j,
                        start: p[seg.start],
                        end: p[seg.end - 1],
                        points: seg.len(),
                        slope_bound: slope[start..i].iter().fold(0.0, |acc, v| acc.max(v.abs())),
                        mean_energy,
                    });
                }
            }
        }
    }

    let mut markers = Vec::new();
    for (j, curve) in curves.iter().enumerate() {
        for i in 1..curve.len() {
            match (curve[i - 1].is_some(), curve[i].is_some()) {
                (false, true) => markers.push(Marker { curve: j, value: p[i], kind: CountChange::Birth }),
                (true, false) => markers.push(Marker { curve: j, value: p[i], kind: CountChange::Death }),
                _ => {}
            }
        }
    }

    Ok(GapReport { minima, plateaus, markers, options: *opts })
}

/// Least-squares power law `err ≈ C·N^{−a}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
}

pub fn convergence_fit(samples: &[(f64, f64)]) -> Result<ConvergenceFit> {
    if samples.len() < 3 {
        return Err(Error::param("samples", "need at least 3 points"));
    }
    if samples.iter().any(|&(n, e)| !(n > 0.0 && e > 0.0)) {
        return Err(Error::param("samples", "sizes and errors must be positive"));
    }
    let k = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::param("samples", "sizes must not all be equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / k).sqrt();
    Ok(ConvergenceFit { exponent: -slope, prefactor: intercept.exp(), residual })
}
