//! The Λ-matrix of a point-interaction Hamiltonian and everything computed
//! from it: bound states, their charges, and eigenfunctions.
//!
//! For `Y ⊂ ℝ²` with coupling `α` and energy `E = −κ²`,
//!
//! ```text
//! Λ(κ)_{yy}  = (2π|Y|α + ln(κ/2) + C_E) / 2π
//! Λ(κ)_{yy'} = −K₀(κ|y − y'|) / 2π          (y ≠ y')
//! ```
//!
//! and `E` is an eigenvalue exactly when `Λ(κ)` is singular. `Λ(κ)` is
//! increasing in `κ` in the Loewner order (its derivative is `2κ` times the
//! Gram matrix of the Green functions `G_{iκ}(· − y)`), so each sorted
//! eigenvalue `λ_j(κ)` is increasing and has at most one zero. The solver
//! brackets those zeros from a geometric κ-scan and refines each index
//! separately, reusing every eigen-evaluation for all indices.

use std::f64::consts::{PI, TAU};

use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{Error, Result};
use crate::geometry::{DiscretizedGraph, Involution, Point};
use crate::linalg::{self, Inertia};
use crate::specfun::{self, EULER_GAMMA};

/// Eigenspace of an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// Basis of one symmetry sector: orbits `{i, σ(i)}` with `i ≤ σ(i)`.
#[derive(Debug, Clone)]
struct Sector {
    orbits: Vec<(usize, Option<usize>)>,
    parity: Parity,
}

/// Point set with its pairwise distances, ready for repeated assembly.
#[derive(Debug, Clone)]
pub struct LambdaSystem {
    graph: DiscretizedGraph,
    /// Row-major `|Y| × |Y|`.
    distances: Vec<f64>,
    sector: Option<Sector>,
}

impl LambdaSystem {
    pub fn new(graph: DiscretizedGraph) -> Result<Self> {
        let n = graph.len();
        if n == 0 {
            return Err(Error::param("points", "need at least one point"));
        }
        let mut distances = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                let r = graph.points[i].distance(graph.points[j]);
                if !(r > 0.0) {
                    return Err(Error::CoincidentPoints(j, i));
                }
                distances[i * n + j] = r;
                distances[j * n + i] = r;
            }
        }
        Ok(LambdaSystem { graph, distances, sector: None })
    }

    /// Restrict to the `parity` eigenspace of the permutation of `Y`
    /// induced by `g`. `Λ` commutes with it, so the spectrum splits.
    ///
    /// Fails if `g` does not map `Y` onto itself (tolerance `1e-9 ·` spacing).
    pub fn restricted(&self, g: Involution, parity: Parity) -> Result<LambdaSystem> {
        let pts = &self.graph.points;
        let tol = 1e-9 * self.graph.spacing.max(1e-300);
        let mut image = vec![usize::MAX; pts.len()];
        for (i, p) in pts.iter().enumerate() {
            let q = g.apply(*p);
            let j = (0..pts.len())
                .find(|&j| pts[j].distance(q) <= tol)
                .ok_or_else(|| Error::Geometry(format!("point {i} has no mirror image under {g:?}")))?;
            image[i] = j;
        }
        if (0..pts.len()).any(|i| image[image[i]] != i) {
            return Err(Error::Geometry("symmetry does not act as an involution on the points".into()));
        }
        let orbits = (0..pts.len())
            .filter(|&i| image[i] >= i)
            .filter_map(|i| match (image[i] == i, parity) {
                (true, Parity::Even) => Some((i, None)),
                (true, Parity::Odd) => None,
                (false, _) => Some((i, Some(image[i]))),
            })
            .collect();
        let mut out = self.clone();
        out.sector = Some(Sector { orbits, parity });
        Ok(out)
    }

    /// Size of the matrix actually assembled (`|Y|` without a sector).
    pub fn dim(&self) -> usize {
        self.sector.as_ref().map_or(self.len(), |s| s.orbits.len())
    }

    /// Map sector coordinates back to charges on all of `Y`.
    pub fn expand(&self, v: &[f64]) -> Vec<f64> {
        match &self.sector {
            None => v.to_vec(),
            Some(sec) => {
                let mut c = vec![0.0; self.len()];
                let sign = sec.parity.sign();
                for (a, &(i, partner)) in sec.orbits.iter().enumerate() {
                    match partner {
                        None => c[i] = v[a],
                        Some(j) => {
                            c[i] = v[a] * std::f64::consts::FRAC_1_SQRT_2;
                            c[j] = sign * v[a] * std::f64::consts::FRAC_1_SQRT_2;
                        }
                    }
                }
                c
            }
        }
    }

    pub fn graph(&self) -> &DiscretizedGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distances[i * self.len() + j]
    }

    /// Common diagonal entry of `Λ(κ)`.
    pub fn diagonal(&self, kappa: f64) -> f64 {
        (TAU * self.graph.coupling() + (0.5 * kappa).ln() + EULER_GAMMA) / TAU
    }

    /// `Λ(κ)` at energy `−κ²`.
    pub fn assemble(&self, kappa: f64) -> Result<Mat<f64>> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::param("kappa", format!("must be positive, got {kappa}")));
        }
        if let Some(sec) = &self.sector {
            return Ok(self.assemble_sector(sec, kappa));
        }
        let n = self.len();
        let diag = self.diagonal(kappa);
        let mut m = Mat::<f64>::zeros(n, n);
        for j in 0..n {
            m[(j, j)] = diag;
            let row = &self.distances[j * n..(j + 1) * n];
            for i in j + 1..n {
                let v = -specfun::k0(kappa * row[i]) / TAU;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(m)
    }

    fn entry(&self, i: usize, j: usize, kappa: f64, diag: f64) -> f64 {
        if i == j {
            diag
        } else {
            -specfun::k0(kappa * self.distance(i, j)) / TAU
        }
    }

    /// `QᵀΛQ` for the orthonormal sector basis `Q`.
    fn assemble_sector(&self, sec: &Sector, kappa: f64) -> Mat<f64> {
        let diag = self.diagonal(kappa);
        let sign = sec.parity.sign();
        let d = sec.orbits.len();
        let mut m = Mat::<f64>::zeros(d, d);
        for b in 0..d {
            let (j, pj) = sec.orbits[b];
            for a in b..d {
                let (i, pi) = sec.orbits[a];
                // Λ is invariant under the permutation, so Λ_{σi σj} = Λ_{ij}
                let v = match (pi, pj) {
                    (Some(_), Some(pj)) => self.entry(i, j, kappa, diag) + sign * self.entry(i, pj, kappa, diag),
                    (Some(_), None) | (None, Some(_)) => std::f64::consts::SQRT_2 * self.entry(i, j, kappa, diag),
                    (None, None) => self.entry(i, j, kappa, diag),
                };
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
        m
    }

    /// Ascending eigenvalues of `Λ(κ)`.
    pub fn eigenvalues(&self, kappa: f64) -> Result<Vec<f64>> {
        linalg::eigenvalues(self.assemble(kappa)?.as_ref())
    }

    pub fn inertia(&self, kappa: f64) -> Result<Inertia> {
        linalg::inertia(self.assemble(kappa)?.as_ref())
    }

    /// Single-centre bound state `κ* = 2 exp(−C_E − 2π|Y|α)`.
    pub fn single_center_kappa(&self) -> f64 {
        2.0 * (-EULER_GAMMA - TAU * self.graph.coupling()).exp()
    }

    /// Energy of the bottom of the continuum for graphs with cut-off edges.
    pub fn threshold(&self) -> Option<f64> {
        self.graph.cutoff.then(|| -0.25 * self.graph.gamma * self.graph.gamma)
    }
}

/// Knobs of [`find_eigenvalues`]; unset bounds use the defaults below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Default `1e-3 · γ`.
    pub kappa_min: Option<f64>,
    /// Default `1.25 · max(γ, κ*)`, extended while `Λ(κ_max)` is not positive.
    pub kappa_max: Option<f64>,
    pub scan_points: usize,
    /// Target `|λ_j|` at a root.
    pub tol: f64,
    /// Relative energy tolerance for merging roots into one level.
    pub degeneracy_tol: f64,
    /// Grid refinements allowed when an index changes sign twice.
    pub max_refinements: usize,
    /// Confirm each level's multiplicity by LDLᵀ inertia on both sides.
    pub cross_check: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            kappa_min: None,
            kappa_max: None,
            scan_points: 200,
            tol: 1e-10,
            degeneracy_tol: 1e-6,
            max_refinements: 4,
            cross_check: true,
        }
    }
}

impl SolverOptions {
    /// Restrict the search to energies in `[e_min, e_max]` (both negative).
    pub fn energy_window(mut self, e_min: f64, e_max: f64) -> Self {
        self.kappa_min = Some((-e_max).sqrt());
        self.kappa_max = Some((-e_min).sqrt());
        self
    }

    pub fn with_scan_points(mut self, n: usize) -> Self {
        self.scan_points = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.scan_points < 8 {
            return Err(Error::param("scan_points", "must be at least 8"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param("tol", "must be positive"));
        }
        if !(self.degeneracy_tol >= 0.0) {
            return Err(Error::param("degeneracy_tol", "must be non-negative"));
        }
        if let (Some(a), Some(b)) = (self.kappa_min, self.kappa_max) {
            if !(a > 0.0 && b > a) {
                return Err(Error::param("kappa_min", format!("need 0 < κ_min < κ_max, got ({a}, {b})")));
            }
        }
        Ok(())
    }
}

/// Settings a spectrum was actually computed with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSettings {
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub scan_points: usize,
    pub tol: f64,
    pub degeneracy_tol: f64,
    pub evaluations: usize,
}

/// Diagnostics attached to a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    /// An eigenvalue index changed sign more than once on the scan grid
    /// even after refinement.
    BranchAmbiguity,
    /// LDLᵀ inertia on both sides of the level disagrees with its multiplicity.
    InertiaMismatch,
}

/// One (possibly degenerate) discrete eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub kappa: f64,
    pub multiplicity: usize,
    /// Largest `|λ_j(κ)|` over the merged roots.
    pub residual: f64,
    pub above_threshold: bool,
    pub warning: Option<Warning>,
}

impl Level {
    pub fn flag(&self) -> &'static str {
        match (self.warning, self.above_threshold) {
            (Some(Warning::BranchAmbiguity), _) => "branch_ambiguity",
            (Some(Warning::InertiaMismatch), _) => "inertia_mismatch",
            (None, true) => "above_threshold",
            (None, false) => "ok",
        }
    }
}

/// Sorted discrete spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub levels: Vec<Level>,
    pub degeneracy_tol: f64,
    pub settings: ResolvedSettings,
    /// Where the numbers come from: `point-interaction` or `oracle:<name>`.
    pub provenance: String,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// Energies repeated according to multiplicity.
    pub fn energies_with_multiplicity(&self) -> Vec<f64> {
        self.levels.iter().flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity)).collect()
    }

    /// Levels below the continuum threshold (all levels if there is none).
    pub fn bound_levels(&self) -> impl Iterator<Item = &Level> {
        self.levels.iter().filter(|l| !l.above_threshold)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    /// CSV with columns `E,multiplicity,flag`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["E", "multiplicity", "flag"])?;
        for l in &self.levels {
            w.write_record([format!("{:.12e}", l.energy), l.multiplicity.to_string(), l.flag().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Eigenvalues of `Λ` at one κ.
#[derive(Debug, Clone)]
struct Sample {
    kappa: f64,
    eigenvalues: Vec<f64>,
}

struct Cache<'a> {
    sys: &'a LambdaSystem,
    samples: Vec<Sample>,
    evaluations: usize,
}

impl<'a> Cache<'a> {
    fn eval_many(&mut self, kappas: &[f64]) -> Result<()> {
        let sys = self.sys;
        let fresh: Vec<Sample> = budget::pool().install(|| {
            kappas
                .par_iter()
                .map(|&kappa| Ok(Sample { kappa, eigenvalues: sys.eigenvalues(kappa)? }))
                .collect::<Result<Vec<_>>>()
        })?;
        self.evaluations += fresh.len();
        self.samples.extend(fresh);
        self.samples.sort_by(|a, b| a.kappa.total_cmp(&b.kappa));
        self.samples.dedup_by(|a, b| a.kappa == b.kappa);
        Ok(())
    }

    fn eval(&mut self, kappa: f64) -> Result<&Sample> {
        let pos = self.samples.partition_point(|s| s.kappa < kappa);
        if pos < self.samples.len() && self.samples[pos].kappa == kappa {
            return Ok(&self.samples[pos]);
        }
        let sample = Sample { kappa, eigenvalues: self.sys.eigenvalues(kappa)? };
        self.evaluations += 1;
        self.samples.insert(pos, sample);
        Ok(&self.samples[pos])
    }

    fn negatives(s: &Sample) -> usize {
        s.eigenvalues.partition_point(|&l| l < 0.0)
    }

    /// Tightest bracket `(κ_a, λ_a, κ_b, λ_b)` with `λ_j(κ_a) < 0 ≤ λ_j(κ_b)`,
    /// plus whether the sign sequence of index `j` is monotone.
    fn bracket(&self, j: usize) -> (Option<(f64, f64, f64, f64)>, bool) {
        let mut best = None;
        let mut monotone = true;
        let mut seen_nonneg = false;
        for w in self.samples.windows(2) {
            let (la, lb) = (w[0].eigenvalues[j], w[1].eigenvalues[j]);
            if la >= 0.0 {
                seen_nonneg = true;
            }
            if seen_nonneg && lb < 0.0 {
                monotone = false;
            }
            if la < 0.0 && lb >= 0.0 && best.is_none() {
                best = Some((w[0].kappa, la, w[1].kappa, lb));
            }
        }
        (best, monotone)
    }
}

/// Locate all zeros of `det Λ(κ)` with `κ ∈ [κ_min, κ_max]`.
///
/// Returns `E = −κ²` sorted ascending, clustered into degenerate levels.
pub fn find_eigenvalues(sys: &LambdaSystem, opts: &SolverOptions) -> Result<Spectrum> {
    opts.validate()?;
    let g = sys.graph();
    let kappa_min = opts.kappa_min.unwrap_or(1e-3 * g.gamma);
    let explicit_max = opts.kappa_max.is_some();
    let mut kappa_max = opts.kappa_max.unwrap_or(1.25 * g.gamma.max(sys.single_center_kappa()));
    if !(kappa_max > kappa_min) {
        kappa_max = 2.0 * kappa_min;
    }
    let mut cache = Cache { sys, samples: Vec::new(), evaluations: 0 };
    if sys.dim() == 0 {
        return Ok(Spectrum {
            levels: Vec::new(),
            degeneracy_tol: opts.degeneracy_tol,
            settings: ResolvedSettings {
                kappa_min,
                kappa_max,
                scan_points: 0,
                tol: opts.tol,
                degeneracy_tol: opts.degeneracy_tol,
                evaluations: 0,
            },
            provenance: "point-interaction".into(),
        });
    }
    if !explicit_max {
        for _ in 0..40 {
            let s = cache.eval(kappa_max)?;
            if Cache::negatives(s) == 0 {
                break;
            }
            kappa_max *= 2.0;
        }
    }

    let m = opts.scan_points;
    let ratio = (kappa_max / kappa_min).ln() / (m - 1) as f64;
    let grid: Vec<f64> = (0..m).map(|i| if i + 1 == m { kappa_max } else { kappa_min * (ratio * i as f64).exp() }).collect();
    cache.eval_many(&grid)?;
    cache.samples.retain(|s| s.kappa >= kappa_min && s.kappa <= kappa_max);

    let first = Cache::negatives(cache.samples.last().expect("grid"));
    let last = Cache::negatives(&cache.samples[0]);

    let mut roots: Vec<(f64, f64, Option<Warning>)> = Vec::new();
    for j in first..last {
        let mut warning = None;
        let mut refinements = 0;
        let bracket = loop {
            let (bracket, monotone) = cache.bracket(j);
            if monotone || refinements >= opts.max_refinements {
                if !monotone {
                    warning = Some(Warning::BranchAmbiguity);
                }
                break bracket;
            }
            let mids: Vec<f64> = cache.samples.windows(2).map(|w| (w[0].kappa * w[1].kappa).sqrt()).collect();
            cache.eval_many(&mids)?;
            refinements += 1;
        };
        let Some((ka, la, kb, lb)) = bracket else { continue };
        let (kappa, residual) = refine_root(&mut cache, j, ka, la, kb, lb, opts.tol)?;
        roots.push((kappa, residual, warning));
    }

    // j ascending ⇔ κ descending ⇔ E ascending
    let mut levels: Vec<Level> = Vec::new();
    let mut group: Vec<(f64, f64, Option<Warning>)> = Vec::new();
    let threshold = sys.threshold();
    let flush = |group: &mut Vec<(f64, f64, Option<Warning>)>, levels: &mut Vec<Level>| {
        if group.is_empty() {
            return;
        }
        let energy = group.iter().map(|r| -r.0 * r.0).sum::<f64>() / group.len() as f64;
        levels.push(Level {
            energy,
            kappa: (-energy).sqrt(),
            multiplicity: group.len(),
            residual: group.iter().map(|r| r.1).fold(0.0, f64::max),
            above_threshold: threshold.is_some_and(|t| energy > t),
            warning: group.iter().find_map(|r| r.2),
        });
        group.clear();
    };
    for root in roots {
        if let Some(prev) = group.last() {
            let (e_prev, e) = (-prev.0 * prev.0, -root.0 * root.0);
            if (e - e_prev).abs() > opts.degeneracy_tol * e_prev.abs() {
                flush(&mut group, &mut levels);
            }
        }
        group.push(root);
    }
    flush(&mut group, &mut levels);

    if opts.cross_check {
        cross_check_levels(sys, &mut levels)?;
    }

    Ok(Spectrum {
        levels,
        degeneracy_tol: opts.degeneracy_tol,
        settings: ResolvedSettings {
            kappa_min,
            kappa_max,
            scan_points: m,
            tol: opts.tol,
            degeneracy_tol: opts.degeneracy_tol,
            evaluations: cache.evaluations,
        },
        provenance: "point-interaction".into(),
    })
}

/// Illinois iteration in `ln κ` on the `j`-th sorted eigenvalue.
fn refine_root(
    cache: &mut Cache<'_>,
    j: usize,
    mut ka: f64,
    mut la: f64,
    mut kb: f64,
    mut lb: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if lb.abs() < tol {
        return Ok((kb, lb.abs()));
    }
    let (mut ua, mut ub) = (ka.ln(), kb.ln());
    let mut side = 0i8;
    for _ in 0..200 {
        let mut u = (ua * lb - ub * la) / (lb - la);
        if !(u > ua && u < ub) {
            u = 0.5 * (ua + ub);
        }
        let kappa = u.exp();
        if kappa <= ka || kappa >= kb {
            break;
        }
        let l = cache.eval(kappa)?.eigenvalues[j];
        if l.abs() < tol {
            return Ok((kappa, l.abs()));
        }
        if l < 0.0 {
            ua = u;
            ka = kappa;
            la = l;
            if side == -1 {
                lb *= 0.5;
            }
            side = -1;
        } else {
            ub = u;
            kb = kappa;
            lb = l;
            if side == 1 {
                la *= 0.5;
            }
            side = 1;
        }
        if kb - ka <= 4.0 * f64::EPSILON * kb {
            break;
        }
    }
    // bracket exhausted at machine precision; return the better end
    let sa = cache.eval(ka)?.eigenvalues[j].abs();
    let sb = cache.eval(kb)?.eigenvalues[j].abs();
    Ok(if sa < sb { (ka, sa) } else { (kb, sb) })
}

fn cross_check_levels(sys: &LambdaSystem, levels: &mut [Level]) -> Result<()> {
    let kappas: Vec<f64> = levels.iter().map(|l| l.kappa).collect();
    for (i, level) in levels.iter_mut().enumerate() {
        let mut gap = f64::INFINITY;
        if i > 0 {
            gap = gap.min((kappas[i - 1] - level.kappa).abs() / level.kappa);
        }
        if i + 1 < kappas.len() {
            gap = gap.min((kappas[i + 1] - level.kappa).abs() / level.kappa);
        }
        let delta = (0.25 * gap).clamp(1e-13, 1e-6);
        let below = sys.inertia(level.kappa * (1.0 - delta))?;
        let above = sys.inertia(level.kappa * (1.0 + delta))?;
        let crossed = below.negative.saturating_sub(above.negative);
        if crossed != level.multiplicity && level.warning.is_none() {
            level.warning = Some(Warning::InertiaMismatch);
        }
    }
    Ok(())
}

/// Unit-norm null vectors of `Λ(E0)`: the `multiplicity` eigenvectors with
/// smallest `|λ|`. Fails if even the smallest exceeds `10 · tol`.
pub fn null_vectors(sys: &LambdaSystem, energy: f64, multiplicity: usize, tol: f64) -> Result<Vec<Vec<f64>>> {
    if !(energy < 0.0) {
        return Err(Error::param("energy", format!("must be negative, got {energy}")));
    }
    let kappa = (-energy).sqrt();
    let m = sys.assemble(kappa)?;
    let (values, vectors) = linalg::eigenpairs(m.as_ref())?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs()));
    let smallest = values[order[0]].abs();
    if smallest > 10.0 * tol {
        return Err(Error::StaleRoot { energy, smallest });
    }
    let d = sys.dim();
    Ok(order
        .iter()
        .take(multiplicity.max(1).min(d))
        .map(|&k| {
            let v: Vec<f64> = (0..d).map(|i| vectors[(i, k)]).collect();
            let mut c = sys.expand(&v);
            let pivot = c.iter().copied().fold(0.0, |acc: f64, v| if v.abs() > acc.abs() { v } else { acc });
            if pivot < 0.0 {
                c.iter_mut().for_each(|v| *v = -*v);
            }
            c
        })
        .collect())
}

/// Single null vector, for a simple level.
pub fn null_vector(sys: &LambdaSystem, energy: f64, tol: f64) -> Result<Vec<f64>> {
    Ok(null_vectors(sys, energy, 1, tol)?.remove(0))
}

/// `ψ(x) = Σ_y c_y K₀(κ₀|x − y|) / 2π`.
pub fn eigenfunction_at(sys: &LambdaSystem, c: &[f64], kappa0: f64, x: Point) -> f64 {
    let floor = 1e-9 * sys.graph().spacing;
    sys.graph()
        .points
        .iter()
        .zip(c)
        .map(|(y, cy)| cy * specfun::k0(kappa0 * x.distance(*y).max(floor)))
        .sum::<f64>()
        / TAU
}

/// Rectangle in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// Eigenfunction sampled on a lattice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenfunctionGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major: `values[iy * xs.len() + ix]`.
    pub values: Vec<f64>,
    /// Node lies within `spacing/10` of a centre (logarithmic spike).
    pub near_center: Vec<bool>,
    pub kappa0: f64,
    pub coefficients: Vec<f64>,
}

impl EigenfunctionGrid {
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.xs.len() + ix]
    }

    /// CSV with columns `x,y,psi,near_center`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "psi", "near_center"])?;
        for (iy, y) in self.ys.iter().enumerate() {
            for (ix, x) in self.xs.iter().enumerate() {
                let k = iy * self.xs.len() + ix;
                w.write_record([
                    format!("{x:.9e}"),
                    format!("{y:.9e}"),
                    format!("{:.12e}", self.values[k]),
                    (self.near_center[k] as u8).to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Evaluate `ψ = Σ c_y G_{iκ₀}(· − y)` on an `nx × ny` lattice.
pub fn eval_eigenfunction(
    sys: &LambdaSystem,
    c: &[f64],
    kappa0: f64,
    window: Window,
    nx: usize,
    ny: usize,
) -> Result<EigenfunctionGrid> {
    if c.len() != sys.len() {
        return Err(Error::param("coefficients", format!("expected {} entries, got {}", sys.len(), c.len())));
    }
    if !(kappa0 > 0.0) {
        return Err(Error::param("kappa0", "must be positive"));
    }
    if nx == 0 || ny == 0 || !(window.x_max >= window.x_min && window.y_max >= window.y_min) {
        return Err(Error::param("window", "empty lattice"));
    }
    let xs = linspace(window.x_min, window.x_max, nx);
    let ys = linspace(window.y_min, window.y_max, ny);
    let near = 0.1 * sys.graph().spacing;
    let rows: Vec<(Vec<f64>, Vec<bool>)> = budget::pool().install(|| {
        ys.par_iter()
            .map(|&y| {
                xs.iter()
                    .map(|&x| {
                        let p = Point::new(x, y);
                        let dmin = sys.graph().points.iter().map(|q| q.distance(p)).fold(f64::INFINITY, f64::min);
                        (eigenfunction_at(sys, c, kappa0, p), dmin < near)
                    })
                    .unzip()
            })
            .collect()
    });
    let (mut values, mut near_center) = (Vec::with_capacity(nx * ny), Vec::with_capacity(nx * ny));
    for (v, f) in rows {
        values.extend(v);
        near_center.extend(f);
    }
    Ok(EigenfunctionGrid { xs, ys, values, near_center, kappa0, coefficients: c.to_vec() })
}

/// `α − max_x |Y|⁻¹ Σ_{y≠x} G_{iκ}(x − y)`: positive values certify the
/// diagonal-dominance regime in which `Λ(κ)/|Y|` is boundedly invertible.
pub fn schur_margin(sys: &LambdaSystem, kappa: f64) -> f64 {
    let n = sys.len();
    let worst = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| specfun::k0(kappa * sys.distance(i, j)))
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    sys.graph().alpha - worst / (TAU * n as f64)
}

/// Outcome of [`scaled_spectrum_check`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingReport {
    pub scale: f64,
    pub original: Vec<f64>,
    /// Energies of the dilated system multiplied by `s²`.
    pub rescaled: Vec<f64>,
    pub max_relative_mismatch: f64,
}

/// Compare the spectrum of `Y` at `α` with that of `sY` at
/// `α + ln s / (2π|Y|)`; the two differ exactly by the factor `s⁻²`.
pub fn scaled_spectrum_check(sys: &LambdaSystem, s: f64, opts: &SolverOptions) -> Result<ScalingReport> {
    let g = sys.graph();
    let alpha = g.alpha + s.ln() / (TAU * g.len() as f64);
    let scaled = LambdaSystem::new(g.scaled(s)?.with_alpha(alpha)?)?;
    let base = find_eigenvalues(sys, opts)?;
    let mut scaled_opts = *opts;
    scaled_opts.kappa_min = Some(base.settings.kappa_min / s);
    scaled_opts.kappa_max = Some(base.settings.kappa_max / s);
    let other = find_eigenvalues(&scaled, &scaled_opts)?;
    let original = base.energies_with_multiplicity();
    let rescaled: Vec<f64> = other.energies_with_multiplicity().iter().map(|e| e * s * s).collect();
    let max_relative_mismatch = if original.len() != rescaled.len() {
        f64::INFINITY
    } else {
        original.iter().zip(&rescaled).map(|(a, b)| ((a - b) / a).abs()).fold(0.0, f64::max)
    };
    Ok(ScalingReport { scale: s, original, rescaled, max_relative_mismatch })
}

/// Closed-form single-centre level `−4 exp(−2C_E − 4πα')` with `α' = |Y|α`.
pub fn single_center_energy(coupling: f64) -> f64 {
    -4.0 * (-2.0 * EULER_GAMMA - 4.0 * PI * coupling).exp()
}
