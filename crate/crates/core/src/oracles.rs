//! Reference solutions that do not go through the Λ-matrix.
//!
//! * the full ring, via the angular-sector condition `γR·I_l(κR)K_l(κR) = 1`;
//! * the straight line and the right-angled cross, which separate;
//! * the infinite straight polymer threshold;
//! * a Nyström discretisation of the Birman–Schwinger operator of a star;
//! * the upper estimate on the number of bound states of a two-arm star.

use std::f64::consts::{PI, TAU};

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg;
use crate::specfun;
use crate::spectral::{Level, ResolvedSettings, Spectrum};

/// One angular-momentum sector of the full-ring spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingLevel {
    pub l: u32,
    pub energy: f64,
    pub kappa: f64,
}

/// Bisection in `ln κ` for a decreasing `f` with `f(lo) > 0 > f(hi)`.
fn bisect_decreasing(mut lo: f64, mut hi: f64, rel_tol: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * hi {
            break;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Level of angular momentum `l` on the full ring of radius `R`, if any.
///
/// `P_l = I_l K_l` is decreasing with `P_l(0⁺) = 1/(2l)` for `l ≥ 1`, so a
/// level exists exactly when `γR > 2l`. `tol` is relative in κ.
pub fn ring_exact(radius: f64, gamma: f64, l: u32, tol: f64) -> Result<Option<RingLevel>> {
    if !(radius > 0.0 && gamma > 0.0 && tol > 0.0) {
        return Err(Error::param("ring_exact", "radius, gamma and tol must be positive"));
    }
    let gr = gamma * radius;
    if l > 0 && gr <= 2.0 * l as f64 {
        return Ok(None);
    }
    let f = |kappa: f64| Ok(gr * specfun::bessel_ik_product(l, kappa * radius)? - 1.0);
    let mut hi = 0.5 * gamma;
    while f(hi)? > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 1e-3 * hi;
    while f(lo)? <= 0.0 {
        lo *= 1e-3;
        if lo < 1e-300 {
            return Ok(None);
        }
    }
    let kappa = bisect_decreasing(lo, hi, tol, f)?;
    Ok(Some(RingLevel { l, energy: -kappa * kappa, kappa }))
}

/// All full-ring levels, ascending, with multiplicity 1 for `l = 0` and 2 otherwise.
pub fn ring_spectrum(radius: f64, gamma: f64, tol: f64) -> Result<Spectrum> {
    let mut levels = Vec::new();
    let mut l = 0;
    while let Some(level) = ring_exact(radius, gamma, l, tol)? {
        levels.push(Level {
            energy: level.energy,
            kappa: level.kappa,
            multiplicity: if l == 0 { 1 } else { 2 },
            residual: 0.0,
            above_threshold: false,
            warning: None,
        });
        l += 1;
    }
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(oracle_spectrum("ring_exact", levels, tol))
}

fn oracle_spectrum(name: &str, levels: Vec<Level>, tol: f64) -> Spectrum {
    Spectrum {
        levels,
        degeneracy_tol: 0.0,
        settings: ResolvedSettings {
            kappa_min: 0.0,
            kappa_max: 0.0,
            scan_points: 0,
            tol,
            degeneracy_tol: 0.0,
            evaluations: 0,
        },
        provenance: format!("oracle:{name}"),
    }
}

/// Bottom of the essential spectrum of a straight line (and of any star).
pub fn line_threshold(gamma: f64) -> f64 {
    -0.25 * gamma * gamma
}

/// The only eigenvalue of two straight lines crossing at right angles.
pub fn cross_eigenvalue(gamma: f64) -> f64 {
    -0.5 * gamma * gamma
}

/// `Σ_{m=1}^{M} (1/√((2πm)² + a²) − 1/(2πm))` plus an integral estimate of
/// the remainder.
fn polymer_series(a: f64, terms: usize) -> f64 {
    let a2 = a * a;
    let mut sum = 0.0;
    for m in (1..=terms).rev() {
        let b = TAU * m as f64;
        let root = (b * b + a2).sqrt();
        sum -= a2 / (b * root * (b + root));
    }
    if a == 0.0 {
        return 0.0;
    }
    let mp = terms as f64 + 0.5;
    sum + ((4.0 * PI / a).ln() - (TAU * mp / a).asinh() + mp.ln()) / TAU
}

/// Right-hand side of the polymer threshold equation for period `l₀/n`.
pub fn polymer_alpha(kappa: f64, n: u32, l0: f64, terms: usize) -> Result<f64> {
    if !(kappa > 0.0 && l0 > 0.0 && n >= 1) {
        return Err(Error::param("polymer", "need κ > 0, l₀ > 0 and n ≥ 1"));
    }
    let nf = n as f64;
    let a = kappa * l0 / nf;
    Ok(nf / (2.0 * l0 * kappa) - (TAU * nf / l0).ln() / TAU + polymer_series(a, terms))
}

/// Root of the polymer equation and its residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolymerRoot {
    pub kappa: f64,
    pub energy: f64,
    pub residual: f64,
}

/// Solve `polymer_alpha(κ) = α`; the right-hand side decreases from `+∞`.
pub fn polymer_threshold(alpha: f64, n: u32, l0: f64, terms: usize, tol: f64) -> Result<PolymerRoot> {
    if terms < 10_000 {
        return Err(Error::param("terms", "series cutoff must be at least 10⁴"));
    }
    if !(tol > 0.0 && alpha.is_finite()) {
        return Err(Error::param("tol", "must be positive"));
    }
    let f = |k: f64| polymer_alpha(k, n, l0, terms).map(|v| v - alpha);
    let (mut lo, mut hi) = (1.0 / l0, 1.0 / l0);
    let mut guard = 0;
    while f(lo)? <= 0.0 {
        lo *= 0.5;
        guard += 1;
        if guard > 2000 {
            return Err(Error::NoRoot(format!("polymer: α = {alpha} above reach")));
        }
    }
    while f(hi)? >= 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 2000 {
            return Err(Error::NoRoot(format!("polymer: α = {alpha} below reach")));
        }
    }
    let kappa = bisect_decreasing(lo, hi, 4.0 * f64::EPSILON, f)?;
    let residual = f(kappa)?.abs();
    if residual >= tol {
        return Err(Error::NoRoot(format!("polymer: residual {residual:e} above {tol:e}")));
    }
    Ok(PolymerRoot { kappa, energy: -kappa * kappa, residual })
}

/// Bottom of the spectrum of an infinite straight chain of point
/// interactions with spacing `h` and per-point coupling `1/(γh)`: the
/// threshold the point approximation actually sees on straight edges.
/// Tends to `−γ²/4` as `h → 0`.
pub fn chain_threshold(gamma: f64, spacing: f64) -> Result<PolymerRoot> {
    if !(gamma > 0.0 && spacing > 0.0) {
        return Err(Error::param("chain", "need γ > 0 and spacing > 0"));
    }
    polymer_threshold(1.0 / (gamma * spacing), 1, spacing, 100_000, 1e-10)
}

/// Nyström discretisation of `γR^κ` on the arms of a finite star.
#[derive(Debug, Clone)]
pub struct StarBs {
    /// Direction of each arm.
    pub arm_angles: Vec<f64>,
    pub gamma: f64,
    pub arm_length: f64,
    pub nodes_per_arm: usize,
    points: Vec<Point>,
    arm: Vec<usize>,
}

/// A located Birman–Schwinger bound state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsRoot {
    pub kappa: f64,
    pub energy: f64,
}

impl StarBs {
    /// Star with arms at the given absolute directions.
    pub fn new(arm_angles: Vec<f64>, gamma: f64, arm_length: f64, nodes_per_arm: usize) -> Result<Self> {
        if arm_angles.len() < 2 {
            return Err(Error::param("arm_angles", "need at least two arms"));
        }
        if nodes_per_arm < 50 {
            return Err(Error::param("nodes_per_arm", "must be at least 50"));
        }
        if !(gamma > 0.0 && arm_length > 0.0) {
            return Err(Error::param("star_bs", "gamma and arm_length must be positive"));
        }
        let h = arm_length / nodes_per_arm as f64;
        let mut points = Vec::new();
        let mut arm = Vec::new();
        for (j, &theta) in arm_angles.iter().enumerate() {
            for i in 0..nodes_per_arm {
                points.push(Point::polar((i as f64 + 0.5) * h, theta));
                arm.push(j);
            }
        }
        Ok(StarBs { arm_angles, gamma, arm_length, nodes_per_arm, points, arm })
    }

    /// Two arms enclosing the angle `β`.
    pub fn two_arm(beta: f64, gamma: f64, arm_length: f64, nodes_per_arm: usize) -> Result<Self> {
        if !(beta > 0.0 && beta <= PI) {
            return Err(Error::param("beta", "must lie in (0, π]"));
        }
        Self::new(vec![0.0, beta], gamma, arm_length, nodes_per_arm)
    }

    fn spacing(&self) -> f64 {
        self.arm_length / self.nodes_per_arm as f64
    }

    /// Symmetric Nyström matrix of `γR^κ` (uniform weights `h`).
    ///
    /// Off-diagonal cells use the midpoint rule; the self cell integrates
    /// the logarithmic singularity exactly: `∫_{−h/2}^{h/2} K₀(κ|t|) dt`.
    pub fn matrix(&self, kappa: f64) -> Result<Mat<f64>> {
        if !(kappa > 0.0) {
            return Err(Error::param("kappa", "must be positive"));
        }
        let h = self.spacing();
        let c = self.gamma / TAU;
        let self_cell = c * 2.0 / kappa * specfun::bessel_k0_integral(0.5 * kappa * h)?;
        let n = self.points.len();
        Ok(Mat::from_fn(n, n, |i, j| {
            if i == j {
                self_cell
            } else {
                // same-arm distances are exact differences of arc length
                let d = if self.arm[i] == self.arm[j] {
                    ((i as f64) - (j as f64)).abs() * h
                } else {
                    self.points[i].distance(self.points[j])
                };
                c * h * specfun::k0(kappa * d)
            }
        }))
    }

    pub fn lambda_max(&self, kappa: f64) -> Result<f64> {
        let ev = linalg::eigenvalues(self.matrix(kappa)?.as_ref())?;
        Ok(*ev.last().expect("non-empty"))
    }

    /// `dλ_max/dκ` by Hellmann–Feynman on the top eigenvector.
    pub fn lambda_max_derivative(&self, kappa: f64) -> Result<f64> {
        let (values, vectors) = linalg::eigenpairs(self.matrix(kappa)?.as_ref())?;
        let top = values.len() - 1;
        let v: Vec<f64> = (0..values.len()).map(|i| vectors[(i, top)]).collect();
        let h = self.spacing();
        let c = self.gamma / TAU;
        let z = 0.5 * kappa * h;
        let self_cell = c * (-2.0 / (kappa * kappa) * specfun::bessel_k0_integral(z)? + h / kappa * specfun::k0(z));
        let n = v.len();
        let mut acc = 0.0;
        for i in 0..n {
            acc += self_cell * v[i] * v[i];
            for j in 0..i {
                let d = if self.arm[i] == self.arm[j] {
                    (i - j) as f64 * h
                } else {
                    self.points[i].distance(self.points[j])
                };
                acc -= 2.0 * c * h * d * specfun::k1(kappa * d) * v[i] * v[j];
            }
        }
        Ok(acc)
    }

    /// Largest `κ` with `λ_max(κ) = 1` in `(κ_lo, κ_hi)`, bisected to
    /// relative width `1e-8`. `None` when `λ_max < 1` on the whole bracket.
    pub fn lowest_root_in(&self, kappa_lo: f64, kappa_hi: f64) -> Result<Option<BsRoot>> {
        if !(kappa_lo > 0.0 && kappa_hi > kappa_lo) {
            return Err(Error::param("bracket", "need 0 < κ_lo < κ_hi"));
        }
        let f = |k: f64| self.lambda_max(k).map(|l| l - 1.0);
        if f(kappa_lo)? <= 0.0 {
            return Ok(None);
        }
        let mut hi = kappa_hi;
        while f(hi)? > 0.0 {
            hi *= 2.0;
            if hi > 1e6 * kappa_hi {
                return Err(Error::NoRoot("star_bs: λ_max stays above 1".into()));
            }
        }
        let kappa = bisect_decreasing(kappa_lo, hi, 1e-8, f)?;
        Ok(Some(BsRoot { kappa, energy: -kappa * kappa }))
    }

    /// Ground state below the continuum threshold `−γ²/4`, if any.
    pub fn lowest_root(&self) -> Result<Option<BsRoot>> {
        self.lowest_root_in(0.5 * self.gamma, 2.0 * self.gamma)
    }
}

/// Upper estimate on the number of bound states of a two-arm star with
/// opening angle `β ∈ (0, π)`.
pub fn nest_bound(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < PI) {
        return Err(Error::Domain { function: "nest_bound", value: beta });
    }
    let half = 0.5 * beta;
    let sec = 1.0 / half.cos();
    Ok((8.0 * sec - 5.0).powf(1.5) / (8.0 * sec - 3.0).sqrt() / (16.0 * PI * half.tan()))
}
