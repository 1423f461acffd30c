//! Modified Bessel functions of integer order for real positive argument.
//!
//! Everything downstream only needs `K₀`, `K₁` and the products `I_l K_l`.
//! Small arguments use the ascending series, large ones Steed's continued
//! fraction for `U(½, 1, 2x)` (Thompson & Barnett), so no tables are involved.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_CUTOFF: f64 = 2.0;
const MAX_ITER: usize = 100_000;

/// Whether a value was representable or flushed to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    UnderflowToZero,
}

/// A function value together with its underflow status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub status: Status,
}

impl SpecFunResult {
    fn from_scaled(scaled: f64, x: f64) -> Self {
        let value = scaled * (-x).exp();
        if value == 0.0 || !value.is_normal() {
            SpecFunResult { value: 0.0, status: Status::UnderflowToZero }
        } else {
            SpecFunResult { value, status: Status::Ok }
        }
    }
}

fn check_domain(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { function: name, value: x })
    }
}

/// `K₀(x)`, flushed to zero with [`Status::UnderflowToZero`] far in the tail.
pub fn bessel_k0(x: f64) -> Result<SpecFunResult> {
    check_domain("bessel_k0", x)?;
    if x <= SERIES_CUTOFF {
        let (k0, _) = k01_series(x);
        Ok(SpecFunResult { value: k0, status: Status::Ok })
    } else {
        let (k0, _) = k01_scaled_cf(x);
        Ok(SpecFunResult::from_scaled(k0, x))
    }
}

/// `K₁(x)`, same conventions as [`bessel_k0`].
pub fn bessel_k1(x: f64) -> Result<SpecFunResult> {
    check_domain("bessel_k1", x)?;
    if x <= SERIES_CUTOFF {
        let (_, k1) = k01_series(x);
        Ok(SpecFunResult { value: k1, status: Status::Ok })
    } else {
        let (_, k1) = k01_scaled_cf(x);
        Ok(SpecFunResult::from_scaled(k1, x))
    }
}

/// Unchecked `K₀` for hot loops: callers guarantee `x > 0`.
#[inline]
pub(crate) fn k0(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= SERIES_CUTOFF {
        k01_series(x).0
    } else if x > 745.0 {
        0.0
    } else {
        k01_scaled_cf(x).0 * (-x).exp()
    }
}

/// Unchecked `K₁` for hot loops.
#[inline]
pub(crate) fn k1(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= SERIES_CUTOFF {
        k01_series(x).1
    } else if x > 745.0 {
        0.0
    } else {
        k01_scaled_cf(x).1 * (-x).exp()
    }
}

/// `eˣ K₀(x)` and `eˣ K₁(x)`; never underflows.
pub fn bessel_k01_scaled(x: f64) -> Result<(f64, f64)> {
    check_domain("bessel_k01_scaled", x)?;
    if x <= SERIES_CUTOFF {
        let (a, b) = k01_series(x);
        let e = x.exp();
        Ok((a * e, b * e))
    } else {
        Ok(k01_scaled_cf(x))
    }
}

/// Ascending series, accurate to a few ulp on `(0, 2]`.
fn k01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;

    // K0 = -(ln(x/2)+γ) I0 + Σ_{k≥1} q^k/(k!)² H_k
    // K1 = 1/x + ln(x/2) I1 - (x/4) Σ_{k≥0} q^k/(k!(k+1)!) (ψ(k+1)+ψ(k+2))
    let mut term0 = 1.0; // q^k/(k!)²
    let mut term1 = 1.0; // q^k/(k!(k+1)!)
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut i1_over_half_x = 1.0;
    let mut s0 = 0.0;
    let mut s1 = 1.0 - 2.0 * EULER_GAMMA; // ψ(1)+ψ(2) = -2γ + 1
    for k in 1..60 {
        let kf = k as f64;
        term0 *= q / (kf * kf);
        term1 *= q / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        i0 += term0;
        i1_over_half_x += term1;
        s0 += term0 * harmonic;
        let psi_sum = -2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (kf + 1.0);
        s1 += term1 * psi_sum;
        if term0 < 1e-18 * i0 && term1 < 1e-18 * i1_over_half_x {
            break;
        }
    }
    let i1 = 0.5 * x * i1_over_half_x;
    let k0 = -log_term * i0 + s0;
    let k1 = 1.0 / x + (0.5 * x).ln() * i1 - 0.25 * x * s1;
    (k0, k1)
}

/// Steed's algorithm for `eˣK₀`, `eˣK₁`; converges quickly for `x > 1`.
fn k01_scaled_cf(x: f64) -> (f64, f64) {
    let mut a = -0.25;
    let mut b = 2.0 * (x + 1.0);
    let mut d = 1.0 / b;
    let mut delta = d;
    let mut f = d;
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut q = -a;
    let mut c = -a;
    let mut s = 1.0 + q * delta;
    for k in 2..MAX_ITER {
        let kf = k as f64;
        a -= 2.0 * (kf - 1.0);
        b += 2.0;
        d = 1.0 / (a * d + b);
        delta *= b * d - 1.0;
        f += delta;
        let t = (prev - (b - 2.0) * cur) / a;
        prev = cur;
        cur = t;
        c *= -a / kf;
        q += c * t;
        s += q * delta;
        if (q * delta).abs() < s.abs() * f64::EPSILON * 0.5 {
            break;
        }
    }
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (0.5 + x - 0.25 * f) / x;
    (k0, k1)
}

/// `K_{l+1}(x) / K_l(x)` by the stable upward recurrence on ratios.
fn k_ratio(l: u32, x: f64) -> f64 {
    let (k0, k1) = if x <= SERIES_CUTOFF { k01_series(x) } else { k01_scaled_cf(x) };
    let mut ratio = k1 / k0;
    for n in 1..=l {
        ratio = 1.0 / ratio + 2.0 * n as f64 / x;
    }
    ratio
}

/// `I_{l+1}(x) / I_l(x)` by the modified Lentz continued fraction.
fn i_ratio(l: u32, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut c = tiny;
    let mut f = tiny;
    let mut d = 0.0;
    let v = l as f64;
    for k in 1..MAX_ITER {
        let b = 2.0 * (v + k as f64) / x;
        c = b + 1.0 / c;
        d += b;
        if c == 0.0 {
            c = tiny;
        }
        if d == 0.0 {
            d = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    f
}

/// `P_l(x) = I_l(x) K_l(x)` without forming either factor.
///
/// Uses the Wronskian `I_l K_{l+1} + I_{l+1} K_l = 1/x`, which turns the
/// product into `1 / (x (K_{l+1}/K_l + I_{l+1}/I_l))`.
pub fn bessel_ik_product(l: u32, x: f64) -> Result<f64> {
    check_domain("bessel_ik_product", x)?;
    Ok(1.0 / (x * (k_ratio(l, x) + i_ratio(l, x))))
}

/// `∫₀^z K₀(u) du`, used for the self-cell of log-singular quadrature.
///
/// Term-wise integration of the ascending series; meant for `z ≲ 2`.
pub fn bessel_k0_integral(z: f64) -> Result<f64> {
    check_domain("bessel_k0_integral", z)?;
    if z > 4.0 {
        return Err(Error::Domain { function: "bessel_k0_integral", value: z });
    }
    let half = 0.5 * z;
    let log_half = half.ln();
    let mut sum = 0.0;
    let mut coeff = 1.0; // (z/2)^{2k}/(k!)²
    let mut harmonic = 0.0;
    for k in 0..80 {
        let kf = k as f64;
        if k > 0 {
            coeff *= half * half / (kf * kf);
            harmonic += 1.0 / kf;
        }
        let odd = 2.0 * kf + 1.0;
        let term = coeff / odd * (-log_half + 1.0 / odd - EULER_GAMMA + harmonic);
        sum += term;
        if coeff < 1e-18 && k > 2 {
            break;
        }
    }
    Ok(z * sum)
}
