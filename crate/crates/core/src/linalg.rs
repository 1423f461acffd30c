//! Dense symmetric helpers: Bunch–Kaufman inertia and faer eigensolves.

use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Sylvester inertia of a symmetric matrix plus the determinant's sign and
/// log-magnitude from the same factorisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
    /// `+1`, `-1`, or `0` when a pivot was classified as zero.
    pub det_sign: i8,
    pub log_abs_det: f64,
}

/// Default zero-pivot tolerance relative to `max |a_ij|`.
pub const PIVOT_TOL: f64 = 1e-12;

/// Inertia with the default pivot tolerance `1e-12 · max |a_ij|`.
pub fn inertia(m: MatRef<'_, f64>) -> Result<Inertia> {
    inertia_with_tol(m, PIVOT_TOL)
}

/// `LDLᵀ` with Bunch–Kaufman pivoting; only the lower triangle is read.
pub fn inertia_with_tol(m: MatRef<'_, f64>, rel_tol: f64) -> Result<Inertia> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::param("matrix", "must be square"));
    }
    let mut a = vec![0.0; n * n];
    let mut scale: f64 = 0.0;
    for i in 0..n {
        for j in 0..=i {
            let v = m[(i, j)];
            if !v.is_finite() {
                return Err(Error::NonFinite(i, j));
            }
            a[i * n + j] = v;
            scale = scale.max(v.abs());
        }
    }
    let tol = rel_tol * scale;
    let mut out = Inertia { negative: 0, zero: 0, positive: 0, det_sign: 1, log_abs_det: 0.0 };
    let classify = |d: f64, out: &mut Inertia| {
        if d.abs() <= tol {
            out.zero += 1;
            out.det_sign = 0;
        } else {
            if d < 0.0 {
                out.negative += 1;
                out.det_sign = -out.det_sign;
            } else {
                out.positive += 1;
            }
            out.log_abs_det += d.abs().ln();
        }
    };

    // lower-triangle accessor
    let at = |a: &[f64], i: usize, j: usize| if i >= j { a[i * n + j] } else { a[j * n + i] };
    let bk_alpha = (1.0 + 17f64.sqrt()) / 8.0;
    let mut col = vec![0.0; n];
    let mut col2 = vec![0.0; n];
    let mut k = 0;
    while k < n {
        let akk = a[k * n + k].abs();
        let (mut r, mut colmax) = (k, 0.0);
        for i in k + 1..n {
            let v = a[i * n + k].abs();
            if v > colmax {
                colmax = v;
                r = i;
            }
        }
        if akk.max(colmax) <= tol {
            // column is numerically zero
            classify(a[k * n + k], &mut out);
            k += 1;
            continue;
        }
        let mut two_by_two = false;
        if akk < bk_alpha * colmax {
            let mut rowmax: f64 = 0.0;
            for j in k..n {
                if j != r {
                    rowmax = rowmax.max(at(&a, r, j).abs());
                }
            }
            if akk * rowmax >= bk_alpha * colmax * colmax {
                // keep 1x1 at k
            } else if a[r * n + r].abs() >= bk_alpha * rowmax {
                sym_swap(&mut a, n, k, r);
            } else {
                sym_swap(&mut a, n, k + 1, r);
                two_by_two = true;
            }
        }

        if !two_by_two {
            let d = a[k * n + k];
            classify(d, &mut out);
            for i in k + 1..n {
                col[i] = a[i * n + k];
            }
            for i in k + 1..n {
                let l = col[i] / d;
                if l == 0.0 {
                    continue;
                }
                let row = &mut a[i * n..i * n + i + 1];
                for j in k + 1..=i {
                    row[j] -= l * col[j];
                }
            }
            k += 1;
        } else {
            let (d11, d21, d22) = (a[k * n + k], a[(k + 1) * n + k], a[(k + 1) * n + k + 1]);
            let det = d11 * d22 - d21 * d21;
            // eigenvalues of the 2x2 pivot block
            let mean = 0.5 * (d11 + d22);
            let rad = (0.25 * (d11 - d22) * (d11 - d22) + d21 * d21).sqrt();
            classify(mean - rad, &mut out);
            classify(mean + rad, &mut out);
            for i in k + 2..n {
                col[i] = a[i * n + k];
                col2[i] = a[i * n + k + 1];
            }
            for i in k + 2..n {
                // [l1 l2] = [c1 c2] D⁻¹
                let l1 = (col[i] * d22 - col2[i] * d21) / det;
                let l2 = (col2[i] * d11 - col[i] * d21) / det;
                let row = &mut a[i * n..i * n + i + 1];
                for j in k + 2..=i {
                    row[j] -= l1 * col[j] + l2 * col2[j];
                }
            }
            k += 2;
        }
    }
    Ok(out)
}

/// Symmetric row/column interchange `p ↔ q` (`p < q`) on lower storage,
/// restricted to the active block `p..n`.
fn sym_swap(a: &mut [f64], n: usize, p: usize, q: usize) {
    if p == q {
        return;
    }
    let (p, q) = (p.min(q), p.max(q));
    a.swap(p * n + p, q * n + q);
    for j in 0..p {
        a.swap(p * n + j, q * n + j);
    }
    for i in p + 1..q {
        a.swap(i * n + p, q * n + i);
    }
    for i in q + 1..n {
        a.swap(i * n + p, i * n + q);
    }
}

/// Ascending eigenvalues of a symmetric matrix (lower triangle read).
pub fn eigenvalues(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let mut ev = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Ascending eigenvalues and the matching orthonormal eigenvectors (columns).
pub fn eigenpairs(m: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Solver(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let n = s.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].total_cmp(&s[j]));
    let u = evd.U();
    let values = order.iter().map(|&i| s[i]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok((values, vectors))
}
