// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Complex Schur decomposition (Householder reduction to Hessenberg form,
//! then shifted QR with Givens rotations and deflation) and eigenvectors by
//! back substitution on the triangular factor.

use super::matrix::{vec_norm, CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// One eigenvalue with a unit right eigenvector.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: C64,
    pub vector: Vec<C64>,
}

/// `M = Z T Z*` with `T` upper triangular and `Z` unitary.
#[derive(Debug, Clone)]
pub struct Schur {
    pub t: CMatrix,
    pub z: CMatrix,
}

pub fn schur(m: &CMatrix) -> Result<Schur> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigen decomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("eigen input"));
    }
    let n = m.rows();
    let (mut h, mut z) = hessenberg(m);
    if n > 1 {
        qr_iterate(&mut h, &mut z)?;
    }
    // clear the strictly lower part that deflation has declared negligible
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(Schur { t: h, z })
}

/// All `n` eigenvalues (with algebraic multiplicity) and unit eigenvectors.
pub fn eig(m: &CMatrix) -> Result<Vec<Eigenpair>> {
    let Schur { t, z } = schur(m)?;
    let n = t.rows();
    let tnorm = t.max_abs().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * tnorm;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = vec![ZERO; n];
        y[k] = ONE;
        for j in (0..k).rev() {
            let mut acc = ZERO;
            for l in j + 1..=k {
                acc += t[(j, l)] * y[l];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < small {
                d = C64::new(small, 0.0);
            }
            y[j] = -acc / d;
            // rescale to keep the recurrence in range
            let big = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                for v in y.iter_mut() {
                    *v /= big;
                }
            }
        }
        let mut v = z.mul_vec(&y);
        let norm = vec_norm(&v);
        for x in v.iter_mut() {
            *x /= norm;
        }
        out.push(Eigenpair { value: lambda, vector: v });
    }
    Ok(out)
}

pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    Ok(schur(m)?.t.diag_values())
}

impl CMatrix {
    pub fn diag_values(&self) -> Vec<C64> {
        (0..self.rows().min(self.cols())).map(|i| self[(i, i)]).collect()
    }
}

fn hessenberg(m: &CMatrix) -> (CMatrix, CMatrix) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = CMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vec_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- P H, P = I - 2 v v*, acting on rows k+1..n
        for j in 0..n {
            let mut dot = ZERO;
            for (idx, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + idx, j)];
            }
            for (idx, vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] -= 2.0 * vi * dot;
            }
        }
        // H <- H P and Q <- Q P, acting on columns k+1..n
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let mut dot = ZERO;
                for (idx, vi) in v.iter().enumerate() {
                    dot += mat[(i, k + 1 + idx)] * vi;
                }
                for (idx, vi) in v.iter().enumerate() {
                    mat[(i, k + 1 + idx)] -= 2.0 * dot * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Givens pair `(c, s)` with `[c s; -conj(s) c] [a; b] = [r; 0]`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, ONE);
    }
    let r = a.norm().hypot(b.norm());
    let c = a.norm() / r;
    let s = (a / a.norm()) * b.conj() / r;
    (c, s)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mu1 = (a + d) * 0.5 + disc;
    let mu2 = (a + d) * 0.5 - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

fn qr_iterate(h: &mut CMatrix, z: &mut CMatrix) -> Result<()> {
    let n = h.rows();
    let budget = 100 * n;
    let hnorm = h.max_abs();
    let mut total = 0usize;
    let mut iter = 0usize;
    let mut hi = n - 1;
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(n);

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let mut scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if scale == 0.0 {
                scale = hnorm;
            }
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }

        total += 1;
        iter += 1;
        if total > budget {
            let residual = (1..n).map(|i| h[(i, i - 1)].norm()).fold(0.0, f64::max);
            return Err(Error::Convergence {
                what: "Hessenberg QR eigensolver",
                residual,
            });
        }

        let shift = if iter % 10 == 0 {
            // exceptional shift to break cycles
            let extra = h[(hi, hi - 1)].re.abs()
                + if hi >= 2 { h[(hi - 1, hi - 2)].re.abs() } else { 0.0 };
            h[(hi, hi)] + C64::new(extra, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        rots.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rots.push((c, s));
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
        }
        for (off, &(c, s)) in rots.iter().enumerate() {
            let k = lo + off;
            let last = (k + 2).min(hi);
            for i in 0..=last {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
            for i in 0..n {
                let x = z[(i, k)];
                let y = z[(i, k + 1)];
                z[(i, k)] = x * c + y * s.conj();
                z[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(())
}
