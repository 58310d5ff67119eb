// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

use super::matrix::{inner, vec_norm, CMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// `M = U diag(sigma) V*` with `sigma` sorted descending.
///
/// For an `m x n` input `U` is `m x k` and `V` is `n x k` with `k = min(m, n)`;
/// both have orthonormal columns, including those paired with zero singular
/// values.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let k = self.sigma.len();
        let us = CMatrix::from_fn(self.u.rows(), k, |i, j| self.u[(i, j)] * self.sigma[j]);
        &us * &self.v.adjoint()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma.last().copied().unwrap_or(0.0)
    }
}

pub fn svd(m: &CMatrix) -> Result<Svd> {
    let (out, converged, off) = svd_inner(m);
    if converged {
        Ok(out)
    } else {
        Err(Error::Convergence {
            what: "Jacobi SVD",
            residual: off,
        })
    }
}

/// Factorization after the sweep budget whether or not every pair reached
/// orthogonality; the result is still a valid unitary split of `M`.
pub fn svd_best_effort(m: &CMatrix) -> Svd {
    svd_inner(m).0
}

/// Singular values only, descending. Never fails: an unconverged sweep
/// budget still yields values accurate to the achieved orthogonality.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    svd_inner(m).0.sigma
}

fn svd_inner(m: &CMatrix) -> (Svd, bool, f64) {
    if m.rows() < m.cols() {
        let (t, ok, off) = svd_inner(&m.adjoint());
        return (
            Svd {
                u: t.v,
                sigma: t.sigma,
                v: t.u,
            },
            ok,
            off,
        );
    }
    let rows = m.rows();
    let n = m.cols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();

    let tol = f64::EPSILON * rows.max(1) as f64;
    let mut converged = n < 2;
    let mut worst = 0.0;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        worst = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = vec_norm(&cols[p]).powi(2);
                let beta = vec_norm(&cols[q]).powi(2);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = inner(&cols[p], &cols[q]);
                let g = gamma.norm();
                let rel = g / (alpha * beta).sqrt();
                worst = worst.max(rel);
                if rel <= tol {
                    continue;
                }
                rotated = true;
                // Rotate column q by the phase of gamma so the pair is real.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut vcols, p, q, phase, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }

    let mut sigma: Vec<(f64, usize)> = cols.iter().enumerate().map(|(j, c)| (vec_norm(c), j)).collect();
    sigma.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let scale = sigma.first().map_or(0.0, |s| s.0);
    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut zero_slots = Vec::new();
    for (idx, &(s, j)) in sigma.iter().enumerate() {
        if s > f64::MIN_POSITIVE && s > scale * 1e-300 {
            let inv = 1.0 / s;
            ucols.push(cols[j].iter().map(|z| z * inv).collect());
        } else {
            ucols.push(vec![ZERO; rows]);
            zero_slots.push(idx);
        }
    }
    complete_orthonormal(&mut ucols, &zero_slots, rows);

    let v = CMatrix::from_fn(n, n, |i, k| vcols[sigma[k].1][i]);
    let u = CMatrix::from_columns(rows, &ucols);
    (
        Svd {
            u,
            sigma: sigma.iter().map(|s| s.0).collect(),
            v,
        },
        converged,
        worst,
    )
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let pc = phase.conj();
    for i in 0..cols[p].len() {
        let x = cols[p][i];
        let y = cols[q][i] * pc;
        cols[p][i] = x * c - y * s;
        cols[q][i] = x * s + y * c;
    }
}

/// Fills the listed slots with unit vectors orthogonal to every other column.
fn complete_orthonormal(cols: &mut [Vec<C64>], slots: &[usize], dim: usize) {
    let mut candidate = 0;
    for &slot in slots {
        while candidate < dim {
            let mut v = vec![ZERO; dim];
            v[candidate] = ONE;
            candidate += 1;
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for (j, col) in cols.iter().enumerate() {
                    if j == slot || (slots.contains(&j) && vec_norm(col) == 0.0) {
                        continue;
                    }
                    let proj = inner(col, &v);
                    for (vi, ci) in v.iter_mut().zip(col) {
                        *vi -= proj * ci;
                    }
                }
            }
            let norm = vec_norm(&v);
            if norm > 1e-6 {
                cols[slot] = v.iter().map(|z| z / norm).collect();
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &CMatrix, want: &[f64]) {
        let d = svd(m).unwrap();
        for (a, b) in d.sigma.iter().zip(want) {
            assert!((a - b).abs() < 1e-14, "{:?} vs {:?}", d.sigma, want);
        }
        let k = d.sigma.len();
        let uu = &d.u.adjoint() * &d.u;
        let vv = &d.v.adjoint() * &d.v;
        assert!(uu.max_abs_diff(&CMatrix::identity(k)) < 1e-13);
        assert!(vv.max_abs_diff(&CMatrix::identity(k)) < 1e-13);
        assert!(d.reconstruct().max_abs_diff(m) < 1e-13);
    }

    #[test]
    fn identity() {
        check(&CMatrix::identity(2), &[1.0, 1.0]);
    }

    #[test]
    fn rank_deficient_diagonal() {
        check(&CMatrix::real_diag(&[3.0, 0.0]), &[3.0, 0.0]);
    }

    #[test]
    fn rank_one_nilpotent() {
        let m = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        check(&m, &[2.0, 0.0]);
    }

    #[test]
    fn zero_and_wide_shapes() {
        check(&CMatrix::zeros(3, 3), &[0.0, 0.0, 0.0]);
        let wide = CMatrix::from_real_rows(&[&[3.0, 0.0, 4.0]]).unwrap();
        check(&wide, &[5.0]);
    }

    #[test]
    fn complex_entries() {
        let i = C64::new(0.0, 1.0);
        let m = CMatrix::from_rows(&[vec![ONE, i], vec![-i, ONE]]).unwrap();
        // Hermitian with eigenvalues 0 and 2
        check(&m, &[2.0, 0.0]);
    }
}
