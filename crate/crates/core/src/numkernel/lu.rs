// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Solves `A X = B` by LU factorization with partial pivoting.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(Error::Dimension(format!(
            "solve needs square A matching B rows, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let m = b.cols();
    let scale = a.max_abs();

    for k in 0..n {
        let (piv, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if pmax <= f64::EPSILON * scale * n as f64 || pmax == 0.0 {
            return Err(Error::Convergence {
                what: "LU solve (singular matrix)",
                residual: pmax,
            });
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
            }
            for j in 0..m {
                let tmp = x[(k, j)];
                x[(k, j)] = x[(piv, j)];
                x[(piv, j)] = tmp;
            }
        }
        let d = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            if f == ZERO {
                continue;
            }
            lu[(i, k)] = f;
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= f * v;
            }
            for j in 0..m {
                let v = x[(k, j)];
                x[(i, j)] -= f * v;
            }
        }
    }
    for j in 0..m {
        for i in (0..n).rev() {
            let mut acc: C64 = x[(i, j)];
            for l in i + 1..n {
                acc -= lu[(i, l)] * x[(l, j)];
            }
            x[(i, j)] = acc / lu[(i, i)];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = CMatrix::from_real_rows(&[&[0.0, 2.0], &[1.0, 1.0]]).unwrap();
        let b = CMatrix::from_real_rows(&[&[2.0], &[3.0]]).unwrap();
        let x = solve(&a, &b).unwrap();
        assert!((x[(0, 0)].re - 2.0).abs() < 1e-14);
        assert!((x[(1, 0)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn singular_is_error() {
        let a = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(solve(&a, &CMatrix::identity(2)).is_err());
    }
}
