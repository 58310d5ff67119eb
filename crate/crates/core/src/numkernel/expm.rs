// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential by scaling and squaring around diagonal Pade
//! approximants of degree 3, 5, 7, 9 or 13, selected by the 1-norm.

use super::lu::solve;
use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_230e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Computes `e^M` for a square matrix.
pub fn expm(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "expm needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("expm input"));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    if n == 1 {
        return Ok(CMatrix::scalar(m[(0, 0)].exp()));
    }
    let norm = m.norm_1();
    if norm == 0.0 {
        return Ok(CMatrix::identity(n));
    }

    for &(deg, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match deg {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            return pade_low(m, coeffs);
        }
    }

    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = m.scale_real(2f64.powi(-squarings));
    let mut result = pade13(&scaled)?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    if !result.is_finite() {
        return Err(Error::NonFinite("expm result (overflow)"));
    }
    Ok(result)
}

fn combine(terms: &[(&CMatrix, f64)], n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    for (mat, c) in terms {
        out.axpy(C64::new(*c, 0.0), mat);
    }
    out
}

fn finish(u: CMatrix, v: CMatrix) -> Result<CMatrix> {
    let p = &v + &u;
    let q = &v - &u;
    solve(&q, &p)
}

fn pade_low(a: &CMatrix, b: &[f64]) -> Result<CMatrix> {
    let n = a.rows();
    let ident = CMatrix::identity(n);
    let a2 = a * a;
    // even powers I, A^2, A^4, ...
    let mut powers = vec![ident, a2.clone()];
    while 2 * (powers.len() - 1) < b.len() - 1 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u_inner = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for (k, &coef) in b.iter().enumerate() {
        let p = &powers[k / 2];
        if k % 2 == 1 {
            u_inner.axpy(C64::new(coef, 0.0), p);
        } else {
            v.axpy(C64::new(coef, 0.0), p);
        }
    }
    let u = a * &u_inner;
    finish(u, v)
}

fn pade13(a: &CMatrix) -> Result<CMatrix> {
    let n = a.rows();
    let b = &B13;
    let ident = CMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_high = combine(&[(&a6, b[13]), (&a4, b[11]), (&a2, b[9])], n);
    let mut u_inner = &a6 * &u_high;
    u_inner = &u_inner + &combine(&[(&a6, b[7]), (&a4, b[5]), (&a2, b[3]), (&ident, b[1])], n);
    let u = a * &u_inner;

    let v_high = combine(&[(&a6, b[12]), (&a4, b[10]), (&a2, b[8])], n);
    let mut v = &a6 * &v_high;
    v = &v + &combine(&[(&a6, b[6]), (&a4, b[4]), (&a2, b[2]), (&ident, b[0])], n);
    finish(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(expm(&CMatrix::zeros(2, 2)).unwrap(), CMatrix::identity(2));
    }

    #[test]
    fn diagonal() {
        let e = expm(&CMatrix::real_diag(&[1.0, 2.0])).unwrap();
        assert!((e[(0, 0)].re - E).abs() < 1e-14 * E);
        assert!((e[(1, 1)].re - E * E).abs() < 1e-14 * E * E);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn nilpotent_truncates() {
        let n = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let e = expm(&n).unwrap();
        let want = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(e.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn rotation_large_norm_uses_squaring() {
        // exp(t [[0,1],[-1,0]]) = [[cos t, sin t], [-sin t, cos t]]
        let t = 20.0;
        let a = CMatrix::from_real_rows(&[&[0.0, t], &[-t, 0.0]]).unwrap();
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-12);
        assert!((e[(0, 1)].re - t.sin()).abs() < 1e-12);
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(expm(&CMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }
}
