// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive composite Simpson quadrature for scalar and matrix integrands.
//!
//! Each panel is compared against its two halves; a panel is accepted when
//! the largest entrywise change is within `15 * tol` (the Richardson factor
//! for Simpson's rule) or has reached the floating-point noise floor of the
//! integrand. The tolerance halves with every split.

use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

pub const MAX_DEPTH: u32 = 24;
const INITIAL_PANELS: usize = 4;
const NOISE_FACTOR: f64 = 64.0 * f64::EPSILON;

/// Values that can be integrated: closed under linear combination with an
/// entrywise sup-norm for error estimates.
pub trait QuadValue: Clone {
    fn combine(parts: &[(f64, &Self)]) -> Self;
    fn sup_diff(&self, other: &Self) -> f64;
    fn sup(&self) -> f64;
    fn zero_like(&self) -> Self;
}

impl QuadValue for f64 {
    fn combine(parts: &[(f64, &Self)]) -> Self {
        parts.iter().map(|(c, v)| c * **v).sum()
    }
    fn sup_diff(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn sup(&self) -> f64 {
        self.abs()
    }
    fn zero_like(&self) -> Self {
        0.0
    }
}

impl QuadValue for CMatrix {
    fn combine(parts: &[(f64, &Self)]) -> Self {
        let (r, c) = parts[0].1.shape();
        let mut out = CMatrix::zeros(r, c);
        for (coef, m) in parts {
            out.axpy(C64::new(*coef, 0.0), m);
        }
        out
    }
    fn sup_diff(&self, other: &Self) -> f64 {
        self.max_abs_diff(other)
    }
    fn sup(&self) -> f64 {
        self.max_abs()
    }
    fn zero_like(&self) -> Self {
        CMatrix::zeros(self.rows(), self.cols())
    }
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol` per entry.
pub fn integrate<V, F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V>,
{
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::Domain(format!("integration bounds must satisfy lo <= hi, got [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("quadrature tolerance must be positive, got {tol}")));
    }
    if lo == hi {
        return Ok(f(lo)?.zero_like());
    }
    let width = (hi - lo) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    let mut parts = Vec::with_capacity(INITIAL_PANELS);
    let mut fa = f(lo)?;
    for p in 0..INITIAL_PANELS {
        let a = lo + width * p as f64;
        let b = if p + 1 == INITIAL_PANELS { hi } else { a + width };
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        let fb = f(b)?;
        let whole = simpson(a, b, &fa, &fm, &fb);
        parts.push(refine(&f, a, b, &fa, &fm, &fb, whole, panel_tol, MAX_DEPTH)?);
        fa = fb;
    }
    let refs: Vec<(f64, &V)> = parts.iter().map(|p| (1.0, p)).collect();
    Ok(V::combine(&refs))
}

fn simpson<V: QuadValue>(a: f64, b: f64, fa: &V, fm: &V, fb: &V) -> V {
    let h = (b - a) / 6.0;
    V::combine(&[(h, fa), (4.0 * h, fm), (h, fb)])
}

#[allow(clippy::too_many_arguments)]
fn refine<V, F>(f: &F, a: f64, b: f64, fa: &V, fm: &V, fb: &V, whole: V, tol: f64, depth: u32) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> Result<V>,
{
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m))?;
    let frm = f(0.5 * (m + b))?;
    let left = simpson(a, m, fa, &flm, fm);
    let right = simpson(m, b, fm, &frm, fb);
    let both = V::combine(&[(1.0, &left), (1.0, &right)]);
    let err = both.sup_diff(&whole);
    let noise = NOISE_FACTOR * (left.sup() + right.sup());
    if err <= 15.0 * tol || err <= noise {
        // Richardson correction
        return Ok(V::combine(&[(16.0 / 15.0, &both), (-1.0 / 15.0, &whole)]));
    }
    if depth == 0 {
        return Err(Error::Quadrature {
            lo: a,
            hi: b,
            estimate: err / 15.0,
            tol,
        });
    }
    let l = refine(f, a, m, fa, &flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = refine(f, m, b, fm, &frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(V::combine(&[(1.0, &l), (1.0, &r)]))
}

/// Entrywise integral of an operator-valued map.
pub fn quad_operator<F>(f: F, a: f64, b: f64, tol: f64) -> Result<CMatrix>
where
    F: Fn(f64) -> Result<CMatrix>,
{
    integrate(f, a, b, tol)
}

/// Integral of a real scalar function.
pub fn quad_scalar<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate(|x| Ok(f(x)), lo, hi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    /// Composite Simpson with a fixed panel count, used as a reference.
    fn composite_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let x0 = a + h * k as f64;
                h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h))
            })
            .sum()
    }

    #[test]
    fn constant_operator() {
        let got = quad_operator(|_| Ok(CMatrix::identity(2)), 0.0, 1.0, 1e-10).unwrap();
        assert!(got.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn scalar_exponential_operator() {
        let got = quad_operator(|h| Ok(CMatrix::identity(2).scale_real(h.exp())), 0.0, 1.0, 1e-10).unwrap();
        assert!(got.max_abs_diff(&CMatrix::identity(2).scale_real(E - 1.0)) < 1e-10);
    }

    #[test]
    fn gaussian_like_against_refined_composite() {
        let f = |h: f64| (h + 0.5 * h * h).exp();
        // successive refinement of the fixed-panel reference until it settles
        let mut panels = 8;
        let mut prev = composite_simpson(f, 0.0, 1.0, panels);
        loop {
            panels *= 2;
            let next = composite_simpson(f, 0.0, 1.0, panels);
            if (next - prev).abs() < 1e-13 {
                prev = next;
                break;
            }
            prev = next;
        }
        assert!((prev - 2.1435).abs() < 1e-4);
        let got = quad_scalar(f, 0.0, 1.0, 1e-10).unwrap();
        assert!((got - prev).abs() < 1e-10, "{got} vs {prev}");
    }

    #[test]
    fn antiderivatives() {
        assert!((quad_scalar(|_| 1.0, 0.0, 1.0, 1e-10).unwrap() - 1.0).abs() < 1e-14);
        assert!((quad_scalar(|u| 1.0 + u, 0.0, 1.0, 1e-10).unwrap() - 1.5).abs() < 1e-14);
        assert!((quad_scalar(f64::exp, 0.0, 1.0, 1e-10).unwrap() - (E - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn cubic_is_exact() {
        let got = quad_scalar(|x| 2.0 * x * x * x - x * x + 3.0, -1.0, 2.0, 1e-10).unwrap();
        // antiderivative x^4/2 - x^3/3 + 3x
        let exact = (8.0 - 8.0 / 3.0 + 6.0) - (0.5 + 1.0 / 3.0 - 3.0);
        assert!((got - exact).abs() < 1e-12);
    }

    #[test]
    fn zero_length_interval_is_exact_zero() {
        let got = quad_operator(|_| Ok(CMatrix::identity(3)), 0.7, 0.7, 1e-10).unwrap();
        assert_eq!(got, CMatrix::zeros(3, 3));
    }

    #[test]
    fn reversed_bounds_rejected() {
        assert!(matches!(quad_scalar(|x| x, 1.0, 0.0, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn depth_exhaustion_reports_estimate() {
        // discontinuous integrand defeats the tolerance
        let res = quad_scalar(|x| if x < 0.3 { 0.0 } else { 1.0 }, 0.0, 1.0, 1e-300);
        match res {
            Err(Error::Quadrature { estimate, .. }) => assert!(estimate > 0.0),
            other => panic!("expected quadrature error, got {other:?}"),
        }
    }
}
