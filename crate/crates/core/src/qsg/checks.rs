// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Numerical checks of the defining axioms of a quasi-semigroup and of the
//! basic relations between `R(t, s)` and its generator `A(t)`.

use serde::Serialize;

use super::family::{check_time, QuasiSemigroup};
use crate::error::{Error, Result};
use crate::numkernel::{quad_operator, CMatrix};

/// Step used for the strong-continuity residual `||R(t, eps) - I||`.
pub const CONTINUITY_EPS: f64 = 1e-6;
/// Default difference step for generator estimates.
pub const DEFAULT_GENERATOR_STEP: f64 = 1e-5;

#[derive(Debug, Clone)]
pub struct GeneratorEstimate {
    pub t: f64,
    pub h: f64,
    /// `(R(t, h) - I) / h`
    pub forward: CMatrix,
    /// `(R(t - h, h) - I) / h`, defined only for `t > 0` with `t >= h`.
    pub shifted: Option<CMatrix>,
    /// `||forward - shifted||`, zero when `shifted` is absent.
    pub discrepancy: f64,
}

pub fn estimate_generator(q: &QuasiSemigroup, t: f64, h: f64) -> Result<GeneratorEstimate> {
    check_time("t", t)?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("difference step must be positive, got {h}")));
    }
    let ident = CMatrix::identity(q.dim());
    let quotient = |m: CMatrix| (&m - &ident).scale_real(1.0 / h);
    let forward = quotient(q.propagator(t, h)?);
    let shifted = if t > 0.0 && t - h >= 0.0 {
        Some(quotient(q.propagator(t - h, h)?))
    } else {
        None
    };
    let discrepancy = shifted.as_ref().map_or(0.0, |s| (&forward - s).op_norm());
    Ok(GeneratorEstimate {
        t,
        h,
        forward,
        shifted,
        discrepancy,
    })
}

/// Error of the forward quotient at `h` and `h/2` against the analytic
/// generator, with the observed order `log2(err_h / err_half)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeneratorConvergence {
    pub h: f64,
    pub err: f64,
    pub err_half: f64,
    /// Absent when both errors are at rounding level (exact quotient).
    pub order: Option<f64>,
}

pub fn generator_convergence(q: &QuasiSemigroup, t: f64, h: f64) -> Result<GeneratorConvergence> {
    let exact = q.generator_matrix(t);
    let err = (&estimate_generator(q, t, h)?.forward - &exact).op_norm();
    let err_half = (&estimate_generator(q, t, h / 2.0)?.forward - &exact).op_norm();
    let floor = 1e3 * f64::EPSILON * (1.0 + exact.op_norm()) / h;
    let order = if err <= floor && err_half <= floor {
        None
    } else {
        Some((err / err_half).log2())
    };
    Ok(GeneratorConvergence {
        h,
        err,
        err_half,
        order,
    })
}

/// Residuals of the four defining properties at one `(t, s, r)` point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AxiomResidual {
    pub t: f64,
    pub s: f64,
    pub r: f64,
    /// `||R(t, 0) - I||`
    pub identity: f64,
    /// `||R(t, s + r) - R(t + r, s) R(t, r)||`
    pub cocycle: f64,
    /// `||R(t, eps) - I||` at `eps = 1e-6`
    pub continuity: f64,
    /// `M(t + s) - ||R(t, s)||`; negative means the bound is violated.
    pub bound_slack: f64,
    pub bound: f64,
}

pub fn check_axioms(q: &QuasiSemigroup, grid: &[(f64, f64, f64)]) -> Result<Vec<AxiomResidual>> {
    let ident = CMatrix::identity(q.dim());
    grid.iter()
        .map(|&(t, s, r)| {
            check_time("t", t)?;
            check_time("s", s)?;
            check_time("r", r)?;
            let identity = (&q.propagator(t, 0.0)? - &ident).op_norm();
            let lhs = q.propagator(t, s + r)?;
            let rhs = &q.propagator(t + r, s)? * &q.propagator(t, r)?;
            let cocycle = (&lhs - &rhs).op_norm();
            let continuity = (&q.propagator(t, CONTINUITY_EPS)? - &ident).op_norm();
            let bound = q.bound(t + s)?;
            let bound_slack = bound - q.propagator(t, s)?.op_norm();
            Ok(AxiomResidual {
                t,
                s,
                r,
                identity,
                cocycle,
                continuity,
                bound_slack,
                bound,
            })
        })
        .collect()
}

/// `||R(t0, s0) A(t) - A(t) R(t0, s0)||`.
pub fn check_commutation(q: &QuasiSemigroup, t: f64, t0: f64, s0: f64) -> Result<f64> {
    check_time("t", t)?;
    let r = q.propagator(t0, s0)?;
    let a = q.generator_matrix(t);
    Ok((&(&r * &a) - &(&a * &r)).op_norm())
}

/// `||R(t, s) - I - int_0^s A(t + h) R(t, h) dh||`.
pub fn check_integral_equation(q: &QuasiSemigroup, t: f64, s: f64) -> Result<f64> {
    let r = q.propagator(t, s)?;
    let integral = quad_operator(
        |h| Ok(&q.generator_matrix(t + h) * &q.propagator(t, h)?),
        0.0,
        s,
        q.integrand_tol(),
    )?;
    let residual = &(&r - &CMatrix::identity(q.dim())) - &integral;
    Ok(residual.op_norm())
}

/// Residuals `||(1/s) int_0^s R(t, h) dh - I||` along a decreasing list of `s`.
#[derive(Debug, Clone, Serialize)]
pub struct AveragingCheck {
    pub s_values: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Every step shrinks the residual at least in proportion to `s`, up to
    /// a factor of two.
    pub first_order: bool,
}

pub fn check_averaging(q: &QuasiSemigroup, t: f64, s_values: &[f64]) -> Result<AveragingCheck> {
    check_time("t", t)?;
    if s_values.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::Domain("averaging windows must be positive".into()));
    }
    if s_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("averaging windows must be strictly decreasing".into()));
    }
    let ident = CMatrix::identity(q.dim());
    let mut residuals = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let integral = quad_operator(|h| q.propagator(t, h), 0.0, s, q.integrand_tol())?;
        residuals.push((&integral.scale_real(1.0 / s) - &ident).op_norm());
    }
    let first_order = s_values
        .windows(2)
        .zip(residuals.windows(2))
        .all(|(s, r)| r[1] <= 2.0 * r[0] * (s[1] / s[0]) + 1e-12);
    Ok(AveragingCheck {
        s_values: s_values.to_vec(),
        residuals,
        first_order,
    })
}

/// Central-difference derivative of `s -> R(t, s)` against both
/// `A(t + s) R(t, s)` and `R(t, s) A(t + s)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DerivativeCheck {
    pub left: f64,
    pub right: f64,
    pub step: f64,
}

pub fn check_derivative(q: &QuasiSemigroup, t: f64, s: f64) -> Result<DerivativeCheck> {
    check_time("t", t)?;
    if !(s > 0.0) {
        return Err(Error::Domain("derivative check needs s > 0".into()));
    }
    let step = (1e-4f64).min(s / 2.0);
    let ahead = q.propagator(t, s + step)?;
    let behind = q.propagator(t, s - step)?;
    let deriv = (&ahead - &behind).scale_real(0.5 / step);
    let r = q.propagator(t, s)?;
    let a = q.generator_matrix(t + s);
    Ok(DerivativeCheck {
        left: (&deriv - &(&a * &r)).op_norm(),
        right: (&deriv - &(&r * &a)).op_norm(),
        step,
    })
}

/// `||R(t, s + delta) - R(t, s)||` for each `delta`.
pub fn continuity_profile(q: &QuasiSemigroup, t: f64, s: f64, deltas: &[f64]) -> Result<Vec<f64>> {
    let base = q.propagator(t, s)?;
    deltas
        .iter()
        .map(|&d| Ok((&q.propagator(t, s + d)? - &base).op_norm()))
        .collect()
}
