// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use std::cell::RefCell;
use std::collections::HashMap;

use super::record::{Power, RecordParams, VerificationRecord};
use crate::error::Result;
use crate::numkernel::{quad_operator, CMatrix, C64};
use crate::qsg::{Backend, QuasiSemigroup};

/// Memoized orbit `h -> R(t, h)` for one fixed `t`.
///
/// Adaptive quadratures for different `lambda` share most of their nodes,
/// so one orbit serves every `D_lambda(t, s)` at the same `t`.
pub struct Orbit<'a> {
    q: &'a QuasiSemigroup,
    t: f64,
    memo: RefCell<HashMap<u64, CMatrix>>,
}

impl<'a> Orbit<'a> {
    pub fn new(q: &'a QuasiSemigroup, t: f64) -> Self {
        Self {
            q,
            t,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn q(&self) -> &QuasiSemigroup {
        self.q
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn at(&self, h: f64) -> Result<CMatrix> {
        if let Some(m) = self.memo.borrow().get(&h.to_bits()) {
            return Ok(m.clone());
        }
        let m = self.q.propagator(self.t, h)?;
        self.memo.borrow_mut().insert(h.to_bits(), m.clone());
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DLambda {
    pub lambda: C64,
    pub t: f64,
    pub s: f64,
    pub matrix: CMatrix,
}

/// `D_lambda(t, s) = int_0^s e^{lambda (s - h)} R(t, h) dh`.
pub fn d_lambda(q: &QuasiSemigroup, lambda: C64, t: f64, s: f64) -> Result<DLambda> {
    d_lambda_on(&Orbit::new(q, t), lambda, s)
}

pub fn d_lambda_on(orbit: &Orbit<'_>, lambda: C64, s: f64) -> Result<DLambda> {
    let q = orbit.q();
    crate::qsg::check_time("s", s)?;
    let matrix = if s == 0.0 {
        CMatrix::zeros(q.dim(), q.dim())
    } else {
        quad_operator(
            |h| Ok(orbit.at(h)?.scale((lambda * (s - h)).exp())),
            0.0,
            s,
            q.integrand_tol(),
        )?
    };
    Ok(DLambda {
        lambda,
        t: orbit.t(),
        s,
        matrix,
    })
}

/// Everything the identity checks at one `(lambda, t, s)` need.
pub struct IdentityContext {
    pub params: RecordParams,
    pub asserted: bool,
    /// `lambda I - A(t)`
    pub shift_a: CMatrix,
    /// `e^{lambda s} I - R(t, s)`
    pub shift_r: CMatrix,
    pub d: DLambda,
    pub base_bound: f64,
}

const TIME_VARYING_NOTE: &str = "generator depends on t; measured only";

impl IdentityContext {
    pub fn new(orbit: &Orbit<'_>, lambda: C64, s: f64) -> Result<Self> {
        let q = orbit.q();
        let t = orbit.t();
        let d = d_lambda_on(orbit, lambda, s)?;
        let shift_a = q.generator_matrix(t).shifted_neg(lambda);
        let shift_r = orbit.at(s)?.shifted_neg((lambda * s).exp());
        let base_bound = 10.0 * q.integrand_tol() * s * (lambda.re.abs() * s).exp() * q.bound(t + s)? * q.dim() as f64;
        Ok(Self {
            params: RecordParams::new(q.descriptor(), t, s).with_lambda(lambda),
            asserted: q.has_constant_generator(),
            shift_a,
            shift_r,
            d,
            base_bound,
        })
    }

    fn note(&self) -> &'static str {
        if self.asserted {
            ""
        } else {
            TIME_VARYING_NOTE
        }
    }

    /// `(lambda - A) D = e^{lambda s} - R`
    pub fn right(&self) -> VerificationRecord {
        let residual = (&(&self.shift_a * &self.d.matrix) - &self.shift_r).op_norm();
        VerificationRecord::policy(
            self.asserted,
            "thm2.1.1",
            self.params.clone(),
            residual,
            self.base_bound,
            self.note(),
        )
    }

    /// `D (lambda - A) = e^{lambda s} - R`
    pub fn left(&self) -> VerificationRecord {
        let residual = (&(&self.d.matrix * &self.shift_a) - &self.shift_r).op_norm();
        VerificationRecord::policy(
            self.asserted,
            "thm2.1.2",
            self.params.clone(),
            residual,
            self.base_bound,
            self.note(),
        )
    }

    fn power_bound(&self, n: u32) -> f64 {
        let grow = self.shift_a.op_norm() + self.d.matrix.op_norm();
        self.base_bound * n as f64 * grow.max(1.0).powi(n as i32 - 1)
    }

    /// n-th power identity; `left` puts `D^n` first.
    pub fn power(&self, n: u32, left: bool) -> VerificationRecord {
        let an = self.shift_a.powi(n);
        let dn = self.d.matrix.powi(n);
        let lhs = if left { &dn * &an } else { &an * &dn };
        let residual = (&lhs - &self.shift_r.powi(n)).op_norm();
        VerificationRecord::policy(
            self.asserted,
            if left { "cor2.3.2" } else { "cor2.3.1" },
            self.params.clone().with_power(Power::Finite(n)),
            residual,
            self.power_bound(n),
            self.note(),
        )
    }
}

pub fn check_identity_right(q: &QuasiSemigroup, lambda: C64, t: f64, s: f64) -> Result<VerificationRecord> {
    Ok(IdentityContext::new(&Orbit::new(q, t), lambda, s)?.right())
}

pub fn check_identity_left(q: &QuasiSemigroup, lambda: C64, t: f64, s: f64) -> Result<VerificationRecord> {
    Ok(IdentityContext::new(&Orbit::new(q, t), lambda, s)?.left())
}

/// Right-hand power identity, `(lambda - A)^n D^n = (e^{lambda s} - R)^n`.
pub fn check_power_identity(q: &QuasiSemigroup, lambda: C64, t: f64, s: f64, n: u32) -> Result<VerificationRecord> {
    check_n(n)?;
    Ok(IdentityContext::new(&Orbit::new(q, t), lambda, s)?.power(n, false))
}

/// Left-hand power identity, `D^n (lambda - A)^n = (e^{lambda s} - R)^n`.
pub fn check_power_identity_left(
    q: &QuasiSemigroup,
    lambda: C64,
    t: f64,
    s: f64,
    n: u32,
) -> Result<VerificationRecord> {
    check_n(n)?;
    Ok(IdentityContext::new(&Orbit::new(q, t), lambda, s)?.power(n, true))
}

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(crate::Error::Domain("power n must be at least 1".into()));
    }
    Ok(())
}

/// Semigroup case: `T(h) = expm(hA)` without reference to `t`.
///
/// Only defined for the constant backend; `None` otherwise.
pub fn check_semigroup_identity(q: &QuasiSemigroup, lambda: C64, s: f64) -> Result<Option<VerificationRecord>> {
    let Backend::Constant { a } = q.backend() else {
        return Ok(None);
    };
    let ctx = IdentityContext::new(&Orbit::new(q, 0.0), lambda, s)?;
    let semigroup_at = |h: f64| crate::numkernel::expm(&a.scale_real(h));
    let d = if s == 0.0 {
        CMatrix::zeros(q.dim(), q.dim())
    } else {
        quad_operator(|h| Ok(semigroup_at(h)?.scale((lambda * (s - h)).exp())), 0.0, s, q.integrand_tol())?
    };
    let rhs = semigroup_at(s)?.shifted_neg((lambda * s).exp());
    let residual = (&(&ctx.shift_a * &d) - &rhs).op_norm();
    let mut params = ctx.params.clone();
    params.t = 0.0;
    Ok(Some(VerificationRecord::checked("cor2.2", params, residual, ctx.base_bound, "")))
}
