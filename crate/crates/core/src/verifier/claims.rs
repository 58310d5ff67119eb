// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Claim catalogue and per-grid-point evaluation.

use std::collections::BTreeSet;

use super::identities::{check_semigroup_identity, IdentityContext, Orbit};
use super::inclusions::{check_approx_propagation, check_spectral_inclusion, kernel_record, range_record};
use super::lambdas::default_lambdas;
use super::record::{Power, RecordParams, VerificationRecord};
use super::regular::check_regular_inclusion;
use crate::error::Result;
use crate::numkernel::{CMatrix, C64};
use crate::qsg::{
    check_averaging, check_axioms, check_commutation, check_derivative, check_integral_equation, continuity_profile,
    estimate_generator, generator_convergence, Backend, QuasiSemigroup, CONTINUITY_EPS, DEFAULT_GENERATOR_STEP,
};
use crate::spectra::{approx_eigenpair, SpectrumKind};

/// Every claim id, with a one-line statement.
pub const CLAIMS: &[(&str, &str)] = [
    ("cor2.2", "semigroup case: (lambda - A) D_lambda(s) = e^{lambda s} - T(s)"),
    ("cor2.3.1", "(lambda - A(t))^n D^n = (e^{lambda s} - R(t,s))^n"),
    ("cor2.3.2", "D^n (lambda - A(t))^n = (e^{lambda s} - R(t,s))^n"),
    ("cor2.3.3", "N(lambda - A(t)) in N(e^{lambda s} - R(t,s))"),
    ("cor2.3.4", "Rg(e^{lambda s} - R(t,s)) in Rg(lambda - A(t))"),
    ("cor2.3.5", "N((lambda - A(t))^n) in N((e^{lambda s} - R(t,s))^n)"),
    ("cor2.3.6", "Rg((e^{lambda s} - R(t,s))^n) in Rg((lambda - A(t))^n)"),
    ("cor2.3.7", "hyper-range of e^{lambda s} - R(t,s) in hyper-range of lambda - A(t)"),
    ("def1.1.1", "R(t,0) = I"),
    ("def1.1.2", "R(t,s+r) = R(t+r,s) R(t,r)"),
    ("def1.1.3", "R(t,eps) -> I as eps -> 0"),
    ("def1.1.4", "||R(t,s)|| <= M(t+s)"),
    ("def1.2", "(R(t,h) - I)/h -> A(t)"),
    ("def1.2.order", "difference quotient converges at first order"),
    ("thm1.6.2", "(1/s) int_0^s R(t,h) dh -> I"),
    ("thm1.6.3", "R(t,s) A(t) = A(t) R(t,s)"),
    ("thm1.6.4.left", "d/ds R(t,s) = A(t+s) R(t,s)"),
    ("thm1.6.4.right", "d/ds R(t,s) = R(t,s) A(t+s)"),
    ("thm1.6.5", "R(t,s) = I + int_0^s A(t+h) R(t,h) dh"),
    ("thm1.6.6", "s -> R(t,s) is continuous"),
    ("thm2.1.1", "(lambda - A(t)) D_lambda(t,s) = e^{lambda s} - R(t,s)"),
    ("thm2.1.2", "D_lambda(t,s) (lambda - A(t)) = e^{lambda s} - R(t,s)"),
    ("thm2.4.1", "exp(s sigma(A(t))) in sigma(R(t,s))"),
    ("thm2.4.2", "exp(s sigma_p(A(t))) in sigma_p(R(t,s))"),
    ("thm2.4.3", "exp(s sigma_a(A(t))) in sigma_a(R(t,s))"),
    ("thm2.4.3.propagation", "||e^{lambda s} x - R(t,s) x|| <= c ||(lambda - A(t)) x||"),
    ("thm2.4.4", "exp(s sigma_e(A(t))) in sigma_e(R(t,s))"),
    ("thm2.4.5", "exp(s sigma_r(A(t))) in sigma_r(R(t,s))"),
    ("thm2.5", "exp(s sigma_gamma(A(t))) in sigma_gamma(R(t,s))"),
]
.as_slice();

pub fn is_known_claim(id: &str) -> bool {
    CLAIMS.iter().any(|(c, _)| *c == id)
}

pub fn claim_description(id: &str) -> Option<&'static str> {
    CLAIMS.iter().find(|(c, _)| *c == id).map(|(_, d)| *d)
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaChoice {
    Auto,
    List(Vec<C64>),
}

/// What to evaluate at each grid point.
#[derive(Debug, Clone)]
pub struct Plan {
    pub claims: BTreeSet<String>,
    pub lambdas: LambdaChoice,
    pub powers: Vec<u32>,
}

impl Plan {
    pub fn all(lambdas: LambdaChoice, powers: Vec<u32>) -> Self {
        Self {
            claims: CLAIMS.iter().map(|(c, _)| c.to_string()).collect(),
            lambdas,
            powers,
        }
    }

    pub fn wants(&self, id: &str) -> bool {
        self.claims.contains(id)
    }

    fn wants_any(&self, ids: &[&str]) -> bool {
        ids.iter().any(|id| self.wants(id))
    }

    pub fn lambdas_at(&self, q: &QuasiSemigroup, t: f64) -> Result<Vec<C64>> {
        match &self.lambdas {
            LambdaChoice::Auto => default_lambdas(&q.generator(t)),
            LambdaChoice::List(l) => Ok(l.clone()),
        }
    }
}

/// Runs `f`, turning a computation error into a failed record.
fn guarded(out: &mut Vec<VerificationRecord>, claim: &str, params: RecordParams, f: impl FnOnce() -> Result<VerificationRecord>) {
    out.push(f().unwrap_or_else(|e| VerificationRecord::failed(claim, params, &e)));
}

fn extend_guarded(
    out: &mut Vec<VerificationRecord>,
    claim: &str,
    params: RecordParams,
    f: impl FnOnce() -> Result<Vec<VerificationRecord>>,
) {
    match f() {
        Ok(recs) => out.extend(recs),
        Err(e) => out.push(VerificationRecord::failed(claim, params, &e)),
    }
}

fn sup_generator_norm(q: &QuasiSemigroup, lo: f64, hi: f64) -> f64 {
    (0..=16)
        .map(|k| q.generator_matrix(lo + (hi - lo) * k as f64 / 16.0).op_norm())
        .fold(0.0, f64::max)
}

fn ode_slack(q: &QuasiSemigroup) -> f64 {
    match q.backend() {
        Backend::Evolution { .. } => q.tol().ode_tol,
        _ => 0.0,
    }
}

/// Claims that depend on `t` alone.
pub fn evaluate_t(q: &QuasiSemigroup, t: f64, plan: &Plan) -> Vec<VerificationRecord> {
    let mut out = Vec::new();
    let params = || RecordParams::new(q.descriptor(), t, 0.0);
    let eps = f64::EPSILON;
    if plan.wants("def1.1.1") {
        guarded(&mut out, "def1.1.1", params(), || {
            let res = (&q.propagator(t, 0.0)? - &CMatrix::identity(q.dim())).op_norm();
            Ok(VerificationRecord::checked("def1.1.1", params(), res, 1e-12, ""))
        });
    }
    if plan.wants("def1.1.3") {
        let p = RecordParams::new(q.descriptor(), t, CONTINUITY_EPS);
        guarded(&mut out, "def1.1.3", p.clone(), || {
            let res = (&q.propagator(t, CONTINUITY_EPS)? - &CMatrix::identity(q.dim())).op_norm();
            let a = sup_generator_norm(q, t, t + CONTINUITY_EPS);
            let bound = 2.0 * CONTINUITY_EPS * a.max(1.0) * q.bound(t + CONTINUITY_EPS)? + ode_slack(q);
            Ok(VerificationRecord::checked("def1.1.3", p, res, bound, ""))
        });
    }
    if plan.wants("def1.2") {
        let h = DEFAULT_GENERATOR_STEP;
        let p = RecordParams::new(q.descriptor(), t, h);
        guarded(&mut out, "def1.2", p.clone(), || {
            let est = estimate_generator(q, t, h)?;
            let a = q.generator_matrix(t);
            let res = (&est.forward - &a).op_norm();
            let drift = (&q.generator_matrix(t + h) - &a).op_norm() / h;
            let curvature = 1.0 + a.op_norm().powi(2) + drift;
            let bound = 5.0 * h * curvature * q.bound(t + h)? + 1e3 * eps * (1.0 + a.op_norm()) / h;
            let mut rec = VerificationRecord::checked("def1.2", p, res, bound, "");
            if est.shifted.is_some() {
                rec = rec.with_detail("shifted_discrepancy", est.discrepancy);
            }
            Ok(rec)
        });
    }
    if plan.wants("def1.2.order") {
        let h = 1e-3;
        let p = RecordParams::new(q.descriptor(), t, h);
        guarded(&mut out, "def1.2.order", p.clone(), || {
            let conv = generator_convergence(q, t, h)?;
            let rec = match conv.order {
                Some(order) => VerificationRecord::checked(
                    "def1.2.order",
                    p,
                    (0.9 - order).max(0.0),
                    0.0,
                    "residual is the shortfall of the observed order below 0.9",
                )
                .with_detail("order", order),
                None => VerificationRecord::checked("def1.2.order", p, 0.0, 0.0, "quotient exact to rounding"),
            };
            Ok(rec.with_detail("err_h", conv.err).with_detail("err_half", conv.err_half))
        });
    }
    if plan.wants("thm1.6.2") {
        let windows = [0.1, 0.05, 0.025];
        let p = RecordParams::new(q.descriptor(), t, windows[2]);
        guarded(&mut out, "thm1.6.2", p.clone(), || {
            let avg = check_averaging(q, t, &windows)?;
            let s = windows[2];
            let a = sup_generator_norm(q, t, t + windows[0]);
            let bound = s * (1.0 + a) * q.bound(t + s)? + 10.0 * q.integrand_tol() / s;
            let mut rec = VerificationRecord::checked("thm1.6.2", p, avg.residuals[2], bound, "");
            rec = rec.with_detail("first_order", if avg.first_order { 1.0 } else { 0.0 });
            for (s, r) in avg.s_values.iter().zip(&avg.residuals) {
                rec = rec.with_detail(&format!("residual_at_{s}"), *r);
            }
            Ok(rec)
        });
    }
    out
}

/// Cocycle law at one `(t, s, r)` point.
pub fn evaluate_tsr(q: &QuasiSemigroup, t: f64, s: f64, r: f64, plan: &Plan) -> Vec<VerificationRecord> {
    let mut out = Vec::new();
    if plan.wants("def1.1.2") {
        let p = RecordParams::new(q.descriptor(), t, s).with_r(r);
        guarded(&mut out, "def1.1.2", p.clone(), || {
            let ax = check_axioms(q, &[(t, s, r)])?[0];
            let bound = 1e-8f64.max(ode_slack(q));
            Ok(VerificationRecord::checked("def1.1.2", p, ax.cocycle, bound, ""))
        });
    }
    out
}

const SECTION_TWO_LAMBDA: &[&str] = &[
    "thm2.1.1",
    "thm2.1.2",
    "cor2.2",
    "cor2.3.1",
    "cor2.3.2",
    "cor2.3.3",
    "cor2.3.4",
    "cor2.3.5",
    "cor2.3.6",
    "cor2.3.7",
    "thm2.4.3.propagation",
    "thm2.5",
];

/// Claims that depend on `(t, s)` and possibly on `lambda` and `n`.
///
/// `semigroup_case` enables the `t`-free semigroup record, so callers can
/// emit it once per `s`.
pub fn evaluate_ts(q: &QuasiSemigroup, t: f64, s: f64, plan: &Plan, semigroup_case: bool) -> Vec<VerificationRecord> {
    let mut out = Vec::new();
    let base = RecordParams::new(q.descriptor(), t, s);
    evaluate_qsg_ts(q, t, s, plan, &mut out);

    if plan.wants("def1.1.4") {
        guarded(&mut out, "def1.1.4", base.clone(), || {
            let ax = check_axioms(q, &[(t, s, 0.0)])?[0];
            let excess = (-ax.bound_slack).max(0.0);
            Ok(VerificationRecord::checked("def1.1.4", base.clone(), excess, 1e-8 * ax.bound, "")
                .with_detail("bound_m", ax.bound)
                .with_detail("slack", ax.bound_slack))
        });
    }

    for kind in SpectrumKind::ALL {
        let id = super::inclusions::spectral_claim_id(kind);
        if kind != SpectrumKind::Regular && plan.wants(id) {
            let p = base.clone().with_kind(kind);
            guarded(&mut out, id, p, || check_spectral_inclusion(q, t, s, kind));
        }
    }

    if !plan.wants_any(SECTION_TWO_LAMBDA) {
        return out;
    }
    let lambdas = match plan.lambdas_at(q, t) {
        Ok(l) => l,
        Err(e) => {
            out.push(VerificationRecord::failed("thm2.1.1", base, &e));
            return out;
        }
    };
    if plan.wants("thm2.5") {
        let p = base.clone().with_kind(SpectrumKind::Regular);
        guarded(&mut out, "thm2.5", p, || Ok(check_regular_inclusion(q, t, s, &lambdas)?.record));
    }

    let orbit = Orbit::new(q, t);
    let a_t = q.generator(t);
    for &lambda in &lambdas {
        let lp = base.clone().with_lambda(lambda);
        if plan.wants_any(&["thm2.1.1", "thm2.1.2", "cor2.3.1", "cor2.3.2"]) {
            extend_guarded(&mut out, "thm2.1.1", lp.clone(), || {
                let ctx = IdentityContext::new(&orbit, lambda, s)?;
                let mut recs = Vec::new();
                if plan.wants("thm2.1.1") {
                    recs.push(ctx.right());
                }
                if plan.wants("thm2.1.2") {
                    recs.push(ctx.left());
                }
                for &n in &plan.powers {
                    if plan.wants("cor2.3.1") {
                        recs.push(ctx.power(n, false));
                    }
                    if plan.wants("cor2.3.2") {
                        recs.push(ctx.power(n, true));
                    }
                }
                Ok(recs)
            });
        }
        if semigroup_case && plan.wants("cor2.2") {
            match check_semigroup_identity(q, lambda, s) {
                Ok(Some(rec)) => out.push(rec),
                Ok(None) => {}
                Err(e) => {
                    let mut p = lp.clone();
                    p.t = 0.0;
                    out.push(VerificationRecord::failed("cor2.2", p, &e));
                }
            }
        }
        if plan.wants_any(&["cor2.3.3", "cor2.3.4", "cor2.3.5", "cor2.3.6", "cor2.3.7"]) {
            extend_guarded(&mut out, "cor2.3.3", lp.clone(), || {
                let a = a_t.shifted(lambda);
                let r = q.eval(t, s)?.shifted((lambda * s).exp());
                let mut recs = Vec::new();
                if plan.wants("cor2.3.3") {
                    recs.push(kernel_record(q, &a, &r, lambda, t, s, 1, "cor2.3.3")?);
                }
                if plan.wants("cor2.3.4") {
                    recs.push(range_record(q, &a, &r, lambda, t, s, Power::Finite(1), "cor2.3.4")?);
                }
                for &n in &plan.powers {
                    if plan.wants("cor2.3.5") {
                        recs.push(kernel_record(q, &a, &r, lambda, t, s, n, "cor2.3.5")?);
                    }
                    if plan.wants("cor2.3.6") {
                        recs.push(range_record(q, &a, &r, lambda, t, s, Power::Finite(n), "cor2.3.6")?);
                    }
                }
                if plan.wants("cor2.3.7") {
                    recs.push(range_record(q, &a, &r, lambda, t, s, Power::Hyper, "cor2.3.7")?);
                }
                Ok(recs)
            });
        }
        if plan.wants("thm2.4.3.propagation") {
            let p = lp.clone().with_kind(SpectrumKind::Approximate);
            guarded(&mut out, "thm2.4.3.propagation", p, || {
                check_approx_propagation(q, t, s, &approx_eigenpair(&a_t, lambda))
            });
        }
    }
    out
}

fn evaluate_qsg_ts(q: &QuasiSemigroup, t: f64, s: f64, plan: &Plan, out: &mut Vec<VerificationRecord>) {
    let base = RecordParams::new(q.descriptor(), t, s);
    let eps = f64::EPSILON;
    if plan.wants("thm1.6.3") {
        guarded(out, "thm1.6.3", base.clone(), || {
            let res = check_commutation(q, t, t, s)?;
            let a = q.generator_matrix(t).op_norm();
            let bound = 1e-8 * (1.0 + a) * q.bound(t + s)? + ode_slack(q) * a;
            let note = if q.generators_commute() { "" } else { "generators do not commute; measured only" };
            Ok(VerificationRecord::policy(q.generators_commute(), "thm1.6.3", base.clone(), res, bound, note))
        });
    }
    if s > 0.0 && plan.wants_any(&["thm1.6.4.left", "thm1.6.4.right"]) {
        extend_guarded(out, "thm1.6.4.left", base.clone(), || {
            let d = check_derivative(q, t, s)?;
            let delta = d.step;
            let g = 1.0
                + sup_generator_norm(q, t + s - delta, t + s + delta)
                + (&q.generator_matrix(t + s + delta) - &q.generator_matrix(t + s - delta)).op_norm() / (2.0 * delta);
            let m = q.bound(t + s + delta)?;
            let bound = 10.0 * delta * delta * g.powi(3) * m + 1e3 * eps * m / delta + ode_slack(q) / delta;
            let mut recs = Vec::new();
            if plan.wants("thm1.6.4.left") {
                recs.push(
                    VerificationRecord::checked("thm1.6.4.left", base.clone(), d.left, bound, "")
                        .with_detail("step", delta),
                );
            }
            if plan.wants("thm1.6.4.right") {
                let commute = q.generators_commute();
                let note = if commute { "" } else { "generators do not commute; measured only" };
                recs.push(
                    VerificationRecord::policy(commute, "thm1.6.4.right", base.clone(), d.right, bound, note)
                        .with_detail("step", delta),
                );
            }
            Ok(recs)
        });
    }
    if plan.wants("thm1.6.5") {
        guarded(out, "thm1.6.5", base.clone(), || {
            let res = check_integral_equation(q, t, s)?;
            let a = sup_generator_norm(q, t, t + s);
            let bound = 10.0 * q.integrand_tol() * s * q.dim() as f64 * (1.0 + a) * q.bound(t + s)? + ode_slack(q);
            Ok(VerificationRecord::checked("thm1.6.5", base.clone(), res, bound, ""))
        });
    }
    if plan.wants("thm1.6.6") {
        let delta = 1e-3;
        guarded(out, "thm1.6.6", base.clone(), || {
            let res = continuity_profile(q, t, s, &[delta])?[0];
            let a = sup_generator_norm(q, t + s, t + s + delta);
            let bound = 2.0 * delta * (1.0 + a) * q.bound(t + s + delta)? + ode_slack(q);
            Ok(VerificationRecord::checked("thm1.6.6", base.clone(), res, bound, "").with_detail("delta", delta))
        });
    }
}
