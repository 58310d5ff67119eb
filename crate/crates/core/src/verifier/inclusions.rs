// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use super::identities::check_n;
use super::record::{Power, RecordParams, VerificationRecord};
use crate::error::Result;
use crate::numkernel::{integrate, C64};
use crate::operators::{hyper_range, kernel, range, subspace_contained, FiniteOperator, Subspace};
use crate::qsg::QuasiSemigroup;
use crate::spectra::{
    exp_image, inclusion_defect, inclusion_tolerance, spectrum, ApproxEigenpair, SpectrumKind,
};

const TIME_VARYING_NOTE: &str = "generator depends on t; measured only";

/// The pair `(lambda I - A(t), e^{lambda s} I - R(t, s))`.
fn shifted_pair(q: &QuasiSemigroup, lambda: C64, t: f64, s: f64) -> Result<(FiniteOperator, FiniteOperator)> {
    let a = q.generator(t).shifted(lambda);
    let r = q.eval(t, s)?.shifted((lambda * s).exp());
    Ok((a, r))
}

fn containment_record(
    q: &QuasiSemigroup,
    claim: &str,
    params: RecordParams,
    u: &Subspace,
    v: &Subspace,
) -> Result<VerificationRecord> {
    let allowed = 10.0 * q.tol().rank_tol;
    let c = subspace_contained(u, v, allowed)?;
    let note = if q.has_constant_generator() { "" } else { TIME_VARYING_NOTE };
    Ok(VerificationRecord::policy(q.has_constant_generator(), claim, params, c.defect, allowed, note)
        .with_detail("dim_inner", u.dim() as f64)
        .with_detail("dim_outer", v.dim() as f64))
}

fn powered(op: &FiniteOperator, n: u32) -> FiniteOperator {
    if n == 1 {
        op.clone()
    } else {
        op.pow(n)
    }
}

/// `N((lambda - A)^n) ⊆ N((e^{lambda s} - R)^n)`; the `n = 1` case under
/// its own claim id.
pub fn check_kernel_inclusion(q: &QuasiSemigroup, lambda: C64, t: f64, s: f64, n: u32) -> Result<VerificationRecord> {
    check_n(n)?;
    let (a, r) = shifted_pair(q, lambda, t, s)?;
    kernel_record(q, &a, &r, lambda, t, s, n, if n == 1 { "cor2.3.3" } else { "cor2.3.5" })
}

/// Kernel inclusion always filed under the general power claim.
pub fn check_kernel_power_inclusion(
    q: &QuasiSemigroup,
    lambda: C64,
    t: f64,
    s: f64,
    n: u32,
) -> Result<VerificationRecord> {
    check_n(n)?;
    let (a, r) = shifted_pair(q, lambda, t, s)?;
    kernel_record(q, &a, &r, lambda, t, s, n, "cor2.3.5")
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn kernel_record(
    q: &QuasiSemigroup,
    a: &FiniteOperator,
    r: &FiniteOperator,
    lambda: C64,
    t: f64,
    s: f64,
    n: u32,
    claim: &str,
) -> Result<VerificationRecord> {
    let ka = kernel(&powered(a, n));
    let kr = kernel(&powered(r, n));
    let params = RecordParams::new(q.descriptor(), t, s)
        .with_lambda(lambda)
        .with_power(Power::Finite(n));
    containment_record(q, claim, params, &ka, &kr)
}

/// `Rg((e^{lambda s} - R)^n) ⊆ Rg((lambda - A)^n)`, or the hyper-range
/// version for `Power::Hyper`.
pub fn check_range_inclusion(q: &QuasiSemigroup, lambda: C64, t: f64, s: f64, n: Power) -> Result<VerificationRecord> {
    let claim = match n {
        Power::Finite(1) => "cor2.3.4",
        Power::Finite(_) => "cor2.3.6",
        Power::Hyper => "cor2.3.7",
    };
    let (a, r) = shifted_pair(q, lambda, t, s)?;
    range_record(q, &a, &r, lambda, t, s, n, claim)
}

/// Range inclusion always filed under the general power claim.
pub fn check_range_power_inclusion(
    q: &QuasiSemigroup,
    lambda: C64,
    t: f64,
    s: f64,
    n: u32,
) -> Result<VerificationRecord> {
    check_n(n)?;
    let (a, r) = shifted_pair(q, lambda, t, s)?;
    range_record(q, &a, &r, lambda, t, s, Power::Finite(n), "cor2.3.6")
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn range_record(
    q: &QuasiSemigroup,
    a: &FiniteOperator,
    r: &FiniteOperator,
    lambda: C64,
    t: f64,
    s: f64,
    n: Power,
    claim: &str,
) -> Result<VerificationRecord> {
    let (ra, rr) = match n {
        Power::Finite(k) => {
            check_n(k)?;
            (range(&powered(a, k)), range(&powered(r, k)))
        }
        Power::Hyper => (hyper_range(a), hyper_range(r)),
    };
    let params = RecordParams::new(q.descriptor(), t, s).with_lambda(lambda).with_power(n);
    containment_record(q, claim, params, &rr, &ra)
}

pub fn spectral_claim_id(kind: SpectrumKind) -> &'static str {
    match kind {
        SpectrumKind::Ordinary => "thm2.4.1",
        SpectrumKind::Point => "thm2.4.2",
        SpectrumKind::Approximate => "thm2.4.3",
        SpectrumKind::Essential => "thm2.4.4",
        SpectrumKind::Residual => "thm2.4.5",
        SpectrumKind::Regular => "thm2.5",
    }
}

/// Defect of `e^{s K(A(t))} ⊆ K(R(t, s))`, with the reverse defect kept as a
/// strictness annotation.
pub fn check_spectral_inclusion(q: &QuasiSemigroup, t: f64, s: f64, kind: SpectrumKind) -> Result<VerificationRecord> {
    let params = RecordParams::new(q.descriptor(), t, s).with_kind(kind);
    let claim = spectral_claim_id(kind);
    if kind == SpectrumKind::Essential {
        let mut rec = VerificationRecord::checked(claim, params, 0.0, 0.0, kind.finite_dim_note());
        rec = rec.with_detail("reverse_defect", 0.0);
        return Ok(rec);
    }
    let sa = spectrum(&q.generator(t), kind)?;
    let sr = spectrum(&q.eval(t, s)?, kind)?;
    let image = exp_image(&sa, s);
    let defect = inclusion_defect(&image, &sr);
    let reverse = inclusion_defect(&sr, &image);
    let tol = inclusion_tolerance(&image, &sr);
    let asserted = q.has_constant_generator();
    let mut note = String::new();
    if !asserted {
        note.push_str(TIME_VARYING_NOTE);
        note.push_str("; ");
    }
    note.push_str(if reverse <= tol {
        "reverse inclusion holds (equality)"
    } else {
        "inclusion is strict"
    });
    let extra = kind.finite_dim_note();
    if !extra.is_empty() {
        note.push_str("; ");
        note.push_str(extra);
    }
    Ok(VerificationRecord::policy(asserted, claim, params, defect, tol, note)
        .with_detail("reverse_defect", reverse)
        .with_detail("points_generator", sa.len() as f64)
        .with_detail("points_propagator", sr.len() as f64))
}

/// Constant in `||e^{lambda s} x - R(t, s) x|| <= c ||(lambda - A(t)) x||`,
/// `c = int_0^s e^{Re(lambda)(s - h)} M(t + h) dh`.
pub fn propagation_constant(q: &QuasiSemigroup, lambda: C64, t: f64, s: f64) -> Result<f64> {
    integrate(
        |h: f64| Ok((lambda.re * (s - h)).exp() * q.bound(t + h)?),
        0.0,
        s,
        q.tol().quad_tol,
    )
}

pub fn check_approx_propagation(q: &QuasiSemigroup, t: f64, s: f64, pair: &ApproxEigenpair) -> Result<VerificationRecord> {
    let lambda = pair.lambda;
    let r = q.propagator(t, s)?;
    let rx = r.mul_vec(&pair.x);
    let mu = (lambda * s).exp();
    let diff: Vec<C64> = rx.iter().zip(&pair.x).map(|(a, b)| mu * b - a).collect();
    let residual = crate::numkernel::vec_norm(&diff);
    let c = propagation_constant(q, lambda, t, s)?;
    let bound = c * pair.eta + 10.0 * q.tol().quad_tol;
    let asserted = q.has_constant_generator();
    let note = if asserted { "" } else { TIME_VARYING_NOTE };
    let params = RecordParams::new(q.descriptor(), t, s)
        .with_lambda(lambda)
        .with_kind(SpectrumKind::Approximate);
    Ok(
        VerificationRecord::policy(asserted, "thm2.4.3.propagation", params, residual, bound, note)
            .with_detail("c", c)
            .with_detail("eta", pair.eta),
    )
}
