// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::inclusions::check_spectral_inclusion;
use super::record::{complex_pair, Verdict, VerificationRecord};
use crate::error::{Error, Result};
use crate::numkernel::C64;
use crate::operators::{
    hyper_range, invariance_defect, is_bounded_below, is_semi_regular, kernel, quotient_operator, subspace_contained,
};
use crate::qsg::QuasiSemigroup;
use crate::spectra::SpectrumKind;

/// Attached to every regular-spectrum record.
pub const EXPONENT_NOTE: &str =
    "semi-regularity is tested for e^{lambda s}I - R(t,s) at the record's own s, not for e^{lambda}";

/// Replay of the argument for one `lambda`: with `S = e^{lambda s} I - R(t, s)`
/// semi-regular, `M = Rg^∞(S)` is `R(t, s)`-invariant, the induced map on
/// `X/M` is bounded below, and `lambda I - A(t)` comes out semi-regular.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofPathDiagnostic {
    #[serde(with = "complex_pair")]
    pub lambda: Option<C64>,
    /// `S` semi-regular; nothing else is replayed when false.
    pub applicable: bool,
    pub m_dim: Option<usize>,
    pub invariance_defect: Option<f64>,
    pub invariance_allowed: Option<f64>,
    pub quotient_dim: Option<usize>,
    pub quotient_bounded_below: Option<bool>,
    pub quotient_sigma_min: Option<f64>,
    pub generator_semi_regular: Option<bool>,
    pub generator_defect: Option<f64>,
    pub error: Option<String>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct RegularInclusion {
    pub record: VerificationRecord,
    pub diagnostics: Vec<ProofPathDiagnostic>,
}

impl RegularInclusion {
    pub fn diagnostics_ok(&self) -> bool {
        self.diagnostics.iter().all(|d| d.ok)
    }
}

pub fn proof_path(q: &QuasiSemigroup, lambda: C64, t: f64, s: f64) -> Result<ProofPathDiagnostic> {
    let r = q.eval(t, s)?;
    let s_op = r.shifted((lambda * s).exp());
    let mut diag = ProofPathDiagnostic {
        lambda: Some(lambda),
        applicable: is_semi_regular(&s_op).flag,
        m_dim: None,
        invariance_defect: None,
        invariance_allowed: None,
        quotient_dim: None,
        quotient_bounded_below: None,
        quotient_sigma_min: None,
        generator_semi_regular: None,
        generator_defect: None,
        error: None,
        ok: true,
    };
    if !diag.applicable {
        return Ok(diag);
    }
    let m = hyper_range(&s_op);
    diag.m_dim = Some(m.dim());
    diag.invariance_defect = Some(invariance_defect(&r, &m)?);
    diag.invariance_allowed = Some(r.tol().rank_tol * r.norm());
    match quotient_operator(&s_op, &m) {
        Ok(quot) => {
            let bb = is_bounded_below(&quot);
            diag.quotient_dim = Some(quot.dim());
            diag.quotient_bounded_below = Some(bb.flag);
            diag.quotient_sigma_min = bb.sigma_min;
        }
        Err(e @ Error::NotInvariant { .. }) => diag.error = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    let a = q.generator(t).shifted(lambda);
    let gen = subspace_contained(&kernel(&a), &hyper_range(&a), a.tol().rank_tol)?;
    diag.generator_semi_regular = Some(gen.flag);
    diag.generator_defect = Some(gen.defect);
    diag.ok = diag.error.is_none()
        && diag.invariance_defect <= diag.invariance_allowed
        && diag.quotient_bounded_below == Some(true)
        && gen.flag;
    Ok(diag)
}

/// Regular-spectrum inclusion plus a proof-path replay at each `lambda`.
pub fn check_regular_inclusion(q: &QuasiSemigroup, t: f64, s: f64, lambdas: &[C64]) -> Result<RegularInclusion> {
    let mut record = check_spectral_inclusion(q, t, s, SpectrumKind::Regular)?;
    record.append_note(EXPONENT_NOTE);
    let diagnostics = lambdas
        .iter()
        .map(|&l| proof_path(q, l, t, s))
        .collect::<Result<Vec<_>>>()?;
    let applicable = diagnostics.iter().filter(|d| d.applicable).count();
    let ok = diagnostics.iter().filter(|d| d.ok).count();
    record = record
        .with_detail("diagnostics", diagnostics.len() as f64)
        .with_detail("diagnostics_applicable", applicable as f64)
        .with_detail("diagnostics_ok", ok as f64);
    if ok < diagnostics.len() && record.verdict == Verdict::Pass {
        record.verdict = Verdict::Fail;
        record.append_note("proof-path diagnostic failed");
    }
    Ok(RegularInclusion { record, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{CMatrix, ToleranceContext};

    fn constant(m: CMatrix) -> QuasiSemigroup {
        QuasiSemigroup::constant(m, ToleranceContext::default()).unwrap()
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn nilpotent_jordan() {
        let q = constant(CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap());
        let out = check_regular_inclusion(&q, 0.0, 1.0, &[re(0.0), re(1.0), re(-0.5)]).unwrap();
        assert_eq!(out.record.verdict, Verdict::Pass);
        assert!(out.record.residual <= 1e-8);
        assert!(out.record.note.contains("e^{lambda s}"));
        assert_eq!(out.record.details["points_generator"], 1.0);
        // lambda = 0 hits the spectrum; the other two replay the proof
        assert!(!out.diagnostics[0].applicable);
        for d in &out.diagnostics[1..] {
            assert!(d.applicable && d.ok);
            assert_eq!(d.m_dim, Some(2));
            assert_eq!(d.quotient_dim, Some(0));
            assert_eq!(d.quotient_bounded_below, Some(true));
            assert_eq!(d.generator_semi_regular, Some(true));
        }
    }

    #[test]
    fn diagonal() {
        let q = constant(CMatrix::real_diag(&[1.0, 2.0]));
        let out = check_regular_inclusion(&q, 0.0, 1.0, &[re(1.0), re(1.5), re(3.0)]).unwrap();
        assert_eq!(out.record.verdict, Verdict::Pass);
        assert_eq!(out.record.details["points_generator"], 2.0);
        assert_eq!(out.record.details["points_propagator"], 2.0);
        assert!(out.diagnostics_ok());
        assert_eq!(out.diagnostics.iter().filter(|d| d.applicable).count(), 2);
    }
}
