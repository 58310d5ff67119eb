// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numkernel::C64;
use crate::spectra::SpectrumKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "REPORT-ONLY")]
    ReportOnly,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::ReportOnly => "REPORT-ONLY",
        })
    }
}

/// Exponent of an operator power; `Hyper` is the limit case (hyper-range).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Power {
    Finite(u32),
    Hyper,
}

impl Power {
    fn rank(self) -> u64 {
        match self {
            Power::Finite(n) => n as u64,
            Power::Hyper => u64::MAX,
        }
    }
}

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Power::Finite(n) => write!(f, "{n}"),
            Power::Hyper => f.write_str("inf"),
        }
    }
}

impl Serialize for Power {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Power::Finite(n) => ser.serialize_u32(*n),
            Power::Hyper => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Power {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            N(u32),
            S(String),
        }
        match Repr::deserialize(de)? {
            Repr::N(0) => Err(serde::de::Error::custom("power must be at least 1")),
            Repr::N(n) => Ok(Power::Finite(n)),
            Repr::S(s) if s == "inf" => Ok(Power::Hyper),
            Repr::S(s) => Err(serde::de::Error::custom(format!("expected a positive integer or \"inf\", got {s:?}"))),
        }
    }
}

/// Complex number as `[re, im]` in JSON.
pub mod complex_pair {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Option<C64>, ser: S) -> Result<S::Ok, S::Error> {
        z.map(|z| [z.re, z.im]).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<C64>, D::Error> {
        Ok(Option::<[f64; 2]>::deserialize(de)?.map(|[re, im]| C64::new(re, im)))
    }
}

/// Non-finite floats travel as JSON `null` and come back as `+inf`.
pub mod lossless_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, ser: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            ser.serialize_f64(*v)
        } else {
            ser.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(de)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordParams {
    pub backend: String,
    pub t: f64,
    pub s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "complex_pair")]
    pub lambda: Option<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Power>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<SpectrumKind>,
}

impl RecordParams {
    pub fn new(backend: impl Into<String>, t: f64, s: f64) -> Self {
        Self {
            backend: backend.into(),
            t,
            s,
            r: None,
            lambda: None,
            n: None,
            kind: None,
        }
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_lambda(mut self, lambda: C64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_power(mut self, n: Power) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_kind(mut self, kind: SpectrumKind) -> Self {
        self.kind = Some(kind);
        self
    }
}

/// Outcome of checking one claim at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub claim_id: String,
    pub params: RecordParams,
    #[serde(with = "lossless_f64")]
    pub residual: f64,
    pub bound: Option<f64>,
    pub verdict: Verdict,
    pub note: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
}

impl VerificationRecord {
    /// PASS iff `residual <= bound` (a NaN residual fails).
    pub fn checked(claim_id: &str, params: RecordParams, residual: f64, bound: f64, note: impl Into<String>) -> Self {
        let verdict = if residual <= bound { Verdict::Pass } else { Verdict::Fail };
        Self {
            claim_id: claim_id.to_string(),
            params,
            residual,
            bound: Some(bound),
            verdict,
            note: note.into(),
            details: BTreeMap::new(),
        }
    }

    pub fn report_only(claim_id: &str, params: RecordParams, residual: f64, note: impl Into<String>) -> Self {
        Self {
            claim_id: claim_id.to_string(),
            params,
            residual,
            bound: None,
            verdict: Verdict::ReportOnly,
            note: note.into(),
            details: BTreeMap::new(),
        }
    }

    /// Asserted when `asserted`, otherwise a measurement without a verdict.
    pub fn policy(
        asserted: bool,
        claim_id: &str,
        params: RecordParams,
        residual: f64,
        bound: f64,
        note: impl Into<String>,
    ) -> Self {
        if asserted {
            Self::checked(claim_id, params, residual, bound, note)
        } else {
            let mut rec = Self::report_only(claim_id, params, residual, note);
            rec.details.insert("reference_bound".into(), bound);
            rec
        }
    }

    /// A computation that could not be completed.
    pub fn failed(claim_id: &str, params: RecordParams, err: &crate::Error) -> Self {
        Self {
            claim_id: claim_id.to_string(),
            params,
            residual: f64::INFINITY,
            bound: None,
            verdict: Verdict::Fail,
            note: format!("error: {err}"),
            details: BTreeMap::new(),
        }
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn append_note(&mut self, extra: &str) {
        if extra.is_empty() {
            return;
        }
        if !self.note.is_empty() {
            self.note.push_str("; ");
        }
        self.note.push_str(extra);
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn cmp_opt_f64(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
    }
}

/// Deterministic report order: claim id, then parameters.
pub fn record_order(a: &VerificationRecord, b: &VerificationRecord) -> Ordering {
    let (p, q) = (&a.params, &b.params);
    a.claim_id
        .cmp(&b.claim_id)
        .then_with(|| p.backend.cmp(&q.backend))
        .then_with(|| p.t.total_cmp(&q.t))
        .then_with(|| p.s.total_cmp(&q.s))
        .then_with(|| cmp_opt_f64(p.r, q.r))
        .then_with(|| cmp_opt_f64(p.lambda.map(|z| z.re), q.lambda.map(|z| z.re)))
        .then_with(|| cmp_opt_f64(p.lambda.map(|z| z.im), q.lambda.map(|z| z.im)))
        .then_with(|| p.n.map(Power::rank).cmp(&q.n.map(Power::rank)))
        .then_with(|| p.kind.cmp(&q.kind))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_bound() {
        let p = RecordParams::new("x", 0.0, 1.0);
        assert_eq!(VerificationRecord::checked("c", p.clone(), 1.0, 2.0, "").verdict, Verdict::Pass);
        assert_eq!(VerificationRecord::checked("c", p.clone(), 3.0, 2.0, "").verdict, Verdict::Fail);
        assert_eq!(VerificationRecord::checked("c", p.clone(), f64::NAN, 2.0, "").verdict, Verdict::Fail);
        let r = VerificationRecord::report_only("c", p, 3.0, "");
        assert_eq!(r.verdict, Verdict::ReportOnly);
        assert!(r.bound.is_none());
    }

    #[test]
    fn json_shape() {
        let p = RecordParams::new("constant(n=2)", 0.0, 1.0)
            .with_lambda(C64::new(1.0, -2.0))
            .with_power(Power::Hyper);
        let rec = VerificationRecord::report_only("cor2.3.7", p, f64::INFINITY, "n");
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["verdict"], "REPORT-ONLY");
        assert_eq!(json["params"]["n"], "inf");
        assert_eq!(json["params"]["lambda"], serde_json::json!([1.0, -2.0]));
        assert!(json["residual"].is_null());
        let back: VerificationRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back, rec);
    }
}
