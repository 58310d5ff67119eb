// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::catalog::build_backend;
use super::config::{PseudoTarget, ScenarioConfig};
use crate::error::{Error, Result};
use crate::spectra::{pseudospectrum_grid, PseudospectrumGrid};
use crate::verifier::{evaluate_t, evaluate_ts, evaluate_tsr, record_order, Verdict, VerificationRecord};

pub const TOOL_VERSION: &str = concat!("qsg ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(rename = "PASS")]
    pub pass: usize,
    #[serde(rename = "FAIL")]
    pub fail: usize,
    #[serde(rename = "REPORT-ONLY")]
    pub report_only: usize,
    pub total: usize,
}

impl Summary {
    pub fn tally(records: &[VerificationRecord]) -> Self {
        let mut s = Summary::default();
        for r in records {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::ReportOnly => s.report_only += 1,
            }
        }
        s.total = records.len();
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudospectrumReport {
    pub target: PseudoTarget,
    pub t: f64,
    pub s: f64,
    pub grid: PseudospectrumGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario_id: String,
    pub tool_version: String,
    pub backend: String,
    pub config: ScenarioConfig,
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudospectrum: Option<PseudospectrumReport>,
    /// Only filled in on request, so that reports stay byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }
}

/// Thread count from `QSG_THREADS`; `None` means one per core.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("QSG_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(Error::Config {
                field: "QSG_THREADS".into(),
                message: format!("expected a positive integer, got {v:?}"),
            }),
            Ok(n) => Ok(Some(n)),
        },
    }
}

fn unique(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

enum Unit {
    T(f64),
    Ts { t: f64, s: f64, semigroup_case: bool },
    Tsr(f64, f64, f64),
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<Report> {
    run_scenario_with_threads(config, threads_from_env()?)
}

pub fn run_scenario_with_threads(config: &ScenarioConfig, threads: Option<usize>) -> Result<Report> {
    config.validate()?;
    let grid = &config.grid;
    let (ts, ss, rs) = (unique(&grid.t), unique(&grid.s), unique(&grid.r));
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let horizon = (max(&ts) + max(&ss) + max(&rs)).max(1.0);
    let q = build_backend(&config.backend, config.seed, config.tolerances, horizon)?;
    let plan = config.plan();

    let mut units = Vec::new();
    for &t in &ts {
        units.push(Unit::T(t));
        for &s in &ss {
            units.push(Unit::Ts {
                t,
                s,
                semigroup_case: t == ts[0],
            });
            for &r in &rs {
                units.push(Unit::Tsr(t, s, r));
            }
        }
    }

    let work = || -> Vec<VerificationRecord> {
        units
            .par_iter()
            .flat_map_iter(|u| match *u {
                Unit::T(t) => evaluate_t(&q, t, &plan),
                Unit::Ts { t, s, semigroup_case } => evaluate_ts(&q, t, s, &plan, semigroup_case),
                Unit::Tsr(t, s, r) => evaluate_tsr(&q, t, s, r, &plan),
            })
            .collect()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Io(format!("thread pool: {e}")))?;
    let mut records = pool.install(work);
    records.sort_by(record_order);

    let pseudospectrum = match &config.pseudospectrum {
        None => None,
        Some(p) => {
            let op = match p.target {
                PseudoTarget::Generator => q.generator(p.t),
                PseudoTarget::Propagator => q.eval(p.t, p.s)?,
            };
            let grid = pool.install(|| pseudospectrum_grid(&op, &p.grid()))?;
            Some(PseudospectrumReport {
                target: p.target,
                t: p.t,
                s: p.s,
                grid,
            })
        }
    };

    Ok(Report {
        scenario_id: config.scenario_id.clone(),
        tool_version: TOOL_VERSION.to_string(),
        backend: q.descriptor(),
        config: config.clone(),
        summary: Summary::tally(&records),
        records,
        pseudospectrum,
        wall_time_ms: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

/// JSON with sorted keys, or a fixed-width table with one row per record.
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let value = serde_json::to_value(report).expect("report serializes");
            let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
            s.push('\n');
            s
        }
        Format::Table => table(report),
    }
}

pub fn parse_report(json: &str) -> Result<Report> {
    serde_json::from_str(json).map_err(|e| Error::Io(format!("report json: {e}")))
}

fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.is_finite() {
        format!("{x:.3e}")
    } else {
        "inf".into()
    }
}

fn table(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}  ({})  {}", report.scenario_id, report.backend, report.tool_version);
    let _ = writeln!(
        out,
        "{:<22} {:<11} {:>10} {:>10} {:>6} {:>6} {:>6} {:>17} {:>4} {:<11} note",
        "claim", "verdict", "residual", "bound", "t", "s", "r", "lambda", "n", "kind"
    );
    for rec in &report.records {
        let p = &rec.params;
        let lambda = p.lambda.map_or(String::new(), |z| format!("{:.4}{:+.4}i", z.re, z.im));
        let _ = writeln!(
            out,
            "{:<22} {:<11} {:>10} {:>10} {:>6} {:>6} {:>6} {:>17} {:>4} {:<11} {}",
            rec.claim_id,
            rec.verdict.to_string(),
            fmt_num(rec.residual),
            rec.bound.map_or("-".into(), fmt_num),
            format!("{}", p.t),
            format!("{}", p.s),
            p.r.map_or(String::new(), |r| format!("{r}")),
            lambda,
            p.n.map_or(String::new(), |n| n.to_string()),
            p.kind.map_or("", |k| k.name()),
            rec.note
        );
    }
    let s = report.summary;
    let _ = writeln!(
        out,
        "summary: {} PASS, {} FAIL, {} REPORT-ONLY ({} records)",
        s.pass, s.fail, s.report_only, s.total
    );
    if let Some(ms) = report.wall_time_ms {
        let _ = writeln!(out, "wall time: {ms} ms");
    }
    out
}

/// Record counts by claim id.
pub fn claim_counts(report: &Report) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for r in &report.records {
        *m.entry(r.claim_id.clone()).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::config::ClaimSpec;

    #[test]
    fn empty_claim_list() {
        let mut cfg = ScenarioConfig::for_catalog("constant-diagonal");
        cfg.claims = ClaimSpec::List(vec![]);
        let rep = run_scenario_with_threads(&cfg, Some(2)).unwrap();
        assert!(rep.records.is_empty());
        assert_eq!(rep.summary, Summary::default());
    }

    #[test]
    fn unknown_catalog() {
        let mut cfg = ScenarioConfig::for_catalog("constant-diagonal");
        cfg.backend.catalog = Some("nope".into());
        assert!(matches!(run_scenario_with_threads(&cfg, Some(1)), Err(Error::Catalog(_))));
    }

    #[test]
    fn constant_diagonal_has_no_failures() {
        let cfg = ScenarioConfig::for_catalog("constant-diagonal");
        let rep = run_scenario_with_threads(&cfg, None).unwrap();
        let fails: Vec<_> = rep.records.iter().filter(|r| r.verdict == Verdict::Fail).collect();
        assert!(fails.is_empty(), "{fails:#?}");
        assert_eq!(rep.summary.report_only, 0);
        assert_eq!(rep.summary.total, rep.records.len());
    }

    #[test]
    fn json_round_trip_and_determinism() {
        let mut cfg = ScenarioConfig::for_catalog("scaled-linear-a");
        cfg.grid.t = vec![0.0];
        cfg.grid.s = vec![1.0];
        cfg.grid.r = vec![0.0];
        let a = emit_report(&run_scenario_with_threads(&cfg, Some(1)).unwrap(), Format::Json);
        let b = emit_report(&run_scenario_with_threads(&cfg, Some(4)).unwrap(), Format::Json);
        assert_eq!(a, b);
        let back = parse_report(&a).unwrap();
        assert_eq!(emit_report(&back, Format::Json), a);
        let table = emit_report(&back, Format::Table);
        let row = table.lines().find(|l| l.starts_with("thm2.4.4")).unwrap();
        assert!(row.contains("vacuous in finite dimension"));
    }
}
