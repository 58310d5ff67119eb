// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario files, the backend catalog, and report assembly.

mod catalog;
mod config;
mod run;

pub use catalog::{build_backend, build_catalog, generator_by_name, list_catalog, CATALOG};
pub use config::{
    BackendKind, BackendSpec, ClaimSpec, GridConfig, LambdaSpec, PseudoTarget, PseudospectrumConfig, ScenarioConfig,
};
pub use run::{
    claim_counts, emit_report, parse_report, run_scenario, run_scenario_with_threads, threads_from_env, Format,
    PseudospectrumReport, Report, Summary, TOOL_VERSION,
};
