// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("{what} did not converge (achieved residual {residual:e})")]
    Convergence { what: &'static str, residual: f64 },

    #[error("quadrature depth exhausted on [{lo}, {hi}] (error estimate {estimate:e}, tolerance {tol:e})")]
    Quadrature {
        lo: f64,
        hi: f64,
        estimate: f64,
        tol: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("subspace is not invariant (defect {defect:e}, allowed {allowed:e})")]
    NotInvariant { defect: f64, allowed: f64 },

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("unknown catalog entry `{0}`")]
    Catalog(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
