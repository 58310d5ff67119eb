// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra and quadrature.

mod eig;
mod expm;
mod lu;
mod matrix;
mod quad;
mod svd;

use serde::{Deserialize, Serialize};

pub use eig::{eig, eigenvalues, schur, Eigenpair, Schur};
pub use expm::expm;
pub use lu::solve;
pub use matrix::{inner, vec_norm, CMatrix, C64, ONE, ZERO};
pub use quad::{integrate, quad_operator, quad_scalar, QuadValue, MAX_DEPTH};
pub use svd::{singular_values, svd, svd_best_effort, Svd};

use crate::error::{Error, Result};

/// Numerical tolerances shared by every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceContext {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_tol: f64,
    /// Absolute per-entry quadrature tolerance.
    pub quad_tol: f64,
    /// Eigenvalue matching tolerance.
    pub eig_tol: f64,
    /// Step-accuracy target of the evolution integrator.
    pub ode_tol: f64,
}

impl Default for ToleranceContext {
    fn default() -> Self {
        Self {
            rank_tol: 1e-8,
            quad_tol: 1e-10,
            eig_tol: 1e-6,
            ode_tol: 1e-8,
        }
    }
}

impl ToleranceContext {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_tol", self.rank_tol),
            ("quad_tol", self.quad_tol),
            ("eig_tol", self.eig_tol),
            ("ode_tol", self.ode_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config {
                    field: format!("tolerances.{name}"),
                    message: format!("must be strictly positive, got {v}"),
                });
            }
        }
        Ok(())
    }
}
