// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use super::config::{BackendKind, BackendSpec};
use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, ToleranceContext, C64};
use crate::qsg::{GeneratorFn, QuasiSemigroup, RateFn};
use crate::sampling::{random_general, random_normal};

/// Built-in backends, alphabetical.
pub const CATALOG: &[(&str, &str)] = [
    ("constant-diagonal", "A = diag(1, 2), R(t,s) = expm(sA)"),
    ("constant-jordan", "A = [[0,1],[0,0]] (nilpotent Jordan block), R(t,s) = expm(sA)"),
    ("constant-rotation", "A = [[0,-1],[1,0]], eigenvalues +-i, R(t,s) = expm(sA)"),
    ("evolution-noncommuting", "A(t) = [[0,1],[t,0]] integrated by RK4; A(t) and R(t0,s0) do not commute"),
    ("random-general", "complex Gaussian A with entry variance 1/dim (dim default 4, seeded)"),
    ("random-normal", "normal A = U diag(mu) U*, Re mu in [-1,1], Im mu in [-2,2] (dim default 4, seeded)"),
    ("scaled-constant-a", "A = [[-1,1],[0,-2]], a(u) = 1, R(t,s) = expm((g(t+s)-g(t))A)"),
    ("scaled-exponential-a", "A = diag(0.5, -1), a(u) = e^u, R(t,s) = expm((g(t+s)-g(t))A)"),
    ("scaled-linear-a", "A = [1], a(u) = 1 + u, R(t,s) = exp(s + ts + s^2/2); time-varying generator"),
]
.as_slice();

pub fn list_catalog() -> Vec<(String, String)> {
    CATALOG.iter().map(|(n, d)| (n.to_string(), d.to_string())).collect()
}

const DEFAULT_RANDOM_DIM: usize = 4;

fn real(rows: &[&[f64]]) -> CMatrix {
    CMatrix::from_real_rows(rows).expect("catalog matrices are well formed")
}

pub fn generator_by_name(name: &str) -> Result<GeneratorFn> {
    match name {
        "airy" => Ok(GeneratorFn::Airy),
        "upper-ramp" => Ok(GeneratorFn::UpperRamp),
        "diagonal-ramp" => Ok(GeneratorFn::DiagonalRamp),
        other => Err(Error::Config {
            field: "backend.generator".into(),
            message: format!("unknown generator {other:?} (expected airy, upper-ramp or diagonal-ramp)"),
        }),
    }
}

fn explicit_matrix(spec: &BackendSpec) -> Result<CMatrix> {
    let field = |m: &str| Error::Config {
        field: "backend.matrix".into(),
        message: m.into(),
    };
    let re = spec.matrix.as_ref().ok_or_else(|| field("required"))?;
    let n = re.len();
    if n == 0 || re.iter().any(|row| row.len() != n) {
        return Err(field("must be a non-empty square list of rows"));
    }
    let im = match &spec.matrix_im {
        Some(im) => {
            if im.len() != n || im.iter().any(|row| row.len() != n) {
                return Err(Error::Config {
                    field: "backend.matrix_im".into(),
                    message: "must have the same shape as `matrix`".into(),
                });
            }
            im.clone()
        }
        None => vec![vec![0.0; n]; n],
    };
    let data = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| C64::new(re[i][j], im[i][j]))
        .collect();
    CMatrix::from_vec(n, n, data).map_err(|e| field(&e.to_string()))
}

/// Builds the backend a spec describes. `horizon` bounds `t + s` over the
/// scenario and calibrates the evolution step.
pub fn build_backend(spec: &BackendSpec, seed: u64, tol: ToleranceContext, horizon: f64) -> Result<QuasiSemigroup> {
    if let Some(name) = &spec.catalog {
        return build_catalog(name, spec.dim, seed, tol, horizon);
    }
    match spec.kind.expect("validated spec names a kind") {
        BackendKind::Constant => QuasiSemigroup::constant(explicit_matrix(spec)?, tol),
        BackendKind::Scaled => {
            QuasiSemigroup::scaled(explicit_matrix(spec)?, spec.rate.expect("validated"), tol)
        }
        BackendKind::Evolution => {
            let generator = match &spec.generator {
                Some(name) => generator_by_name(name)?,
                None => GeneratorFn::Frozen(explicit_matrix(spec)?),
            };
            match spec.step {
                Some(step) => QuasiSemigroup::evolution_with_step(generator, step, tol),
                None => QuasiSemigroup::evolution(generator, tol, horizon),
            }
        }
    }
}

pub fn build_catalog(
    name: &str,
    dim: Option<usize>,
    seed: u64,
    tol: ToleranceContext,
    horizon: f64,
) -> Result<QuasiSemigroup> {
    let random = matches!(name, "random-general" | "random-normal");
    if dim.is_some() && !random {
        return Err(Error::Config {
            field: "backend.dim".into(),
            message: format!("catalog entry {name:?} has a fixed dimension"),
        });
    }
    let n = dim.unwrap_or(DEFAULT_RANDOM_DIM);
    match name {
        "constant-diagonal" => QuasiSemigroup::constant(CMatrix::real_diag(&[1.0, 2.0]), tol),
        "constant-jordan" => QuasiSemigroup::constant(real(&[&[0.0, 1.0], &[0.0, 0.0]]), tol),
        "constant-rotation" => QuasiSemigroup::constant(real(&[&[0.0, -1.0], &[1.0, 0.0]]), tol),
        "evolution-noncommuting" => QuasiSemigroup::evolution(GeneratorFn::Airy, tol, horizon),
        "random-general" => QuasiSemigroup::constant(random_general(n, seed), tol),
        "random-normal" => QuasiSemigroup::constant(random_normal(n, seed).0, tol),
        "scaled-constant-a" => QuasiSemigroup::scaled(real(&[&[-1.0, 1.0], &[0.0, -2.0]]), RateFn::One, tol),
        "scaled-exponential-a" => {
            QuasiSemigroup::scaled(CMatrix::real_diag(&[0.5, -1.0]), RateFn::Exponential, tol)
        }
        "scaled-linear-a" => QuasiSemigroup::scaled(CMatrix::real_diag(&[1.0]), RateFn::Linear, tol),
        other => Err(Error::Catalog(other.to_string())),
    }
}
