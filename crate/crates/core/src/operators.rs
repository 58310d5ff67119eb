// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Subspace-level analysis of finite operators: kernel, range, hyper-range,
//! Fredholm indices, semi-regularity, quotients by invariant subspaces and
//! the bounded-below test.
//!
//! Rank decisions compare singular values against `rank_tol * sigma_max`
//! (or `rank_tol` itself when the operator is zero). A shifted operator
//! `zI - T` also remembers the size of `z` and `T`, so a shift that cancels
//! `T` almost exactly still reads as rank-deficient. Quotients `X/M` are
//! represented on the orthogonal complement of `M`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{svd, svd_best_effort, CMatrix, ToleranceContext, C64};

/// Square matrix together with the tolerances used to judge it.
#[derive(Debug, Clone)]
pub struct FiniteOperator {
    matrix: CMatrix,
    tol: ToleranceContext,
    /// Reference magnitude for rank decisions, zero unless shifted.
    scale: f64,
}

impl FiniteOperator {
    pub fn new(matrix: CMatrix, tol: ToleranceContext) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "operator matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { matrix, tol, scale: 0.0 })
    }

    pub fn with_default_tol(matrix: CMatrix) -> Result<Self> {
        Self::new(matrix, ToleranceContext::default())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn tol(&self) -> &ToleranceContext {
        &self.tol
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn norm(&self) -> f64 {
        self.matrix.op_norm()
    }

    /// Same tolerances, different matrix.
    pub fn derive(&self, matrix: CMatrix) -> Result<Self> {
        let mut out = Self::new(matrix, self.tol)?;
        out.scale = self.scale;
        Ok(out)
    }

    /// `z I - T`.
    pub fn shifted(&self, z: C64) -> Self {
        Self {
            matrix: self.matrix.shifted_neg(z),
            tol: self.tol,
            scale: self.scale.max(self.matrix.norm_fro()).max(z.norm()),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        Self {
            matrix: self.matrix.powi(n),
            tol: self.tol,
            scale: self.scale.powi(n as i32),
        }
    }

    /// Singular values at or below this count as zero.
    pub fn cutoff(&self, sigma_max: f64) -> f64 {
        rank_cutoff(sigma_max.max(self.scale), self.tol.rank_tol)
    }
}

pub fn rank_cutoff(sigma_max: f64, rank_tol: f64) -> f64 {
    if sigma_max > 0.0 {
        rank_tol * sigma_max
    } else {
        rank_tol
    }
}

/// Subspace of `C^n` held as an orthonormal basis (possibly empty).
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            basis: CMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            basis: CMatrix::identity(n),
        }
    }

    /// Span of the columns of `spanning`, orthonormalized; columns whose
    /// singular value falls below `rank_tol` relative to the largest are
    /// discarded.
    pub fn span(spanning: &CMatrix, rank_tol: f64) -> Result<Self> {
        let n = spanning.rows();
        if spanning.cols() == 0 {
            return Ok(Self::zero(n));
        }
        let d = svd(spanning)?;
        let cut = rank_cutoff(d.sigma_max(), rank_tol);
        let keep: Vec<usize> = (0..d.sigma.len()).filter(|&j| d.sigma[j] > cut).collect();
        Ok(Self {
            basis: d.u.select_columns(&keep),
        })
    }

    pub fn from_orthonormal(basis: CMatrix) -> Result<Self> {
        let k = basis.cols();
        let gram = &basis.adjoint() * &basis;
        let dev = gram.max_abs_diff(&CMatrix::identity(k));
        if dev > 1e-10 {
            return Err(Error::Domain(format!(
                "basis columns are not orthonormal (deviation {dev:e})"
            )));
        }
        Ok(Self { basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * &self.basis.adjoint()
    }

    /// `(I - P) X` for a block of column vectors `x`.
    pub fn reject(&self, x: &CMatrix) -> CMatrix {
        if self.is_zero() {
            return x.clone();
        }
        let coeffs = &self.basis.adjoint() * x;
        x - &(&self.basis * &coeffs)
    }

    pub fn orthogonal_complement(&self) -> Self {
        let n = self.ambient_dim();
        if self.is_zero() {
            return Self::full(n);
        }
        if self.dim() == n {
            return Self::zero(n);
        }
        let comp = &CMatrix::identity(n) - &self.projector();
        // singular values of a projector are 0 or 1
        let d = svd_best_effort(&comp);
        let keep: Vec<usize> = (0..d.sigma.len()).filter(|&j| d.sigma[j] > 0.5).collect();
        Self {
            basis: d.u.select_columns(&keep),
        }
    }
}

/// Null space: right singular vectors with singular value at or below the
/// rank cutoff.
pub fn kernel(t: &FiniteOperator) -> Subspace {
    let n = t.dim();
    if n == 0 {
        return Subspace::zero(0);
    }
    let d = svd_best_effort(t.matrix());
    let cut = t.cutoff(d.sigma_max());
    let keep: Vec<usize> = (0..n).filter(|&j| d.sigma[j] <= cut).collect();
    Subspace {
        basis: d.v.select_columns(&keep),
    }
}

/// Column space: left singular vectors above the rank cutoff.
pub fn range(t: &FiniteOperator) -> Subspace {
    let n = t.dim();
    if n == 0 {
        return Subspace::zero(0);
    }
    let d = svd_best_effort(t.matrix());
    let cut = t.cutoff(d.sigma_max());
    let keep: Vec<usize> = (0..n).filter(|&j| d.sigma[j] > cut).collect();
    Subspace {
        basis: d.u.select_columns(&keep),
    }
}

/// Successive images `Rg(T^k)` for `k = 1..=max_power`, each obtained as the
/// range of `T` applied to an orthonormal basis of the previous image.
pub fn range_power_chain(t: &FiniteOperator, max_power: usize) -> Vec<Subspace> {
    let n = t.dim();
    let cut = t.cutoff(t.norm());
    let mut out = Vec::with_capacity(max_power);
    let mut current = Subspace::full(n);
    for _ in 0..max_power {
        let image = t.matrix() * current.basis();
        current = if image.cols() == 0 {
            Subspace::zero(n)
        } else {
            let d = svd_best_effort(&image);
            let keep: Vec<usize> = (0..d.sigma.len()).filter(|&j| d.sigma[j] > cut).collect();
            Subspace {
                basis: d.u.select_columns(&keep),
            }
        };
        out.push(current.clone());
    }
    out
}

/// Hyper-range with the power at which the chain of ranges became stationary.
#[derive(Debug, Clone)]
pub struct HyperRange {
    pub subspace: Subspace,
    pub stabilized_at: usize,
}

pub fn hyper_range_with_index(t: &FiniteOperator) -> HyperRange {
    let n = t.dim();
    let chain = range_power_chain(t, n.max(1));
    let mut prev_dim = n;
    for (idx, sub) in chain.iter().enumerate() {
        if sub.dim() == prev_dim {
            return HyperRange {
                subspace: sub.clone(),
                stabilized_at: idx + 1,
            };
        }
        prev_dim = sub.dim();
    }
    HyperRange {
        subspace: chain.last().cloned().unwrap_or_else(|| Subspace::zero(n)),
        stabilized_at: n.max(1),
    }
}

pub fn hyper_range(t: &FiniteOperator) -> Subspace {
    hyper_range_with_index(t).subspace
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Containment {
    pub flag: bool,
    pub defect: f64,
}

/// `U ⊆ V` measured as `||(I - P_V) B_U||`.
pub fn subspace_contained(u: &Subspace, v: &Subspace, tol: f64) -> Result<Containment> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::Dimension(format!(
            "subspaces live in C^{} and C^{}",
            u.ambient_dim(),
            v.ambient_dim()
        )));
    }
    if u.is_zero() {
        return Ok(Containment { flag: true, defect: 0.0 });
    }
    let defect = v.reject(u.basis()).op_norm();
    Ok(Containment {
        flag: defect <= tol,
        defect,
    })
}

/// Semi-regularity in finite dimension: ranges are closed, so only
/// `N(T) ⊆ Rg^∞(T)` is tested.
pub fn is_semi_regular(t: &FiniteOperator) -> Containment {
    let ker = kernel(t);
    let hyper = hyper_range(t);
    subspace_contained(&ker, &hyper, t.tol().rank_tol).expect("same ambient space")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FredholmData {
    pub alpha: usize,
    pub beta: usize,
    pub is_fredholm: bool,
}

pub fn fredholm_data(t: &FiniteOperator) -> FredholmData {
    let alpha = kernel(t).dim();
    let beta = t.dim() - range(t).dim();
    debug_assert_eq!(alpha, beta, "rank-nullity");
    FredholmData {
        alpha,
        beta,
        is_fredholm: true,
    }
}

/// `||(I - P_M) T B_M||`.
pub fn invariance_defect(t: &FiniteOperator, m: &Subspace) -> Result<f64> {
    if m.ambient_dim() != t.dim() {
        return Err(Error::Dimension(format!(
            "subspace of C^{} for an operator on C^{}",
            m.ambient_dim(),
            t.dim()
        )));
    }
    if m.is_zero() {
        return Ok(0.0);
    }
    Ok(m.reject(&(t.matrix() * m.basis())).op_norm())
}

/// Induced map on `X/M`, realized as the compression `Q* T Q` onto an
/// orthonormal basis `Q` of the orthogonal complement of `M`.
pub fn quotient_operator(t: &FiniteOperator, m: &Subspace) -> Result<FiniteOperator> {
    let defect = invariance_defect(t, m)?;
    let allowed = t.cutoff(t.norm());
    if defect > allowed {
        return Err(Error::NotInvariant { defect, allowed });
    }
    let q = m.orthogonal_complement();
    let compressed = &(&q.basis().adjoint() * t.matrix()) * q.basis();
    t.derive(compressed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundedBelow {
    pub flag: bool,
    /// Smallest singular value; absent on the zero-dimensional space, where
    /// the operator is vacuously bounded below.
    pub sigma_min: Option<f64>,
}

pub fn is_bounded_below(t: &FiniteOperator) -> BoundedBelow {
    if t.dim() == 0 {
        return BoundedBelow {
            flag: true,
            sigma_min: None,
        };
    }
    let s = crate::numkernel::singular_values(t.matrix());
    let smax = s[0];
    let smin = *s.last().unwrap();
    BoundedBelow {
        flag: smax > 0.0 && smin > t.cutoff(smax),
        sigma_min: Some(smin),
    }
}
