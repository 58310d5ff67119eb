// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Spectra of finite operators and operations on finite spectral sets.
//!
//! Every variant starts from the eigenvalue clusters of `T` and then keeps
//! the points at which its own defining property fails for `lambda I - T`:
//! injectivity for the point spectrum, bounded-below for the approximate
//! spectrum, full range for the residual spectrum and semi-regularity for
//! the regular spectrum. In finite dimension the first four coincide and
//! the essential spectrum is empty; evaluating each path separately lets
//! callers cross-check that collapse.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{eigenvalues, svd_best_effort, C64};
use crate::operators::{is_bounded_below, is_semi_regular, kernel, range, FiniteOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Ordinary,
    Point,
    Approximate,
    Residual,
    Essential,
    Regular,
}

impl SpectrumKind {
    pub const ALL: [SpectrumKind; 6] = [
        SpectrumKind::Ordinary,
        SpectrumKind::Point,
        SpectrumKind::Approximate,
        SpectrumKind::Residual,
        SpectrumKind::Essential,
        SpectrumKind::Regular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpectrumKind::Ordinary => "ordinary",
            SpectrumKind::Point => "point",
            SpectrumKind::Approximate => "approximate",
            SpectrumKind::Residual => "residual",
            SpectrumKind::Essential => "essential",
            SpectrumKind::Regular => "regular",
        }
    }

    /// Standing remark on how this variant degenerates in finite dimension.
    pub fn finite_dim_note(self) -> &'static str {
        match self {
            SpectrumKind::Ordinary => "",
            SpectrumKind::Point | SpectrumKind::Approximate => "coincides with the ordinary spectrum in finite dimension",
            SpectrumKind::Residual => {
                "range not dense reduces to range not full; coincides with the ordinary spectrum in finite dimension"
            }
            SpectrumKind::Essential => "vacuous in finite dimension",
            SpectrumKind::Regular => "only the kernel-in-hyper-range clause is active in finite dimension",
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite multiset of complex points with positive multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSet {
    pub kind: SpectrumKind,
    pub points: Vec<(C64, usize)>,
    pub match_tol: f64,
    eig_tol: f64,
}

/// `max(eig_tol, 1e-6 * (1 + max |p|))`.
pub fn match_tolerance<'a>(points: impl IntoIterator<Item = &'a C64>, eig_tol: f64) -> f64 {
    let peak = points.into_iter().map(|z| z.norm()).fold(0.0, f64::max);
    eig_tol.max(1e-6 * (1.0 + peak))
}

impl SpectralSet {
    pub fn empty(kind: SpectrumKind, eig_tol: f64) -> Self {
        Self {
            kind,
            points: Vec::new(),
            match_tol: eig_tol,
            eig_tol,
        }
    }

    /// Clusters `points` (each with multiplicity one) at the set's matching
    /// tolerance.
    pub fn from_points(kind: SpectrumKind, points: &[C64], eig_tol: f64) -> Self {
        let weighted: Vec<(C64, usize)> = points.iter().map(|&p| (p, 1)).collect();
        Self::from_weighted(kind, &weighted, eig_tol)
    }

    fn from_weighted(kind: SpectrumKind, points: &[(C64, usize)], eig_tol: f64) -> Self {
        let match_tol = match_tolerance(points.iter().map(|(p, _)| p), eig_tol);
        let mut sorted = points.to_vec();
        sorted.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        // running weighted sums per cluster
        let mut clusters: Vec<(C64, usize)> = Vec::new();
        for (p, m) in sorted {
            let hit = clusters
                .iter_mut()
                .find(|(sum, count)| (*sum / *count as f64 - p).norm() <= match_tol);
            match hit {
                Some((sum, count)) => {
                    *sum += p * m as f64;
                    *count += m;
                }
                None => clusters.push((p * m as f64, m)),
            }
        }
        let points = clusters
            .into_iter()
            .map(|(sum, count)| (sum / count as f64, count))
            .collect();
        Self {
            kind,
            points,
            match_tol,
            eig_tol,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|(_, m)| m).sum()
    }

    pub fn values(&self) -> Vec<C64> {
        self.points.iter().map(|(p, _)| *p).collect()
    }

    pub fn eig_tol(&self) -> f64 {
        self.eig_tol
    }

    /// Same points under a different kind tag.
    pub fn relabel(mut self, kind: SpectrumKind) -> Self {
        self.kind = kind;
        self
    }

    fn filtered(&self, kind: SpectrumKind, keep: impl Fn(C64) -> bool) -> Self {
        let pts: Vec<(C64, usize)> = self.points.iter().copied().filter(|(p, _)| keep(*p)).collect();
        Self::from_weighted(kind, &pts, self.eig_tol)
    }
}

/// Spectrum of `t` of the requested kind.
pub fn spectrum(t: &FiniteOperator, kind: SpectrumKind) -> Result<SpectralSet> {
    let eig_tol = t.tol().eig_tol;
    if kind == SpectrumKind::Essential {
        return Ok(SpectralSet::empty(kind, eig_tol));
    }
    let eigs = eigenvalues(t.matrix())?;
    let ordinary = SpectralSet::from_points(SpectrumKind::Ordinary, &eigs, eig_tol);
    let n = t.dim();
    Ok(match kind {
        SpectrumKind::Ordinary => ordinary,
        SpectrumKind::Point => ordinary.filtered(kind, |l| kernel(&t.shifted(l)).dim() > 0),
        SpectrumKind::Approximate => ordinary.filtered(kind, |l| !is_bounded_below(&t.shifted(l)).flag),
        SpectrumKind::Residual => ordinary.filtered(kind, |l| range(&t.shifted(l)).dim() < n),
        SpectrumKind::Regular => ordinary.filtered(kind, |l| !is_semi_regular(&t.shifted(l)).flag),
        SpectrumKind::Essential => unreachable!(),
    })
}

/// `{ e^{lambda s} : lambda in S }` with colliding images merged.
pub fn exp_image(set: &SpectralSet, s: f64) -> SpectralSet {
    let mapped: Vec<(C64, usize)> = set.points.iter().map(|&(p, m)| ((p * s).exp(), m)).collect();
    SpectralSet::from_weighted(set.kind, &mapped, set.eig_tol)
}

/// `max_{p in S1} min_{q in S2} |p - q|`; zero when `S1` is empty and
/// infinite when only `S2` is.
pub fn inclusion_defect(s1: &SpectralSet, s2: &SpectralSet) -> f64 {
    s1.points
        .iter()
        .map(|(p, _)| {
            s2.points
                .iter()
                .map(|(q, _)| (p - q).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Tolerance at which `inclusion_defect(s1, s2)` counts as inclusion.
pub fn inclusion_tolerance(s1: &SpectralSet, s2: &SpectralSet) -> f64 {
    s1.match_tol.max(s2.match_tol)
}

pub fn is_included(s1: &SpectralSet, s2: &SpectralSet) -> bool {
    inclusion_defect(s1, s2) <= inclusion_tolerance(s1, s2)
}

/// Best unit-norm approximate eigenvector for `lambda`.
#[derive(Debug, Clone)]
pub struct ApproxEigenpair {
    pub lambda: C64,
    pub x: Vec<C64>,
    /// `||(lambda - T) x||`
    pub eta: f64,
}

impl ApproxEigenpair {
    /// Pair with a caller-supplied vector, normalized, and its residual.
    pub fn with_vector(t: &FiniteOperator, lambda: C64, x: &[C64]) -> Result<Self> {
        if x.len() != t.dim() {
            return Err(Error::Dimension(format!("vector of length {} for C^{}", x.len(), t.dim())));
        }
        let norm = crate::numkernel::vec_norm(x);
        if !(norm > 0.0) {
            return Err(Error::Domain("approximate eigenvector must be nonzero".into()));
        }
        let x: Vec<C64> = x.iter().map(|z| z / norm).collect();
        let eta = residual_norm(t, lambda, &x);
        Ok(Self { lambda, x, eta })
    }
}

pub fn residual_norm(t: &FiniteOperator, lambda: C64, x: &[C64]) -> f64 {
    let tx = t.matrix().mul_vec(x);
    let r: Vec<C64> = tx.iter().zip(x).map(|(a, b)| lambda * b - a).collect();
    crate::numkernel::vec_norm(&r)
}

/// Right singular vector of `lambda I - T` for its smallest singular value.
pub fn approx_eigenpair(t: &FiniteOperator, lambda: C64) -> ApproxEigenpair {
    let d = svd_best_effort(&t.shifted(lambda).into_matrix());
    let last = d.sigma.len() - 1;
    ApproxEigenpair {
        lambda,
        x: d.v.column(last),
        eta: d.sigma[last],
    }
}

/// Rectangle in the complex plane sampled on a `nx x ny` node lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub resolution: [usize; 2],
}

/// `sigma_min(lambda I - T)` on a grid; `values[j][i]` belongs to
/// `re_nodes[i] + i * im_nodes[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudospectrumGrid {
    pub re_nodes: Vec<f64>,
    pub im_nodes: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

fn nodes(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

pub fn pseudospectrum_grid(t: &FiniteOperator, grid: &GridSpec) -> Result<PseudospectrumGrid> {
    let [nx, ny] = grid.resolution;
    if nx < 2 || ny < 2 {
        return Err(Error::Domain(format!("grid resolution must be at least 2 per axis, got {nx}x{ny}")));
    }
    if grid.re.iter().chain(&grid.im).any(|v| !v.is_finite()) || grid.re[0] > grid.re[1] || grid.im[0] > grid.im[1] {
        return Err(Error::Domain("grid rectangle must be finite with lo <= hi".into()));
    }
    let re_nodes = nodes(grid.re[0], grid.re[1], nx);
    let im_nodes = nodes(grid.im[0], grid.im[1], ny);
    let values = im_nodes
        .par_iter()
        .map(|&y| {
            re_nodes
                .iter()
                .map(|&x| approx_eigenpair(t, C64::new(x, y)).eta)
                .collect()
        })
        .collect();
    Ok(PseudospectrumGrid {
        re_nodes,
        im_nodes,
        values,
    })
}
