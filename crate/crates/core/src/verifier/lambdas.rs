// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use crate::error::Result;
use crate::numkernel::C64;
use crate::operators::FiniteOperator;
use crate::spectra::{spectrum, SpectrumKind};

/// Eigenvalues, their pairwise midpoints, `max|eig| + 1` and `0`, sorted by
/// real then imaginary part with near-duplicates removed.
pub fn default_lambdas(a: &FiniteOperator) -> Result<Vec<C64>> {
    let eigs = spectrum(a, SpectrumKind::Ordinary)?.values();
    let mut out = eigs.clone();
    for (i, p) in eigs.iter().enumerate() {
        for q in &eigs[i + 1..] {
            out.push((p + q) * 0.5);
        }
    }
    let radius = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    out.push(C64::new(radius + 1.0, 0.0));
    out.push(C64::new(0.0, 0.0));
    Ok(dedup_sorted(out))
}

pub(crate) fn dedup_sorted(mut points: Vec<C64>) -> Vec<C64> {
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<C64> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| (p - q).norm() <= 1e-12 * (1.0 + p.norm())) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::CMatrix;

    #[test]
    fn diagonal_sampling() {
        let a = FiniteOperator::with_default_tol(CMatrix::real_diag(&[1.0, 2.0])).unwrap();
        let l = default_lambdas(&a).unwrap();
        let re: Vec<f64> = l.iter().map(|z| z.re).collect();
        assert_eq!(l.len(), 5);
        for (x, y) in re.iter().zip([0.0, 1.0, 1.5, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_not_duplicated() {
        let a = FiniteOperator::with_default_tol(CMatrix::zeros(2, 2)).unwrap();
        let l = default_lambdas(&a).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l[0], C64::new(0.0, 0.0));
        assert_eq!(l[1], C64::new(1.0, 0.0));
    }
}
