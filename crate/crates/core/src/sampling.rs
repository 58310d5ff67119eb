// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random matrices. The same seed reproduces the same matrix bit for
//! bit on every platform (ChaCha stream, no platform-dependent math).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numkernel::{inner, vec_norm, CMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Unitary matrix from modified Gram-Schmidt on a complex Gaussian sample.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let p = inner(c, &v);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= p * ci;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            cols.push(v.iter().map(|z| z / norm).collect());
        }
    }
    CMatrix::from_columns(n, &cols)
}

/// Normal matrix `U diag(eigs) U*` together with its eigenvalues.
/// Eigenvalues have real part in [-1, 1] and imaginary part in [-2, 2].
pub fn random_normal(n: usize, seed: u64) -> (CMatrix, Vec<C64>) {
    let mut r = rng(seed);
    let eigs: Vec<C64> = (0..n)
        .map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-2.0..2.0)))
        .collect();
    let u = random_unitary(n, &mut r);
    (normal_from(&u, &eigs), eigs)
}

pub fn normal_from(u: &CMatrix, eigs: &[C64]) -> CMatrix {
    &(u * &CMatrix::diag(eigs)) * &u.adjoint()
}

/// Complex Gaussian matrix with entries of variance `1/n`.
pub fn random_general(n: usize, seed: u64) -> CMatrix {
    let mut r = rng(seed);
    let scale = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |_, _| gaussian(&mut r) * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_reproduce_bit_for_bit() {
        assert_eq!(random_general(5, 11), random_general(5, 11));
        assert_eq!(random_normal(4, 3).0, random_normal(4, 3).0);
        assert_ne!(random_general(5, 11), random_general(5, 12));
    }

    #[test]
    fn unitary_is_orthonormal() {
        let u = random_unitary(6, &mut rng(1));
        assert!((&u.adjoint() * &u).max_abs_diff(&CMatrix::identity(6)) < 1e-13);
    }
}
