// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Quasi-semigroups of matrices, their spectra, and numerical checks of the
//! identities and spectral inclusions relating a quasi-semigroup to its
//! generator.

pub mod error;
pub mod numkernel;
pub mod operators;
pub mod qsg;
pub mod spectra;
pub mod verifier;
pub mod sampling;
pub mod scenario;
pub mod selftest;

pub use error::{Error, Result};
