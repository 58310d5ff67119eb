// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Quasi-semigroups `R(t, s)` built from three backends (a fixed semigroup,
//! a time-rescaled semigroup and the propagator of a nonautonomous linear
//! ODE) plus checks of their axioms and generator relations.

mod checks;
mod family;

pub use checks::{
    check_averaging, check_axioms, check_commutation, check_derivative, check_integral_equation,
    continuity_profile, estimate_generator, generator_convergence, AveragingCheck, AxiomResidual,
    DerivativeCheck, GeneratorConvergence, GeneratorEstimate, CONTINUITY_EPS, DEFAULT_GENERATOR_STEP,
};
pub use family::{Backend, GeneratorFn, QuasiSemigroup, RateFn, DEFAULT_HORIZON};
pub(crate) use family::check_time;
