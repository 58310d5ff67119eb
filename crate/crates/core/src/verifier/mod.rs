// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Machine checks of the resolvent-type identities and spectral inclusions
//! relating `A(t)` and `R(t, s)`.

mod claims;
mod identities;
mod inclusions;
mod lambdas;
mod record;
mod regular;

pub use claims::{
    claim_description, evaluate_t, evaluate_ts, evaluate_tsr, is_known_claim, LambdaChoice, Plan, CLAIMS,
};
pub use identities::{
    check_identity_left, check_identity_right, check_power_identity, check_power_identity_left,
    check_semigroup_identity, d_lambda, d_lambda_on, DLambda, IdentityContext, Orbit,
};
pub use inclusions::{
    check_approx_propagation, check_kernel_inclusion, check_kernel_power_inclusion, check_range_inclusion,
    check_range_power_inclusion, check_spectral_inclusion, propagation_constant, spectral_claim_id,
};
pub use lambdas::default_lambdas;
pub use record::{complex_pair, lossless_f64, record_order, Power, RecordParams, Verdict, VerificationRecord};
pub use regular::{check_regular_inclusion, proof_path, ProofPathDiagnostic, RegularInclusion, EXPONENT_NOTE};
