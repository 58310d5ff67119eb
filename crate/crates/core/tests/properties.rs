// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use qsg_core::numkernel::{expm, CMatrix, ToleranceContext, C64};
use qsg_core::operators::{
    hyper_range_with_index, invariance_defect, is_bounded_below, kernel, quotient_operator, range, range_power_chain,
    subspace_contained, FiniteOperator,
};
use qsg_core::qsg::QuasiSemigroup;
use qsg_core::sampling::{random_general, random_normal};
use qsg_core::scenario::{build_catalog, emit_report, parse_report, run_scenario_with_threads, ScenarioConfig, CATALOG};
use qsg_core::spectra::{approx_eigenpair, exp_image, inclusion_defect, spectrum, SpectrumKind};
use qsg_core::verifier::{check_identity_left, check_identity_right, Verdict};

fn op(m: CMatrix) -> FiniteOperator {
    FiniteOperator::with_default_tol(m).unwrap()
}

/// Generic matrix of rank at most `k`, times a shift so eigenvalue 0 is
/// usually defective as well.
fn low_rank(n: usize, k: usize, seed: u64) -> CMatrix {
    let a = random_general(n, seed);
    let mask: Vec<f64> = (0..n).map(|i| if i < k { 1.0 } else { 0.0 }).collect();
    &(&a * &CMatrix::real_diag(&mask)) * &random_general(n, seed ^ 0x5eed)
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn expm_adds_on_commuting_pairs(n in 1usize..7, seed in any::<u64>(), c1 in -1.0f64..1.0, c2 in -0.5f64..0.5) {
        let a = random_general(n, seed);
        // any polynomial in A commutes with A
        let mut b = a.scale_real(c1);
        b.axpy(C64::new(c2, 0.0), &(&a * &a));
        let lhs = &expm(&a).unwrap() * &expm(&b).unwrap();
        let rhs = expm(&(&a + &b)).unwrap();
        let scale = (a.op_norm() + b.op_norm()).exp();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-11 * scale);
    }

    #[test]
    fn cocycle_law_on_catalog(entry in 0usize..CATALOG.len(), t in 0.0f64..1.0, s in 0.0f64..1.0, r in 0.0f64..1.0) {
        let (name, _) = CATALOG[entry];
        let q = build_catalog(name, None, 3, ToleranceContext::default(), 3.0).unwrap();
        let lhs = q.propagator(t, s + r).unwrap();
        let rhs = &q.propagator(t + r, s).unwrap() * &q.propagator(t, r).unwrap();
        let limit = 1e-8 * (1.0 + lhs.op_norm());
        prop_assert!(lhs.max_abs_diff(&rhs) <= limit, "{name}: {}", lhs.max_abs_diff(&rhs));
    }

    #[test]
    fn spectral_mapping_both_directions(n in 1usize..7, seed in any::<u64>(), s in 0.1f64..2.0) {
        let (a, _) = random_normal(n, seed);
        let tol = ToleranceContext::default();
        let sa = spectrum(&op(a.clone()), SpectrumKind::Ordinary).unwrap();
        let sr = spectrum(&op(expm(&a.scale_real(s)).unwrap()), SpectrumKind::Ordinary).unwrap();
        let mapped = exp_image(&sa, s);
        prop_assert!(inclusion_defect(&mapped, &sr) <= tol.eig_tol);
        prop_assert!(inclusion_defect(&sr, &mapped) <= tol.eig_tol);
    }

    #[test]
    fn rank_nullity(n in 1usize..8, k in 0usize..8, seed in any::<u64>()) {
        let k = k.min(n);
        let t = op(low_rank(n, k, seed));
        let (ker, rg) = (kernel(&t), range(&t));
        prop_assert_eq!(ker.dim() + rg.dim(), n);
        prop_assert!(rg.dim() <= k);
        // kernel vectors really are annihilated
        if !ker.is_zero() {
            prop_assert!((t.matrix() * ker.basis()).op_norm() <= 1e-8 * (1.0 + t.norm()));
        }
    }

    #[test]
    fn hyper_range_is_invariant_and_stationary(n in 1usize..7, k in 0usize..7, seed in any::<u64>()) {
        let t = op(low_rank(n, k.min(n), seed));
        let hr = hyper_range_with_index(&t);
        prop_assert!(hr.stabilized_at <= n.max(1));
        prop_assert!(invariance_defect(&t, &hr.subspace).unwrap() <= 1e-7 * (1.0 + t.norm()));
        let chain = range_power_chain(&t, n + 2);
        let tail = &chain[hr.stabilized_at - 1..];
        for later in tail {
            prop_assert_eq!(later.dim(), hr.subspace.dim());
            prop_assert!(subspace_contained(later, &hr.subspace, 1e-7).unwrap().flag);
            prop_assert!(subspace_contained(&hr.subspace, later, 1e-7).unwrap().flag);
        }
    }

    #[test]
    fn quotient_bounded_below_iff_trivial_kernel(n in 1usize..7, k in 0usize..7, seed in any::<u64>(), z in -1.0f64..1.0) {
        let t = op(low_rank(n, k.min(n), seed));
        let m = hyper_range_with_index(&t.shifted(C64::new(z, 0.0))).subspace;
        let quot = quotient_operator(&t, &m).unwrap();
        let bb = is_bounded_below(&quot);
        prop_assert_eq!(bb.flag, kernel(&quot).is_zero() || quot.dim() == 0);
    }

    #[test]
    fn identities_hold_on_constant_backends(
        n in 1usize..6,
        seed in any::<u64>(),
        lre in -2.0f64..3.0,
        lim in -2.0f64..2.0,
        t in 0.0f64..2.0,
        s in 0.0f64..2.0,
    ) {
        let (a, _) = random_normal(n, seed);
        let q = QuasiSemigroup::constant(a, ToleranceContext::default()).unwrap();
        let lambda = C64::new(lre, lim);
        let right = check_identity_right(&q, lambda, t, s).unwrap();
        let left = check_identity_left(&q, lambda, t, s).unwrap();
        prop_assert_eq!(right.verdict, Verdict::Pass);
        prop_assert_eq!(left.verdict, Verdict::Pass);
        prop_assert!((right.residual - left.residual).abs() <= 1e-9);
    }

    #[test]
    fn approx_eta_is_distance_to_spectrum_for_normal(n in 1usize..7, seed in any::<u64>(), re in -2.0f64..2.0, im in -3.0f64..3.0) {
        let (a, eigs) = random_normal(n, seed);
        let lambda = C64::new(re, im);
        let dist = eigs.iter().map(|mu| (lambda - mu).norm()).fold(f64::INFINITY, f64::min);
        let pair = approx_eigenpair(&op(a), lambda);
        prop_assert!((pair.eta - dist).abs() <= 1e-10 * (1.0 + dist));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn reports_round_trip_and_repeat(seed in any::<u64>(), dim in 1usize..5) {
        let mut cfg = ScenarioConfig::for_catalog("random-general");
        cfg.backend.dim = Some(dim);
        cfg.seed = seed;
        let a = run_scenario_with_threads(&cfg, Some(1)).unwrap();
        let b = run_scenario_with_threads(&cfg, Some(3)).unwrap();
        let json = emit_report(&a, qsg_core::scenario::Format::Json);
        prop_assert_eq!(&json, &emit_report(&b, qsg_core::scenario::Format::Json));
        prop_assert_eq!(parse_report(&json).unwrap(), a.clone());
        let s = a.summary;
        prop_assert_eq!(s.pass + s.fail + s.report_only, a.records.len());
        prop_assert_eq!(s.fail, 0);
    }
}
