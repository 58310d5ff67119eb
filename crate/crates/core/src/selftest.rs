// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

//! Built-in invariant suites behind `qsg selftest`.

use std::time::Instant;

use serde::Serialize;

use crate::numkernel::{eig, expm, quad_scalar, solve, svd, CMatrix, ToleranceContext, C64};
use crate::operators::{hyper_range_with_index, kernel, range, FiniteOperator};
use crate::sampling::{normal_from, random_general, random_normal, random_unitary, rng};
use crate::scenario::{run_scenario_with_threads, ScenarioConfig, CATALOG};
use crate::spectra::{exp_image, inclusion_defect, spectrum, SpectrumKind};

pub const KERNEL_DIMS: &[usize] = &[1, 2, 3, 5, 8, 16, 32, 64];

#[derive(Debug, Clone, Serialize)]
pub struct SelftestCheck {
    pub name: String,
    pub passed: bool,
    /// Largest measured error.
    pub worst: f64,
    pub limit: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<SelftestCheck>,
    pub elapsed_ms: u128,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&SelftestCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn measured(name: &str, worst: f64, limit: f64, detail: String) -> SelftestCheck {
    SelftestCheck {
        name: name.to_string(),
        passed: worst <= limit,
        worst,
        limit,
        detail,
    }
}

/// `expm` against `U e^{D} U*` on random normal matrices, relative error.
pub fn expm_vs_diagonalization() -> SelftestCheck {
    use rand::Rng;
    let mut worst = 0.0f64;
    let mut cases = 0;
    for (k, &n) in KERNEL_DIMS.iter().enumerate() {
        let mut r = rng(100 + k as u64);
        let u = random_unitary(n, &mut r);
        // scale 4 pushes the norm past the largest Pade threshold
        for scale in [0.5, 1.0, 4.0] {
            let eigs: Vec<C64> = (0..n)
                .map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-2.0..2.0)) * scale)
                .collect();
            let exp_eigs: Vec<C64> = eigs.iter().map(|z| z.exp()).collect();
            let oracle = normal_from(&u, &exp_eigs);
            let got = expm(&normal_from(&u, &eigs)).expect("expm");
            worst = worst.max((&got - &oracle).op_norm() / oracle.op_norm());
            cases += 1;
        }
    }
    measured("expm_vs_diagonalization", worst, 1e-10, format!("{cases} normal matrices, dim <= 64"))
}

/// Adaptive Simpson on cubics: exact up to rounding.
pub fn quadrature_cubics() -> SelftestCheck {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    use rand::Rng;
    for _ in 0..50 {
        let c: [f64; 4] = std::array::from_fn(|_| r.random_range(-3.0..3.0));
        let lo: f64 = r.random_range(-2.0..1.0);
        let hi = lo + r.random_range(0.1..3.0);
        let f = |x: f64| c[0] + x * (c[1] + x * (c[2] + x * c[3]));
        let anti = |x: f64| x * (c[0] + x * (c[1] / 2.0 + x * (c[2] / 3.0 + x * c[3] / 4.0)));
        let exact = anti(hi) - anti(lo);
        let got = quad_scalar(f, lo, hi, 1e-12).expect("cubic quadrature");
        worst = worst.max((got - exact).abs() / (1.0 + exact.abs()));
    }
    measured("quadrature_cubics", worst, 1e-12, "50 random cubics".into())
}

/// `max_i ||M v_i - mu_i v_i|| / ||M||` on general complex matrices.
pub fn eigen_residuals() -> SelftestCheck {
    let mut worst = 0.0f64;
    for (k, &n) in KERNEL_DIMS.iter().enumerate() {
        for m in [random_general(n, 200 + k as u64), random_normal(n, 300 + k as u64).0] {
            let norm = m.op_norm().max(f64::MIN_POSITIVE);
            for p in eig(&m).expect("eig") {
                let mv = m.mul_vec(&p.vector);
                let res: Vec<C64> = mv.iter().zip(&p.vector).map(|(a, b)| a - p.value * b).collect();
                worst = worst.max(crate::numkernel::vec_norm(&res) / norm);
            }
        }
    }
    measured("eigen_residuals", worst, 1e-8, "general and normal matrices, dim <= 64".into())
}

pub fn svd_reconstruction() -> SelftestCheck {
    let mut worst = 0.0f64;
    for (k, &n) in KERNEL_DIMS.iter().enumerate() {
        let m = random_general(n, 400 + k as u64);
        let d = svd(&m).expect("svd");
        worst = worst.max((&d.reconstruct() - &m).op_norm() / m.op_norm());
        worst = worst.max((&d.u.adjoint() * &d.u).max_abs_diff(&CMatrix::identity(n)));
    }
    measured("svd_reconstruction", worst, 1e-11, "dim <= 64".into())
}

pub fn lu_solve_residual() -> SelftestCheck {
    let mut worst = 0.0f64;
    for (k, &n) in KERNEL_DIMS.iter().enumerate() {
        let a = &random_general(n, 500 + k as u64) + &CMatrix::identity(n);
        let b = random_general(n, 600 + k as u64);
        let x = solve(&a, &b).expect("solve");
        worst = worst.max((&(&a * &x) - &b).op_norm() / (a.op_norm() * x.op_norm()));
    }
    measured("lu_solve_residual", worst, 1e-12, "dim <= 64".into())
}

/// `exp(s sigma(A)) = sigma(expm(sA))` both ways on normal matrices.
pub fn spectral_mapping() -> SelftestCheck {
    let tol = ToleranceContext::default();
    let mut worst = 0.0f64;
    for seed in 0..12u64 {
        let n = 1 + (seed as usize % 8);
        let (a, _) = random_normal(n, 700 + seed);
        for s in [0.5, 1.0, 2.0] {
            let sa = spectrum(&FiniteOperator::new(a.clone(), tol).unwrap(), SpectrumKind::Ordinary).unwrap();
            let r = FiniteOperator::new(expm(&a.scale_real(s)).unwrap(), tol).unwrap();
            let sr = spectrum(&r, SpectrumKind::Ordinary).unwrap();
            let img = exp_image(&sa, s);
            worst = worst.max(inclusion_defect(&img, &sr)).max(inclusion_defect(&sr, &img));
        }
    }
    measured("spectral_mapping", worst, tol.eig_tol, "12 normal matrices, s in {0.5, 1, 2}".into())
}

/// `dim N(T) + dim Rg(T) = n` on products of rank-deficient factors, and
/// hyper-range stationarity by power `n`.
pub fn rank_nullity_and_hyper_range() -> SelftestCheck {
    let mut worst = 0.0f64;
    let mut fails = 0;
    for seed in 0..12u64 {
        let n = 2 + (seed as usize % 7);
        let k = 1 + (seed as usize % (n - 1));
        let g1 = random_general(n, 800 + seed);
        let g2 = random_general(n, 900 + seed);
        let left = CMatrix::from_fn(n, k, |i, j| g1[(i, j)]);
        let right = CMatrix::from_fn(k, n, |i, j| g2[(i, j)]);
        let t = FiniteOperator::with_default_tol(&left * &right).unwrap();
        let (kd, rd) = (kernel(&t).dim(), range(&t).dim());
        if kd + rd != n || rd != k {
            fails += 1;
        }
        let h = hyper_range_with_index(&t);
        if h.stabilized_at > n {
            fails += 1;
        }
        if !h.subspace.is_zero() {
            let escape = h.subspace.reject(&(t.matrix() * h.subspace.basis()));
            worst = worst.max(escape.op_norm() / t.norm());
        }
    }
    let mut c = measured("rank_nullity_and_hyper_range", worst, 1e-8, format!("12 low-rank products, {fails} count mismatches"));
    c.passed &= fails == 0;
    c
}

/// Every catalog scenario with its default grid: no FAIL records.
pub fn catalog_scenarios() -> SelftestCheck {
    let mut fails = 0usize;
    let mut total = 0usize;
    let mut bad = Vec::new();
    for (name, _) in CATALOG {
        let cfg = ScenarioConfig::for_catalog(name);
        match run_scenario_with_threads(&cfg, None) {
            Ok(rep) => {
                total += rep.summary.total;
                if rep.summary.fail > 0 {
                    fails += rep.summary.fail;
                    bad.push(name.to_string());
                }
            }
            Err(e) => {
                fails += 1;
                bad.push(format!("{name}: {e}"));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{} scenarios, {total} records", CATALOG.len())
    } else {
        format!("failures in {}", bad.join(", "))
    };
    measured("catalog_scenarios", fails as f64, 0.0, detail)
}

pub fn run_selftest() -> SelftestReport {
    let start = Instant::now();
    let checks = vec![
        expm_vs_diagonalization(),
        quadrature_cubics(),
        eigen_residuals(),
        svd_reconstruction(),
        lu_solve_residual(),
        spectral_mapping(),
        rank_nullity_and_hyper_range(),
        catalog_scenarios(),
    ];
    SelftestReport {
        checks,
        elapsed_ms: start.elapsed().as_millis(),
    }
}
