// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{expm, quad_scalar, CMatrix, ToleranceContext, C64};
use crate::operators::FiniteOperator;

/// Positive time-rate functions `a(u)` for the scaled backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateFn {
    /// `a(u) = 1`
    One,
    /// `a(u) = 1 + u`
    Linear,
    /// `a(u) = e^u`
    Exponential,
}

impl RateFn {
    pub fn eval(self, u: f64) -> f64 {
        match self {
            RateFn::One => 1.0,
            RateFn::Linear => 1.0 + u,
            RateFn::Exponential => u.exp(),
        }
    }

    pub fn is_constant(self) -> bool {
        matches!(self, RateFn::One)
    }

    pub fn name(self) -> &'static str {
        match self {
            RateFn::One => "one",
            RateFn::Linear => "linear",
            RateFn::Exponential => "exponential",
        }
    }
}

/// Time-dependent generators `t -> A(t)` for the evolution backend.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorFn {
    /// `[[0, 1], [t, 0]]`; values at different times do not commute.
    Airy,
    /// `[[0, t], [0, 0]]`
    UpperRamp,
    /// `diag(t, -t)`
    DiagonalRamp,
    /// Time-independent `A`.
    Frozen(CMatrix),
}

impl GeneratorFn {
    pub fn dim(&self) -> usize {
        match self {
            GeneratorFn::Frozen(a) => a.rows(),
            _ => 2,
        }
    }

    pub fn eval(&self, t: f64) -> CMatrix {
        let r = |x: f64| C64::new(x, 0.0);
        match self {
            GeneratorFn::Airy => CMatrix::from_rows(&[vec![r(0.0), r(1.0)], vec![r(t), r(0.0)]]).expect("2x2"),
            GeneratorFn::UpperRamp => CMatrix::from_rows(&[vec![r(0.0), r(t)], vec![r(0.0), r(0.0)]]).expect("2x2"),
            GeneratorFn::DiagonalRamp => CMatrix::real_diag(&[t, -t]),
            GeneratorFn::Frozen(a) => a.clone(),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, GeneratorFn::Frozen(_))
    }

    /// Whether `A(t)` and `A(t')` commute for all times.
    pub fn commutes(&self) -> bool {
        !matches!(self, GeneratorFn::Airy)
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorFn::Airy => "airy",
            GeneratorFn::UpperRamp => "upper-ramp",
            GeneratorFn::DiagonalRamp => "diagonal-ramp",
            GeneratorFn::Frozen(_) => "frozen",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Backend {
    /// `R(t, s) = e^{sA}`
    Constant { a: CMatrix },
    /// `R(t, s) = e^{(g(t+s) - g(t)) A}` with `g(t) = int_0^t a(u) du`.
    Scaled { a: CMatrix, rate: RateFn },
    /// `R(t, s) = U(t+s, t)` for `dU/ds = A(t+s) U`, `U = I` at `s = 0`,
    /// integrated with fixed-step classical RK4.
    Evolution { generator: GeneratorFn, step: f64 },
}

/// A two-parameter family `(t, s) -> R(t, s)` on `C^n`.
#[derive(Debug, Clone)]
pub struct QuasiSemigroup {
    dim: usize,
    backend: Backend,
    tol: ToleranceContext,
    a_norm: f64,
}

/// Default time span over which the evolution step is calibrated.
pub const DEFAULT_HORIZON: f64 = 4.0;
const MAX_RK4_STEPS: usize = 1 << 22;
const BOUND_SAMPLES: usize = 64;

impl QuasiSemigroup {
    pub fn constant(a: CMatrix, tol: ToleranceContext) -> Result<Self> {
        check_generator_matrix(&a)?;
        let a_norm = a.op_norm();
        Ok(Self {
            dim: a.rows(),
            backend: Backend::Constant { a },
            tol,
            a_norm,
        })
    }

    pub fn scaled(a: CMatrix, rate: RateFn, tol: ToleranceContext) -> Result<Self> {
        check_generator_matrix(&a)?;
        let a_norm = a.op_norm();
        Ok(Self {
            dim: a.rows(),
            backend: Backend::Scaled { a, rate },
            tol,
            a_norm,
        })
    }

    /// Evolution backend whose RK4 step is the largest `0.25 / 2^k` for which
    /// halving the step moves `R(0, horizon)` by at most `ode_tol`.
    pub fn evolution(generator: GeneratorFn, tol: ToleranceContext, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!("calibration horizon must be positive, got {horizon}")));
        }
        let mut step = 0.25;
        let mut coarse = rk4_propagate(&generator, 0.0, horizon, steps_for(horizon, step));
        loop {
            let fine = rk4_propagate(&generator, 0.0, horizon, steps_for(horizon, step / 2.0));
            let change = (&fine - &coarse).op_norm();
            if change <= tol.ode_tol {
                break;
            }
            step /= 2.0;
            if steps_for(horizon, step) > MAX_RK4_STEPS {
                return Err(Error::Convergence {
                    what: "evolution step calibration",
                    residual: change,
                });
            }
            coarse = fine;
        }
        Self::evolution_with_step(generator, step, tol)
    }

    pub fn evolution_with_step(generator: GeneratorFn, step: f64, tol: ToleranceContext) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Domain(format!("evolution step must be positive, got {step}")));
        }
        let dim = generator.dim();
        Ok(Self {
            dim,
            backend: Backend::Evolution { generator, step },
            tol,
            a_norm: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn tol(&self) -> &ToleranceContext {
        &self.tol
    }

    /// True when `A(t)` does not depend on `t`.
    pub fn has_constant_generator(&self) -> bool {
        match &self.backend {
            Backend::Constant { .. } => true,
            Backend::Scaled { rate, .. } => rate.is_constant(),
            Backend::Evolution { generator, .. } => generator.is_constant(),
        }
    }

    /// True when every `A(t)` commutes with every `R(t0, s0)`.
    pub fn generators_commute(&self) -> bool {
        match &self.backend {
            Backend::Constant { .. } | Backend::Scaled { .. } => true,
            Backend::Evolution { generator, .. } => generator.commutes(),
        }
    }

    /// Absolute tolerance for integrals of `R(t, .)`; the evolution backend is
    /// only accurate to `ode_tol`, so its integrands are not resolved beyond it.
    pub fn integrand_tol(&self) -> f64 {
        match self.backend {
            Backend::Evolution { .. } => self.tol.quad_tol.max(self.tol.ode_tol),
            _ => self.tol.quad_tol,
        }
    }

    pub fn descriptor(&self) -> String {
        match &self.backend {
            Backend::Constant { .. } => format!("constant(n={})", self.dim),
            Backend::Scaled { rate, .. } => format!("scaled(n={}, a={})", self.dim, rate.name()),
            Backend::Evolution { generator, step } => {
                format!("evolution(n={}, A={}, step={step})", self.dim, generator.name())
            }
        }
    }

    fn operator(&self, m: CMatrix) -> FiniteOperator {
        FiniteOperator::new(m, self.tol).expect("square by construction")
    }

    /// Raw matrix `R(t, s)`.
    pub fn propagator(&self, t: f64, s: f64) -> Result<CMatrix> {
        check_time("t", t)?;
        check_time("s", s)?;
        if s == 0.0 {
            return Ok(CMatrix::identity(self.dim));
        }
        match &self.backend {
            Backend::Constant { a } => expm(&a.scale_real(s)),
            Backend::Scaled { a, rate } => {
                let inc = self.rate_integral(*rate, t, t + s)?;
                expm(&a.scale_real(inc))
            }
            Backend::Evolution { generator, step } => {
                Ok(rk4_propagate(generator, t, s, steps_for(s, *step)))
            }
        }
    }

    /// `R(t, s)` as an operator.
    pub fn eval(&self, t: f64, s: f64) -> Result<FiniteOperator> {
        Ok(self.operator(self.propagator(t, s)?))
    }

    pub fn generator_matrix(&self, t: f64) -> CMatrix {
        match &self.backend {
            Backend::Constant { a } => a.clone(),
            Backend::Scaled { a, rate } => a.scale_real(rate.eval(t)),
            Backend::Evolution { generator, .. } => generator.eval(t),
        }
    }

    /// Analytic generator `A(t)`.
    pub fn generator(&self, t: f64) -> FiniteOperator {
        self.operator(self.generator_matrix(t))
    }

    fn rate_integral(&self, rate: RateFn, lo: f64, hi: f64) -> Result<f64> {
        quad_scalar(|u| rate.eval(u), lo, hi, self.tol.quad_tol)
    }

    /// `g(tau)`; the identity for the constant backend.
    pub fn time_change(&self, tau: f64) -> Result<f64> {
        match &self.backend {
            Backend::Scaled { rate, .. } => self.rate_integral(*rate, 0.0, tau),
            _ => Ok(tau),
        }
    }

    /// Growth bound `M(tau)` with `||R(t, s)|| <= M(t + s)`.
    pub fn bound(&self, tau: f64) -> Result<f64> {
        check_time("tau", tau)?;
        match &self.backend {
            Backend::Constant { .. } => Ok((self.a_norm * tau).exp()),
            Backend::Scaled { .. } => {
                let g = self.time_change(tau)?;
                Ok((self.a_norm * tau.max(g)).exp())
            }
            Backend::Evolution { generator, .. } => {
                let peak = (0..=BOUND_SAMPLES)
                    .map(|k| generator.eval(tau * k as f64 / BOUND_SAMPLES as f64).op_norm())
                    .fold(0.0, f64::max);
                Ok((tau * peak).exp())
            }
        }
    }
}

impl fmt::Display for QuasiSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

fn check_generator_matrix(a: &CMatrix) -> Result<()> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Dimension(format!(
            "generator must be a non-empty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("generator"));
    }
    Ok(())
}

pub(crate) fn check_time(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be a finite non-negative time, got {v}")))
    }
}

fn steps_for(span: f64, step: f64) -> usize {
    ((span / step).ceil() as usize).max(1)
}

/// `U(t + s, t)` by `steps` equal RK4 steps.
fn rk4_propagate(generator: &GeneratorFn, t: f64, s: f64, steps: usize) -> CMatrix {
    let n = generator.dim();
    let h = s / steps as f64;
    let mut u = CMatrix::identity(n);
    for k in 0..steps {
        let tau = t + h * k as f64;
        let a0 = generator.eval(tau);
        let am = generator.eval(tau + 0.5 * h);
        let a1 = generator.eval(tau + h);
        let k1 = &a0 * &u;
        let mut tmp = u.clone();
        tmp.axpy(C64::new(0.5 * h, 0.0), &k1);
        let k2 = &am * &tmp;
        let mut tmp = u.clone();
        tmp.axpy(C64::new(0.5 * h, 0.0), &k2);
        let k3 = &am * &tmp;
        let mut tmp = u.clone();
        tmp.axpy(C64::new(h, 0.0), &k3);
        let k4 = &a1 * &tmp;
        u.axpy(C64::new(h / 6.0, 0.0), &k1);
        u.axpy(C64::new(h / 3.0, 0.0), &k2);
        u.axpy(C64::new(h / 3.0, 0.0), &k3);
        u.axpy(C64::new(h / 6.0, 0.0), &k4);
    }
    u
}
