//! Time-step selection and the three-stage SSP Runge-Kutta driver.

use crate::error::{Result, SolverError};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DtPolicy<T> {
    /// Largest step allowed by the positivity CFL bound scaled by ŵ.
    Cfl,
    Fixed(T),
    /// Δt = (0.5 Δx)^exponent, used for accuracy studies.
    AccuracyPower(T),
}

/// How the axisymmetric split parameter is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum BetaPolicy {
    /// β = ŵ/(ŵ + 2A_s(τ₁+τ₂)).
    #[default]
    Optimal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControls<T> {
    pub w_hat: T,
    pub dt_policy: DtPolicy<T>,
    pub beta_policy: BetaPolicy,
}

/// Default ŵ for the order parameter r.
pub fn default_w_hat(r: usize) -> f64 {
    if r >= 5 {
        0.4
    } else {
        0.45
    }
}

impl<T: Real> StepControls<T> {
    pub fn new(w_hat: T, dt_policy: DtPolicy<T>) -> Result<Self> {
        let c = Self {
            w_hat,
            dt_policy,
            beta_policy: BetaPolicy::Optimal,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn for_order(r: usize) -> Self {
        Self {
            w_hat: T::of(default_w_hat(r)),
            dt_policy: DtPolicy::Cfl,
            beta_policy: BetaPolicy::Optimal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w_hat > T::zero() && self.w_hat < T::one()) {
            return Err(SolverError::Config(format!("w_hat must lie in (0, 1), got {}", self.w_hat)));
        }
        match self.dt_policy {
            DtPolicy::Fixed(dt) if !(dt > T::zero() && dt.is_finite()) => {
                Err(SolverError::Config(format!("fixed dt must be positive, got {dt}")))
            }
            DtPolicy::AccuracyPower(e) if !(e > T::zero() && e.is_finite()) => {
                Err(SolverError::Config(format!("accuracy exponent must be positive, got {e}")))
            }
            _ => Ok(()),
        }
    }

    fn policy_dt(&self, dx_min: T, cfl: T) -> T {
        match self.dt_policy {
            DtPolicy::Cfl => cfl,
            DtPolicy::Fixed(dt) => dt,
            DtPolicy::AccuracyPower(e) => (T::half() * dx_min).powf(e),
        }
    }
}

/// Δt for a 1D grid: ŵΔx/(2 α_max) under the CFL policy.
pub fn compute_dt_1d<T: Real>(dx: T, controls: &StepControls<T>, alpha_max: T) -> Result<T> {
    if !(alpha_max > T::zero()) {
        return Err(SolverError::DegenerateGrid(format!("alpha_max must be positive, got {alpha_max}")));
    }
    Ok(controls.policy_dt(dx, controls.w_hat * dx / (T::two() * alpha_max)))
}

/// Δt for a 2D grid: ŵ/(2(τ₁+τ₂)) under the CFL policy, τ_i = max α_i / Δx_i.
pub fn compute_dt_2d<T: Real>(tau1: T, tau2: T, controls: &StepControls<T>, dx_min: T) -> Result<T> {
    if tau1 < T::zero() || tau2 < T::zero() || !(tau1 + tau2 > T::zero()) {
        return Err(SolverError::DegenerateGrid(format!(
            "τ₁ = {tau1} and τ₂ = {tau2} must be non-negative and not both zero"
        )));
    }
    Ok(controls.policy_dt(dx_min, controls.w_hat / (T::two() * (tau1 + tau2))))
}

/// Clips a step so it never passes `t_final`.
pub fn clip_to_final<T: Real>(dt: T, t: T, t_final: T) -> T {
    let rest = t_final - t;
    if dt >= rest {
        rest
    } else {
        dt
    }
}

/// Stage weights (a, b): U⁽ˢ⁺¹⁾ = a·Uⁿ + b·(U⁽ˢ⁾ + Δt·L(U⁽ˢ⁾)).
///
/// Since a + b = 1, implementations may evaluate U⁽ˢ⁾ + a(Uⁿ − U⁽ˢ⁾) + bΔtL,
/// which leaves uniform states bit-identical.
pub const SSP_RK3: [(f64, f64); 3] = [(0.0, 1.0), (0.75, 0.25), (1.0 / 3.0, 2.0 / 3.0)];

/// One stage of a convex-combination Runge-Kutta method.
pub trait StageOperator<S, T> {
    /// Returns a·u0 + b·(us + Δt·L(us)), applying any stage-wise limiting.
    fn stage(&mut self, index: usize, u0: &S, us: &S, a: T, b: T, dt: T) -> Result<S>;
}

/// Advances `u0` by one SSP-RK3 step.
pub fn ssp_rk3_step<S, T: Real, Op: StageOperator<S, T>>(u0: &S, op: &mut Op, dt: T) -> Result<S> {
    let (a, b) = SSP_RK3[0];
    let mut us = op.stage(0, u0, u0, T::of(a), T::of(b), dt)?;
    for (index, &(a, b)) in SSP_RK3.iter().enumerate().skip(1) {
        us = op
            .stage(index, u0, &us, T::of(a), T::of(b), dt)
            .map_err(|e| e.at(format!("stage {}", index + 1)))?;
    }
    Ok(us)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Ode<F: Fn(f64, f64) -> f64> {
        f: F,
        t: f64,
    }

    impl<F: Fn(f64, f64) -> f64> StageOperator<f64, f64> for Ode<F> {
        fn stage(&mut self, index: usize, u0: &f64, us: &f64, a: f64, b: f64, dt: f64) -> Result<f64> {
            let ts = self.t + [0.0, 1.0, 0.5][index] * dt;
            Ok(us + a * (u0 - us) + b * dt * (self.f)(ts, *us))
        }
    }

    #[test]
    fn cfl_formula() {
        let c = StepControls::<f64>::new(0.45, DtPolicy::Cfl).unwrap();
        assert!((compute_dt_1d(0.01, &c, 1.0).unwrap() - 0.00225).abs() < 1e-18);
        let c = StepControls::<f64>::new(0.4, DtPolicy::Cfl).unwrap();
        assert!((compute_dt_2d(1.0, 1.0, &c, 0.1).unwrap() - 0.1).abs() < 1e-16);
        assert_eq!(compute_dt_2d(1.0, 3.0, &c, 0.1).unwrap(), compute_dt_2d(3.0, 1.0, &c, 0.1).unwrap());
        assert!(compute_dt_2d(0.0, 0.0, &c, 0.1).is_err());
    }

    #[test]
    fn accuracy_policy() {
        let c = StepControls::<f64>::new(0.45, DtPolicy::AccuracyPower(5.0 / 3.0)).unwrap();
        let dx = 2.0 * std::f64::consts::PI / 128.0;
        let dt = compute_dt_1d(dx, &c, 1.0).unwrap();
        let expect = (std::f64::consts::PI / 128.0).powf(5.0 / 3.0);
        assert!((dt - expect).abs() < 1e-15 * expect);
    }

    #[test]
    fn clipping() {
        assert_eq!(clip_to_final(0.3, 0.9, 1.0), 1.0 - 0.9);
        assert_eq!(clip_to_final(0.05, 0.9, 1.0), 0.05);
    }

    #[test]
    fn invalid_controls() {
        assert!(StepControls::new(1.0, DtPolicy::Cfl).is_err());
        assert!(StepControls::new(0.5, DtPolicy::Fixed(-1.0)).is_err());
    }

    #[test]
    fn constant_forcing_is_exact() {
        let mut op = Ode { f: |_, _| 3.0, t: 0.0 };
        let u = ssp_rk3_step(&1.0, &mut op, 0.25).unwrap();
        assert!((u - 1.75).abs() < 1e-15);
    }

    #[test]
    fn third_order_on_exponential() {
        let err = |n: usize| {
            let dt = 1.0 / n as f64;
            let mut u = 1.0;
            for k in 0..n {
                let mut op = Ode { f: |_, y| -y, t: k as f64 * dt };
                u = ssp_rk3_step(&u, &mut op, dt).unwrap();
            }
            (u - (-1.0f64).exp()).abs()
        };
        let order = (err(20) / err(40)).log2();
        assert!((order - 3.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn fixed_point() {
        let mut op = Ode { f: |_, _| 0.0, t: 0.0 };
        assert_eq!(ssp_rk3_step(&2.5, &mut op, 0.1).unwrap(), 2.5);
    }
}
