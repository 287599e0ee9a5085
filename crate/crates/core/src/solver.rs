//! Time integration of a grid with the limited scheme.

use crate::boundary::fill_ghosts;
use crate::error::{Result, SolverError};
use crate::grid::{FieldGrid, Geometry};
use crate::residual::{apply_stage, evaluate_faces, source_bound, Scheme, StageParams, StageStats};
use crate::scalar::Real;
use crate::source::source_split_params;
use crate::time::{clip_to_final, compute_dt_1d, compute_dt_2d, DtPolicy, StepControls, SSP_RK3};

/// Restarts allowed within one step before giving up.
pub const MAX_REJECTIONS: usize = 30;

/// Running statistics over every stage evaluated so far.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunStats<T> {
    pub steps: usize,
    /// Steps restarted with a smaller Δt after a later stage broke the CFL bound.
    pub rejected: usize,
    pub min_d: T,
    pub min_q: T,
    pub limited_faces: usize,
    pub faces: usize,
    pub min_theta: T,
    pub max_beta: T,
    pub last_dt: T,
}

impl<T: Real> Default for RunStats<T> {
    fn default() -> Self {
        Self {
            steps: 0,
            rejected: 0,
            min_d: T::infinity(),
            min_q: T::infinity(),
            limited_faces: 0,
            faces: 0,
            min_theta: T::one(),
            max_beta: T::zero(),
            last_dt: T::zero(),
        }
    }
}

impl<T: Real> RunStats<T> {
    fn absorb(&mut self, s: &StageStats<T>) {
        self.min_d = self.min_d.min(s.min_d);
        self.min_q = self.min_q.min(s.min_q);
        self.limited_faces += s.limited_faces;
        self.faces += s.faces;
        self.min_theta = self.min_theta.min(s.min_theta);
    }

    /// Fraction of face evaluations where the limiter acted.
    pub fn limited_fraction(&self) -> f64 {
        if self.faces == 0 {
            0.0
        } else {
            self.limited_faces as f64 / self.faces as f64
        }
    }
}

/// Outcome of one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo<T> {
    pub dt: T,
    pub beta: T,
    pub alpha_max: [T; 2],
}

/// Grid state plus the scheme that advances it.
#[derive(Clone, Debug)]
pub struct Solver<T, const D: usize> {
    pub grid: FieldGrid<T, D>,
    pub scheme: Scheme<T>,
    pub controls: StepControls<T>,
    pub time: T,
    pub stats: RunStats<T>,
}

impl<T: Real, const D: usize> Solver<T, D> {
    pub fn new(grid: FieldGrid<T, D>, scheme: Scheme<T>, controls: StepControls<T>) -> Result<Self> {
        scheme.validate()?;
        controls.validate()?;
        let r = scheme.r();
        if grid.ghost < r {
            return Err(SolverError::Config(format!(
                "ghost width {} is smaller than the stencil half-width {r}",
                grid.ghost
            )));
        }
        for a in 0..if D == 1 { 1 } else { 2 } {
            if grid.n[a] < r {
                return Err(SolverError::DegenerateGrid(format!(
                    "axis {a} has {} cells, fewer than the stencil half-width {r}",
                    grid.n[a]
                )));
            }
        }
        Ok(Self {
            grid,
            scheme,
            controls,
            time: T::zero(),
            stats: RunStats::default(),
        })
    }

    fn axisymmetric(&self) -> bool {
        D == 2 && self.grid.geometry == Geometry::Axisymmetric
    }

    /// Sum of τ over the active axes.
    fn tau_sum(taus: &[T]) -> T {
        taus.iter().fold(T::zero(), |a, &t| a + t)
    }

    fn tau_hat(taus: &[T]) -> [T; 2] {
        if D == 1 {
            [T::one(), T::one()]
        } else {
            let s = taus[0] + taus[1];
            [taus[0] / s, taus[1] / s]
        }
    }

    /// Advances by one step, never past `t_final`.
    ///
    /// Under the CFL policy every stage rechecks 2Δt Στ ≤ 1 - β with that
    /// stage's wave speeds; a violation restarts the step from the stored
    /// state with Δt shrunk to ŵ times the admissible value.
    pub fn step(&mut self, t_final: T) -> Result<StepInfo<T>> {
        let step_no = self.stats.steps + 1;
        let loc = |e: SolverError, s: usize| e.at(format!("step {step_no} stage {}", s + 1));
        fill_ghosts(&mut self.grid)?;
        let u0 = self.grid.data().to_vec();
        let first = evaluate_faces(&self.grid, &self.scheme).map_err(|e| loc(e, 0))?;
        let taus0 = first.taus(&self.grid);
        let mut alpha_max = [T::zero(); 2];
        for a in &first.axes {
            alpha_max[a.axis] = a.alpha_max;
        }
        let dx_min = if D == 1 {
            self.grid.spacing[0]
        } else {
            self.grid.spacing[0].min(self.grid.spacing[1])
        };
        let cfl_policy = matches!(self.controls.dt_policy, DtPolicy::Cfl);
        let (mut dt, beta) = if self.axisymmetric() {
            let a_s = source_bound(&self.grid, &first.prims);
            let split = source_split_params(a_s, taus0[0], taus0[1], self.controls.w_hat)?;
            let dt = if cfl_policy {
                split.dt(taus0[0], taus0[1], self.controls.w_hat)
            } else {
                compute_dt_2d(taus0[0], taus0[1], &self.controls, dx_min)?
            };
            (dt, split.beta)
        } else if D == 1 {
            (compute_dt_1d(self.grid.spacing[0], &self.controls, alpha_max[0])?, T::zero())
        } else {
            (compute_dt_2d(taus0[0], taus0[1], &self.controls, dx_min)?, T::zero())
        };
        dt = clip_to_final(dt, self.time, t_final);
        if !(dt > T::zero()) {
            return Err(SolverError::Config(format!("non-positive time step {dt} at t = {}", self.time)));
        }

        let mut rejected = 0;
        'attempt: loop {
            let mut beta_max = beta;
            let mut stats = StageStats::<T>::empty();
            for (s, &(a, b)) in SSP_RK3.iter().enumerate() {
                let owned;
                let faces = if s == 0 {
                    &first
                } else {
                    fill_ghosts(&mut self.grid)?;
                    owned = evaluate_faces(&self.grid, &self.scheme).map_err(|e| loc(e, s))?;
                    &owned
                };
                let taus = if s == 0 { taus0.clone() } else { faces.taus(&self.grid) };
                let beta_s = if self.axisymmetric() {
                    let a_s = source_bound(&self.grid, &faces.prims);
                    if a_s.is_infinite() {
                        beta
                    } else {
                        beta.max(dt / a_s)
                    }
                } else {
                    T::zero()
                };
                let ratio = T::two() * dt * Self::tau_sum(&taus) / (T::one() - beta_s);
                if s > 0 && cfl_policy && !(beta_s < T::one() && ratio <= T::one()) {
                    rejected += 1;
                    if rejected > MAX_REJECTIONS {
                        return Err(loc(
                            SolverError::CflViolation {
                                location: String::new(),
                                detail: format!("step rejected {MAX_REJECTIONS} times, last Δt = {dt}"),
                            },
                            s,
                        ));
                    }
                    dt = if beta_s < T::one() {
                        dt * self.controls.w_hat / ratio
                    } else {
                        dt * self.controls.w_hat
                    };
                    self.grid.data_mut().copy_from_slice(&u0);
                    continue 'attempt;
                }
                if !(beta_s < T::one()) {
                    return Err(loc(
                        SolverError::CflViolation {
                            location: String::new(),
                            detail: format!("source split needs β = {beta_s} ≥ 1"),
                        },
                        s,
                    ));
                }
                beta_max = beta_max.max(beta_s);
                let params = StageParams {
                    a: T::of(a),
                    b: T::of(b),
                    dt,
                    tau_hat: Self::tau_hat(&taus),
                    beta: beta_s,
                };
                let (new, st) = apply_stage(&self.grid, &u0, &self.scheme, faces, &params).map_err(|e| loc(e, s))?;
                stats = stats.merge(st);
                self.grid.data_mut().copy_from_slice(&new);
            }
            self.stats.absorb(&stats);
            self.time = self.time + dt;
            self.stats.steps += 1;
            self.stats.rejected += rejected;
            self.stats.last_dt = dt;
            self.stats.max_beta = self.stats.max_beta.max(beta_max);
            return Ok(StepInfo { dt, beta: beta_max, alpha_max });
        }
    }

    /// Steps until `t_final`, calling `on_step` after each step.
    pub fn run_until(&mut self, t_final: T, mut on_step: impl FnMut(&Self, &StepInfo<T>)) -> Result<()> {
        if t_final < self.time {
            return Err(SolverError::Config(format!(
                "final time {t_final} is before the current time {}",
                self.time
            )));
        }
        while self.time < t_final {
            let info = self.step(t_final)?;
            on_step(self, &info);
        }
        fill_ghosts(&mut self.grid)?;
        Ok(())
    }
}
