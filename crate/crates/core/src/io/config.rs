//! TOML run configuration.

use serde::{Deserialize, Serialize};

use crate::flux::{LimiterFloors, DEFAULT_FLOOR, DEFAULT_ROUNDOFF_MARGIN, DEFAULT_THETA_AMP};
use crate::io::RunError;
use crate::presets::{preset, ProblemSpec};
use crate::residual::Scheme;
use crate::state::EosParams;
use crate::time::{default_w_hat, DtPolicy, StepControls};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub problem: String,
    /// Order parameter; the scheme is of order 2r - 1.
    pub r: usize,
    /// CFL fraction, 0.45 for r = 3 and 0.4 for r = 5 when unset.
    pub w_hat: Option<f64>,
    pub theta_amp: f64,
    pub eps_d: f64,
    pub eps_q: f64,
    pub roundoff: f64,
    /// Overrides the preset's adiabatic index.
    pub gamma: Option<f64>,
    /// Cells per axis; one entry in 1D, one or two in 2D (one scales the preset aspect).
    pub resolution: Option<Vec<usize>>,
    /// Resolutions of a convergence study.
    pub resolutions: Option<Vec<usize>>,
    pub t_final: Option<f64>,
    /// Fixed time step.
    pub dt: Option<f64>,
    /// Δt = (0.5Δx)^dt_power; convergence studies default to (2r - 1)/3.
    pub dt_power: Option<f64>,
    /// Snapshot every this many steps; 0 writes the final state only.
    pub output_every: usize,
    pub output_dir: String,
    pub limiter: bool,
    pub characteristic: bool,
    /// Adds an ln(rho) column to field output.
    pub log_rho: bool,
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: "smooth".into(),
            r: 3,
            w_hat: None,
            theta_amp: DEFAULT_THETA_AMP,
            eps_d: DEFAULT_FLOOR,
            eps_q: DEFAULT_FLOOR,
            roundoff: DEFAULT_ROUNDOFF_MARGIN,
            gamma: None,
            resolution: None,
            resolutions: None,
            t_final: None,
            dt: None,
            dt_power: None,
            output_every: 0,
            output_dir: "out".into(),
            limiter: true,
            characteristic: true,
            log_rho: false,
            seed: 1,
            samples: 10_000,
        }
    }
}

fn bad(key: &str, msg: impl std::fmt::Display) -> RunError {
    RunError::Config(format!("`{key}`: {msg}"))
}

/// Parses and validates a TOML document; missing keys take their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, RunError> {
    parse_unvalidated(text)?.validated()
}

/// Syntax and key check only, for callers that layer overrides before validating.
pub fn parse_unvalidated(text: &str) -> Result<RunConfig, RunError> {
    toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))
}

impl RunConfig {
    /// Checks every key and fills the order-dependent defaults.
    pub fn validated(mut self) -> Result<Self, RunError> {
        if self.r != 3 && self.r != 5 {
            return Err(bad("r", format!("unsupported order parameter {} (expected 3 or 5)", self.r)));
        }
        let w = self.w_hat.unwrap_or_else(|| default_w_hat(self.r));
        if !(w > 0.0 && w < 1.0) {
            return Err(bad("w_hat", format!("must lie in (0, 1), got {w}")));
        }
        self.w_hat = Some(w);
        if !(self.theta_amp >= 1.0 && self.theta_amp.is_finite()) {
            return Err(bad("theta_amp", format!("must be at least 1, got {}", self.theta_amp)));
        }
        for (key, v) in [("eps_d", self.eps_d), ("eps_q", self.eps_q)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(key, format!("must be positive, got {v}")));
            }
        }
        if !(self.roundoff >= 0.0 && self.roundoff.is_finite()) {
            return Err(bad("roundoff", format!("must be non-negative, got {}", self.roundoff)));
        }
        if let Some(g) = self.gamma {
            if !(g > 1.0 && g <= 2.0) {
                return Err(bad("gamma", format!("must lie in (1, 2], got {g}")));
            }
        }
        let spec = preset(&self.problem).map_err(|e| bad("problem", e))?;
        if let Some(res) = &self.resolution {
            if res.is_empty() || res.len() > spec.dim || res.iter().any(|&n| n == 0) {
                return Err(bad(
                    "resolution",
                    format!("needs 1 to {} positive entries for `{}`, got {res:?}", spec.dim, self.problem),
                ));
            }
        }
        if let Some(res) = &self.resolutions {
            if res.len() < 2 || res.iter().any(|&n| n == 0) {
                return Err(bad("resolutions", format!("needs at least two positive entries, got {res:?}")));
            }
        }
        if let Some(t) = self.t_final {
            if !(t > 0.0 && t.is_finite()) {
                return Err(bad("t_final", format!("must be positive, got {t}")));
            }
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(bad("dt", format!("must be positive, got {dt}")));
            }
        }
        if let Some(e) = self.dt_power {
            if !(e > 0.0 && e.is_finite()) {
                return Err(bad("dt_power", format!("must be positive, got {e}")));
            }
        }
        if self.dt.is_some() && self.dt_power.is_some() {
            return Err(bad("dt", "cannot be combined with `dt_power`"));
        }
        if self.samples == 0 {
            return Err(bad("samples", "must be positive"));
        }
        Ok(self)
    }

    pub fn spec(&self) -> Result<ProblemSpec, RunError> {
        let mut spec = preset(&self.problem)?;
        if let Some(g) = self.gamma {
            spec.gamma = g;
        }
        if let Some(t) = self.t_final {
            spec.t_final = t;
        }
        Ok(spec)
    }

    pub fn w_hat(&self) -> f64 {
        self.w_hat.unwrap_or_else(|| default_w_hat(self.r))
    }

    /// Grid size for a run of `spec`.
    pub fn grid_size(&self, spec: &ProblemSpec) -> [usize; 2] {
        match self.resolution.as_deref() {
            None => spec.resolution,
            Some([n]) => spec.scaled_resolution(*n),
            Some(res) => [res[0], res[1]],
        }
    }

    pub fn scheme(&self, eos: EosParams<f64>) -> Result<Scheme<f64>, RunError> {
        let mut s = Scheme::new(eos, self.r)?;
        s.theta_amp = self.theta_amp;
        s.floors = LimiterFloors {
            eps_d: self.eps_d,
            eps_q: self.eps_q,
            roundoff: self.roundoff,
        };
        s.limiter = self.limiter;
        s.characteristic = self.characteristic;
        s.validate()?;
        Ok(s)
    }

    pub fn controls(&self) -> Result<StepControls<f64>, RunError> {
        let policy = match (self.dt, self.dt_power) {
            (Some(dt), _) => DtPolicy::Fixed(dt),
            (_, Some(e)) => DtPolicy::AccuracyPower(e),
            _ => DtPolicy::Cfl,
        };
        Ok(StepControls::new(self.w_hat(), policy)?)
    }
}
