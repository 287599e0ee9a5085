//! Closed-form references, error norms and convergence orders.

use crate::error::{Result, SolverError};
use crate::state::{EosParams, Primitive};
use crate::verify::riemann::{exact_riemann_1d, Discontinuity, RiemannSolution, Wave};

/// Periodic traveling wave ρ = 1 + 0.99999 sin(x - 0.99t), v = 0.99, p = 0.005.
pub fn smooth_exact(x: f64, t: f64) -> Primitive<f64, 1> {
    Primitive::new(1.0 + 0.99999 * (x - 0.99 * t).sin(), [0.99], 0.005)
}

/// Quantities of the planar shock produced by a cold flow hitting a wall.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShockHeating {
    pub w0: f64,
    /// Speed of the reflected shock (away from the wall).
    pub shock_speed: f64,
    /// Post- to pre-shock rest density ratio.
    pub compression: f64,
    /// Specific internal energy behind the shock.
    pub e_post: f64,
}

pub fn shock_heating_reference(eos: &EosParams<f64>, v0: f64) -> Result<ShockHeating> {
    if !(v0 > 0.0 && v0 < 1.0) {
        return Err(SolverError::Domain(format!("inflow speed must lie in (0, 1), got {v0}")));
    }
    let g = eos.gamma();
    let w0 = 1.0 / ((1.0 - v0) * (1.0 + v0)).sqrt();
    Ok(ShockHeating {
        w0,
        shock_speed: (g - 1.0) * w0 * v0 / (w0 + 1.0),
        compression: (g + 1.0) / (g - 1.0) + g / (g - 1.0) * (w0 - 1.0),
        e_post: w0 - 1.0,
    })
}

/// Discrete l¹ (Σ|e|Δx) and l∞ errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorReport {
    pub l1: f64,
    pub linf: f64,
}

pub fn error_norms(numeric: &[f64], exact: &[f64], dx: f64) -> Result<ErrorReport> {
    if numeric.len() != exact.len() {
        return Err(SolverError::SizeMismatch(format!(
            "{} numeric values against {} exact values",
            numeric.len(),
            exact.len()
        )));
    }
    let mut l1 = 0.0;
    let mut linf: f64 = 0.0;
    for (a, b) in numeric.iter().zip(exact) {
        let e = (a - b).abs();
        l1 += e;
        linf = linf.max(e);
    }
    Ok(ErrorReport { l1: l1 * dx, linf })
}

/// Observed orders −ln(eᵢ/eᵢ₊₁)/ln(Nᵢ/Nᵢ₊₁) between successive resolutions.
pub fn observed_orders(n: &[usize], errors: &[f64]) -> Vec<f64> {
    n.windows(2)
        .zip(errors.windows(2))
        .map(|(n, e)| -(e[0] / e[1]).ln() / (n[0] as f64 / n[1] as f64).ln())
        .collect()
}

/// Position where the sampled profile crosses `level` between `x_lo` and
/// `x_hi`, linearly interpolated; the crossing nearest `near` wins.
pub fn crossing_near(xs: &[f64], values: &[f64], level: f64, near: f64, x_lo: f64, x_hi: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for k in 0..xs.len().saturating_sub(1) {
        let (a, b) = (values[k] - level, values[k + 1] - level);
        if xs[k + 1] < x_lo || xs[k] > x_hi {
            continue;
        }
        if a == 0.0 || a * b < 0.0 {
            let x = xs[k] + (xs[k + 1] - xs[k]) * a / (a - b);
            if best.map_or(true, |y| (x - near).abs() < (y - near).abs()) {
                best = Some(x);
            }
        }
    }
    best
}

/// Blast-wave reference built from the exact solutions of the two initial
/// Riemann problems and, after their shocks meet, of the Riemann problem
/// between the two shocked shells.
#[derive(Clone, Debug)]
pub struct ComposedReference {
    pub left: RiemannSolution,
    pub right: RiemannSolution,
    pub x_left: f64,
    pub x_right: f64,
    /// Collision time, place and solution when the inner shocks meet.
    pub collision: Option<(f64, f64, RiemannSolution)>,
}

impl ComposedReference {
    pub fn new(
        states: [Primitive<f64, 1>; 3],
        x_left: f64,
        x_right: f64,
        eos: &EosParams<f64>,
    ) -> Result<Self> {
        let left = exact_riemann_1d(&states[0], &states[1], eos)?;
        let right = exact_riemann_1d(&states[1], &states[2], eos)?;
        let collision = match (left.right_wave, right.left_wave) {
            (Wave::Shock { speed: a }, Wave::Shock { speed: b }) if a > b => {
                let t = (x_right - x_left) / (a - b);
                let x = x_left + a * t;
                let inner_l = Primitive::new(left.rho_star_right, [left.v_star], left.p_star);
                let inner_r = Primitive::new(right.rho_star_left, [right.v_star], right.p_star);
                Some((t, x, exact_riemann_1d(&inner_l, &inner_r, eos)?))
            }
            _ => None,
        };
        Ok(Self {
            left,
            right,
            x_left,
            x_right,
            collision,
        })
    }

    /// Events (t, x) where a wave leaving the collision reaches one of the
    /// outer contacts. The composition is wrong from there on inside their
    /// light cones.
    pub fn hits(&self) -> Vec<(f64, f64)> {
        let Some((tc, xc, inner)) = &self.collision else {
            return Vec::new();
        };
        let (slow, _) = inner.left_wave.span();
        let (_, fast) = inner.right_wave.span();
        // contact_l(t) = x_left + v1 t meets xc + slow (t - tc)
        let hit_l = (xc - slow * tc - self.x_left) / (self.left.v_star - slow);
        let hit_r = (xc - fast * tc - self.x_right) / (self.right.v_star - fast);
        let mut out = Vec::new();
        if hit_l > *tc && hit_l.is_finite() {
            out.push((hit_l, self.x_left + self.left.v_star * hit_l));
        }
        if hit_r > *tc && hit_r.is_finite() {
            out.push((hit_r, self.x_right + self.right.v_star * hit_r));
        }
        out
    }

    /// Latest time at which the whole composition is exact.
    pub fn valid_until(&self) -> f64 {
        self.hits().iter().map(|h| h.0).fold(f64::INFINITY, f64::min)
    }

    /// Whether the composed solution at (x, t) is causally disconnected from
    /// every hit.
    pub fn is_exact(&self, x: f64, t: f64) -> bool {
        self.hits().iter().all(|&(th, xh)| t <= th || (x - xh).abs() > t - th)
    }

    /// Density jumps at time `t` inside (contact of left problem, contact of
    /// right problem) plus those contacts; exact where `is_exact` holds.
    pub fn discontinuities(&self, t: f64) -> Vec<Discontinuity> {
        let mut out: Vec<Discontinuity> = self
            .left
            .discontinuities(self.x_left, t)
            .into_iter()
            .filter(|d| d.kind == "contact")
            .collect();
        match &self.collision {
            Some((tc, xc, inner)) if t > *tc => {
                out.extend(inner.discontinuities(*xc, t - tc));
            }
            _ => {
                out.extend(
                    self.left
                        .discontinuities(self.x_left, t)
                        .into_iter()
                        .filter(|d| d.kind == "shock" && d.x > self.x_left),
                );
                out.extend(
                    self.right
                        .discontinuities(self.x_right, t)
                        .into_iter()
                        .filter(|d| d.kind == "shock" && d.x < self.x_right),
                );
            }
        }
        out.extend(
            self.right
                .discontinuities(self.x_right, t)
                .into_iter()
                .filter(|d| d.kind == "contact"),
        );
        out.sort_by(|a, b| a.x.total_cmp(&b.x));
        out
    }
}
