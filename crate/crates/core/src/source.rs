//! Geometric source of the axisymmetric equations and the convex split
//! between the flux update and the source update.

use crate::error::{Result, SolverError};
use crate::scalar::Real;
use crate::state::{primitive_from_conserved, Conserved, EosParams, Primitive, RecoveryOptions};

/// S(U, r) = −(1/r)(D v₁, m₁ v₁, m₂ v₁, m₁).
pub fn axisymmetric_source<T: Real>(u: &Conserved<T, 2>, r: T, eos: &EosParams<T>) -> Result<Conserved<T, 2>> {
    if !(r > T::zero()) {
        return Err(SolverError::Domain(format!("source radius must be positive, got {r}")));
    }
    let v = primitive_from_conserved(u, eos, &RecoveryOptions::default())?;
    Ok(source_with_primitive(u, &v, r))
}

#[inline(always)]
pub fn source_with_primitive<T: Real>(u: &Conserved<T, 2>, v: &Primitive<T, 2>, r: T) -> Conserved<T, 2> {
    let v1 = v.v[0];
    let s = -T::one() / r;
    Conserved {
        d: s * u.d * v1,
        m: [s * u.m[0] * v1, s * u.m[1] * v1],
        e: s * u.m[0],
    }
}

/// Split parameter β and source step bound A_s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceSplit<T> {
    pub beta: T,
    /// +∞ when no cell moves away from the axis.
    pub a_s: T,
}

/// Contribution of one cell to A_s: r·q/((p + q)|v₁|) when v₁ > 0.
#[inline(always)]
pub fn source_bound_term<T: Real>(r: T, q: T, p: T, v1: T) -> Option<T> {
    if v1 > T::zero() {
        Some(r * q / ((p + q) * v1.abs()))
    } else {
        None
    }
}

/// A_s over (radius, state, primitive) triples; a fixed-order minimum.
pub fn source_step_bound<'a, T: Real + 'a>(
    cells: impl IntoIterator<Item = (T, &'a Conserved<T, 2>, &'a Primitive<T, 2>)>,
) -> T {
    let mut a = T::infinity();
    for (r, u, v) in cells {
        if let Some(t) = source_bound_term(r, u.q(), v.p, v.v[0]) {
            a = a.min(t);
        }
    }
    a
}

/// β = ŵ / (ŵ + 2 A_s (τ₁ + τ₂)), which equalizes the flux and source bounds.
pub fn source_split_params<T: Real>(a_s: T, tau1: T, tau2: T, w_hat: T) -> Result<SourceSplit<T>> {
    let tau = tau1 + tau2;
    if !(tau > T::zero()) {
        return Err(SolverError::DegenerateGrid("τ₁ + τ₂ must be positive".into()));
    }
    if !(a_s > T::zero()) {
        return Err(SolverError::Domain(format!("source bound must be positive, got {a_s}")));
    }
    let beta = if a_s.is_infinite() {
        T::zero()
    } else {
        w_hat / (w_hat + T::two() * a_s * tau)
    };
    Ok(SourceSplit { beta, a_s })
}

impl<T: Real> SourceSplit<T> {
    /// Δt = min((1 − β)ŵ/(2(τ₁+τ₂)), β A_s).
    pub fn dt(&self, tau1: T, tau2: T, w_hat: T) -> T {
        let flux = (T::one() - self.beta) * w_hat / (T::two() * (tau1 + tau2));
        if self.a_s.is_infinite() {
            flux
        } else {
            flux.min(self.beta * self.a_s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::conserved_unchecked;

    fn eos() -> EosParams<f64> {
        EosParams::new(5.0 / 3.0).unwrap()
    }

    #[test]
    fn static_source_vanishes() {
        let u = conserved_unchecked(&Primitive::new(1.0, [0.0, 0.4], 2.0), &eos());
        let s = axisymmetric_source(&u, 0.3, &eos()).unwrap();
        assert_eq!(s.d, 0.0);
        assert_eq!(s.m[0], 0.0);
        assert_eq!(s.e, 0.0);
    }

    #[test]
    fn inverse_radius_scaling() {
        let u = conserved_unchecked(&Primitive::new(1.0, [0.3, 0.4], 2.0), &eos());
        let a = axisymmetric_source(&u, 0.5, &eos()).unwrap();
        let b = axisymmetric_source(&u, 1.0, &eos()).unwrap();
        assert!((a * 0.5 - b).max_abs() < 1e-15);
        assert!(axisymmetric_source(&u, 0.0, &eos()).is_err());
    }

    #[test]
    fn bound_example() {
        assert_eq!(source_bound_term(2.0 * 0.1, 1.0, 1.0, 0.5), Some(0.2));
        assert_eq!(source_bound_term(0.2, 1.0, 1.0, -0.5), None);
    }

    #[test]
    fn no_qualifying_cell() {
        let s = source_split_params(f64::INFINITY, 1.0, 2.0, 0.45).unwrap();
        assert_eq!(s.beta, 0.0);
        assert!((s.dt(1.0, 2.0, 0.45) - 0.45 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn equalization() {
        let s = source_split_params::<f64>(0.2, 3.0, 5.0, 0.45).unwrap();
        let flux: f64 = (1.0 - s.beta) * 0.45 / (2.0 * 8.0);
        assert!((flux - s.beta * 0.2).abs() < 1e-15);
        assert!((s.dt(3.0, 5.0, 0.45) - flux).abs() < 1e-15);
    }
}
