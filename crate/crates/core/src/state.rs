//! Pointwise relativistic hydrodynamics algebra: Γ-law equation of state,
//! conservative/primitive maps, admissibility, characteristic speeds and
//! physical fluxes.
//!
//! States carry their spatial dimension as a const parameter `D` (1, 2 or 3).
//! The conserved vector is ordered `(D, m_1, .., m_D, E)` and has `D + 2`
//! components; [`Conserved`] doubles as the generic vector type for fluxes.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Result, SolverError};
use crate::scalar::Real;

/// Largest supported spatial dimension; component arrays are sized for it.
pub const MAX_DIM: usize = 3;
/// Largest number of conserved components (`MAX_DIM + 2`).
pub const MAX_COMPONENTS: usize = MAX_DIM + 2;

/// Primitive velocities at or above this magnitude are rejected.
pub const MAX_SPEED: f64 = 1.0 - 1e-15;

/// Γ-law equation of state `p = (Γ - 1) ρ e` with `1 < Γ <= 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EosParams<T> {
    gamma: T,
}

impl<T: Real> EosParams<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if !(gamma > T::one() && gamma <= T::two()) {
            return Err(SolverError::Config(format!(
                "adiabatic index must lie in (1, 2], got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    #[inline(always)]
    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Γ / (Γ - 1).
    #[inline(always)]
    pub fn gamma_ratio(&self) -> T {
        self.gamma / (self.gamma - T::one())
    }

    /// h = 1 + e + p/ρ = 1 + Γ p / ((Γ - 1) ρ).
    #[inline(always)]
    pub fn specific_enthalpy(&self, rho: T, p: T) -> T {
        T::one() + self.gamma_ratio() * p / rho
    }

    #[inline(always)]
    pub fn internal_energy(&self, rho: T, p: T) -> T {
        p / ((self.gamma - T::one()) * rho)
    }

    /// c_s² = Γ p / (ρ h).
    #[inline(always)]
    pub fn sound_speed_sq(&self, rho: T, p: T) -> T {
        self.gamma * p / (rho + self.gamma_ratio() * p)
    }
}

/// Tolerances for the pressure root finder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveryOptions<T> {
    pub rel_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for RecoveryOptions<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::of(1e-14),
            max_iter: 200,
        }
    }
}

impl<T: Real> RecoveryOptions<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) || self.max_iter == 0 {
            return Err(SolverError::Config(format!(
                "recovery options need rel_tol > 0 and max_iter >= 1 (got {}, {})",
                self.rel_tol, self.max_iter
            )));
        }
        Ok(())
    }
}

/// Rest-frame state: density, velocity (units of c) and pressure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Primitive<T, const D: usize> {
    pub rho: T,
    pub v: [T; D],
    pub p: T,
}

/// Laboratory-frame state `(D, m, E)`; also used for flux vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conserved<T, const D: usize> {
    pub d: T,
    pub m: [T; D],
    pub e: T,
}

impl<T: Real, const D: usize> Primitive<T, D> {
    pub fn new(rho: T, v: [T; D], p: T) -> Self {
        Self { rho, v, p }
    }

    #[inline(always)]
    pub fn speed_sq(&self) -> T {
        self.v.iter().fold(T::zero(), |acc, &vi| acc + vi * vi)
    }

    /// 1 - v², evaluated as (1 - |v|)(1 + |v|) in one dimension.
    #[inline(always)]
    pub fn one_minus_speed_sq(&self) -> T {
        if D == 1 {
            let s = self.v[0].abs();
            (T::one() - s) * (T::one() + s)
        } else {
            T::one() - self.speed_sq()
        }
    }

    #[inline(always)]
    pub fn lorentz_factor(&self) -> T {
        T::one() / self.one_minus_speed_sq().sqrt()
    }

    /// Checks ρ > 0, p > 0 and |v| below the speed of light.
    pub fn validate(&self) -> Result<()> {
        let finite = self.rho.is_finite() && self.p.is_finite() && self.v.iter().all(|x| x.is_finite());
        if !finite {
            return Err(SolverError::Domain(format!("non-finite primitive {self:?}")));
        }
        if !(self.rho > T::zero()) {
            return Err(SolverError::Domain(format!("density must be positive, got {}", self.rho)));
        }
        if !(self.p > T::zero()) {
            return Err(SolverError::Domain(format!("pressure must be positive, got {}", self.p)));
        }
        if !(self.speed_sq().sqrt() < T::of(MAX_SPEED)) {
            return Err(SolverError::Domain(format!(
                "speed must be below 1 - 1e-15, got |v| = {}",
                self.speed_sq().sqrt()
            )));
        }
        Ok(())
    }

    /// Exchanges velocity component `axis` with component 0.
    #[inline(always)]
    pub fn swap_axis(mut self, axis: usize) -> Self {
        self.v.swap(0, axis);
        self
    }
}

impl<T: Real, const D: usize> Conserved<T, D> {
    /// Number of components, `D + 2`.
    pub const NCOMP: usize = D + 2;

    pub fn new(d: T, m: [T; D], e: T) -> Self {
        Self { d, m, e }
    }

    pub fn zero() -> Self {
        Self {
            d: T::zero(),
            m: [T::zero(); D],
            e: T::zero(),
        }
    }

    pub fn splat(x: T) -> Self {
        Self { d: x, m: [x; D], e: x }
    }

    #[inline(always)]
    pub fn momentum_sq(&self) -> T {
        self.m.iter().fold(T::zero(), |acc, &mi| acc + mi * mi)
    }

    /// q(U) = E - sqrt(D² + |m|²); concave in U.
    ///
    /// Evaluated as ((E - |m|)(E + |m|) - D²)/(E + sqrt(D² + |m|²)) so that
    /// ultra-relativistic states, where E and |m| agree to many digits, keep
    /// their relative accuracy.
    #[inline(always)]
    pub fn q(&self) -> T {
        let msq = self.momentum_sq();
        let s = (self.d * self.d + msq).sqrt();
        if !(self.e > T::zero()) {
            return self.e - s;
        }
        let mabs = if D == 1 { self.m[0].abs() } else { msq.sqrt() };
        let prod = (self.e - mabs) * (self.e + mabs);
        (-self.d).mul_add(self.d, prod) / (self.e + s)
    }

    /// Membership of the admissible set: D > 0 and q(U) > 0.
    #[inline(always)]
    pub fn is_admissible(&self) -> bool {
        self.d > T::zero() && self.q() > T::zero()
    }

    #[inline(always)]
    pub fn swap_axis(mut self, axis: usize) -> Self {
        self.m.swap(0, axis);
        self
    }

    pub fn is_finite(&self) -> bool {
        self.d.is_finite() && self.e.is_finite() && self.m.iter().all(|x| x.is_finite())
    }

    /// Euclidean norm over all components.
    pub fn norm(&self) -> T {
        (self.d * self.d + self.momentum_sq() + self.e * self.e).sqrt()
    }

    pub fn max_abs(&self) -> T {
        let mut out = self.d.abs().max(self.e.abs());
        for &mi in &self.m {
            out = out.max(mi.abs());
        }
        out
    }

    pub fn to_vec(&self) -> Vec<T> {
        (0..Self::NCOMP).map(|k| self[k]).collect()
    }

    pub fn from_slice(values: &[T]) -> Self {
        assert_eq!(values.len(), Self::NCOMP, "component count mismatch");
        let mut out = Self::zero();
        for (k, &x) in values.iter().enumerate() {
            out[k] = x;
        }
        out
    }

    /// Converts the scalar type componentwise.
    pub fn cast<S: Real>(&self) -> Conserved<S, D> {
        let mut out = Conserved::<S, D>::zero();
        for k in 0..Self::NCOMP {
            out[k] = S::of(self[k].as_f64());
        }
        out
    }
}

impl<T: Real, const D: usize> Index<usize> for Conserved<T, D> {
    type Output = T;
    #[inline(always)]
    fn index(&self, k: usize) -> &T {
        if k == 0 {
            &self.d
        } else if k <= D {
            &self.m[k - 1]
        } else if k == D + 1 {
            &self.e
        } else {
            panic!("component {k} out of range for dimension {D}")
        }
    }
}

impl<T: Real, const D: usize> IndexMut<usize> for Conserved<T, D> {
    #[inline(always)]
    fn index_mut(&mut self, k: usize) -> &mut T {
        if k == 0 {
            &mut self.d
        } else if k <= D {
            &mut self.m[k - 1]
        } else if k == D + 1 {
            &mut self.e
        } else {
            panic!("component {k} out of range for dimension {D}")
        }
    }
}

impl<T: Real, const D: usize> Add for Conserved<T, D> {
    type Output = Self;
    #[inline(always)]
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<T: Real, const D: usize> AddAssign for Conserved<T, D> {
    #[inline(always)]
    fn add_assign(&mut self, rhs: Self) {
        self.d = self.d + rhs.d;
        for i in 0..D {
            self.m[i] = self.m[i] + rhs.m[i];
        }
        self.e = self.e + rhs.e;
    }
}

impl<T: Real, const D: usize> Sub for Conserved<T, D> {
    type Output = Self;
    #[inline(always)]
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<T: Real, const D: usize> SubAssign for Conserved<T, D> {
    #[inline(always)]
    fn sub_assign(&mut self, rhs: Self) {
        self.d = self.d - rhs.d;
        for i in 0..D {
            self.m[i] = self.m[i] - rhs.m[i];
        }
        self.e = self.e - rhs.e;
    }
}

impl<T: Real, const D: usize> Mul<T> for Conserved<T, D> {
    type Output = Self;
    #[inline(always)]
    fn mul(mut self, a: T) -> Self {
        self.d = self.d * a;
        for i in 0..D {
            self.m[i] = self.m[i] * a;
        }
        self.e = self.e * a;
        self
    }
}

impl<T: Real, const D: usize> Neg for Conserved<T, D> {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        self * (-T::one())
    }
}

/// q(U) = E - sqrt(D² + |m|²), defined for any real vector.
pub fn q_value<T: Real, const D: usize>(u: &Conserved<T, D>) -> T {
    u.q()
}

pub fn is_admissible<T: Real, const D: usize>(u: &Conserved<T, D>) -> bool {
    u.is_admissible()
}

/// Forward map D = ρW, m = ρhW²v, E = ρhW² - p.
pub fn conserved_from_primitive<T: Real, const D: usize>(
    v: &Primitive<T, D>,
    eos: &EosParams<T>,
) -> Result<Conserved<T, D>> {
    v.validate()?;
    Ok(conserved_unchecked(v, eos))
}

/// Forward map without validation, for hot loops over already-valid states.
#[inline(always)]
pub fn conserved_unchecked<T: Real, const D: usize>(
    v: &Primitive<T, D>,
    eos: &EosParams<T>,
) -> Conserved<T, D> {
    let w2 = T::one() / v.one_minus_speed_sq();
    let w = w2.sqrt();
    let rho_h = v.rho + eos.gamma_ratio() * v.p;
    let mut m = [T::zero(); D];
    for i in 0..D {
        m[i] = rho_h * w2 * v.v[i];
    }
    Conserved {
        d: v.rho * w,
        m,
        e: rho_h * w2 - v.p,
    }
}

/// Residual Φ(p) of the pressure equation and its derivative.
///
/// Φ(p) = |m|²/(E+p) + D sqrt(1 - |m|²/(E+p)²) + p/(Γ-1) - E, strictly
/// increasing on [0, ∞) with Φ(0) < 0 for admissible states.
#[inline(always)]
pub fn pressure_residual<T: Real, const D: usize>(
    u: &Conserved<T, D>,
    eos: &EosParams<T>,
    p: T,
) -> (T, T) {
    let m2 = u.momentum_sq();
    let m = m2.sqrt();
    let s = u.e + p;
    let root = ((s - m) * (s + m)).sqrt();
    let inv_gm1 = T::one() / (eos.gamma() - T::one());
    let phi = m2 / s + u.d * root / s + p * inv_gm1 - u.e;
    let dphi = inv_gm1 - m2 / (s * s) * (T::one() - u.d / root);
    (phi, dphi)
}

/// Recovers (ρ, v, p) from an admissible conserved state with a
/// bisection-safeguarded Newton iteration on the pressure equation.
pub fn primitive_from_conserved<T: Real, const D: usize>(
    u: &Conserved<T, D>,
    eos: &EosParams<T>,
    opts: &RecoveryOptions<T>,
) -> Result<Primitive<T, D>> {
    if !u.is_finite() || !u.is_admissible() {
        return Err(SolverError::Inadmissible {
            d: u.d.as_f64(),
            q: u.q().as_f64(),
        });
    }
    let p = recover_pressure(u, eos, opts)?;
    let m = u.momentum_sq().sqrt();
    let s = u.e + p;
    let mut v = [T::zero(); D];
    for i in 0..D {
        v[i] = u.m[i] / s;
    }
    let rho = u.d * ((s - m) * (s + m)).sqrt() / s;
    Ok(Primitive { rho, v, p })
}

fn recover_pressure<T: Real, const D: usize>(
    u: &Conserved<T, D>,
    eos: &EosParams<T>,
    opts: &RecoveryOptions<T>,
) -> Result<T> {
    let gm1 = eos.gamma() - T::one();
    let tiny = T::min_positive_value();

    let mut lo = T::zero();
    let mut hi = (gm1 * (u.e - u.d)).max(tiny);
    let mut grow = 0;
    loop {
        let (f, _) = pressure_residual(u, eos, hi);
        if f > T::zero() {
            break;
        }
        if f == T::zero() {
            return Ok(hi);
        }
        lo = hi;
        hi = hi * T::two();
        grow += 1;
        if grow > 2100 || !hi.is_finite() {
            return Err(SolverError::Convergence {
                iterations: grow,
                residual: f.as_f64(),
                pressure: hi.as_f64(),
            });
        }
    }

    // (Γ-1) q is exact for static states and a close guess for cold flows.
    let mut p = gm1 * u.q();
    if !(p > lo && p < hi) {
        p = T::half() * (lo + hi);
    }
    let mut last_residual = T::infinity();
    for _ in 0..opts.max_iter {
        let (f, df) = pressure_residual(u, eos, p);
        last_residual = f;
        if f == T::zero() {
            return Ok(p);
        }
        if f < T::zero() {
            lo = p;
        } else {
            hi = p;
        }
        let mut next = p - f / df;
        if !(next > lo && next < hi) {
            next = T::half() * (lo + hi);
        }
        if (next - p).abs() <= opts.rel_tol * next || hi - lo <= opts.rel_tol * hi {
            return Ok(next);
        }
        if next == p {
            return Ok(next);
        }
        p = next;
    }
    Err(SolverError::Convergence {
        iterations: opts.max_iter,
        residual: last_residual.as_f64(),
        pressure: p.as_f64(),
    })
}

/// Eigenvalues of the flux Jacobian along one axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveSpeeds<T> {
    pub minus: T,
    pub contact: T,
    pub plus: T,
    /// Multiplicity of the contact eigenvalue, equal to the dimension.
    pub contact_multiplicity: usize,
}

impl<T: Real> WaveSpeeds<T> {
    /// ϱ = max(|λ₋|, |λ₊|).
    pub fn spectral_radius(&self) -> T {
        self.minus.abs().max(self.plus.abs())
    }

    /// All `D + 2` eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.contact_multiplicity + 2);
        out.push(self.minus);
        out.extend(std::iter::repeat_n(self.contact, self.contact_multiplicity));
        out.push(self.plus);
        out
    }
}

/// Characteristic speeds λ₋ <= v_axis <= λ₊ for a valid primitive state.
pub fn wave_speeds<T: Real, const D: usize>(
    v: &Primitive<T, D>,
    eos: &EosParams<T>,
    axis: usize,
) -> Result<WaveSpeeds<T>> {
    if axis >= D {
        return Err(SolverError::Config(format!("axis {axis} out of range for dimension {D}")));
    }
    v.validate()?;
    Ok(wave_speeds_unchecked(v, eos, axis))
}

#[inline(always)]
pub fn wave_speeds_unchecked<T: Real, const D: usize>(
    v: &Primitive<T, D>,
    eos: &EosParams<T>,
    axis: usize,
) -> WaveSpeeds<T> {
    let (minus, plus) = characteristic_pair(v, eos, axis);
    WaveSpeeds {
        minus,
        contact: v.v[axis],
        plus,
        contact_multiplicity: D,
    }
}

#[inline(always)]
fn characteristic_pair<T: Real, const D: usize>(
    v: &Primitive<T, D>,
    eos: &EosParams<T>,
    axis: usize,
) -> (T, T) {
    let cs2 = eos.sound_speed_sq(v.rho, v.p);
    let cs = cs2.sqrt();
    let vi = v.v[axis];
    let v2 = v.speed_sq();
    let inv_w = v.one_minus_speed_sq().sqrt();
    let disc = (T::one() - vi * vi - (v2 - vi * vi) * cs2).max(T::zero());
    let root = cs * inv_w * disc.sqrt();
    let denom = T::one() - v2 * cs2;
    let base = vi * (T::one() - cs2);
    ((base - root) / denom, (base + root) / denom)
}

/// Spectral radius ϱ along `axis`; always below one for valid states.
#[inline(always)]
pub fn spectral_radius<T: Real, const D: usize>(v: &Primitive<T, D>, eos: &EosParams<T>, axis: usize) -> T {
    let (minus, plus) = characteristic_pair(v, eos, axis);
    minus.abs().max(plus.abs())
}

/// F_axis(U) = (D v_a, m v_a + p e_a, m_a).
#[inline(always)]
pub fn physical_flux<T: Real, const D: usize>(
    v: &Primitive<T, D>,
    u: &Conserved<T, D>,
    axis: usize,
) -> Conserved<T, D> {
    let va = v.v[axis];
    let mut m = [T::zero(); D];
    for i in 0..D {
        m[i] = u.m[i] * va;
    }
    m[axis] = m[axis] + v.p;
    Conserved {
        d: u.d * va,
        m,
        e: u.m[axis],
    }
}
