//! Interface fluxes: LLF splitting and flux, the WENO flux built on the
//! split, and the two-step limiter that blends the WENO flux toward LLF
//! until the neighbouring trial states keep D and q above their floors.

use crate::error::{Result, SolverError};
use crate::scalar::Real;
use crate::state::{
    physical_flux, primitive_from_conserved, spectral_radius, Conserved, EosParams, Primitive, RecoveryOptions,
};
use crate::weno::characteristic::{average_primitive, reconstruct_interface, CharacteristicBasis};
use crate::weno::kernel::WenoKernel;

/// Lower clamp applied to every viscosity coefficient.
pub const ALPHA_FLOOR: f64 = 1e-12;
/// Default viscosity amplification ϑ.
pub const DEFAULT_THETA_AMP: f64 = 1.2;
/// Default floors for D and q.
pub const DEFAULT_FLOOR: f64 = 1e-13;
/// Default roundoff margin, in units of machine epsilon times E.
pub const DEFAULT_ROUNDOFF_MARGIN: f64 = 32.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimiterFloors<T> {
    pub eps_d: T,
    pub eps_q: T,
    /// The q target of a trial state is raised to `roundoff · ε_mach · E`
    /// when that exceeds `eps_q`, so the update's own rounding (a few ulps
    /// of E) cannot push q below zero when E ≫ q.
    pub roundoff: T,
}

impl<T: Real> Default for LimiterFloors<T> {
    fn default() -> Self {
        Self {
            eps_d: T::of(DEFAULT_FLOOR),
            eps_q: T::of(DEFAULT_FLOOR),
            roundoff: T::of(DEFAULT_ROUNDOFF_MARGIN),
        }
    }
}

impl<T: Real> LimiterFloors<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.roundoff >= T::zero()) {
            return Err(SolverError::Config(format!("roundoff margin must be non-negative, got {}", self.roundoff)));
        }
        if !(self.eps_d > T::zero() && self.eps_q > T::zero()) {
            return Err(SolverError::Config(format!(
                "limiter floors must be positive (eps_D = {}, eps_q = {})",
                self.eps_d, self.eps_q
            )));
        }
        Ok(())
    }
}

/// Every flux variant at one interface together with the limiter coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfaceFluxSet<T, const D: usize> {
    pub f_weno: Conserved<T, D>,
    pub f_llf: Conserved<T, D>,
    pub f_pcp: Conserved<T, D>,
    pub theta_d: T,
    pub theta_q: T,
    pub alpha: T,
}

impl<T: Real, const D: usize> InterfaceFluxSet<T, D> {
    /// Unlimited set: the PCP flux is the WENO flux.
    pub fn unlimited(f_weno: Conserved<T, D>, f_llf: Conserved<T, D>, alpha: T) -> Self {
        Self {
            f_weno,
            f_llf,
            f_pcp: f_weno,
            theta_d: T::one(),
            theta_q: T::one(),
            alpha,
        }
    }

    pub fn is_limited(&self) -> bool {
        self.theta_d < T::one() || self.theta_q < T::one()
    }
}

fn recover<T: Real, const D: usize>(u: &Conserved<T, D>, eos: &EosParams<T>) -> Result<Primitive<T, D>> {
    primitive_from_conserved(u, eos, &RecoveryOptions::default())
}

/// α = ϑ · max(ϱ at the averaged interface state, ϱ of every stencil state).
///
/// The interface is taken between the two middle entries of `stencil`.
pub fn viscosity_alpha<T: Real, const D: usize>(
    stencil: &[Conserved<T, D>],
    eos: &EosParams<T>,
    axis: usize,
    theta_amp: T,
) -> Result<T> {
    if stencil.is_empty() {
        return Err(SolverError::SizeMismatch("empty stencil".into()));
    }
    let prims = stencil.iter().map(|u| recover(u, eos)).collect::<Result<Vec<_>>>()?;
    let mut radius = T::zero();
    for v in &prims {
        radius = radius.max(spectral_radius(v, eos, axis));
    }
    if prims.len() >= 2 {
        let mid = prims.len() / 2;
        let avg = average_primitive(&prims[mid - 1], &prims[mid]);
        radius = radius.max(spectral_radius(&avg, eos, axis));
    }
    Ok((theta_amp * radius).max(T::of(ALPHA_FLOOR)))
}

/// F̂ = ½(F(U_L) + F(U_R) − α(U_R − U_L)).
pub fn llf_flux<T: Real, const D: usize>(
    ul: &Conserved<T, D>,
    ur: &Conserved<T, D>,
    alpha: T,
    eos: &EosParams<T>,
    axis: usize,
) -> Result<Conserved<T, D>> {
    let fl = physical_flux(&recover(ul, eos)?, ul, axis);
    let fr = physical_flux(&recover(ur, eos)?, ur, axis);
    Ok(llf_from_fluxes(ul, ur, &fl, &fr, alpha))
}

#[inline(always)]
pub fn llf_from_fluxes<T: Real, const D: usize>(
    ul: &Conserved<T, D>,
    ur: &Conserved<T, D>,
    fl: &Conserved<T, D>,
    fr: &Conserved<T, D>,
    alpha: T,
) -> Conserved<T, D> {
    (*fl + *fr - (*ur - *ul) * alpha) * T::half()
}

/// H± = ½(U ± F(U)/α).
pub fn llf_split<T: Real, const D: usize>(
    u: &Conserved<T, D>,
    alpha: T,
    eos: &EosParams<T>,
    axis: usize,
) -> Result<(Conserved<T, D>, Conserved<T, D>)> {
    let v = recover(u, eos)?;
    let rho = spectral_radius(&v, eos, axis);
    if !(alpha >= rho) {
        return Err(SolverError::CflViolation {
            location: "flux splitting".into(),
            detail: format!("alpha = {alpha} is below the spectral radius {rho}"),
        });
    }
    let f = physical_flux(&v, u, axis);
    Ok(split_from_flux(u, &f, alpha))
}

#[inline(always)]
pub fn split_from_flux<T: Real, const D: usize>(
    u: &Conserved<T, D>,
    f: &Conserved<T, D>,
    alpha: T,
) -> (Conserved<T, D>, Conserved<T, D>) {
    let fa = *f * (T::one() / alpha);
    ((*u + fa) * T::half(), (*u - fa) * T::half())
}

/// F̂ = α(H⁺_L − H⁻_R) from split-flux windows.
pub fn weno_flux<T: Real, const D: usize>(
    kernel: &WenoKernel<T>,
    plus: &[Conserved<T, D>],
    minus: &[Conserved<T, D>],
    basis: &CharacteristicBasis<T>,
    alpha: T,
) -> Result<Conserved<T, D>> {
    let len = kernel.window_len();
    if plus.len() != len || minus.len() != len {
        return Err(SolverError::SizeMismatch(format!(
            "split-flux windows must have length {len} (got {} and {})",
            plus.len(),
            minus.len()
        )));
    }
    let (hp, hm) = reconstruct_interface(kernel, plus, minus, basis);
    Ok((hp - hm) * alpha)
}

/// Data the limiter needs to form trial states on both sides of an interface.
///
/// The left cell's trial is `left − mu·F̂`, the right cell's is `right + mu·F̂`.
/// A side is `None` when it is not an interior cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialBases<T, const D: usize> {
    pub left: Option<Conserved<T, D>>,
    pub right: Option<Conserved<T, D>>,
    pub mu: T,
}

impl<T: Real, const D: usize> TrialBases<T, D> {
    /// Forward-Euler form: trial states U_j ∓ (2Δt/Δx)F̂.
    pub fn euler(left: Conserved<T, D>, right: Conserved<T, D>, dt_over_dx: T) -> Self {
        Self {
            left: Some(left),
            right: Some(right),
            mu: T::two() * dt_over_dx,
        }
    }

    #[inline(always)]
    pub fn trials(&self, f: &Conserved<T, D>) -> [Option<Conserved<T, D>>; 2] {
        let df = *f * self.mu;
        [self.left.map(|b| b - df), self.right.map(|b| b + df)]
    }
}

#[inline(always)]
fn theta_for<T: Real>(llf: T, high: T, floor: T) -> T {
    if high >= floor {
        return T::one();
    }
    let gap = llf - high;
    if !(gap > T::zero()) {
        return T::one();
    }
    ((llf - floor) / gap).max(T::zero()).min(T::one())
}

/// Two-step limiter. Step I limits the mass flux so trial D ≥ ε_D; step II
/// blends the whole flux toward LLF so trial q ≥ ε_q.
pub fn pcp_limit<T: Real, const D: usize>(
    f_weno: Conserved<T, D>,
    f_llf: Conserved<T, D>,
    alpha: T,
    bases: &TrialBases<T, D>,
    floors: &LimiterFloors<T>,
) -> Result<InterfaceFluxSet<T, D>> {
    let llf = bases.trials(&f_llf);
    let weno = bases.trials(&f_weno);
    for (side, u) in llf.iter().enumerate() {
        if let Some(u) = u {
            let q = u.q();
            if !(u.d >= floors.eps_d && q >= floors.eps_q) {
                return Err(SolverError::CflViolation {
                    location: if side == 0 { "left cell" } else { "right cell" }.into(),
                    detail: format!("LLF trial state D = {:e}, q = {:e} is below the floors", u.d.as_f64(), q.as_f64()),
                });
            }
        }
    }

    let mut theta_d = T::one();
    for (l, w) in llf.iter().zip(weno.iter()) {
        if let (Some(l), Some(w)) = (l, w) {
            theta_d = theta_d.min(theta_for(l.d, w.d, floors.eps_d));
        }
    }
    let mut f_d = f_weno;
    if theta_d < T::one() {
        f_d.d = f_llf.d + theta_d * (f_weno.d - f_llf.d);
    }

    let trial_d = bases.trials(&f_d);
    let mut theta_q = T::one();
    for (l, w) in llf.iter().zip(trial_d.iter()) {
        if let (Some(l), Some(w)) = (l, w) {
            let ql = l.q();
            let target = floors.eps_q.max((floors.roundoff * T::epsilon() * l.e.abs()).min(ql));
            theta_q = theta_q.min(theta_for(ql, w.q(), target));
        }
    }
    let f_pcp = if theta_q < T::one() {
        f_llf * (T::one() - theta_q) + f_d * theta_q
    } else {
        f_d
    };
    Ok(InterfaceFluxSet {
        f_weno,
        f_llf,
        f_pcp,
        theta_d,
        theta_q,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::conserved_unchecked;

    fn eos() -> EosParams<f64> {
        EosParams::new(5.0 / 3.0).unwrap()
    }

    #[test]
    fn quiescent_alpha() {
        let e = eos();
        let u = conserved_unchecked(&Primitive::new(1.0, [0.0], 1.0), &e);
        let a = viscosity_alpha(&[u; 6], &e, 0, 1.2).unwrap();
        let cs = e.sound_speed_sq(1.0, 1.0).sqrt();
        assert!((a - 1.2 * cs).abs() < 1e-15);
    }

    #[test]
    fn riemann_stencil_alpha_is_subluminal() {
        let e = eos();
        let l = conserved_unchecked(&Primitive::new(1.0, [0.0], 1e4), &e);
        let r = conserved_unchecked(&Primitive::new(1.0, [0.0], 1e-8), &e);
        let a = viscosity_alpha(&[l, l, l, r, r, r], &e, 0, 1.2).unwrap();
        assert!(a < 1.2);
        assert!(a >= spectral_radius(&Primitive::new(1.0, [0.0], 1e4), &e, 0));
    }

    #[test]
    fn llf_consistency() {
        let e = eos();
        let v = Primitive::new(1.0, [0.5], 0.3);
        let u = conserved_unchecked(&v, &e);
        let f = llf_flux(&u, &u, 0.9, &e, 0).unwrap();
        let back = recover(&u, &e).unwrap();
        assert_eq!(f, physical_flux(&back, &u, 0));
    }

    #[test]
    fn llf_static_mass_flux() {
        let e = eos();
        let ul = conserved_unchecked(&Primitive::new(1.0, [0.0], 1.0), &e);
        let ur = conserved_unchecked(&Primitive::new(0.25, [0.0], 1.0), &e);
        let f = llf_flux(&ul, &ur, 0.8, &e, 0).unwrap();
        assert!((f.d - (-0.8 * (ur.d - ul.d) / 2.0)).abs() < 1e-16);
    }

    #[test]
    fn split_identities() {
        let e = eos();
        let v = Primitive::new(1.0, [0.0], 1.0);
        let u = conserved_unchecked(&v, &e);
        let cs = e.sound_speed_sq(1.0, 1.0).sqrt();
        let (hp, hm) = llf_split(&u, cs, &e, 0).unwrap();
        assert!(((hp + hm) - u).max_abs() < 1e-15);
        let f = physical_flux(&v, &u, 0);
        assert!(((hp - hm) * cs - f).max_abs() < 1e-14);
        assert!((hp * 2.0).is_admissible() && (hm * 2.0).is_admissible());
        assert!(llf_split(&u, 0.5 * cs, &e, 0).is_err());
    }

    #[test]
    fn uniform_weno_flux() {
        let e = eos();
        let k = WenoKernel::<f64>::new(3).unwrap();
        let v = Primitive::new(2.0, [0.3, 0.2], 0.4);
        let u = conserved_unchecked(&v, &e);
        let f = physical_flux(&v, &u, 0);
        let (hp, hm) = split_from_flux(&u, &f, 1.0);
        let b = crate::weno::basis_at(&v, &e, 0);
        let fw = weno_flux(&k, &[hp; 5], &[hm; 5], &b, 1.0).unwrap();
        assert!((fw - f).max_abs() < 1e-14 * f.max_abs());
    }

    #[test]
    fn limiter_no_op() {
        let u = Conserved::new(1.0, [0.0], 2.0);
        let fw = Conserved::new(0.1, [0.2], 0.0);
        let fl = Conserved::new(0.05, [0.2], 0.01);
        let s = pcp_limit(fw, fl, 1.0, &TrialBases::euler(u, u, 0.1), &LimiterFloors::default()).unwrap();
        assert_eq!(s.theta_d, 1.0);
        assert_eq!(s.theta_q, 1.0);
        assert_eq!(s.f_pcp, fw);
    }

    #[test]
    fn limiter_density_binding() {
        // left trial density: 1 - 2*0.5*F.d; LLF gives 1e-3, WENO gives -0.5.
        let floors = LimiterFloors::<f64>::default();
        let u = Conserved::new(1.0, [0.0], 10.0);
        let bases = TrialBases::euler(u, Conserved::new(1.0, [0.0], 10.0), 0.5);
        let fl = Conserved::new(1.0 - 1e-3, [0.0], 0.0);
        let fw = Conserved::new(1.5, [0.0], 0.0);
        let s = pcp_limit(fw, fl, 1.0, &bases, &floors).unwrap();
        let d_llf = 1e-3;
        let d_weno = 1.0 - 1.5;
        let expect = (d_llf - floors.eps_d) / (d_llf - d_weno);
        assert!((s.theta_d - expect).abs() < 1e-15);
        let trial = bases.trials(&s.f_pcp)[0].unwrap();
        assert!((trial.d - floors.eps_d).abs() < 1e-15);
        assert!(trial.q() >= floors.eps_q);
    }

    #[test]
    fn limiter_energy_binding() {
        let floors = LimiterFloors::<f64>::default();
        let u = Conserved::new(1.0, [0.0], 2.0);
        let bases = TrialBases::euler(u, u, 0.5);
        let fl = Conserved::new(0.0, [0.0], 0.0);
        let fw = Conserved::new(0.0, [0.0], 1.5);
        let s = pcp_limit(fw, fl, 1.0, &bases, &floors).unwrap();
        assert_eq!(s.theta_d, 1.0);
        assert!(s.theta_q < 1.0 && s.theta_q > 0.0);
        for t in bases.trials(&s.f_pcp).iter().flatten() {
            assert!(t.d >= floors.eps_d);
            assert!(t.q() >= floors.eps_q * (1.0 - 1e-3) - 1e-15);
        }
    }

    #[test]
    fn llf_precondition_violation() {
        let u = Conserved::new(1.0, [0.0], 2.0);
        let bases = TrialBases::euler(u, u, 0.5);
        let fl = Conserved::new(2.0, [0.0], 0.0);
        let r = pcp_limit(fl, fl, 1.0, &bases, &LimiterFloors::default());
        assert!(matches!(r, Err(SolverError::CflViolation { .. })));
    }

    #[test]
    fn one_sided_interface() {
        let u = Conserved::new(1.0, [0.0], 2.0);
        let bases = TrialBases {
            left: None,
            right: Some(u),
            mu: 1.0,
        };
        let fl = Conserved::new(0.0, [0.0], 0.0);
        let fw = Conserved::new(-5.0, [0.0], 0.0);
        let s = pcp_limit(fw, fl, 1.0, &bases, &LimiterFloors::default()).unwrap();
        assert!(s.theta_d < 1.0);
        assert!(bases.trials(&s.f_pcp)[1].unwrap().d >= 1e-13 * (1.0 - 1e-3));
    }
}
