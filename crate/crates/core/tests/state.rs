//! Pointwise algebra against closed forms.

use proptest::prelude::*;
use srhd_core::state::{
    conserved_from_primitive, physical_flux, primitive_from_conserved, wave_speeds, Conserved, EosParams, Primitive,
    RecoveryOptions,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn recovery_inverts_the_forward_map(
        gamma in 1.05f64..2.0,
        lrho in -8.0f64..4.0,
        lp in -8.0f64..4.0,
        speed in 0.0f64..0.9999,
        angle in 0.0f64..std::f64::consts::TAU,
    ) {
        let eos: EosParams<f64> = EosParams::new(gamma).unwrap();
        let v = Primitive::new(10f64.powf(lrho), [speed * angle.cos(), speed * angle.sin()], 10f64.powf(lp));
        let u = conserved_from_primitive(&v, &eos).unwrap();
        prop_assert!(u.is_admissible());
        let back = primitive_from_conserved(&u, &eos, &RecoveryOptions::default()).unwrap();
        let w = v.lorentz_factor();
        // the pressure is ill-conditioned when rho h W^2 dwarfs p
        let cond = (v.rho + gamma / (gamma - 1.0) * v.p) * w * w / v.p;
        prop_assert!(rel(back.p, v.p) < 1e-13 * cond.max(1.0), "p {} vs {}", back.p, v.p);
        prop_assert!(rel(back.rho, v.rho) < 1e-9);
    }

    #[test]
    fn q_is_energy_minus_rest_and_momentum_norm(d in 1e-6f64..1e3, m in -1e3f64..1e3, e in 1e-6f64..1e4) {
        let u = Conserved::<f64, 1>::new(d, [m], e);
        let q: f64 = e - (d * d + m * m).sqrt();
        prop_assert!((u.q() - q).abs() <= 1e-12 * e);
        prop_assert_eq!(u.is_admissible(), d > 0.0 && u.q() > 0.0);
    }
}

#[test]
fn conserved_variables_match_hand_values() {
    // Γ = 2, ρ = 1, v = 0.6, p = 1: W = 1.25, h = 3
    let eos: EosParams<f64> = EosParams::new(2.0).unwrap();
    let u = conserved_from_primitive(&Primitive::new(1.0, [0.6], 1.0), &eos).unwrap();
    assert!(rel(u.d, 1.25) < 1e-15);
    assert!(rel(u.m[0], 3.0 * 1.5625 * 0.6) < 1e-15);
    assert!(rel(u.e, 3.0 * 1.5625 - 1.0) < 1e-15);
}

#[test]
fn wave_speeds_follow_velocity_addition() {
    let eos: EosParams<f64> = EosParams::new(5.0 / 3.0).unwrap();
    let v = Primitive::new(2.0, [0.7], 3.0);
    let cs = (eos.gamma() * v.p / (v.rho + eos.gamma_ratio() * v.p)).sqrt();
    let s = wave_speeds(&v, &eos, 0).unwrap();
    assert!(rel(s.plus, (0.7 + cs) / (1.0 + 0.7 * cs)) < 1e-14);
    assert!(rel(s.minus, (0.7 - cs) / (1.0 - 0.7 * cs)) < 1e-14);
    assert!(rel(s.contact, 0.7) < 1e-15);
}

#[test]
fn transverse_speeds_shrink_with_tangential_motion() {
    // v = (0, vt): λ± = ±c sqrt((1 - vt²)(1 - vt² c²)) / (1 - vt² c²)
    let eos: EosParams<f64> = EosParams::new(4.0 / 3.0).unwrap();
    let v = Primitive::new(1.0, [0.0, 0.8], 1.0);
    let cs2 = eos.gamma() * v.p / (v.rho + eos.gamma_ratio() * v.p);
    let s = wave_speeds(&v, &eos, 0).unwrap();
    let vt2 = 0.64;
    let expect = (cs2 * (1.0 - vt2) * (1.0 - vt2 * cs2)).sqrt() / (1.0 - vt2 * cs2);
    assert!(rel(s.plus, expect) < 1e-14, "{} vs {expect}", s.plus);
    assert!(rel(-s.minus, expect) < 1e-14);
}

#[test]
fn flux_is_momentum_along_the_axis_plus_pressure() {
    let eos: EosParams<f64> = EosParams::new(1.4).unwrap();
    let v = Primitive::new(0.5, [0.3, -0.4], 2.0);
    let u = conserved_from_primitive(&v, &eos).unwrap();
    let f = physical_flux(&v, &u, 1);
    assert!(rel(f.d, u.d * -0.4) < 1e-15);
    assert!(rel(f.m[0], u.m[0] * -0.4) < 1e-15);
    assert!(rel(f.m[1], u.m[1] * -0.4 + 2.0) < 1e-15);
    assert!(rel(f.e, u.m[1]) < 1e-15);
}

#[test]
fn recovery_rejects_inadmissible_states() {
    let eos: EosParams<f64> = EosParams::new(5.0 / 3.0).unwrap();
    let opts = RecoveryOptions::default();
    assert!(primitive_from_conserved(&Conserved::<f64, 1>::new(1.0, [2.0], 2.0), &eos, &opts).is_err());
    assert!(primitive_from_conserved(&Conserved::<f64, 1>::new(-1.0, [0.0], 2.0), &eos, &opts).is_err());
}
