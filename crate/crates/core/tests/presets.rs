//! Built-in problems: geometry, initial data and boundaries.

use srhd_core::grid::Geometry;
use srhd_core::presets::{preset, pressure_for_sound_speed, SideSpec, PRESET_NAMES};
use srhd_core::state::EosParams;

#[test]
fn every_preset_builds_an_admissible_grid() {
    for name in PRESET_NAMES {
        let spec = preset(name).unwrap();
        let n = if spec.dim == 1 { [32, 1] } else { spec.scaled_resolution(24) };
        if spec.dim == 1 {
            let g = spec.build_1d(n[0], 3).unwrap();
            assert!(g.interior().iter().all(|u| u.is_admissible()), "{name}");
        } else {
            let g = spec.build_2d(n, 3).unwrap();
            assert!(g.interior().iter().all(|u| u.is_admissible()), "{name}");
            assert_eq!(g.geometry == Geometry::Axisymmetric, name.starts_with("jet"), "{name}");
        }
        assert!(spec.t_final > 0.0 && spec.gamma > 1.0);
    }
    assert!(preset("sod").is_err());
}

#[test]
fn scaled_resolution_keeps_the_aspect_ratio() {
    let spec = preset("ffstep").unwrap();
    assert_eq!(spec.resolution, [300, 100]);
    assert_eq!(spec.scaled_resolution(150), [150, 50]);
    let jet = preset("jet_a1").unwrap();
    assert_eq!(jet.scaled_resolution(70), [70, 500]);
}

#[test]
fn forward_step_masks_the_obstacle() {
    let spec = preset("ffstep").unwrap();
    let g = spec.build_2d([30, 10], 3).unwrap();
    // cells are 0.1 wide: the step covers i >= 6, j < 2
    assert!(g.is_solid(10, 0) && g.is_solid(6, 1));
    assert!(!g.is_solid(5, 0) && !g.is_solid(10, 2));
}

#[test]
fn jet_nozzle_sits_on_the_axis() {
    let spec = preset("jet_c2").unwrap();
    let SideSpec::Inflow { state, lo, hi } = &spec.bc[2] else {
        panic!("lower boundary of the jet is not an inflow");
    };
    assert!(*lo <= 0.0 && *hi == 1.0);
    assert_eq!((state.rho, state.v[1]), (0.01, 0.99));
    assert!(matches!(spec.bc[0], SideSpec::Axis));
    // the beam is in pressure balance with the ambient medium
    assert_eq!(state.p, spec.initial([3.0, 3.0]).p);
}

#[test]
fn sound_speed_inversion_round_trips() {
    for (g, rho, cs) in [(5.0 / 3.0, 1.0, 0.1), (4.0 / 3.0, 0.01, 0.5), (1.4, 1.4, 0.333)] {
        let p = pressure_for_sound_speed(rho, cs, g).unwrap();
        let eos: EosParams<f64> = EosParams::new(g).unwrap();
        assert!((eos.sound_speed_sq(rho, p).sqrt() / cs - 1.0).abs() < 1e-13);
    }
    // c_s is capped by sqrt(Γ - 1)
    assert!(pressure_for_sound_speed(1.0, 0.6, 4.0 / 3.0).is_err());
}
