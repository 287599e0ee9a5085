//! Whole-scheme checks on small 2D grids.

use srhd_core::boundary::BoundaryKind;
use srhd_core::grid::{FieldGrid, Geometry};
use srhd_core::presets::preset;
use srhd_core::residual::Scheme;
use srhd_core::solver::Solver;
use srhd_core::state::{EosParams, Primitive};
use srhd_core::time::StepControls;

fn periodic_2d(n: usize, init: impl Fn([f64; 2]) -> Primitive<f64, 2>) -> Solver<f64, 2> {
    let eos: EosParams<f64> = EosParams::new(5.0 / 3.0).unwrap();
    let h = 1.0 / n as f64;
    let mut g = FieldGrid::new(
        [n, n],
        [h, h],
        [0.0, 0.0],
        3,
        Geometry::Cartesian,
        std::array::from_fn(|_| BoundaryKind::Periodic),
    )
    .unwrap();
    g.fill_from(&eos, init).unwrap();
    Solver::new(g, Scheme::new(eos, 3).unwrap(), StepControls::for_order(3)).unwrap()
}

#[test]
fn periodic_run_conserves_totals_to_roundoff() {
    let tau = std::f64::consts::TAU;
    let mut s = periodic_2d(24, |x| {
        let bump = (tau * x[0]).sin() * (tau * x[1]).cos();
        Primitive::new(1.0 + 0.5 * bump, [0.5, -0.3 * bump], 1.0 + 0.2 * bump)
    });
    let before = s.grid.totals();
    s.run_until(0.1, |_, _| {}).unwrap();
    let after = s.grid.totals();
    assert!((after - before).max_abs() < 1e-12 * before.max_abs(), "{before:?} -> {after:?}");
}

#[test]
fn diagonal_riemann_problem_stays_transpose_symmetric() {
    let spec = preset("rp2d_1").unwrap();
    let mut s = Solver::new(
        spec.build_2d([32, 32], 3).unwrap(),
        Scheme::new(spec.eos().unwrap(), 3).unwrap(),
        StepControls::for_order(3),
    )
    .unwrap();
    s.run_until(0.1, |_, _| {}).unwrap();
    for j in 0..32 {
        for i in 0..32 {
            let (a, b) = (s.grid.get(i, j), s.grid.get(j, i));
            assert_eq!((a.d, a.e, a.m[0], a.m[1]), (b.d, b.e, b.m[1], b.m[0]), "cell ({i}, {j})");
        }
    }
}

#[test]
fn uniform_flow_along_the_axis_stays_uniform() {
    let eos: EosParams<f64> = EosParams::new(4.0 / 3.0).unwrap();
    let mut g = FieldGrid::new(
        [16, 16],
        [0.1, 0.1],
        [0.0, 0.0],
        3,
        Geometry::Axisymmetric,
        [BoundaryKind::Axis, BoundaryKind::Outflow, BoundaryKind::Periodic, BoundaryKind::Periodic],
    )
    .unwrap();
    let w = Primitive::new(1.0, [0.0, 0.6], 0.5);
    g.fill_from(&eos, |_| w).unwrap();
    let before = g.interior();
    let mut s = Solver::new(g, Scheme::new(eos, 3).unwrap(), StepControls::for_order(3)).unwrap();
    s.run_until(0.2, |_, _| {}).unwrap();
    for (a, b) in before.iter().zip(s.grid.interior()) {
        assert!((*a - b).max_abs() < 1e-12 * a.max_abs());
    }
}

#[test]
fn reflecting_box_keeps_mass() {
    let eos: EosParams<f64> = EosParams::new(1.4).unwrap();
    let mut g = FieldGrid::new(
        [20, 20],
        [0.05, 0.05],
        [0.0, 0.0],
        3,
        Geometry::Cartesian,
        std::array::from_fn(|_| BoundaryKind::Reflective),
    )
    .unwrap();
    g.fill_from(&eos, |x| {
        let hot = (x[0] - 0.5).hypot(x[1] - 0.5) < 0.2;
        Primitive::new(1.0, [0.0, 0.0], if hot { 100.0 } else { 0.1 })
    })
    .unwrap();
    let before = g.totals();
    let mut s = Solver::new(g, Scheme::new(eos, 3).unwrap(), StepControls::for_order(3)).unwrap();
    s.run_until(0.3, |_, _| {}).unwrap();
    let after = s.grid.totals();
    assert!((after.d - before.d).abs() < 1e-12 * before.d);
    assert!((after.e - before.e).abs() < 1e-12 * before.e);
    assert!(s.stats.min_q > 0.0);
}
