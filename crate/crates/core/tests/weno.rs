//! Reconstruction and eigensystem checks.

use srhd_core::state::{conserved_from_primitive, physical_flux, primitive_from_conserved, Conserved, EosParams, Primitive, RecoveryOptions};
use srhd_core::weno::{basis_at, WenoKernel};

/// Average of x^k over [j - 1/2, j + 1/2].
fn cell_average(k: i32, j: f64) -> f64 {
    let f = |x: f64| x.powi(k + 1) / (k + 1) as f64;
    f(j + 0.5) - f(j - 0.5)
}

fn window(r: usize, k: i32) -> Vec<f64> {
    (0..2 * r - 1).map(|i| cell_average(k, i as f64 - (r - 1) as f64)).collect()
}

#[test]
fn linear_weights_are_exact_to_degree_2r_minus_2() {
    for r in [3, 5] {
        let kern = WenoKernel::<f64>::new(r).unwrap();
        for k in 0..=(2 * r as i32 - 2) {
            let w = window(r, k);
            let got = kern.linear_value(&w);
            let want = 0.5f64.powi(k);
            assert!((got - want).abs() < 1e-11, "r = {r}, x^{k}: {got} vs {want}");
        }
        let w = window(r, 2 * r as i32 - 1);
        assert!((kern.linear_value(&w) - 0.5f64.powi(2 * r as i32 - 1)).abs() > 1e-6);
    }
}

#[test]
fn nonlinear_value_is_exact_when_every_candidate_is() {
    for r in [3, 5] {
        let kern = WenoKernel::<f64>::new(r).unwrap();
        for k in 0..r as i32 {
            let w = window(r, k);
            assert!((kern.left_value(&w) - 0.5f64.powi(k)).abs() < 1e-11);
            // right face of the mirrored data is the left face at -1/2
            let rev: Vec<f64> = w.iter().rev().copied().collect();
            assert!((kern.right_value(&rev) - 0.5f64.powi(k)).abs() < 1e-11);
        }
    }
}

#[test]
fn smooth_data_converges_at_design_order() {
    for r in [3, 5] {
        let kern = WenoKernel::<f64>::new(r).unwrap();
        let err = |h: f64| {
            let w: Vec<f64> = (0..2 * r - 1)
                .map(|i| {
                    let x = (i as f64 - (r - 1) as f64) * h + 0.3;
                    ((x + 0.5 * h).sin() - (x - 0.5 * h).sin()) / h
                })
                .collect();
            (kern.left_value(&w) - (0.3 + 0.5 * h).cos()).abs()
        };
        // coarse enough that r = 5 stays above roundoff
        let h = if r == 3 { 0.1 } else { 0.4 };
        let (e1, e2) = (err(h), err(0.5 * h));
        let order = (e1 / e2).log2();
        assert!(order > (2 * r - 1) as f64 - 0.7, "r = {r}: order {order}");
    }
}

#[test]
fn jump_keeps_the_reconstruction_essentially_nonoscillatory() {
    let kern = WenoKernel::<f64>::new(3).unwrap();
    let w = [1.0, 1.0, 1.0, 0.0, 0.0];
    let v = kern.left_value(&w);
    assert!((v - 1.0).abs() < 1e-6, "{v}");
}

#[test]
fn right_eigenvectors_diagonalise_a_numerical_jacobian() {
    let eos: EosParams<f64> = EosParams::new(5.0 / 3.0).unwrap();
    let opts = RecoveryOptions::default();
    let v = Primitive::new(1.3, [0.4, -0.5], 0.8);
    let u = conserved_from_primitive(&v, &eos).unwrap();
    for axis in 0..2 {
        let basis = basis_at(&v, &eos, axis);
        assert!(!basis.fallback);
        let flux = |u: Conserved<f64, 2>| physical_flux(&primitive_from_conserved(&u, &eos, &opts).unwrap(), &u, axis);
        let mut jac = [[0.0; 4]; 4];
        for j in 0..4 {
            let h = 1e-6 * u[j].abs().max(1e-3);
            let (mut up, mut um) = (u, u);
            up[j] += h;
            um[j] -= h;
            let df = (flux(up) - flux(um)) * (0.5 / h);
            for i in 0..4 {
                jac[i][j] = df[i];
            }
        }
        for k in 0..4 {
            let col: Vec<f64> = (0..4).map(|i| basis.r[i][k]).collect();
            let norm = col.iter().map(|x| x.abs()).fold(0.0, f64::max);
            for i in 0..4 {
                let av: f64 = (0..4).map(|j| jac[i][j] * col[j]).sum();
                assert!((av - basis.lambda[k] * col[i]).abs() < 1e-6 * norm, "axis {axis} column {k} row {i}");
            }
        }
        let w = basis.project(&u);
        let back: Conserved<f64, 2> = basis.unproject(&w);
        assert!((back - u).max_abs() < 1e-12 * u.max_abs());
    }
}
