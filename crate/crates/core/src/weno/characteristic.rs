//! Characteristic projection for system reconstruction.
//!
//! The right eigenvectors of the directional flux Jacobian are evaluated in
//! closed form at an averaged interface state. Other directions reuse the
//! x-direction formulas by exchanging the momentum components.

use crate::error::Result;
use crate::scalar::Real;
use crate::state::{
    primitive_from_conserved, wave_speeds_unchecked, Conserved, EosParams, Primitive, RecoveryOptions,
    MAX_COMPONENTS,
};
use crate::weno::kernel::{WenoKernel, MAX_WINDOW};

type Mat<T> = [[T; MAX_COMPONENTS]; MAX_COMPONENTS];

/// How the interface state for the eigensystem is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AverageKind {
    /// Arithmetic mean of the two recovered primitive states.
    #[default]
    Primitive,
    /// Primitive recovery of the arithmetic mean of the conserved states.
    Conserved,
}

/// Right eigenvector matrix `r` (columns) and its inverse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicBasis<T> {
    pub n: usize,
    pub r: Mat<T>,
    pub r_inv: Mat<T>,
    /// Eigenvalue of each column.
    pub lambda: [T; MAX_COMPONENTS],
    /// Set when the eigensystem was unusable and the identity was substituted.
    pub fallback: bool,
}

/// Inversion residual above which the identity basis is substituted.
pub const INVERSE_TOL: f64 = 1e-10;

impl<T: Real> CharacteristicBasis<T> {
    /// Component-wise basis R = R⁻¹ = I.
    pub fn identity(n: usize) -> Self {
        let mut r = [[T::zero(); MAX_COMPONENTS]; MAX_COMPONENTS];
        for (i, row) in r.iter_mut().enumerate().take(n) {
            row[i] = T::one();
        }
        Self {
            n,
            r,
            r_inv: r,
            lambda: [T::zero(); MAX_COMPONENTS],
            fallback: false,
        }
    }

    fn fallback(n: usize) -> Self {
        Self {
            fallback: true,
            ..Self::identity(n)
        }
    }

    /// ‖R·R⁻¹ − I‖_∞.
    pub fn inverse_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            let mut row = T::zero();
            for j in 0..self.n {
                let mut s = T::zero();
                for k in 0..self.n {
                    s = s + self.r[i][k] * self.r_inv[k][j];
                }
                if i == j {
                    s = s - T::one();
                }
                row = row + s.abs();
            }
            worst = worst.max(row);
        }
        worst
    }

    /// Characteristic variables R⁻¹ u.
    #[inline(always)]
    pub fn project<const D: usize>(&self, u: &Conserved<T, D>) -> [T; MAX_COMPONENTS] {
        let mut out = [T::zero(); MAX_COMPONENTS];
        for (i, o) in out.iter_mut().enumerate().take(self.n) {
            let mut s = T::zero();
            for j in 0..self.n {
                s = s + self.r_inv[i][j] * u[j];
            }
            *o = s;
        }
        out
    }

    /// Conserved vector R w.
    #[inline(always)]
    pub fn unproject<const D: usize>(&self, w: &[T; MAX_COMPONENTS]) -> Conserved<T, D> {
        let mut out = Conserved::zero();
        for i in 0..self.n {
            let mut s = T::zero();
            for j in 0..self.n {
                s = s + self.r[i][j] * w[j];
            }
            out[i] = s;
        }
        out
    }
}

/// Inverse of the leading n x n block by Gauss-Jordan elimination with partial pivoting.
pub fn invert_small<T: Real>(a: &Mat<T>, n: usize) -> Option<Mat<T>> {
    let mut m = *a;
    let mut inv = [[T::zero(); MAX_COMPONENTS]; MAX_COMPONENTS];
    for (i, row) in inv.iter_mut().enumerate().take(n) {
        row[i] = T::one();
    }
    for col in 0..n {
        let mut piv = col;
        for i in col + 1..n {
            if m[i][col].abs() > m[piv][col].abs() {
                piv = i;
            }
        }
        if !(m[piv][col].abs() > T::zero()) {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = T::one() / m[col][col];
        for j in 0..n {
            m[col][j] = m[col][j] * p;
            inv[col][j] = inv[col][j] * p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = m[i][col];
            if f == T::zero() {
                continue;
            }
            for j in 0..n {
                m[i][j] = m[i][j] - f * m[col][j];
                inv[i][j] = inv[i][j] - f * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// Closed-form eigenvectors of the x-direction Jacobian at `v`.
fn x_eigenvectors<T: Real, const D: usize>(v: &Primitive<T, D>, eos: &EosParams<T>) -> (Mat<T>, [T; MAX_COMPONENTS]) {
    let n = D + 2;
    let one = T::one();
    let two = T::two();
    let h = eos.specific_enthalpy(v.rho, v.p);
    let w = v.lorentz_factor();
    let w2 = w * w;
    let cs2 = eos.sound_speed_sq(v.rho, v.p);
    let gm1 = eos.gamma() - one;
    let kappa = gm1 / (gm1 - cs2);
    let vx = v.v[0];
    let ws = wave_speeds_unchecked(v, eos, 0);

    let mut r = [[T::zero(); MAX_COMPONENTS]; MAX_COMPONENTS];
    let mut lambda = [T::zero(); MAX_COMPONENTS];
    let mut set_col = |c: usize, col: [T; MAX_COMPONENTS]| {
        for i in 0..n {
            r[i][c] = col[i];
        }
    };

    let acoustic = |lam: T| {
        let a = (one - vx * vx) / (one - vx * lam);
        let mut col = [T::zero(); MAX_COMPONENTS];
        col[0] = one;
        col[1] = h * w * a * lam;
        for t in 1..D {
            col[1 + t] = h * w * v.v[t];
        }
        col[n - 1] = h * w * a;
        col
    };

    set_col(0, acoustic(ws.minus));
    lambda[0] = ws.minus;

    let mut entropy = [T::zero(); MAX_COMPONENTS];
    entropy[0] = kappa / (h * w);
    for t in 0..D {
        entropy[1 + t] = v.v[t];
    }
    entropy[n - 1] = one;
    set_col(1, entropy);
    lambda[1] = vx;

    for t in 1..D {
        let vt = v.v[t];
        let mut col = [T::zero(); MAX_COMPONENTS];
        col[0] = w * vt;
        for s in 0..D {
            col[1 + s] = two * h * w2 * v.v[s] * vt;
        }
        col[1 + t] = h * (one + two * w2 * vt * vt);
        col[n - 1] = two * h * w2 * vt;
        set_col(1 + t, col);
        lambda[1 + t] = vx;
    }

    set_col(n - 1, acoustic(ws.plus));
    lambda[n - 1] = ws.plus;
    (r, lambda)
}

/// Eigen basis of the `axis` flux Jacobian at a given primitive state.
pub fn basis_at<T: Real, const D: usize>(v: &Primitive<T, D>, eos: &EosParams<T>, axis: usize) -> CharacteristicBasis<T> {
    let n = D + 2;
    let vs = v.swap_axis(axis);
    let (mut r, lambda) = x_eigenvectors(&vs, eos);
    if axis != 0 {
        r.swap(1, 1 + axis);
    }
    let finite = r.iter().take(n).all(|row| row.iter().take(n).all(|x| x.is_finite()));
    if !finite {
        return CharacteristicBasis::fallback(n);
    }
    let Some(r_inv) = invert_small(&r, n) else {
        return CharacteristicBasis::fallback(n);
    };
    let basis = CharacteristicBasis {
        n,
        r,
        r_inv,
        lambda,
        fallback: false,
    };
    let res = basis.inverse_residual();
    if !(res <= T::of(INVERSE_TOL)) {
        return CharacteristicBasis::fallback(n);
    }
    basis
}

/// Interface state used for the eigensystem.
#[inline(always)]
pub fn average_primitive<T: Real, const D: usize>(a: &Primitive<T, D>, b: &Primitive<T, D>) -> Primitive<T, D> {
    let half = T::half();
    let mut v = [T::zero(); D];
    for i in 0..D {
        v[i] = half * (a.v[i] + b.v[i]);
    }
    Primitive {
        rho: half * (a.rho + b.rho),
        v,
        p: half * (a.p + b.p),
    }
}

/// Basis for the interface between `ul` and `ur` along `axis`.
pub fn characteristic_basis<T: Real, const D: usize>(
    ul: &Conserved<T, D>,
    ur: &Conserved<T, D>,
    eos: &EosParams<T>,
    axis: usize,
    average: AverageKind,
) -> Result<CharacteristicBasis<T>> {
    let opts = RecoveryOptions::default();
    let vm = match average {
        AverageKind::Primitive => {
            let vl = primitive_from_conserved(ul, eos, &opts)?;
            let vr = primitive_from_conserved(ur, eos, &opts)?;
            average_primitive(&vl, &vr)
        }
        AverageKind::Conserved => primitive_from_conserved(&((*ul + *ur) * T::half()), eos, &opts)?,
    };
    Ok(basis_at(&vm, eos, axis))
}

/// Reconstructs H⁺ (left-limited) and H⁻ (right-limited) at one interface.
///
/// `plus` holds the 2r - 1 plus-split vectors ending one cell before the
/// interface's right neighbour; `minus` is the same window shifted by one cell.
#[inline]
pub fn reconstruct_interface<T: Real, const D: usize>(
    kernel: &WenoKernel<T>,
    plus: &[Conserved<T, D>],
    minus: &[Conserved<T, D>],
    basis: &CharacteristicBasis<T>,
) -> (Conserved<T, D>, Conserved<T, D>) {
    let len = kernel.window_len();
    debug_assert_eq!(plus.len(), len);
    debug_assert_eq!(minus.len(), len);
    let n = D + 2;
    // Reconstruction commutes with adding a constant, so only offsets from
    // the window centers pass through the basis change.
    let mid = len / 2;
    let (pc, mc) = (plus[mid], minus[mid]);
    let mut wp = [[T::zero(); MAX_WINDOW]; MAX_COMPONENTS];
    let mut wm = [[T::zero(); MAX_WINDOW]; MAX_COMPONENTS];
    for i in 0..len {
        if i == mid {
            continue;
        }
        let a = basis.project(&(plus[i] - pc));
        let b = basis.project(&(minus[i] - mc));
        for k in 0..n {
            wp[k][i] = a[k];
            wm[k][i] = b[k];
        }
    }
    let mut cp = [T::zero(); MAX_COMPONENTS];
    let mut cm = [T::zero(); MAX_COMPONENTS];
    for k in 0..n {
        cp[k] = kernel.left_value(&wp[k][..len]);
        cm[k] = kernel.right_value(&wm[k][..len]);
    }
    (pc + basis.unproject(&cp), mc + basis.unproject(&cm))
}
