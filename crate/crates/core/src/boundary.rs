//! Ghost-cell boundary conditions.

use crate::error::{Result, SolverError};
use crate::grid::{FieldGrid, Geometry, Side};
use crate::scalar::Real;
use crate::state::Conserved;

#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryKind<T, const D: usize> {
    Periodic,
    /// Zeroth-order extrapolation.
    Outflow,
    /// Mirror with the normal momentum negated.
    Reflective,
    /// Fixed state where the transverse cell center lies in `[lo, hi]`, outflow elsewhere.
    Inflow { state: Conserved<T, D>, lo: T, hi: T },
    /// Symmetry axis r = 0 of an axisymmetric grid.
    Axis,
}

impl<T: Real, const D: usize> BoundaryKind<T, D> {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryKind::Periodic => "periodic",
            BoundaryKind::Outflow => "outflow",
            BoundaryKind::Reflective => "reflective",
            BoundaryKind::Inflow { .. } => "inflow",
            BoundaryKind::Axis => "axis",
        }
    }

    /// Inflow over the whole side.
    pub fn inflow(state: Conserved<T, D>) -> Self {
        BoundaryKind::Inflow {
            state,
            lo: T::neg_infinity(),
            hi: T::infinity(),
        }
    }
}

/// U with the momentum component along `axis` negated.
#[inline(always)]
pub fn mirror<T: Real, const D: usize>(u: &Conserved<T, D>, axis: usize) -> Conserved<T, D> {
    let mut out = *u;
    out.m[axis] = -out.m[axis];
    out
}

/// Fills every ghost layer: an x-pass over interior rows, then a y-pass over
/// all columns including the x ghosts, so corners are set as well.
pub fn fill_ghosts<T: Real, const D: usize>(grid: &mut FieldGrid<T, D>) -> Result<()> {
    if matches!(grid.bc[0], BoundaryKind::Axis) && grid.geometry != Geometry::Axisymmetric {
        return Err(SolverError::Config("axis boundary on a non-axisymmetric grid".into()));
    }
    let periodic_x = matches!(grid.bc[0], BoundaryKind::Periodic) as u8 + matches!(grid.bc[1], BoundaryKind::Periodic) as u8;
    if periodic_x == 1 {
        return Err(SolverError::Config("periodic boundaries must be paired on x".into()));
    }
    let g = grid.ghost as isize;
    let nx = grid.n[0] as isize;
    let ny = grid.n[1] as isize;
    for j in 0..ny {
        let transverse = grid.center(0, j)[1];
        for side in [Side::XLo, Side::XHi] {
            for k in 1..=g {
                let (ghost, inner, wrap) = if side == Side::XLo {
                    (-k, k - 1, nx - k)
                } else {
                    (nx - 1 + k, nx - k, k - 1)
                };
                let edge = if side == Side::XLo { 0 } else { nx - 1 };
                let val = ghost_value(grid, side, transverse, |i| *grid.get(i, j), inner, wrap, edge);
                *grid.get_mut(ghost, j) = val;
            }
        }
    }
    if D == 2 {
        let periodic_y =
            matches!(grid.bc[2], BoundaryKind::Periodic) as u8 + matches!(grid.bc[3], BoundaryKind::Periodic) as u8;
        if periodic_y == 1 {
            return Err(SolverError::Config("periodic boundaries must be paired on y".into()));
        }
        for i in -g..nx + g {
            let transverse = grid.center(i, 0)[0];
            for side in [Side::YLo, Side::YHi] {
                for k in 1..=g {
                    let (ghost, inner, wrap) = if side == Side::YLo {
                        (-k, k - 1, ny - k)
                    } else {
                        (ny - 1 + k, ny - k, k - 1)
                    };
                    let edge = if side == Side::YLo { 0 } else { ny - 1 };
                    let val = ghost_value(grid, side, transverse, |j| *grid.get(i, j), inner, wrap, edge);
                    *grid.get_mut(i, ghost) = val;
                }
            }
        }
    }
    Ok(())
}

#[inline(always)]
fn ghost_value<T: Real, const D: usize>(
    grid: &FieldGrid<T, D>,
    side: Side,
    transverse: T,
    at: impl Fn(isize) -> Conserved<T, D>,
    inner: isize,
    wrap: isize,
    edge: isize,
) -> Conserved<T, D> {
    let axis = side.axis();
    let n = grid.n[axis] as isize;
    let clamp = |i: isize| i.max(0).min(n - 1);
    match &grid.bc[side as usize] {
        BoundaryKind::Periodic => at(wrap.rem_euclid(n)),
        BoundaryKind::Outflow => at(edge),
        BoundaryKind::Reflective | BoundaryKind::Axis => mirror(&at(clamp(inner)), axis),
        BoundaryKind::Inflow { state, lo, hi } => {
            if transverse >= *lo && transverse <= *hi {
                *state
            } else {
                at(edge)
            }
        }
    }
}
