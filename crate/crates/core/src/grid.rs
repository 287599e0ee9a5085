//! Uniform structured grids of conserved states with ghost layers.

use crate::boundary::BoundaryKind;
use crate::error::{Result, SolverError};
use crate::scalar::Real;
use crate::state::{conserved_from_primitive, Conserved, EosParams, Primitive};

/// Coordinate system of a two-dimensional grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Geometry {
    #[default]
    Cartesian,
    /// (r, z) with r along the first axis and the source term active.
    Axisymmetric,
}

/// Sides in the order used by [`FieldGrid::bc`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    XLo = 0,
    XHi = 1,
    YLo = 2,
    YHi = 3,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::XLo, Side::XHi, Side::YLo, Side::YHi];

    pub fn axis(self) -> usize {
        (self as usize) / 2
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::XLo => "x-lo",
            Side::XHi => "x-hi",
            Side::YLo => "y-lo",
            Side::YHi => "y-hi",
        }
    }
}

/// Cell-centered field over `n[0] x n[1]` interior cells (`n[1] = 1` in 1D),
/// stored row-major by y then x with `ghost` layers on every active side.
#[derive(Clone, Debug)]
pub struct FieldGrid<T, const D: usize> {
    pub n: [usize; 2],
    pub spacing: [T; 2],
    pub origin: [T; 2],
    pub ghost: usize,
    pub geometry: Geometry,
    pub bc: [BoundaryKind<T, D>; 4],
    solid: Option<Vec<bool>>,
    data: Vec<Conserved<T, D>>,
}

impl<T: Real, const D: usize> FieldGrid<T, D> {
    pub fn new(
        n: [usize; 2],
        spacing: [T; 2],
        origin: [T; 2],
        ghost: usize,
        geometry: Geometry,
        bc: [BoundaryKind<T, D>; 4],
    ) -> Result<Self> {
        if !(D == 1 || D == 2) {
            return Err(SolverError::DegenerateGrid(format!("grids support 1 or 2 dimensions, not {D}")));
        }
        let active = if D == 1 { 1 } else { 2 };
        for a in 0..active {
            if n[a] == 0 {
                return Err(SolverError::DegenerateGrid(format!("axis {a} has no cells")));
            }
            if !(spacing[a] > T::zero() && spacing[a].is_finite()) {
                return Err(SolverError::DegenerateGrid(format!("axis {a} spacing must be positive")));
            }
        }
        if D == 1 && n[1] != 1 {
            return Err(SolverError::DegenerateGrid("1D grids have exactly one row".into()));
        }
        if ghost == 0 {
            return Err(SolverError::DegenerateGrid("ghost width must be at least one".into()));
        }
        if geometry == Geometry::Axisymmetric && D != 2 {
            return Err(SolverError::Config("axisymmetric geometry needs a 2D grid".into()));
        }
        for side in Side::ALL {
            if matches!(bc[side as usize], BoundaryKind::Axis) {
                if geometry != Geometry::Axisymmetric || side != Side::XLo {
                    return Err(SolverError::Config(format!(
                        "axis boundary is only valid on the r = 0 side of an axisymmetric grid (found on {})",
                        side.name()
                    )));
                }
            }
        }
        let padded = Self::padded_dims(n, ghost);
        Ok(Self {
            n,
            spacing,
            origin,
            ghost,
            geometry,
            bc,
            solid: None,
            data: vec![Conserved::zero(); padded[0] * padded[1]],
        })
    }

    fn padded_dims(n: [usize; 2], ghost: usize) -> [usize; 2] {
        if D == 1 {
            [n[0] + 2 * ghost, 1]
        } else {
            [n[0] + 2 * ghost, n[1] + 2 * ghost]
        }
    }

    #[inline(always)]
    pub fn padded(&self) -> [usize; 2] {
        Self::padded_dims(self.n, self.ghost)
    }

    #[inline(always)]
    pub fn ghost_y(&self) -> usize {
        if D == 1 {
            0
        } else {
            self.ghost
        }
    }

    /// Flat index of cell (i, j); negative and past-the-end indices address ghosts.
    #[inline(always)]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let px = self.n[0] + 2 * self.ghost;
        ((j + self.ghost_y() as isize) as usize) * px + (i + self.ghost as isize) as usize
    }

    #[inline(always)]
    pub fn get(&self, i: isize, j: isize) -> &Conserved<T, D> {
        &self.data[self.idx(i, j)]
    }

    #[inline(always)]
    pub fn get_mut(&mut self, i: isize, j: isize) -> &mut Conserved<T, D> {
        let k = self.idx(i, j);
        &mut self.data[k]
    }

    pub fn data(&self) -> &[Conserved<T, D>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Conserved<T, D>] {
        &mut self.data
    }

    pub fn cell_count(&self) -> usize {
        self.n[0] * self.n[1]
    }

    /// Center of interior cell (i, j) along both axes.
    #[inline(always)]
    pub fn center(&self, i: isize, j: isize) -> [T; 2] {
        [
            self.origin[0] + (T::of(i as f64) + T::half()) * self.spacing[0],
            self.origin[1] + (T::of(j as f64) + T::half()) * self.spacing[1],
        ]
    }

    pub fn set_solid(&mut self, mask: Vec<bool>) -> Result<()> {
        if mask.len() != self.cell_count() {
            return Err(SolverError::SizeMismatch(format!(
                "solid mask has {} entries for {} cells",
                mask.len(),
                self.cell_count()
            )));
        }
        self.solid = if mask.iter().any(|&s| s) { Some(mask) } else { None };
        Ok(())
    }

    #[inline(always)]
    pub fn is_solid(&self, i: isize, j: isize) -> bool {
        match &self.solid {
            None => false,
            Some(m) => {
                if i < 0 || j < 0 || i as usize >= self.n[0] || j as usize >= self.n[1] {
                    false
                } else {
                    m[j as usize * self.n[0] + i as usize]
                }
            }
        }
    }

    pub fn has_solid(&self) -> bool {
        self.solid.is_some()
    }

    /// Fills the interior from a primitive-valued initial condition.
    pub fn fill_from(&mut self, eos: &EosParams<T>, init: impl Fn([T; 2]) -> Primitive<T, D>) -> Result<()> {
        for j in 0..self.n[1] as isize {
            for i in 0..self.n[0] as isize {
                let v = init(self.center(i, j));
                let u = conserved_from_primitive(&v, eos)
                    .map_err(|e| SolverError::Domain(format!("initial data at cell ({i}, {j}): {e}")))?;
                *self.get_mut(i, j) = u;
            }
        }
        Ok(())
    }

    /// Interior states in row-major order.
    pub fn interior(&self) -> Vec<Conserved<T, D>> {
        let mut out = Vec::with_capacity(self.cell_count());
        for j in 0..self.n[1] as isize {
            for i in 0..self.n[0] as isize {
                out.push(*self.get(i, j));
            }
        }
        out
    }

    /// Σ U over non-solid interior cells, in a fixed order.
    pub fn totals(&self) -> Conserved<T, D> {
        let mut acc = Conserved::zero();
        for j in 0..self.n[1] as isize {
            for i in 0..self.n[0] as isize {
                if !self.is_solid(i, j) {
                    acc += *self.get(i, j);
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_and_centers() {
        let g = FieldGrid::<f64, 2>::new(
            [4, 3],
            [0.5, 1.0],
            [0.0, -1.0],
            3,
            Geometry::Cartesian,
            [BoundaryKind::Outflow, BoundaryKind::Outflow, BoundaryKind::Outflow, BoundaryKind::Outflow],
        )
        .unwrap();
        assert_eq!(g.padded(), [10, 9]);
        assert_eq!(g.idx(-3, -3), 0);
        assert_eq!(g.idx(0, 0), 3 * 10 + 3);
        assert_eq!(g.center(1, 2), [0.75, 1.5]);
    }

    #[test]
    fn axis_bc_validation() {
        let bc = [BoundaryKind::Axis, BoundaryKind::Outflow, BoundaryKind::Outflow, BoundaryKind::Outflow];
        assert!(FieldGrid::<f64, 2>::new([4, 4], [1.0, 1.0], [0.0, 0.0], 3, Geometry::Cartesian, bc.clone()).is_err());
        assert!(FieldGrid::<f64, 2>::new([4, 4], [1.0, 1.0], [0.0, 0.0], 3, Geometry::Axisymmetric, bc).is_ok());
    }
}
