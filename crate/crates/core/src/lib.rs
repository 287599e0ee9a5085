//! Physical-constraints-preserving finite difference WENO schemes for
//! special relativistic hydrodynamics on uniform structured grids.
//!
//! The pointwise algebra, reconstruction, limiter and stepping are generic
//! over [`Real`]; drivers, presets and IO work in `f64` through the aliases
//! below.

pub mod error;
pub mod scalar;
pub mod state;
pub mod weno;
pub mod flux;
pub mod boundary;
pub mod grid;
pub mod source;
pub mod time;
pub mod residual;
pub mod solver;
pub mod verify;
pub mod presets;
pub mod io;

pub use error::{Result, SolverError};
pub use scalar::Real;
pub use state::{
    conserved_from_primitive, is_admissible, physical_flux, primitive_from_conserved, q_value, wave_speeds,
};

pub type Primitive1 = state::Primitive<f64, 1>;
pub type Primitive2 = state::Primitive<f64, 2>;
pub type Conserved1 = state::Conserved<f64, 1>;
pub type Conserved2 = state::Conserved<f64, 2>;
pub type Eos = state::EosParams<f64>;
pub type Grid1 = grid::FieldGrid<f64, 1>;
pub type Grid2 = grid::FieldGrid<f64, 2>;
pub type Scheme = residual::Scheme<f64>;
pub type Solver1 = solver::Solver<f64, 1>;
pub type Solver2 = solver::Solver<f64, 2>;
pub type Controls = time::StepControls<f64>;
