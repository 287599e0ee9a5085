//! WENO reconstruction kernels and the characteristic projection for systems.

pub mod characteristic;
pub mod kernel;

pub use characteristic::{
    average_primitive, basis_at, characteristic_basis, reconstruct_interface, AverageKind, CharacteristicBasis,
};
pub use kernel::{weno_left_value, weno_right_value, RationalCoefficients, WenoKernel};
