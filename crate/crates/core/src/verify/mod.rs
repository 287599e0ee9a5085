//! Independent references and randomized checks used by the test suites.

pub mod properties;
pub mod reference;
pub mod riemann;

pub use properties::{lemma_property_suite, pressure_concavity_gap, FamilyResult, PropertyReport, RandomStates};
pub use reference::{
    crossing_near, error_norms, observed_orders, shock_heating_reference, smooth_exact, ComposedReference,
    ErrorReport, ShockHeating,
};
pub use riemann::{exact_riemann_1d, Discontinuity, RiemannSolution, Wave};
