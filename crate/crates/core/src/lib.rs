//! Exact computations with A-infinity structures on the algebra A of the
//! two-cycle quiver modulo paths of length three, and with polygon counts on
//! the once-marked torus.
//!
//! Everything is exact: scalars live in Q or F_p, series have integer or field
//! coefficients, and geometric data uses rational coordinates.

pub mod gauge;
pub mod hochschild;
pub mod linalg;
pub mod perturbation;
pub mod quiver_ainf;
pub mod scalars;
pub mod torus_polygons;
pub mod useries;

pub use scalars::{FieldSpec, FieldValue, ScalarError};
