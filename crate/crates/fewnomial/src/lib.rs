//! Fewnomial systems with real exponents over the positive orthant.
//!
//! Root counting for trinomial pairs and simplex-shaped systems by reduction to
//! one variable, Newton polytope geometry, closed-form root and component
//! bounds, and desk-scale analysis of bivariate zero sets.

pub mod bounds;
pub mod curves;
pub mod error;
pub mod num;
pub mod polytope;
pub mod reduce;
pub mod system;
pub mod transform;
pub mod univar;

pub use error::{Error, Result};
pub use system::{Fewnomial, FewnomialSystem, Term};
