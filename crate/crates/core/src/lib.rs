//! Dunford-McShane and Dunford-Henstock-Kurzweil gauge integrals of
//! vector-valued functions on bounded sets `G ⊂ R^m` with `|G ∖ G°| = 0`.
//!
//! Geometry is exact (rational corners, max-norm balls). Function values and
//! Riemann sums are `f64` with compensated summation in a fixed order, so
//! every result is reproducible bit for bit.

pub mod error;
pub mod geometry;
pub mod summation;

pub use error::{ApiError, DivisionError, FunctionError, GeometryError, IntegrationError, PartitionError};
pub mod catalog;
pub mod cli;
pub mod divisions;
pub mod dunford_api;
pub mod integrators;
pub mod interval_functions;
pub mod partitions;
