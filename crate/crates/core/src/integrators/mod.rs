//! Classical McShane and Henstock-Kurzweil integrals on boxes, and the
//! componentwise Dunford/Pettis check.

pub mod engine;
pub mod integrand;
pub mod materialize;
pub mod primitive;
pub mod quadrature;
pub(crate) mod walker;
pub mod weak;

pub use engine::{hk_integral, integrate, mcshane_integral, IntegralResult, IntegrateOptions, LevelRecord, Mode};
pub use integrand::{eval_at, Bundle, FnIntegrand, Integrand, LinearCombination, ZeroExtended};
pub use materialize::{level_partition, LevelPartition};
pub use primitive::primitive_of;
pub use quadrature::GaussRule;
pub use walker::MAX_DIM;
pub use weak::{dunford_componentwise_check, WeakIntegralRecord, WeakOptions};
