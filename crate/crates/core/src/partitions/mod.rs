//! Gauges, tagged partitions, the constructive Cousin lemma, seeded
//! sampling of Z-tagged partitions, and Riemann sums.

pub mod cousin;
pub mod gauge;
pub mod riemann;
pub mod sampling;
pub mod tagged;

pub use cousin::{cousin_hk_partition, mcshane_partition};
pub use gauge::{lower_bound_f64, Gauge, GaugeFn};
pub use riemann::{partition_defect, riemann_sum};
pub use sampling::{sample_tag, sample_z_tagged_partition, SampledPartition};
pub use tagged::{
    is_delta_fine, is_partition_of, is_z_tagged, non_overlapping, PartitionMode, TaggedInterval, TaggedPartition, ZSet,
};
