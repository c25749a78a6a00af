//! Random partitions, jump heights and the composed coefficient fields.

mod coefficient;
mod heights;
mod partition;

pub use coefficient::{
    AdvectionMap, Clamp, CoefficientModel, CoefficientSample, PartitionRecord, PositiveMap,
};
pub use heights::{sample_jump_heights, JumpHeights, JumpLaw, JumpTable};
pub use partition::{sample_partition_quadrangles, Partition, CHORD_RANGE};
