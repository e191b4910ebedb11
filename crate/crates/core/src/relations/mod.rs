//! Qualitative relation families between entities at a time point, and
//! Allen relations between intervals.

pub mod allen;
pub mod block;
pub mod lr;
pub mod orientation;
pub mod qdc;
pub mod topology;

pub use allen::{compose, interval_relation, AllenLabel};
pub use block::{block_relation, topology_from_block, BlockLabel};
pub use lr::{lr, LrLabel};
pub use orientation::{relative_orientation, OrientationLabel, RelativeOrientation};
pub use qdc::{qdc, qdc_label, size_label, size_relation, QdcLabel, SizeLabel};
pub use topology::{topology, CoarseRelation, Rcc5Label, TopologyLabel};
