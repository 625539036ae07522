//! The data part of a multi-state: explicit sets of input-variable
//! evaluations, the set operations used by successor generation, and the
//! canonical state encoding.

mod dataset;
mod ops;
mod state;

pub use dataset::{DataSet, Members};
pub use ops::{
    apply, eval_member, initial_dataset, partition_by, prune, CapacityError, ControlContext,
    DataError, DEFAULT_EVAL_CAP,
};
pub use state::{ControlPart, DecodeError, Layout, MultiState};
