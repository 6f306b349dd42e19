//! Group convolution on p6 and p6m.
//!
//! A G-convolution is computed in two steps. The filter bank is first
//! expanded by a pure gather through a precomputed [`IndexArray`], giving
//! one transformed copy per point-group element. The expanded bank is then
//! handed to the planar hexagonal correlation, with the orientation
//! channels of the input flattened into its input planes.

mod conv;
mod index;
mod pool;

pub use conv::{
    gconv_first, gconv_first_oracle, gconv_full, gconv_full_oracle, GConv, GFeatureMap,
};
pub use index::{build_index_array, rotate_filter, transform_filters, IndexArray, Layer, Source};
pub use pool::{pool_invariant, pool_orientations_spatial, PoolMode};
