//! Hexagonal lattice signal processing and group-equivariant convolution
//! for the wallpaper groups p6 and p6m.
//!
//! The crate is layered bottom-up:
//!
//! - [`hexcoord`]: axial, cube, offset and double-width coordinates.
//! - [`hexgroup`]: the point groups C6 / D6 and the groups p6 / p6m.
//! - [`hexgrid`]: feature maps and filters in axial layout, masking,
//!   resampling and file formats.
//! - [`hexconv`]: planar hexagonal correlation with three memory layouts
//!   and a direct-summation reference.
//! - [`gconv`]: filter-transformation index arrays, group convolutions and
//!   orientation pooling.
//! - [`verify`]: seeded property suites exercising all of the above.
//!
//! With the default `parallel` feature, convolutions fan out over output
//! channels on the rayon pool. Each output cell is reduced in a fixed order,
//! so results are bitwise identical to the sequential path.

pub mod error;
pub mod exec;
pub mod gconv;
pub mod hexconv;
pub mod hexcoord;
pub mod hexgrid;
pub mod hexgroup;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use hexcoord::{AxialPoint, CartesianPoint, CubePoint, DoubleWidthPoint, OffsetPoint};
pub use hexgrid::{HexFilter, HexImage};
pub use hexgroup::{Flavor, Group, GroupElement, PointGroup, PointGroupElement};
