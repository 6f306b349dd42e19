//! Hexagonal feature maps and filters in axial layout, plus the I/O and
//! resampling around them.

mod filter;
pub mod hext;
mod image;
pub mod pgm;
pub mod resample;
mod transform;

pub use filter::HexFilter;
pub use hext::HextTensor;
pub use image::{apply_mask, disk_mask, make_hex_disk, make_hex_disk_oriented, HexImage};
pub use pgm::{read_pgm, render_pgm, GrayImage};
pub use resample::{resample_square_to_hex, HexFieldOfView};
pub use transform::{transform_feature_map, translate_feature_map};
