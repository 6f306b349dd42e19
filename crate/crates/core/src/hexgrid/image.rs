use crate::error::{Error, Result};
use crate::hexcoord::AxialPoint;

/// A hexagonal feature map stored in axial layout.
///
/// Memory order is channels, orientations, rows, cols. Buffer cell
/// `(row, col)` holds the site `origin + (col - anchor.1, row - anchor.0)`,
/// so steps along `e1` are contiguous within a row. Orientations is 1 for a
/// planar map and the point-group order for a map on p6 / p6m.
#[derive(Debug, Clone, PartialEq)]
pub struct HexImage {
    channels: usize,
    orientations: usize,
    rows: usize,
    cols: usize,
    data: Vec<f32>,
    mask: Vec<bool>,
    anchor: (usize, usize),
    origin: AxialPoint,
}

impl HexImage {
    /// All-zero map with the given validity mask (`rows * cols` entries).
    pub fn zeros(
        channels: usize,
        orientations: usize,
        rows: usize,
        cols: usize,
        mask: Vec<bool>,
    ) -> Result<Self> {
        let len = channels * orientations * rows * cols;
        Self::from_raw(channels, orientations, rows, cols, vec![0.0; len], mask)
    }

    /// Wraps a raw buffer. The data is taken as-is; padding cells may hold
    /// non-zero values until [`HexImage::apply_mask`] is called.
    pub fn from_raw(
        channels: usize,
        orientations: usize,
        rows: usize,
        cols: usize,
        data: Vec<f32>,
        mask: Vec<bool>,
    ) -> Result<Self> {
        if channels == 0 || orientations == 0 || rows == 0 || cols == 0 {
            return Err(Error::shape(format!(
                "empty image {channels}x{orientations}x{rows}x{cols}"
            )));
        }
        if mask.len() != rows * cols {
            return Err(Error::shape(format!(
                "mask has {} cells, buffer has {rows}x{cols}",
                mask.len()
            )));
        }
        if data.len() != channels * orientations * rows * cols {
            return Err(Error::shape(format!(
                "data has {} values, expected {channels}x{orientations}x{rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self {
            channels,
            orientations,
            rows,
            cols,
            data,
            mask,
            anchor: ((rows - 1) / 2, (cols - 1) / 2),
            origin: AxialPoint::ORIGIN,
        })
    }

    /// Places `origin` at buffer cell `anchor`.
    pub fn with_anchor(mut self, anchor: (usize, usize), origin: AxialPoint) -> Result<Self> {
        if anchor.0 >= self.rows || anchor.1 >= self.cols {
            return Err(Error::arg(format!(
                "anchor {anchor:?} outside {}x{} buffer",
                self.rows, self.cols
            )));
        }
        self.anchor = anchor;
        self.origin = origin;
        Ok(self)
    }

    /// A map with the same grid and a different channel layout.
    pub fn zeros_like(&self, channels: usize, orientations: usize) -> Self {
        Self {
            channels,
            orientations,
            data: vec![0.0; channels * orientations * self.rows * self.cols],
            ..self.clone_geometry()
        }
    }

    fn clone_geometry(&self) -> Self {
        Self {
            channels: 0,
            orientations: 0,
            rows: self.rows,
            cols: self.cols,
            data: Vec::new(),
            mask: self.mask.clone(),
            anchor: self.anchor,
            origin: self.origin,
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn orientations(&self) -> usize {
        self.orientations
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn plane_len(&self) -> usize {
        self.rows * self.cols
    }

    /// Number of (channel, orientation) planes.
    pub fn planes(&self) -> usize {
        self.channels * self.orientations
    }

    pub fn anchor(&self) -> (usize, usize) {
        self.anchor
    }

    pub fn origin(&self) -> AxialPoint {
        self.origin
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn same_grid(&self, other: &HexImage) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.mask == other.mask
            && self.anchor == other.anchor
            && self.origin == other.origin
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_valid(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.cols + col]
    }

    /// The plane for `(channel, orientation)`.
    pub fn plane(&self, channel: usize, orientation: usize) -> &[f32] {
        let n = self.plane_len();
        let start = (channel * self.orientations + orientation) * n;
        &self.data[start..start + n]
    }

    pub fn plane_mut(&mut self, channel: usize, orientation: usize) -> &mut [f32] {
        let n = self.plane_len();
        let start = (channel * self.orientations + orientation) * n;
        &mut self.data[start..start + n]
    }

    pub fn get(&self, channel: usize, orientation: usize, row: usize, col: usize) -> f32 {
        self.plane(channel, orientation)[row * self.cols + col]
    }

    pub fn set(&mut self, channel: usize, orientation: usize, row: usize, col: usize, value: f32) {
        let cols = self.cols;
        self.plane_mut(channel, orientation)[row * cols + col] = value;
    }

    /// Buffer cell holding site `p`, or `None` outside the buffer.
    pub fn buffer_index(&self, p: AxialPoint) -> Option<(usize, usize)> {
        let d = p - self.origin;
        let row = self.anchor.0 as i64 + i64::from(d.v);
        let col = self.anchor.1 as i64 + i64::from(d.u);
        if row < 0 || col < 0 || row >= self.rows as i64 || col >= self.cols as i64 {
            return None;
        }
        Some((row as usize, col as usize))
    }

    /// Site stored at buffer cell `(row, col)`.
    pub fn site(&self, row: usize, col: usize) -> AxialPoint {
        self.origin
            + AxialPoint::new(
                col as i32 - self.anchor.1 as i32,
                row as i32 - self.anchor.0 as i32,
            )
    }

    /// Valid buffer cell holding site `p`.
    pub fn valid_index(&self, p: AxialPoint) -> Option<(usize, usize)> {
        self.buffer_index(p).filter(|&(r, c)| self.is_valid(r, c))
    }

    /// Value at site `p`; zero off the buffer or on padding.
    pub fn at(&self, channel: usize, orientation: usize, p: AxialPoint) -> f32 {
        match self.valid_index(p) {
            Some((r, c)) => self.get(channel, orientation, r, c),
            None => 0.0,
        }
    }

    /// Valid cells as `(row, col)`, row-major.
    pub fn valid_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cols = self.cols;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(i, _)| (i / cols, i % cols))
    }

    pub fn valid_sites(&self) -> impl Iterator<Item = AxialPoint> + '_ {
        self.valid_cells().map(|(r, c)| self.site(r, c))
    }

    /// Zeroes every padding cell in every plane.
    pub fn apply_mask(mut self) -> Self {
        self.mask_in_place();
        self
    }

    pub fn mask_in_place(&mut self) {
        let n = self.plane_len();
        for plane in self.data.chunks_mut(n) {
            for (v, &m) in plane.iter_mut().zip(&self.mask) {
                if !m {
                    *v = 0.0;
                }
            }
        }
    }

    /// True when every padding cell is bit-exactly `+0.0`.
    pub fn is_masked(&self) -> bool {
        let n = self.plane_len();
        self.data.chunks(n).all(|plane| {
            plane
                .iter()
                .zip(&self.mask)
                .all(|(v, &m)| m || v.to_bits() == 0)
        })
    }

    /// Reinterprets `planes()` planes as `channels x orientations`.
    pub fn reshape_planes(mut self, channels: usize, orientations: usize) -> Result<Self> {
        if channels * orientations != self.planes() {
            return Err(Error::shape(format!(
                "cannot view {} planes as {channels}x{orientations}",
                self.planes()
            )));
        }
        self.channels = channels;
        self.orientations = orientations;
        Ok(self)
    }

    pub fn max_abs_diff(&self, other: &HexImage) -> f32 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f32::max)
    }
}

/// Mask of the sites within hex distance `radius` of the centre of a
/// `(2·radius+1)²` axial buffer.
pub fn disk_mask(radius: usize) -> Vec<bool> {
    let size = 2 * radius + 1;
    let c = radius as i32;
    (0..size * size)
        .map(|i| {
            let p = AxialPoint::new((i % size) as i32 - c, (i / size) as i32 - c);
            p.norm() <= c
        })
        .collect()
}

/// Zero map whose valid cells form a hex disk centred on the origin.
pub fn make_hex_disk(radius: i32, channels: usize) -> Result<HexImage> {
    make_hex_disk_oriented(radius, channels, 1)
}

pub fn make_hex_disk_oriented(
    radius: i32,
    channels: usize,
    orientations: usize,
) -> Result<HexImage> {
    if radius < 0 {
        return Err(Error::arg(format!(
            "disk radius must be >= 0, got {radius}"
        )));
    }
    let r = radius as usize;
    let size = 2 * r + 1;
    HexImage::zeros(channels, orientations, size, size, disk_mask(r))
}

pub fn apply_mask(f: HexImage) -> HexImage {
    f.apply_mask()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_counts() {
        assert_eq!(make_hex_disk(0, 1).unwrap().valid_count(), 1);
        assert_eq!(make_hex_disk(1, 1).unwrap().valid_count(), 7);
        assert_eq!(make_hex_disk(2, 1).unwrap().valid_count(), 19);
        for r in 0..=5 {
            let brute = (-r..=r)
                .flat_map(|u| (-r..=r).map(move |v| AxialPoint::new(u, v)))
                .filter(|p| p.norm() <= r)
                .count();
            let disk = make_hex_disk(r, 2).unwrap();
            assert_eq!(disk.valid_count(), brute);
            assert_eq!(disk.valid_count() as i32, 3 * r * (r + 1) + 1);
        }
        assert!(matches!(
            make_hex_disk(-1, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn buffer_index_round_trip() {
        let img = make_hex_disk(4, 1).unwrap();
        assert_eq!(img.rows(), 9);
        assert_eq!(img.buffer_index(img.origin()), Some(img.anchor()));
        for (r, c) in img.valid_cells() {
            let p = img.site(r, c);
            assert_eq!(img.buffer_index(p), Some((r, c)));
        }
        let p = AxialPoint::new(1, 2);
        let (r, c) = img.buffer_index(p).unwrap();
        assert_eq!(
            img.buffer_index(p + AxialPoint::new(1, 0)),
            Some((r, c + 1))
        );
        assert_eq!(img.buffer_index(AxialPoint::new(5, 0)), None);
        assert_eq!(img.buffer_index(AxialPoint::new(0, -5)), None);
    }

    #[test]
    fn buffer_index_with_moved_anchor() {
        let img = HexImage::zeros(1, 1, 3, 5, vec![true; 15])
            .unwrap()
            .with_anchor((0, 1), AxialPoint::new(10, -3))
            .unwrap();
        assert_eq!(img.buffer_index(AxialPoint::new(10, -3)), Some((0, 1)));
        assert_eq!(img.site(2, 4), AxialPoint::new(13, -1));
        assert_eq!(img.buffer_index(AxialPoint::new(8, -3)), None);
    }

    #[test]
    fn mask_zeroes_two_corners_of_radius_one() {
        let img = HexImage::from_raw(1, 1, 3, 3, vec![1.0; 9], disk_mask(1)).unwrap();
        assert!(!img.is_masked());
        let masked = img.apply_mask();
        assert_eq!(masked.data().iter().filter(|&&v| v == 0.0).count(), 2);
        assert!(masked.is_masked());
        assert_eq!(masked.clone().apply_mask(), masked);
    }

    #[test]
    fn negative_zero_in_padding_is_not_masked() {
        let mut data = vec![0.0; 9];
        data[0] = -0.0;
        let img = HexImage::from_raw(1, 1, 3, 3, data, disk_mask(1)).unwrap();
        assert!(!img.is_masked());
        assert!(img.apply_mask().is_masked());
    }

    #[test]
    fn shape_errors() {
        assert!(HexImage::from_raw(1, 1, 2, 2, vec![0.0; 3], vec![true; 4]).is_err());
        assert!(HexImage::from_raw(1, 1, 2, 2, vec![0.0; 4], vec![true; 3]).is_err());
        assert!(HexImage::zeros(0, 1, 2, 2, vec![true; 4]).is_err());
    }
}
