use crate::error::{Error, Result};
use crate::hexcoord::AxialPoint;

/// A bank of hexagonal filters, `out_channels x in_channels x size x size`
/// in axial layout.
///
/// Cell `(a, b)` of a spatial slice holds offset `(b - c, a - c)` where
/// `c = (size - 1) / 2`. Only offsets within hex distance `radius` of the
/// centre may be non-zero; the remaining corners of the square are padding.
#[derive(Debug, Clone, PartialEq)]
pub struct HexFilter {
    out_channels: usize,
    in_channels: usize,
    size: usize,
    radius: usize,
    data: Vec<f32>,
}

impl HexFilter {
    /// Zero bank with the tightest square holding a disk of `radius`.
    pub fn zeros(out_channels: usize, in_channels: usize, radius: usize) -> Self {
        let size = 2 * radius + 1;
        Self {
            out_channels,
            in_channels,
            size,
            radius,
            data: vec![0.0; out_channels * in_channels * size * size],
        }
    }

    /// Wraps raw data with radius `(size - 1) / 2`. No masking is applied.
    pub fn from_raw(
        out_channels: usize,
        in_channels: usize,
        size: usize,
        data: Vec<f32>,
    ) -> Result<Self> {
        if size.is_multiple_of(2) {
            return Err(Error::arg(format!("filter size must be odd, got {size}")));
        }
        if out_channels == 0 || in_channels == 0 {
            return Err(Error::shape("filter bank has no channels"));
        }
        if data.len() != out_channels * in_channels * size * size {
            return Err(Error::shape(format!(
                "filter data has {} values, expected {out_channels}x{in_channels}x{size}x{size}",
                data.len()
            )));
        }
        Ok(Self {
            out_channels,
            in_channels,
            size,
            radius: (size - 1) / 2,
            data,
        })
    }

    /// Narrows the support to `radius`, which must fit in the square.
    pub fn with_radius(mut self, radius: usize) -> Result<Self> {
        if 2 * radius + 1 > self.size {
            return Err(Error::arg(format!(
                "radius {radius} does not fit in a {0}x{0} filter",
                self.size
            )));
        }
        self.radius = radius;
        Ok(self)
    }

    pub fn out_channels(&self) -> usize {
        self.out_channels
    }

    pub fn in_channels(&self) -> usize {
        self.in_channels
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn center(&self) -> usize {
        (self.size - 1) / 2
    }

    pub fn shape(&self) -> [usize; 4] {
        [self.out_channels, self.in_channels, self.size, self.size]
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn support_size(&self) -> usize {
        let r = self.radius;
        3 * r * (r + 1) + 1
    }

    /// Offset stored at spatial cell `(a, b)`.
    pub fn offset(&self, a: usize, b: usize) -> AxialPoint {
        let c = self.center() as i32;
        AxialPoint::new(b as i32 - c, a as i32 - c)
    }

    /// Spatial cell holding offset `d`, if it lies inside the disk.
    pub fn cell(&self, d: AxialPoint) -> Option<(usize, usize)> {
        if d.norm() > self.radius as i32 {
            return None;
        }
        let c = self.center() as i32;
        Some(((d.v + c) as usize, (d.u + c) as usize))
    }

    pub fn in_support(&self, a: usize, b: usize) -> bool {
        self.offset(a, b).norm() <= self.radius as i32
    }

    /// Spatial mask, `size * size` entries.
    pub fn mask(&self) -> Vec<bool> {
        (0..self.size * self.size)
            .map(|i| self.in_support(i / self.size, i % self.size))
            .collect()
    }

    fn index(&self, c: usize, k: usize, a: usize, b: usize) -> usize {
        ((c * self.in_channels + k) * self.size + a) * self.size + b
    }

    pub fn get(&self, c: usize, k: usize, a: usize, b: usize) -> f32 {
        self.data[self.index(c, k, a, b)]
    }

    pub fn set(&mut self, c: usize, k: usize, a: usize, b: usize, value: f32) {
        let i = self.index(c, k, a, b);
        self.data[i] = value;
    }

    /// Weight at offset `d`; zero outside the disk.
    pub fn at(&self, c: usize, k: usize, d: AxialPoint) -> f32 {
        match self.cell(d) {
            Some((a, b)) => self.get(c, k, a, b),
            None => 0.0,
        }
    }

    /// Spatial slice for output `c`, input `k`.
    pub fn slice(&self, c: usize, k: usize) -> &[f32] {
        let n = self.size * self.size;
        let start = (c * self.in_channels + k) * n;
        &self.data[start..start + n]
    }

    pub fn apply_mask(mut self) -> Self {
        let mask = self.mask();
        for slice in self.data.chunks_mut(mask.len()) {
            for (v, &m) in slice.iter_mut().zip(&mask) {
                if !m {
                    *v = 0.0;
                }
            }
        }
        self
    }

    pub fn is_masked(&self) -> bool {
        self.check_masked().is_ok()
    }

    /// Fails on the first padding cell holding anything but `+0.0`.
    pub fn check_masked(&self) -> Result<()> {
        let mask = self.mask();
        let n = mask.len();
        for (i, v) in self.data.iter().enumerate() {
            let cell = i % n;
            if !mask[cell] && v.to_bits() != 0 {
                let slice = i / n;
                return Err(Error::MaskViolation(format!(
                    "filter ({}, {}) holds {v} at padding cell ({}, {}) outside the radius-{} disk",
                    slice / self.in_channels,
                    slice % self.in_channels,
                    cell / self.size,
                    cell % self.size,
                    self.radius
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_sizes() {
        for r in 0..=5 {
            let f = HexFilter::zeros(1, 1, r);
            assert_eq!(f.support_size(), 3 * r * (r + 1) + 1);
            assert_eq!(f.mask().iter().filter(|&&m| m).count(), f.support_size());
        }
        assert_eq!(HexFilter::zeros(1, 1, 1).support_size(), 7);
    }

    #[test]
    fn radius_one_corners_are_padding() {
        let f = HexFilter::zeros(1, 1, 1);
        // offsets (-1,-1) and (1,1) are at distance 2
        assert!(!f.in_support(0, 0));
        assert!(!f.in_support(2, 2));
        assert!(f.in_support(0, 2));
        assert!(f.in_support(2, 0));
    }

    #[test]
    fn mask_violation_reported() {
        let f = HexFilter::from_raw(1, 1, 3, vec![1.0; 9]).unwrap();
        assert!(matches!(f.check_masked(), Err(Error::MaskViolation(_))));
        let f = f.apply_mask();
        assert!(f.check_masked().is_ok());
        assert_eq!(f.data().iter().sum::<f32>(), 7.0);
    }

    #[test]
    fn even_size_rejected() {
        assert!(HexFilter::from_raw(1, 1, 4, vec![0.0; 16]).is_err());
    }

    #[test]
    fn narrow_radius() {
        let f = HexFilter::zeros(1, 1, 2).with_radius(1).unwrap();
        assert_eq!(f.size(), 5);
        assert_eq!(f.support_size(), 7);
        assert!(HexFilter::zeros(1, 1, 1).with_radius(2).is_err());
    }

    #[test]
    fn cell_offset_round_trip() {
        let f = HexFilter::zeros(1, 1, 2);
        for a in 0..5 {
            for b in 0..5 {
                let d = f.offset(a, b);
                assert_eq!(f.cell(d).is_some(), f.in_support(a, b));
                if let Some(cell) = f.cell(d) {
                    assert_eq!(cell, (a, b));
                }
            }
        }
    }
}
