//! Seeded random instances for property suites.
//!
//! Everything random flows from one SplitMix64 stream. `split` derives an
//! independent child stream from the next output, so per-instance
//! generators can be handed to worker threads without changing results.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::hexcoord::AxialPoint;
use crate::hexgrid::{make_hex_disk_oriented, HexFilter, HexImage};
use crate::hexgroup::{Flavor, GroupElement, PointGroupElement};

#[derive(Debug, Clone)]
pub struct Instances {
    rng: SplitMix64,
}

impl Instances {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn split(&mut self) -> Self {
        Self::new(self.rng.next_u64())
    }

    /// `count` children, one per instance.
    pub fn split_n(&mut self, count: usize) -> Vec<Self> {
        (0..count).map(|_| self.split()).collect()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    /// Uniform in `[-1, 1)`.
    pub fn value(&mut self) -> f32 {
        self.rng.gen_range(-1.0f32..1.0)
    }

    /// Disk-supported map with random values on valid sites.
    pub fn disk_image(&mut self, radius: i32, channels: usize, orientations: usize) -> HexImage {
        let mut img = make_hex_disk_oriented(radius, channels, orientations).expect("radius >= 0");
        let cells: Vec<_> = img.valid_cells().collect();
        for ch in 0..channels {
            for o in 0..orientations {
                for &(r, c) in &cells {
                    let v = self.value();
                    img.set(ch, o, r, c, v);
                }
            }
        }
        img
    }

    /// Masked random filter bank of the given radius.
    pub fn filter(&mut self, out_channels: usize, in_channels: usize, radius: usize) -> HexFilter {
        let mut f = HexFilter::zeros(out_channels, in_channels, radius);
        for v in f.data_mut() {
            *v = self.rng.gen_range(-1.0f32..1.0);
        }
        f.apply_mask()
    }

    pub fn point_element(&mut self, flavor: Flavor) -> PointGroupElement {
        let i = self.rng.gen_range(0..flavor.order());
        PointGroupElement::canonical(flavor, i).expect("index in range")
    }

    /// Random element with translation in `[-span, span]²`.
    pub fn group_element(&mut self, flavor: Flavor, span: i32) -> GroupElement {
        let h = self.point_element(flavor);
        let t = AxialPoint::new(
            self.rng.gen_range(-span..=span),
            self.rng.gen_range(-span..=span),
        );
        GroupElement::new(h, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = Instances::new(7).disk_image(3, 2, 6);
        let b = Instances::new(7).disk_image(3, 2, 6);
        assert_eq!(a, b);
        assert!(a.is_masked());
        assert_ne!(a, Instances::new(8).disk_image(3, 2, 6));
    }

    #[test]
    fn split_streams_differ() {
        let mut root = Instances::new(1);
        let kids = root.split_n(3);
        let firsts: Vec<u64> = kids.into_iter().map(|mut k| k.next_u64()).collect();
        assert_ne!(firsts[0], firsts[1]);
        assert_ne!(firsts[1], firsts[2]);
    }

    #[test]
    fn filters_are_masked() {
        let f = Instances::new(3).filter(2, 3, 2);
        assert!(f.is_masked());
        assert!(f.data().iter().any(|&v| v != 0.0));
    }
}
