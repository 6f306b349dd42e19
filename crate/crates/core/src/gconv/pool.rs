use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hexcoord::AxialPoint;

use super::conv::GFeatureMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoolMode {
    #[default]
    Max,
    Mean,
}

impl fmt::Display for PoolMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoolMode::Max => "max",
            PoolMode::Mean => "mean",
        })
    }
}

impl FromStr for PoolMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(PoolMode::Max),
            "mean" => Ok(PoolMode::Mean),
            _ => Err(Error::arg(format!("unknown pooling mode {s:?}"))),
        }
    }
}

/// Max over valid sites within hex distance `window` of each site, one
/// orientation channel at a time. `window = 0` returns the map unchanged.
pub fn pool_orientations_spatial(f: &GFeatureMap, window: usize) -> GFeatureMap {
    if window == 0 {
        return f.clone();
    }
    let w = window as i32;
    let ring: Vec<AxialPoint> = (-w..=w)
        .flat_map(|v| (-w..=w).map(move |u| AxialPoint::new(u, v)))
        .filter(|d| d.norm() <= w)
        .collect();
    let mut out = f.image().clone();
    let cells: Vec<_> = f.valid_cells().collect();
    for ch in 0..f.channels() {
        for o in 0..f.orientations() {
            for &(row, col) in &cells {
                let p = f.site(row, col);
                let m = ring
                    .iter()
                    .filter_map(|&d| f.valid_index(p + d).map(|(r, c)| f.get(ch, o, r, c)))
                    .fold(f32::NEG_INFINITY, f32::max);
                out.set(ch, o, row, col, m);
            }
        }
    }
    GFeatureMap::new(f.group(), out).expect("orientation count unchanged")
}

/// One value per channel, pooled over every orientation and valid site.
pub fn pool_invariant(f: &GFeatureMap, mode: PoolMode) -> Vec<f32> {
    let cells: Vec<_> = f.valid_cells().collect();
    (0..f.channels())
        .map(|ch| {
            let values = (0..f.orientations())
                .flat_map(|o| cells.iter().map(move |&(r, c)| (o, r, c)))
                .map(|(o, r, c)| f.get(ch, o, r, c));
            match mode {
                PoolMode::Max => values.fold(f32::NEG_INFINITY, f32::max),
                PoolMode::Mean => {
                    let n = (f.orientations() * cells.len()) as f64;
                    (values.map(f64::from).sum::<f64>() / n) as f32
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexgrid::make_hex_disk_oriented;
    use crate::hexgroup::{Flavor, Group, GroupElement, PointGroupElement};
    use crate::rng::Instances;

    fn constant(group: Group, value: f32) -> GFeatureMap {
        let mut img = make_hex_disk_oriented(3, 2, group.order()).unwrap();
        img.data_mut().iter_mut().for_each(|v| *v = value);
        GFeatureMap::new(group, img.apply_mask()).unwrap()
    }

    #[test]
    fn window_zero_is_identity() {
        let f = GFeatureMap::new(Group::P6, Instances::new(1).disk_image(3, 1, 6)).unwrap();
        assert_eq!(pool_orientations_spatial(&f, 0), f);
    }

    #[test]
    fn constant_maps_stay_constant() {
        let f = constant(Group::P6m, 2.5);
        assert_eq!(pool_orientations_spatial(&f, 2), f);
        assert_eq!(pool_invariant(&f, PoolMode::Max), vec![2.5, 2.5]);
        assert_eq!(pool_invariant(&f, PoolMode::Mean), vec![2.5, 2.5]);
    }

    #[test]
    fn single_spike() {
        let mut f = constant(Group::P6, 0.0).into_image();
        let (r, c) = f.valid_index(AxialPoint::new(2, -1)).unwrap();
        f.set(1, 4, r, c, 5.0);
        let f = GFeatureMap::new(Group::P6, f).unwrap();
        assert_eq!(pool_invariant(&f, PoolMode::Max), vec![0.0, 5.0]);
        let pooled = pool_orientations_spatial(&f, 1);
        assert_eq!(pooled.at(1, 4, AxialPoint::new(1, -1)), 5.0);
        assert_eq!(pooled.at(1, 3, AxialPoint::new(1, -1)), 0.0);
        assert_eq!(pooled.at(1, 4, AxialPoint::new(0, 0)), 0.0);
    }

    #[test]
    fn spatial_pooling_commutes_with_rotations() {
        let f = GFeatureMap::new(Group::P6m, Instances::new(2).disk_image(4, 1, 12)).unwrap();
        for k in 0..12 {
            let g = GroupElement::point(PointGroupElement::canonical(Flavor::D6, k).unwrap());
            let lhs = pool_orientations_spatial(&f.transform(&g).unwrap(), 2);
            let rhs = pool_orientations_spatial(&f, 2).transform(&g).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn invariant_pooling_is_exact_under_rotation() {
        let f = GFeatureMap::new(Group::P6, Instances::new(3).disk_image(3, 2, 6)).unwrap();
        for k in 0..6 {
            let g = GroupElement::point(PointGroupElement::rotation(Flavor::C6, k));
            assert_eq!(
                pool_invariant(&f.transform(&g).unwrap(), PoolMode::Max),
                pool_invariant(&f, PoolMode::Max)
            );
        }
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("mean".parse::<PoolMode>().unwrap(), PoolMode::Mean);
        assert!("min".parse::<PoolMode>().is_err());
    }
}
