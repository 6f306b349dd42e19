//! Lattice transformation operators `L_g` on feature maps.
//!
//! `[L_g f](p, s) = f(g⁻¹·p, h⁻¹ s)` where `h` is the point-group part of
//! `g` and `s` indexes the orientation channels. For planar maps the
//! orientation factor is absent.

use crate::error::{Error, Result};
use crate::hexcoord::AxialPoint;
use crate::hexgroup::{Flavor, GroupElement, PointGroup};

use super::HexImage;

/// Orientation permutation for `g` acting on a map with `orientations`
/// channels: output orientation `s` reads input orientation `perm[s]`.
fn orientation_source(g: &GroupElement, orientations: usize) -> Result<Vec<usize>> {
    if orientations == 1 {
        return Ok(vec![0]);
    }
    let flavor = match orientations {
        6 => Flavor::C6,
        12 => Flavor::D6,
        n => {
            return Err(Error::shape(format!(
                "{n} orientation channels match neither p6 (6) nor p6m (12)"
            )))
        }
    };
    if flavor == Flavor::C6 && g.h.is_reflection() {
        return Err(Error::UnsupportedTransform(
            "reflection applied to a p6 feature map".into(),
        ));
    }
    let group = PointGroup::new(flavor);
    let h_inv = group.inv(g.h.index());
    Ok((0..orientations).map(|s| group.mul(h_inv, s)).collect())
}

/// Applies `L_g` to `f`. The set of valid sites must be closed under `g`.
pub fn transform_feature_map(g: &GroupElement, f: &HexImage) -> Result<HexImage> {
    let src_orient = orientation_source(g, f.orientations())?;
    let g_inv = g.inverse();

    // For each valid output cell, the buffer offset of its source cell.
    let mut sources = Vec::with_capacity(f.valid_count());
    for (r, c) in f.valid_cells() {
        let p = f.site(r, c);
        let q = g_inv.act(p);
        match f.valid_index(q) {
            Some((sr, sc)) => sources.push((r * f.cols() + c, sr * f.cols() + sc)),
            None => return Err(Error::UnsupportedTransform(format!(
                "site {p} maps from {q}, which is not a valid site; mask is not closed under {g}"
            ))),
        }
    }

    let mut out = f.zeros_like(f.channels(), f.orientations());
    for ch in 0..f.channels() {
        for (s, &src_s) in src_orient.iter().enumerate() {
            let src = f.plane(ch, src_s);
            let dst = out.plane_mut(ch, s);
            for &(d, sidx) in &sources {
                dst[d] = src[sidx];
            }
        }
    }
    Ok(out)
}

/// Translates `f` by `t` with zero fill: `out(p) = f(p - t)`. Sites whose
/// source is off the valid region become zero; the mask is unchanged.
pub fn translate_feature_map(t: AxialPoint, f: &HexImage) -> HexImage {
    let mut out = f.zeros_like(f.channels(), f.orientations());
    let cells: Vec<(usize, usize)> = f
        .valid_cells()
        .filter_map(|(r, c)| {
            let q = f.site(r, c) - t;
            f.valid_index(q)
                .map(|(sr, sc)| (r * f.cols() + c, sr * f.cols() + sc))
        })
        .collect();
    for ch in 0..f.channels() {
        for o in 0..f.orientations() {
            let src = f.plane(ch, o);
            let dst = out.plane_mut(ch, o);
            for &(d, s) in &cells {
                dst[d] = src[s];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexgrid::make_hex_disk_oriented;
    use crate::hexgroup::{enumerate_point_group, PointGroupElement};

    fn ax(u: i32, v: i32) -> AxialPoint {
        AxialPoint::new(u, v)
    }

    fn ramp_disk(radius: i32, orientations: usize) -> HexImage {
        let mut img = make_hex_disk_oriented(radius, 2, orientations).unwrap();
        let cells: Vec<_> = img.valid_cells().collect();
        let mut k = 1.0;
        for ch in 0..2 {
            for o in 0..orientations {
                for &(r, c) in &cells {
                    img.set(ch, o, r, c, k);
                    k += 1.0;
                }
            }
        }
        img
    }

    #[test]
    fn identity_is_noop() {
        let f = ramp_disk(3, 6);
        let e = GroupElement::identity(Flavor::C6);
        assert_eq!(transform_feature_map(&e, &f).unwrap(), f);
    }

    #[test]
    fn delta_rotates() {
        let mut f = make_hex_disk_oriented(2, 1, 1).unwrap();
        let (r, c) = f.buffer_index(ax(1, 0)).unwrap();
        f.set(0, 0, r, c, 1.0);
        let g = GroupElement::point(PointGroupElement::rotation(Flavor::C6, 1));
        let out = transform_feature_map(&g, &f).unwrap();
        assert_eq!(out.at(0, 0, ax(1, -1)), 1.0);
        assert_eq!(out.data().iter().sum::<f32>(), 1.0);
    }

    #[test]
    fn six_rotations_restore() {
        let f = ramp_disk(3, 6);
        let g = GroupElement::point(PointGroupElement::rotation(Flavor::C6, 1));
        let mut h = f.clone();
        for k in 1..=6 {
            h = transform_feature_map(&g, &h).unwrap();
            assert_eq!(h == f, k == 6);
        }
    }

    #[test]
    fn orientation_channels_cycle() {
        let mut f = make_hex_disk_oriented(1, 1, 6).unwrap();
        let (r, c) = f.buffer_index(AxialPoint::ORIGIN).unwrap();
        f.set(0, 2, r, c, 1.0);
        let g = GroupElement::point(PointGroupElement::rotation(Flavor::C6, 1));
        let out = transform_feature_map(&g, &f).unwrap();
        assert_eq!(out.get(0, 3, r, c), 1.0);
        assert_eq!(out.data().iter().sum::<f32>(), 1.0);
    }

    #[test]
    fn composition_law_all_d6() {
        let f = ramp_disk(4, 12);
        let elems = enumerate_point_group(Flavor::D6);
        for a in &elems {
            for b in &elems {
                let (ga, gb) = (GroupElement::point(*a), GroupElement::point(*b));
                let lhs =
                    transform_feature_map(&ga, &transform_feature_map(&gb, &f).unwrap()).unwrap();
                let rhs = transform_feature_map(&ga.compose(&gb).unwrap(), &f).unwrap();
                assert_eq!(lhs, rhs, "{a} {b}");
            }
        }
        // planar maps too
        let f = ramp_disk(4, 1);
        for a in &elems {
            for b in &elems {
                let (ga, gb) = (GroupElement::point(*a), GroupElement::point(*b));
                let lhs =
                    transform_feature_map(&ga, &transform_feature_map(&gb, &f).unwrap()).unwrap();
                let rhs = transform_feature_map(&ga.compose(&gb).unwrap(), &f).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn translation_of_disk_is_unsupported() {
        let f = ramp_disk(2, 1);
        let g = GroupElement::translation(Flavor::C6, ax(1, 0));
        assert!(matches!(
            transform_feature_map(&g, &f),
            Err(Error::UnsupportedTransform(_))
        ));
    }

    #[test]
    fn reflection_on_p6_map_is_unsupported() {
        let f = ramp_disk(1, 6);
        let g = GroupElement::point(PointGroupElement::mirror());
        assert!(transform_feature_map(&g, &f).is_err());
    }

    #[test]
    fn translate_shifts_and_fills_zero() {
        let f = ramp_disk(2, 1);
        let t = ax(1, 0);
        let out = translate_feature_map(t, &f);
        for p in f.valid_sites() {
            let expect = if f.valid_index(p - t).is_some() {
                f.at(0, 0, p - t)
            } else {
                0.0
            };
            assert_eq!(out.at(0, 0, p), expect);
        }
        assert!(out.is_masked());
    }
}
