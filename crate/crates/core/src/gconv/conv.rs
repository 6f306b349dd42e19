use std::ops::Deref;

use crate::error::{Error, Result};
use crate::hexconv::{hexconv, ConvSpec};
use crate::hexcoord::AxialPoint;
use crate::hexgrid::{transform_feature_map, HexFilter, HexImage};
use crate::hexgroup::{Group, GroupElement, PointGroup};

use super::index::{build_index_array, transform_filters, IndexArray, Layer};

/// A feature map on p6 or p6m: orientation `j` holds the responses for the
/// `j`-th canonical point-group element.
#[derive(Debug, Clone, PartialEq)]
pub struct GFeatureMap {
    group: Group,
    image: HexImage,
}

impl GFeatureMap {
    pub fn new(group: Group, image: HexImage) -> Result<Self> {
        if image.orientations() != group.order() {
            return Err(Error::shape(format!(
                "{group} feature map needs {} orientations, got {}",
                group.order(),
                image.orientations()
            )));
        }
        Ok(Self { group, image })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn image(&self) -> &HexImage {
        &self.image
    }

    pub fn into_image(self) -> HexImage {
        self.image
    }

    /// `[L_g f](p, s) = f(g⁻¹p, h⁻¹s)`.
    pub fn transform(&self, g: &GroupElement) -> Result<Self> {
        Ok(Self {
            group: self.group,
            image: transform_feature_map(g, &self.image)?,
        })
    }
}

impl Deref for GFeatureMap {
    type Target = HexImage;

    fn deref(&self) -> &HexImage {
        &self.image
    }
}

/// A G-convolution layer with its index array built once.
#[derive(Debug, Clone)]
pub struct GConv {
    index: IndexArray,
}

impl GConv {
    pub fn new(group: Group, layer: Layer, size: usize) -> Result<Self> {
        Ok(Self {
            index: build_index_array(group, layer, size)?,
        })
    }

    pub fn index(&self) -> &IndexArray {
        &self.index
    }

    pub fn group(&self) -> Group {
        self.index.group()
    }

    /// The transformed bank `Ψ[I]`.
    pub fn bank(&self, psi: &HexFilter) -> Result<HexFilter> {
        transform_filters(psi, &self.index)
    }

    /// Convolves `f` (planar for a first layer, `|H|` orientations for a
    /// full layer) and returns a map on the group.
    pub fn apply(&self, f: &HexImage, psi: &HexFilter, spec: ConvSpec) -> Result<GFeatureMap> {
        let expected = self.index.h_in();
        if f.orientations() != expected {
            return Err(Error::shape(format!(
                "{} {} layer expects {expected} input orientation(s), got {}",
                self.group(),
                self.index.layer(),
                f.orientations()
            )));
        }
        let bank = self.bank(psi)?;
        let out = hexconv(f, &bank, spec)?;
        let image = out.reshape_planes(psi.out_channels(), self.index.h_out())?;
        GFeatureMap::new(self.group(), image)
    }
}

/// Lifting convolution from a planar image to a map on `group`.
pub fn gconv_first(
    f: &HexImage,
    psi: &HexFilter,
    group: Group,
    spec: ConvSpec,
) -> Result<GFeatureMap> {
    GConv::new(group, Layer::First, psi.size())?.apply(f, psi, spec)
}

/// Convolution of a map on `group` with filters on `group`. `psi` has
/// `K·|H|` input channels, channel `k·|H| + s` being orientation `s` of
/// input channel `k`.
pub fn gconv_full(
    f: &GFeatureMap,
    psi: &HexFilter,
    group: Group,
    spec: ConvSpec,
) -> Result<GFeatureMap> {
    if f.group() != group {
        return Err(Error::shape(format!(
            "feature map lives on {}, layer on {group}",
            f.group()
        )));
    }
    GConv::new(group, Layer::Full, psi.size())?.apply(f.image(), psi, spec)
}

fn check_planes(f: &HexImage, psi: &HexFilter) -> Result<()> {
    if psi.in_channels() != f.planes() {
        return Err(Error::shape(format!(
            "filter expects {} input planes, map has {}",
            psi.in_channels(),
            f.planes()
        )));
    }
    Ok(())
}

/// Direct sum `Σ_q Σ_k f_k(q) ψ_k(g⁻¹ q)` for every `g = (h_j, p)`.
pub fn gconv_first_oracle(f: &HexImage, psi: &HexFilter, group: Group) -> Result<GFeatureMap> {
    if f.orientations() != 1 {
        return Err(Error::shape("first layer needs a planar map"));
    }
    check_planes(f, psi)?;
    let pg = PointGroup::new(group.flavor());
    let mut out = f.zeros_like(psi.out_channels(), pg.order());
    let cells: Vec<_> = f.valid_cells().collect();
    let sites: Vec<AxialPoint> = f.valid_sites().collect();
    for c in 0..psi.out_channels() {
        for j in 0..pg.order() {
            for &(row, col) in &cells {
                let g_inv = GroupElement::new(pg.element(j), f.site(row, col)).inverse();
                let mut acc = 0.0f64;
                for k in 0..psi.in_channels() {
                    for &q in &sites {
                        acc += f64::from(f.at(k, 0, q)) * f64::from(psi.at(c, k, g_inv.act(q)));
                    }
                }
                out.set(c, j, row, col, acc as f32);
            }
        }
    }
    GFeatureMap::new(group, out)
}

/// Direct sum `Σ_(q, s) Σ_k f_k(s, q) ψ_k(g⁻¹ · (h_s, q))` for every
/// `g = (h_j, p)`.
pub fn gconv_full_oracle(f: &GFeatureMap, psi: &HexFilter) -> Result<GFeatureMap> {
    check_planes(f, psi)?;
    let pg = PointGroup::new(f.group().flavor());
    let h = pg.order();
    let k_count = f.channels();
    let mut out = f.zeros_like(psi.out_channels(), h);
    let cells: Vec<_> = f.valid_cells().collect();
    let sites: Vec<AxialPoint> = f.valid_sites().collect();
    for c in 0..psi.out_channels() {
        for j in 0..h {
            for &(row, col) in &cells {
                let g_inv = GroupElement::new(pg.element(j), f.site(row, col)).inverse();
                let mut acc = 0.0f64;
                for k in 0..k_count {
                    for s in 0..h {
                        for &q in &sites {
                            let rel = g_inv.compose(&GroupElement::new(pg.element(s), q))?;
                            let o = rel.h.index();
                            acc +=
                                f64::from(f.at(k, s, q)) * f64::from(psi.at(c, k * h + o, rel.t));
                        }
                    }
                }
                out.set(c, j, row, col, acc as f32);
            }
        }
    }
    GFeatureMap::new(f.group(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::hexconv::Backend;
    use crate::hexgrid::{make_hex_disk, make_hex_disk_oriented, translate_feature_map};
    use crate::hexgroup::{Flavor, PointGroupElement};
    use crate::rng::Instances;

    fn spec() -> ConvSpec {
        ConvSpec::default()
    }

    fn point_elements(group: Group) -> Vec<GroupElement> {
        let pg = PointGroup::new(group.flavor());
        (0..pg.order())
            .map(|j| GroupElement::point(pg.element(j)))
            .collect()
    }

    #[test]
    fn zero_in_zero_out() {
        let psi = Instances::new(1).filter(2, 1, 1);
        for group in [Group::P6, Group::P6m] {
            let f = make_hex_disk(3, 1).unwrap();
            let out = gconv_first(&f, &psi, group, spec()).unwrap();
            assert!(out.data().iter().all(|&v| v == 0.0));
            let g = GFeatureMap::new(group, make_hex_disk_oriented(3, 2, group.order()).unwrap())
                .unwrap();
            let psi2 = Instances::new(2).filter(1, 2 * group.order(), 1);
            assert!(gconv_full(&g, &psi2, group, spec())
                .unwrap()
                .data()
                .iter()
                .all(|&v| v == 0.0));
        }
    }

    #[test]
    fn delta_image_stamps_rotated_filters() {
        let psi = Instances::new(3).filter(1, 1, 2);
        let mut f = make_hex_disk(4, 1).unwrap();
        let (r, c) = f.valid_index(AxialPoint::new(0, 0)).unwrap();
        f.set(0, 0, r, c, 1.0);
        let out = gconv_first(&f, &psi, Group::P6m, spec()).unwrap();
        let pg = PointGroup::new(Flavor::D6);
        for j in 0..12 {
            let h_inv = pg.element(j).inverse();
            for p in f.valid_sites() {
                // out_j(p) = ψ(h_j⁻¹ (0 - p))
                assert_eq!(out.at(0, j, p), psi.at(0, 0, h_inv.apply(-p)));
            }
        }
    }

    #[test]
    fn symmetric_filter_gives_identical_orientations() {
        let mut psi = HexFilter::zeros(1, 1, 1);
        for (a, b) in (0..3).flat_map(|a| (0..3).map(move |b| (a, b))) {
            if psi.in_support(a, b) {
                psi.set(0, 0, a, b, 0.5);
            }
        }
        let f = Instances::new(4).disk_image(3, 1, 1);
        let out = gconv_first(&f, &psi, Group::P6, spec()).unwrap();
        for j in 1..6 {
            assert_eq!(out.plane(0, j), out.plane(0, 0));
        }
    }

    #[test]
    fn full_delta_filter_passes_channels_through() {
        for group in [Group::P6, Group::P6m] {
            let n = group.order();
            let mut psi = HexFilter::zeros(1, n, 1);
            psi.set(0, 0, 1, 1, 1.0);
            let f = GFeatureMap::new(group, Instances::new(5).disk_image(3, 1, n)).unwrap();
            let out = gconv_full(&f, &psi, group, spec()).unwrap();
            assert_eq!(out.image(), f.image());
        }
    }

    #[test]
    fn oracles_agree_with_two_step() {
        let mut rng = Instances::new(6);
        for group in [Group::P6, Group::P6m] {
            for _ in 0..3 {
                let (k, c, radius) = (rng.range(1, 2), rng.range(1, 2), rng.range(1, 2));
                let f = rng.disk_image(3, k, 1);
                let psi = rng.filter(c, k, radius);
                let fast = gconv_first(&f, &psi, group, spec()).unwrap();
                let slow = gconv_first_oracle(&f, &psi, group).unwrap();
                assert!(fast.max_abs_diff(&slow) < 1e-5);

                let g = GFeatureMap::new(group, rng.disk_image(3, k, group.order())).unwrap();
                let psi = rng.filter(c, k * group.order(), radius);
                for backend in Backend::ALL {
                    let fast = gconv_full(&g, &psi, group, ConvSpec::new(backend)).unwrap();
                    let slow = gconv_full_oracle(&g, &psi).unwrap();
                    assert!(fast.max_abs_diff(&slow) < 1e-5);
                    assert!(fast.is_masked());
                }
            }
        }
    }

    #[test]
    fn first_layer_equivariance() {
        let mut rng = Instances::new(7);
        for group in [Group::P6, Group::P6m] {
            let f = rng.disk_image(4, 2, 1);
            let psi = rng.filter(2, 2, 2);
            let out = gconv_first(&f, &psi, group, spec()).unwrap();
            for g in point_elements(group) {
                let lhs = gconv_first(&transform_feature_map(&g, &f).unwrap(), &psi, group, spec())
                    .unwrap();
                let rhs = out.transform(&g).unwrap();
                assert!(lhs.max_abs_diff(&rhs) < 1e-5);
            }
        }
    }

    #[test]
    fn full_layer_equivariance() {
        let mut rng = Instances::new(8);
        for group in [Group::P6, Group::P6m] {
            let f = GFeatureMap::new(group, rng.disk_image(3, 2, group.order())).unwrap();
            let psi = rng.filter(2, 2 * group.order(), 1);
            let out = gconv_full(&f, &psi, group, spec()).unwrap();
            for g in point_elements(group) {
                let lhs = gconv_full(&f.transform(&g).unwrap(), &psi, group, spec()).unwrap();
                let rhs = out.transform(&g).unwrap();
                assert!(lhs.max_abs_diff(&rhs) < 1e-5);
            }
        }
    }

    #[test]
    fn translation_equivariance_on_interior() {
        let mut rng = Instances::new(9);
        let f = GFeatureMap::new(Group::P6, rng.disk_image(5, 1, 6)).unwrap();
        let psi = rng.filter(1, 6, 1);
        let t = AxialPoint::new(1, -1);
        let out = gconv_full(&f, &psi, Group::P6, spec()).unwrap();
        let shifted = GFeatureMap::new(Group::P6, translate_feature_map(t, f.image())).unwrap();
        let lhs = gconv_full(&shifted, &psi, Group::P6, spec()).unwrap();
        let rhs = translate_feature_map(t, out.image());
        for p in f.valid_sites().filter(|p| p.norm() <= 2) {
            for j in 0..6 {
                assert_eq!(lhs.at(0, j, p), rhs.at(0, j, p));
            }
        }
    }

    #[test]
    fn sequential_and_parallel_bitwise_equal() {
        let mut rng = Instances::new(10);
        let f = GFeatureMap::new(Group::P6m, rng.disk_image(4, 2, 12)).unwrap();
        let psi = rng.filter(3, 24, 2);
        let a = gconv_full(
            &f,
            &psi,
            Group::P6m,
            spec().with_exec(Execution::Sequential),
        )
        .unwrap();
        let b = gconv_full(&f, &psi, Group::P6m, spec().with_exec(Execution::Parallel)).unwrap();
        assert!(a
            .data()
            .iter()
            .zip(b.data())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn shape_errors() {
        let psi = HexFilter::zeros(1, 1, 1);
        let planar = make_hex_disk(2, 1).unwrap();
        assert!(matches!(
            GFeatureMap::new(Group::P6, planar.clone()),
            Err(Error::Shape(_))
        ));
        let g6 = GFeatureMap::new(Group::P6, make_hex_disk_oriented(2, 1, 6).unwrap()).unwrap();
        assert!(matches!(
            gconv_full(&g6, &psi, Group::P6, spec()),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            gconv_full(&g6, &HexFilter::zeros(1, 12, 1), Group::P6m, spec()),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            gconv_first(g6.image(), &psi, Group::P6, spec()),
            Err(Error::Shape(_))
        ));
        let m = GroupElement::point(PointGroupElement::mirror());
        assert!(g6.transform(&m).is_err());
    }
}
