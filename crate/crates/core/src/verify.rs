//! Seeded property suites.
//!
//! Each suite returns one [`PropertyReport`] per property. Exact properties
//! count violations and pass only with none. Numeric properties track the
//! largest residual and pass when it is strictly below their tolerance.
//! A failing property keeps its worst instance as HEXT tensors so it can
//! be replayed.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gconv::{
    build_index_array, gconv_first, gconv_first_oracle, gconv_full, gconv_full_oracle,
    pool_invariant, pool_orientations_spatial, transform_filters, GFeatureMap, Layer, PoolMode,
};
use crate::hexconv::{hexconv, hexconv_oracle, Backend, ConvSpec};
use crate::hexcoord::{AxialPoint, CubePoint, DoubleWidthPoint, OffsetPoint};
use crate::hexgrid::resample::{resample_square_to_hex, site_position};
use crate::hexgrid::{
    disk_mask, make_hex_disk, transform_feature_map, translate_feature_map, GrayImage, HexFilter,
    HexImage, HextTensor,
};
use crate::hexgroup::{
    enumerate_point_group, Flavor, Group, GroupElement, PointGroup, PointGroupElement,
};
use crate::rng::Instances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Groups,
    Coords,
    Conv,
    Gconv,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Groups, Suite::Coords, Suite::Conv, Suite::Gconv];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Groups => "groups",
            Suite::Coords => "coords",
            Suite::Conv => "conv",
            Suite::Gconv => "gconv",
        }
    }

    fn salt(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::arg(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    pub seed: u64,
    /// Overrides every numeric property's own tolerance.
    pub tolerance: Option<f64>,
    /// Random instances per convolution property.
    pub instances: usize,
    /// Random instances per G-convolution equivariance property.
    pub gconv_instances: usize,
    pub exec: Execution,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tolerance: None,
            instances: 50,
            gconv_instances: 20,
            exec: Execution::default(),
        }
    }
}

impl CheckConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// A named tensor from a failing instance.
#[derive(Debug, Clone)]
pub struct Dump {
    pub name: String,
    pub tensor: HextTensor,
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub max_error: f64,
    /// `None` for exact properties.
    pub tolerance: Option<f64>,
    pub cases: usize,
    pub violations: usize,
    pub detail: Option<String>,
    pub dumps: Vec<Dump>,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}/{} cases={} max_error={:.3e}",
            self.suite, self.name, self.cases, self.max_error
        )?;
        match self.tolerance {
            Some(t) => write!(f, " tolerance={t:.1e}")?,
            None => write!(f, " violations={} (exact)", self.violations)?,
        }
        if let Some(d) = &self.detail {
            write!(f, " [{d}]")?;
        }
        Ok(())
    }
}

/// Outcome of one instance of a property, possibly covering many checks.
struct Case {
    error: f64,
    violations: usize,
    checks: usize,
    detail: Option<String>,
    dumps: Vec<Dump>,
}

impl Case {
    fn exact(ok: bool) -> Self {
        Self::counted(usize::from(!ok), 1)
    }

    fn counted(violations: usize, checks: usize) -> Self {
        Self {
            error: if violations == 0 { 0.0 } else { 1.0 },
            violations,
            checks,
            detail: None,
            dumps: Vec::new(),
        }
    }

    fn residual(error: f64) -> Self {
        Self {
            error,
            violations: 0,
            checks: 1,
            detail: None,
            dumps: Vec::new(),
        }
    }

    /// Attaches a description and the tensors needed to replay the case.
    fn describe(mut self, f: impl FnOnce() -> (String, Vec<Dump>)) -> Self {
        let (detail, dumps) = f();
        self.detail = Some(detail);
        self.dumps = dumps;
        self
    }
}

fn image_dump(name: &str, f: &HexImage) -> Dump {
    Dump {
        name: name.to_string(),
        tensor: f.to_hext(),
    }
}

fn filter_dump(name: &str, psi: &HexFilter) -> Dump {
    Dump {
        name: name.to_string(),
        tensor: psi.to_hext(),
    }
}

struct Property {
    suite: Suite,
    name: &'static str,
    tolerance: Option<f64>,
}

impl Property {
    fn exact(suite: Suite, name: &'static str) -> Self {
        Self {
            suite,
            name,
            tolerance: None,
        }
    }

    fn numeric(suite: Suite, name: &'static str, default: f64, cfg: &CheckConfig) -> Self {
        Self {
            suite,
            name,
            tolerance: Some(cfg.tolerance.unwrap_or(default)),
        }
    }

    fn finish(self, cases: Vec<Case>) -> PropertyReport {
        let tolerance = self.tolerance;
        let failing = |c: &Case| {
            c.violations > 0 || tolerance.is_some_and(|t| c.error.is_nan() || c.error >= t)
        };
        let checks = cases.iter().map(|c| c.checks).sum();
        let violations: usize = cases
            .iter()
            .map(|c| {
                if c.violations > 0 {
                    c.violations
                } else {
                    usize::from(failing(c))
                }
            })
            .sum();
        let max_error = cases.iter().map(|c| c.error).fold(0.0f64, |a, b| {
            if a.is_nan() || b.is_nan() {
                f64::NAN
            } else {
                a.max(b)
            }
        });
        let mut worst: Option<Case> = None;
        for c in cases.into_iter().filter(|c| failing(c)) {
            if worst.as_ref().is_none_or(|w| c.error > w.error) {
                worst = Some(c);
            }
        }
        let (detail, dumps) = worst.map_or((None, Vec::new()), |w| (w.detail, w.dumps));
        PropertyReport {
            suite: self.suite,
            name: self.name,
            passed: violations == 0,
            max_error,
            tolerance,
            cases: checks,
            violations,
            detail,
            dumps,
        }
    }
}

/// Runs one suite.
pub fn run_suite(suite: Suite, cfg: &CheckConfig) -> Vec<PropertyReport> {
    let mut rng = Instances::new(cfg.seed ^ suite.salt().wrapping_mul(0x9e37_79b9_7f4a_7c15));
    match suite {
        Suite::Groups => groups(cfg),
        Suite::Coords => coords(cfg),
        Suite::Conv => conv(cfg, &mut rng),
        Suite::Gconv => gconv(cfg, &mut rng),
    }
}

pub fn run_suites(suites: &[Suite], cfg: &CheckConfig) -> Vec<PropertyReport> {
    suites.iter().flat_map(|&s| run_suite(s, cfg)).collect()
}

/// Writes the tensors and description of every failing property into
/// `dir` and returns the files written.
pub fn write_failure_dumps(reports: &[PropertyReport], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for r in reports.iter().filter(|r| !r.passed) {
        fs::create_dir_all(dir).map_err(|source| Error::File {
            path: dir.to_path_buf(),
            source,
        })?;
        let stem = format!("{}-{}", r.suite, r.name);
        let txt = dir.join(format!("{stem}.txt"));
        fs::write(&txt, format!("{r}\n")).map_err(|source| Error::File {
            path: txt.clone(),
            source,
        })?;
        written.push(txt);
        for d in &r.dumps {
            let path = dir.join(format!("{stem}-{}.hext", d.name));
            d.tensor.write(&path)?;
            written.push(path);
        }
    }
    Ok(written)
}

// ---------------------------------------------------------------- groups

/// Every point-group element combined with every translation in
/// `[-2, 2]²`.
fn window_elements(flavor: Flavor) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for h in enumerate_point_group(flavor) {
        for v in -2..=2 {
            for u in -2..=2 {
                out.push(GroupElement::new(h, AxialPoint::new(u, v)));
            }
        }
    }
    out
}

const PROBES: [AxialPoint; 5] = [
    AxialPoint { u: 0, v: 0 },
    AxialPoint { u: 1, v: 0 },
    AxialPoint { u: 0, v: 1 },
    AxialPoint { u: -2, v: 3 },
    AxialPoint { u: 3, v: -1 },
];

fn compose(a: &GroupElement, b: &GroupElement) -> GroupElement {
    a.compose(b).expect("same flavor")
}

fn groups(cfg: &CheckConfig) -> Vec<PropertyReport> {
    let s = Suite::Groups;
    let mut reports = Vec::new();
    let flavors = [Flavor::C6, Flavor::D6];

    let mut closure = Vec::new();
    let mut assoc = Vec::new();
    let mut identity = Vec::new();
    let mut inverse = Vec::new();
    for flavor in flavors {
        let els = window_elements(flavor);
        let e = GroupElement::identity(flavor);
        closure.extend(cfg.exec.map(els.len(), |i| {
            let a = els[i];
            let bad = els
                .iter()
                .filter(|b| {
                    let c = compose(&a, b);
                    let canonical =
                        PointGroupElement::canonical(flavor, c.h.index()).ok() == Some(c.h);
                    !canonical || PROBES.iter().any(|&p| c.act(p) != a.act(b.act(p)))
                })
                .count();
            Case::counted(bad, els.len())
                .describe(|| (format!("{flavor:?} left factor {a}"), Vec::new()))
        }));
        assoc.extend(cfg.exec.map(els.len(), |i| {
            let a = els[i];
            let mut bad = 0;
            for b in &els {
                let ab = compose(&a, b);
                for c in &els {
                    if compose(&ab, c) != compose(&a, &compose(b, c)) {
                        bad += 1;
                    }
                }
            }
            Case::counted(bad, els.len() * els.len())
                .describe(|| (format!("{flavor:?} left factor {a}"), Vec::new()))
        }));
        identity.extend(
            els.iter()
                .map(|a| Case::exact(compose(&e, a) == *a && compose(a, &e) == *a)),
        );
        inverse.extend(els.iter().map(|a| {
            let ai = a.inverse();
            Case::exact(compose(a, &ai) == e && compose(&ai, a) == e)
                .describe(|| (format!("{a} has no two-sided inverse"), Vec::new()))
        }));
    }
    reports.push(Property::exact(s, "closure").finish(closure));
    reports.push(Property::exact(s, "associativity").finish(assoc));
    reports.push(Property::exact(s, "identity").finish(identity));
    reports.push(Property::exact(s, "inverse").finish(inverse));

    let mut orders = Vec::new();
    for flavor in flavors {
        let e = PointGroupElement::identity(flavor);
        let r = PointGroupElement::rotation(flavor, 1);
        let mut acc = e;
        for k in 1..=6 {
            acc = acc.compose(&r).expect("same flavor");
            orders.push(Case::exact((acc == e) == (k == 6)));
        }
    }
    let m = PointGroupElement::mirror();
    let e12 = PointGroupElement::identity(Flavor::D6);
    orders.push(Case::exact(m != e12 && m.compose(&m).ok() == Some(e12)));
    reports.push(Property::exact(s, "rotation-and-mirror-orders").finish(orders));

    let mut addition = Vec::new();
    for flavor in flavors {
        let pg = PointGroup::new(flavor);
        for i in 0..6 {
            for j in 0..6 {
                let lhs = PointGroupElement::rotation(flavor, i)
                    .compose(&PointGroupElement::rotation(flavor, j));
                let ok = lhs.ok() == Some(PointGroupElement::rotation(flavor, (i + j) % 6))
                    && pg.mul(i as usize, j as usize) == ((i + j) % 6) as usize;
                addition.push(Case::exact(ok));
            }
        }
    }
    reports.push(Property::exact(s, "rotations-add-mod-6").finish(addition));

    let mut dihedral = Vec::new();
    for k in 0..6 {
        let r = PointGroupElement::rotation(Flavor::D6, k);
        let mrm = m.compose(&r).and_then(|x| x.compose(&m));
        dihedral.push(Case::exact(mrm.ok() == Some(r.inverse())));
    }
    reports.push(Property::exact(s, "mirror-conjugates-rotation-to-inverse").finish(dihedral));

    let isometry: Vec<Case> = window_elements(Flavor::D6)
        .iter()
        .map(|g| {
            let ok = PROBES.iter().all(|&p| {
                PROBES
                    .iter()
                    .all(|&q| g.act(p).distance(g.act(q)) == p.distance(q))
            });
            Case::exact(ok)
        })
        .collect();
    reports.push(Property::exact(s, "action-is-isometry").finish(isometry));
    reports
}

// ---------------------------------------------------------------- coords

fn lattice_window() -> impl Iterator<Item = AxialPoint> {
    (-32..=32).flat_map(|v| (-32..=32).map(move |u| AxialPoint::new(u, v)))
}

fn cube_ok(c: CubePoint) -> bool {
    c.x() + c.y() + c.z() == 0
}

fn coords(cfg: &CheckConfig) -> Vec<PropertyReport> {
    let s = Suite::Coords;
    let pts: Vec<AxialPoint> = lattice_window().collect();
    let each = |f: &dyn Fn(AxialPoint) -> bool| -> Vec<Case> {
        pts.iter()
            .map(|&p| Case::exact(f(p)).describe(|| (format!("fails at {p}"), Vec::new())))
            .collect()
    };
    let mut reports = vec![
        Property::exact(s, "axial-cube-round-trip").finish(each(&|p| {
            let c = p.to_cube();
            c.to_axial() == p && CubePoint::new(c.x(), c.y(), c.z()).is_ok()
        })),
        Property::exact(s, "axial-offset-bijection").finish(each(&|p| {
            // p doubles as an (row, col) pair for the reverse direction
            let o = OffsetPoint { row: p.v, col: p.u };
            OffsetPoint::to_axial(p.to_offset()) == p && OffsetPoint::to_axial(o).to_offset() == o
        })),
        Property::exact(s, "axial-double-width-bijection").finish(each(&|p| {
            let round = p.to_double_width().to_axial() == p;
            let (row, col) = (p.v, p.u);
            let reverse = match DoubleWidthPoint::new(row, col) {
                Ok(d) => (row + col).rem_euclid(2) == 0 && d.to_axial().to_double_width() == d,
                Err(_) => (row + col).rem_euclid(2) == 1,
            };
            round && reverse
        })),
        Property::exact(s, "cube-constraint-preserved").finish(each(&|p| {
            let c = p.to_cube();
            cube_ok(c)
                && cube_ok(c.rotate60())
                && cube_ok(c.mirror())
                && cube_ok(p.to_offset().to_axial().to_cube())
                && cube_ok(p.to_double_width().to_axial().to_cube())
                && enumerate_point_group(Flavor::D6)
                    .iter()
                    .all(|h| cube_ok(h.apply_cube(c)))
        })),
        Property::exact(s, "rotation-order-6").finish(each(&|p| {
            let mut q = p;
            (1..=6).all(|k| {
                q = q.rotate60();
                (q == p) == (k == 6 || p == AxialPoint::ORIGIN)
            }) && p.to_cube().rotate60().to_axial() == p.rotate60()
        })),
        Property::exact(s, "mirror-involution").finish(each(&|p| {
            p.mirror().mirror() == p && p.to_cube().mirror().to_axial() == p.mirror()
        })),
        Property::exact(s, "norm-invariance").finish(each(&|p| {
            p.rotate60().norm() == p.norm() && p.mirror().norm() == p.norm()
        })),
    ];
    let embedding: Vec<Case> = pts
        .iter()
        .map(|&p| Case::residual(p.rotate60().embed().dist(p.embed().rotate60())))
        .collect();
    reports.push(
        Property::numeric(s, "embedding-commutes-with-rotation", 1e-9, cfg).finish(embedding),
    );

    let disks: Vec<Case> = (0..=5usize)
        .map(|r| {
            let expected = 3 * r * (r + 1) + 1;
            let count = disk_mask(r).iter().filter(|&&m| m).count();
            let made = make_hex_disk(r as i32, 1).map(|f| f.valid_count()).ok();
            Case::exact(count == expected && made == Some(expected)).describe(|| {
                (
                    format!("radius {r}: {count} cells, expected {expected}"),
                    Vec::new(),
                )
            })
        })
        .collect();
    reports.push(Property::exact(s, "hex-disk-counts").finish(disks));
    reports
}

// ---------------------------------------------------------------- conv

fn conv(cfg: &CheckConfig, rng: &mut Instances) -> Vec<PropertyReport> {
    let s = Suite::Conv;
    let mut reports = Vec::new();

    // backend equivalence and masking share instances
    let kids = rng.split_n(cfg.instances);
    let results: Vec<(Case, Case)> = kids
        .into_iter()
        .map(|mut r| {
            let radius = r.range(1, 5) as i32;
            let (k, c, fr) = (r.range(1, 4), r.range(1, 4), r.range(1, 2));
            let f = r.disk_image(radius, k, 1);
            let psi = r.filter(c, k, fr);
            let oracle = hexconv_oracle(&f, &psi).expect("consistent shapes");
            let outs: Vec<HexImage> = Backend::ALL
                .iter()
                .map(|&b| {
                    hexconv(&f, &psi, ConvSpec::new(b).with_exec(cfg.exec))
                        .expect("consistent shapes")
                })
                .collect();
            let mut err = 0.0f64;
            for (i, a) in outs.iter().enumerate() {
                err = err.max(f64::from(a.max_abs_diff(&oracle)));
                for b in &outs[i + 1..] {
                    err = err.max(f64::from(a.max_abs_diff(b)));
                }
            }
            let masked = outs.iter().all(HexImage::is_masked);
            let dumps = || vec![image_dump("input", &f), filter_dump("filter", &psi)];
            let desc = format!("disk radius {radius}, K={k}, C={c}, filter radius {fr}");
            (
                Case::residual(err).describe(|| (desc.clone(), dumps())),
                Case::exact(masked).describe(|| (desc.clone(), dumps())),
            )
        })
        .collect();
    let (equiv, masking): (Vec<Case>, Vec<Case>) = results.into_iter().unzip();
    reports.push(Property::numeric(s, "backend-equivalence", 1e-5, cfg).finish(equiv));
    reports.push(Property::exact(s, "output-masking").finish(masking));

    let translation: Vec<Case> = rng
        .split_n(cfg.instances)
        .into_iter()
        .map(|mut r| {
            let radius = r.range(3, 5) as i32;
            let (k, c, fr) = (r.range(1, 3), r.range(1, 3), r.range(1, 2));
            let f = r.disk_image(radius, k, 1);
            let psi = r.filter(c, k, fr);
            let t = r.group_element(Flavor::C6, 1).t;
            let spec = ConvSpec::default().with_exec(cfg.exec);
            let lhs = hexconv(&translate_feature_map(t, &f), &psi, spec).expect("shapes");
            let rhs = translate_feature_map(t, &hexconv(&f, &psi, spec).expect("shapes"));
            let interior: Vec<AxialPoint> = f
                .valid_sites()
                .filter(|&p| p.norm() + fr as i32 <= radius && (p - t).norm() <= radius)
                .collect();
            let bad = interior
                .iter()
                .filter(|&&p| (0..c).any(|ch| lhs.at(ch, 0, p) != rhs.at(ch, 0, p)))
                .count();
            Case::counted(bad, interior.len().max(1)).describe(|| {
                (
                    format!("translation {t}, disk radius {radius}"),
                    vec![image_dump("input", &f), filter_dump("filter", &psi)],
                )
            })
        })
        .collect();
    reports.push(Property::exact(s, "translation-equivariance-interior").finish(translation));

    let rotation: Vec<Case> = rng
        .split_n(cfg.instances)
        .into_iter()
        .map(|mut r| {
            let radius = r.range(2, 5) as i32;
            let (k, c, fr) = (r.range(1, 3), r.range(1, 3), r.range(1, 2));
            let f = r.disk_image(radius, k, 1);
            let psi = r.filter(c, k, fr);
            let spec = ConvSpec::default().with_exec(cfg.exec);
            let mut err = 0.0f64;
            for j in 0..6 {
                let rot = GroupElement::point(PointGroupElement::rotation(Flavor::C6, j));
                let lhs = hexconv(&transform_feature_map(&rot, &f).expect("disk"), &psi, spec)
                    .expect("shapes");
                let back = crate::gconv::rotate_filter(&psi, &rot.h.inverse());
                let rhs = transform_feature_map(&rot, &hexconv(&f, &back, spec).expect("shapes"))
                    .expect("disk");
                err = err.max(f64::from(lhs.max_abs_diff(&rhs)));
            }
            Case::residual(err).describe(|| {
                (
                    format!("disk radius {radius}"),
                    vec![image_dump("input", &f), filter_dump("filter", &psi)],
                )
            })
        })
        .collect();
    reports.push(Property::numeric(s, "rotation-relation", 1e-5, cfg).finish(rotation));

    let sources: Vec<(usize, usize, f64)> = (0..12)
        .map(|_| {
            (
                rng.range(2, 24),
                rng.range(2, 24),
                0.5 + rng.range(0, 10) as f64 * 0.15,
            )
        })
        .collect();
    let constants: Vec<Case> = sources
        .iter()
        .enumerate()
        .map(|(i, &(w, h, sp))| {
            let value = (i * 37 % 256) as f32 + 0.5;
            let src = GrayImage::from_fn(w, h, |_, _| value);
            let hex = resample_square_to_hex(&src, sp).expect("valid source");
            let bad = hex
                .valid_sites()
                .filter(|&p| hex.at(0, 0, p) != value)
                .count();
            Case::counted(bad, hex.valid_count()).describe(|| {
                (
                    format!("{w}x{h} source, spacing {sp}"),
                    vec![image_dump("output", &hex)],
                )
            })
        })
        .collect();
    reports.push(Property::exact(s, "resample-constants").finish(constants));

    let ramps: Vec<Case> = sources
        .iter()
        .map(|&(w, h, sp)| {
            let (a, b, c) = (0.02f64, -0.015f64, 0.5f64);
            let ramp = |x: f64, y: f64| a * x + b * y + c;
            let src = GrayImage::from_fn(w, h, |x, y| ramp(x as f64, y as f64) as f32);
            let hex = resample_square_to_hex(&src, sp).expect("valid source");
            let err = hex
                .valid_sites()
                .filter(|&p| {
                    let (x, y) = site_position(p, sp);
                    x < (w - 1) as f64 && y < (h - 1) as f64
                })
                .map(|p| {
                    let (x, y) = site_position(p, sp);
                    (f64::from(hex.at(0, 0, p)) - ramp(x, y)).abs()
                })
                .fold(0.0, f64::max);
            Case::residual(err).describe(|| (format!("{w}x{h} source, spacing {sp}"), Vec::new()))
        })
        .collect();
    reports.push(Property::numeric(s, "resample-affine-ramp", 1e-6, cfg).finish(ramps));
    reports
}

// ---------------------------------------------------------------- gconv

fn gconv(cfg: &CheckConfig, rng: &mut Instances) -> Vec<PropertyReport> {
    let s = Suite::Gconv;
    let mut reports = Vec::new();
    let groups = [Group::P6, Group::P6m];
    let layers = [Layer::First, Layer::Full];
    let spec = ConvSpec::default().with_exec(cfg.exec);

    let mut bijection = Vec::new();
    let mut identity = Vec::new();
    let mut composition = Vec::new();
    for g in groups {
        let pg = PointGroup::new(g.flavor());
        for layer in layers {
            for size in [1, 3, 5, 7] {
                let idx = build_index_array(g, layer, size).expect("odd size");
                let n = idx.slice(0).len();
                let valid: Vec<bool> = idx.slice(0).iter().map(Option::is_some).collect();
                for j in 0..idx.h_out() {
                    let mut seen = vec![false; n];
                    let mut ok = true;
                    for (t, e) in idx.slice(j).iter().enumerate() {
                        match e {
                            Some(src) => {
                                let f = idx.flat(*src);
                                ok &=
                                    valid[t] && valid[f] && !std::mem::replace(&mut seen[f], true);
                            }
                            None => ok &= !valid[t],
                        }
                    }
                    bijection.push(
                        Case::exact(ok)
                            .describe(|| (format!("{g} {layer} S={size} slice {j}"), Vec::new())),
                    );
                }
                identity.push(Case::exact(
                    idx.slice(0)
                        .iter()
                        .enumerate()
                        .all(|(t, e)| e.is_none_or(|e| idx.flat(e) == t)),
                ));
                let src = |j: usize, t: usize| idx.slice(j)[t].map(|e| idx.flat(e));
                for a in 0..pg.order() {
                    for b in 0..pg.order() {
                        let ab = pg.mul(a, b);
                        let ok = (0..n).all(|t| src(a, t).and_then(|m| src(b, m)) == src(ab, t));
                        composition.push(Case::exact(ok).describe(|| {
                            (
                                format!("{g} {layer} S={size}: slice {a} then {b} != slice {ab}"),
                                Vec::new(),
                            )
                        }));
                    }
                }
            }
        }
    }
    reports.push(Property::exact(s, "index-slices-are-bijections").finish(bijection));
    reports.push(Property::exact(s, "index-identity-slice").finish(identity));
    reports.push(Property::exact(s, "index-slices-compose").finish(composition));

    let mut restore = Vec::new();
    let mut shapes = Vec::new();
    let mut bank_masking = Vec::new();
    for g in groups {
        for layer in layers {
            let idx = build_index_array(g, layer, 5).expect("odd size");
            let (c, k) = (rng.range(1, 3), rng.range(1, 3));
            let psi = rng.filter(c, k * idx.h_in(), 2);
            let bank = transform_filters(&psi, &idx).expect("consistent shapes");
            shapes.push(
                Case::exact(bank.shape() == [c * g.order(), k * idx.h_in(), 5, 5]).describe(|| {
                    (
                        format!("{g} {layer}: bank shape {:?}", bank.shape()),
                        Vec::new(),
                    )
                }),
            );
            bank_masking.push(Case::exact(bank.is_masked()));
            // r slice applied six times
            let n = 25;
            let mut cur = psi.clone();
            for _ in 0..6 {
                let all = transform_filters(&cur, &idx).expect("consistent shapes");
                let mut next = cur.clone();
                for ci in 0..c {
                    for ki in 0..cur.in_channels() {
                        let from = ((ci * g.order() + 1) * cur.in_channels() + ki) * n;
                        let to = (ci * cur.in_channels() + ki) * n;
                        next.data_mut()[to..to + n].copy_from_slice(&all.data()[from..from + n]);
                    }
                }
                cur = next;
            }
            let exact = cur
                .data()
                .iter()
                .zip(psi.data())
                .all(|(a, b)| a.to_bits() == b.to_bits());
            restore.push(
                Case::exact(exact)
                    .describe(|| (format!("{g} {layer}"), vec![filter_dump("filter", &psi)])),
            );
        }
    }
    reports.push(Property::exact(s, "six-rotations-restore-bank").finish(restore));
    reports.push(Property::exact(s, "bank-shape").finish(shapes));

    let mut oracle = Vec::new();
    let mut masking = bank_masking;
    for g in groups {
        for _ in 0..3 {
            let (k, c, fr) = (rng.range(1, 2), rng.range(1, 2), rng.range(1, 2));
            let radius = rng.range(2, 3) as i32;
            let f = rng.disk_image(radius, k, 1);
            let psi = rng.filter(c, k, fr);
            let fast = gconv_first(&f, &psi, g, spec).expect("shapes");
            let slow = gconv_first_oracle(&f, &psi, g).expect("shapes");
            masking.push(Case::exact(fast.is_masked()));
            oracle.push(
                Case::residual(f64::from(fast.max_abs_diff(&slow))).describe(|| {
                    (
                        format!("{g} first"),
                        vec![image_dump("input", &f), filter_dump("filter", &psi)],
                    )
                }),
            );

            let fg =
                GFeatureMap::new(g, rng.disk_image(radius, k, g.order())).expect("orientations");
            let psi = rng.filter(c, k * g.order(), fr);
            let fast = gconv_full(&fg, &psi, g, spec).expect("shapes");
            let slow = gconv_full_oracle(&fg, &psi).expect("shapes");
            masking.push(Case::exact(fast.is_masked()));
            oracle.push(
                Case::residual(f64::from(fast.max_abs_diff(&slow))).describe(|| {
                    (
                        format!("{g} full"),
                        vec![image_dump("input", fg.image()), filter_dump("filter", &psi)],
                    )
                }),
            );
        }
    }
    reports.push(Property::numeric(s, "oracle-equivalence", 1e-5, cfg).finish(oracle));

    let names = [
        (Group::P6, Layer::First, "equivariance-p6-first"),
        (Group::P6, Layer::Full, "equivariance-p6-full"),
        (Group::P6m, Layer::First, "equivariance-p6m-first"),
        (Group::P6m, Layer::Full, "equivariance-p6m-full"),
    ];
    for (g, layer, name) in names {
        let kids = rng.split_n(cfg.gconv_instances);
        let mut cases = Vec::new();
        for mut r in kids {
            let radius = r.range(2, 4) as i32;
            let (k, c, fr) = (r.range(1, 2), r.range(1, 2), r.range(1, 2));
            let (f, psi) = match layer {
                Layer::First => (r.disk_image(radius, k, 1), r.filter(c, k, fr)),
                Layer::Full => (
                    r.disk_image(radius, k, g.order()),
                    r.filter(c, k * g.order(), fr),
                ),
            };
            let run = |x: &HexImage| -> GFeatureMap {
                match layer {
                    Layer::First => gconv_first(x, &psi, g, spec),
                    Layer::Full => gconv_full(
                        &GFeatureMap::new(g, x.clone()).expect("orientations"),
                        &psi,
                        g,
                        spec,
                    ),
                }
                .expect("shapes")
            };
            let out = run(&f);
            masking.push(Case::exact(out.is_masked()));
            let mut err = 0.0f64;
            let pg = PointGroup::new(g.flavor());
            for j in 0..pg.order() {
                let el = GroupElement::point(pg.element(j));
                let lhs = run(&transform_feature_map(&el, &f).expect("disk"));
                let rhs = out.transform(&el).expect("disk");
                err = err.max(f64::from(lhs.max_abs_diff(&rhs)));
            }
            cases.push(Case::residual(err).describe(|| {
                (
                    format!("disk radius {radius}, K={k}, C={c}"),
                    vec![image_dump("input", &f), filter_dump("filter", &psi)],
                )
            }));
        }
        reports.push(Property::numeric(s, name, 1e-5, cfg).finish(cases));
    }
    reports.push(Property::exact(s, "output-masking").finish(masking));

    let invariance: Vec<Case> = rng
        .split_n(cfg.gconv_instances.clamp(1, 10))
        .into_iter()
        .map(|mut r| {
            let g = Group::P6;
            let f = r.disk_image(4, 1, 1);
            let psi1 = r.filter(2, 1, 1);
            let psi2 = r.filter(3, 2 * g.order(), 1);
            let net = |x: &HexImage| -> Vec<f32> {
                let h1 = gconv_first(x, &psi1, g, spec).expect("shapes");
                let h2 = gconv_full(&h1, &psi2, g, spec).expect("shapes");
                pool_invariant(&h2, PoolMode::Max)
            };
            let base = net(&f);
            let mut err = 0.0f64;
            for j in 1..6 {
                let rot = GroupElement::point(PointGroupElement::rotation(Flavor::C6, j));
                let v = net(&transform_feature_map(&rot, &f).expect("disk"));
                for (a, b) in v.iter().zip(&base) {
                    err = err.max(f64::from((a - b).abs()));
                }
            }
            Case::residual(err)
                .describe(|| ("p6 two-layer network".into(), vec![image_dump("input", &f)]))
        })
        .collect();
    reports.push(Property::numeric(s, "end-to-end-invariance", 1e-5, cfg).finish(invariance));

    let pooling: Vec<Case> = (0..4)
        .map(|_| {
            let f = GFeatureMap::new(Group::P6m, rng.disk_image(4, 1, 12)).expect("orientations");
            let window = rng.range(1, 2);
            let pooled = pool_orientations_spatial(&f, window);
            let ok = (0..12).all(|j| {
                let el = GroupElement::point(
                    PointGroupElement::canonical(Flavor::D6, j).expect("index"),
                );
                let lhs = pool_orientations_spatial(&f.transform(&el).expect("disk"), window);
                lhs == pooled.transform(&el).expect("disk")
            });
            Case::exact(ok)
        })
        .collect();
    reports.push(Property::exact(s, "spatial-pooling-equivariance").finish(pooling));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> CheckConfig {
        CheckConfig {
            instances: 6,
            gconv_instances: 2,
            ..CheckConfig::with_seed(3)
        }
    }

    #[test]
    fn all_suites_pass_with_default_tolerances() {
        for r in run_suites(&Suite::ALL, &quick()) {
            assert!(r.passed, "{r}");
            assert!(r.cases > 0, "{r}");
        }
    }

    #[test]
    fn zero_tolerance_fails_numeric_properties() {
        let cfg = CheckConfig {
            tolerance: Some(0.0),
            ..quick()
        };
        let reports = run_suite(Suite::Conv, &cfg);
        let equiv = reports
            .iter()
            .find(|r| r.name == "backend-equivalence")
            .unwrap();
        assert!(!equiv.passed);
        // exact properties ignore the tolerance knob
        assert!(
            reports
                .iter()
                .find(|r| r.name == "output-masking")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let a: Vec<f64> = run_suite(Suite::Conv, &quick())
            .iter()
            .map(|r| r.max_error)
            .collect();
        let b: Vec<f64> = run_suite(Suite::Conv, &quick())
            .iter()
            .map(|r| r.max_error)
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn failure_dumps_are_written() {
        let cfg = CheckConfig {
            tolerance: Some(0.0),
            ..quick()
        };
        let reports = run_suite(Suite::Conv, &cfg);
        let dir = tempfile::tempdir().unwrap();
        let files = write_failure_dumps(&reports, dir.path()).unwrap();
        assert!(files
            .iter()
            .any(|p| p.extension().is_some_and(|e| e == "hext")));
        let hext = files
            .iter()
            .find(|p| p.to_string_lossy().contains("backend-equivalence-input"))
            .unwrap();
        assert!(HexImage::read_hext(hext).is_ok());
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }
}
