//! Point groups C6 / D6 and the wallpaper groups p6 / p6m.
//!
//! A point-group element is stored as its action on cube coordinates: a
//! permutation of `(x, y, z)` with a common sign. Composition is function
//! composition, so the dihedral relations hold by construction. Canonical
//! indices (`r^0..r^5`, then `m·r^0..m·r^5`) are recovered by lookup.

use std::fmt;

use crate::error::{Error, Result};
use crate::hexcoord::{AxialPoint, CubePoint};

/// Which point group an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Rotations by multiples of 60 degrees.
    C6,
    /// Rotations and mirrors.
    D6,
}

impl Flavor {
    pub fn order(self) -> usize {
        match self {
            Flavor::C6 => 6,
            Flavor::D6 => 12,
        }
    }
}

/// Wallpaper group: translations of the hex lattice extended by a point group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    P6,
    P6m,
}

impl Group {
    pub fn flavor(self) -> Flavor {
        match self {
            Group::P6 => Flavor::C6,
            Group::P6m => Flavor::D6,
        }
    }

    /// Size of the point group, i.e. the number of orientation channels.
    pub fn order(self) -> usize {
        self.flavor().order()
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::P6 => "p6",
            Group::P6m => "p6m",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p6" => Ok(Group::P6),
            "p6m" => Ok(Group::P6m),
            _ => Err(Error::arg(format!(
                "unknown group {s:?}, expected p6 or p6m"
            ))),
        }
    }
}

/// A rotation or reflection fixing the origin.
///
/// `action(p)[i] = sign · p[perm[i]]` on cube coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointGroupElement {
    perm: [u8; 3],
    negate: bool,
    flavor: Flavor,
}

const ROTATION: ([u8; 3], bool) = ([2, 0, 1], true);
const MIRROR: ([u8; 3], bool) = ([0, 2, 1], false);

impl PointGroupElement {
    pub fn identity(flavor: Flavor) -> Self {
        Self {
            perm: [0, 1, 2],
            negate: false,
            flavor,
        }
    }

    /// Counter-clockwise rotation by `k · 60` degrees.
    pub fn rotation(flavor: Flavor, k: i32) -> Self {
        let r = Self {
            perm: ROTATION.0,
            negate: ROTATION.1,
            flavor,
        };
        (0..k.rem_euclid(6)).fold(Self::identity(flavor), |acc, _| acc.then_unchecked(&r))
    }

    /// The mirror over the vertical axis. Only exists in D6.
    pub fn mirror() -> Self {
        Self {
            perm: MIRROR.0,
            negate: MIRROR.1,
            flavor: Flavor::D6,
        }
    }

    /// The element at `index` in the canonical enumeration.
    pub fn canonical(flavor: Flavor, index: usize) -> Result<Self> {
        if index >= flavor.order() {
            return Err(Error::arg(format!(
                "index {index} out of range for {flavor:?} (order {})",
                flavor.order()
            )));
        }
        let rot = Self::rotation(flavor, (index % 6) as i32);
        Ok(if index < 6 {
            rot
        } else {
            Self::mirror().then_unchecked(&rot)
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Position in the canonical enumeration of this element's flavor.
    pub fn index(&self) -> usize {
        let mirrored = self.is_reflection();
        // Strip the mirror, then count rotations.
        let rot = if mirrored {
            Self::mirror().then_unchecked(self)
        } else {
            *self
        };
        let r = Self::rotation(self.flavor, 1);
        let mut acc = Self::identity(self.flavor);
        let mut k = 0;
        while acc.perm != rot.perm || acc.negate != rot.negate {
            acc = acc.then_unchecked(&r);
            k += 1;
            debug_assert!(k < 6);
        }
        if mirrored {
            6 + k
        } else {
            k
        }
    }

    /// Reflections are exactly the odd permutations.
    pub fn is_reflection(&self) -> bool {
        let [a, b, c] = self.perm;
        let inversions = (a > b) as u8 + (a > c) as u8 + (b > c) as u8;
        inversions % 2 == 1
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch {
                left: self.flavor,
                right: other.flavor,
            });
        }
        Ok(self.then_unchecked(other))
    }

    fn then_unchecked(&self, other: &Self) -> Self {
        let perm = [
            other.perm[self.perm[0] as usize],
            other.perm[self.perm[1] as usize],
            other.perm[self.perm[2] as usize],
        ];
        Self {
            perm,
            negate: self.negate ^ other.negate,
            flavor: if self.flavor == Flavor::D6 || other.flavor == Flavor::D6 {
                Flavor::D6
            } else {
                Flavor::C6
            },
        }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = [0u8; 3];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = i as u8;
        }
        Self {
            perm,
            negate: self.negate,
            flavor: self.flavor,
        }
    }

    pub fn apply_cube(&self, p: CubePoint) -> CubePoint {
        let c = p.coords();
        let s = if self.negate { -1 } else { 1 };
        CubePoint::from_coords_unchecked([
            s * c[self.perm[0] as usize],
            s * c[self.perm[1] as usize],
            s * c[self.perm[2] as usize],
        ])
    }

    pub fn apply(&self, p: AxialPoint) -> AxialPoint {
        self.apply_cube(p.to_cube()).to_axial()
    }

    /// Same element viewed as a member of D6.
    pub fn widen(&self) -> Self {
        Self {
            flavor: Flavor::D6,
            ..*self
        }
    }
}

impl fmt::Display for PointGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.index();
        if i < 6 {
            write!(f, "r{i}")
        } else {
            write!(f, "m·r{}", i - 6)
        }
    }
}

/// All elements of a point group, in canonical order.
pub fn enumerate_point_group(flavor: Flavor) -> Vec<PointGroupElement> {
    (0..flavor.order())
        .map(|i| PointGroupElement::canonical(flavor, i).expect("index in range"))
        .collect()
}

/// Cayley table of a point group over canonical indices.
#[derive(Debug, Clone)]
pub struct PointGroup {
    flavor: Flavor,
    elements: Vec<PointGroupElement>,
    product: Vec<usize>,
    inverse: Vec<usize>,
}

impl PointGroup {
    pub fn new(flavor: Flavor) -> Self {
        let elements = enumerate_point_group(flavor);
        let n = elements.len();
        let mut product = vec![0; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                product[i * n + j] = a.then_unchecked(b).index();
            }
        }
        let inverse = elements.iter().map(|e| e.inverse().index()).collect();
        Self {
            flavor,
            elements,
            product,
            inverse,
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[PointGroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> PointGroupElement {
        self.elements[i]
    }

    /// Index of `elements[a] ∘ elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// An element of p6 or p6m: `p -> t + h·p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub h: PointGroupElement,
    pub t: AxialPoint,
}

impl GroupElement {
    pub fn new(h: PointGroupElement, t: AxialPoint) -> Self {
        Self { h, t }
    }

    pub fn identity(flavor: Flavor) -> Self {
        Self::new(PointGroupElement::identity(flavor), AxialPoint::ORIGIN)
    }

    pub fn translation(flavor: Flavor, t: AxialPoint) -> Self {
        Self::new(PointGroupElement::identity(flavor), t)
    }

    pub fn point(h: PointGroupElement) -> Self {
        Self::new(h, AxialPoint::ORIGIN)
    }

    pub fn flavor(&self) -> Flavor {
        self.h.flavor()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            h: self.h.compose(&other.h)?,
            t: self.t + self.h.apply(other.t),
        })
    }

    pub fn inverse(&self) -> Self {
        let h_inv = self.h.inverse();
        Self {
            h: h_inv,
            t: -h_inv.apply(self.t),
        }
    }

    pub fn act(&self, p: AxialPoint) -> AxialPoint {
        self.t + self.h.apply(p)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.h, self.t)
    }
}

pub fn compose(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    a.compose(b)
}

pub fn inverse(g: &GroupElement) -> GroupElement {
    g.inverse()
}

pub fn act_on_point(g: &GroupElement, p: AxialPoint) -> AxialPoint {
    g.act(p)
}
