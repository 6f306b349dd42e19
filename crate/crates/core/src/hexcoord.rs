//! Integer coordinate systems for the hexagonal lattice.
//!
//! Axial is the storage system: a site is `u·e1 + v·e2` with the basis
//! vectors 60 degrees apart. Cube coordinates embed the same lattice in the
//! plane `x + y + z = 0`, where rotations by 60 degrees and mirrors become
//! signed permutations. Offset and double-width are row/column layouts used
//! as transient buffers by the convolution backends.
//!
//! Conversions:
//!
//! | from  | to          | formula                                   |
//! |-------|-------------|-------------------------------------------|
//! | axial | cube        | `x = v, y = -(u + v), z = u`              |
//! | axial | offset      | `row = v, col = u + floor(v / 2)`         |
//! | axial | double-wide | `row = v, col = 2u + v`                   |
//!
//! The Cartesian embedding uses `e1 = (1, 0)` and `e2 = (1/2, -sqrt(3)/2)`,
//! under which [`CubePoint::rotate60`] is a counter-clockwise rotation.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// A lattice site in axial coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AxialPoint {
    /// Steps along `e1`.
    pub u: i32,
    /// Steps along `e2`.
    pub v: i32,
}

/// A lattice site in cube coordinates. Always satisfies `x + y + z = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubePoint {
    x: i32,
    y: i32,
    z: i32,
}

/// A lattice site in offset coordinates. Odd rows are shifted half a site
/// to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OffsetPoint {
    pub row: i32,
    pub col: i32,
}

/// A lattice site in double-width coordinates; `col - row` is always even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DoubleWidthPoint {
    row: i32,
    col: i32,
}

/// Planar position of a lattice site, in units of the lattice spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianPoint {
    pub px: f64,
    pub py: f64,
}

impl AxialPoint {
    pub const ORIGIN: AxialPoint = AxialPoint { u: 0, v: 0 };

    pub const fn new(u: i32, v: i32) -> Self {
        Self { u, v }
    }

    pub fn to_cube(self) -> CubePoint {
        CubePoint {
            x: self.v,
            y: -(self.u + self.v),
            z: self.u,
        }
    }

    /// Counter-clockwise rotation by 60 degrees about the origin.
    ///
    /// Closed form of the cube rotation: `(u, v) -> (u + v, -u)`.
    pub fn rotate60(self) -> Self {
        Self::new(self.u + self.v, -self.u)
    }

    /// Mirror over the vertical axis through the origin: `(u, v) -> (-(u + v), v)`.
    pub fn mirror(self) -> Self {
        Self::new(-(self.u + self.v), self.v)
    }

    pub fn to_offset(self) -> OffsetPoint {
        OffsetPoint {
            row: self.v,
            col: self.u + self.v.div_euclid(2),
        }
    }

    pub fn to_double_width(self) -> DoubleWidthPoint {
        DoubleWidthPoint {
            row: self.v,
            col: 2 * self.u + self.v,
        }
    }

    pub fn embed(self) -> CartesianPoint {
        CartesianPoint {
            px: f64::from(self.u) + 0.5 * f64::from(self.v),
            py: -SQRT3_2 * f64::from(self.v),
        }
    }

    /// Number of unit steps between two sites.
    pub fn distance(self, other: AxialPoint) -> i32 {
        let d = (self - other).to_cube();
        (d.x.abs() + d.y.abs() + d.z.abs()) / 2
    }

    /// Distance to the origin.
    pub fn norm(self) -> i32 {
        self.distance(Self::ORIGIN)
    }
}

impl Add for AxialPoint {
    type Output = AxialPoint;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.u + rhs.u, self.v + rhs.v)
    }
}

impl Sub for AxialPoint {
    type Output = AxialPoint;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.u - rhs.u, self.v - rhs.v)
    }
}

impl Neg for AxialPoint {
    type Output = AxialPoint;
    fn neg(self) -> Self {
        Self::new(-self.u, -self.v)
    }
}

impl fmt::Display for AxialPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl CubePoint {
    pub fn new(x: i32, y: i32, z: i32) -> Result<Self> {
        if x + y + z != 0 {
            return Err(Error::InvalidCube { x, y, z });
        }
        Ok(Self { x, y, z })
    }

    pub fn x(self) -> i32 {
        self.x
    }

    pub fn y(self) -> i32 {
        self.y
    }

    pub fn z(self) -> i32 {
        self.z
    }

    pub fn coords(self) -> [i32; 3] {
        [self.x, self.y, self.z]
    }

    /// Builds a point from a triple already known to lie in the plane.
    pub(crate) fn from_coords_unchecked(c: [i32; 3]) -> Self {
        debug_assert_eq!(c[0] + c[1] + c[2], 0);
        Self {
            x: c[0],
            y: c[1],
            z: c[2],
        }
    }

    pub fn to_axial(self) -> AxialPoint {
        AxialPoint::new(self.z, self.x)
    }

    /// `(x, y, z) -> (-z, -x, -y)`
    pub fn rotate60(self) -> Self {
        Self {
            x: -self.z,
            y: -self.x,
            z: -self.y,
        }
    }

    /// `(x, y, z) -> (x, z, y)`
    pub fn mirror(self) -> Self {
        Self {
            x: self.x,
            y: self.z,
            z: self.y,
        }
    }
}

impl From<AxialPoint> for CubePoint {
    fn from(p: AxialPoint) -> Self {
        p.to_cube()
    }
}

impl From<CubePoint> for AxialPoint {
    fn from(p: CubePoint) -> Self {
        p.to_axial()
    }
}

impl OffsetPoint {
    pub const fn new(row: i32, col: i32) -> Self {
        Self { row, col }
    }

    pub fn to_axial(self) -> AxialPoint {
        AxialPoint::new(self.col - self.row.div_euclid(2), self.row)
    }
}

impl DoubleWidthPoint {
    pub fn new(row: i32, col: i32) -> Result<Self> {
        if (col - row).rem_euclid(2) != 0 {
            return Err(Error::InvalidDoubleWidth { row, col });
        }
        Ok(Self { row, col })
    }

    pub fn row(self) -> i32 {
        self.row
    }

    pub fn col(self) -> i32 {
        self.col
    }

    pub fn to_axial(self) -> AxialPoint {
        AxialPoint::new((self.col - self.row) / 2, self.row)
    }
}

impl CartesianPoint {
    /// Counter-clockwise rotation by 60 degrees about the origin.
    pub fn rotate60(self) -> Self {
        let (c, s) = (0.5, SQRT3_2);
        Self {
            px: c * self.px - s * self.py,
            py: s * self.px + c * self.py,
        }
    }

    pub fn dist(self, other: CartesianPoint) -> f64 {
        (self.px - other.px).hypot(self.py - other.py)
    }
}

pub fn axial_to_cube(p: AxialPoint) -> CubePoint {
    p.to_cube()
}

pub fn cube_to_axial(p: CubePoint) -> AxialPoint {
    p.to_axial()
}

pub fn cube_rotate60(p: CubePoint) -> CubePoint {
    p.rotate60()
}

pub fn cube_mirror(p: CubePoint) -> CubePoint {
    p.mirror()
}

pub fn axial_rotate60(p: AxialPoint) -> AxialPoint {
    p.rotate60()
}

pub fn axial_to_offset(p: AxialPoint) -> OffsetPoint {
    p.to_offset()
}

pub fn offset_to_axial(p: OffsetPoint) -> AxialPoint {
    p.to_axial()
}

pub fn axial_to_doublewidth(p: AxialPoint) -> DoubleWidthPoint {
    p.to_double_width()
}

pub fn doublewidth_to_axial(p: DoubleWidthPoint) -> AxialPoint {
    p.to_axial()
}

pub fn embed(p: AxialPoint) -> CartesianPoint {
    p.embed()
}

pub fn hex_distance(a: AxialPoint, b: AxialPoint) -> i32 {
    a.distance(b)
}
