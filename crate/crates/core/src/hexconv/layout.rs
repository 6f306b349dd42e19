//! Transient double-width and offset layouts of axial buffers.

use crate::hexgrid::HexImage;

use super::rect::{Kernel, Planes};

/// Axial cell `(r, c)` lives at `(r, 2c + r)`; the other half of the
/// checkerboard is always zero.
#[derive(Debug, Clone, Copy)]
pub struct DoubleWidthLayout {
    rows: usize,
    cols: usize,
}

impl DoubleWidthLayout {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols }
    }

    pub fn width(&self) -> usize {
        2 * self.cols + self.rows - 1
    }

    pub fn encode(&self, p: &Planes) -> Planes {
        let w = self.width();
        let mut out = Planes::zeros(p.count, self.rows, w);
        for i in 0..p.count {
            for r in 0..self.rows {
                for c in 0..self.cols {
                    out.data[(i * self.rows + r) * w + 2 * c + r] = p.get(i, r, c);
                }
            }
        }
        out
    }

    pub fn decode(&self, p: &Planes) -> Planes {
        let mut out = Planes::zeros(p.count, self.rows, self.cols);
        for i in 0..p.count {
            for r in 0..self.rows {
                for c in 0..self.cols {
                    out.data[(i * self.rows + r) * self.cols + c] = p.get(i, r, 2 * c + r);
                }
            }
        }
        out
    }

    /// True when every off-lattice cell of `p` is zero.
    pub fn holes_are_zero(p: &Planes) -> bool {
        (0..p.count).all(|i| {
            (0..p.rows).all(|r| (0..p.cols).all(|x| (x + r) % 2 == 0 || p.get(i, r, x) == 0.0))
        })
    }

    /// Offset `(du, dv)` moves to `(dv, 2du + dv)`.
    pub fn encode_kernel(k: &Kernel) -> Kernel {
        let (ch, cw) = (k.height / 2, k.width / 2);
        let half = 2 * cw + ch;
        let mut out = Kernel::zeros(k.out_channels, k.in_channels, k.height, 2 * half + 1);
        for c in 0..k.out_channels {
            for i in 0..k.in_channels {
                for a in 0..k.height {
                    for b in 0..k.width {
                        out.set(c, i, a, 2 * b + a, k.get(c, i, a, b));
                    }
                }
            }
        }
        out
    }
}

/// Each buffer row is shifted so that axial `(u, v)` lands on column
/// `u + floor(v / 2)` (up to a global offset).
#[derive(Debug, Clone)]
pub struct OffsetLayout {
    cols: usize,
    width: usize,
    shifts: Vec<usize>,
    odd_rows: Vec<bool>,
}

impl OffsetLayout {
    pub fn for_image(f: &HexImage) -> Self {
        let starts: Vec<i32> = (0..f.rows())
            .map(|r| {
                let p = f.site(r, 0);
                p.u + p.v.div_euclid(2)
            })
            .collect();
        let lo = *starts.iter().min().expect("image has rows");
        let hi = *starts.iter().max().expect("image has rows");
        Self {
            cols: f.cols(),
            width: f.cols() + (hi - lo) as usize,
            shifts: starts.iter().map(|s| (s - lo) as usize).collect(),
            odd_rows: (0..f.rows())
                .map(|r| f.site(r, 0).v.rem_euclid(2) == 1)
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.shifts.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_odd_row(&self, r: usize) -> bool {
        self.odd_rows[r]
    }

    /// Rows of one parity are every other row starting here.
    pub fn first_row_with_parity(&self, odd: bool) -> Option<usize> {
        self.odd_rows.iter().position(|&o| o == odd)
    }

    pub fn encode(&self, p: &Planes) -> Planes {
        let mut out = Planes::zeros(p.count, self.rows(), self.width);
        for i in 0..p.count {
            for (r, &s) in self.shifts.iter().enumerate() {
                let dst = (i * self.rows() + r) * self.width + s;
                let src = (i * p.rows + r) * p.cols;
                out.data[dst..dst + self.cols].copy_from_slice(&p.data[src..src + self.cols]);
            }
        }
        out
    }

    pub fn decode(&self, p: &Planes) -> Planes {
        let mut out = Planes::zeros(p.count, self.rows(), self.cols);
        for i in 0..p.count {
            for (r, &s) in self.shifts.iter().enumerate() {
                let src = (i * p.rows + r) * p.cols + s;
                let dst = (i * self.rows() + r) * self.cols;
                out.data[dst..dst + self.cols].copy_from_slice(&p.data[src..src + self.cols]);
            }
        }
        out
    }

    /// Filter as seen from an even (or odd) row: offset `(du, dv)` moves to
    /// `(dv, du + floor(dv / 2))`, or `(dv, du + floor((dv + 1) / 2))` on
    /// odd rows.
    pub fn encode_kernel(k: &Kernel, odd: bool) -> Kernel {
        let (ch, cw) = ((k.height / 2) as i32, (k.width / 2) as i32);
        let half = cw + (ch + 1) / 2;
        let mut out = Kernel::zeros(
            k.out_channels,
            k.in_channels,
            k.height,
            (2 * half + 1) as usize,
        );
        for c in 0..k.out_channels {
            for i in 0..k.in_channels {
                for a in 0..k.height {
                    let dv = a as i32 - ch;
                    let row_shift = (dv + i32::from(odd)).div_euclid(2);
                    for b in 0..k.width {
                        let du = b as i32 - cw;
                        out.set(c, i, a, (du + row_shift + half) as usize, k.get(c, i, a, b));
                    }
                }
            }
        }
        out
    }
}
