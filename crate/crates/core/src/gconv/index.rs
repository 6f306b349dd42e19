use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hexgrid::HexFilter;
use crate::hexgroup::{Group, PointGroup, PointGroupElement};

/// Which G-convolution the index array serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    /// Planar input, `H_in = {e}`.
    First,
    /// Input on the group, `H_in = H`.
    Full,
}

impl Layer {
    pub fn name(self) -> &'static str {
        match self {
            Layer::First => "first",
            Layer::Full => "full",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Layer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Layer::First),
            "full" => Ok(Layer::Full),
            _ => Err(Error::arg(format!(
                "unknown layer {s:?}, expected first or full"
            ))),
        }
    }
}

/// Where a transformed filter cell reads from in the original bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Source {
    pub orientation: u16,
    pub row: u16,
    pub col: u16,
}

/// Precomputed gather table implementing `[L_h ψ](i) = ψ(h⁻¹ · i)` for every
/// `h` in `H_out`.
///
/// Shape `|H_out| x |H_in| x S x S`; entry `[j][s][a][b]` names the source
/// cell for target orientation `s`, cell `(a, b)` under the `j`-th
/// canonical element. Padding targets have no source and gather zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexArray {
    group: Group,
    layer: Layer,
    size: usize,
    h_in: usize,
    table: Vec<Option<Source>>,
}

impl IndexArray {
    pub fn group(&self) -> Group {
        self.group
    }

    pub fn layer(&self) -> Layer {
        self.layer
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        (self.size - 1) / 2
    }

    pub fn h_out(&self) -> usize {
        self.group.order()
    }

    pub fn h_in(&self) -> usize {
        self.h_in
    }

    /// `[|H_out|, |H_in|, S, S]`
    pub fn shape(&self) -> [usize; 4] {
        [self.h_out(), self.h_in, self.size, self.size]
    }

    fn slice_len(&self) -> usize {
        self.h_in * self.size * self.size
    }

    pub fn get(&self, j: usize, s: usize, a: usize, b: usize) -> Option<Source> {
        self.table[((j * self.h_in + s) * self.size + a) * self.size + b]
    }

    /// Entries for element `j`, flattened over `(s, a, b)`.
    pub fn slice(&self, j: usize) -> &[Option<Source>] {
        let n = self.slice_len();
        &self.table[j * n..(j + 1) * n]
    }

    /// Flat position of a source within a slice.
    pub fn flat(&self, src: Source) -> usize {
        (src.orientation as usize * self.size + src.row as usize) * self.size + src.col as usize
    }
}

/// Builds the gather table for `group` and `layer` over an `size x size`
/// filter holding a disk of radius `(size - 1) / 2`.
pub fn build_index_array(group: Group, layer: Layer, size: usize) -> Result<IndexArray> {
    if size.is_multiple_of(2) {
        return Err(Error::arg(format!("filter size must be odd, got {size}")));
    }
    let pg = PointGroup::new(group.flavor());
    let h_in = match layer {
        Layer::First => 1,
        Layer::Full => pg.order(),
    };
    // geometry only; used for offset <-> cell conversion
    let probe = HexFilter::zeros(1, 1, (size - 1) / 2);
    let mut table = Vec::with_capacity(pg.order() * h_in * size * size);
    for j in 0..pg.order() {
        let h_inv = pg.element(pg.inv(j));
        for s in 0..h_in {
            let src_orientation = match layer {
                Layer::First => 0,
                Layer::Full => pg.mul(pg.inv(j), s),
            };
            for a in 0..size {
                for b in 0..size {
                    let d = probe.offset(a, b);
                    let entry = probe
                        .cell(h_inv.apply(d))
                        .filter(|_| probe.in_support(a, b))
                        .map(|(row, col)| Source {
                            orientation: src_orientation as u16,
                            row: row as u16,
                            col: col as u16,
                        });
                    table.push(entry);
                }
            }
        }
    }
    Ok(IndexArray {
        group,
        layer,
        size,
        h_in,
        table,
    })
}

/// Gathers `Ψ[I]`: output filter `c·|H_out| + j` is filter `c` rearranged by
/// slice `j`, for every input channel block `k·|H_in| .. (k+1)·|H_in|`.
pub fn transform_filters(psi: &HexFilter, index: &IndexArray) -> Result<HexFilter> {
    if psi.size() != index.size() {
        return Err(Error::shape(format!(
            "filter size {} does not match index array size {}",
            psi.size(),
            index.size()
        )));
    }
    if !psi.in_channels().is_multiple_of(index.h_in()) {
        return Err(Error::shape(format!(
            "filter has {} input channels, not a multiple of |H_in| = {}",
            psi.in_channels(),
            index.h_in()
        )));
    }
    psi.check_masked()?;
    let k_count = psi.in_channels() / index.h_in();
    let (h_out, h_in, n) = (index.h_out(), index.h_in(), psi.size() * psi.size());
    let mut out = HexFilter::from_raw(
        psi.out_channels() * h_out,
        psi.in_channels(),
        psi.size(),
        vec![0.0; psi.out_channels() * h_out * psi.in_channels() * n],
    )?
    .with_radius(psi.radius())?;
    let src = psi.data();
    let dst = out.data_mut();
    for c in 0..psi.out_channels() {
        for j in 0..h_out {
            let slice = index.slice(j);
            for k in 0..k_count {
                // source block: filter c, input channels k·|H_in| ..
                let src_block = (c * psi.in_channels() + k * h_in) * n;
                let dst_block = ((c * h_out + j) * psi.in_channels() + k * h_in) * n;
                for (t, entry) in slice.iter().enumerate() {
                    if let Some(s) = entry {
                        dst[dst_block + t] = src[src_block + index.flat(*s)];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Planar `L_h ψ` on every slice of a bank: `out(d) = ψ(h⁻¹ · d)`.
pub fn rotate_filter(psi: &HexFilter, h: &PointGroupElement) -> HexFilter {
    let h_inv = h.inverse();
    let mut out = psi.clone();
    let s = psi.size();
    for c in 0..psi.out_channels() {
        for k in 0..psi.in_channels() {
            for a in 0..s {
                for b in 0..s {
                    let v = if psi.in_support(a, b) {
                        psi.at(c, k, h_inv.apply(psi.offset(a, b)))
                    } else {
                        0.0
                    };
                    out.set(c, k, a, b, v);
                }
            }
        }
    }
    out
}
