//! HEXT tensor files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "HEXT"            4 bytes magic
//! 0x01              u8 version
//! rank              u8
//! dims[rank]        u32 each
//! flag              u8, 0x01 when a mask plane follows the data
//! data              f32 each, product(dims) values, row-major
//! mask              u8 (0/1) each, dims[rank-2] * dims[rank-1] values, if flag
//! ```
//!
//! Feature maps are written as rank 4 (`channels, orientations, rows, cols`)
//! with a mask. Filter banks are rank 4 (`out, in, size, size`) without one.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::{HexFilter, HexImage};

pub const MAGIC: &[u8; 4] = b"HEXT";
pub const VERSION: u8 = 0x01;

#[derive(Debug, Clone, PartialEq)]
pub struct HextTensor {
    pub dims: Vec<usize>,
    pub data: Vec<f32>,
    pub mask: Option<Vec<bool>>,
}

impl HextTensor {
    pub fn encode(&self) -> Result<Vec<u8>> {
        let rank = u8::try_from(self.dims.len())
            .map_err(|_| Error::shape(format!("rank {} too large", self.dims.len())))?;
        let count: usize = self.dims.iter().product();
        if count != self.data.len() {
            return Err(Error::shape(format!(
                "dims {:?} hold {count} values, data has {}",
                self.dims,
                self.data.len()
            )));
        }
        let mut out = Vec::with_capacity(11 + 4 * self.dims.len() + 4 * count);
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(rank);
        for &d in &self.dims {
            let d =
                u32::try_from(d).map_err(|_| Error::shape(format!("dimension {d} exceeds u32")))?;
            out.extend_from_slice(&d.to_le_bytes());
        }
        out.push(u8::from(self.mask.is_some()));
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        if let Some(mask) = &self.mask {
            if self.dims.len() < 2 || mask.len() != self.plane_len() {
                return Err(Error::shape(format!(
                    "mask of {} cells does not match dims {:?}",
                    mask.len(),
                    self.dims
                )));
            }
            out.extend(mask.iter().map(|&m| u8::from(m)));
        }
        Ok(out)
    }

    fn plane_len(&self) -> usize {
        let r = self.dims.len();
        self.dims[r - 2] * self.dims[r - 1]
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0;
        let mut take = |n: usize, what: &str| -> Result<(usize, &[u8])> {
            if bytes.len() < pos + n {
                return Err(Error::parse(
                    bytes.len(),
                    format!("truncated {what}: need {n} bytes at offset {pos}"),
                ));
            }
            let at = pos;
            pos += n;
            Ok((at, &bytes[at..at + n]))
        };
        let (_, magic) = take(4, "magic")?;
        if magic != MAGIC {
            return Err(Error::parse(0, "bad magic, expected HEXT"));
        }
        let (at, version) = take(1, "version")?;
        if version[0] != VERSION {
            return Err(Error::parse(
                at,
                format!("unsupported version {}", version[0]),
            ));
        }
        let (_, rank) = take(1, "rank")?;
        let rank = rank[0] as usize;
        let mut dims = Vec::with_capacity(rank);
        for _ in 0..rank {
            let (_, d) = take(4, "dimension")?;
            dims.push(u32::from_le_bytes(d.try_into().unwrap()) as usize);
        }
        let (flag_at, flag) = take(1, "mask flag")?;
        let has_mask = match flag[0] {
            0 => false,
            1 => true,
            f => {
                return Err(Error::parse(
                    flag_at,
                    format!("mask flag must be 0 or 1, got {f}"),
                ))
            }
        };
        let count = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::parse(6, "dimensions overflow"))?;
        let (_, raw) = take(
            count
                .checked_mul(4)
                .ok_or_else(|| Error::parse(6, "dimensions overflow"))?,
            "data",
        )?;
        let data = raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let mask = if has_mask {
            if rank < 2 {
                return Err(Error::parse(flag_at, "mask requires rank >= 2"));
            }
            let n = dims[rank - 2] * dims[rank - 1];
            let (at, raw) = take(n, "mask")?;
            let mut mask = Vec::with_capacity(n);
            for (i, &b) in raw.iter().enumerate() {
                match b {
                    0 => mask.push(false),
                    1 => mask.push(true),
                    _ => {
                        return Err(Error::parse(
                            at + i,
                            format!("mask byte must be 0 or 1, got {b}"),
                        ))
                    }
                }
            }
            Some(mask)
        } else {
            None
        };
        if pos != bytes.len() {
            return Err(Error::parse(
                pos,
                format!("{} trailing bytes", bytes.len() - pos),
            ));
        }
        Ok(Self { dims, data, mask })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::decode(&bytes)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.encode()?).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })
    }
}

impl HexImage {
    pub fn to_hext(&self) -> HextTensor {
        HextTensor {
            dims: vec![
                self.channels(),
                self.orientations(),
                self.rows(),
                self.cols(),
            ],
            data: self.data().to_vec(),
            mask: Some(self.mask().to_vec()),
        }
    }

    /// Accepts rank 2 (`rows, cols`), 3 (`channels, rows, cols`) or 4. A
    /// missing mask means every cell is valid. The result is masked.
    pub fn from_hext(t: HextTensor) -> Result<Self> {
        let (c, o, r, w) = match *t.dims.as_slice() {
            [r, w] => (1, 1, r, w),
            [c, r, w] => (c, 1, r, w),
            [c, o, r, w] => (c, o, r, w),
            _ => {
                return Err(Error::shape(format!(
                    "feature map needs rank 2, 3 or 4, got dims {:?}",
                    t.dims
                )))
            }
        };
        let mask = t.mask.unwrap_or_else(|| vec![true; r * w]);
        Ok(HexImage::from_raw(c, o, r, w, t.data, mask)?.apply_mask())
    }

    pub fn write_hext(&self, path: impl AsRef<Path>) -> Result<()> {
        self.to_hext().write(path)
    }

    pub fn read_hext(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_hext(HextTensor::read(path)?)
    }
}

impl HexFilter {
    pub fn to_hext(&self) -> HextTensor {
        HextTensor {
            dims: self.shape().to_vec(),
            data: self.data().to_vec(),
            mask: None,
        }
    }

    /// Loads a bank and zeroes its padding corners. Rank 2 (`S, S`) and 3
    /// (`in, S, S`) are read as a single output channel.
    pub fn from_hext(t: HextTensor) -> Result<Self> {
        let (c, k, s) = match *t.dims.as_slice() {
            [a, b] if a == b => (1, 1, a),
            [k, a, b] if a == b => (1, k, a),
            [c, k, a, b] if a == b => (c, k, a),
            _ => {
                return Err(Error::shape(format!(
                    "filter bank needs square spatial dims of rank 2-4, got {:?}",
                    t.dims
                )))
            }
        };
        Ok(HexFilter::from_raw(c, k, s, t.data)?.apply_mask())
    }

    pub fn write_hext(&self, path: impl AsRef<Path>) -> Result<()> {
        self.to_hext().write(path)
    }

    pub fn read_hext(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_hext(HextTensor::read(path)?)
    }
}
