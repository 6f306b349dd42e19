//! Netpbm greymap reading (P2, P5) and writing (P5).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::HexImage;

/// A single-channel square-pixel image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f32>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::shape(format!(
                "{} pixels for a {width}x{height} image",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f32) -> Self {
        let data = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self {
            width,
            height,
            data,
        }
    }

    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    /// Next decimal token and its byte offset.
    fn number(&mut self, what: &str) -> Result<(usize, u32)> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map(|v| (start, v))
            .ok_or_else(|| Error::parse(start, format!("{what} out of range")))
    }
}

/// Parses a P2 or P5 greymap. Sample values are returned unscaled.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || bytes[0] != b'P' || !matches!(bytes[1], b'2' | b'5') {
        return Err(Error::parse(0, "expected magic P2 or P5"));
    }
    let binary = bytes[1] == b'5';
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number("width")?.1 as usize;
    let height = cur.number("height")?.1 as usize;
    let (maxval_pos, maxval) = cur.number("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::parse(
            maxval_pos,
            format!("maxval {maxval} not in 1..=65535"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(Error::parse(maxval_pos, "zero image dimension"));
    }
    let n = width * height;
    let mut data = Vec::with_capacity(n);
    if binary {
        // exactly one whitespace byte after maxval
        if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
            return Err(Error::parse(cur.pos, "expected whitespace before raster"));
        }
        let start = cur.pos + 1;
        let bps = if maxval < 256 { 1 } else { 2 };
        let need = n * bps;
        if bytes.len() < start + need {
            return Err(Error::parse(
                bytes.len(),
                format!(
                    "raster truncated: need {need} bytes, have {}",
                    bytes.len() - start
                ),
            ));
        }
        let raster = &bytes[start..start + need];
        if bps == 1 {
            data.extend(raster.iter().map(|&b| f32::from(b)));
        } else {
            data.extend(
                raster
                    .chunks_exact(2)
                    .map(|c| f32::from(u16::from_be_bytes([c[0], c[1]]))),
            );
        }
    } else {
        for _ in 0..n {
            let (pos, v) = cur.number("sample")?;
            if v > maxval {
                return Err(Error::parse(
                    pos,
                    format!("sample {v} exceeds maxval {maxval}"),
                ));
            }
            data.push(v as f32);
        }
    }
    Ok(GrayImage {
        width,
        height,
        data,
    })
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_pgm(&bytes)
}

/// Encodes 8-bit samples as a binary P5 greymap.
pub fn encode_p5(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

/// Min-max normalised bytes of one plane of `f`. Padding cells are 0, and
/// so is everything when the valid cells span an empty range.
pub fn plane_to_bytes(f: &HexImage, channel: usize, orientation: usize) -> Result<Vec<u8>> {
    if channel >= f.channels() || orientation >= f.orientations() {
        return Err(Error::arg(format!(
            "plane ({channel}, {orientation}) out of range: channels 0..{}, orientations 0..{}",
            f.channels(),
            f.orientations()
        )));
    }
    let plane = f.plane(channel, orientation);
    let (lo, hi) = plane
        .iter()
        .zip(f.mask())
        .filter(|(_, &m)| m)
        .fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), (&v, _)| {
            (lo.min(v), hi.max(v))
        });
    let range = f64::from(hi) - f64::from(lo);
    Ok(plane
        .iter()
        .zip(f.mask())
        .map(|(&v, &m)| {
            if !m || range.is_nan() || range <= 0.0 {
                0
            } else {
                (255.0 * (f64::from(v) - f64::from(lo)) / range).round() as u8
            }
        })
        .collect())
}

/// Writes one plane of `f` as an 8-bit P5 image of the raw axial buffer.
pub fn render_pgm(
    f: &HexImage,
    channel: usize,
    orientation: usize,
    path: impl AsRef<Path>,
) -> Result<()> {
    let pixels = plane_to_bytes(f, channel, orientation)?;
    let path = path.as_ref();
    fs::write(path, encode_p5(f.cols(), f.rows(), &pixels)).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}
