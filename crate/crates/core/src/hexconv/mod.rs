//! Planar hexagonal correlation.
//!
//! All backends compute `out_c(p) = Σ_k Σ_q f_k(q) · ψ_(c,k)(q - p)` over
//! hexagonal sites with zero extension, then mask the output. They differ
//! only in the memory layout handed to [`rect_correlate`]:
//!
//! - axial: the image and filter buffers are used as-is;
//! - double-width: both are spread onto a checkerboard twice as wide;
//! - offset: the filter shape depends on row parity, so even and odd rows
//!   are computed by two row-strided passes and interleaved.
//!
//! [`hexconv_oracle`] evaluates the sum site by site and is the reference
//! the backends are tested against.

mod layout;
mod rect;

use std::fmt;
use std::str::FromStr;

pub use layout::{DoubleWidthLayout, OffsetLayout};
pub use rect::{rect_correlate, rect_correlate_rows, Kernel, Planes};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hexgrid::{HexFilter, HexImage};
use crate::hexgroup::{Flavor, GroupElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    #[default]
    Axial,
    DoubleWidth,
    Offset,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Axial, Backend::DoubleWidth, Backend::Offset];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Axial => "axial",
            Backend::DoubleWidth => "double-width",
            Backend::Offset => "offset",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "axial" => Ok(Backend::Axial),
            "double-width" | "double_width" | "doublewidth" => Ok(Backend::DoubleWidth),
            "offset" => Ok(Backend::Offset),
            _ => Err(Error::arg(format!(
                "unknown backend {s:?}, expected axial, double-width or offset"
            ))),
        }
    }
}

/// Convolution settings: backend plus execution mode. Padding is always
/// "same" with zero extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConvSpec {
    pub backend: Backend,
    pub exec: Execution,
}

impl ConvSpec {
    pub fn new(backend: Backend) -> Self {
        Self {
            backend,
            exec: Execution::default(),
        }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }
}

fn check_inputs(f: &HexImage, psi: &HexFilter) -> Result<()> {
    if psi.in_channels() != f.planes() {
        return Err(Error::shape(format!(
            "filter expects {} input planes, image has {} ({} channels x {} orientations)",
            psi.in_channels(),
            f.planes(),
            f.channels(),
            f.orientations()
        )));
    }
    psi.check_masked()?;
    if !f.is_masked() {
        return Err(Error::MaskViolation(
            "input image holds non-zero values in padding cells".into(),
        ));
    }
    Ok(())
}

fn image_planes(f: &HexImage) -> Planes {
    Planes {
        count: f.planes(),
        rows: f.rows(),
        cols: f.cols(),
        data: f.data().to_vec(),
    }
}

fn filter_kernel(psi: &HexFilter) -> Kernel {
    Kernel {
        out_channels: psi.out_channels(),
        in_channels: psi.in_channels(),
        height: psi.size(),
        width: psi.size(),
        data: psi.data().to_vec(),
    }
}

fn finish(f: &HexImage, out_channels: usize, data: Vec<f32>) -> Result<HexImage> {
    let mut out = f.zeros_like(out_channels, 1);
    out.data_mut().copy_from_slice(&data);
    Ok(out.apply_mask())
}

/// Planar hexagonal correlation with the chosen backend. The filter's input
/// channels run over all `channels x orientations` planes of `f`; the
/// result is planar with `psi.out_channels()` channels.
pub fn hexconv(f: &HexImage, psi: &HexFilter, spec: ConvSpec) -> Result<HexImage> {
    check_inputs(f, psi)?;
    let data = match spec.backend {
        Backend::Axial => axial(f, psi, spec.exec)?,
        Backend::DoubleWidth => double_width(f, psi, spec.exec)?,
        Backend::Offset => offset(f, psi, spec.exec)?,
    };
    finish(f, psi.out_channels(), data)
}

pub fn hexconv_axial(f: &HexImage, psi: &HexFilter) -> Result<HexImage> {
    hexconv(f, psi, ConvSpec::new(Backend::Axial))
}

pub fn hexconv_double_width(f: &HexImage, psi: &HexFilter) -> Result<HexImage> {
    hexconv(f, psi, ConvSpec::new(Backend::DoubleWidth))
}

pub fn hexconv_offset(f: &HexImage, psi: &HexFilter) -> Result<HexImage> {
    hexconv(f, psi, ConvSpec::new(Backend::Offset))
}

fn axial(f: &HexImage, psi: &HexFilter, exec: Execution) -> Result<Vec<f32>> {
    Ok(rect_correlate_rows(&image_planes(f), &filter_kernel(psi), 0, 1, exec)?.data)
}

fn double_width(f: &HexImage, psi: &HexFilter, exec: Execution) -> Result<Vec<f32>> {
    let layout = DoubleWidthLayout::new(f.rows(), f.cols());
    let input = layout.encode(&image_planes(f));
    let kernel = DoubleWidthLayout::encode_kernel(&filter_kernel(psi));
    let out = rect_correlate_rows(&input, &kernel, 0, 1, exec)?;
    Ok(layout.decode(&out).data)
}

fn offset(f: &HexImage, psi: &HexFilter, exec: Execution) -> Result<Vec<f32>> {
    let layout = OffsetLayout::for_image(f);
    let input = layout.encode(&image_planes(f));
    let base = filter_kernel(psi);
    let mut out = Planes::zeros(psi.out_channels(), input.rows, input.cols);
    for odd in [false, true] {
        let Some(start) = layout.first_row_with_parity(odd) else {
            continue;
        };
        let kernel = OffsetLayout::encode_kernel(&base, odd);
        let part = rect_correlate_rows(&input, &kernel, start, 2, exec)?;
        // strided write emulated by copy
        for c in 0..part.count {
            for i in 0..part.rows {
                let y = start + 2 * i;
                let dst = ((c * out.rows) + y) * out.cols;
                out.data[dst..dst + out.cols]
                    .copy_from_slice(&part.plane(c)[i * part.cols..(i + 1) * part.cols]);
            }
        }
    }
    Ok(layout.decode(&out).data)
}

/// Direct summation over sites: for each output site `p`, each filter
/// offset `d` and each input plane, reads `f` at `t_p · d`.
pub fn hexconv_oracle(f: &HexImage, psi: &HexFilter) -> Result<HexImage> {
    if psi.in_channels() != f.planes() {
        return Err(Error::shape(format!(
            "filter expects {} input planes, image has {}",
            psi.in_channels(),
            f.planes()
        )));
    }
    let r = psi.radius() as i32;
    let offsets: Vec<_> = (-r..=r)
        .flat_map(|v| (-r..=r).map(move |u| crate::AxialPoint::new(u, v)))
        .filter(|d| d.norm() <= r)
        .collect();
    let mut out = f.zeros_like(psi.out_channels(), 1);
    let cells: Vec<_> = f.valid_cells().collect();
    for c in 0..psi.out_channels() {
        for &(row, col) in &cells {
            let shift = GroupElement::translation(Flavor::C6, f.site(row, col));
            let mut acc = 0.0f64;
            for k in 0..f.planes() {
                let (ch, o) = (k / f.orientations(), k % f.orientations());
                for &d in &offsets {
                    let q = shift.act(d);
                    acc += f64::from(f.at(ch, o, q)) * f64::from(psi.at(c, k, d));
                }
            }
            out.set(c, 0, row, col, acc as f32);
        }
    }
    Ok(out)
}
