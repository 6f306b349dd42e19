//! Square-to-hexagonal resampling with bilinear interpolation.
//!
//! Hex rows are `spacing · sqrt(3)/2` apart and run top to bottom in the
//! source image; sites within a row are `spacing` apart, with odd rows
//! shifted right by half a site. A site is valid when its position lies
//! inside the rectangle spanned by the source pixel centres, so odd rows
//! may carry one site fewer than even rows.

use crate::error::{Error, Result};
use crate::hexcoord::AxialPoint;

use super::{GrayImage, HexImage};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;
const EPS: f64 = 1e-9;

/// Size of the hex field of view covering a `width x height` source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HexFieldOfView {
    /// Hex rows.
    pub rows: usize,
    /// Valid sites in each even row.
    pub even_row_sites: usize,
    /// Valid sites in each odd row.
    pub odd_row_sites: usize,
}

impl HexFieldOfView {
    pub fn new(width: usize, height: usize, spacing: f64) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::arg(format!(
                "source must be at least 2x2, got {width}x{height}"
            )));
        }
        if !spacing.is_finite() || spacing <= 0.0 {
            return Err(Error::arg(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        let span = (width - 1) as f64 / spacing;
        let rows = ((height - 1) as f64 / (spacing * SQRT3_2) + EPS).floor() as usize + 1;
        let even_row_sites = (span + EPS).floor() as usize + 1;
        let odd_row_sites = if span + EPS >= 0.5 {
            (span - 0.5 + EPS).floor() as usize + 1
        } else {
            0
        };
        Ok(Self {
            rows,
            even_row_sites,
            odd_row_sites,
        })
    }

    pub fn sites_in_row(&self, v: usize) -> usize {
        if v.is_multiple_of(2) {
            self.even_row_sites
        } else {
            self.odd_row_sites
        }
    }

    pub fn valid_count(&self) -> usize {
        (0..self.rows).map(|v| self.sites_in_row(v)).sum()
    }

    /// Extra axial columns needed so every row's run of sites fits.
    pub fn left_padding(&self) -> usize {
        (self.rows - 1) / 2
    }

    pub fn buffer_cols(&self) -> usize {
        self.even_row_sites + self.left_padding()
    }
}

/// Position of site `(u, v)` in source pixel coordinates (x right, y down),
/// with axial `(0, 0)` at the top-left pixel centre.
pub fn site_position(p: AxialPoint, spacing: f64) -> (f64, f64) {
    let x = spacing * (f64::from(p.u) + 0.5 * f64::from(p.v));
    let y = spacing * SQRT3_2 * f64::from(p.v);
    (x, y)
}

/// Bilinear sample at `(x, y)`; `None` outside the pixel-centre rectangle.
pub fn bilinear(src: &GrayImage, x: f64, y: f64) -> Option<f64> {
    let (w, h) = ((src.width - 1) as f64, (src.height - 1) as f64);
    if !(x >= -EPS && x <= w + EPS && y >= -EPS && y <= h + EPS) {
        return None;
    }
    let (x, y) = (x.clamp(0.0, w), y.clamp(0.0, h));
    let x0 = (x.floor() as usize).min(src.width - 2);
    let y0 = (y.floor() as usize).min(src.height - 2);
    let (fx, fy) = (x - x0 as f64, y - y0 as f64);
    let p = |xx: usize, yy: usize| f64::from(src.get(xx, yy));
    // lerp form keeps constants exact
    let top = p(x0, y0) + (p(x0 + 1, y0) - p(x0, y0)) * fx;
    let bottom = p(x0, y0 + 1) + (p(x0 + 1, y0 + 1) - p(x0, y0 + 1)) * fx;
    Some(top + (bottom - top) * fy)
}

/// Resamples `src` onto a hexagonal lattice with site spacing `spacing`
/// (in source pixels). The result is planar with one channel, and axial
/// `(0, 0)` sits at buffer cell `(0, left_padding)`.
pub fn resample_square_to_hex(src: &GrayImage, spacing: f64) -> Result<HexImage> {
    let fov = HexFieldOfView::new(src.width, src.height, spacing)?;
    let (rows, cols, pad) = (fov.rows, fov.buffer_cols(), fov.left_padding());

    let mut mask = vec![false; rows * cols];
    let mut data = vec![0.0f32; rows * cols];
    for v in 0..rows {
        // offset column j holds axial u = j - floor(v / 2)
        let shift = v / 2;
        for j in 0..fov.sites_in_row(v) {
            let col = pad + j - shift;
            let p = AxialPoint::new(j as i32 - shift as i32, v as i32);
            let (x, y) = site_position(p, spacing);
            let value = bilinear(src, x, y).expect("valid sites lie inside the source");
            mask[v * cols + col] = true;
            data[v * cols + col] = value as f32;
        }
    }
    HexImage::from_raw(1, 1, rows, cols, data, mask)?.with_anchor((0, pad), AxialPoint::ORIGIN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_preserved_exactly() {
        for &(w, h, s) in &[(2, 2, 1.0), (7, 5, 0.7), (16, 9, 1.3), (32, 32, 1.0)] {
            let src = GrayImage::from_fn(w, h, |_, _| 0.3);
            let hex = resample_square_to_hex(&src, s).unwrap();
            for (r, c) in hex.valid_cells() {
                assert_eq!(hex.get(0, 0, r, c), 0.3f32, "site {}", hex.site(r, c));
            }
            assert_eq!(
                hex.valid_count(),
                HexFieldOfView::new(w, h, s).unwrap().valid_count()
            );
            assert!(hex.is_masked());
        }
    }

    #[test]
    fn affine_ramp_reproduced() {
        let (w, h, s) = (13, 11, 0.9);
        let f = |x: f64, y: f64| 0.25 * x - 0.125 * y + 1.0;
        let src = GrayImage::from_fn(w, h, |x, y| f(x as f64, y as f64) as f32);
        let hex = resample_square_to_hex(&src, s).unwrap();
        let mut checked = 0;
        for (r, c) in hex.valid_cells() {
            let (x, y) = site_position(hex.site(r, c), s);
            if x <= (w - 1) as f64 && y <= (h - 1) as f64 {
                assert!((f64::from(hex.get(0, 0, r, c)) - f(x, y)).abs() < 1e-6);
                checked += 1;
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn single_pixel_footprint() {
        let (px, py) = (6usize, 5usize);
        let src = GrayImage::from_fn(12, 12, |x, y| if (x, y) == (px, py) { 1.0 } else { 0.0 });
        let hex = resample_square_to_hex(&src, 1.0).unwrap();
        let mut nonzero = 0;
        for (r, c) in hex.valid_cells() {
            if hex.get(0, 0, r, c) != 0.0 {
                let (x, y) = site_position(hex.site(r, c), 1.0);
                assert!((x - px as f64).abs() < 1.0 && (y - py as f64).abs() < 1.0);
                nonzero += 1;
            }
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn field_of_view_layout() {
        let src = GrayImage::from_fn(32, 32, |_, _| 1.0);
        let hex = resample_square_to_hex(&src, 1.0).unwrap();
        let fov = HexFieldOfView::new(32, 32, 1.0).unwrap();
        assert_eq!(fov.rows, 36);
        assert_eq!((fov.even_row_sites, fov.odd_row_sites), (32, 31));
        assert_eq!(fov.valid_count(), 18 * 32 + 18 * 31);
        assert_eq!(hex.valid_count(), fov.valid_count());
        // every valid site lies inside the source
        for p in hex.valid_sites() {
            let (x, y) = site_position(p, 1.0);
            assert!(
                (0.0..=31.0).contains(&x) && (0.0..=31.0).contains(&y),
                "{p}"
            );
        }
        assert_eq!(hex.cols(), 32 + 17);
        assert_eq!(hex.buffer_index(AxialPoint::ORIGIN), Some((0, 17)));
    }

    #[test]
    fn narrow_sources() {
        let fov = HexFieldOfView::new(2, 2, 1.0).unwrap();
        assert_eq!((fov.rows, fov.even_row_sites, fov.odd_row_sites), (2, 2, 1));
        let fov = HexFieldOfView::new(2, 9, 3.0).unwrap();
        assert_eq!((fov.even_row_sites, fov.odd_row_sites), (1, 0));
        let src = GrayImage::from_fn(2, 9, |_, _| 4.0);
        let hex = resample_square_to_hex(&src, 3.0).unwrap();
        assert_eq!(hex.valid_count(), fov.valid_count());
        assert!(hex.valid_cells().all(|(r, c)| hex.get(0, 0, r, c) == 4.0));
    }

    #[test]
    fn degenerate_source_rejected() {
        let src = GrayImage::from_fn(1, 5, |_, _| 0.0);
        assert!(resample_square_to_hex(&src, 1.0).is_err());
        let src = GrayImage::from_fn(3, 3, |_, _| 0.0);
        assert!(resample_square_to_hex(&src, 0.0).is_err());
        assert!(resample_square_to_hex(&src, -1.0).is_err());
    }
}
