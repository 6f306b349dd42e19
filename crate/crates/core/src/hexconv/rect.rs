use crate::error::{Error, Result};
use crate::exec::Execution;

/// A stack of equally sized row-major planes.
#[derive(Debug, Clone, PartialEq)]
pub struct Planes {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f32>,
}

impl Planes {
    pub fn zeros(count: usize, rows: usize, cols: usize) -> Self {
        Self {
            count,
            rows,
            cols,
            data: vec![0.0; count * rows * cols],
        }
    }

    pub fn new(count: usize, rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != count * rows * cols {
            return Err(Error::shape(format!(
                "{} values for {count}x{rows}x{cols} planes",
                data.len()
            )));
        }
        Ok(Self {
            count,
            rows,
            cols,
            data,
        })
    }

    pub fn plane(&self, i: usize) -> &[f32] {
        let n = self.rows * self.cols;
        &self.data[i * n..(i + 1) * n]
    }

    pub fn get(&self, i: usize, r: usize, c: usize) -> f32 {
        self.data[(i * self.rows + r) * self.cols + c]
    }
}

/// Rectangular correlation kernel, `out x in x height x width`, both
/// spatial sizes odd and centred.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub out_channels: usize,
    pub in_channels: usize,
    pub height: usize,
    pub width: usize,
    pub data: Vec<f32>,
}

impl Kernel {
    pub fn zeros(out_channels: usize, in_channels: usize, height: usize, width: usize) -> Self {
        Self {
            out_channels,
            in_channels,
            height,
            width,
            data: vec![0.0; out_channels * in_channels * height * width],
        }
    }

    pub fn index(&self, c: usize, k: usize, a: usize, b: usize) -> usize {
        ((c * self.in_channels + k) * self.height + a) * self.width + b
    }

    pub fn get(&self, c: usize, k: usize, a: usize, b: usize) -> f32 {
        self.data[self.index(c, k, a, b)]
    }

    pub fn set(&mut self, c: usize, k: usize, a: usize, b: usize, v: f32) {
        let i = self.index(c, k, a, b);
        self.data[i] = v;
    }

    fn validate(&self) -> Result<()> {
        if self.height.is_multiple_of(2) || self.width.is_multiple_of(2) {
            return Err(Error::arg(format!(
                "kernel must have odd size, got {}x{}",
                self.height, self.width
            )));
        }
        if self.data.len() != self.out_channels * self.in_channels * self.height * self.width {
            return Err(Error::shape("kernel data length does not match its shape"));
        }
        Ok(())
    }

    /// Non-zero taps of slice `(c, k)` as `(dy, dx, weight)`, row-major.
    fn taps(&self, c: usize, k: usize) -> Vec<(isize, isize, f64)> {
        let (ch, cw) = ((self.height / 2) as isize, (self.width / 2) as isize);
        let mut taps = Vec::new();
        for a in 0..self.height {
            for b in 0..self.width {
                let w = self.get(c, k, a, b);
                if w != 0.0 {
                    taps.push((a as isize - ch, b as isize - cw, f64::from(w)));
                }
            }
        }
        taps
    }
}

/// Same-size zero-padded correlation:
/// `out[c](y, x) = Σ_k Σ_(a,b) in[k](y + a - ch, x + b - cw) · ker[c, k](a, b)`.
pub fn rect_correlate(input: &Planes, kernel: &Kernel) -> Result<Planes> {
    rect_correlate_rows(input, kernel, 0, 1, Execution::default())
}

/// [`rect_correlate`] evaluated only at output rows
/// `row_start, row_start + row_step, ...`; those rows are returned densely.
/// With `row_step = 2` this is a vertically strided correlation.
pub fn rect_correlate_rows(
    input: &Planes,
    kernel: &Kernel,
    row_start: usize,
    row_step: usize,
    exec: Execution,
) -> Result<Planes> {
    kernel.validate()?;
    if kernel.in_channels != input.count {
        return Err(Error::shape(format!(
            "kernel expects {} input planes, got {}",
            kernel.in_channels, input.count
        )));
    }
    if row_step == 0 {
        return Err(Error::arg("row step must be >= 1"));
    }
    let out_rows = if row_start < input.rows {
        (input.rows - row_start).div_ceil(row_step)
    } else {
        0
    };
    let (rows, cols) = (input.rows as isize, input.cols as isize);
    let plane_len = out_rows * input.cols;
    let taps: Vec<Vec<Vec<(isize, isize, f64)>>> = (0..kernel.out_channels)
        .map(|c| (0..kernel.in_channels).map(|k| kernel.taps(c, k)).collect())
        .collect();

    let mut out = Planes::zeros(kernel.out_channels, out_rows, input.cols);
    exec.for_each_chunk(&mut out.data, plane_len, |c, dst| {
        let mut acc = vec![0.0f64; plane_len];
        for (k, slice_taps) in taps[c].iter().enumerate() {
            let src = input.plane(k);
            for &(dy, dx, w) in slice_taps {
                // x range where x + dx stays inside the input
                let x_lo = (-dx).max(0);
                let x_hi = (cols - dx).min(cols);
                if x_lo >= x_hi {
                    continue;
                }
                for oy in 0..out_rows {
                    let sy = (row_start + oy * row_step) as isize + dy;
                    if sy < 0 || sy >= rows {
                        continue;
                    }
                    let src_row = &src[sy as usize * input.cols..][..input.cols];
                    let acc_row = &mut acc[oy * input.cols..][..input.cols];
                    for x in x_lo..x_hi {
                        acc_row[x as usize] += f64::from(src_row[(x + dx) as usize]) * w;
                    }
                }
            }
        }
        for (d, a) in dst.iter_mut().zip(&acc) {
            *d = *a as f32;
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::SplitMix64;

    /// Straight double loop, no tap lists or range clipping.
    fn brute(input: &Planes, kernel: &Kernel) -> Planes {
        let mut out = Planes::zeros(kernel.out_channels, input.rows, input.cols);
        let (ch, cw) = (kernel.height as isize / 2, kernel.width as isize / 2);
        for c in 0..kernel.out_channels {
            for y in 0..input.rows as isize {
                for x in 0..input.cols as isize {
                    let mut s = 0.0f64;
                    for k in 0..input.count {
                        for a in 0..kernel.height as isize {
                            for b in 0..kernel.width as isize {
                                let (sy, sx) = (y + a - ch, x + b - cw);
                                if sy >= 0
                                    && sx >= 0
                                    && sy < input.rows as isize
                                    && sx < input.cols as isize
                                {
                                    s += f64::from(input.get(k, sy as usize, sx as usize))
                                        * f64::from(kernel.get(c, k, a as usize, b as usize));
                                }
                            }
                        }
                    }
                    out.data[(c * input.rows + y as usize) * input.cols + x as usize] = s as f32;
                }
            }
        }
        out
    }

    #[test]
    fn delta_kernel_is_identity() {
        let input = Planes::new(1, 3, 4, (0..12).map(|i| i as f32).collect()).unwrap();
        let mut k = Kernel::zeros(1, 1, 3, 3);
        k.set(0, 0, 1, 1, 1.0);
        assert_eq!(rect_correlate(&input, &k).unwrap(), input);
    }

    #[test]
    fn ones_window_counts() {
        let input = Planes::new(1, 5, 5, vec![1.0; 25]).unwrap();
        let k = Kernel {
            data: vec![1.0; 9],
            ..Kernel::zeros(1, 1, 3, 3)
        };
        let out = rect_correlate(&input, &k).unwrap();
        assert_eq!(out.get(0, 2, 2), 9.0);
        assert_eq!(out.get(0, 0, 0), 4.0);
        assert_eq!(out.get(0, 0, 2), 6.0);
    }

    #[test]
    fn correlation_not_convolution() {
        // kernel tap at (dy, dx) = (0, +1) reads the right neighbour
        let input = Planes::new(1, 1, 3, vec![1.0, 2.0, 3.0]).unwrap();
        let mut k = Kernel::zeros(1, 1, 1, 3);
        k.set(0, 0, 0, 2, 1.0);
        assert_eq!(
            rect_correlate(&input, &k).unwrap().data,
            vec![2.0, 3.0, 0.0]
        );
    }

    #[test]
    fn random_matches_brute_force() {
        let mut rng = SplitMix64::seed_from_u64(3);
        for _ in 0..10 {
            let (kin, kout) = (rng.gen_range(1..4), rng.gen_range(1..4));
            let input = Planes::new(
                kin,
                6,
                6,
                (0..kin * 36).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            )
            .unwrap();
            let (h, w) = (2 * rng.gen_range(0..3) + 1, 2 * rng.gen_range(0..3) + 1);
            let kernel = Kernel {
                data: (0..kout * kin * h * w)
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect(),
                ..Kernel::zeros(kout, kin, h, w)
            };
            let fast = rect_correlate(&input, &kernel).unwrap();
            let slow = brute(&input, &kernel);
            for (a, b) in fast.data.iter().zip(&slow.data) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn strided_rows_match_full() {
        let mut rng = SplitMix64::seed_from_u64(5);
        let input =
            Planes::new(2, 7, 5, (0..70).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let kernel = Kernel {
            data: (0..2 * 2 * 9).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            ..Kernel::zeros(2, 2, 3, 3)
        };
        let full = rect_correlate(&input, &kernel).unwrap();
        for start in 0..2 {
            let part =
                rect_correlate_rows(&input, &kernel, start, 2, Execution::Sequential).unwrap();
            assert_eq!(part.rows, if start == 0 { 4 } else { 3 });
            for c in 0..2 {
                for (i, y) in (start..7).step_by(2).enumerate() {
                    for x in 0..5 {
                        assert_eq!(part.get(c, i, x), full.get(c, y, x));
                    }
                }
            }
        }
    }

    #[test]
    fn sequential_and_parallel_bitwise_equal() {
        let mut rng = SplitMix64::seed_from_u64(9);
        let input = Planes::new(
            3,
            9,
            9,
            (0..243).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        let kernel = Kernel {
            data: (0..4 * 3 * 25).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            ..Kernel::zeros(4, 3, 5, 5)
        };
        let a = rect_correlate_rows(&input, &kernel, 0, 1, Execution::Sequential).unwrap();
        let b = rect_correlate_rows(&input, &kernel, 0, 1, Execution::Parallel).unwrap();
        assert!(a
            .data
            .iter()
            .zip(&b.data)
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn errors() {
        let input = Planes::zeros(2, 3, 3);
        assert!(matches!(
            rect_correlate(&input, &Kernel::zeros(1, 2, 2, 3)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            rect_correlate(&input, &Kernel::zeros(1, 1, 3, 3)),
            Err(Error::Shape(_))
        ));
    }
}
