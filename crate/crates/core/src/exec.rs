//! Sequential or rayon-backed execution of independent work items.
//!
//! Without the `parallel` feature, [`Execution::Parallel`] runs
//! sequentially. Work items never share accumulators, so both paths give
//! bitwise identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Calls `f(i, chunk)` for each `chunk_len`-sized chunk of `out`.
    pub fn for_each_chunk<F>(self, out: &mut [f32], chunk_len: usize, f: F)
    where
        F: Fn(usize, &mut [f32]) + Sync + Send,
    {
        if chunk_len == 0 {
            return;
        }
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => out
                .par_chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(i, c)| f(i, c)),
            _ => out
                .chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(i, c)| f(i, c)),
        }
    }

    /// `(0..n).map(f).collect()`, in order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let run = |e: Execution| {
            let mut v = vec![0.0f32; 12];
            e.for_each_chunk(&mut v, 4, |i, c| {
                for (j, x) in c.iter_mut().enumerate() {
                    *x = (i * 10 + j) as f32;
                }
            });
            v
        };
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
        assert_eq!(
            Execution::Parallel.map(5, |i| i * i),
            Execution::Sequential.map(5, |i| i * i)
        );
    }
}
