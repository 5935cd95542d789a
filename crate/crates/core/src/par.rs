//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! rayon's pool; without it every helper runs the same loop sequentially.
//!
//! Floating point reductions use a fixed chunking that does not depend on the
//! number of threads, so both modes return bit-identical results.

/// Chunk length for deterministic reductions.
pub const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    fn parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

pub fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if exec.parallel() {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    (0..n).map(f).collect()
}

/// [`map_indexed`] on a dedicated pool of `jobs` threads; `jobs <= 1` runs
/// inline. Results are ordered by index either way.
pub fn map_with_jobs<T, F>(jobs: usize, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            return pool.install(|| map_indexed(Exec::Parallel, n, f));
        }
    }
    let _ = jobs;
    (0..n).map(f).collect()
}

/// Like [`map_indexed`] but stops at an error. The reported error is the one
/// with the smallest index, independent of scheduling.
pub fn try_map_indexed<T, E, F>(exec: Exec, n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    map_indexed(exec, n, f).into_iter().collect()
}

pub fn for_each_mut<T, F>(exec: Exec, items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    if exec.parallel() {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            items
                .par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| {
                    for (k, x) in chunk.iter_mut().enumerate() {
                        f(c * CHUNK + k, x);
                    }
                });
            return;
        }
    }
    for (i, x) in items.iter_mut().enumerate() {
        f(i, x);
    }
}

/// Sum of `f(i, item)` over a slice with order-independent rounding.
pub fn sum_by<T, F>(exec: Exec, items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(usize, &T) -> f64 + Sync + Send,
{
    let chunk_sum = |c: usize, chunk: &[T]| -> f64 {
        let mut acc = 0.0;
        for (k, x) in chunk.iter().enumerate() {
            acc += f(c * CHUNK + k, x);
        }
        acc
    };
    #[cfg(feature = "parallel")]
    let partials: Vec<f64> = if exec.parallel() {
        use rayon::prelude::*;
        items.par_chunks(CHUNK).enumerate().map(|(c, chunk)| chunk_sum(c, chunk)).collect()
    } else {
        items.chunks(CHUNK).enumerate().map(|(c, chunk)| chunk_sum(c, chunk)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<f64> = {
        let _ = exec;
        items.chunks(CHUNK).enumerate().map(|(c, chunk)| chunk_sum(c, chunk)).collect()
    };
    partials.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_bitwise() {
        let xs: Vec<f64> = (0..20_000).map(|i| 1.0 / (i as f64 + 0.37)).collect();
        let a = sum_by(Exec::Sequential, &xs, |_, x| *x);
        let b = sum_by(Exec::Parallel, &xs, |_, x| *x);
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(
            map_indexed(Exec::Sequential, 100, |i| i * i),
            map_indexed(Exec::Parallel, 100, |i| i * i)
        );
    }

    #[test]
    fn first_error_wins() {
        let r: Result<Vec<usize>, usize> =
            try_map_indexed(Exec::Parallel, 50, |i| if i % 7 == 3 { Err(i) } else { Ok(i) });
        assert_eq!(r, Err(3));
    }
}
