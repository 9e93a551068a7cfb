//! Data-parallel helpers with a sequential fallback when the `parallel`
//! feature is off. Results are collected in input order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// True when the crate was built with rayon support.
pub const ENABLED: bool = cfg!(feature = "parallel");

#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_range<R: Send>(range: std::ops::Range<u64>, f: impl Fn(u64) -> R + Sync + Send) -> Vec<R> {
    range.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R: Send>(range: std::ops::Range<u64>, f: impl Fn(u64) -> R + Sync + Send) -> Vec<R> {
    range.map(f).collect()
}

/// Runtime choice between the rayon path and a plain loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// `Parallel` only when the crate was built with it.
    pub fn effective(self) -> Exec {
        if ENABLED {
            self
        } else {
            Exec::Sequential
        }
    }
}

pub fn map_with<T: Sync, R: Send>(exec: Exec, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    match exec.effective() {
        Exec::Parallel => map(items, f),
        Exec::Sequential => items.iter().map(f).collect(),
    }
}

/// Splits `0..len` into roughly `parts` contiguous chunks.
pub fn chunks(len: u64, parts: u64) -> Vec<std::ops::Range<u64>> {
    let parts = parts.clamp(1, len.max(1));
    let size = len.div_ceil(parts);
    (0..parts).map(|p| (p * size).min(len)..((p + 1) * size).min(len)).filter(|r| !r.is_empty()).collect()
}

pub fn worker_count() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range() {
        let c = chunks(10, 3);
        assert_eq!(c, vec![0..4, 4..8, 8..10]);
        assert!(chunks(0, 4).is_empty());
        assert_eq!(chunks(2, 8), vec![0..1, 1..2]);
    }

    #[test]
    fn map_keeps_order() {
        let v: Vec<u64> = (0..100).collect();
        assert_eq!(map(&v, |x| x * 2), (0..100).map(|x| x * 2).collect::<Vec<_>>());
        assert_eq!(map_range(0..5, |x| x + 1), vec![1, 2, 3, 4, 5]);
    }
}
