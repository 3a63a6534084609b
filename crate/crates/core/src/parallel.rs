//! Ordered trial mapping. With the `parallel` feature trials run on a rayon
//! pool; without it they run in sequence. Either way the output is in trial
//! order, so downstream folds are independent of the thread count.

use crate::error::Result;

/// Whether this build runs trials on a thread pool.
pub const PARALLEL: bool = cfg!(feature = "parallel");

/// `f(0), …, f(trials − 1)` in index order, on up to `threads` workers
/// (`0` = runtime default).
#[cfg(feature = "parallel")]
pub fn map_trials<T, F>(trials: u64, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if threads == 1 {
        return Ok(map_trials_sequential(trials, f));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::error::Error::config("threads", e.to_string()))?;
    Ok(pool.install(|| (0..trials).into_par_iter().map(&f).collect()))
}

#[cfg(not(feature = "parallel"))]
pub fn map_trials<T, F>(trials: u64, _threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    Ok(map_trials_sequential(trials, f))
}

pub fn map_trials_sequential<T, F: Fn(u64) -> T>(trials: u64, f: F) -> Vec<T> {
    (0..trials).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let expect: Vec<u64> = (0..500).map(|i| i * i).collect();
        for threads in [0, 1, 3, 8] {
            assert_eq!(map_trials(500, threads, |i| i * i).unwrap(), expect);
        }
    }
}
