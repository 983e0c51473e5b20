//! Sequential or rayon-backed execution of independent replications.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How independent replications are scheduled. Output order is always the
/// replication index order, so the choice never changes results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon work-stealing; identical to `Sequential` without the `parallel`
    /// feature.
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build actually runs `Parallel` on a thread pool.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// Evaluates `f(0), ..., f(n - 1)` and returns the results by index.
    pub fn map<T, F>(self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }
}
