//! Execution-mode switch for the data-parallel entry points.
//!
//! Chain replicates and tempering rungs are independent given pre-split RNG
//! sub-streams, so they can run on a rayon pool. The sequential path produces
//! bit-identical results; the mode only changes scheduling.

/// How independent work items are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    /// One item after another on the calling thread.
    Sequential,
    /// Rayon work-stealing pool when the `parallel` feature is enabled;
    /// otherwise identical to `Sequential`.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Map `f` over owned items, preserving order.
pub fn map_collect<I, O, F>(mode: ExecMode, items: Vec<I>, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.into_iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => items.into_iter().map(f).collect(),
    }
}

/// Map `f` over mutable slots in place, preserving order of outputs.
pub fn map_mut<I, O, F>(mode: ExecMode, items: &mut [I], f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(usize, &mut I) -> O + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.iter_mut().enumerate().map(|(i, x)| f(i, x)).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items
                .par_iter_mut()
                .enumerate()
                .map(|(i, x)| f(i, x))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => items.iter_mut().enumerate().map(|(i, x)| f(i, x)).collect(),
    }
}
