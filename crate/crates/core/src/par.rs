//! Ordered data-parallel map over independent per-`ell` jobs.
//!
//! With the `parallel` feature (default) work runs on a rayon pool sized by
//! the caller; without it every map is a plain sequential iterator. Results
//! always come back in input order.

use std::fmt;
use std::ops::ControlFlow;
#[cfg(feature = "parallel")]
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Executor {
    jobs: usize,
    #[cfg(feature = "parallel")]
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl fmt::Debug for Executor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Executor")
            .field("jobs", &self.jobs)
            .finish()
    }
}

pub fn is_parallel_available() -> bool {
    cfg!(feature = "parallel")
}

impl Executor {
    pub fn sequential() -> Self {
        Self {
            jobs: 1,
            #[cfg(feature = "parallel")]
            pool: None,
        }
    }

    /// `jobs` workers; `1` (or a build without `parallel`) means sequential.
    pub fn new(jobs: usize) -> Result<Self> {
        if jobs == 0 {
            return Err(Error::InvalidParameter(
                "worker count must be at least 1".into(),
            ));
        }
        if jobs == 1 || !is_parallel_available() {
            return Ok(Self::sequential());
        }
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            Ok(Self {
                jobs,
                pool: Some(Arc::new(pool)),
            })
        }
        #[cfg(not(feature = "parallel"))]
        unreachable!()
    }

    /// One worker per available core.
    pub fn all_cores() -> Self {
        let n = std::thread::available_parallelism().map_or(1, |n| n.get());
        Self::new(n).unwrap_or_else(|_| Self::sequential())
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    /// Items handed out per round when folding a stream in order.
    pub fn batch_size(&self) -> usize {
        if self.jobs == 1 {
            1
        } else {
            4 * self.jobs
        }
    }

    pub fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| items.par_iter().map(&f).collect());
        }
        items.iter().map(f).collect()
    }

    /// Maps `f` over a (possibly endless) stream in rounds of
    /// [`batch_size`](Self::batch_size) items and feeds `sink` in stream order,
    /// stopping after the first `Break`.
    pub fn fold_ordered<T, U, E, F, G>(
        &self,
        items: impl IntoIterator<Item = T>,
        f: F,
        mut sink: G,
    ) -> std::result::Result<(), E>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
        G: FnMut(T, U) -> std::result::Result<ControlFlow<()>, E>,
    {
        let mut iter = items.into_iter();
        loop {
            let batch: Vec<T> = iter.by_ref().take(self.batch_size()).collect();
            if batch.is_empty() {
                return Ok(());
            }
            let results = self.map(&batch, &f);
            for (item, out) in batch.into_iter().zip(results) {
                if sink(item, out)?.is_break() {
                    return Ok(());
                }
            }
        }
    }
}

impl Default for Executor {
    fn default() -> Self {
        Self::all_cores()
    }
}
