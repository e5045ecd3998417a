//! Parallel Monte Carlo over trials.
//!
//! Every trial draws from its own seeded streams and results are reduced in
//! trial order, so the outcome does not depend on the worker count.

use rayon::prelude::*;
use stbeam_core::scenario::{trial_sum_se, ErgodicResult, ScenarioConfig};

use crate::error::{AppError, AppResult};

/// Worker pool for trial evaluation. `threads = None` uses rayon's default.
#[derive(Debug)]
pub struct Engine {
    pool: rayon::ThreadPool,
}

impl Engine {
    pub fn new(threads: Option<usize>) -> AppResult<Self> {
        if threads == Some(0) {
            return Err(AppError::config("threads: must be at least 1"));
        }
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| AppError::config(format!("threads: {e}")))?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn monte_carlo(&self, config: &ScenarioConfig) -> AppResult<ErgodicResult> {
        config.validate()?;
        let values = self.pool.install(|| {
            (0..config.trials as u64).into_par_iter().map(|t| trial_sum_se(config, t)).collect::<Result<Vec<_>, _>>()
        })?;
        Ok(ErgodicResult::from_trials(values, config.scheme, config.digest()))
    }
}
