//! Node and wall-clock limits for exhaustive searches.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::BudgetError;

/// Environment variable overriding the default node budget.
pub const ENV_BUDGET_NODES: &str = "NONSEP_BUDGET_NODES";
/// Environment variable overriding the default time budget, in seconds.
pub const ENV_BUDGET_SECONDS: &str = "NONSEP_BUDGET_SECONDS";

pub const DEFAULT_NODES: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: Some(DEFAULT_NODES),
            max_seconds: None,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_nodes: None,
            max_seconds: None,
        }
    }

    pub fn nodes(n: u64) -> Self {
        Budget {
            max_nodes: Some(n),
            max_seconds: None,
        }
    }

    /// Defaults overridden by the environment variables, when set and parseable.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(n) = std::env::var(ENV_BUDGET_NODES).ok().and_then(|s| s.parse().ok()) {
            b.max_nodes = Some(n);
        }
        if let Some(s) = std::env::var(ENV_BUDGET_SECONDS).ok().and_then(|s| s.parse().ok()) {
            b.max_seconds = Some(s);
        }
        b
    }

    pub fn start(&self) -> Meter {
        Meter {
            budget: *self,
            nodes: 0,
            started: Instant::now(),
        }
    }
}

/// Running count against a [`Budget`].
#[derive(Debug)]
pub struct Meter {
    budget: Budget,
    nodes: u64,
    started: Instant,
}

impl Meter {
    /// Counts one search node; fails once either limit is exceeded.
    pub fn tick(&mut self) -> Result<(), BudgetError> {
        self.nodes += 1;
        if let Some(max) = self.budget.max_nodes {
            if self.nodes > max {
                return Err(BudgetError::Nodes(max));
            }
        }
        if let Some(secs) = self.budget.max_seconds {
            if self.nodes.is_multiple_of(256) && self.started.elapsed() > Duration::from_secs_f64(secs) {
                return Err(BudgetError::Time(secs));
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }
}
