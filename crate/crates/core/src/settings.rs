//! Search and resolution bounds shared by all checks.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    /// Resolution length bound; `None` means twice the algebra dimension.
    pub bound: Option<usize>,
    /// Highest Tor degree examined.
    pub tor_bound: usize,
    /// Retries for randomized searches.
    pub retries: usize,
    pub seed: u64,
    /// Candidate idempotents tried by the stratification search.
    pub search_budget: usize,
}

impl Default for Settings {
    fn default() -> Settings {
        Settings { bound: None, tor_bound: 10, retries: 64, seed: 0, search_budget: 4096 }
    }
}

impl Settings {
    pub fn resolution_bound(&self, dim: usize) -> usize {
        self.bound.unwrap_or(2 * dim.max(1))
    }
}
