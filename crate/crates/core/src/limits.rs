use std::cell::Cell;

use crate::error::{Error, Result};

/// Resource guards shared by every search in the crate.
///
/// Exceeding a guard yields [`Error::LimitExceeded`]; a search never returns a
/// partial or guessed answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Backtracking nodes per top-level call.
    pub search_nodes: u64,
    /// Tuple slots materialized by orbit computations (`n^k` for arity `k`).
    pub tuples: u64,
    /// Elements enumerated by group closures.
    pub group_elements: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            search_nodes: 200_000_000,
            tuples: 20_000_000,
            group_elements: 2_000_000,
        }
    }
}

impl Limits {
    pub fn with_search_nodes(mut self, nodes: u64) -> Self {
        self.search_nodes = nodes;
        self
    }

    pub(crate) fn budget(&self) -> Budget {
        Budget::new(self.search_nodes)
    }
}

/// Node counter for a single search.
#[derive(Debug)]
pub(crate) struct Budget {
    used: Cell<u64>,
    limit: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget {
            used: Cell::new(0),
            limit,
        }
    }

    pub(crate) fn tick(&self) -> Result<()> {
        let used = self.used.get() + 1;
        self.used.set(used);
        if used > self.limit {
            Err(Error::LimitExceeded {
                what: "search node",
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}
