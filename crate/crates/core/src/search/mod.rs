//! Solvability search: exhaustive scalar enumeration with pruning, randomized
//! vector-dimension sampling, and characteristic tables.

mod exhaustive;
mod random;
mod table;

use std::fmt;
use std::time::Duration;

use crate::code::{CodeError, CodingAssignment, SolvabilityReport};
use crate::families::FamilyError;
use crate::solutions::SolutionError;

pub use exhaustive::{exhaustive_scalar_search, search_space_size};
pub use random::randomized_vector_search;
pub use table::{characteristic_table, Table, TableMode, TableRow, Verdict};

pub const DEFAULT_SEARCH_BUDGET: u128 = 1 << 30;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search space has {required} coefficient vectors, budget is {budget}; enable normalization or pick a smaller instance")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Solution(#[from] SolutionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Upper bound on the number of complete coefficient vectors.
    pub budget: u128,
    /// Fix the first nonzero coefficient of every coded edge to 1.
    pub normalize: bool,
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_SEARCH_BUDGET,
            normalize: true,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    /// Exhaustive enumeration finished without a solution.
    ExhaustedNone,
    Inconclusive,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Found => "FOUND",
            SearchStatus::ExhaustedNone => "NONE",
            SearchStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub assignment: Option<CodingAssignment>,
    /// Verification report of the found assignment, including its decoders.
    pub report: Option<SolvabilityReport>,
    /// Coefficient vectors tried (per coded edge for exhaustive search, whole
    /// assignments for randomized search).
    pub searched: u64,
    pub elapsed: Duration,
}
