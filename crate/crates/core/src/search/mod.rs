//! Countermodel search and the remainder procedure.

mod countermodel;
mod remainder;

pub use countermodel::{
    find_countermodel, verify_found, CountermodelReport, Outcome, SearchBounds, SearchError,
    SearchStats, Target, CANONICAL_LIMIT, MAX_SEARCH_WORLDS,
};
pub use remainder::{compute_remainder, Elimination, RemainderError, RemainderResult, Theory};
