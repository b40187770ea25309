//! Per-iteration run records — the unit of all reporting.

use nalgebra::DVector;
use serde::Serialize;

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationStatus {
    /// Best value stopped improving within the configured patience window.
    Converged,
    /// The iteration budget was exhausted.
    MaxIters,
    /// The candidate distribution stayed collapsed for a full patience window.
    DegenerateHalt,
}

impl std::fmt::Display for TerminationStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TerminationStatus::Converged => "converged",
            TerminationStatus::MaxIters => "max_iters",
            TerminationStatus::DegenerateHalt => "degenerate_halt",
        })
    }
}

/// Snapshot of the pool after one iteration.
///
/// `iteration` is 1-based and assigned by the loop driver; a record produced
/// by a bare [`step`](crate::optimizer::step) call carries 0 there. In
/// multi-segment (objective-switching) runs the index keeps counting across
/// segments.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    /// 1-based iteration index within the run.
    pub iteration: usize,
    /// Best objective value in the pool.
    pub best_f: f64,
    /// The point achieving `best_f`.
    pub best_x: DVector<f64>,
    /// Mean objective value over the pool.
    pub pool_mean_f: f64,
    /// Cumulative objective evaluations so far, including initialization.
    pub evaluations: u64,
    /// True when this iteration generated no candidates because the
    /// distribution had collapsed.
    pub degenerate_skip: bool,
}

/// Complete history of one run: every iteration record plus the stop reason.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    /// One record per iteration, in order.
    pub records: Vec<IterationRecord>,
    /// Why the loop stopped.
    pub status: TerminationStatus,
}

impl RunTrace {
    /// Number of recorded iterations.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// True when no iterations were recorded.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The last record, if any iterations ran.
    pub fn final_record(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    /// Best value at the end of the run.
    pub fn final_best_f(&self) -> Option<f64> {
        self.final_record().map(|r| r.best_f)
    }

    /// Record with the given 1-based iteration index.
    ///
    /// Uses binary search on the index field, so it also works on traces whose
    /// indices continue from an earlier segment.
    pub fn record_at(&self, iteration: usize) -> Option<&IterationRecord> {
        self.records
            .binary_search_by(|r| r.iteration.cmp(&iteration))
            .ok()
            .map(|i| &self.records[i])
    }
}
