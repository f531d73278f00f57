//! Minimum and maximum selection against a comparison oracle that may lie
//! at most `k` times.
//!
//! * [`model`]: hidden orders, transcripts and lie accounting.
//! * [`oracle`]: truthful, random, triggered and adaptive lying oracles.
//! * [`graph`] and [`flow`]: ordered comparison multigraphs, thickness,
//!   and the flow-based completion that turns a sort graph into a
//!   certificate for the group minimum and maximum.
//! * [`sort`]: memoizing sorters that expose their comparison graph.
//! * [`minmax`]: the selection algorithms.
//! * [`harness`]: experiments, exhaustive verification and self-tests
//!   behind the `liarsel` CLI.

pub mod calibration;
pub mod error;
pub mod flow;
pub mod graph;
pub mod harness;
pub mod minmax;
pub mod model;
pub mod oracle;
pub mod sort;

pub use calibration::Calibration;
pub use error::{Error, Inconsistency, Result};
pub use graph::OrderedMultigraph;
pub use minmax::{
    find_max_k_lies, find_min_k_lies, improved_minmax, improved_minmax_with, make_group_plan,
    pohl_minmax, simple_minmax, simple_minmax_with, Algorithm, GroupPlan, MinMaxOptions,
    MinMaxResult,
};
pub use model::{
    assert_lie_budget, count_lies, element_ids, truth_compare, Answer, ElementId, Phase,
    QueryRecord, RunStats, TotalOrder, Transcript,
};
pub use oracle::{adversary_consistent_orders, LyingOracle, Oracle, Strategy};
pub use sort::{balanced_quicksort, median_select, mergesort, SortBudget, SortOutcome, Sorter};
