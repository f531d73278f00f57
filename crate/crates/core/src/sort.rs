//! Oracle-driven sorting with comparison-graph extraction.
//!
//! Sorts never ask the oracle about the same unordered pair twice within
//! one attempt; repeated lookups are served from a memo. The resulting
//! comparison graph is therefore simple, which keeps every degree at most
//! `s - 1`.

use std::collections::HashMap;

use crate::calibration::Calibration;
use crate::error::{Inconsistency, Result};
use crate::graph::OrderedMultigraph;
use crate::model::ElementId;
use crate::oracle::Oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortBudget {
    pub max_comparisons: usize,
}

impl SortBudget {
    /// Budget for sorting `s` elements with the calibrated constants.
    pub fn for_size(s: usize, calibration: &Calibration) -> Self {
        Self {
            max_comparisons: calibration.sort_budget(s),
        }
    }

    pub fn unlimited() -> Self {
        Self {
            max_comparisons: usize::MAX,
        }
    }
}

/// Claimed ascending order of a group plus the comparisons behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortOutcome {
    pub output: Vec<ElementId>,
    /// One edge per distinct compared pair, over output positions `1..=s`.
    pub graph: OrderedMultigraph,
    pub comparisons: usize,
    /// Each distinct compared pair as `(declared smaller, declared larger)`.
    pub verdicts: Vec<(ElementId, ElementId)>,
}

impl SortOutcome {
    fn new(output: Vec<ElementId>, verdicts: Vec<(ElementId, ElementId)>, comparisons: usize) -> Self {
        let position: HashMap<ElementId, usize> =
            output.iter().enumerate().map(|(i, &e)| (e, i + 1)).collect();
        let mut graph = OrderedMultigraph::new(output.len());
        for (x, y) in &verdicts {
            graph
                .add_edge(position[x], position[y])
                .expect("sorted elements are distinct");
        }
        Self {
            output,
            graph,
            comparisons,
            verdicts,
        }
    }

    /// Position (1-based) of each element in the output.
    pub fn positions(&self) -> HashMap<ElementId, usize> {
        self.output.iter().enumerate().map(|(i, &e)| (e, i + 1)).collect()
    }

    /// Whether every recorded verdict agrees with the output order.
    pub fn agrees_with_output(&self) -> bool {
        let position = self.positions();
        self.verdicts.iter().all(|(x, y)| position[x] < position[y])
    }
}

pub fn thickness_of_run(out: &SortOutcome) -> usize {
    out.graph.thickness()
}

/// Memoizing, budget-checked access to an oracle for one sort attempt.
struct Comparator<'o, O: Oracle + ?Sized> {
    oracle: &'o mut O,
    memo: HashMap<(ElementId, ElementId), bool>,
    verdicts: Vec<(ElementId, ElementId)>,
    queries: usize,
    limit: usize,
}

impl<'o, O: Oracle + ?Sized> Comparator<'o, O> {
    fn new(oracle: &'o mut O, budget: SortBudget) -> Self {
        Self {
            oracle,
            memo: HashMap::new(),
            verdicts: Vec::new(),
            queries: 0,
            limit: budget.max_comparisons,
        }
    }

    fn less(&mut self, a: ElementId, b: ElementId) -> Result<bool> {
        let key = (a.min(b), a.max(b));
        if let Some(&low_is_smaller) = self.memo.get(&key) {
            return Ok(low_is_smaller == (a < b));
        }
        if self.queries >= self.limit {
            return Err(Inconsistency::BudgetExceeded { limit: self.limit }.into());
        }
        let a_smaller = self.oracle.less(a, b)?;
        self.queries += 1;
        self.memo.insert(key, a_smaller == (a < b));
        self.verdicts.push(if a_smaller { (a, b) } else { (b, a) });
        Ok(a_smaller)
    }

    fn finish(self, output: Vec<ElementId>) -> SortOutcome {
        SortOutcome::new(output, self.verdicts, self.queries)
    }

    fn merge_sort(&mut self, items: &[ElementId]) -> Result<Vec<ElementId>> {
        if items.len() <= 1 {
            return Ok(items.to_vec());
        }
        let (left, right) = items.split_at(items.len() / 2);
        let left = self.merge_sort(left)?;
        let right = self.merge_sort(right)?;
        let mut out = Vec::with_capacity(items.len());
        let (mut i, mut j) = (0, 0);
        while i < left.len() && j < right.len() {
            if self.less(right[j], left[i])? {
                out.push(right[j]);
                j += 1;
            } else {
                out.push(left[i]);
                i += 1;
            }
        }
        out.extend_from_slice(&left[i..]);
        out.extend_from_slice(&right[j..]);
        Ok(out)
    }

    /// Binary insertion sort; used on groups of at most five.
    fn insertion_sort(&mut self, items: &[ElementId]) -> Result<Vec<ElementId>> {
        let mut out: Vec<ElementId> = Vec::with_capacity(items.len());
        for &x in items {
            let (mut lo, mut hi) = (0, out.len());
            while lo < hi {
                let mid = (lo + hi) / 2;
                if self.less(x, out[mid])? {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            out.insert(lo, x);
        }
        Ok(out)
    }

    fn partition(
        &mut self,
        items: &[ElementId],
        pivot: ElementId,
    ) -> Result<(Vec<ElementId>, Vec<ElementId>)> {
        let mut smaller = Vec::new();
        let mut larger = Vec::new();
        for &x in items {
            if x == pivot {
                continue;
            }
            if self.less(x, pivot)? {
                smaller.push(x);
            } else {
                larger.push(x);
            }
        }
        Ok((smaller, larger))
    }

    /// Element of 0-based `rank` among `items` by median of medians.
    fn select(&mut self, items: &[ElementId], rank: usize) -> Result<ElementId> {
        debug_assert!(rank < items.len());
        if items.len() <= 5 {
            return Ok(self.insertion_sort(items)?[rank]);
        }
        let mut medians = Vec::with_capacity(items.len().div_ceil(5));
        for chunk in items.chunks(5) {
            let sorted = self.insertion_sort(chunk)?;
            medians.push(sorted[(sorted.len() - 1) / 2]);
        }
        let pivot = self.select(&medians, (medians.len() - 1) / 2)?;
        let (smaller, larger) = self.partition(items, pivot)?;
        match rank.cmp(&smaller.len()) {
            std::cmp::Ordering::Less => self.select(&smaller, rank),
            std::cmp::Ordering::Equal => Ok(pivot),
            std::cmp::Ordering::Greater => self.select(&larger, rank - smaller.len() - 1),
        }
    }

    fn median_split(&mut self, items: &[ElementId]) -> Result<MedianSplit> {
        let m = items.len();
        let rank = (m - 1) / 2;
        let median = self.select(items, rank)?;
        let (smaller, larger) = self.partition(items, median)?;
        let expected = (rank, m - 1 - rank);
        let found = (smaller.len(), larger.len());
        if found != expected {
            return Err(Inconsistency::PartitionSize { expected, found }.into());
        }
        Ok(MedianSplit {
            median,
            smaller,
            larger,
            comparisons: 0,
        })
    }

    fn quicksort(&mut self, items: &[ElementId], out: &mut Vec<ElementId>) -> Result<()> {
        if items.len() <= 1 {
            out.extend_from_slice(items);
            return Ok(());
        }
        let split = self.median_split(items)?;
        self.quicksort(&split.smaller, out)?;
        out.push(split.median);
        self.quicksort(&split.larger, out)
    }
}

/// Top-down mergesort. Never fails on lies; with lies the output is just
/// some permutation.
pub fn mergesort<O: Oracle + ?Sized>(items: &[ElementId], oracle: &mut O) -> Result<SortOutcome> {
    let mut cmp = Comparator::new(oracle, SortBudget::unlimited());
    let output = cmp.merge_sort(items)?;
    Ok(cmp.finish(output))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MedianSplit {
    /// Element of rank `ceil(m / 2)` among the `m` items.
    pub median: ElementId,
    pub smaller: Vec<ElementId>,
    pub larger: Vec<ElementId>,
    pub comparisons: usize,
}

/// Median of `items` and the partition around it, or an
/// [`Inconsistency`] when the sides have the wrong size or the budget runs
/// out.
pub fn median_select<O: Oracle + ?Sized>(
    items: &[ElementId],
    oracle: &mut O,
    budget: SortBudget,
) -> Result<MedianSplit> {
    if items.is_empty() {
        return Err(crate::Error::InvalidInput("median of an empty set".into()));
    }
    let mut cmp = Comparator::new(oracle, budget);
    let mut split = cmp.median_split(items)?;
    split.comparisons = cmp.queries;
    Ok(split)
}

/// Quicksort splitting at the exact median at every level, so its
/// comparison graph has thickness `O(s)`. Partition sizes are checked at
/// every level and the total comparison count against `budget`.
pub fn balanced_quicksort<O: Oracle + ?Sized>(
    items: &[ElementId],
    oracle: &mut O,
    budget: SortBudget,
) -> Result<SortOutcome> {
    let mut cmp = Comparator::new(oracle, budget);
    let mut output = Vec::with_capacity(items.len());
    cmp.quicksort(items, &mut output)?;
    Ok(cmp.finish(output))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Sorter {
    #[serde(rename = "mergesort")]
    Mergesort,
    #[serde(rename = "balanced-quicksort")]
    BalancedQuicksort,
}

impl Sorter {
    pub fn name(self) -> &'static str {
        match self {
            Sorter::Mergesort => "mergesort",
            Sorter::BalancedQuicksort => "balanced-quicksort",
        }
    }

    pub fn sort<O: Oracle + ?Sized>(
        self,
        items: &[ElementId],
        oracle: &mut O,
        budget: SortBudget,
    ) -> Result<SortOutcome> {
        match self {
            Sorter::Mergesort => mergesort(items, oracle),
            Sorter::BalancedQuicksort => balanced_quicksort(items, oracle, budget),
        }
    }
}

impl std::str::FromStr for Sorter {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mergesort" => Ok(Sorter::Mergesort),
            "balanced-quicksort" | "quicksort" => Ok(Sorter::BalancedQuicksort),
            other => Err(crate::Error::Parse(format!("unknown sorter {other:?}"))),
        }
    }
}
