//! Minimum and maximum selection against at most `k` lies.
//!
//! The group-based algorithms share one skeleton: split the input into
//! groups of size `s`, find each group's minimum and maximum with a
//! sort-and-verify pipeline that restarts the group whenever the oracle is
//! caught lying, then select the overall minimum among the group minima and
//! the overall maximum among the group maxima, each against `k` lies.

use crate::calibration::Calibration;
use crate::error::{Error, Result};
use crate::flow::completion;
use crate::model::{ElementId, GroupAttempt, Phase, RunStats};
use crate::oracle::Oracle;
use crate::sort::{balanced_quicksort, mergesort, SortBudget};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinMaxResult {
    pub min: ElementId,
    pub max: ElementId,
    pub stats: RunStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Min,
    Max,
}

/// Candidate elimination with lifetime loss counters. Every comparison
/// charges one loss to the element declared worse (larger when looking
/// for the minimum); an element with `k + 1` losses is out. The true
/// extremum can only lose through lies, so it survives.
fn find_extreme<O: Oracle + ?Sized>(
    items: &[ElementId],
    k: usize,
    oracle: &mut O,
    direction: Direction,
) -> Result<(ElementId, usize)> {
    let (&first, rest) = items
        .split_first()
        .ok_or_else(|| Error::InvalidInput("selection from an empty set".into()))?;
    let mut candidate = first;
    let mut candidate_losses = 0;
    let mut comparisons = 0;
    for &challenger in rest {
        let mut challenger_losses = 0;
        loop {
            let candidate_smaller = oracle.less(candidate, challenger)?;
            comparisons += 1;
            let candidate_wins = match direction {
                Direction::Min => candidate_smaller,
                Direction::Max => !candidate_smaller,
            };
            if candidate_wins {
                challenger_losses += 1;
                if challenger_losses > k {
                    break;
                }
            } else {
                candidate_losses += 1;
                if candidate_losses > k {
                    candidate = challenger;
                    candidate_losses = challenger_losses;
                    break;
                }
            }
        }
    }
    Ok((candidate, comparisons))
}

/// Minimum of `items` against `k` lies using at most `(k + 1) n - 1`
/// comparisons.
pub fn find_min_k_lies<O: Oracle + ?Sized>(
    items: &[ElementId],
    k: usize,
    oracle: &mut O,
) -> Result<(ElementId, usize)> {
    find_extreme(items, k, oracle, Direction::Min)
}

pub fn find_max_k_lies<O: Oracle + ?Sized>(
    items: &[ElementId],
    k: usize,
    oracle: &mut O,
) -> Result<(ElementId, usize)> {
    find_extreme(items, k, oracle, Direction::Max)
}

/// Pair up the elements, then take the minimum among the pair losers and
/// the maximum among the pair winners: exactly `ceil(3n/2) - 2`
/// comparisons against a truthful oracle.
pub fn pohl_minmax<O: Oracle + ?Sized>(items: &[ElementId], oracle: &mut O) -> Result<MinMaxResult> {
    if items.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "min-max needs at least 2 elements, got {}",
            items.len()
        )));
    }
    let mut stats = RunStats::default();
    let mut smaller = Vec::with_capacity(items.len().div_ceil(2));
    let mut larger = Vec::with_capacity(items.len().div_ceil(2));
    for pair in items.chunks(2) {
        match *pair {
            [a, b] => {
                let a_smaller = oracle.less(a, b)?;
                stats.record(Phase::GroupSort, 1);
                let (lo, hi) = if a_smaller { (a, b) } else { (b, a) };
                smaller.push(lo);
                larger.push(hi);
            }
            [single] => {
                smaller.push(single);
                larger.push(single);
            }
            _ => unreachable!(),
        }
    }
    let (min, c) = find_min_k_lies(&smaller, 0, oracle)?;
    stats.record(Phase::FinalMin, c);
    let (max, c) = find_max_k_lies(&larger, 0, oracle)?;
    stats.record(Phase::FinalMax, c);
    Ok(MinMaxResult { min, max, stats })
}

/// Group size used when none is forced: `2` for `k <= 3`, otherwise `k`.
pub fn default_group_size(k: usize) -> usize {
    if k <= 3 {
        2
    } else {
        k
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPlan {
    pub s: usize,
    /// Consecutive blocks of size `s`; the last may be smaller.
    pub groups: Vec<Vec<ElementId>>,
}

impl GroupPlan {
    pub fn new(items: &[ElementId], s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidInput("group size must be positive".into()));
        }
        Ok(Self {
            s,
            groups: items.chunks(s).map(<[ElementId]>::to_vec).collect(),
        })
    }
}

/// Partition of the ids `0..n` into groups of the default size for `k`.
pub fn make_group_plan(n: usize, k: usize) -> GroupPlan {
    GroupPlan::new(&crate::model::element_ids(n), default_group_size(k))
        .expect("default group size is positive")
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MinMaxOptions {
    /// Forces the group size instead of [`default_group_size`].
    pub s_override: Option<usize>,
    pub calibration: Calibration,
}

impl MinMaxOptions {
    pub fn with_group_size(s: usize) -> Self {
        Self {
            s_override: Some(s),
            ..Self::default()
        }
    }

    fn group_size(&self, k: usize) -> usize {
        self.s_override.unwrap_or_else(|| default_group_size(k))
    }
}

/// Outcome of one pass over a group.
enum Attempt {
    Done { min: ElementId, max: ElementId },
    Restart,
}

/// Runs `attempt` on every group until it completes, then finishes with
/// the two final selections.
fn run_groups<O, F>(items: &[ElementId], k: usize, s: usize, oracle: &mut O, mut attempt: F) -> Result<MinMaxResult>
where
    O: Oracle + ?Sized,
    F: FnMut(&[ElementId], &mut O, &mut GroupAttempt) -> Result<Attempt>,
{
    if items.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "min-max needs at least 2 elements, got {}",
            items.len()
        )));
    }
    let plan = GroupPlan::new(items, s)?;
    let mut stats = RunStats::default();
    let mut minima = Vec::with_capacity(plan.groups.len());
    let mut maxima = Vec::with_capacity(plan.groups.len());
    for (index, group) in plan.groups.iter().enumerate() {
        loop {
            let mut log = GroupAttempt {
                group: index,
                size: group.len(),
                sort_queries: 0,
                verify_queries: 0,
                sort_thickness: None,
                first_query: oracle.queries(),
                completed: false,
            };
            let outcome = attempt(group, oracle, &mut log)?;
            stats.record(Phase::GroupSort, log.sort_queries);
            stats.record(Phase::GroupVerify, log.verify_queries);
            match outcome {
                Attempt::Done { min, max } => {
                    log.completed = true;
                    stats.attempts.push(log);
                    minima.push(min);
                    maxima.push(max);
                    break;
                }
                Attempt::Restart => {
                    stats.attempts.push(log);
                    stats.restarts += 1;
                    if stats.restarts > k {
                        return Err(Error::BudgetViolation {
                            restarts: stats.restarts,
                            k,
                        });
                    }
                }
            }
        }
    }
    let (min, c) = find_min_k_lies(&minima, k, oracle)?;
    stats.record(Phase::FinalMin, c);
    let (max, c) = find_max_k_lies(&maxima, k, oracle)?;
    stats.record(Phase::FinalMax, c);
    Ok(MinMaxResult { min, max, stats })
}

/// Mergesort each group, then confirm every adjacent pair `k + 1` times.
pub fn simple_minmax<O: Oracle + ?Sized>(items: &[ElementId], k: usize, oracle: &mut O) -> Result<MinMaxResult> {
    simple_minmax_with(items, k, oracle, &MinMaxOptions::default())
}

pub fn simple_minmax_with<O: Oracle + ?Sized>(
    items: &[ElementId],
    k: usize,
    oracle: &mut O,
    options: &MinMaxOptions,
) -> Result<MinMaxResult> {
    run_groups(items, k, options.group_size(k), oracle, |group, oracle, log| {
        let sorted = mergesort(group, oracle)?;
        log.sort_queries = sorted.comparisons;
        log.sort_thickness = Some(sorted.graph.thickness());
        let x = &sorted.output;
        for pair in x.windows(2) {
            for _ in 0..=k {
                log.verify_queries += 1;
                if !oracle.less(pair[0], pair[1])? {
                    return Ok(Attempt::Restart);
                }
            }
        }
        Ok(Attempt::Done {
            min: x[0],
            max: x[x.len() - 1],
        })
    })
}

/// Balanced-quicksort each group, extend its comparison graph to a
/// certifying multigraph, and ask only the added comparisons. `k = 0`
/// without a forced group size is exactly [`pohl_minmax`].
pub fn improved_minmax<O: Oracle + ?Sized>(items: &[ElementId], k: usize, oracle: &mut O) -> Result<MinMaxResult> {
    improved_minmax_with(items, k, oracle, &MinMaxOptions::default())
}

pub fn improved_minmax_with<O: Oracle + ?Sized>(
    items: &[ElementId],
    k: usize,
    oracle: &mut O,
    options: &MinMaxOptions,
) -> Result<MinMaxResult> {
    if k == 0 && options.s_override.is_none() {
        return pohl_minmax(items, oracle);
    }
    let s = options.group_size(k);
    // a simple sort graph on s vertices has degrees <= s - 1
    if s > k + 2 {
        return Err(Error::InvalidInput(format!(
            "group size {s} exceeds k + 2 = {}; sort degrees could exceed k + 1",
            k + 2
        )));
    }
    let calibration = options.calibration;
    run_groups(items, k, s, oracle, |group, oracle, log| {
        let start = oracle.queries();
        let budget = SortBudget::for_size(group.len(), &calibration);
        let sorted = match balanced_quicksort(group, oracle, budget) {
            Ok(sorted) => sorted,
            Err(Error::Inconsistency(_)) => {
                log.sort_queries = oracle.queries() - start;
                return Ok(Attempt::Restart);
            }
            Err(e) => return Err(e),
        };
        log.sort_queries = sorted.comparisons;
        log.sort_thickness = Some(sorted.graph.thickness());
        if !sorted.agrees_with_output() {
            return Ok(Attempt::Restart);
        }
        let x = &sorted.output;
        let plan = completion(&sorted.graph, k)?;
        for &(i, j) in &plan.added {
            log.verify_queries += 1;
            if !oracle.less(x[i - 1], x[j - 1])? {
                return Ok(Attempt::Restart);
            }
        }
        Ok(Attempt::Done {
            min: x[0],
            max: x[x.len() - 1],
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Pohl,
    Simple,
    Improved,
    FindMin,
    FindMax,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Pohl,
        Algorithm::Simple,
        Algorithm::Improved,
        Algorithm::FindMin,
        Algorithm::FindMax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pohl => "pohl",
            Algorithm::Simple => "simple",
            Algorithm::Improved => "improved",
            Algorithm::FindMin => "find-min",
            Algorithm::FindMax => "find-max",
        }
    }

    pub fn reports_min(self) -> bool {
        self != Algorithm::FindMax
    }

    pub fn reports_max(self) -> bool {
        self != Algorithm::FindMin
    }

    /// Runs the algorithm; single-extremum algorithms fill only their side.
    pub fn run<O: Oracle + ?Sized>(
        self,
        items: &[ElementId],
        k: usize,
        oracle: &mut O,
        options: &MinMaxOptions,
    ) -> Result<Extrema> {
        let minmax = |r: MinMaxResult| Extrema {
            min: Some(r.min),
            max: Some(r.max),
            stats: r.stats,
        };
        Ok(match self {
            Algorithm::Pohl => minmax(pohl_minmax(items, oracle)?),
            Algorithm::Simple => minmax(simple_minmax_with(items, k, oracle, options)?),
            Algorithm::Improved => minmax(improved_minmax_with(items, k, oracle, options)?),
            Algorithm::FindMin => {
                let (min, c) = find_min_k_lies(items, k, oracle)?;
                let mut stats = RunStats::default();
                stats.record(Phase::FinalMin, c);
                Extrema { min: Some(min), max: None, stats }
            }
            Algorithm::FindMax => {
                let (max, c) = find_max_k_lies(items, k, oracle)?;
                let mut stats = RunStats::default();
                stats.record(Phase::FinalMax, c);
                Extrema { min: None, max: Some(max), stats }
            }
        })
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm {s:?}")))
    }
}

/// Result of any [`Algorithm`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extrema {
    pub min: Option<ElementId>,
    pub max: Option<ElementId>,
    pub stats: RunStats,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{element_ids, TotalOrder};
    use crate::oracle::{LyingOracle, Strategy};
    use rand::SeedableRng;

    fn truthful(order: &TotalOrder) -> LyingOracle {
        LyingOracle::truthful(order.clone())
    }

    fn triggered(order: &TotalOrder, k: usize, at: &[usize]) -> LyingOracle {
        LyingOracle::new(
            order.clone(),
            k,
            Strategy::TriggeredLiar {
                triggers: at.iter().copied().collect(),
            },
        )
        .unwrap()
    }

    #[test]
    fn find_min_single_element() {
        let order = TotalOrder::identity(1);
        assert_eq!(find_min_k_lies(&element_ids(1), 3, &mut truthful(&order)).unwrap(), (ElementId(0), 0));
        assert_eq!(find_max_k_lies(&element_ids(1), 3, &mut truthful(&order)).unwrap(), (ElementId(0), 0));
        assert!(find_min_k_lies(&[], 1, &mut truthful(&order)).is_err());
    }

    #[test]
    fn find_min_three_one_lie_truthful() {
        for order in TotalOrder::all(3) {
            let (min, c) = find_min_k_lies(&element_ids(3), 1, &mut truthful(&order)).unwrap();
            assert_eq!(Some(min), order.min_of(&element_ids(3)));
            assert!(c <= 5);
            let (max, c) = find_max_k_lies(&element_ids(3), 1, &mut truthful(&order)).unwrap();
            assert_eq!(Some(max), order.max_of(&element_ids(3)));
            assert!(c <= 5);
        }
    }

    #[test]
    fn find_max_identity_no_lies() {
        let order = TotalOrder::from_ranks(vec![0, 1, 2]).unwrap();
        let (max, c) = find_max_k_lies(&element_ids(3), 0, &mut truthful(&order)).unwrap();
        assert_eq!(max, ElementId(2));
        assert!(c <= 2);
    }

    #[test]
    fn find_min_survives_every_single_lie_position() {
        let order = TotalOrder::from_ranks(vec![3, 1, 4, 0, 2]).unwrap();
        for at in 0..14 {
            let mut o = triggered(&order, 2, &[at, at + 3]);
            let (min, c) = find_min_k_lies(&element_ids(5), 2, &mut o).unwrap();
            assert_eq!(min, ElementId(3));
            assert!(c < 3 * 5);
        }
    }

    #[test]
    fn pohl_counts() {
        for (n, expected) in [(2, 1), (4, 4), (5, 6)] {
            let order = TotalOrder::identity(n);
            let r = pohl_minmax(&element_ids(n), &mut truthful(&order)).unwrap();
            assert_eq!(r.stats.comparisons, expected);
            assert_eq!(r.min, ElementId(0));
            assert_eq!(r.max, ElementId(n - 1));
            assert!(r.stats.is_balanced());
        }
        assert!(pohl_minmax(&element_ids(1), &mut truthful(&TotalOrder::identity(1))).is_err());
    }

    #[test]
    fn group_plans() {
        let sizes = |p: GroupPlan| p.groups.iter().map(Vec::len).collect::<Vec<_>>();
        assert_eq!(sizes(make_group_plan(10, 5)), vec![5, 5]);
        assert_eq!(sizes(make_group_plan(11, 5)), vec![5, 5, 1]);
        let plan = make_group_plan(7, 2);
        assert_eq!(plan.s, 2);
        assert_eq!(sizes(plan), vec![2, 2, 2, 1]);
        assert_eq!(make_group_plan(9, 0).s, 2);
        assert!(GroupPlan::new(&element_ids(3), 0).is_err());
    }

    #[test]
    fn simple_two_elements_one_lie() {
        for order in TotalOrder::all(2) {
            let r = simple_minmax(&element_ids(2), 1, &mut truthful(&order)).unwrap();
            assert_eq!(Some(r.min), order.min_of(&element_ids(2)));
            assert_eq!(Some(r.max), order.max_of(&element_ids(2)));
            assert_eq!(r.stats.phase(Phase::GroupSort), 1);
            assert_eq!(r.stats.phase(Phase::GroupVerify), 2);
            assert_eq!(r.stats.phase(Phase::FinalMin), 0);
            assert_eq!(r.stats.comparisons, 3);
        }
    }

    #[test]
    fn simple_restarts_exactly_the_lied_group() {
        let n = 12;
        let k = 4;
        let order = TotalOrder::from_ranks(vec![7, 2, 11, 0, 5, 9, 1, 10, 3, 6, 8, 4]).unwrap();
        let baseline = simple_minmax(&element_ids(n), k, &mut truthful(&order)).unwrap();
        // last verification query of the second group
        let second = &baseline.stats.attempts[1];
        let trigger = second.first_query + second.sort_queries + second.verify_queries - 1;
        let mut liar = triggered(&order, k, &[trigger]);
        let r = simple_minmax(&element_ids(n), k, &mut liar).unwrap();
        assert_eq!(r.stats.restarts, 1);
        let restarted: Vec<usize> = r.stats.attempts.iter().filter(|a| !a.completed).map(|a| a.group).collect();
        assert_eq!(restarted, vec![1]);
        assert_eq!(r.min, ElementId(3));
        assert_eq!(r.max, ElementId(2));
    }

    #[test]
    fn improved_zero_lies_is_pohl() {
        let order = TotalOrder::from_ranks(vec![4, 0, 3, 1, 2]).unwrap();
        let r = improved_minmax(&element_ids(5), 0, &mut truthful(&order)).unwrap();
        assert_eq!(r.stats.comparisons, 6);
        assert_eq!((r.min, r.max), (ElementId(1), ElementId(0)));
    }

    #[test]
    fn improved_rejects_oversized_groups() {
        let order = TotalOrder::identity(10);
        let opts = MinMaxOptions::with_group_size(5);
        assert!(improved_minmax_with(&element_ids(10), 2, &mut truthful(&order), &opts).is_err());
    }

    #[test]
    fn improved_per_group_attempt_bound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for k in [1, 2, 4, 6, 9] {
            let n = 60;
            let order = TotalOrder::random(n, &mut rng);
            let r = improved_minmax(&element_ids(n), k, &mut truthful(&order)).unwrap();
            assert_eq!(Some(r.min), order.min_of(&element_ids(n)));
            assert_eq!(Some(r.max), order.max_of(&element_ids(n)));
            assert_eq!(r.stats.restarts, 0);
            for a in &r.stats.attempts {
                let t = a.sort_thickness.unwrap();
                assert!(a.sort_queries + a.verify_queries <= (k + 1) * (a.size - 1) + t);
            }
        }
    }

    #[test]
    fn improved_restarts_on_verification_lie() {
        let k = 5;
        let n = 17;
        let order = TotalOrder::from_ranks((0..n).rev().collect()).unwrap();
        let baseline = improved_minmax(&element_ids(n), k, &mut truthful(&order)).unwrap();
        let first = &baseline.stats.attempts[0];
        let trigger = first.first_query + first.sort_queries;
        let mut liar = triggered(&order, k, &[trigger]);
        let r = improved_minmax(&element_ids(n), k, &mut liar).unwrap();
        assert_eq!(r.stats.restarts, 1);
        assert_eq!((r.min, r.max), (ElementId(n - 1), ElementId(0)));
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("quick".parse::<Algorithm>().is_err());
    }
}
