//! Ground truth, transcripts and lie accounting.
//!
//! Every oracle in this crate answers relative to a hidden [`TotalOrder`].
//! The order is stored as a rank array rather than a comparator so that
//! checking a single transcript record is one array lookup.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Dense index of an element, `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Convenience: the ids `0..n` in order.
pub fn element_ids(n: usize) -> Vec<ElementId> {
    (0..n).map(ElementId).collect()
}

/// Hidden ranking of `n` elements: `rank[e]` is the ascending position of `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TotalOrder {
    rank: Vec<usize>,
}

impl TotalOrder {
    pub fn from_ranks(rank: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; rank.len()];
        for &r in &rank {
            if r >= rank.len() || std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidInput(format!(
                    "rank array {rank:?} is not a permutation"
                )));
            }
        }
        Ok(Self { rank })
    }

    /// Builds the order in which `ascending[0]` is the smallest element.
    pub fn from_ascending(ascending: &[ElementId]) -> Result<Self> {
        let n = ascending.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, e) in ascending.iter().enumerate() {
            if e.0 >= n || rank[e.0] != usize::MAX {
                return Err(Error::InvalidInput(format!(
                    "{ascending:?} is not a permutation of 0..{n}"
                )));
            }
            rank[e.0] = pos;
        }
        Ok(Self { rank })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rank: (0..n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut rank: Vec<usize> = (0..n).collect();
        rank.shuffle(rng);
        Self { rank }
    }

    /// All `n!` orders, in lexicographic order of their rank arrays.
    pub fn all(n: usize) -> Vec<TotalOrder> {
        use itertools::Itertools;
        (0..n)
            .permutations(n)
            .map(|rank| TotalOrder { rank })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, e: ElementId) -> usize {
        self.rank[e.0]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e.0 < self.rank.len()
    }

    /// Element ids sorted ascending by this order.
    pub fn ascending(&self) -> Vec<ElementId> {
        let mut out = vec![ElementId(0); self.rank.len()];
        for (e, &r) in self.rank.iter().enumerate() {
            out[r] = ElementId(e);
        }
        out
    }

    /// Minimum of `items` under this order.
    pub fn min_of(&self, items: &[ElementId]) -> Option<ElementId> {
        items.iter().copied().min_by_key(|&e| self.rank(e))
    }

    pub fn max_of(&self, items: &[ElementId]) -> Option<ElementId> {
        items.iter().copied().max_by_key(|&e| self.rank(e))
    }
}

/// Oracle verdict about an ordered query `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    FirstSmaller,
    FirstLarger,
}

impl Answer {
    pub fn flipped(self) -> Self {
        match self {
            Answer::FirstSmaller => Answer::FirstLarger,
            Answer::FirstLarger => Answer::FirstSmaller,
        }
    }

    pub fn first_is_smaller(self) -> bool {
        self == Answer::FirstSmaller
    }
}

pub fn truth_compare(order: &TotalOrder, a: ElementId, b: ElementId) -> Result<Answer> {
    if a == b {
        return Err(Error::InvalidQuery(a));
    }
    Ok(if order.rank(a) < order.rank(b) {
        Answer::FirstSmaller
    } else {
        Answer::FirstLarger
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryRecord {
    pub index: usize,
    pub a: ElementId,
    pub b: ElementId,
    pub answer: Answer,
}

impl QueryRecord {
    /// Whether this record contradicts `order`.
    pub fn is_lie(&self, order: &TotalOrder) -> bool {
        let truthful = order.rank(self.a) < order.rank(self.b);
        truthful != self.answer.first_is_smaller()
    }
}

/// Append-only log of oracle queries. Indices are always `0, 1, 2, ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    records: Vec<QueryRecord>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record and returns its index.
    pub fn push(&mut self, a: ElementId, b: ElementId, answer: Answer) -> usize {
        let index = self.records.len();
        self.records.push(QueryRecord {
            index,
            a,
            b,
            answer,
        });
        index
    }

    pub fn records(&self) -> &[QueryRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records with indices in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> &[QueryRecord] {
        &self.records[range]
    }
}

impl FromIterator<(ElementId, ElementId, Answer)> for Transcript {
    fn from_iter<I: IntoIterator<Item = (ElementId, ElementId, Answer)>>(iter: I) -> Self {
        let mut t = Transcript::new();
        for (a, b, answer) in iter {
            t.push(a, b, answer);
        }
        t
    }
}

pub fn count_lies(t: &Transcript, order: &TotalOrder) -> usize {
    t.records().iter().filter(|r| r.is_lie(order)).count()
}

/// Fails with [`Error::LieBudgetExceeded`] when the transcript holds more
/// than `k` lies relative to `order`. A failure means the oracle broke its
/// contract, not that an algorithm is wrong.
pub fn assert_lie_budget(t: &Transcript, order: &TotalOrder, k: usize) -> Result<()> {
    let lies = count_lies(t, order);
    if lies > k {
        Err(Error::LieBudgetExceeded { lies, budget: k })
    } else {
        Ok(())
    }
}

/// Phases of a min-max run used for comparison accounting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    GroupSort,
    GroupVerify,
    FinalMin,
    FinalMax,
}

impl Phase {
    pub const ALL: [Phase; 4] = [
        Phase::GroupSort,
        Phase::GroupVerify,
        Phase::FinalMin,
        Phase::FinalMax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::GroupSort => "group-sort",
            Phase::GroupVerify => "group-verify",
            Phase::FinalMin => "final-min",
            Phase::FinalMax => "final-max",
        }
    }
}

/// One pass of the sort-and-verify pipeline over a single group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAttempt {
    pub group: usize,
    pub size: usize,
    pub sort_queries: usize,
    pub verify_queries: usize,
    /// Thickness of the sort graph, when the sort finished.
    pub sort_thickness: Option<usize>,
    /// First transcript index used by this attempt.
    pub first_query: usize,
    pub completed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub comparisons: usize,
    pub restarts: usize,
    pub phase_breakdown: BTreeMap<Phase, usize>,
    pub attempts: Vec<GroupAttempt>,
}

impl RunStats {
    pub fn record(&mut self, phase: Phase, queries: usize) {
        self.comparisons += queries;
        *self.phase_breakdown.entry(phase).or_default() += queries;
    }

    pub fn phase(&self, phase: Phase) -> usize {
        self.phase_breakdown.get(&phase).copied().unwrap_or(0)
    }

    /// Checks `comparisons == sum(phase_breakdown)`.
    pub fn is_balanced(&self) -> bool {
        self.phase_breakdown.values().sum::<usize>() == self.comparisons
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> ElementId {
        ElementId(i)
    }

    #[test]
    fn truth_compare_examples() {
        let o = TotalOrder::from_ranks(vec![0, 1]).unwrap();
        assert_eq!(truth_compare(&o, e(0), e(1)).unwrap(), Answer::FirstSmaller);
        let o = TotalOrder::from_ranks(vec![1, 0]).unwrap();
        assert_eq!(truth_compare(&o, e(0), e(1)).unwrap(), Answer::FirstLarger);
        let o = TotalOrder::from_ranks(vec![2, 0, 1]).unwrap();
        assert_eq!(truth_compare(&o, e(2), e(0)).unwrap(), Answer::FirstSmaller);
    }

    #[test]
    fn truth_compare_rejects_self_query() {
        let o = TotalOrder::identity(3);
        assert!(matches!(
            truth_compare(&o, e(1), e(1)),
            Err(Error::InvalidQuery(ElementId(1)))
        ));
    }

    #[test]
    fn rank_array_must_be_permutation() {
        assert!(TotalOrder::from_ranks(vec![0, 0]).is_err());
        assert!(TotalOrder::from_ranks(vec![0, 2]).is_err());
        assert!(TotalOrder::from_ascending(&[e(1), e(1)]).is_err());
    }

    #[test]
    fn ascending_inverts_rank() {
        let o = TotalOrder::from_ranks(vec![2, 0, 1]).unwrap();
        assert_eq!(o.ascending(), vec![e(1), e(2), e(0)]);
        assert_eq!(TotalOrder::from_ascending(&o.ascending()).unwrap(), o);
        assert_eq!(o.min_of(&element_ids(3)), Some(e(1)));
        assert_eq!(o.max_of(&element_ids(3)), Some(e(0)));
    }

    #[test]
    fn count_lies_examples() {
        let o = TotalOrder::identity(3);
        assert_eq!(count_lies(&Transcript::new(), &o), 0);

        let t: Transcript = [(e(0), e(1), Answer::FirstSmaller)].into_iter().collect();
        assert_eq!(count_lies(&t, &o), 0);

        let t: Transcript = [
            (e(0), e(1), Answer::FirstSmaller),
            (e(2), e(1), Answer::FirstSmaller),
            (e(0), e(2), Answer::FirstSmaller),
        ]
        .into_iter()
        .collect();
        assert_eq!(count_lies(&t, &o), 1);
    }

    #[test]
    fn lie_budget_examples() {
        let o = TotalOrder::identity(2);
        let truthful: Transcript = [(e(0), e(1), Answer::FirstSmaller)].into_iter().collect();
        assert!(assert_lie_budget(&truthful, &o, 0).is_ok());

        let two_lies: Transcript = [
            (e(0), e(1), Answer::FirstLarger),
            (e(1), e(0), Answer::FirstSmaller),
        ]
        .into_iter()
        .collect();
        assert!(matches!(
            assert_lie_budget(&two_lies, &o, 1),
            Err(Error::LieBudgetExceeded { lies: 2, budget: 1 })
        ));
        assert!(assert_lie_budget(&two_lies, &o, 2).is_ok());
    }

    #[test]
    fn repeated_queries_are_separate_records() {
        let mut t = Transcript::new();
        assert_eq!(t.push(e(0), e(1), Answer::FirstLarger), 0);
        assert_eq!(t.push(e(0), e(1), Answer::FirstLarger), 1);
        assert_eq!(count_lies(&t, &TotalOrder::identity(2)), 2);
    }

    #[test]
    fn all_orders_of_three() {
        let all = TotalOrder::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], TotalOrder::identity(3));
    }

    #[test]
    fn run_stats_balance() {
        let mut s = RunStats::default();
        s.record(Phase::GroupSort, 3);
        s.record(Phase::FinalMin, 2);
        s.record(Phase::GroupSort, 1);
        assert_eq!(s.comparisons, 6);
        assert_eq!(s.phase(Phase::GroupSort), 4);
        assert_eq!(s.phase(Phase::GroupVerify), 0);
        assert!(s.is_balanced());
    }

    proptest::proptest! {
        #[test]
        fn truth_compare_is_antisymmetric(seed in 0u64..1000, n in 2usize..20) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let o = TotalOrder::random(n, &mut rng);
            for a in 0..n {
                for b in 0..n {
                    if a == b { continue; }
                    let ab = truth_compare(&o, e(a), e(b)).unwrap();
                    let ba = truth_compare(&o, e(b), e(a)).unwrap();
                    proptest::prop_assert_eq!(ab, ba.flipped());
                }
            }
        }
    }
}
