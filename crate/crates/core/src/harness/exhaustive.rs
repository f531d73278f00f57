//! Worst-case verification by walking the whole adversary game tree.
//!
//! A node of the tree is a prefix of oracle answers. The algorithm is
//! re-run against a [`ScriptedOracle`] that replays the prefix and answers
//! `FirstSmaller` past its end; every answer along the resulting run that
//! differs from the alternative spawns a sibling branch. Branches whose
//! transcript no order of `n` elements explains with at most `k` lies are
//! pruned. At each leaf the reported extrema must match those of every
//! order that still explains the transcript.

use crate::error::{Error, Result};
use crate::minmax::{Algorithm, Extrema, MinMaxOptions};
use crate::model::{element_ids, Answer, ElementId, TotalOrder, Transcript};
use crate::oracle::Oracle;

/// Largest `n` accepted by [`verify_exhaustive`].
pub const MAX_N: usize = 5;
/// Largest `k` accepted by [`verify_exhaustive`].
pub const MAX_K: usize = 2;

/// Oracle replaying a fixed answer script, then answering `FirstSmaller`.
#[derive(Clone, Debug, Default)]
pub struct ScriptedOracle {
    script: Vec<Answer>,
    transcript: Transcript,
}

impl ScriptedOracle {
    pub fn new(script: Vec<Answer>) -> Self {
        Self {
            script,
            transcript: Transcript::new(),
        }
    }
}

impl Oracle for ScriptedOracle {
    fn query(&mut self, a: ElementId, b: ElementId) -> Result<Answer> {
        if a == b {
            return Err(Error::InvalidQuery(a));
        }
        let answer = self
            .script
            .get(self.transcript.len())
            .copied()
            .unwrap_or(Answer::FirstSmaller);
        self.transcript.push(a, b, answer);
        Ok(answer)
    }

    fn transcript(&self) -> &Transcript {
        &self.transcript
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub transcript: Transcript,
    pub reported_min: Option<ElementId>,
    pub reported_max: Option<ElementId>,
    /// A consistent order the report is wrong for (absent when the
    /// algorithm failed outright).
    pub order: Option<TotalOrder>,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Pass { leaves: usize },
    Counterexample(Box<Counterexample>),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

/// Lie counts of every order, updated answer by answer.
struct Consistency<'a> {
    orders: &'a [TotalOrder],
    lies: Vec<usize>,
    k: usize,
}

impl<'a> Consistency<'a> {
    fn new(orders: &'a [TotalOrder], k: usize) -> Self {
        Self {
            orders,
            lies: vec![0; orders.len()],
            k,
        }
    }

    fn lies_after(&self, i: usize, a: ElementId, b: ElementId, answer: Answer) -> usize {
        let o = &self.orders[i];
        self.lies[i] + usize::from((o.rank(a) < o.rank(b)) != answer.first_is_smaller())
    }

    fn viable(&self, a: ElementId, b: ElementId, answer: Answer) -> bool {
        (0..self.orders.len()).any(|i| self.lies_after(i, a, b, answer) <= self.k)
    }

    fn apply(&mut self, a: ElementId, b: ElementId, answer: Answer) {
        for i in 0..self.orders.len() {
            self.lies[i] = self.lies_after(i, a, b, answer);
        }
    }

    fn survivors(&self) -> impl Iterator<Item = &TotalOrder> {
        self.orders
            .iter()
            .zip(&self.lies)
            .filter(|(_, &l)| l <= self.k)
            .map(|(o, _)| o)
    }
}

/// Explores every adversary strategy for `algorithm` on `n` elements with
/// at most `k` lies.
pub fn verify_exhaustive(
    n: usize,
    k: usize,
    algorithm: Algorithm,
    options: &MinMaxOptions,
) -> Result<Verdict> {
    if n > MAX_N {
        return Err(Error::CapExceeded { n, cap: MAX_N });
    }
    if k > MAX_K {
        return Err(Error::InvalidInput(format!(
            "exhaustive verification limited to k <= {MAX_K}, got {k}"
        )));
    }
    verify_game_tree(
        n,
        k,
        algorithm.reports_min(),
        algorithm.reports_max(),
        |items, oracle| algorithm.run(items, k, oracle, options),
    )
}

/// Game-tree walk behind [`verify_exhaustive`] for an arbitrary selection
/// procedure. Only the sides flagged by `check_min` / `check_max` are
/// compared against the surviving orders.
pub fn verify_game_tree<F>(n: usize, k: usize, check_min: bool, check_max: bool, mut run: F) -> Result<Verdict>
where
    F: FnMut(&[ElementId], &mut ScriptedOracle) -> Result<Extrema>,
{
    if n > crate::oracle::EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: crate::oracle::EXHAUSTIVE_CAP,
        });
    }
    let items = element_ids(n);
    let orders = TotalOrder::all(n);
    let mut pending: Vec<Vec<Answer>> = vec![Vec::new()];
    let mut leaves = 0;

    while let Some(prefix) = pending.pop() {
        let mut oracle = ScriptedOracle::new(prefix.clone());
        let run = run(&items, &mut oracle);
        let records = oracle.transcript().records();

        let mut state = Consistency::new(&orders, k);
        let mut consistent_to_end = true;
        for (i, r) in records.iter().enumerate() {
            if i >= prefix.len() {
                let alternative = r.answer.flipped();
                if state.viable(r.a, r.b, alternative) {
                    let mut branch: Vec<Answer> = records[..i].iter().map(|r| r.answer).collect();
                    branch.push(alternative);
                    pending.push(branch);
                }
            }
            if !state.viable(r.a, r.b, r.answer) {
                consistent_to_end = false;
                break;
            }
            state.apply(r.a, r.b, r.answer);
        }
        if !consistent_to_end {
            continue;
        }

        leaves += 1;
        let counterexample = |order: Option<&TotalOrder>, min, max, error| {
            Verdict::Counterexample(Box::new(Counterexample {
                transcript: oracle.transcript().clone(),
                reported_min: min,
                reported_max: max,
                order: order.cloned(),
                error,
            }))
        };
        let extrema = match run {
            Ok(extrema) => extrema,
            Err(e) => return Ok(counterexample(None, None, None, Some(e.to_string()))),
        };
        for order in state.survivors() {
            let wrong_min = check_min && extrema.min != order.min_of(&items);
            let wrong_max = check_max && extrema.max != order.max_of(&items);
            if wrong_min || wrong_max {
                return Ok(counterexample(Some(order), extrema.min, extrema.max, None));
            }
        }
    }
    Ok(Verdict::Pass { leaves })
}
