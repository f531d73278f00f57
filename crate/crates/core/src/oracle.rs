//! Lying comparison oracles.
//!
//! An oracle answers "is `a` smaller than `b`?" relative to a hidden
//! [`TotalOrder`] and may answer falsely at most `k` times over its whole
//! lifetime. Every answer is logged in a [`Transcript`].

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{count_lies, truth_compare, Answer, ElementId, TotalOrder, Transcript};

/// Largest `n` for which the adaptive adversary and the exhaustive
/// consistency check enumerate all `n!` orders.
pub const EXHAUSTIVE_CAP: usize = 6;

pub trait Oracle {
    fn query(&mut self, a: ElementId, b: ElementId) -> Result<Answer>;

    fn transcript(&self) -> &Transcript;

    /// Number of queries answered so far.
    fn queries(&self) -> usize {
        self.transcript().len()
    }

    /// `true` iff the oracle claims `a < b`.
    fn less(&mut self, a: ElementId, b: ElementId) -> Result<bool> {
        Ok(self.query(a, b)?.first_is_smaller())
    }
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn query(&mut self, a: ElementId, b: ElementId) -> Result<Answer> {
        (**self).query(a, b)
    }

    fn transcript(&self) -> &Transcript {
        (**self).transcript()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    Truthful,
    /// Lies independently with probability `p` until the budget is spent.
    RandomLiar { p: f64, seed: u64 },
    /// Lies exactly on the listed global query indices, budget permitting.
    TriggeredLiar { triggers: BTreeSet<usize> },
    /// Online adversary; keeps the larger set of consistent orders.
    Adaptive,
}

/// Orders still consistent with the transcript, each with its lie count.
#[derive(Clone, Debug)]
pub struct AdversaryState {
    candidates: Vec<(TotalOrder, usize)>,
}

impl AdversaryState {
    fn new(n: usize) -> Result<Self> {
        if n > EXHAUSTIVE_CAP {
            return Err(Error::CapExceeded {
                n,
                cap: EXHAUSTIVE_CAP,
            });
        }
        Ok(Self {
            candidates: TotalOrder::all(n).into_iter().map(|o| (o, 0)).collect(),
        })
    }

    fn survivors(&self, a: ElementId, b: ElementId, answer: Answer, k: usize) -> usize {
        self.candidates
            .iter()
            .filter(|(o, lies)| {
                let truthful = o.rank(a) < o.rank(b);
                lies + usize::from(truthful != answer.first_is_smaller()) <= k
            })
            .count()
    }

    fn choose(&mut self, a: ElementId, b: ElementId, k: usize) -> Answer {
        let smaller = self.survivors(a, b, Answer::FirstSmaller, k);
        let larger = self.survivors(a, b, Answer::FirstLarger, k);
        let answer = if larger > smaller {
            Answer::FirstLarger
        } else {
            Answer::FirstSmaller
        };
        self.candidates.retain_mut(|(o, lies)| {
            let truthful = o.rank(a) < o.rank(b);
            *lies += usize::from(truthful != answer.first_is_smaller());
            *lies <= k
        });
        answer
    }

    pub fn candidates(&self) -> &[(TotalOrder, usize)] {
        &self.candidates
    }

    /// A consistent order using the fewest lies (first such in enumeration order).
    fn witness(&self) -> &(TotalOrder, usize) {
        self.candidates
            .iter()
            .min_by_key(|(_, lies)| *lies)
            .expect("adversary candidate set is never empty")
    }
}

#[derive(Clone, Debug)]
enum Behavior {
    Truthful,
    Random { p: f64, rng: Box<ChaCha8Rng> },
    Triggered { triggers: BTreeSet<usize> },
    Adaptive(AdversaryState),
}

/// Concrete oracle over a hidden order with a lie budget.
#[derive(Clone, Debug)]
pub struct LyingOracle {
    hidden: TotalOrder,
    budget: usize,
    lies_told: usize,
    transcript: Transcript,
    behavior: Behavior,
}

impl LyingOracle {
    pub fn new(hidden: TotalOrder, budget: usize, strategy: Strategy) -> Result<Self> {
        let behavior = match strategy {
            Strategy::Truthful => Behavior::Truthful,
            Strategy::RandomLiar { p, seed } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidInput(format!("lie probability {p} not in [0, 1]")));
                }
                Behavior::Random {
                    p,
                    rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
                }
            }
            Strategy::TriggeredLiar { triggers } => Behavior::Triggered { triggers },
            Strategy::Adaptive => Behavior::Adaptive(AdversaryState::new(hidden.len())?),
        };
        Ok(Self {
            hidden,
            budget,
            lies_told: 0,
            transcript: Transcript::new(),
            behavior,
        })
    }

    pub fn truthful(hidden: TotalOrder) -> Self {
        Self::new(hidden, 0, Strategy::Truthful).expect("truthful oracle is always valid")
    }

    /// Adaptive adversary over `n <= 6` elements.
    pub fn adaptive(n: usize, budget: usize) -> Result<Self> {
        Self::new(TotalOrder::identity(n), budget, Strategy::Adaptive)
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn lies_told(&self) -> usize {
        match &self.behavior {
            Behavior::Adaptive(state) => state.witness().1,
            _ => self.lies_told,
        }
    }

    /// The order answers are judged against. For the adaptive adversary
    /// this is a consistent order with the fewest lies.
    pub fn hidden_order(&self) -> &TotalOrder {
        match &self.behavior {
            Behavior::Adaptive(state) => &state.witness().0,
            _ => &self.hidden,
        }
    }

    pub fn adversary(&self) -> Option<&AdversaryState> {
        match &self.behavior {
            Behavior::Adaptive(state) => Some(state),
            _ => None,
        }
    }
}

impl Oracle for LyingOracle {
    fn query(&mut self, a: ElementId, b: ElementId) -> Result<Answer> {
        for e in [a, b] {
            if !self.hidden.contains(e) {
                return Err(Error::InvalidInput(format!(
                    "element {e} not in 0..{}",
                    self.hidden.len()
                )));
            }
        }
        let truth = truth_compare(&self.hidden, a, b)?;
        let index = self.transcript.len();
        let can_lie = self.lies_told < self.budget;
        let answer = match &mut self.behavior {
            Behavior::Truthful => truth,
            Behavior::Random { p, rng } => {
                if can_lie && rng.gen_bool(*p) {
                    truth.flipped()
                } else {
                    truth
                }
            }
            Behavior::Triggered { triggers } => {
                if can_lie && triggers.contains(&index) {
                    truth.flipped()
                } else {
                    truth
                }
            }
            Behavior::Adaptive(state) => state.choose(a, b, self.budget),
        };
        if answer != truth {
            self.lies_told += 1;
        }
        self.transcript.push(a, b, answer);
        Ok(answer)
    }

    fn transcript(&self) -> &Transcript {
        &self.transcript
    }
}

/// Every order of `n` elements explaining `t` with at most `k` lies.
pub fn adversary_consistent_orders(t: &Transcript, n: usize, k: usize) -> Result<Vec<TotalOrder>> {
    if n > EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: EXHAUSTIVE_CAP,
        });
    }
    Ok(TotalOrder::all(n)
        .into_iter()
        .filter(|o| count_lies(t, o) <= k)
        .collect())
}
