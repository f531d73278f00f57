//! Seeded experiment runs with comparison-count bound checks.

use std::fmt;
use std::io::Write;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::ceil_log2;
use crate::error::{Error, Result};
use crate::minmax::{default_group_size, Algorithm, Extrema, MinMaxOptions};
use crate::model::{assert_lie_budget, element_ids, TotalOrder, Transcript};
use crate::oracle::{LyingOracle, Oracle, Strategy};

/// Constant added to `k + 1` per element in the improved algorithm's
/// regression bound.
pub const IMPROVED_LINEAR_SLACK: usize = 10;
/// Coefficient of `k^3` in the improved algorithm's regression bound.
pub const IMPROVED_CUBIC_SLACK: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub enum OracleSpec {
    Truthful,
    RandomLiar { p: f64 },
    TriggeredLiar { indices: Vec<usize> },
}

impl OracleSpec {
    fn strategy(&self, seed: u64) -> Strategy {
        match self {
            OracleSpec::Truthful => Strategy::Truthful,
            OracleSpec::RandomLiar { p } => Strategy::RandomLiar { p: *p, seed },
            OracleSpec::TriggeredLiar { indices } => Strategy::TriggeredLiar {
                triggers: indices.iter().copied().collect(),
            },
        }
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleSpec::Truthful => f.write_str("truthful"),
            OracleSpec::RandomLiar { p } => write!(f, "random-liar(p={p})"),
            OracleSpec::TriggeredLiar { indices } => {
                let list: Vec<String> = indices.iter().map(usize::to_string).collect();
                write!(f, "triggered-liar({})", list.join(";"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub oracle: OracleSpec,
    pub trials: usize,
    pub seed: u64,
    pub options: MinMaxOptions,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, n: usize, k: usize, oracle: OracleSpec) -> Self {
        Self {
            algorithm,
            n,
            k,
            oracle,
            trials: 1,
            seed: 0,
            options: MinMaxOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if let OracleSpec::RandomLiar { p } = self.oracle {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidInput(format!("p = {p} not in [0, 1]")));
            }
        }
        Ok(())
    }

    /// Child seed of every trial, derived from the root seed.
    pub fn trial_seeds(&self) -> Vec<u64> {
        let mut root = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.trials).map(|_| root.next_u64()).collect()
    }
}

/// Fixed CSV schema: `algorithm,n,k,oracle,seed,comparisons,restarts,bound,within_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub algorithm: String,
    pub n: usize,
    pub k: usize,
    pub oracle: String,
    pub seed: u64,
    pub comparisons: usize,
    pub restarts: usize,
    pub bound: usize,
    pub within_bound: bool,
}

/// A row plus what the CSV does not carry.
#[derive(Clone, Debug)]
pub struct TrialReport {
    pub row: ExperimentRow,
    pub hidden_order: TotalOrder,
    pub transcript: Transcript,
    pub lies_told: usize,
    pub correct: bool,
    pub extrema: Extrema,
}

/// Worst-case comparison count allowed for `algorithm` on `n` elements.
pub fn comparison_bound(algorithm: Algorithm, n: usize, k: usize, options: &MinMaxOptions) -> usize {
    match algorithm {
        Algorithm::Pohl => (3 * n).div_ceil(2).saturating_sub(2),
        Algorithm::FindMin | Algorithm::FindMax => ((k + 1) * n).saturating_sub(1),
        Algorithm::Improved => (k + 1 + IMPROVED_LINEAR_SLACK) * n + IMPROVED_CUBIC_SLACK * k.pow(3),
        Algorithm::Simple => simple_bound(n, k, options.s_override.unwrap_or_else(|| default_group_size(k))),
    }
}

/// Sort-and-verify cost of every group, plus `k` full restarts of a
/// largest group, plus the two final selections.
fn simple_bound(n: usize, k: usize, s: usize) -> usize {
    let group_cost = |size: usize| size * ceil_log2(size) + (k + 1) * size.saturating_sub(1);
    let groups = n.div_ceil(s);
    let per_groups: usize = (0..groups).map(|g| group_cost(s.min(n - g * s))).sum();
    per_groups + k * group_cost(s.min(n)) + 2 * ((k + 1) * groups).saturating_sub(1)
}

pub fn run_trial(cfg: &ExperimentConfig, trial_seed: u64) -> Result<TrialReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let hidden_order = TotalOrder::random(cfg.n, &mut rng);
    let strategy = cfg.oracle.strategy(rng.next_u64());
    let mut oracle = LyingOracle::new(hidden_order.clone(), cfg.k, strategy)?;
    let items = element_ids(cfg.n);
    let extrema = cfg.algorithm.run(&items, cfg.k, &mut oracle, &cfg.options)?;
    assert_lie_budget(oracle.transcript(), &hidden_order, cfg.k)?;

    let correct = (!cfg.algorithm.reports_min() || extrema.min == hidden_order.min_of(&items))
        && (!cfg.algorithm.reports_max() || extrema.max == hidden_order.max_of(&items));
    let bound = comparison_bound(cfg.algorithm, cfg.n, cfg.k, &cfg.options);
    let comparisons = oracle.queries();
    let row = ExperimentRow {
        algorithm: cfg.algorithm.name().to_string(),
        n: cfg.n,
        k: cfg.k,
        oracle: cfg.oracle.to_string(),
        seed: trial_seed,
        comparisons,
        restarts: extrema.stats.restarts,
        bound,
        within_bound: comparisons <= bound,
    };
    Ok(TrialReport {
        row,
        hidden_order,
        transcript: oracle.transcript().clone(),
        lies_told: oracle.lies_told(),
        correct,
        extrema,
    })
}

/// All trials of `cfg`, in trial order. Trials run in parallel.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialReport>> {
    cfg.validate()?;
    cfg.trial_seeds()
        .into_par_iter()
        .map(|seed| run_trial(cfg, seed))
        .collect()
}

/// One CSV row per trial. A wrong extremum is an error: every oracle here
/// honours its lie budget.
pub fn run_experiments(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    run_trials(cfg)?
        .into_iter()
        .map(|report| {
            if report.correct {
                Ok(report.row)
            } else {
                Err(Error::WrongResult {
                    algorithm: report.row.algorithm,
                    seed: report.row.seed,
                })
            }
        })
        .collect()
}

pub fn write_csv<W: Write, T: Serialize>(rows: &[T], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pohl_four_truthful() {
        let cfg = ExperimentConfig::new(Algorithm::Pohl, 4, 0, OracleSpec::Truthful);
        let rows = run_experiments(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].comparisons, 4);
        assert_eq!(rows[0].bound, 4);
        assert!(rows[0].within_bound);
    }

    #[test]
    fn find_min_random_liar() {
        let mut cfg = ExperimentConfig::new(Algorithm::FindMin, 100, 2, OracleSpec::RandomLiar { p: 0.3 });
        cfg.trials = 20;
        cfg.seed = 7;
        for report in run_trials(&cfg).unwrap() {
            assert!(report.correct);
            assert!(report.row.comparisons <= 299);
            assert_eq!(report.row.bound, 299);
        }
    }

    #[test]
    fn csv_is_byte_stable() {
        let mut cfg = ExperimentConfig::new(Algorithm::Improved, 40, 4, OracleSpec::RandomLiar { p: 0.2 });
        cfg.trials = 8;
        cfg.seed = 99;
        let render = || {
            let mut buf = Vec::new();
            write_csv(&run_experiments(&cfg).unwrap(), &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let first = render();
        assert_eq!(first, render());
        assert!(first.starts_with("algorithm,n,k,oracle,seed,comparisons,restarts,bound,within_bound\n"));
        assert_eq!(first.lines().count(), 9);
    }

    #[test]
    fn oracle_labels() {
        assert_eq!(OracleSpec::Truthful.to_string(), "truthful");
        assert_eq!(OracleSpec::RandomLiar { p: 0.5 }.to_string(), "random-liar(p=0.5)");
        assert_eq!(
            OracleSpec::TriggeredLiar { indices: vec![3, 7] }.to_string(),
            "triggered-liar(3;7)"
        );
    }

    #[test]
    fn validation() {
        let cfg = ExperimentConfig::new(Algorithm::Pohl, 0, 0, OracleSpec::Truthful);
        assert!(run_experiments(&cfg).is_err());
        let cfg = ExperimentConfig::new(Algorithm::FindMin, 5, 1, OracleSpec::RandomLiar { p: 2.0 });
        assert!(run_experiments(&cfg).is_err());
    }

    #[test]
    fn bounds() {
        let opts = MinMaxOptions::default();
        assert_eq!(comparison_bound(Algorithm::Pohl, 5, 0, &opts), 6);
        assert_eq!(comparison_bound(Algorithm::FindMax, 3, 1, &opts), 5);
        assert_eq!(comparison_bound(Algorithm::Improved, 100, 2, &opts), 13 * 100 + 8000);
        // n = 2, k = 1: one group costing 2 + 2, one restart of it, and the
        // two final selections over one element each
        assert_eq!(comparison_bound(Algorithm::Simple, 2, 1, &opts), 4 + 4 + 2);
    }

    #[test]
    fn simple_within_bound_under_lies() {
        for k in 1..=5 {
            let mut cfg = ExperimentConfig::new(Algorithm::Simple, 57, k, OracleSpec::RandomLiar { p: 0.2 });
            cfg.trials = 10;
            cfg.seed = k as u64;
            for row in run_experiments(&cfg).unwrap() {
                assert!(row.within_bound, "{row:?}");
                assert!(row.restarts <= k);
            }
        }
    }
}
