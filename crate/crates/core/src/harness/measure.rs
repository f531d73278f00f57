//! Thickness measurement and sorter calibration.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::{ceil_log2, Calibration};
use crate::error::Result;
use crate::model::{element_ids, TotalOrder};
use crate::oracle::LyingOracle;
use crate::sort::{SortBudget, Sorter};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThicknessRow {
    pub sorter: Sorter,
    pub s: usize,
    pub trials: usize,
    pub min_thickness: usize,
    pub mean_thickness: f64,
    pub max_thickness: usize,
    pub max_comparisons: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SortSample {
    pub thickness: usize,
    pub comparisons: usize,
}

/// Sorts `order.ascending()`'s elements, presented as ids `0..s`, with a
/// truthful oracle and no budget.
pub fn sample(sorter: Sorter, order: &TotalOrder) -> Result<SortSample> {
    let mut oracle = LyingOracle::truthful(order.clone());
    let out = sorter.sort(&element_ids(order.len()), &mut oracle, SortBudget::unlimited())?;
    Ok(SortSample {
        thickness: out.graph.thickness(),
        comparisons: out.comparisons,
    })
}

/// `trials` random permutations of size `s`, seeded from `seed`.
pub fn samples(sorter: Sorter, s: usize, trials: usize, seed: u64) -> Result<Vec<SortSample>> {
    let mut root = ChaCha8Rng::seed_from_u64(seed ^ (s as u64).rotate_left(32));
    let seeds: Vec<u64> = (0..trials).map(|_| root.next_u64()).collect();
    seeds
        .into_par_iter()
        .map(|seed| {
            let order = TotalOrder::random(s, &mut ChaCha8Rng::seed_from_u64(seed));
            sample(sorter, &order)
        })
        .collect()
}

/// One row per size: min, mean and max thickness over random inputs.
pub fn measure_thickness(sorter: Sorter, s_values: &[usize], trials: usize, seed: u64) -> Result<Vec<ThicknessRow>> {
    s_values
        .iter()
        .map(|&s| {
            let runs = samples(sorter, s, trials, seed)?;
            let thickness = runs.iter().map(|r| r.thickness);
            Ok(ThicknessRow {
                sorter,
                s,
                trials: runs.len(),
                min_thickness: thickness.clone().min().unwrap_or(0),
                mean_thickness: thickness.clone().sum::<usize>() as f64 / runs.len().max(1) as f64,
                max_thickness: thickness.max().unwrap_or(0),
                max_comparisons: runs.iter().map(|r| r.comparisons).max().unwrap_or(0),
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CalibrateConfig {
    /// Sizes covered by all `s!` permutations.
    pub exhaustive_max_s: usize,
    /// Sizes covered by random permutations.
    pub random_s_values: Vec<usize>,
    pub random_trials: usize,
    pub seed: u64,
}

impl Default for CalibrateConfig {
    fn default() -> Self {
        Self {
            exhaustive_max_s: 8,
            random_s_values: (4..=12).map(|e| 1 << e).collect(),
            random_trials: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationPoint {
    pub s: usize,
    pub permutations: usize,
    pub max_comparisons: usize,
    pub max_thickness: usize,
}

#[derive(Clone, Debug)]
pub struct CalibrationReport {
    pub points: Vec<CalibrationPoint>,
    /// Constants in force when the measurement ran.
    pub current: Calibration,
    /// Smallest constants of the same shape covering every observation.
    pub fitted: Calibration,
}

impl CalibrationReport {
    /// Whether the current budget covers every observed truthful run and
    /// the current thickness constant every observed thickness.
    pub fn current_is_valid(&self) -> bool {
        self.points.iter().all(|p| {
            p.max_comparisons <= self.current.sort_budget(p.s)
                && p.max_thickness as f64 <= self.current.thickness_limit(p.s)
        })
    }

    /// `key=value` config: the constants to freeze, then the observations
    /// as comments.
    pub fn to_config(&self) -> String {
        let chosen = if self.current_is_valid() { self.current } else { self.fitted };
        let mut out = String::from("# balanced-quicksort calibration\n");
        out.push_str(&chosen.to_string());
        out.push_str(&format!(
            "# fitted: sort_budget_nlogn={} thickness_constant={:.3}\n",
            self.fitted.budget_nlogn, self.fitted.thickness_constant
        ));
        for p in &self.points {
            out.push_str(&format!(
                "# s={} permutations={} max_comparisons={} budget={} max_thickness={} ratio={:.3}\n",
                p.s,
                p.permutations,
                p.max_comparisons,
                chosen.sort_budget(p.s),
                p.max_thickness,
                p.max_thickness as f64 / p.s as f64
            ));
        }
        out
    }
}

/// Measures balanced quicksort's truthful comparison counts and thickness
/// and fits the budget's `s log s` coefficient and `C_t` to them.
pub fn calibrate(cfg: &CalibrateConfig, current: Calibration) -> Result<CalibrationReport> {
    let sorter = Sorter::BalancedQuicksort;
    let mut points = Vec::new();
    for s in 1..=cfg.exhaustive_max_s {
        let runs: Vec<SortSample> = TotalOrder::all(s)
            .par_iter()
            .map(|order| sample(sorter, order))
            .collect::<Result<_>>()?;
        points.push(point(s, &runs));
    }
    for &s in &cfg.random_s_values {
        let runs = samples(sorter, s, cfg.random_trials, cfg.seed)?;
        points.push(point(s, &runs));
    }

    let mut fitted = current;
    fitted.budget_nlogn = points
        .iter()
        .filter(|p| p.s >= 2)
        .map(|p| {
            let above_linear = p.max_comparisons.saturating_sub(current.budget_linear * p.s);
            above_linear.div_ceil(p.s * ceil_log2(p.s))
        })
        .max()
        .unwrap_or(0);
    fitted.thickness_constant = points
        .iter()
        .map(|p| p.max_thickness as f64 / p.s as f64)
        .fold(0.0, f64::max);
    Ok(CalibrationReport {
        points,
        current,
        fitted,
    })
}

fn point(s: usize, runs: &[SortSample]) -> CalibrationPoint {
    CalibrationPoint {
        s,
        permutations: runs.len(),
        max_comparisons: runs.iter().map(|r| r.comparisons).max().unwrap_or(0),
        max_thickness: runs.iter().map(|r| r.thickness).max().unwrap_or(0),
    }
}
