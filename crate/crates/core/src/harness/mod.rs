//! Experiment driver behind the `liarsel` CLI: seeded bound regressions,
//! exhaustive adversary verification, thickness measurement, sorter
//! calibration and the graph-completion self-test.

pub mod exhaustive;
pub mod experiment;
pub mod measure;
pub mod selftest;

pub use exhaustive::{verify_exhaustive, Verdict};
pub use experiment::{run_experiments, run_trials, ExperimentConfig, ExperimentRow, OracleSpec};
pub use measure::{calibrate, measure_thickness, CalibrateConfig, ThicknessRow};
pub use selftest::{flow_selftest, SelftestConfig, SelftestOutcome};
