//! WebAssembly entry points for the browser demo in `www/`. Each call
//! returns a JSON document; errors come back as plain strings.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use liarsel::flow::completion;
use liarsel::harness::experiment::{run_trial, ExperimentConfig, OracleSpec};
use liarsel::sort::SortBudget;
use liarsel::{element_ids, Algorithm, LyingOracle, MinMaxOptions, OrderedMultigraph, Phase, Sorter, TotalOrder};

/// Largest group the graph explorer accepts.
pub const MAX_GRAPH_S: usize = 64;
/// Largest sort the profile view accepts.
pub const MAX_SORT_S: usize = 4096;
/// Largest min-max instance the run view accepts.
pub const MAX_RUN_N: usize = 20_000;

#[derive(Serialize)]
struct Edge {
    a: usize,
    b: usize,
    m: usize,
}

fn edges_of(h: &OrderedMultigraph) -> Vec<Edge> {
    h.edges().map(|((a, b), m)| Edge { a, b, m }).collect()
}

#[derive(Serialize)]
struct CompletionView {
    s: usize,
    k: usize,
    thickness: usize,
    edges: Vec<Edge>,
    /// Added edges in order; the first `flow_edges` come from the flow.
    added: Vec<(usize, usize)>,
    flow_edges: usize,
    total_edges: usize,
    bound: usize,
    certifying: bool,
}

#[derive(Serialize)]
struct SortView {
    sorter: &'static str,
    s: usize,
    comparisons: usize,
    thickness: usize,
    /// `t(j)` for `j = 1..=s`.
    profile: Vec<usize>,
    edges: Vec<Edge>,
}

#[derive(Serialize)]
struct PhaseCount {
    phase: &'static str,
    queries: usize,
}

#[derive(Serialize)]
struct RunView {
    algorithm: &'static str,
    n: usize,
    k: usize,
    oracle: String,
    min: Option<usize>,
    max: Option<usize>,
    true_min: Option<usize>,
    true_max: Option<usize>,
    correct: bool,
    comparisons: usize,
    bound: usize,
    restarts: usize,
    lies_told: usize,
    /// Transcript indices at which the oracle lied.
    lie_indices: Vec<usize>,
    phases: Vec<PhaseCount>,
    group_attempts: usize,
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// Completes an ordered multigraph given as an edge list (`a b` or `a b m`
/// per line, vertices `1..=s`) against lie budget `k`.
#[wasm_bindgen]
pub fn complete_graph(s: usize, edge_list: &str, k: usize) -> Result<String, String> {
    if s == 0 || s > MAX_GRAPH_S {
        return Err(format!("s must be in 1..={MAX_GRAPH_S}"));
    }
    let h: OrderedMultigraph = format!("{s}\n{edge_list}").parse().map_err(|e: liarsel::Error| e.to_string())?;
    let c = completion(&h, k).map_err(|e| e.to_string())?;
    json(&CompletionView {
        s,
        k,
        thickness: h.thickness(),
        edges: edges_of(&h),
        flow_edges: c.flow_edges,
        total_edges: c.completed.edge_count(),
        bound: liarsel::flow::completion_bound(&h, k),
        certifying: c.completed.is_certifying(k),
        added: c.added,
    })
}

/// Sorts a seeded random permutation of size `s` and reports its sort
/// graph with the per-vertex span profile.
#[wasm_bindgen]
pub fn sort_profile(sorter: &str, s: usize, seed: u32) -> Result<String, String> {
    if s == 0 || s > MAX_SORT_S {
        return Err(format!("s must be in 1..={MAX_SORT_S}"));
    }
    let sorter: Sorter = sorter.parse().map_err(|e: liarsel::Error| e.to_string())?;
    let order = TotalOrder::random(s, &mut ChaCha8Rng::seed_from_u64(seed.into()));
    let mut oracle = LyingOracle::truthful(order);
    let out = sorter
        .sort(&element_ids(s), &mut oracle, SortBudget::unlimited())
        .map_err(|e| e.to_string())?;
    json(&SortView {
        sorter: sorter.name(),
        s,
        comparisons: out.comparisons,
        thickness: out.graph.thickness(),
        profile: out.graph.span_profile(),
        edges: edges_of(&out.graph),
    })
}

/// One seeded min-max run. `oracle` is `truthful`, `random-liar` (lying
/// with probability `p`) or `triggered-liar` (lying at the comma-separated
/// `triggers`). `group_size` 0 keeps the default.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn run_minmax(
    algorithm: &str,
    n: usize,
    k: usize,
    oracle: &str,
    p: f64,
    triggers: &str,
    seed: u32,
    group_size: usize,
) -> Result<String, String> {
    if n > MAX_RUN_N {
        return Err(format!("n must be at most {MAX_RUN_N}"));
    }
    let algorithm: Algorithm = algorithm.parse().map_err(|e: liarsel::Error| e.to_string())?;
    let spec = match oracle {
        "truthful" => OracleSpec::Truthful,
        "random-liar" => OracleSpec::RandomLiar { p },
        "triggered-liar" => OracleSpec::TriggeredLiar {
            indices: triggers
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| format!("bad trigger index {t:?}")))
                .collect::<Result<_, _>>()?,
        },
        other => return Err(format!("unknown oracle {other:?}")),
    };
    let mut cfg = ExperimentConfig::new(algorithm, n, k, spec);
    cfg.seed = seed.into();
    cfg.options = MinMaxOptions {
        s_override: (group_size > 0).then_some(group_size),
        ..MinMaxOptions::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    let trial_seed = cfg.trial_seeds()[0];
    let report = run_trial(&cfg, trial_seed).map_err(|e| e.to_string())?;

    let items = element_ids(n);
    let stats = &report.extrema.stats;
    json(&RunView {
        algorithm: algorithm.name(),
        n,
        k,
        oracle: report.row.oracle.clone(),
        min: report.extrema.min.map(|e| e.index()),
        max: report.extrema.max.map(|e| e.index()),
        true_min: algorithm
            .reports_min()
            .then(|| report.hidden_order.min_of(&items).map(|e| e.index()))
            .flatten(),
        true_max: algorithm
            .reports_max()
            .then(|| report.hidden_order.max_of(&items).map(|e| e.index()))
            .flatten(),
        correct: report.correct,
        comparisons: report.row.comparisons,
        bound: report.row.bound,
        restarts: report.row.restarts,
        lies_told: report.lies_told,
        lie_indices: report
            .transcript
            .records()
            .iter()
            .filter(|r| r.is_lie(&report.hidden_order))
            .map(|r| r.index)
            .collect(),
        phases: Phase::ALL
            .into_iter()
            .map(|phase| PhaseCount {
                phase: phase.name(),
                queries: stats.phase(phase),
            })
            .collect(),
        group_attempts: stats.attempts.len(),
    })
}
