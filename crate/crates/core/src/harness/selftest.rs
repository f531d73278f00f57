//! Self-test of the graph completion against a brute-force minimum cut.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::flow::{
    build_flow_network, completion, completion_bound, min_cut_over_si, saturation_target, FlowNetwork,
    FlowNode,
};
use crate::graph::OrderedMultigraph;

/// Exhaustive enumeration stops at this many vertices.
pub const EXHAUSTIVE_MAX_S: usize = 5;
/// Exhaustive enumeration stops at this lie budget.
pub const EXHAUSTIVE_MAX_K: usize = 2;
/// Largest edge multiplicity in the exhaustive enumeration.
pub const EXHAUSTIVE_MAX_MULTIPLICITY: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelftestConfig {
    pub max_s: usize,
    pub max_k: usize,
    pub random_instances: usize,
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            max_s: 8,
            max_k: 3,
            random_instances: 10_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowFailure {
    pub graph: OrderedMultigraph,
    pub k: usize,
    pub reason: String,
}

impl fmt::Display for FlowFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}: {}\n{}", self.k, self.reason, self.graph)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelftestOutcome {
    Pass { exhaustive: usize, random: usize },
    Failure(FlowFailure),
}

/// Minimum `a`-`b` cut by enumerating every node subset that contains the
/// source and not the sink. Exponential in `2s`; meant for `s <= 8`.
pub fn brute_force_min_cut(net: &FlowNetwork) -> usize {
    let s = net.vertex_count();
    assert!(s <= 12, "brute-force cut over 2^{} subsets refused", 2 * s);
    // bit j-1 of `plus` / `minus` is node j+ / j- inside the cut
    let mut source_arc = vec![0usize; s];
    let mut sink_arc = vec![0usize; s];
    let mut middle = vec![vec![0usize; s]; s];
    for arc in net.arcs() {
        match (arc.from, arc.to) {
            (FlowNode::Source, FlowNode::Plus(j)) => source_arc[j - 1] += arc.capacity,
            (FlowNode::Minus(j), FlowNode::Sink) => sink_arc[j - 1] += arc.capacity,
            (FlowNode::Plus(i), FlowNode::Minus(j)) => middle[i - 1][j - 1] += arc.capacity,
            other => panic!("unexpected arc {other:?}"),
        }
    }
    let full = (1usize << s) - 1;
    let mut best = usize::MAX;
    // into_minus[v]: capacity from plus nodes in the cut into v-
    let mut into_minus = vec![0usize; s];
    for plus in 0..=full {
        into_minus.fill(0);
        let mut outside_source = 0;
        for i in 0..s {
            if plus >> i & 1 == 1 {
                for (v, c) in middle[i].iter().enumerate() {
                    into_minus[v] += c;
                }
            } else {
                outside_source += source_arc[i];
            }
        }
        for minus in 0..=full {
            let mut cut = outside_source;
            for v in 0..s {
                if minus >> v & 1 == 1 {
                    cut += sink_arc[v];
                } else {
                    cut += into_minus[v];
                }
            }
            best = best.min(cut);
        }
    }
    best
}

/// Checks every conclusion of the completion on one graph.
pub fn check_instance(h: &OrderedMultigraph, k: usize) -> Result<Option<FlowFailure>> {
    let fail = |reason: String| {
        Ok(Some(FlowFailure {
            graph: h.clone(),
            k,
            reason,
        }))
    };
    let c = completion(h, k)?;
    let target = saturation_target(h, k);
    let closed_form = min_cut_over_si(h, k)?;
    let brute = brute_force_min_cut(&build_flow_network(h, k)?);

    if c.flow_value != target || closed_form != target || brute != target {
        return fail(format!(
            "flow {} / closed-form cut {closed_form} / brute-force cut {brute} / m* {target} disagree",
            c.flow_value
        ));
    }
    if c.saturated.check_degree_bound(k).is_err() {
        return fail("saturated graph exceeds degree k+1".into());
    }
    if c.saturated.defect(k)? != 2 * h.thickness() {
        return fail(format!(
            "defect after saturation {} != 2 t(H) = {}",
            c.saturated.defect(k)?,
            2 * h.thickness()
        ));
    }
    if !c.completed.contains(h) {
        return fail("completion dropped an edge of H".into());
    }
    if !c.completed.is_certifying(k) {
        return fail("completion leaves a vertex short of k+1 neighbours".into());
    }
    let bound = completion_bound(h, k);
    if c.completed.edge_count() > bound {
        return fail(format!("{} edges exceed bound {bound}", c.completed.edge_count()));
    }
    if c.completed.edge_count() != h.edge_count() + c.added.len() {
        return fail("added-edge list does not match the completed graph".into());
    }
    Ok(None)
}

/// Every multigraph on `1..=s` with multiplicities at most `max_mult`
/// whose degrees are at most `k + 1`.
pub fn enumerate_graphs(s: usize, k: usize, max_mult: usize) -> Vec<OrderedMultigraph> {
    let pairs: Vec<(usize, usize)> = (1..=s)
        .flat_map(|a| (a + 1..=s).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    let mut mult = vec![0usize; pairs.len()];
    loop {
        let mut h = OrderedMultigraph::new(s);
        for (&(a, b), &m) in pairs.iter().zip(&mult) {
            h.add_edges(a, b, m).expect("valid pair");
        }
        if h.check_degree_bound(k).is_ok() {
            out.push(h);
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == mult.len() {
                return out;
            }
            mult[i] += 1;
            if mult[i] <= max_mult {
                break;
            }
            mult[i] = 0;
            i += 1;
        }
    }
}

/// Random multigraph on `1..=s` respecting the degree bound `k + 1`.
pub fn random_graph<R: Rng + ?Sized>(s: usize, k: usize, rng: &mut R) -> OrderedMultigraph {
    let mut h = OrderedMultigraph::new(s);
    if s < 2 {
        return h;
    }
    let mut left = vec![0usize; s + 1];
    let mut right = vec![0usize; s + 1];
    let mut pairs: Vec<(usize, usize)> = (1..=s)
        .flat_map(|a| (a + 1..=s).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(rng);
    let density = rng.gen_range(0.0..1.0);
    for (a, b) in pairs {
        if !rng.gen_bool(density) {
            continue;
        }
        let room = (k + 1 - right[a]).min(k + 1 - left[b]);
        if room == 0 {
            continue;
        }
        let m = rng.gen_range(1..=room);
        h.add_edges(a, b, m).expect("valid pair");
        right[a] += m;
        left[b] += m;
    }
    h
}

pub fn flow_selftest(cfg: &SelftestConfig) -> Result<SelftestOutcome> {
    let mut exhaustive = 0;
    for s in 1..=cfg.max_s.min(EXHAUSTIVE_MAX_S) {
        for k in 0..=cfg.max_k.min(EXHAUSTIVE_MAX_K) {
            for h in enumerate_graphs(s, k, EXHAUSTIVE_MAX_MULTIPLICITY) {
                if let Some(failure) = check_instance(&h, k)? {
                    return Ok(SelftestOutcome::Failure(failure));
                }
                exhaustive += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_s = cfg.max_s.max(2);
    for _ in 0..cfg.random_instances {
        let s = rng.gen_range(2..=max_s);
        let k = rng.gen_range(0..=cfg.max_k);
        let h = random_graph(s, k, &mut rng);
        if let Some(failure) = check_instance(&h, k)? {
            return Ok(SelftestOutcome::Failure(failure));
        }
    }
    Ok(SelftestOutcome::Pass {
        exhaustive,
        random: cfg.random_instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: usize, edges: &[(usize, usize)]) -> OrderedMultigraph {
        OrderedMultigraph::from_edges(s, edges.iter().copied()).unwrap()
    }

    #[test]
    fn two_vertices_all_graphs() {
        let graphs = enumerate_graphs(2, 0, 2);
        assert_eq!(graphs, vec![g(2, &[]), g(2, &[(1, 2)])]);
        for h in graphs {
            assert_eq!(check_instance(&h, 0).unwrap(), None);
        }
    }

    #[test]
    fn spanning_edge_boundary_case() {
        let h = g(3, &[(1, 3)]);
        assert_eq!(check_instance(&h, 0).unwrap(), None);
        assert_eq!(completion(&h, 0).unwrap().completed.edge_count(), 3);
    }

    #[test]
    fn brute_force_matches_examples() {
        for (h, k, expected) in [(g(3, &[]), 0, 2), (g(3, &[(1, 3)]), 0, 0), (g(4, &[]), 1, 6)] {
            assert_eq!(brute_force_min_cut(&build_flow_network(&h, k).unwrap()), expected);
        }
    }

    #[test]
    fn random_graphs_respect_degree_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = rng.gen_range(1..9);
            let k = rng.gen_range(0..4);
            assert!(random_graph(s, k, &mut rng).check_degree_bound(k).is_ok());
        }
    }

    #[test]
    fn five_vertices_two_lies_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..300 {
            let h = random_graph(5, 2, &mut rng);
            assert_eq!(check_instance(&h, 2).unwrap(), None, "{h}");
        }
    }

    #[test]
    fn small_selftest_passes() {
        let cfg = SelftestConfig {
            max_s: 4,
            max_k: 1,
            random_instances: 100,
            seed: 3,
        };
        assert!(matches!(flow_selftest(&cfg).unwrap(), SelftestOutcome::Pass { random: 100, .. }));
    }
}
