//! Completion of a sort graph into a certifying multigraph.
//!
//! Given an ordered multigraph `H` on `1..=s` whose left and right degrees
//! are at most `k + 1`, [`complete_edges`] adds edges until every vertex
//! other than `1` has `k + 1` left neighbours and every vertex other than
//! `s` has `k + 1` right neighbours, using at most
//! `(k + 1)(s - 1) + t(H)` edges in total.
//!
//! The construction first saturates degrees with a maximum flow through
//! an auxiliary network (source `a`, sink `b`, a `j+` and `j-` node per
//! vertex) and then patches the remaining shortfall with edges to the
//! first and last vertex.

use std::collections::VecDeque;

use crate::error::Result;
use crate::graph::OrderedMultigraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlowNode {
    Source,
    Sink,
    /// `j+`: supplies right-degree slots of vertex `j`.
    Plus(usize),
    /// `j-`: absorbs left-degree slots of vertex `j`.
    Minus(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub from: FlowNode,
    pub to: FlowNode,
    pub capacity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    s: usize,
    infinity: usize,
    arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub fn vertex_count(&self) -> usize {
        self.s
    }

    /// Capacity standing in for an unbounded arc, `(k + 1) * s + 1`.
    pub fn infinity(&self) -> usize {
        self.infinity
    }

    /// Arcs in canonical order: `a -> j+`, then `j- -> b`, then `i+ -> j-`
    /// ascending by `(i, j)`.
    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    pub fn node_count(&self) -> usize {
        2 * self.s + 2
    }

    /// Dense index: source 0, sink 1, `j+` at `1 + j`, `j-` at `1 + s + j`.
    pub fn node_index(&self, node: FlowNode) -> usize {
        match node {
            FlowNode::Source => 0,
            FlowNode::Sink => 1,
            FlowNode::Plus(j) => 1 + j,
            FlowNode::Minus(j) => 1 + self.s + j,
        }
    }

    pub fn capacity(&self, from: FlowNode, to: FlowNode) -> Option<usize> {
        self.arcs
            .iter()
            .find(|arc| arc.from == from && arc.to == to)
            .map(|arc| arc.capacity)
    }
}

pub fn build_flow_network(h: &OrderedMultigraph, k: usize) -> Result<FlowNetwork> {
    h.check_degree_bound(k)?;
    let s = h.vertex_count();
    let degrees = h.degrees();
    let infinity = (k + 1) * s + 1;
    let mut arcs = Vec::with_capacity(2 * s + s * s.saturating_sub(1) / 2);
    for (i, &(_, right)) in degrees.iter().enumerate() {
        arcs.push(FlowArc {
            from: FlowNode::Source,
            to: FlowNode::Plus(i + 1),
            capacity: k + 1 - right,
        });
    }
    for (i, &(left, _)) in degrees.iter().enumerate() {
        arcs.push(FlowArc {
            from: FlowNode::Minus(i + 1),
            to: FlowNode::Sink,
            capacity: k + 1 - left,
        });
    }
    for i in 1..=s {
        for j in i + 1..=s {
            arcs.push(FlowArc {
                from: FlowNode::Plus(i),
                to: FlowNode::Minus(j),
                capacity: infinity,
            });
        }
    }
    Ok(FlowNetwork { s, infinity, arcs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub value: usize,
    /// Flow on each arc, parallel to [`FlowNetwork::arcs`].
    pub arc_flow: Vec<usize>,
}

/// Maximum source-sink flow by shortest augmenting paths.
///
/// Capacities are integers, so the result is integral.
pub fn max_flow_integral(net: &FlowNetwork) -> Flow {
    // Residual graph: edge 2i is arc i forward, 2i + 1 its reverse.
    let nodes = net.node_count();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut head = Vec::with_capacity(2 * net.arcs.len());
    let mut residual = Vec::with_capacity(2 * net.arcs.len());
    for arc in &net.arcs {
        let (u, v) = (net.node_index(arc.from), net.node_index(arc.to));
        adjacency[u].push(head.len());
        head.push(v);
        residual.push(arc.capacity);
        adjacency[v].push(head.len());
        head.push(u);
        residual.push(0);
    }

    let (source, sink) = (net.node_index(FlowNode::Source), net.node_index(FlowNode::Sink));
    let mut value = 0;
    let mut parent_edge = vec![usize::MAX; nodes];
    loop {
        parent_edge.fill(usize::MAX);
        let mut queue = VecDeque::from([source]);
        let mut reached = false;
        'bfs: while let Some(u) = queue.pop_front() {
            for &e in &adjacency[u] {
                let v = head[e];
                if residual[e] > 0 && v != source && parent_edge[v] == usize::MAX {
                    parent_edge[v] = e;
                    if v == sink {
                        reached = true;
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        if !reached {
            break;
        }

        let mut bottleneck = usize::MAX;
        let mut v = sink;
        while v != source {
            let e = parent_edge[v];
            bottleneck = bottleneck.min(residual[e]);
            v = head[e ^ 1];
        }
        let mut v = sink;
        while v != source {
            let e = parent_edge[v];
            residual[e] -= bottleneck;
            residual[e ^ 1] += bottleneck;
            v = head[e ^ 1];
        }
        value += bottleneck;
    }

    let arc_flow = (0..net.arcs.len()).map(|i| residual[2 * i + 1]).collect();
    Flow { value, arc_flow }
}

/// Minimum capacity over the cut family
/// `S_i = {a} ∪ {x+ : x >= i} ∪ {x- : x > i}`, from the closed form
/// `(s - 1)(k + 1) - sum_{j<i} d_right(j) - sum_{j>i} d_left(j)`.
pub fn min_cut_over_si(h: &OrderedMultigraph, k: usize) -> Result<usize> {
    h.check_degree_bound(k)?;
    let s = h.vertex_count();
    if s == 0 {
        return Ok(0);
    }
    let degrees = h.degrees();
    let base = (s - 1) * (k + 1);
    let mut best = usize::MAX;
    // prefix: sum of right degrees of vertices < i; suffix: left degrees of vertices > i
    let mut prefix_right = 0;
    let mut suffix_left: usize = degrees.iter().skip(1).map(|&(l, _)| l).sum();
    for i in 1..=s {
        best = best.min(base - prefix_right - suffix_left);
        prefix_right += degrees[i - 1].1;
        if i < s {
            suffix_left -= degrees[i].0;
        }
    }
    Ok(best)
}

/// `(k + 1)(s - 1) - e(H) - t(H)`: the value of the maximum flow.
pub fn saturation_target(h: &OrderedMultigraph, k: usize) -> usize {
    ((k + 1) * h.vertex_count().saturating_sub(1)).saturating_sub(h.edge_count() + h.thickness())
}

/// `(k + 1)(s - 1) + t(H)`: the edge bound on the completed graph.
pub fn completion_bound(h: &OrderedMultigraph, k: usize) -> usize {
    (k + 1) * h.vertex_count().saturating_sub(1) + h.thickness()
}

/// Full record of one completion, for verification and inspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    /// `H*`: `H` plus the flow edges; all degrees still at most `k + 1`.
    pub saturated: OrderedMultigraph,
    /// `H̄`: the certifying multigraph.
    pub completed: OrderedMultigraph,
    pub flow_value: usize,
    /// Every added edge with repetition: flow edges ascending by `(i, j)`,
    /// then left patches `{1, j}` ascending by `j`, then right patches
    /// `{j, s}` ascending by `j`.
    pub added: Vec<(usize, usize)>,
    /// How many leading entries of `added` came from the flow.
    pub flow_edges: usize,
}

pub fn completion(h: &OrderedMultigraph, k: usize) -> Result<Completion> {
    let net = build_flow_network(h, k)?;
    let flow = max_flow_integral(&net);
    let s = h.vertex_count();

    let mut saturated = h.clone();
    let mut added = Vec::new();
    for (arc, &f) in net.arcs().iter().zip(&flow.arc_flow) {
        if let (FlowNode::Plus(i), FlowNode::Minus(j)) = (arc.from, arc.to) {
            if f > 0 {
                saturated.add_edges(i, j, f)?;
                added.extend(std::iter::repeat_n((i, j), f));
            }
        }
    }
    let flow_edges = added.len();

    let mut completed = saturated.clone();
    for j in 2..=s {
        let left = completed.left_degree(j)?;
        if left <= k {
            let missing = k + 1 - left;
            completed.add_edges(1, j, missing)?;
            added.extend(std::iter::repeat_n((1, j), missing));
        }
    }
    for j in 1..s {
        let right = completed.right_degree(j)?;
        if right <= k {
            let missing = k + 1 - right;
            completed.add_edges(j, s, missing)?;
            added.extend(std::iter::repeat_n((j, s), missing));
        }
    }

    Ok(Completion {
        saturated,
        completed,
        flow_value: flow.value,
        added,
        flow_edges,
    })
}

/// Extends `H` to a certifying multigraph `H̄ ⊇ H`.
pub fn complete_edges(h: &OrderedMultigraph, k: usize) -> Result<OrderedMultigraph> {
    Ok(completion(h, k)?.completed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn g(s: usize, edges: &[(usize, usize)]) -> OrderedMultigraph {
        OrderedMultigraph::from_edges(s, edges.iter().copied()).unwrap()
    }

    #[test]
    fn network_capacities_empty_graph() {
        let net = build_flow_network(&g(3, &[]), 0).unwrap();
        for j in 1..=3 {
            assert_eq!(net.capacity(FlowNode::Source, FlowNode::Plus(j)), Some(1));
            assert_eq!(net.capacity(FlowNode::Minus(j), FlowNode::Sink), Some(1));
        }
        assert_eq!(net.infinity(), 4);
        assert_eq!(net.capacity(FlowNode::Plus(2), FlowNode::Minus(1)), None);
    }

    #[test]
    fn network_capacities_spanning_edge() {
        let net = build_flow_network(&g(3, &[(1, 3)]), 0).unwrap();
        assert_eq!(net.capacity(FlowNode::Source, FlowNode::Plus(1)), Some(0));
        assert_eq!(net.capacity(FlowNode::Minus(3), FlowNode::Sink), Some(0));
        assert_eq!(net.capacity(FlowNode::Source, FlowNode::Plus(2)), Some(1));
        assert_eq!(net.capacity(FlowNode::Source, FlowNode::Plus(3)), Some(1));
        assert_eq!(net.capacity(FlowNode::Minus(1), FlowNode::Sink), Some(1));
        assert_eq!(net.capacity(FlowNode::Minus(2), FlowNode::Sink), Some(1));
    }

    #[test]
    fn network_two_vertices() {
        let net = build_flow_network(&g(2, &[]), 1).unwrap();
        assert_eq!(net.capacity(FlowNode::Source, FlowNode::Plus(1)), Some(2));
        assert_eq!(net.capacity(FlowNode::Source, FlowNode::Plus(2)), Some(2));
        assert_eq!(net.capacity(FlowNode::Minus(1), FlowNode::Sink), Some(2));
        assert_eq!(net.capacity(FlowNode::Minus(2), FlowNode::Sink), Some(2));
        let middle: Vec<_> = net
            .arcs()
            .iter()
            .filter(|a| matches!(a.from, FlowNode::Plus(_)))
            .collect();
        assert_eq!(middle.len(), 1);
        assert_eq!((middle[0].from, middle[0].to), (FlowNode::Plus(1), FlowNode::Minus(2)));
        assert_eq!(middle[0].capacity, 5);
    }

    #[test]
    fn network_requires_degree_bound() {
        assert!(matches!(
            build_flow_network(&g(3, &[(1, 2), (1, 2)]), 0),
            Err(Error::DegreePrecondition { .. })
        ));
    }

    #[test]
    fn max_flow_examples() {
        for (h, value) in [
            (g(3, &[]), 2),
            (g(3, &[(1, 3)]), 0),
            (g(3, &[(1, 2), (2, 3)]), 0),
        ] {
            let net = build_flow_network(&h, 0).unwrap();
            let flow = max_flow_integral(&net);
            assert_eq!(flow.value, value, "{h}");
        }
    }

    #[test]
    fn flow_is_feasible() {
        let h = g(5, &[(1, 4), (2, 5), (2, 3)]);
        let net = build_flow_network(&h, 2).unwrap();
        let flow = max_flow_integral(&net);
        let mut balance = vec![0isize; net.node_count()];
        for (arc, &f) in net.arcs().iter().zip(&flow.arc_flow) {
            assert!(f <= arc.capacity);
            balance[net.node_index(arc.from)] -= f as isize;
            balance[net.node_index(arc.to)] += f as isize;
        }
        assert_eq!(balance[0], -(flow.value as isize));
        assert_eq!(balance[1], flow.value as isize);
        assert!(balance[2..].iter().all(|&b| b == 0));
    }

    #[test]
    fn min_cut_examples() {
        assert_eq!(min_cut_over_si(&g(3, &[]), 0).unwrap(), 2);
        assert_eq!(min_cut_over_si(&g(3, &[(1, 3)]), 0).unwrap(), 0);
        assert_eq!(min_cut_over_si(&g(4, &[]), 1).unwrap(), 6);
    }

    #[test]
    fn completion_of_empty_triangle() {
        let c = completion(&g(3, &[]), 0).unwrap();
        assert_eq!(c.flow_value, 2);
        assert_eq!(c.completed, g(3, &[(1, 2), (2, 3)]));
        assert_eq!(c.added, vec![(1, 2), (2, 3)]);
        assert_eq!(c.flow_edges, 2);
        assert_eq!(c.saturated.defect(0).unwrap(), 0);
    }

    #[test]
    fn completion_of_spanning_edge() {
        let h = g(3, &[(1, 3)]);
        let c = completion(&h, 0).unwrap();
        assert_eq!(c.flow_value, 0);
        assert_eq!(c.added, vec![(1, 2), (2, 3)]);
        assert_eq!(c.completed.edge_count(), 3);
        assert_eq!(completion_bound(&h, 0), 3);
        assert!(c.completed.is_certifying(0));
    }

    #[test]
    fn completion_of_complete_pair() {
        let h = g(2, &[(1, 2)]);
        assert_eq!(complete_edges(&h, 0).unwrap(), h);
        let twice = complete_edges(&h, 1).unwrap();
        assert_eq!(twice.multiplicity(1, 2), 2);
    }

    #[test]
    fn completion_single_vertex() {
        let c = completion(&g(1, &[]), 3).unwrap();
        assert!(c.added.is_empty());
        assert!(c.completed.is_certifying(3));
    }
}
