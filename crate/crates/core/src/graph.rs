//! Ordered multigraphs over sorted positions `1..=s`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Loopless multigraph whose vertices are the positions `1..=s` of a
/// claimed sorted order. Edges are unordered pairs stored as `(a, b)` with
/// `a < b`, mapped to their multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderedMultigraph {
    s: usize,
    edges: BTreeMap<(usize, usize), usize>,
}

impl OrderedMultigraph {
    pub fn new(s: usize) -> Self {
        Self {
            s,
            edges: BTreeMap::new(),
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(s: usize, edges: I) -> Result<Self> {
        let mut g = Self::new(s);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.s
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.s {
            Err(Error::VertexOutOfRange {
                vertex: v,
                s: self.s,
            })
        } else {
            Ok(())
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.add_edges(a, b, 1)
    }

    /// Adds `count` copies of `{a, b}`.
    pub fn add_edges(&mut self, a: usize, b: usize, count: usize) -> Result<()> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(Error::InvalidInput(format!("loop at vertex {a}")));
        }
        if count > 0 {
            *self.edges.entry((a.min(b), a.max(b))).or_default() += count;
        }
        Ok(())
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.edges.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    /// Distinct edges with multiplicities, ascending by `(a, b)`.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.edges.iter().map(|(&e, &m)| (e, m))
    }

    /// `e(H)`, counting multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.values().sum()
    }

    pub fn distinct_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m == 1)
    }

    /// Multiplicity-weighted number of edges to smaller positions.
    pub fn left_degree(&self, j: usize) -> Result<usize> {
        self.check_vertex(j)?;
        Ok(self
            .edges
            .iter()
            .filter(|((_, b), _)| *b == j)
            .map(|(_, m)| m)
            .sum())
    }

    pub fn right_degree(&self, j: usize) -> Result<usize> {
        self.check_vertex(j)?;
        Ok(self
            .edges
            .iter()
            .filter(|((a, _), _)| *a == j)
            .map(|(_, m)| m)
            .sum())
    }

    /// `(left, right)` degree of every vertex; index 0 is vertex 1.
    pub fn degrees(&self) -> Vec<(usize, usize)> {
        let mut deg = vec![(0, 0); self.s];
        for (&(a, b), &m) in &self.edges {
            deg[a - 1].1 += m;
            deg[b - 1].0 += m;
        }
        deg
    }

    /// `t(j)` for every `j` in `1..=s` (index 0 is vertex 1): how many
    /// edges strictly span each vertex. Computed by a sweep keeping a
    /// running count of open edges.
    pub fn span_profile(&self) -> Vec<usize> {
        let mut opened = vec![0usize; self.s + 2];
        let mut closed = vec![0usize; self.s + 2];
        for (&(a, b), &m) in &self.edges {
            opened[a] += m;
            closed[b] += m;
        }
        let mut profile = Vec::with_capacity(self.s);
        let mut open = 0usize;
        for j in 1..=self.s {
            open -= closed[j];
            profile.push(open);
            open += opened[j];
        }
        profile
    }

    /// `t(H)`: the largest `t(j)` over interior vertices, 0 when `s <= 2`.
    pub fn thickness(&self) -> usize {
        if self.s <= 2 {
            return 0;
        }
        self.span_profile()[1..self.s - 1]
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Fails unless every left and right degree is at most `k + 1`.
    pub fn check_degree_bound(&self, k: usize) -> Result<()> {
        let limit = k + 1;
        for (i, &(left, right)) in self.degrees().iter().enumerate() {
            for (side, degree) in [("left", left), ("right", right)] {
                if degree > limit {
                    return Err(Error::DegreePrecondition {
                        vertex: i + 1,
                        side,
                        degree,
                        limit,
                    });
                }
            }
        }
        Ok(())
    }

    /// Total shortfall of degrees below `k + 1`, ignoring the left side of
    /// vertex 1 and the right side of vertex `s`.
    pub fn defect(&self, k: usize) -> Result<usize> {
        self.check_degree_bound(k)?;
        let deg = self.degrees();
        let right: usize = deg[..self.s.saturating_sub(1)]
            .iter()
            .map(|&(_, r)| k + 1 - r)
            .sum();
        let left: usize = deg.iter().skip(1).map(|&(l, _)| k + 1 - l).sum();
        Ok(right + left)
    }

    /// Whether every `j != 1` has `k + 1` left neighbours and every
    /// `j != s` has `k + 1` right neighbours.
    pub fn is_certifying(&self, k: usize) -> bool {
        self.degrees().iter().enumerate().all(|(i, &(l, r))| {
            let j = i + 1;
            (j == 1 || l > k) && (j == self.s || r > k)
        })
    }

    /// `true` if `self` contains `other` as a multiset of edges.
    pub fn contains(&self, other: &OrderedMultigraph) -> bool {
        self.s == other.s && other.edges().all(|((a, b), m)| self.multiplicity(a, b) >= m)
    }
}

/// Edge-list text: first line `s`, then one `a b m` line per distinct edge.
impl fmt::Display for OrderedMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.s)?;
        for (&(a, b), &m) in &self.edges {
            writeln!(f, "{a} {b} {m}")?;
        }
        Ok(())
    }
}

impl FromStr for OrderedMultigraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing vertex count".into()))?;
        let s = header
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex count {header:?}")))?;
        let mut g = OrderedMultigraph::new(s);
        for line in lines {
            let fields: Vec<usize> = line
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad edge line {line:?}"))))
                .collect::<Result<_>>()?;
            match fields[..] {
                [a, b] => g.add_edge(a, b)?,
                [a, b, m] => g.add_edges(a, b, m)?,
                _ => return Err(Error::Parse(format!("bad edge line {line:?}"))),
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: usize, edges: &[(usize, usize)]) -> OrderedMultigraph {
        OrderedMultigraph::from_edges(s, edges.iter().copied()).unwrap()
    }

    #[test]
    fn degree_examples() {
        let path = g(3, &[(1, 2), (2, 3)]);
        assert_eq!(path.left_degree(2).unwrap(), 1);
        assert_eq!(path.right_degree(2).unwrap(), 1);

        let empty = g(4, &[]);
        for j in 1..=4 {
            assert_eq!(empty.left_degree(j).unwrap(), 0);
            assert_eq!(empty.right_degree(j).unwrap(), 0);
        }

        let double = g(3, &[(1, 3), (3, 1)]);
        assert_eq!(double.right_degree(1).unwrap(), 2);
        assert_eq!(double.left_degree(3).unwrap(), 2);
        assert!(!double.is_simple());

        assert!(matches!(path.left_degree(0), Err(Error::VertexOutOfRange { .. })));
        assert!(matches!(path.right_degree(4), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        assert!(OrderedMultigraph::from_edges(3, [(2, 2)]).is_err());
        assert!(OrderedMultigraph::from_edges(3, [(1, 4)]).is_err());
    }

    #[test]
    fn thickness_examples() {
        assert_eq!(g(4, &[(1, 2), (2, 3), (3, 4)]).thickness(), 0);
        assert_eq!(g(3, &[(1, 3)]).thickness(), 1);
        assert_eq!(g(4, &[(1, 3), (2, 4), (1, 4)]).thickness(), 2);
        assert_eq!(g(2, &[(1, 2)]).thickness(), 0);
        assert_eq!(g(1, &[]).thickness(), 0);
    }

    #[test]
    fn defect_examples() {
        assert_eq!(g(3, &[]).defect(0).unwrap(), 4);
        assert_eq!(g(3, &[(1, 2), (2, 3)]).defect(0).unwrap(), 0);
        assert_eq!(g(2, &[(1, 2)]).defect(1).unwrap(), 2);
        assert!(matches!(
            g(3, &[(1, 2), (1, 3)]).defect(0),
            Err(Error::DegreePrecondition { vertex: 1, side: "right", degree: 2, limit: 1 })
        ));
    }

    #[test]
    fn edge_list_text_round_trip() {
        let h = g(4, &[(1, 3), (1, 3), (2, 4)]);
        let text = h.to_string();
        assert_eq!(text, "4\n1 3 2\n2 4 1\n");
        assert_eq!(text.parse::<OrderedMultigraph>().unwrap(), h);
        assert_eq!("3\n# comment\n1 3\n".parse::<OrderedMultigraph>().unwrap(), g(3, &[(1, 3)]));
        assert!("x\n".parse::<OrderedMultigraph>().is_err());
        assert!("3\n1 2 3 4\n".parse::<OrderedMultigraph>().is_err());
    }

    fn arb_graph() -> impl Strategy<Value = OrderedMultigraph> {
        (1usize..12).prop_flat_map(|s| {
            proptest::collection::vec((1..=s, 1..=s, 1usize..3), 0..30).prop_map(move |edges| {
                let mut h = OrderedMultigraph::new(s);
                for (a, b, m) in edges {
                    if a != b {
                        h.add_edges(a, b, m).unwrap();
                    }
                }
                h
            })
        })
    }

    proptest! {
        #[test]
        fn sweep_matches_per_vertex_scan(h in arb_graph()) {
            let s = h.vertex_count();
            let scan: Vec<usize> = (1..=s)
                .map(|j| h.edges().filter(|&((a, b), _)| a < j && j < b).map(|(_, m)| m).sum())
                .collect();
            prop_assert_eq!(h.span_profile(), scan.clone());
            let expected = if s <= 2 { 0 } else { scan[1..s - 1].iter().copied().max().unwrap() };
            prop_assert_eq!(h.thickness(), expected);
        }

        #[test]
        fn defect_closed_form(h in arb_graph(), k in 0usize..4) {
            if h.check_degree_bound(k).is_ok() {
                let s = h.vertex_count();
                prop_assert_eq!(h.defect(k).unwrap() + 2 * h.edge_count(), 2 * (k + 1) * (s - 1));
            }
        }

        #[test]
        fn text_format_round_trips(h in arb_graph()) {
            prop_assert_eq!(h.to_string().parse::<OrderedMultigraph>().unwrap(), h);
        }
    }
}
