//! Immutable graph storage for the three parts of a hybrid social-affiliation
//! network: the target graph, the auxiliary graph and the bipartite
//! affiliation graph linking them.
//!
//! Nodes are dense `0..n` indices. Target-side and auxiliary-side indices are
//! separate namespaces; [`Side`] disambiguates where both appear.

use crate::error::{Error, Result};

/// Dense node index, scoped to one side of the hybrid network.
pub type NodeId = usize;

/// Compressed sparse row adjacency with sorted, deduplicated rows.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    fn from_pairs(n: usize, mut pairs: Vec<(NodeId, NodeId)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(s, _) in &pairs {
            offsets[s + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.into_iter().map(|(_, t)| t).collect();
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    fn len_of(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    fn nnz(&self) -> usize {
        self.targets.len()
    }
}

/// A simple graph. Undirected graphs store each edge in both rows; directed
/// graphs keep separate out- and in-neighbor rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    out: Csr,
    // Present only for directed graphs.
    inc: Option<Csr>,
}

impl Graph {
    /// Builds an undirected graph. Duplicate edges (in either orientation) are
    /// merged; self-loops are rejected.
    pub fn undirected<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut pairs = Vec::new();
        for (a, b) in edges {
            check_edge(n, a, b)?;
            pairs.push((a, b));
            pairs.push((b, a));
        }
        Ok(Graph {
            n,
            out: Csr::from_pairs(n, pairs),
            inc: None,
        })
    }

    /// Builds a directed graph from `(source, target)` arcs.
    pub fn directed<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut fwd = Vec::new();
        for (a, b) in arcs {
            check_edge(n, a, b)?;
            fwd.push((a, b));
        }
        let rev = fwd.iter().map(|&(a, b)| (b, a)).collect();
        Ok(Graph {
            n,
            out: Csr::from_pairs(n, fwd),
            inc: Some(Csr::from_pairs(n, rev)),
        })
    }

    /// A graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            out: Csr::from_pairs(n, Vec::new()),
            inc: None,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.inc.is_some()
    }

    /// Number of edges (arcs, for directed graphs).
    pub fn edge_count(&self) -> usize {
        match self.inc {
            Some(_) => self.out.nnz(),
            None => self.out.nnz() / 2,
        }
    }

    /// Sum of degrees, `2|E|` for an undirected graph.
    pub fn degree_sum(&self) -> usize {
        self.out.nnz()
    }

    /// Neighbors of `u`; out-neighbors for a directed graph.
    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        self.out.row(u)
    }

    /// Degree of `u`; out-degree for a directed graph.
    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.out.len_of(u)
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out.len_of(u)
    }

    /// In-degree of `u`; equals the degree for undirected graphs.
    pub fn in_degree(&self, u: NodeId) -> usize {
        match &self.inc {
            Some(inc) => inc.len_of(u),
            None => self.out.len_of(u),
        }
    }

    pub fn in_neighbors(&self, u: NodeId) -> &[NodeId] {
        match &self.inc {
            Some(inc) => inc.row(u),
            None => self.out.row(u),
        }
    }

    pub fn contains_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Iterates edges once each: `u < v` pairs for undirected graphs, every
    /// arc for directed ones.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        let directed = self.is_directed();
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| directed || u < v)
                .map(move |v| (u, v))
        })
    }

    /// Undirected view in which `adj(u) = out(u) ∪ in(u)`. Undirected graphs
    /// are returned unchanged.
    pub fn undirected_view(&self) -> Graph {
        match &self.inc {
            None => self.clone(),
            Some(inc) => {
                let mut pairs = Vec::with_capacity(self.out.nnz() + inc.nnz());
                for u in 0..self.n {
                    pairs.extend(self.out.row(u).iter().map(|&v| (u, v)));
                    pairs.extend(inc.row(u).iter().map(|&v| (u, v)));
                }
                Graph {
                    n: self.n,
                    out: Csr::from_pairs(self.n, pairs),
                    inc: None,
                }
            }
        }
    }

    /// Disjoint union: nodes of `other` are shifted by `self.node_count()`.
    pub(crate) fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        if self.is_directed() || other.is_directed() {
            return Err(Error::InvalidParameter(
                "disjoint union of directed graphs".into(),
            ));
        }
        let shift = self.n;
        let edges = self
            .edges()
            .chain(other.edges().map(|(a, b)| (a + shift, b + shift)));
        Graph::undirected(self.n + other.n, edges)
    }

    /// Returns a copy with `extra` isolated nodes appended.
    pub(crate) fn with_extra_nodes(&self, extra: usize) -> Graph {
        if extra == 0 {
            return self.clone();
        }
        let n = self.n + extra;
        let mut out = self.out.clone();
        let last = *out.offsets.last().unwrap();
        out.offsets.resize(n + 1, last);
        let inc = self.inc.clone().map(|mut c| {
            let last = *c.offsets.last().unwrap();
            c.offsets.resize(n + 1, last);
            c
        });
        Graph { n, out, inc }
    }
}

fn check_edge(n: usize, a: NodeId, b: NodeId) -> Result<()> {
    for id in [a, b] {
        if id >= n {
            return Err(Error::NodeOutOfRange {
                side: "graph",
                id,
                len: n,
            });
        }
    }
    if a == b {
        return Err(Error::SelfLoop(a));
    }
    Ok(())
}

/// Which side of the affiliation graph a node id refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Target-graph nodes (users).
    Left,
    /// Auxiliary-graph nodes (venues, actors).
    Right,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Left => "target",
            Side::Right => "auxiliary",
        }
    }
}

/// Simple bipartite graph between target nodes (left) and auxiliary nodes
/// (right), stored in both orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: Csr,
    right: Csr,
}

impl BipartiteGraph {
    /// Builds from `(left, right)` pairs; duplicates are merged.
    pub fn new<I>(n_left: usize, n_right: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut fwd = Vec::new();
        for (u, v) in pairs {
            if u >= n_left {
                return Err(Error::NodeOutOfRange {
                    side: Side::Left.name(),
                    id: u,
                    len: n_left,
                });
            }
            if v >= n_right {
                return Err(Error::NodeOutOfRange {
                    side: Side::Right.name(),
                    id: v,
                    len: n_right,
                });
            }
            fwd.push((u, v));
        }
        let rev = fwd.iter().map(|&(u, v)| (v, u)).collect();
        Ok(BipartiteGraph {
            left: Csr::from_pairs(n_left, fwd),
            right: Csr::from_pairs(n_right, rev),
        })
    }

    pub fn left_count(&self) -> usize {
        self.left.offsets.len() - 1
    }

    pub fn right_count(&self) -> usize {
        self.right.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.left.nnz()
    }

    /// `𝒱_u`: auxiliary nodes affiliated with target node `u`.
    #[inline]
    pub fn venues_of(&self, u: NodeId) -> &[NodeId] {
        self.left.row(u)
    }

    /// `𝒰_v`: target nodes affiliated with auxiliary node `v`.
    #[inline]
    pub fn members_of(&self, v: NodeId) -> &[NodeId] {
        self.right.row(v)
    }

    #[inline]
    pub fn left_degree(&self, u: NodeId) -> usize {
        self.left.len_of(u)
    }

    #[inline]
    pub fn right_degree(&self, v: NodeId) -> usize {
        self.right.len_of(v)
    }

    pub fn contains(&self, u: NodeId, v: NodeId) -> bool {
        u < self.left_count() && self.venues_of(u).binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.left_count()).flat_map(move |u| self.venues_of(u).iter().map(move |&v| (u, v)))
    }
}

/// The triple (target, auxiliary, affiliation).
#[derive(Debug, Clone)]
pub struct HybridNetwork {
    target: Graph,
    auxiliary: Graph,
    affiliation: BipartiteGraph,
}

impl HybridNetwork {
    /// Both graphs must be undirected; use [`Graph::undirected_view`] first
    /// for directed inputs.
    pub fn new(target: Graph, auxiliary: Graph, affiliation: BipartiteGraph) -> Result<Self> {
        if target.is_directed() || auxiliary.is_directed() {
            return Err(Error::InconsistentHybrid(
                "target and auxiliary graphs must be undirected views".into(),
            ));
        }
        if affiliation.left_count() != target.node_count() {
            return Err(Error::InconsistentHybrid(format!(
                "affiliation has {} left nodes but target graph has {}",
                affiliation.left_count(),
                target.node_count()
            )));
        }
        if affiliation.right_count() != auxiliary.node_count() {
            return Err(Error::InconsistentHybrid(format!(
                "affiliation has {} right nodes but auxiliary graph has {}",
                affiliation.right_count(),
                auxiliary.node_count()
            )));
        }
        Ok(HybridNetwork {
            target,
            auxiliary,
            affiliation,
        })
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn auxiliary(&self) -> &Graph {
        &self.auxiliary
    }

    pub fn affiliation(&self) -> &BipartiteGraph {
        &self.affiliation
    }

    /// Affiliation neighbors of `id` on the given side, checked against range.
    pub fn bip_neighbors(&self, side: Side, id: NodeId) -> Result<&[NodeId]> {
        let len = match side {
            Side::Left => self.affiliation.left_count(),
            Side::Right => self.affiliation.right_count(),
        };
        if id >= len {
            return Err(Error::NodeOutOfRange {
                side: side.name(),
                id,
                len,
            });
        }
        Ok(match side {
            Side::Left => self.affiliation.venues_of(id),
            Side::Right => self.affiliation.members_of(id),
        })
    }

    /// Number of target nodes with at least one affiliation edge.
    pub fn covered_target_count(&self) -> usize {
        (0..self.target.node_count())
            .filter(|&u| self.affiliation.left_degree(u) > 0)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_degrees() {
        let g = Graph::undirected(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.degree_sum(), 2 * g.edge_count());
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn duplicate_edges_merge() {
        let g = Graph::undirected(2, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn self_loop_rejected() {
        assert!(matches!(
            Graph::undirected(2, [(1, 1)]),
            Err(Error::SelfLoop(1))
        ));
        assert!(Graph::directed(2, [(0, 0)]).is_err());
    }

    #[test]
    fn out_of_range_edge() {
        assert!(matches!(
            Graph::undirected(2, [(0, 2)]),
            Err(Error::NodeOutOfRange { id: 2, .. })
        ));
    }

    #[test]
    fn single_arc_view() {
        let g = Graph::directed(2, [(0, 1)]).unwrap();
        assert_eq!(g.out_degree(0), 1);
        assert_eq!(g.in_degree(0), 0);
        assert_eq!(g.in_degree(1), 1);
        let u = g.undirected_view();
        assert!(!u.is_directed());
        assert_eq!(u.degree(0), 1);
        assert_eq!(u.degree(1), 1);
    }

    #[test]
    fn reciprocal_arcs_collapse() {
        let g = Graph::directed(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        let u = g.undirected_view();
        assert_eq!(u.edge_count(), 1);
    }

    #[test]
    fn undirected_view_of_undirected_is_identity() {
        let g = Graph::undirected(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.undirected_view(), g);
    }

    #[test]
    fn isolated_left_node() {
        let b = BipartiteGraph::new(3, 2, [(0, 0), (1, 1)]).unwrap();
        let h = HybridNetwork::new(Graph::empty(3), Graph::empty(2), b).unwrap();
        assert!(h.bip_neighbors(Side::Left, 2).unwrap().is_empty());
        assert_eq!(h.affiliation().left_degree(2), 0);
        assert_eq!(h.covered_target_count(), 2);
    }

    #[test]
    fn complete_bipartite_neighbors() {
        let pairs = (0..2).flat_map(|u| (0..3).map(move |v| (u, v)));
        let b = BipartiteGraph::new(2, 3, pairs).unwrap();
        let h = HybridNetwork::new(Graph::empty(2), Graph::empty(3), b).unwrap();
        for u in 0..2 {
            assert_eq!(h.bip_neighbors(Side::Left, u).unwrap(), &[0, 1, 2]);
        }
        assert_eq!(h.bip_neighbors(Side::Right, 1).unwrap(), &[0, 1]);
    }

    #[test]
    fn bip_neighbors_out_of_range() {
        let b = BipartiteGraph::new(1, 1, [(0, 0)]).unwrap();
        let h = HybridNetwork::new(Graph::empty(1), Graph::empty(1), b).unwrap();
        assert!(h.bip_neighbors(Side::Left, 1).is_err());
        assert!(h.bip_neighbors(Side::Right, 5).is_err());
    }

    #[test]
    fn hybrid_size_mismatch() {
        let b = BipartiteGraph::new(2, 1, [(0, 0)]).unwrap();
        assert!(HybridNetwork::new(Graph::empty(3), Graph::empty(1), b).is_err());
    }

    #[test]
    fn directed_target_rejected_by_hybrid() {
        let g = Graph::directed(2, [(0, 1)]).unwrap();
        let b = BipartiteGraph::new(2, 1, [(0, 0)]).unwrap();
        assert!(HybridNetwork::new(g.clone(), Graph::empty(1), b.clone()).is_err());
        assert!(HybridNetwork::new(g.undirected_view(), Graph::empty(1), b).is_ok());
    }

    #[test]
    fn with_extra_nodes_appends_isolated() {
        let g = Graph::undirected(2, [(0, 1)]).unwrap().with_extra_nodes(2);
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.degree(3), 0);
        assert_eq!(g.edge_count(), 1);
    }
}
