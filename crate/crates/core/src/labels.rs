//! Node labels, characteristic functions and exact label distributions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Opaque integer-coded label. Degree labelers use the degree itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(pub u64);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Characteristic function mapping a target node to its label set.
pub trait Labeler: Sync {
    /// Calls `f` once per label carried by `u`.
    fn for_each_label(&self, u: NodeId, f: &mut dyn FnMut(Label));
}

impl<L: Labeler + ?Sized> Labeler for &L {
    fn for_each_label(&self, u: NodeId, f: &mut dyn FnMut(Label)) {
        (**self).for_each_label(u, f)
    }
}

/// Which degree a [`DegreeLabeler`] reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeKind {
    Degree,
    InDegree,
    OutDegree,
}

/// Labels each node with one of its degrees, captured at construction so
/// that in/out degrees of a directed graph stay queryable after the walk
/// switches to the undirected view.
#[derive(Debug, Clone)]
pub struct DegreeLabeler {
    labels: Vec<u64>,
}

impl DegreeLabeler {
    pub fn new(graph: &Graph, kind: DegreeKind) -> Self {
        let labels = (0..graph.node_count())
            .map(|u| match kind {
                DegreeKind::Degree => graph.degree(u),
                DegreeKind::InDegree => graph.in_degree(u),
                DegreeKind::OutDegree => graph.out_degree(u),
            } as u64)
            .collect();
        DegreeLabeler { labels }
    }

    /// Degree label of `u` on the undirected view of `graph`.
    pub fn undirected(graph: &Graph) -> Self {
        Self::new(&graph.undirected_view(), DegreeKind::Degree)
    }

    pub fn label(&self, u: NodeId) -> Label {
        Label(self.labels[u])
    }
}

impl Labeler for DegreeLabeler {
    fn for_each_label(&self, u: NodeId, f: &mut dyn FnMut(Label)) {
        f(Label(self.labels[u]))
    }
}

/// Every node carries the same single label.
#[derive(Debug, Clone, Copy)]
pub struct ConstantLabeler(pub Label);

impl Labeler for ConstantLabeler {
    fn for_each_label(&self, _u: NodeId, f: &mut dyn FnMut(Label)) {
        f(self.0)
    }
}

/// Explicit per-node label sets.
#[derive(Debug, Clone, Default)]
pub struct TableLabeler {
    sets: Vec<Vec<Label>>,
}

impl TableLabeler {
    pub fn new(mut sets: Vec<Vec<Label>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        TableLabeler { sets }
    }
}

impl Labeler for TableLabeler {
    fn for_each_label(&self, u: NodeId, f: &mut dyn FnMut(Label)) {
        for &l in &self.sets[u] {
            f(l)
        }
    }
}

/// `θ_l` for every label with nonzero count.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelDistribution {
    fractions: BTreeMap<Label, f64>,
    n: usize,
}

impl LabelDistribution {
    pub fn get(&self, l: Label) -> f64 {
        self.fractions.get(&l).copied().unwrap_or(0.0)
    }

    /// Population size used as the denominator.
    pub fn population(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.fractions.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, f64)> + '_ {
        self.fractions.iter().map(|(&l, &t)| (l, t))
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }
}

/// Exact `θ_l = (1/n) Σ_u 1{l ∈ L(u)}` over all nodes of `graph`.
pub fn ground_truth_theta(graph: &Graph, labeler: &dyn Labeler) -> Result<LabelDistribution> {
    ground_truth_theta_over(0..graph.node_count(), labeler)
}

/// Exact label distribution over an explicit node subset.
pub fn ground_truth_theta_over<I>(nodes: I, labeler: &dyn Labeler) -> Result<LabelDistribution>
where
    I: IntoIterator<Item = NodeId>,
{
    let mut counts: BTreeMap<Label, u64> = BTreeMap::new();
    let mut n = 0usize;
    for u in nodes {
        n += 1;
        labeler.for_each_label(u, &mut |l| *counts.entry(l).or_default() += 1);
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let fractions = counts
        .into_iter()
        .map(|(l, c)| (l, c as f64 / n as f64))
        .collect();
    Ok(LabelDistribution { fractions, n })
}
