use std::path::Path;

use log::info;

use crate::error::{Error, Result};
use crate::geo::{Region, VenueIndex};
use crate::graph::{BipartiteGraph, Graph, HybridNetwork, NodeId};
use crate::ingest::{
    build_hybrid_from_lbsn, load_checkins, load_edge_list, load_edge_list_directed,
};
use crate::labels::{
    ground_truth_theta, ground_truth_theta_over, DegreeKind, DegreeLabeler, LabelDistribution,
};
use crate::samplers::uniform_desired;
use crate::synth::{build_synthetic_hybrid, synthetic_city};

use super::config::NetworkSource;

/// Venue coordinates and the region RRZI zooms from.
#[derive(Debug, Clone)]
pub struct GeoLayer {
    pub index: VenueIndex,
    pub bbox: Region,
}

/// A loaded network with everything replications share: labels, exact
/// label distributions and walk start candidates.
#[derive(Debug, Clone)]
pub struct PreparedNetwork {
    pub hybrid: HybridNetwork,
    pub labeler: DegreeLabeler,
    /// `θ` over all target nodes.
    pub truth: LabelDistribution,
    /// `θ` over target nodes with at least one affiliation edge, the
    /// population vertex sampling can reach.
    pub covered_truth: LabelDistribution,
    pub geo: Option<GeoLayer>,
    /// First node of the second target component, for the synthetic hybrid.
    pub component_split: Option<usize>,
    /// Target nodes with positive degree.
    pub walk_starts: Vec<NodeId>,
}

impl PreparedNetwork {
    /// `label_graph` supplies the labels; it may be the directed original of
    /// the hybrid's target graph.
    pub fn new(
        hybrid: HybridNetwork,
        label_graph: &Graph,
        kind: DegreeKind,
        geo: Option<GeoLayer>,
    ) -> Result<Self> {
        if label_graph.node_count() != hybrid.target().node_count() {
            return Err(Error::InconsistentHybrid(
                "label graph size differs from the target graph".into(),
            ));
        }
        let labeler = DegreeLabeler::new(label_graph, kind);
        let truth = ground_truth_theta(hybrid.target(), &labeler)?;
        let b = hybrid.affiliation();
        let covered: Vec<NodeId> = (0..b.left_count())
            .filter(|&u| b.left_degree(u) > 0)
            .collect();
        let covered_truth = if covered.is_empty() {
            truth.clone()
        } else {
            ground_truth_theta_over(covered, &labeler)?
        };
        let g = hybrid.target();
        let walk_starts = (0..g.node_count()).filter(|&u| g.degree(u) > 0).collect();
        Ok(PreparedNetwork {
            hybrid,
            labeler,
            truth,
            covered_truth,
            geo,
            component_split: None,
            walk_starts,
        })
    }

    pub fn target_size(&self) -> usize {
        self.hybrid.target().node_count()
    }

    /// Uniform desired jump distribution over affiliation-covered nodes.
    pub fn desired(&self) -> Result<Vec<f64>> {
        uniform_desired(&self.hybrid)
    }
}

pub fn prepare_network(source: &NetworkSource, kind: DegreeKind) -> Result<PreparedNetwork> {
    match source {
        NetworkSource::Synthetic(cfg) => {
            let s = build_synthetic_hybrid(cfg)?;
            let label_graph = s.network.target().clone();
            let mut p = PreparedNetwork::new(s.network, &label_graph, kind, None)?;
            p.component_split = Some(s.split);
            Ok(p)
        }
        NetworkSource::City(cfg) => {
            let c = synthetic_city(cfg)?;
            let label_graph = c.network.target().clone();
            let geo = GeoLayer {
                index: c.venues,
                bbox: c.bbox,
            };
            PreparedNetwork::new(c.network, &label_graph, kind, Some(geo))
        }
        NetworkSource::Files {
            target,
            auxiliary,
            affiliation,
            directed,
        } => {
            let (hybrid, label_graph) =
                load_hybrid_files(target, auxiliary, affiliation, *directed)?;
            PreparedNetwork::new(hybrid, &label_graph, kind, None)
        }
        NetworkSource::Lbsn {
            social,
            checkins,
            bbox,
            directed,
        } => {
            let (graph, ids) = if *directed {
                load_edge_list_directed(social)?
            } else {
                load_edge_list(social)?
            };
            let load = load_checkins(checkins, bbox.as_ref())?;
            info!(
                "{} check-ins kept, {} outside the box, {} malformed",
                load.records.len(),
                load.outside,
                load.malformed
            );
            let lbsn = build_hybrid_from_lbsn(&graph, &ids, &load.records)?;
            let label_graph = graph.with_extra_nodes(lbsn.unresolved_users);
            let bbox = match bbox {
                Some(b) => *b,
                None => bounding_box(&lbsn.venues)?,
            };
            let geo = GeoLayer {
                index: lbsn.venues,
                bbox,
            };
            PreparedNetwork::new(lbsn.network, &label_graph, kind, Some(geo))
        }
    }
}

fn bounding_box(index: &VenueIndex) -> Result<Region> {
    let mut it = index.iter();
    let first = it.next().ok_or(Error::EmptyRegion)?;
    let (mut a, mut b, mut c, mut d) = (first.lat, first.lat, first.lon, first.lon);
    for v in it {
        a = a.min(v.lat);
        b = b.max(v.lat);
        c = c.min(v.lon);
        d = d.max(v.lon);
    }
    // Widen degenerate extents so the region stays valid.
    let pad = 1e-6;
    Region::new(
        (a - pad).max(-90.0),
        (b + pad).min(90.0),
        (c - pad).max(-180.0),
        (d + pad).min(180.0),
    )
}

/// Loads target and auxiliary edge lists and `user venue` affiliation
/// pairs keyed by the same external ids. Ids that appear only in the
/// affiliation file become isolated nodes. Returns the hybrid and the graph
/// labels are read from (the directed original when `directed`).
pub fn load_hybrid_files(
    target: &Path,
    auxiliary: &Path,
    affiliation: &Path,
    directed: bool,
) -> Result<(HybridNetwork, Graph)> {
    let (g, mut users) = if directed {
        load_edge_list_directed(target)?
    } else {
        load_edge_list(target)?
    };
    let (gp, mut venues) = load_edge_list(auxiliary)?;
    let text = std::fs::read_to_string(affiliation).map_err(|e| Error::io(affiliation, e))?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(Error::Parse {
                path: affiliation.to_path_buf(),
                line: i + 1,
                msg: format!("expected `user venue`, got {line:?}"),
            });
        }
        pairs.push((users.get_or_insert(f[0]), venues.get_or_insert(f[1])));
    }
    let g = g.with_extra_nodes(users.len() - g.node_count());
    let gp = gp.with_extra_nodes(venues.len() - gp.node_count());
    let b = BipartiteGraph::new(users.len(), venues.len(), pairs)?;
    let hybrid = HybridNetwork::new(g.undirected_view(), gp, b)?;
    Ok((hybrid, g))
}

/// Writes a hybrid as the three files [`load_hybrid_files`] reads, using
/// numeric ids.
pub fn write_hybrid_files(
    hybrid: &HybridNetwork,
    target: &Path,
    auxiliary: &Path,
    affiliation: &Path,
) -> Result<()> {
    use crate::ingest::{write_affiliation, write_edge_list};
    write_edge_list(target, hybrid.target(), None)?;
    write_edge_list(auxiliary, hybrid.auxiliary(), None)?;
    write_affiliation(affiliation, hybrid.affiliation())
}
