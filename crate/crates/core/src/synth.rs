//! Seeded synthetic networks: Barabási–Albert graphs, the three-graph hybrid
//! used for the synthetic experiments, and a small LBSN-style city with
//! geolocated venues.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{Region, Venue, VenueIndex};
use crate::graph::{BipartiteGraph, Graph, HybridNetwork, NodeId};
use crate::rng::{chain_rng, mix64, stream_rng, Stream};

/// Preferential-attachment graph on `n` nodes.
///
/// Nodes `0..=m` start as a clique. Every later node attaches to `m` distinct
/// earlier nodes, each picked from the running list of edge endpoints so the
/// pick is proportional to current degree.
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(Error::InvalidParameter(format!(
            "BA attachment count m={m} must satisfy 1 <= m < n={n}"
        )));
    }
    let mut rng = chain_rng(seed, Stream::Setup);
    let core = m + 1;
    let mut edges = Vec::with_capacity(ba_edge_count(n, m));
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * ba_edge_count(n, m));
    for a in 0..core {
        for b in a + 1..core {
            edges.push((a, b));
            endpoints.push(a);
            endpoints.push(b);
        }
    }
    let mut picks: Vec<NodeId> = Vec::with_capacity(m);
    for t in core..n {
        picks.clear();
        while picks.len() < m {
            let cand = endpoints[rng.gen_range(0..endpoints.len())];
            if !picks.contains(&cand) {
                picks.push(cand);
            }
        }
        for &p in &picks {
            edges.push((t, p));
            endpoints.push(t);
            endpoints.push(p);
        }
    }
    Graph::undirected(n, edges)
}

/// Edge count of [`generate_ba`]: the `(m+1)`-clique plus `m` per later node.
pub fn ba_edge_count(n: usize, m: usize) -> usize {
    m * (m + 1) / 2 + (n - m - 1) * m
}

fn default_m1() -> usize {
    2
}

fn default_m2() -> usize {
    5
}

fn default_m3() -> usize {
    10
}

/// Parameters of the synthetic hybrid network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub n_per_graph: usize,
    /// Attachment count of the first target component.
    #[serde(default = "default_m1")]
    pub m1: usize,
    /// Attachment count of the auxiliary graph.
    #[serde(default = "default_m2")]
    pub m2: usize,
    /// Attachment count of the second target component.
    #[serde(default = "default_m3")]
    pub m3: usize,
    pub extra_pairs: usize,
    pub seed: u64,
}

impl SynthConfig {
    /// Average degrees 4, 10 and 20 at the requested size.
    pub fn with_size(n_per_graph: usize, extra_pairs: usize, seed: u64) -> Self {
        SynthConfig {
            n_per_graph,
            m1: 2,
            m2: 5,
            m3: 10,
            extra_pairs,
            seed,
        }
    }

    /// Ten-times-smaller version of the published setup.
    pub fn desk_scale(seed: u64) -> Self {
        Self::with_size(10_000, 20_000, seed)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_per_graph;
        for (name, m) in [("m1", self.m1), ("m2", self.m2), ("m3", self.m3)] {
            if m == 0 || m >= n {
                return Err(Error::InvalidParameter(format!(
                    "{name}={m} must satisfy 1 <= {name} < n_per_graph={n}"
                )));
            }
        }
        let capacity = (2 * n).saturating_mul(n);
        if 2 * n + self.extra_pairs > capacity {
            return Err(Error::InvalidParameter(format!(
                "extra_pairs={} exceeds the {} free affiliation slots",
                self.extra_pairs,
                capacity - 2 * n
            )));
        }
        Ok(())
    }
}

/// Synthetic hybrid with its construction bookkeeping.
#[derive(Debug, Clone)]
pub struct SyntheticHybrid {
    pub network: HybridNetwork,
    /// Target nodes `0..split` belong to the first BA component, the rest to
    /// the second.
    pub split: usize,
    pub bridge: (NodeId, NodeId),
}

impl SyntheticHybrid {
    pub fn component_of(&self, u: NodeId) -> usize {
        usize::from(u >= self.split)
    }
}

/// Target = BA(n, m1) ⊔ BA(n, m3) plus one bridge edge between uniformly
/// chosen endpoints; auxiliary = BA(n, m2). Every target node gets one
/// uniformly chosen venue, then `extra_pairs` further distinct pairs are
/// drawn uniformly (re-drawing collisions).
pub fn build_synthetic_hybrid(cfg: &SynthConfig) -> Result<SyntheticHybrid> {
    cfg.validate()?;
    let n = cfg.n_per_graph;
    let g1 = generate_ba(n, cfg.m1, mix64(cfg.seed ^ 1))?;
    let g2 = generate_ba(n, cfg.m2, mix64(cfg.seed ^ 2))?;
    let g3 = generate_ba(n, cfg.m3, mix64(cfg.seed ^ 3))?;

    let mut rng = stream_rng(cfg.seed, 16);
    let bridge = (rng.gen_range(0..n), n + rng.gen_range(0..n));
    let union = g1.disjoint_union(&g3)?;
    let target = Graph::undirected(2 * n, union.edges().chain(std::iter::once(bridge)))?;

    let mut pairs: HashSet<(NodeId, NodeId)> = HashSet::with_capacity(2 * n + cfg.extra_pairs);
    let mut ordered = Vec::with_capacity(2 * n + cfg.extra_pairs);
    for u in 0..2 * n {
        let v = rng.gen_range(0..n);
        pairs.insert((u, v));
        ordered.push((u, v));
    }
    let mut added = 0;
    while added < cfg.extra_pairs {
        let pair = (rng.gen_range(0..2 * n), rng.gen_range(0..n));
        if pairs.insert(pair) {
            ordered.push(pair);
            added += 1;
        }
    }
    let affiliation = BipartiteGraph::new(2 * n, n, ordered)?;
    Ok(SyntheticHybrid {
        network: HybridNetwork::new(target, g2, affiliation)?,
        split: n,
        bridge,
    })
}

/// Parameters of a synthetic location-based social network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CityConfig {
    pub users: usize,
    pub venues: usize,
    /// BA attachment count of the friendship graph.
    pub social_m: usize,
    /// Number of venue clusters (neighborhoods).
    pub clusters: usize,
    /// Mean number of distinct venues per user.
    pub mean_checkins: f64,
    pub seed: u64,
}

impl CityConfig {
    pub fn small(seed: u64) -> Self {
        CityConfig {
            users: 1_000,
            venues: 1_000,
            social_m: 3,
            clusters: 8,
            mean_checkins: 3.0,
            seed,
        }
    }
}

/// LBSN-style city: users form a BA friendship graph, venues are scattered in
/// Gaussian clusters inside the NYC box, and each user checks in at venues
/// mostly in a home cluster. The auxiliary graph has no edges.
#[derive(Debug, Clone)]
pub struct SyntheticCity {
    pub network: HybridNetwork,
    pub venues: VenueIndex,
    pub bbox: Region,
}

pub fn synthetic_city(cfg: &CityConfig) -> Result<SyntheticCity> {
    if cfg.users < 2 || cfg.venues == 0 || cfg.clusters == 0 || cfg.mean_checkins < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "degenerate city config {cfg:?}"
        )));
    }
    let bbox = Region::nyc();
    let social = generate_ba(
        cfg.users,
        cfg.social_m.min(cfg.users - 1).max(1),
        mix64(cfg.seed ^ 5),
    )?;
    let mut rng = stream_rng(cfg.seed, 17);

    let centers: Vec<(f64, f64)> = (0..cfg.clusters)
        .map(|_| {
            (
                rng.gen_range(bbox.lat_min + 0.15..bbox.lat_max - 0.15),
                rng.gen_range(bbox.lon_min + 0.15..bbox.lon_max - 0.15),
            )
        })
        .collect();
    let mut by_cluster: Vec<Vec<NodeId>> = vec![Vec::new(); cfg.clusters];
    let mut venues = Vec::with_capacity(cfg.venues);
    for id in 0..cfg.venues {
        let c = rng.gen_range(0..cfg.clusters);
        let spread = 0.02 + 0.06 * (c as f64 / cfg.clusters as f64);
        let lat = (centers[c].0 + spread * gaussian(&mut rng)).clamp(bbox.lat_min, bbox.lat_max);
        let lon = (centers[c].1 + spread * gaussian(&mut rng)).clamp(bbox.lon_min, bbox.lon_max);
        venues.push(Venue { id, lat, lon });
        by_cluster[c].push(id);
    }
    let nonempty: Vec<usize> = (0..cfg.clusters)
        .filter(|&c| !by_cluster[c].is_empty())
        .collect();

    // Geometric count with the requested mean, at least one check-in each.
    let stop = 1.0 / cfg.mean_checkins;
    let mut pairs = Vec::new();
    for u in 0..cfg.users {
        let home = nonempty[rng.gen_range(0..nonempty.len())];
        loop {
            let v = if rng.gen_bool(0.7) {
                let pool = &by_cluster[home];
                pool[rng.gen_range(0..pool.len())]
            } else {
                rng.gen_range(0..cfg.venues)
            };
            pairs.push((u, v));
            if rng.gen_bool(stop) {
                break;
            }
        }
    }
    let affiliation = BipartiteGraph::new(cfg.users, cfg.venues, pairs)?;
    let network = HybridNetwork::new(social, Graph::empty(cfg.venues), affiliation)?;
    Ok(SyntheticCity {
        network,
        venues: VenueIndex::new(venues)?,
        bbox,
    })
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; one variate is enough here.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
