//! Plain-text edge lists and LBSN check-in dumps.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::geo::{Region, Venue, VenueIndex};
use crate::graph::{BipartiteGraph, Graph, HybridNetwork, NodeId};

/// Bidirectional map between external string ids and dense node ids, in
/// first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdDictionary {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl IdDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn get_or_insert(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    pub fn name(&self, id: NodeId) -> Option<&str> {
        self.names.get(id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Dictionary mapping `"0".."n-1"` to themselves.
    pub fn identity(n: usize) -> Self {
        let mut d = Self::new();
        for i in 0..n {
            d.get_or_insert(&i.to_string());
        }
        d
    }
}

fn read_pairs(path: &Path, dict: &mut IdDictionary) -> Result<Vec<(NodeId, NodeId)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    let mut loops = 0usize;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (a, b) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: format!("expected two ids, got {line:?}"),
                })
            }
        };
        let (a, b) = (dict.get_or_insert(a), dict.get_or_insert(b));
        if a == b {
            loops += 1;
            continue;
        }
        pairs.push((a, b));
    }
    if loops > 0 {
        warn!("{}: dropped {loops} self-loop lines", path.display());
    }
    Ok(pairs)
}

/// Loads an undirected simple graph from `u v` lines. Duplicates in either
/// orientation merge, self-loops are dropped and `#` lines are comments.
pub fn load_edge_list(path: &Path) -> Result<(Graph, IdDictionary)> {
    let mut dict = IdDictionary::new();
    let pairs = read_pairs(path, &mut dict)?;
    Ok((Graph::undirected(dict.len(), pairs)?, dict))
}

/// As [`load_edge_list`], reading each line as an arc `u -> v`.
pub fn load_edge_list_directed(path: &Path) -> Result<(Graph, IdDictionary)> {
    let mut dict = IdDictionary::new();
    let pairs = read_pairs(path, &mut dict)?;
    Ok((Graph::directed(dict.len(), pairs)?, dict))
}

/// Writes one `u v` line per edge using the dictionary's external names, or
/// the numeric ids when none is given.
pub fn write_edge_list(path: &Path, graph: &Graph, dict: Option<&IdDictionary>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut line = |a: NodeId, b: NodeId| -> std::io::Result<()> {
        match dict {
            Some(d) => writeln!(
                w,
                "{} {}",
                d.name(a).unwrap_or("?"),
                d.name(b).unwrap_or("?")
            ),
            None => writeln!(w, "{a} {b}"),
        }
    };
    if graph.is_directed() {
        for u in 0..graph.node_count() {
            for &v in graph.neighbors(u) {
                line(u, v).map_err(|e| Error::io(path, e))?;
            }
        }
    } else {
        for (a, b) in graph.edges() {
            line(a, b).map_err(|e| Error::io(path, e))?;
        }
    }
    drop(line);
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes affiliation pairs as `user venue` lines of numeric ids.
pub fn write_affiliation(path: &Path, b: &BipartiteGraph) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for (u, v) in b.edges() {
        writeln!(w, "{u} {v}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads `user venue` numeric pairs into a bipartite graph with the given
/// side sizes.
pub fn load_affiliation(path: &Path, n_left: usize, n_right: usize) -> Result<BipartiteGraph> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut pairs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            msg,
        };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(bad(format!("expected `user venue`, got {line:?}")));
        }
        let u = f[0]
            .parse::<NodeId>()
            .map_err(|e| bad(format!("bad user id: {e}")))?;
        let v = f[1]
            .parse::<NodeId>()
            .map_err(|e| bad(format!("bad venue id: {e}")))?;
        if u >= n_left || v >= n_right {
            return Err(bad(format!("pair ({u}, {v}) outside {n_left} x {n_right}")));
        }
        pairs.push((u, v));
    }
    BipartiteGraph::new(n_left, n_right, pairs)
}

/// One check-in: `user<TAB>timestamp<TAB>lat<TAB>lon<TAB>venue`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckinRecord {
    pub user: String,
    pub timestamp: String,
    pub lat: f64,
    pub lon: f64,
    pub venue: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckinLoad {
    pub records: Vec<CheckinRecord>,
    /// Lines skipped for a bad field count, empty id or bad coordinate.
    pub malformed: usize,
    /// Well-formed records outside the bounding box.
    pub outside: usize,
}

/// Parses a check-in file, keeping records inside `bbox` (inclusive) when
/// one is given. Malformed lines are skipped and counted.
pub fn load_checkins(path: &Path, bbox: Option<&Region>) -> Result<CheckinLoad> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = CheckinLoad::default();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = trimmed.split('\t').collect();
        let parsed = (f.len() == 5 && !f[0].is_empty() && !f[4].is_empty()).then(|| {
            (
                f[2].trim().parse::<f64>().ok(),
                f[3].trim().parse::<f64>().ok(),
            )
        });
        let (lat, lon) = match parsed {
            Some((Some(lat), Some(lon)))
                if (-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon) =>
            {
                (lat, lon)
            }
            _ => {
                out.malformed += 1;
                continue;
            }
        };
        if bbox.is_some_and(|b| !b.contains(lat, lon)) {
            out.outside += 1;
            continue;
        }
        out.records.push(CheckinRecord {
            user: f[0].to_owned(),
            timestamp: f[1].to_owned(),
            lat,
            lon,
            venue: f[4].to_owned(),
        });
    }
    if out.malformed > 0 {
        warn!(
            "{}: skipped {} malformed check-in lines",
            path.display(),
            out.malformed
        );
    }
    Ok(out)
}

/// Hybrid network assembled from a friendship graph and check-ins.
#[derive(Debug, Clone)]
pub struct LbsnHybrid {
    pub network: HybridNetwork,
    pub venues: VenueIndex,
    /// User dictionary; the social dictionary extended by check-in users
    /// missing from it.
    pub users: IdDictionary,
    pub venue_ids: IdDictionary,
    /// Users that appeared only in check-ins and became isolated nodes.
    pub unresolved_users: usize,
    /// Check-ins whose venue was seen before at other coordinates.
    pub coordinate_conflicts: usize,
    /// Check-in count per deduplicated `(user, venue)` pair.
    pub visit_counts: BTreeMap<(NodeId, NodeId), usize>,
}

/// Users are the target side, venues the auxiliary side with no edges, and
/// deduplicated `(user, venue)` check-ins the affiliation. A venue keeps its
/// first-seen coordinates.
pub fn build_hybrid_from_lbsn(
    social: &Graph,
    social_ids: &IdDictionary,
    checkins: &[CheckinRecord],
) -> Result<LbsnHybrid> {
    if social_ids.len() != social.node_count() {
        return Err(Error::InconsistentHybrid(format!(
            "social dictionary has {} ids for {} nodes",
            social_ids.len(),
            social.node_count()
        )));
    }
    let social = social.undirected_view();
    let mut users = social_ids.clone();
    let mut venue_ids = IdDictionary::new();
    let mut venues: Vec<Venue> = Vec::new();
    let mut conflicts = 0usize;
    let mut visit_counts: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
    for r in checkins {
        let u = users.get_or_insert(&r.user);
        let before = venue_ids.len();
        let v = venue_ids.get_or_insert(&r.venue);
        if v == before {
            venues.push(Venue {
                id: v,
                lat: r.lat,
                lon: r.lon,
            });
        } else if venues[v].lat != r.lat || venues[v].lon != r.lon {
            conflicts += 1;
        }
        *visit_counts.entry((u, v)).or_default() += 1;
    }
    if conflicts > 0 {
        warn!("{conflicts} check-ins disagree with their venue's first-seen coordinates");
    }
    let unresolved = users.len() - social.node_count();
    let target = social.with_extra_nodes(unresolved);
    let affiliation =
        BipartiteGraph::new(users.len(), venue_ids.len(), visit_counts.keys().copied())?;
    let network = HybridNetwork::new(target, Graph::empty(venue_ids.len()), affiliation)?;
    Ok(LbsnHybrid {
        network,
        venues: VenueIndex::new(venues)?,
        users,
        venue_ids,
        unresolved_users: unresolved,
        coordinate_conflicts: conflicts,
        visit_counts,
    })
}
