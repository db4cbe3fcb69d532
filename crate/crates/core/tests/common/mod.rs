#![allow(dead_code)]

use std::collections::BTreeMap;

use hybrid_sampling::geo::{Region, Venue};
use hybrid_sampling::{BipartiteGraph, Graph, HybridNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, w));
            }
        }
    }
    Graph::undirected(n, edges).unwrap()
}

/// Connected random graph: a random spanning tree plus extra edges.
pub fn connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|u| (rng.gen_range(0..u), u)).collect();
    for u in 0..n {
        for w in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, w));
            }
        }
    }
    Graph::undirected(n, edges).unwrap()
}

/// Random hybrid. With `full` every node on both sides has an affiliation
/// edge and the target graph is connected.
pub fn random_hybrid(seed: u64, n: usize, n_aux: usize, full: bool) -> HybridNetwork {
    let mut r = rng(seed);
    let target = if full {
        connected_graph(&mut r, n, 0.15)
    } else {
        random_graph(&mut r, n, 0.2)
    };
    let aux = random_graph(&mut r, n_aux, 0.2);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in 0..n_aux {
            if r.gen_bool(0.2) {
                pairs.push((u, v));
            }
        }
    }
    if full {
        for u in 0..n {
            pairs.push((u, r.gen_range(0..n_aux)));
        }
        for v in 0..n_aux {
            pairs.push((r.gen_range(0..n), v));
        }
    }
    let b = BipartiteGraph::new(n, n_aux, pairs).unwrap();
    HybridNetwork::new(target, aux, b).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn frequencies(nodes: impl Iterator<Item = usize>, n: usize) -> Vec<f64> {
    let mut counts = vec![0usize; n];
    let mut total = 0usize;
    for u in nodes {
        counts[u] += 1;
        total += 1;
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Rectangle with closed lower edges and optionally closed upper edges.
#[derive(Clone, Copy)]
struct Rect {
    lat: (f64, f64),
    lon: (f64, f64),
    closed_lat: bool,
    closed_lon: bool,
}

impl Rect {
    fn holds(&self, v: &Venue) -> bool {
        let lat_ok = v.lat >= self.lat.0
            && (v.lat < self.lat.1 || (self.closed_lat && v.lat == self.lat.1));
        let lon_ok = v.lon >= self.lon.0
            && (v.lon < self.lon.1 || (self.closed_lon && v.lon == self.lon.1));
        lat_ok && lon_ok
    }

    fn split(&self) -> [Rect; 4] {
        let lm = self.lat.0 + (self.lat.1 - self.lat.0) / 2.0;
        let om = self.lon.0 + (self.lon.1 - self.lon.0) / 2.0;
        let r = |lat, lon, closed_lat, closed_lon| Rect {
            lat,
            lon,
            closed_lat,
            closed_lon,
        };
        [
            r((self.lat.0, lm), (self.lon.0, om), false, false),
            r((self.lat.0, lm), (om, self.lon.1), false, self.closed_lon),
            r((lm, self.lat.1), (self.lon.0, om), self.closed_lat, false),
            r((lm, self.lat.1), (om, self.lon.1), self.closed_lat, self.closed_lon),
        ]
    }
}

/// Exact draw law by full recursion over the quadtree, by linear scans.
pub fn exact_law(venues: &[Venue], root: &Region, k: usize) -> BTreeMap<usize, f64> {
    fn go(venues: &[Venue], cell: Rect, k: usize, mass: f64, out: &mut BTreeMap<usize, f64>) {
        let inside: Vec<&Venue> = venues.iter().filter(|v| cell.holds(v)).collect();
        if inside.len() <= k {
            for v in &inside {
                *out.entry(v.id).or_default() += mass / inside.len() as f64;
            }
            return;
        }
        let kids: Vec<Rect> = cell
            .split()
            .into_iter()
            .filter(|q| venues.iter().any(|v| q.holds(v)))
            .collect();
        for q in &kids {
            go(venues, *q, k, mass / kids.len() as f64, out);
        }
    }
    let mut out = BTreeMap::new();
    let root = Rect {
        lat: (root.lat_min, root.lat_max),
        lon: (root.lon_min, root.lon_max),
        closed_lat: true,
        closed_lon: true,
    };
    go(venues, root, k, 1.0, &mut out);
    out
}

pub fn scatter(seed: u64, m: usize) -> Vec<Venue> {
    let mut r = rng(seed);
    let bbox = Region::nyc();
    (0..m)
        .map(|id| Venue {
            id,
            lat: r.gen_range(bbox.lat_min..=bbox.lat_max),
            lon: r.gen_range(bbox.lon_min..=bbox.lon_max),
        })
        .collect()
}
