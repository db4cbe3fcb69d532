use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::{vsa_theta_known_n, vsa_theta_unknown_n, EstimateReport, Method};
use crate::graph::HybridNetwork;
use crate::labels::Labeler;
use crate::rng::{chain_rng, Stream};
use crate::samplers::{VsaDraw, VsaSample};

use super::index::Cell;
use super::{Region, Venue, VenueIndex};

/// Zoom levels allowed before giving up on coincident venues.
pub const MAX_ZOOM_DEPTH: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct RrziDraw {
    pub venue: Venue,
    /// Probability that this draw returns `venue`.
    pub p: f64,
    /// Quadrant chosen at each zoom level (0 = SW, 1 = SE, 2 = NW, 3 = NE).
    pub zoom_path: Vec<u8>,
    pub api_calls: usize,
}

/// One venue draw by Random Region Zoom-In with the seed's auxiliary stream.
pub fn rrzi_draw(index: &VenueIndex, root: &Region, k: usize, seed: u64) -> Result<RrziDraw> {
    let mut rng = chain_rng(seed, Stream::Auxiliary);
    rrzi_draw_with(index, root, k, &mut rng)
}

/// Zooms from `root` into uniformly chosen nonempty quadrants until the
/// query is no longer truncated at `k`, then picks one venue of the leaf
/// uniformly. Every query, including the emptiness probes, counts as an
/// API call.
pub fn rrzi_draw_with<R: Rng + ?Sized>(
    index: &VenueIndex,
    root: &Region,
    k: usize,
    rng: &mut R,
) -> Result<RrziDraw> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "query cap K must be at least 1".into(),
        ));
    }
    root.validate()?;
    let mut cell = Cell::root(*root);
    let (mut venues, mut truncated) = index.query_cell(&cell, k);
    let mut api_calls = 1;
    if venues.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut p = 1.0;
    let mut zoom_path = Vec::new();
    while truncated {
        if zoom_path.len() >= MAX_ZOOM_DEPTH || cell.is_degenerate() {
            return Err(Error::ZoomDepthExceeded(MAX_ZOOM_DEPTH));
        }
        let quads = cell.quadrants();
        let probes: Vec<(Vec<Venue>, bool)> =
            quads.iter().map(|q| index.query_cell(q, k)).collect();
        api_calls += 4;
        let nonempty: Vec<usize> = (0..4).filter(|&i| !probes[i].0.is_empty()).collect();
        let pick = nonempty[rng.gen_range(0..nonempty.len())];
        p /= nonempty.len() as f64;
        zoom_path.push(pick as u8);
        cell = quads[pick];
        (venues, truncated) = probes.into_iter().nth(pick).expect("four probes");
    }
    let m = venues.len();
    let venue = venues[rng.gen_range(0..m)];
    Ok(RrziDraw {
        venue,
        p: p / m as f64,
        zoom_path,
        api_calls,
    })
}

/// Vertex-sampling estimates from RRZI venue draws, in both the known-`n`
/// and the ratio form.
#[derive(Debug, Clone, PartialEq)]
pub struct RrziVsaReport {
    pub known_n: EstimateReport,
    pub unknown_n: EstimateReport,
    /// Distinct target nodes affiliated with a venue in the root region.
    pub n_known: usize,
    pub api_calls: usize,
    pub sample: VsaSample,
}

pub fn rrzi_vsa_estimate(
    hybrid: &HybridNetwork,
    index: &VenueIndex,
    root: &Region,
    k: usize,
    b_prime: usize,
    labeler: &dyn Labeler,
    seed: u64,
) -> Result<RrziVsaReport> {
    if b_prime == 0 {
        return Err(Error::InvalidParameter(
            "VS-A budget must be at least 1".into(),
        ));
    }
    let n_aux = hybrid.auxiliary().node_count();
    if let Some(v) = index.iter().find(|v| v.id >= n_aux) {
        return Err(Error::InconsistentHybrid(format!(
            "venue {} has no auxiliary node ({n_aux} nodes)",
            v.id
        )));
    }
    let (in_root, _) = index.query_region(root, index.len().max(1))?;
    let b = hybrid.affiliation();
    let mut users: Vec<_> = in_root
        .iter()
        .flat_map(|v| b.members_of(v.id).iter().copied())
        .collect();
    users.sort_unstable();
    users.dedup();

    let mut rng = chain_rng(seed, Stream::Auxiliary);
    let mut api_calls = 0;
    let mut draws = Vec::with_capacity(b_prime);
    for _ in 0..b_prime {
        let d = rrzi_draw_with(index, root, k, &mut rng)?;
        api_calls += d.api_calls;
        draws.push(VsaDraw::from_hybrid(hybrid, d.venue.id, d.p));
    }
    let sample = VsaSample { draws, seed };
    let mut unknown_n = vsa_theta_unknown_n(&sample, labeler)?;
    unknown_n.method = Method::RrziVsa;
    let mut known_n = vsa_theta_known_n(&sample, labeler, users.len().max(1))?;
    known_n.method = Method::RrziVsa;
    Ok(RrziVsaReport {
        known_n,
        unknown_n,
        n_known: users.len(),
        api_calls,
        sample,
    })
}
