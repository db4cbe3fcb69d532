use crate::error::{Error, Result};
use crate::graph::{HybridNetwork, NodeId};
use crate::rng::{chain_rng, Stream};

use super::AuxDistribution;

/// One auxiliary draw and the target nodes it exposes.
#[derive(Debug, Clone, PartialEq)]
pub struct VsaDraw {
    pub venue: NodeId,
    /// Probability with which `venue` was drawn.
    pub p: f64,
    /// `𝒰_venue`, sorted.
    pub members: Vec<NodeId>,
    /// `d_u^(b)` of each member, recorded at collection time.
    pub member_degrees: Vec<usize>,
}

impl VsaDraw {
    pub fn from_hybrid(hybrid: &HybridNetwork, venue: NodeId, p: f64) -> Self {
        let b = hybrid.affiliation();
        let members = b.members_of(venue).to_vec();
        let member_degrees = members.iter().map(|&u| b.left_degree(u)).collect();
        VsaDraw {
            venue,
            p,
            members,
            member_degrees,
        }
    }
}

/// `B'` i.i.d. auxiliary draws in order.
#[derive(Debug, Clone, PartialEq)]
pub struct VsaSample {
    pub draws: Vec<VsaDraw>,
    pub seed: u64,
}

impl VsaSample {
    /// Total number of target-node samples collected, counting repeats.
    pub fn collected(&self) -> usize {
        self.draws.iter().map(|d| d.members.len()).sum()
    }

    /// Sorted set of distinct target nodes collected.
    pub fn distinct_members(&self) -> Vec<NodeId> {
        let mut all: Vec<NodeId> = self
            .draws
            .iter()
            .flat_map(|d| d.members.iter().copied())
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }
}

/// Draws `b_prime` auxiliary nodes with replacement from `p` and records the
/// full affiliation neighbor list of each.
pub fn vs_a_collect(
    hybrid: &HybridNetwork,
    p: &AuxDistribution,
    b_prime: usize,
    seed: u64,
) -> Result<VsaSample> {
    if b_prime == 0 {
        return Err(Error::InvalidParameter(
            "VS-A budget must be at least 1".into(),
        ));
    }
    p.check_len(hybrid.auxiliary().node_count())?;
    let sampler = p.sampler()?;
    let mut rng = chain_rng(seed, Stream::Auxiliary);
    let draws = (0..b_prime)
        .map(|_| {
            let v = sampler.draw(&mut rng);
            VsaDraw::from_hybrid(hybrid, v, p.prob(v))
        })
        .collect();
    Ok(VsaSample { draws, seed })
}
