use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// `min{1, (q_u q'_x) / (q_x q'_u)}` for moving from `x` to proposed `u`.
///
/// A proposal with `q_u = 0` is never accepted. A proposal with `q'_u = 0`
/// (impossible under the nominal proposal law) is always accepted.
#[inline]
pub fn acceptance_ratio(q_u: f64, qp_u: f64, q_x: f64, qp_x: f64) -> f64 {
    if q_u == 0.0 {
        return 0.0;
    }
    if qp_u == 0.0 {
        return 1.0;
    }
    ((q_u * qp_x) / (q_x * qp_u)).min(1.0)
}

/// Metropolis-Hastings independence chain targeting `desired` with proposals
/// drawn from `proposal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhChain {
    state: NodeId,
    q_state: f64,
    qp_state: f64,
    accepted: usize,
    proposals: usize,
}

impl MhChain {
    pub fn new(start: NodeId, desired: &[f64], proposal: &[f64]) -> Result<Self> {
        let (q, qp) = match (desired.get(start), proposal.get(start)) {
            (Some(&q), Some(&qp)) => (q, qp),
            _ => {
                return Err(Error::NodeOutOfRange {
                    side: "target",
                    id: start,
                    len: desired.len(),
                })
            }
        };
        if q <= 0.0 || qp <= 0.0 {
            return Err(Error::ChainInit(start));
        }
        Ok(MhChain {
            state: start,
            q_state: q,
            qp_state: qp,
            accepted: 0,
            proposals: 0,
        })
    }

    pub fn state(&self) -> NodeId {
        self.state
    }

    pub fn accepted(&self) -> usize {
        self.accepted
    }

    pub fn proposals(&self) -> usize {
        self.proposals
    }
}

/// One MH transition given a proposal already drawn from `proposal_law`.
/// Returns the new state; the state's `q` and `q'` stay cached on the chain.
pub fn mh_step<R: Rng + ?Sized>(
    chain: &mut MhChain,
    proposal: NodeId,
    desired: &[f64],
    proposal_law: &[f64],
    rng: &mut R,
) -> NodeId {
    chain.proposals += 1;
    let (q_u, qp_u) = (desired[proposal], proposal_law[proposal]);
    let r = acceptance_ratio(q_u, qp_u, chain.q_state, chain.qp_state);
    let accept = r >= 1.0 || (r > 0.0 && rng.gen::<f64>() < r);
    if accept {
        chain.state = proposal;
        chain.q_state = q_u;
        chain.qp_state = qp_u;
        chain.accepted += 1;
    }
    chain.state
}
