use log::debug;
use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::graph::{HybridNetwork, NodeId};
use crate::rng::{chain_rng, ChainRng, Stream};

use super::mh::{mh_step, MhChain};
use super::weights::WeightSystem;
use super::{QueryCounts, SampleTrace, SeenSet, Visit};

/// Initial states `(x_1, x'_1, y_1)` of the target walk, the MH chain and the
/// auxiliary walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoupledStarts {
    pub target: NodeId,
    pub metropolis: NodeId,
    pub auxiliary: NodeId,
}

impl CoupledStarts {
    /// `x'_1 = x_1` when `q` and `q'` are positive there, otherwise the
    /// smallest node where both are. `y_1` is a uniform venue of `x_1` drawn
    /// from the setup stream, or the smallest auxiliary node that can move.
    pub fn default_for(
        hybrid: &HybridNetwork,
        weights: &WeightSystem,
        target: NodeId,
        seed: u64,
    ) -> Result<Self> {
        let n = hybrid.target().node_count();
        if target >= n {
            return Err(Error::NodeOutOfRange {
                side: "target",
                id: target,
                len: n,
            });
        }
        let ok = |u: NodeId| weights.q[u] > 0.0 && weights.q_prime[u] > 0.0;
        let metropolis = if ok(target) {
            target
        } else {
            (0..n).find(|&u| ok(u)).ok_or(Error::ChainInit(target))?
        };
        let venues = hybrid.affiliation().venues_of(target);
        let auxiliary = if venues.is_empty() {
            let gp = hybrid.auxiliary();
            (0..gp.node_count())
                .find(|&v| gp.degree(v) > 0 || hybrid.affiliation().right_degree(v) > 0)
                .ok_or(Error::AuxiliaryAbsorbed { aux: 0, target })?
        } else {
            let mut rng = chain_rng(seed, Stream::Setup);
            venues[rng.gen_range(0..venues.len())]
        };
        Ok(CoupledStarts {
            target,
            metropolis,
            auxiliary,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RwtRwaOptions {
    /// Rounds that advance only the auxiliary walk and the MH chain before
    /// the target walk starts.
    pub mh_burn_in: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledRun {
    pub trace: SampleTrace,
    /// `y_1, ..., y_B`.
    pub auxiliary_path: Vec<NodeId>,
    /// `x'_1, ..., x'_B` (after burn-in).
    pub metropolis_path: Vec<NodeId>,
    pub accepted: usize,
    pub proposals: usize,
    /// Auxiliary jumps replaced by a walk move because `x_i` had no venues.
    pub fallback_walks: usize,
    /// Rounds where `𝒰_{y_i}` was empty and no proposal was made.
    pub missed_proposals: usize,
}

struct AuxWalker<'a> {
    hybrid: &'a HybridNetwork,
    weights: &'a WeightSystem,
    rng: ChainRng,
    fallback_walks: usize,
}

impl AuxWalker<'_> {
    fn step(&mut self, y: NodeId, x: NodeId) -> Result<NodeId> {
        let gp = self.hybrid.auxiliary();
        let d = gp.degree(y);
        let w = self.weights.w[y];
        let jump = if w == 0.0 {
            d == 0
        } else {
            d == 0 || self.rng.gen::<f64>() < w / (d as f64 + w)
        };
        if jump {
            let venues = self.hybrid.affiliation().venues_of(x);
            if !venues.is_empty() {
                return Ok(venues[self.rng.gen_range(0..venues.len())]);
            }
            if d == 0 {
                return Err(Error::AuxiliaryAbsorbed { aux: y, target: x });
            }
            self.fallback_walks += 1;
            debug!("auxiliary jump from {y} undefined: target {x} has no venues; walking instead");
        }
        Ok(gp.neighbors(y)[self.rng.gen_range(0..d)])
    }
}

struct Metropolis<'a> {
    hybrid: &'a HybridNetwork,
    weights: &'a WeightSystem,
    chain: MhChain,
    rng: ChainRng,
    missed: usize,
}

impl Metropolis<'_> {
    fn step(&mut self, y: NodeId) -> NodeId {
        let members = self.hybrid.affiliation().members_of(y);
        if members.is_empty() {
            self.missed += 1;
            return self.chain.state();
        }
        let u = members[self.rng.gen_range(0..members.len())];
        mh_step(
            &mut self.chain,
            u,
            &self.weights.q,
            &self.weights.q_prime,
            &mut self.rng,
        )
    }
}

fn check_weights(hybrid: &HybridNetwork, ws: &WeightSystem) -> Result<()> {
    let n = hybrid.target().node_count();
    let np = hybrid.auxiliary().node_count();
    if ws.q.len() != n || ws.omega.len() != n || ws.q_prime.len() != n || ws.w.len() != np {
        return Err(Error::InconsistentHybrid(
            "weight system does not match the hybrid's node counts".into(),
        ));
    }
    Ok(())
}

/// Coupled run of the target walk, the auxiliary walk and the MH chain, one
/// step of each per round.
///
/// Round `i`: the auxiliary walker at `y_i` jumps with probability
/// `w_y/(d_y + w_y)` to a uniform venue of `x_i`, else walks on `G'`; the MH
/// chain proposes a uniform member of `𝒰_{y_i}`; the target walker jumps with
/// probability `ω_x/(d_x + ω_x)` to `x'_{i+1}`, else walks on `G`.
///
/// Each chain owns an RNG stream. Coins are only flipped for positive jump
/// weights, so `α = β = 0` reproduces simple random walks on `G` and `G'`.
pub fn rwt_rwa_run(
    hybrid: &HybridNetwork,
    weights: &WeightSystem,
    budget: usize,
    starts: CoupledStarts,
    seed: u64,
    options: RwtRwaOptions,
) -> Result<CoupledRun> {
    if budget == 0 {
        return Err(Error::InvalidParameter(
            "walk budget must be at least 1".into(),
        ));
    }
    check_weights(hybrid, weights)?;
    let g = hybrid.target();
    let (n, np) = (g.node_count(), hybrid.auxiliary().node_count());
    if starts.target >= n {
        return Err(Error::NodeOutOfRange {
            side: "target",
            id: starts.target,
            len: n,
        });
    }
    if starts.auxiliary >= np {
        return Err(Error::NodeOutOfRange {
            side: "auxiliary",
            id: starts.auxiliary,
            len: np,
        });
    }
    let weight = |u: NodeId| g.degree(u) as f64 + weights.omega[u];
    if weight(starts.target) <= 0.0 {
        return Err(Error::Absorbing(starts.target));
    }

    let mut aux = AuxWalker {
        hybrid,
        weights,
        rng: chain_rng(seed, Stream::Auxiliary),
        fallback_walks: 0,
    };
    let mut mh = Metropolis {
        hybrid,
        weights,
        chain: MhChain::new(starts.metropolis, &weights.q, &weights.q_prime)?,
        rng: chain_rng(seed, Stream::Metropolis),
        missed: 0,
    };
    let mut rng_t = chain_rng(seed, Stream::Target);

    let mut x = starts.target;
    let mut y = starts.auxiliary;
    for _ in 0..options.mh_burn_in {
        mh.step(y);
        y = aux.step(y, x)?;
    }

    let mut seen = SeenSet::new(n);
    let mut visits = Vec::with_capacity(budget);
    let mut auxiliary_path = Vec::with_capacity(budget);
    let mut metropolis_path = Vec::with_capacity(budget);
    let mut jumped = false;
    for i in 0..budget {
        seen.insert(x);
        visits.push(Visit {
            node: x,
            weight: weight(x),
            jumped,
        });
        auxiliary_path.push(y);
        metropolis_path.push(mh.chain.state());
        if i + 1 == budget {
            break;
        }
        let x_prime = mh.step(y);
        let y_next = aux.step(y, x)?;
        let d = g.degree(x);
        let w = weights.omega[x];
        jumped = if w == 0.0 {
            if d == 0 {
                return Err(Error::Absorbing(x));
            }
            false
        } else {
            d == 0 || rng_t.gen::<f64>() < w / (d as f64 + w)
        };
        x = if jumped {
            x_prime
        } else {
            g.neighbors(x)[rng_t.gen_range(0..d)]
        };
        y = y_next;
    }

    let proposals = mh.chain.proposals();
    Ok(CoupledRun {
        trace: SampleTrace {
            method: Method::RwtRwa,
            visits,
            queries: QueryCounts {
                target: seen.len(),
                auxiliary: options.mh_burn_in + budget - 1,
                metropolis: proposals,
            },
            seed,
        },
        auxiliary_path,
        metropolis_path,
        accepted: mh.chain.accepted(),
        proposals,
        fallback_walks: aux.fallback_walks,
        missed_proposals: mh.missed,
    })
}
