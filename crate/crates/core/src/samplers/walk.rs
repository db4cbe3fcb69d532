use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::graph::{Graph, HybridNetwork, NodeId};
use crate::rng::{chain_rng, Stream};

use super::weights::compute_qu;
use super::{AuxDistribution, QueryCounts, SampleTrace, SeenSet, Visit};

fn check_start(n: usize, start: NodeId) -> Result<()> {
    if start >= n {
        return Err(Error::NodeOutOfRange {
            side: "target",
            id: start,
            len: n,
        });
    }
    Ok(())
}

fn check_budget(budget: usize) -> Result<()> {
    if budget == 0 {
        return Err(Error::InvalidParameter(
            "walk budget must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Node sequence of a simple random walk of `budget` visits driven by `rng`.
pub fn simple_rw_path<R: Rng + ?Sized>(
    graph: &Graph,
    budget: usize,
    start: NodeId,
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    check_budget(budget)?;
    check_start(graph.node_count(), start)?;
    let mut path = Vec::with_capacity(budget);
    let mut x = start;
    path.push(x);
    for _ in 1..budget {
        let nbrs = graph.neighbors(x);
        if nbrs.is_empty() {
            return Err(Error::Absorbing(x));
        }
        x = nbrs[rng.gen_range(0..nbrs.len())];
        path.push(x);
    }
    Ok(path)
}

/// Simple random walk; each visit is weighted by its degree.
pub fn simple_rw_run(
    graph: &Graph,
    budget: usize,
    start: NodeId,
    seed: u64,
) -> Result<SampleTrace> {
    check_start(graph.node_count(), start)?;
    if graph.degree(start) == 0 {
        return Err(Error::Absorbing(start));
    }
    let mut rng = chain_rng(seed, Stream::Target);
    let path = simple_rw_path(graph, budget, start, &mut rng)?;
    let mut seen = SeenSet::new(graph.node_count());
    let visits = path
        .into_iter()
        .map(|node| {
            seen.insert(node);
            Visit {
                node,
                weight: graph.degree(node) as f64,
                jumped: false,
            }
        })
        .collect();
    Ok(SampleTrace {
        method: Method::Srw,
        visits,
        queries: QueryCounts {
            target: seen.len(),
            ..QueryCounts::default()
        },
        seed,
    })
}

/// Jump intensity of the target walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpRate {
    /// `ω_u = α q_u`.
    Finite(f64),
    /// The `α → ∞` limit: every step is a jump, visits are i.i.d. from `q`
    /// and weighted by `q_u`.
    Always,
}

/// Random walk on the target graph whose jumps draw `v ~ p` on the auxiliary
/// side and land on a uniform affiliation neighbor of `v`.
///
/// The walk step and the jump coin come from the target stream; the
/// auxiliary draw comes from the auxiliary stream. No coin is flipped where
/// `ω_x = 0`, so `α = 0` replays [`simple_rw_run`] exactly.
pub fn rwt_vsa_run(
    hybrid: &HybridNetwork,
    p: &AuxDistribution,
    rate: JumpRate,
    budget: usize,
    start: NodeId,
    seed: u64,
) -> Result<SampleTrace> {
    check_budget(budget)?;
    let (g, b) = (hybrid.target(), hybrid.affiliation());
    check_start(g.node_count(), start)?;
    if let JumpRate::Finite(alpha) = rate {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite and non-negative, got {alpha}"
            )));
        }
    }
    let q = compute_qu(hybrid, p)?;
    let sampler = p.sampler()?;
    let omega = |u: NodeId| match rate {
        JumpRate::Finite(alpha) => alpha * q[u],
        JumpRate::Always => f64::INFINITY,
    };
    let weight = |u: NodeId| match rate {
        JumpRate::Finite(_) => g.degree(u) as f64 + omega(u),
        JumpRate::Always => q[u],
    };
    if weight(start) <= 0.0 {
        return Err(Error::Absorbing(start));
    }

    let mut rng_t = chain_rng(seed, Stream::Target);
    let mut rng_a = chain_rng(seed, Stream::Auxiliary);
    let mut seen = SeenSet::new(g.node_count());
    let mut aux_draws = 0usize;
    let mut visits = Vec::with_capacity(budget);
    let mut x = start;
    let mut jumped = false;
    seen.insert(x);
    visits.push(Visit {
        node: x,
        weight: weight(x),
        jumped,
    });
    for _ in 1..budget {
        let d = g.degree(x);
        let w = omega(x);
        jumped = if w == 0.0 {
            if d == 0 {
                return Err(Error::Absorbing(x));
            }
            false
        } else if d == 0 || w.is_infinite() {
            true
        } else {
            rng_t.gen::<f64>() < w / (d as f64 + w)
        };
        x = if jumped {
            aux_draws += 1;
            let v = sampler.draw(&mut rng_a);
            let members = b.members_of(v);
            // compute_qu rejected p-mass on venues without members.
            members[rng_a.gen_range(0..members.len())]
        } else {
            let nbrs = g.neighbors(x);
            nbrs[rng_t.gen_range(0..d)]
        };
        seen.insert(x);
        visits.push(Visit {
            node: x,
            weight: weight(x),
            jumped,
        });
    }
    Ok(SampleTrace {
        method: Method::RwtVsa,
        visits,
        queries: QueryCounts {
            target: seen.len(),
            auxiliary: aux_draws,
            metropolis: 0,
        },
        seed,
    })
}
