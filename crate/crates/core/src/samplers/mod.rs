//! Sampling procedures over a hybrid network.
//!
//! * [`vs_a_collect`]: i.i.d. auxiliary vertex draws harvesting affiliation
//!   neighbors.
//! * [`rwt_vsa_run`]: random walk on the target graph whose jumps go through
//!   an auxiliary vertex draw and a uniform affiliation neighbor.
//! * [`rwt_rwa_run`]: coupled target walk, auxiliary walk and
//!   Metropolis-Hastings chain.
//! * [`simple_rw_run`]: the plain random-walk baseline.

mod coupled;
mod mh;
mod vsa;
mod walk;
mod weights;

use std::io::Write;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::graph::{HybridNetwork, NodeId};
use crate::sum::accurate_sum;

pub use coupled::{rwt_rwa_run, CoupledRun, CoupledStarts, RwtRwaOptions};
pub use mh::{acceptance_ratio, mh_step, MhChain};
pub use vsa::{vs_a_collect, VsaDraw, VsaSample};
pub use walk::{rwt_vsa_run, simple_rw_path, simple_rw_run, JumpRate};
pub use weights::{
    closed_form_weights, compute_qu, fixed_weight_scheme, fixed_weight_scheme_with,
    stationary_rwt_vsa, uniform_desired, validate_desired, EdgeTotals, WeightSystem,
    CLOSED_FORM_MAX_NODES,
};

/// Tolerance on `|Σ p − 1|` accepted for probability vectors.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Sampling law over auxiliary nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum AuxDistribution {
    /// `p_v = 1/n'` over `n'` nodes.
    Uniform(usize),
    Explicit(Vec<f64>),
}

impl AuxDistribution {
    pub fn uniform(n_aux: usize) -> Self {
        AuxDistribution::Uniform(n_aux)
    }

    /// Uniform over auxiliary nodes with at least one affiliation edge, so
    /// every draw has a member to land on.
    pub fn uniform_over_affiliated(hybrid: &HybridNetwork) -> Result<Self> {
        let b = hybrid.affiliation();
        let k = (0..b.right_count())
            .filter(|&v| b.right_degree(v) > 0)
            .count();
        if k == 0 {
            return Err(Error::InvalidParameter(
                "no auxiliary node has affiliation edges".into(),
            ));
        }
        if k == b.right_count() {
            return Ok(AuxDistribution::Uniform(k));
        }
        let mass = 1.0 / k as f64;
        Ok(AuxDistribution::Explicit(
            (0..b.right_count())
                .map(|v| if b.right_degree(v) > 0 { mass } else { 0.0 })
                .collect(),
        ))
    }

    pub fn explicit(p: Vec<f64>) -> Result<Self> {
        if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "auxiliary probability {bad} is negative or not finite"
            )));
        }
        let sum = accurate_sum(p.iter().copied());
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(AuxDistribution::Explicit(p))
    }

    pub fn len(&self) -> usize {
        match self {
            AuxDistribution::Uniform(n) => *n,
            AuxDistribution::Explicit(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn prob(&self, v: NodeId) -> f64 {
        match self {
            AuxDistribution::Uniform(n) => 1.0 / *n as f64,
            AuxDistribution::Explicit(p) => p[v],
        }
    }

    pub(crate) fn sampler(&self) -> Result<AuxSampler> {
        match self {
            AuxDistribution::Uniform(0) => Err(Error::InvalidParameter(
                "uniform distribution over zero auxiliary nodes".into(),
            )),
            AuxDistribution::Uniform(n) => Ok(AuxSampler::Uniform(*n)),
            AuxDistribution::Explicit(p) => WeightedIndex::new(p)
                .map(AuxSampler::Weighted)
                .map_err(|e| Error::InvalidParameter(format!("auxiliary distribution: {e}"))),
        }
    }

    fn check_len(&self, n_aux: usize) -> Result<()> {
        if self.len() != n_aux {
            return Err(Error::InvalidParameter(format!(
                "auxiliary distribution has {} entries but the auxiliary graph has {} nodes",
                self.len(),
                n_aux
            )));
        }
        Ok(())
    }
}

pub(crate) enum AuxSampler {
    Uniform(usize),
    Weighted(WeightedIndex<f64>),
}

impl AuxSampler {
    #[inline]
    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> NodeId {
        match self {
            AuxSampler::Uniform(n) => rng.gen_range(0..*n),
            AuxSampler::Weighted(w) => w.sample(rng),
        }
    }
}

/// One recorded target-node visit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visit {
    pub node: NodeId,
    /// Inverse-probability weight denominator, `d_x + ω_x`.
    pub weight: f64,
    /// Whether the walker arrived here by a jump.
    pub jumped: bool,
}

/// Query accounting for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryCounts {
    /// Distinct target nodes queried.
    pub target: usize,
    /// Auxiliary vertex draws or auxiliary walk steps.
    pub auxiliary: usize,
    /// Metropolis-Hastings proposals.
    pub metropolis: usize,
}

/// Ordered target-node visits of a walk, with per-visit weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTrace {
    pub method: Method,
    pub visits: Vec<Visit>,
    pub queries: QueryCounts,
    pub seed: u64,
}

impl SampleTrace {
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.visits.iter().map(|v| v.node)
    }

    pub fn budget(&self) -> usize {
        self.visits.len()
    }

    pub const CSV_HEADER: &'static str = "step,node,weight,jumped";

    /// Line-oriented export, one `step,node,weight,jumped` record per visit.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for (i, v) in self.visits.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{}",
                i + 1,
                v.node,
                v.weight,
                u8::from(v.jumped)
            )?;
        }
        Ok(())
    }
}

/// Marks distinct nodes as they are first seen.
pub(crate) struct SeenSet {
    seen: Vec<bool>,
    count: usize,
}

impl SeenSet {
    pub(crate) fn new(n: usize) -> Self {
        SeenSet {
            seen: vec![false; n],
            count: 0,
        }
    }

    #[inline]
    pub(crate) fn insert(&mut self, u: NodeId) {
        if !self.seen[u] {
            self.seen[u] = true;
            self.count += 1;
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.count
    }
}
