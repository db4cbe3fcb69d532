//! Estimators of `θ_l` and `n` from auxiliary vertex samples and walk traces,
//! and the NRMSE used to compare them.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::{Label, LabelDistribution, Labeler};
use crate::samplers::{SampleTrace, VsaSample};
use crate::sum::CompensatedSum;

/// Sampling method tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "VS-A", alias = "vs-a", alias = "vsa")]
    Vsa,
    #[serde(rename = "RWT-VSA", alias = "rwt-vsa")]
    RwtVsa,
    #[serde(rename = "RWT-RWA", alias = "rwt-rwa")]
    RwtRwa,
    #[serde(rename = "SRW", alias = "srw")]
    Srw,
    #[serde(rename = "RRZI-VSA", alias = "rrzi-vsa")]
    RrziVsa,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Vsa,
        Method::RwtVsa,
        Method::RwtRwa,
        Method::Srw,
        Method::RrziVsa,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Vsa => "VS-A",
            Method::RwtVsa => "RWT-VSA",
            Method::RwtRwa => "RWT-RWA",
            Method::Srw => "SRW",
            Method::RrziVsa => "RRZI-VSA",
        }
    }

    /// True when the budget counts auxiliary draws rather than target steps.
    pub fn uses_draw_budget(self) -> bool {
        matches!(self, Method::Vsa | Method::RrziVsa)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

/// Per-label estimates from one sampling run.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub method: Method,
    pub theta: BTreeMap<Label, f64>,
    pub n_hat: Option<f64>,
    pub budget: usize,
    pub seed: u64,
}

impl EstimateReport {
    /// Estimate for `l`; labels never observed are estimated as zero.
    pub fn get(&self, l: Label) -> f64 {
        self.theta.get(&l).copied().unwrap_or(0.0)
    }

    pub const CSV_HEADER: &'static str = "method,label,theta_hat,theta_true,budget,seed";

    /// Writes one row per label in `truth` or in the estimate.
    pub fn write_csv<W: Write>(&self, truth: &LabelDistribution, mut w: W) -> std::io::Result<()> {
        let mut labels: Vec<Label> = truth.labels().chain(self.theta.keys().copied()).collect();
        labels.sort_unstable();
        labels.dedup();
        for l in labels {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                self.method,
                l,
                self.get(l),
                truth.get(l),
                self.budget,
                self.seed
            )?;
        }
        Ok(())
    }
}

/// Per-label sums `Σ_i (1/p_i) Σ_{u∈𝒰_{y_i}} 1{l∈L(u)}/d_u^(b)` and the
/// label-free total used for `n̂`.
fn vsa_sums(
    sample: &VsaSample,
    labeler: &dyn Labeler,
) -> (BTreeMap<Label, CompensatedSum>, CompensatedSum) {
    let mut per_label: BTreeMap<Label, CompensatedSum> = BTreeMap::new();
    let mut total = CompensatedSum::new();
    for draw in &sample.draws {
        for (&u, &d) in draw.members.iter().zip(&draw.member_degrees) {
            assert!(
                d > 0,
                "member {u} of a sampled venue has zero affiliation degree"
            );
            let x = 1.0 / (draw.p * d as f64);
            total.add(x);
            labeler.for_each_label(u, &mut |l| per_label.entry(l).or_default().add(x));
        }
    }
    (per_label, total)
}

/// Unbiased estimate of `θ_l` for a known population size `n`.
pub fn vsa_theta_known_n(
    sample: &VsaSample,
    labeler: &dyn Labeler,
    n: usize,
) -> Result<EstimateReport> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "known population size is zero".into(),
        ));
    }
    if sample.draws.is_empty() {
        return Err(Error::InvalidParameter("empty vertex sample".into()));
    }
    let (per_label, _) = vsa_sums(sample, labeler);
    let scale = 1.0 / (n as f64 * sample.draws.len() as f64);
    Ok(EstimateReport {
        method: Method::Vsa,
        theta: per_label
            .into_iter()
            .map(|(l, s)| (l, s.value() * scale))
            .collect(),
        n_hat: None,
        budget: sample.draws.len(),
        seed: sample.seed,
    })
}

/// Unbiased estimate of the number of target nodes with affiliation edges.
pub fn vsa_estimate_n(sample: &VsaSample) -> f64 {
    if sample.draws.is_empty() {
        return 0.0;
    }
    let mut total = CompensatedSum::new();
    for draw in &sample.draws {
        for &d in &draw.member_degrees {
            assert!(
                d > 0,
                "sampled venue lists a member with zero affiliation degree"
            );
            total.add(1.0 / (draw.p * d as f64));
        }
    }
    total.value() / sample.draws.len() as f64
}

/// Ratio estimator of `θ_l` with `n` replaced by `n̂`.
pub fn vsa_theta_unknown_n(sample: &VsaSample, labeler: &dyn Labeler) -> Result<EstimateReport> {
    let (per_label, total) = vsa_sums(sample, labeler);
    let z = total.value();
    if sample.draws.is_empty() || z <= 0.0 {
        return Err(Error::NoEffectiveSamples);
    }
    Ok(EstimateReport {
        method: Method::Vsa,
        theta: per_label
            .into_iter()
            .map(|(l, s)| (l, s.value() / z))
            .collect(),
        n_hat: Some(z / sample.draws.len() as f64),
        budget: sample.draws.len(),
        seed: sample.seed,
    })
}

/// Hansen-Hurwitz ratio estimator over a walk trace:
/// `θ̂_l = Σ_i 1{l∈L(x_i)}/w_i / Σ_i 1/w_i`.
pub fn walk_theta(trace: &SampleTrace, labeler: &dyn Labeler) -> Result<EstimateReport> {
    if trace.visits.is_empty() {
        return Err(Error::InvalidParameter("empty trace".into()));
    }
    let mut per_label: BTreeMap<Label, CompensatedSum> = BTreeMap::new();
    let mut z = CompensatedSum::new();
    for v in &trace.visits {
        debug_assert!(v.weight > 0.0);
        let x = 1.0 / v.weight;
        z.add(x);
        labeler.for_each_label(v.node, &mut |l| per_label.entry(l).or_default().add(x));
    }
    let z = z.value();
    Ok(EstimateReport {
        method: trace.method,
        theta: per_label
            .into_iter()
            .map(|(l, s)| (l, s.value() / z))
            .collect(),
        n_hat: None,
        budget: trace.visits.len(),
        seed: trace.seed,
    })
}

/// `sqrt(mean((θ̂ − θ)²)) / θ` over replications.
pub fn nrmse(estimates: &[f64], truth: f64) -> Result<f64> {
    if truth <= 0.0 {
        return Err(Error::ZeroMassLabel);
    }
    if estimates.is_empty() {
        return Err(Error::InvalidParameter(
            "NRMSE needs at least one run".into(),
        ));
    }
    let mse = estimates
        .iter()
        .map(|e| (e - truth) * (e - truth))
        .collect::<CompensatedSum>()
        .value()
        / estimates.len() as f64;
    Ok(mse.sqrt() / truth)
}
