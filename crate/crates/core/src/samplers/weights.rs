//! Jump weights and the distributions they induce.
//!
//! A target node `u` carries a virtual edge of weight `ω_u` to a jumper node;
//! an auxiliary node `v` carries `w_v`. With `ω_u = α q_u` and `Σ q_u = 1` the
//! target walk is reversible with `π_u = (d_u + ω_u)/(2|ℰ| + α)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::HybridNetwork;
use crate::sum::accurate_sum;

use super::{AuxDistribution, NORMALIZATION_TOL};

/// Desired jump distribution induced by auxiliary vertex sampling:
/// `q_u = Σ_{v∈𝒱_u} p_v / d_v^(b)`.
pub fn compute_qu(hybrid: &HybridNetwork, p: &AuxDistribution) -> Result<Vec<f64>> {
    let b = hybrid.affiliation();
    p.check_len(b.right_count())?;
    let mut q = vec![0.0; b.left_count()];
    for v in 0..b.right_count() {
        let pv = p.prob(v);
        if pv == 0.0 {
            continue;
        }
        let d = b.right_degree(v);
        if d == 0 {
            return Err(Error::UnreachableMass(v));
        }
        let share = pv / d as f64;
        for &u in b.members_of(v) {
            q[u] += share;
        }
    }
    Ok(q)
}

/// Uniform distribution over target nodes with at least one affiliation edge.
pub fn uniform_desired(hybrid: &HybridNetwork) -> Result<Vec<f64>> {
    let b = hybrid.affiliation();
    let covered = hybrid.covered_target_count();
    if covered == 0 {
        return Err(Error::InvalidParameter(
            "no target node has affiliation edges".into(),
        ));
    }
    let mass = 1.0 / covered as f64;
    Ok((0..b.left_count())
        .map(|u| if b.left_degree(u) > 0 { mass } else { 0.0 })
        .collect())
}

/// Checks that `q` is a distribution over target nodes supported on
/// affiliation-connected nodes.
pub fn validate_desired(hybrid: &HybridNetwork, q: &[f64]) -> Result<()> {
    let b = hybrid.affiliation();
    if q.len() != b.left_count() {
        return Err(Error::InvalidParameter(format!(
            "desired distribution has {} entries but the target graph has {} nodes",
            q.len(),
            b.left_count()
        )));
    }
    for (u, &x) in q.iter().enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "desired probability of node {u} is {x}"
            )));
        }
        if x > 0.0 && b.left_degree(u) == 0 {
            return Err(Error::UnaffiliatedMass(u));
        }
    }
    let sum = accurate_sum(q.iter().copied());
    if (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

/// Edge-count constants `2|ℰ|` and `2|ℰ'|`. In simulation they come from the
/// hybrid; a crawler supplies them as configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTotals {
    pub two_e: f64,
    pub two_e_prime: f64,
}

impl EdgeTotals {
    pub fn from_hybrid(hybrid: &HybridNetwork) -> Self {
        EdgeTotals {
            two_e: hybrid.target().degree_sum() as f64,
            two_e_prime: hybrid.auxiliary().degree_sum() as f64,
        }
    }
}

/// Stationary law of the target walk with jumps through auxiliary sampling:
/// `π_u = (d_u + α q_u)/(2|ℰ| + α)`.
pub fn stationary_rwt_vsa(
    hybrid: &HybridNetwork,
    p: &AuxDistribution,
    alpha: f64,
) -> Result<Vec<f64>> {
    check_rate("alpha", alpha)?;
    let q = compute_qu(hybrid, p)?;
    let g = hybrid.target();
    let denom = g.degree_sum() as f64 + alpha;
    if denom <= 0.0 {
        return Err(Error::InvalidParameter(
            "target graph has no edges and alpha is zero".into(),
        ));
    }
    Ok((0..g.node_count())
        .map(|u| (g.degree(u) as f64 + alpha * q[u]) / denom)
        .collect())
}

/// All weights of the coupled design with `ω_u = α q_u` fixed up front.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSystem {
    pub alpha: f64,
    pub beta: f64,
    pub two_e: f64,
    pub two_e_prime: f64,
    /// Desired jump distribution `q` over target nodes.
    pub q: Vec<f64>,
    /// `ω_u = α q_u`.
    pub omega: Vec<f64>,
    /// `π_u = (d_u + ω_u)/(2|ℰ| + α)`.
    pub pi_target: Vec<f64>,
    /// `w_v = β Σ_{u∈𝒰_v} π_u / d_u^(b)`.
    pub w: Vec<f64>,
    /// `π_v = (d_v + w_v)/(2|ℰ'| + β)`.
    pub pi_aux: Vec<f64>,
    /// Proposal law of the MH chain, `q'_u = Σ_{v∈𝒱_u} π_v / d_v^(b)`.
    pub q_prime: Vec<f64>,
}

pub fn fixed_weight_scheme(
    hybrid: &HybridNetwork,
    alpha: f64,
    beta: f64,
    q: &[f64],
) -> Result<WeightSystem> {
    fixed_weight_scheme_with(hybrid, alpha, beta, q, EdgeTotals::from_hybrid(hybrid))
}

/// As [`fixed_weight_scheme`] with explicit `2|ℰ|`, `2|ℰ'|`.
pub fn fixed_weight_scheme_with(
    hybrid: &HybridNetwork,
    alpha: f64,
    beta: f64,
    q: &[f64],
    totals: EdgeTotals,
) -> Result<WeightSystem> {
    check_rate("alpha", alpha)?;
    check_rate("beta", beta)?;
    validate_desired(hybrid, q)?;
    let (g, gp, b) = (hybrid.target(), hybrid.auxiliary(), hybrid.affiliation());
    let denom_t = totals.two_e + alpha;
    let denom_a = totals.two_e_prime + beta;
    if denom_t <= 0.0 || denom_a <= 0.0 {
        return Err(Error::InvalidParameter(
            "2|E| + alpha and 2|E'| + beta must be positive".into(),
        ));
    }

    let omega: Vec<f64> = q.iter().map(|&x| alpha * x).collect();
    let pi_target: Vec<f64> = (0..g.node_count())
        .map(|u| (g.degree(u) as f64 + omega[u]) / denom_t)
        .collect();
    let w: Vec<f64> = (0..gp.node_count())
        .map(|v| {
            beta * b
                .members_of(v)
                .iter()
                .map(|&u| pi_target[u] / b.left_degree(u) as f64)
                .sum::<f64>()
        })
        .collect();
    let pi_aux: Vec<f64> = (0..gp.node_count())
        .map(|v| (gp.degree(v) as f64 + w[v]) / denom_a)
        .collect();
    let q_prime = (0..g.node_count())
        .map(|u| {
            b.venues_of(u)
                .iter()
                .map(|&v| pi_aux[v] / b.right_degree(v) as f64)
                .sum::<f64>()
        })
        .collect();

    Ok(WeightSystem {
        alpha,
        beta,
        two_e: totals.two_e,
        two_e_prime: totals.two_e_prime,
        q: q.to_vec(),
        omega,
        pi_target,
        w,
        pi_aux,
        q_prime,
    })
}

/// Largest side accepted by [`closed_form_weights`] (dense solve).
pub const CLOSED_FORM_MAX_NODES: usize = 3_000;

/// Mutually consistent `(ω_𝒰, w_𝒱)` from the matrix closed form
///
/// `ω = c'(I − cc' A D_𝒱⁻¹ Aᵀ D_𝒰⁻¹)⁻¹ A D_𝒱⁻¹ (d_𝒱 + c Aᵀ D_𝒰⁻¹ d_𝒰)`
///
/// and its mirror for `w`, with `c = β/(2|ℰ|+α)`, `c' = α/(2|ℰ'|+β)`. Nodes
/// without affiliation edges get a zero row in `D⁻¹`.
pub fn closed_form_weights(
    hybrid: &HybridNetwork,
    alpha: f64,
    beta: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_rate("alpha", alpha)?;
    check_rate("beta", beta)?;
    let (g, gp, b) = (hybrid.target(), hybrid.auxiliary(), hybrid.affiliation());
    let (n, np) = (g.node_count(), gp.node_count());
    if n > CLOSED_FORM_MAX_NODES || np > CLOSED_FORM_MAX_NODES {
        return Err(Error::InvalidParameter(format!(
            "closed form limited to {CLOSED_FORM_MAX_NODES} nodes per side, got {n} x {np}"
        )));
    }
    let denom_t = g.degree_sum() as f64 + alpha;
    let denom_a = gp.degree_sum() as f64 + beta;
    if denom_t <= 0.0 || denom_a <= 0.0 {
        return Err(Error::InvalidParameter(
            "2|E| + alpha and 2|E'| + beta must be positive".into(),
        ));
    }
    let c = beta / denom_t;
    let cp = alpha / denom_a;

    let inv = |d: usize| if d == 0 { 0.0 } else { 1.0 / d as f64 };
    // A D_V^{-1} (n x n') and A^T D_U^{-1} (n' x n).
    let mut a_dv = DMatrix::<f64>::zeros(n, np);
    let mut at_du = DMatrix::<f64>::zeros(np, n);
    for (u, v) in b.edges() {
        a_dv[(u, v)] = inv(b.right_degree(v));
        at_du[(v, u)] = inv(b.left_degree(u));
    }
    let d_u = DVector::from_iterator(n, (0..n).map(|u| g.degree(u) as f64));
    let d_v = DVector::from_iterator(np, (0..np).map(|v| gp.degree(v) as f64));

    let cc = c * cp;
    let m_u = DMatrix::<f64>::identity(n, n) - (&a_dv * &at_du) * cc;
    let rhs_u = (&a_dv * (&d_v + (&at_du * &d_u) * c)) * cp;
    let m_v = DMatrix::<f64>::identity(np, np) - (&at_du * &a_dv) * cc;
    let rhs_v = (&at_du * (&d_u + (&a_dv * &d_v) * cp)) * c;

    let omega = solve(m_u, rhs_u, "target")?;
    let w = solve(m_v, rhs_v, "auxiliary")?;
    Ok((omega.iter().copied().collect(), w.iter().copied().collect()))
}

fn solve(m: DMatrix<f64>, rhs: DVector<f64>, which: &str) -> Result<DVector<f64>> {
    let diag = || {
        let sv = m.clone().singular_values();
        let max = sv.max();
        let min = sv.min();
        format!(
            "{which} system: singular values in [{min:e}, {max:e}], condition ~ {:e}",
            if min > 0.0 { max / min } else { f64::INFINITY }
        )
    };
    let x = m
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular(diag()))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular(diag()));
    }
    Ok(x)
}

fn check_rate(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{name} must be finite and non-negative, got {x}"
        )));
    }
    Ok(())
}
