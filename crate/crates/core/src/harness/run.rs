use std::collections::BTreeSet;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use log::info;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{
    nrmse, vsa_theta_known_n, vsa_theta_unknown_n, walk_theta, EstimateReport, Method,
};
use crate::geo::rrzi_vsa_estimate;
use crate::graph::NodeId;
use crate::labels::{Label, LabelDistribution};
use crate::rng::{replication_seed, stream_rng};
use crate::samplers::{
    fixed_weight_scheme, rwt_rwa_run, rwt_vsa_run, simple_rw_run, vs_a_collect, AuxDistribution,
    CoupledStarts, JumpRate, QueryCounts, RwtRwaOptions, WeightSystem,
};
use crate::sum::accurate_sum;

use super::config::{ExperimentConfig, RrziSettings};
use super::network::{prepare_network, PreparedNetwork};

/// Stream used to pick walk start nodes.
const START_STREAM: u64 = 5;

/// One point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub method: Method,
    pub budget: usize,
    /// Jump rates; ignored by methods without jumps.
    pub alpha: f64,
    pub beta: f64,
}

impl Cell {
    fn uses_jumps(&self) -> bool {
        matches!(self.method, Method::RwtVsa | Method::RwtRwa)
    }

    pub fn param(&self) -> String {
        match self.method {
            Method::RwtVsa => format!("budget={};alpha={}", self.budget, self.alpha),
            Method::RwtRwa => format!(
                "budget={};alpha={};beta={}",
                self.budget, self.alpha, self.beta
            ),
            _ => format!("budget={}", self.budget),
        }
    }
}

/// Replication settings shared by every cell of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub runs: usize,
    pub seed: u64,
    pub mh_burn_in: usize,
    pub vsa_known_n: bool,
    pub rrzi: RrziSettings,
}

impl RunSettings {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        RunSettings {
            runs: cfg.runs,
            seed: cfg.seed,
            mh_burn_in: cfg.mh_burn_in,
            vsa_known_n: cfg.vsa_known_n,
            rrzi: cfg.rrzi,
        }
    }
}

/// Result of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: EstimateReport,
    pub queries: QueryCounts,
    /// Target samples gathered: visits for walks, collected members
    /// (with repeats) for vertex sampling.
    pub collected: usize,
}

/// Which population a method's estimates refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    /// Every target node.
    All,
    /// Target nodes with at least one affiliation edge.
    Covered,
}

impl Reference {
    pub fn of(method: Method) -> Self {
        if method.uses_draw_budget() {
            Reference::Covered
        } else {
            Reference::All
        }
    }

    pub fn truth<'a>(&self, prep: &'a PreparedNetwork) -> &'a LabelDistribution {
        match self {
            Reference::All => &prep.truth,
            Reference::Covered => &prep.covered_truth,
        }
    }
}

/// Uniform start among target nodes with positive degree, drawn from a
/// dedicated stream of the replication seed.
pub fn walk_start(prep: &PreparedNetwork, seed: u64) -> Result<NodeId> {
    if prep.walk_starts.is_empty() {
        return Err(Error::InvalidParameter(
            "target graph has no edges to start a walk on".into(),
        ));
    }
    let mut rng = stream_rng(seed, START_STREAM);
    Ok(prep.walk_starts[rng.gen_range(0..prep.walk_starts.len())])
}

/// Setup work shared by the replications of one cell.
enum Prepared {
    None,
    Weights(WeightSystem),
    Jumps(AuxDistribution),
}

fn prepare_cell(prep: &PreparedNetwork, cell: &Cell) -> Result<Prepared> {
    if cell.method == Method::RwtRwa {
        let q = prep.desired()?;
        return Ok(Prepared::Weights(fixed_weight_scheme(
            &prep.hybrid,
            cell.alpha,
            cell.beta,
            &q,
        )?));
    }
    if cell.method == Method::RwtVsa {
        // Jumps need a venue with members, so isolated venues get no mass.
        return Ok(Prepared::Jumps(AuxDistribution::uniform_over_affiliated(
            &prep.hybrid,
        )?));
    }
    if cell.method == Method::RrziVsa && prep.geo.is_none() {
        return Err(Error::Config(
            "RRZI-VSA needs a network with venue coordinates".into(),
        ));
    }
    Ok(Prepared::None)
}

fn run_one(
    prep: &PreparedNetwork,
    cell: &Cell,
    shared: &Prepared,
    settings: &RunSettings,
    seed: u64,
) -> Result<Outcome> {
    let h = &prep.hybrid;
    let labeler = &prep.labeler;
    let uniform = AuxDistribution::uniform(h.auxiliary().node_count());
    let walk = |trace: crate::samplers::SampleTrace| -> Result<Outcome> {
        Ok(Outcome {
            report: walk_theta(&trace, labeler)?,
            queries: trace.queries,
            collected: trace.budget(),
        })
    };
    match cell.method {
        Method::Srw => walk(simple_rw_run(
            h.target(),
            cell.budget,
            walk_start(prep, seed)?,
            seed,
        )?),
        Method::RwtVsa => {
            let Prepared::Jumps(p) = shared else {
                unreachable!("jump law is prepared for RWT-VSA runs")
            };
            walk(rwt_vsa_run(
                h,
                p,
                JumpRate::Finite(cell.alpha),
                cell.budget,
                walk_start(prep, seed)?,
                seed,
            )?)
        }
        Method::RwtRwa => {
            let Prepared::Weights(ws) = shared else {
                unreachable!("weights are prepared for coupled runs")
            };
            let starts = CoupledStarts::default_for(h, ws, walk_start(prep, seed)?, seed)?;
            let options = RwtRwaOptions {
                mh_burn_in: settings.mh_burn_in,
            };
            walk(rwt_rwa_run(h, ws, cell.budget, starts, seed, options)?.trace)
        }
        Method::Vsa => {
            let sample = vs_a_collect(h, &uniform, cell.budget, seed)?;
            let mut report = if settings.vsa_known_n {
                vsa_theta_known_n(&sample, labeler, h.covered_target_count())?
            } else {
                vsa_theta_unknown_n(&sample, labeler)?
            };
            report.method = Method::Vsa;
            Ok(Outcome {
                report,
                queries: QueryCounts {
                    target: sample.distinct_members().len(),
                    auxiliary: cell.budget,
                    metropolis: 0,
                },
                collected: sample.collected(),
            })
        }
        Method::RrziVsa => {
            let geo = prep.geo.as_ref().expect("checked in prepare_cell");
            let root = settings.rrzi.root.unwrap_or(geo.bbox);
            let r = rrzi_vsa_estimate(
                h,
                &geo.index,
                &root,
                settings.rrzi.k,
                cell.budget,
                labeler,
                seed,
            )?;
            let collected = r.sample.collected();
            let target = r.sample.distinct_members().len();
            Ok(Outcome {
                report: if settings.vsa_known_n {
                    r.known_n
                } else {
                    r.unknown_n
                },
                queries: QueryCounts {
                    target,
                    auxiliary: r.api_calls,
                    metropolis: 0,
                },
                collected,
            })
        }
    }
}

/// Runs `settings.runs` replications of `cell` in parallel. Replication `r`
/// uses `replication_seed(settings.seed, r)`; results are in replication
/// order and the first failing replication is reported with its seed.
pub fn run_replications(
    prep: &PreparedNetwork,
    cell: &Cell,
    settings: &RunSettings,
) -> Result<Vec<Outcome>> {
    let shared = prepare_cell(prep, cell)?;
    let results: Vec<Result<Outcome>> = (0..settings.runs as u64)
        .into_par_iter()
        .map(|r| {
            let seed = replication_seed(settings.seed, r);
            run_one(prep, cell, &shared, settings, seed).map_err(|e| Error::Replication {
                seed,
                source: Box::new(e),
            })
        })
        .collect();
    results.into_iter().collect()
}

/// One row per label with positive reference mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: Method,
    pub param: String,
    pub budget: usize,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub label: u64,
    pub reference: Reference,
    pub theta_true: f64,
    pub mean_estimate: f64,
    /// Mean over runs of `|θ̂ − θ|`.
    pub mean_abs_error: f64,
    /// `|mean θ̂ − θ|`.
    pub abs_bias: f64,
    pub nrmse: f64,
    pub runs: usize,
    pub target_queries: f64,
    pub auxiliary_queries: f64,
    pub metropolis_queries: f64,
    pub collected: f64,
}

pub fn summarize(
    prep: &PreparedNetwork,
    cell: &Cell,
    outcomes: &[Outcome],
) -> Result<Vec<ResultRow>> {
    if outcomes.is_empty() {
        return Err(Error::InvalidParameter(
            "no replications to summarize".into(),
        ));
    }
    let r = outcomes.len() as f64;
    let mean = |f: &dyn Fn(&Outcome) -> f64| accurate_sum(outcomes.iter().map(f)) / r;
    let target_queries = mean(&|o| o.queries.target as f64);
    let auxiliary_queries = mean(&|o| o.queries.auxiliary as f64);
    let metropolis_queries = mean(&|o| o.queries.metropolis as f64);
    let collected = mean(&|o| o.collected as f64);
    let reference = Reference::of(cell.method);
    let truth = reference.truth(prep);
    let (alpha, beta) = match cell.method {
        Method::RwtVsa => (Some(cell.alpha), None),
        Method::RwtRwa => (Some(cell.alpha), Some(cell.beta)),
        _ => (None, None),
    };
    truth
        .iter()
        .filter(|&(_, t)| t > 0.0)
        .map(|(l, t)| {
            let est: Vec<f64> = outcomes.iter().map(|o| o.report.get(l)).collect();
            let m = accurate_sum(est.iter().copied()) / r;
            Ok(ResultRow {
                method: cell.method,
                param: cell.param(),
                budget: cell.budget,
                alpha,
                beta,
                label: l.0,
                reference,
                theta_true: t,
                mean_estimate: m,
                mean_abs_error: accurate_sum(est.iter().map(|e| (e - t).abs())) / r,
                abs_bias: (m - t).abs(),
                nrmse: nrmse(&est, t)?,
                runs: outcomes.len(),
                target_queries,
                auxiliary_queries,
                metropolis_queries,
                collected,
            })
        })
        .collect()
}

/// Rows of a whole experiment: methods in config order, then jump rate,
/// budget and label ascending.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub const CSV_HEADER: &'static str =
        "method,param,budget,alpha,beta,label,reference,theta_true,mean_estimate,\
mean_abs_error,abs_bias,nrmse,runs,target_queries,auxiliary_queries,metropolis_queries,collected";

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for row in &self.rows {
            wr.serialize(row)
                .map_err(|e| Error::Figure(e.to_string()))?;
        }
        if self.rows.is_empty() {
            wr.write_record(Self::CSV_HEADER.split(','))
                .map_err(|e| Error::Figure(e.to_string()))?;
        }
        wr.flush().map_err(|e| Error::Figure(e.to_string()))
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rd = csv::Reader::from_path(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let rows = rd
            .deserialize()
            .collect::<std::result::Result<Vec<ResultRow>, _>>()
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Ok(ResultTable { rows })
    }

    pub fn labels(&self) -> BTreeSet<u64> {
        self.rows.iter().map(|r| r.label).collect()
    }

    /// Row for `label` of the given method, budget and (when relevant) alpha.
    pub fn find(
        &self,
        method: Method,
        budget: usize,
        alpha: Option<f64>,
        label: Label,
    ) -> Option<&ResultRow> {
        self.rows.iter().find(|r| {
            r.method == method
                && r.budget == budget
                && r.label == label.0
                && (alpha.is_none() || r.alpha == alpha)
        })
    }
}

/// Sweep cells of a config in output order.
pub fn cells(cfg: &ExperimentConfig, n: usize) -> Result<Vec<Cell>> {
    let mut budgets = cfg
        .budget
        .iter()
        .map(|b| b.resolve(n))
        .collect::<Result<Vec<_>>>()?;
    budgets.sort_unstable();
    budgets.dedup();
    let mut out = Vec::new();
    for &method in &cfg.methods {
        let probe = Cell {
            method,
            budget: 0,
            alpha: 0.0,
            beta: 0.0,
        };
        let alphas: Vec<f64> = if probe.uses_jumps() {
            cfg.alpha.clone()
        } else {
            vec![0.0]
        };
        for &alpha in &alphas {
            for &budget in &budgets {
                out.push(Cell {
                    method,
                    budget,
                    alpha,
                    beta: if probe.uses_jumps() {
                        cfg.beta_for(alpha)
                    } else {
                        0.0
                    },
                });
            }
        }
    }
    Ok(out)
}

/// Runs every cell of `cfg` on an already prepared network.
pub fn run_prepared(prep: &PreparedNetwork, cfg: &ExperimentConfig) -> Result<ResultTable> {
    let settings = RunSettings::from_config(cfg);
    let mut rows = Vec::new();
    for cell in cells(cfg, prep.target_size())? {
        info!(
            "running {} {} x{}",
            cell.method,
            cell.param(),
            settings.runs
        );
        let outcomes = run_replications(prep, &cell, &settings)?;
        rows.extend(summarize(prep, &cell, &outcomes)?);
    }
    Ok(ResultTable { rows })
}

/// Builds or loads the network once, computes ground truth, runs all
/// replications and writes the table to `cfg.output` when set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let prep = prepare_network(&cfg.network, cfg.labels)?;
    let table = run_prepared(&prep, cfg)?;
    if let Some(out) = &cfg.output {
        table.write_to(out)?;
    }
    Ok(table)
}
