use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::run::ResultTable;

/// Tidy plot-ready record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub method: String,
    pub param: String,
    pub label: u64,
    pub value: f64,
}

/// Figure analogs written by [`emit_figure_data`], as `(file stem, rows)`.
pub fn figure_rows(tables: &[ResultTable]) -> Result<Vec<(&'static str, Vec<FigureRow>)>> {
    if tables.is_empty() || tables.iter().all(|t| t.rows.is_empty()) {
        return Err(Error::Figure("no result rows to export".into()));
    }
    let axis = tables[0].labels();
    if let Some((i, _)) = tables.iter().enumerate().find(|(_, t)| t.labels() != axis) {
        return Err(Error::Figure(format!(
            "table {i} has a different label axis than table 0"
        )));
    }
    let rows = || tables.iter().flat_map(|t| t.rows.iter());

    // Estimates against budget, with the truth as its own series.
    let mut convergence: Vec<FigureRow> = rows()
        .map(|r| FigureRow {
            method: r.method.to_string(),
            param: r.param.clone(),
            label: r.label,
            value: r.mean_estimate,
        })
        .collect();
    let mut truth: Vec<FigureRow> = rows()
        .map(|r| FigureRow {
            method: format!("truth-{}", reference_tag(r)),
            param: String::new(),
            label: r.label,
            value: r.theta_true,
        })
        .collect();
    truth.sort_by(|a, b| (&a.method, a.label).cmp(&(&b.method, b.label)));
    truth.dedup_by(|a, b| a.method == b.method && a.label == b.label);
    convergence.extend(truth);

    let nrmse: Vec<FigureRow> = rows()
        .map(|r| FigureRow {
            method: r.method.to_string(),
            param: r.param.clone(),
            label: r.label,
            value: r.nrmse,
        })
        .collect();

    // NRMSE against jump rate for the methods that have one.
    let jumps: Vec<FigureRow> = rows()
        .filter_map(|r| {
            let alpha = r.alpha?;
            let param = match r.beta {
                Some(b) => format!("alpha={alpha};beta={b}"),
                None => format!("alpha={alpha}"),
            };
            Some(FigureRow {
                method: r.method.to_string(),
                param: format!("{param};budget={}", r.budget),
                label: r.label,
                value: r.nrmse,
            })
        })
        .collect();

    Ok(vec![
        ("fig2-convergence", convergence),
        ("fig3-nrmse", nrmse),
        ("fig7-style", jumps),
    ])
}

fn reference_tag(r: &super::run::ResultRow) -> &'static str {
    match r.reference {
        super::run::Reference::All => "all",
        super::run::Reference::Covered => "covered",
    }
}

/// Writes `fig2-convergence.csv`, `fig3-nrmse.csv` and `fig7-style.csv`
/// (`method,param,label,value`) into `dir` and returns their paths.
pub fn emit_figure_data(tables: &[ResultTable], dir: &Path) -> Result<Vec<PathBuf>> {
    let figures = figure_rows(tables)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for (stem, rows) in figures {
        let path = dir.join(format!("{stem}.csv"));
        write_figure(&path, &rows)?;
        paths.push(path);
    }
    Ok(paths)
}

pub fn write_figure(path: &Path, rows: &[FigureRow]) -> Result<()> {
    let mut wr = csv::Writer::from_path(path)
        .map_err(|e| Error::Figure(format!("{}: {e}", path.display())))?;
    if rows.is_empty() {
        wr.write_record(["method", "param", "label", "value"])
            .map_err(|e| Error::Figure(e.to_string()))?;
    }
    for r in rows {
        wr.serialize(r).map_err(|e| Error::Figure(e.to_string()))?;
    }
    wr.flush().map_err(|e| Error::io(path, e))
}

pub fn read_figure(path: &Path) -> Result<Vec<FigureRow>> {
    let mut rd = csv::Reader::from_path(path)
        .map_err(|e| Error::Figure(format!("{}: {e}", path.display())))?;
    rd.deserialize()
        .collect::<std::result::Result<Vec<FigureRow>, _>>()
        .map_err(|e| Error::Figure(format!("{}: {e}", path.display())))
}
