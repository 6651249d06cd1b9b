//! Configured experiment runs and their CSV artifacts.
//!
//! Every run writes its CSV files plus `manifest.json` into one directory.
//! Reals are written with 17 significant digits so that values read back
//! are bit-identical; missing values (infeasible rows) are `NaN`.
//!
//! CSV schemas:
//!
//! | file | columns |
//! |------|---------|
//! | `fig2_dk{d_k}.csv` | `p_m,best_p_k,utility,feasible` |
//! | `fig3.csv` | `p_m,d_k,u_fp,feasible` |
//! | `fig4_dm{d_m}_surface.csv` | `p_m,d_k,u_fp,feasible` |
//! | `fig4_dm{d_m}_path.csv` | `t,d_k,p_m,u_fp` |
//! | `fig4_summary.csv` | see [`FIG4_SUMMARY_HEADER`] |
//! | `fig5.csv`, `fig6.csv`, `fig7_ze{z_e_db}db.csv` | see [`OPERATING_HEADER`] |
//! | `theorems.csv` | see [`THEOREMS_HEADER`] |
//! | `theorem_violations.csv` | `theorem_id,label,coordinates,measured,tolerance` |

mod config;
mod runs;

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use thiserror::Error;

use crate::link::LinkError;
use crate::optimizer::{OptimizerError, RoundingOutcome, TraceStatus};
use crate::oracle::OracleError;

pub use config::{
    BcdSettings, ExperimentConfig, ExperimentId, ScenarioConfig, SweepAxis, SweepSpec,
    DEFAULT_FIG7_Z_EVE_DB, DEFAULT_POWER_POINTS, DEFAULT_SWEEP_POINTS,
};
pub use runs::{
    operating_points, path_runs, power_pair_sweeps, scenario_at, solve_operating_point, surface,
    theorem_reports, OperatingPoint, PathRun, Solution,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot write {path}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv output failed")]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    pub fn is_config(&self) -> bool {
        matches!(self, ExperimentError::Config(_))
    }
}

pub const FIG2_HEADER: [&str; 4] = ["p_m", "best_p_k", "utility", "feasible"];
pub const SURFACE_HEADER: [&str; 4] = ["p_m", "d_k", "u_fp", "feasible"];
pub const PATH_HEADER: [&str; 4] = ["t", "d_k", "p_m", "u_fp"];
pub const FIG4_SUMMARY_HEADER: [&str; 12] = [
    "d_m",
    "status",
    "iterations",
    "relaxed_d_k",
    "d_k",
    "p_m",
    "u_fp",
    "rounding",
    "oracle_p_m",
    "oracle_d_k",
    "oracle_u_fp",
    "oracle_gap",
];
pub const OPERATING_HEADER: [&str; 17] = [
    "z_e_db",
    "p_sigma_mw",
    "u_fp",
    "r_s",
    "r_d",
    "baseline_r_s",
    "baseline_p_m",
    "d_k",
    "p_m",
    "p_k",
    "iterations",
    "status",
    "rounding",
    "u_fp_exact",
    "r_s_exact",
    "r_d_exact",
    "infeasible",
];
pub const THEOREMS_HEADER: [&str; 7] = [
    "theorem_id",
    "label",
    "points_checked",
    "violations",
    "max_violation",
    "passed",
    "notes",
];
pub const VIOLATIONS_HEADER: [&str; 5] = ["theorem_id", "label", "coordinates", "measured", "tolerance"];

/// One emitted artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmittedFile {
    pub name: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub experiment_id: ExperimentId,
    pub tool_version: String,
    pub timestamp_unix: u64,
    pub config: ExperimentConfig,
    pub files: Vec<EmittedFile>,
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_opt(x: Option<f64>) -> String {
    format_real(x.unwrap_or(f64::NAN))
}

fn status_name(s: TraceStatus) -> &'static str {
    match s {
        TraceStatus::Converged => "converged",
        TraceStatus::MaxIterations => "max_iterations",
    }
}

fn rounding_name(r: RoundingOutcome) -> &'static str {
    match r {
        RoundingOutcome::Feasible => "feasible",
        RoundingOutcome::BothNeighborsInfeasible => "both_neighbors_infeasible",
    }
}

struct Sink {
    dir: PathBuf,
    files: Vec<EmittedFile>,
}

impl Sink {
    fn write(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), ExperimentError> {
        let path = self.dir.join(name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|source| ExperimentError::Io { path, source })?;
        self.files.push(EmittedFile {
            name: name.to_string(),
            rows: rows.len(),
        });
        Ok(())
    }
}

fn surface_rows(g: &crate::oracle::SurfaceGrid) -> Vec<Vec<String>> {
    let mut rows = Vec::with_capacity(g.axis_pm.len() * g.axis_dk.len());
    for (i, &p_m) in g.axis_pm.iter().enumerate() {
        for (j, &d_k) in g.axis_dk.iter().enumerate() {
            rows.push(vec![
                format_real(p_m),
                format_real(d_k),
                format_real(g.u[i][j]),
                g.feasible[i][j].to_string(),
            ]);
        }
    }
    rows
}

fn operating_rows(points: &[OperatingPoint]) -> Vec<Vec<String>> {
    points
        .iter()
        .map(|p| {
            let s = p.solution;
            let real = |f: fn(&Solution) -> f64| format_opt(s.as_ref().map(f));
            vec![
                format_real(p.z_e_db),
                format_real(p.p_sigma_mw),
                real(|s| s.u_fp),
                real(|s| s.r_s),
                real(|s| s.r_d),
                format_real(p.baseline_r_s),
                format_real(p.baseline_p_m),
                real(|s| s.d_k),
                real(|s| s.p_m),
                real(|s| s.p_k),
                s.map_or(0, |s| s.iterations).to_string(),
                s.map_or("infeasible", |s| status_name(s.status)).to_string(),
                s.map_or("", |s| rounding_name(s.rounding)).to_string(),
                real(|s| s.u_fp_exact),
                real(|s| s.r_s_exact),
                real(|s| s.r_d_exact),
                p.infeasible().to_string(),
            ]
        })
        .collect()
}

fn series_label(x: f64) -> String {
    format!("{x}")
}

/// Runs the configured experiment and writes its artifacts into `out_dir`.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunManifest, ExperimentError> {
    let issues = cfg.validate();
    if !issues.is_empty() {
        return Err(ExperimentError::Config(issues.join("; ")));
    }
    std::fs::create_dir_all(out_dir).map_err(|source| ExperimentError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut sink = Sink {
        dir: out_dir.to_path_buf(),
        files: Vec::new(),
    };
    match cfg.experiment_id {
        ExperimentId::Fig2 => {
            for sweep in power_pair_sweeps(cfg)? {
                let rows: Vec<Vec<String>> = sweep
                    .columns
                    .iter()
                    .map(|c| {
                        vec![
                            format_real(c.p_m),
                            format_opt(c.best_p_k()),
                            format_opt(c.utility()),
                            c.best.is_some().to_string(),
                        ]
                    })
                    .collect();
                sink.write(&format!("fig2_dk{}.csv", sweep.d_k), &FIG2_HEADER, &rows)?;
            }
        }
        ExperimentId::Fig3 => {
            let g = surface(cfg, &cfg.base_scenario())?;
            sink.write("fig3.csv", &SURFACE_HEADER, &surface_rows(&g))?;
        }
        ExperimentId::Fig4 => {
            let mut summary = Vec::new();
            for run in path_runs(cfg)? {
                let t = &run.trace;
                sink.write(&format!("fig4_dm{}_surface.csv", run.d_m), &SURFACE_HEADER, &surface_rows(&run.surface))?;
                let sc = crate::link::Scenario {
                    d_m: run.d_m,
                    ..cfg.base_scenario()
                };
                let (d0, p0) = t.initial;
                let mut path = vec![vec![
                    "0".to_string(),
                    format_real(d0),
                    format_real(p0),
                    format_real(crate::link::u_fp(&sc, d0, p0, cfg.mode)?),
                ]];
                path.extend(t.iterations.iter().map(|it| {
                    vec![
                        it.t.to_string(),
                        format_real(it.d_k),
                        format_real(it.p_m),
                        format_real(it.u_fp),
                    ]
                }));
                sink.write(&format!("fig4_dm{}_path.csv", run.d_m), &PATH_HEADER, &path)?;
                let oracle = run.surface.argmax;
                summary.push(vec![
                    run.d_m.to_string(),
                    status_name(t.status).to_string(),
                    t.iteration_count().to_string(),
                    format_real(t.relaxed.d_k),
                    format_real(t.final_strategy.d_k),
                    format_real(t.final_strategy.p_m),
                    format_real(t.final_utility),
                    rounding_name(t.rounding).to_string(),
                    format_opt(oracle.map(|o| o.0)),
                    format_opt(oracle.map(|o| o.1)),
                    format_opt(oracle.map(|o| o.2)),
                    format_opt(oracle.map(|o| (t.final_utility - o.2).abs())),
                ]);
            }
            sink.write("fig4_summary.csv", &FIG4_SUMMARY_HEADER, &summary)?;
        }
        ExperimentId::Fig5 | ExperimentId::Fig6 => {
            let rows = operating_rows(&operating_points(cfg)?);
            sink.write(&format!("{}.csv", cfg.experiment_id), &OPERATING_HEADER, &rows)?;
        }
        ExperimentId::Fig7 => {
            let points = operating_points(cfg)?;
            for z in cfg.axis_values(SweepAxis::ZEveDb) {
                let series: Vec<OperatingPoint> = points.iter().copied().filter(|p| p.z_e_db == z).collect();
                sink.write(
                    &format!("fig7_ze{}db.csv", series_label(z)),
                    &OPERATING_HEADER,
                    &operating_rows(&series),
                )?;
            }
        }
        ExperimentId::Theorems => {
            let reports = theorem_reports(cfg)?;
            let mut summary = Vec::new();
            let mut violations = Vec::new();
            for (label, r) in &reports {
                summary.push(vec![
                    r.theorem_id.to_string(),
                    label.clone(),
                    r.points_checked.to_string(),
                    r.violations.len().to_string(),
                    format_opt(r.max_violation()),
                    r.passed.to_string(),
                    r.notes.join(" | "),
                ]);
                for v in &r.violations {
                    let coords: Vec<String> = v
                        .coordinates
                        .iter()
                        .map(|(k, x)| format!("{k}={}", format_real(*x)))
                        .collect();
                    violations.push(vec![
                        r.theorem_id.to_string(),
                        label.clone(),
                        coords.join(";"),
                        format_real(v.measured),
                        format_real(v.tolerance),
                    ]);
                }
            }
            sink.write("theorems.csv", &THEOREMS_HEADER, &summary)?;
            sink.write("theorem_violations.csv", &VIOLATIONS_HEADER, &violations)?;
        }
    }
    let manifest = RunManifest {
        experiment_id: cfg.experiment_id,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        config: cfg.clone(),
        files: sink.files,
    };
    let path = out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| ExperimentError::Io {
        path: path.clone(),
        source: e.into(),
    })?;
    std::fs::write(&path, text).map_err(|source| ExperimentError::Io { path, source })?;
    Ok(manifest)
}
