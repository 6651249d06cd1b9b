use rayon::prelude::*;
use serde::Serialize;

use crate::link::{metrics, u_fp, ErrorMode, Scenario};
use crate::optimizer::{
    baseline_optimize, bcd_optimize, BcdConfig, OptimizationTrace, OptimizerError, RoundingOutcome,
    TraceStatus,
};
use crate::oracle::{
    full_surface, sweep_power_pair, verify_concavity, verify_lemma1, verify_theorem1, Axis,
    PowerPairSweep, SurfaceGrid, TheoremReport,
};
use crate::units::db_to_linear;

use super::config::{ExperimentConfig, SweepAxis};
use super::ExperimentError;

/// Optimized allocation at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Solution {
    pub d_k: f64,
    pub p_m: f64,
    pub p_k: f64,
    pub u_fp: f64,
    pub r_s: f64,
    pub r_d: f64,
    pub u_fp_exact: f64,
    pub r_s_exact: f64,
    pub r_d_exact: f64,
    pub iterations: usize,
    pub status: TraceStatus,
    pub rounding: RoundingOutcome,
}

/// BCD and baseline outcome for one `(z_E, P_Σ)` pair. `solution` is `None`
/// when no feasible full-power strategy exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub z_e_db: f64,
    pub p_sigma_mw: f64,
    pub baseline_r_s: f64,
    pub baseline_p_m: f64,
    pub solution: Option<Solution>,
}

impl OperatingPoint {
    pub fn infeasible(&self) -> bool {
        self.solution.is_none()
    }
}

/// Scenario of `base` moved to another eavesdropper gain and budget.
pub fn scenario_at(base: &Scenario, z_e_db: f64, p_sigma_mw: f64) -> Scenario {
    Scenario {
        z_eve: db_to_linear(z_e_db),
        p_sigma: p_sigma_mw,
        ..*base
    }
}

pub fn solve_operating_point(
    base: &Scenario,
    z_e_db: f64,
    p_sigma_mw: f64,
    bcd: &BcdConfig,
    baseline_tol: f64,
) -> Result<OperatingPoint, ExperimentError> {
    let sc = scenario_at(base, z_e_db, p_sigma_mw);
    let baseline = baseline_optimize(&sc, baseline_tol)?;
    let solution = match bcd_optimize(&sc, bcd) {
        Ok(trace) => Some(summarize(&sc, &trace, bcd.mode)?),
        Err(OptimizerError::Infeasible) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(OperatingPoint {
        z_e_db,
        p_sigma_mw,
        baseline_r_s: baseline.r_s,
        baseline_p_m: baseline.p_m,
        solution,
    })
}

fn summarize(sc: &Scenario, trace: &OptimizationTrace, mode: ErrorMode) -> Result<Solution, ExperimentError> {
    let s = trace.final_strategy;
    let m = metrics(sc, &s, mode)?;
    let exact = metrics(sc, &s, ErrorMode::Exact)?;
    Ok(Solution {
        d_k: s.d_k,
        p_m: s.p_m,
        p_k: s.p_k,
        u_fp: u_fp(sc, s.d_k, s.p_m, mode)?,
        r_s: m.r_s,
        r_d: m.r_d,
        u_fp_exact: u_fp(sc, s.d_k, s.p_m, ErrorMode::Exact)?,
        r_s_exact: exact.r_s,
        r_d_exact: exact.r_d,
        iterations: trace.iteration_count(),
        status: trace.status,
        rounding: trace.rounding,
    })
}

/// Operating points of a sweep experiment, ordered `z_E`-major.
pub fn operating_points(cfg: &ExperimentConfig) -> Result<Vec<OperatingPoint>, ExperimentError> {
    let base = cfg.base_scenario();
    let z_axis = if cfg.experiment_id.sweep_axes().contains(&SweepAxis::ZEveDb) {
        cfg.axis_values(SweepAxis::ZEveDb)
    } else {
        vec![cfg.z_eve_db()]
    };
    let p_axis = if cfg.experiment_id.sweep_axes().contains(&SweepAxis::PSigmaMw) {
        cfg.axis_values(SweepAxis::PSigmaMw)
    } else {
        vec![base.p_sigma]
    };
    let pairs: Vec<(f64, f64)> = z_axis
        .iter()
        .flat_map(|&z| p_axis.iter().map(move |&p| (z, p)))
        .collect();
    let bcd = cfg.bcd_config();
    pairs
        .par_iter()
        .map(|&(z, p)| solve_operating_point(&base, z, p, &bcd, cfg.baseline_tol))
        .collect()
}

/// Power-pair sweeps, one per configured key length.
pub fn power_pair_sweeps(cfg: &ExperimentConfig) -> Result<Vec<PowerPairSweep>, ExperimentError> {
    let sc = cfg.base_scenario();
    cfg.key_lengths
        .iter()
        .map(|&d| Ok(sweep_power_pair(&sc, f64::from(d), cfg.power_step_mw, cfg.mode)?))
        .collect()
}

pub fn surface(cfg: &ExperimentConfig, scenario: &Scenario) -> Result<SurfaceGrid, ExperimentError> {
    Ok(full_surface(
        scenario,
        &cfg.axis_values(SweepAxis::PM),
        &cfg.axis_values(SweepAxis::DK),
        cfg.mode,
    )?)
}

/// BCD run next to the surface it climbs, for one message length.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRun {
    pub d_m: u32,
    pub trace: OptimizationTrace,
    pub surface: SurfaceGrid,
}

pub fn path_runs(cfg: &ExperimentConfig) -> Result<Vec<PathRun>, ExperimentError> {
    let base = cfg.base_scenario();
    let bcd = cfg.bcd_config();
    cfg.message_lengths
        .par_iter()
        .map(|&d_m| {
            let sc = Scenario { d_m, ..base };
            Ok(PathRun {
                d_m,
                trace: bcd_optimize(&sc, &bcd)?,
                surface: surface(cfg, &sc)?,
            })
        })
        .collect()
}

/// Labelled theorem checks: the power-pair sweeps, then concavity along both
/// axes and the message-error lemma on the surface.
pub fn theorem_reports(cfg: &ExperimentConfig) -> Result<Vec<(String, TheoremReport)>, ExperimentError> {
    let mut out = Vec::new();
    for sweep in power_pair_sweeps(cfg)? {
        out.push((format!("d_k={}", sweep.d_k), verify_theorem1(&sweep)));
    }
    let sc = cfg.base_scenario();
    let grid = surface(cfg, &sc)?;
    out.push(("p_m".to_string(), verify_concavity(&grid, Axis::PM, cfg.concavity_tol)?));
    out.push(("d_k".to_string(), verify_concavity(&grid, Axis::DK, cfg.concavity_tol)?));
    out.push(("message_error".to_string(), verify_lemma1(&sc, &grid, cfg.concavity_tol)?));
    Ok(out)
}
