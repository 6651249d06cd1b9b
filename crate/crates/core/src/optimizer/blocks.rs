use crate::link::{check_constraints_with, u_fp, ErrorMode, Scenario};

use super::search::{linspace, maximize_feasible};
use super::OptimizerError;

/// Samples used to locate feasible runs along one coordinate.
const SCAN_SAMPLES: usize = 512;
/// Bisection tolerance on feasible-run endpoints, relative to the axis span.
const EDGE_TOL: f64 = 1e-9;

fn feasible_at(scenario: &Scenario, d_k: f64, p_m: f64, mode: ErrorMode) -> bool {
    (0.0..=scenario.p_sigma).contains(&p_m)
        && check_constraints_with(scenario, &scenario.full_power(d_k, p_m), mode).feasible()
}

/// Best full-power message power for a fixed key length.
///
/// Returns `(p_m, u_fp)`, located to within `tol` mW.
pub fn maximize_power(
    scenario: &Scenario,
    d_k: f64,
    tol: f64,
    mode: ErrorMode,
) -> Result<(f64, f64), OptimizerError> {
    let p_sigma = scenario.p_sigma;
    maximize_feasible(
        |p_m| feasible_at(scenario, d_k, p_m, mode),
        |p_m| u_fp(scenario, d_k, p_m.clamp(0.0, p_sigma), mode),
        0.0,
        p_sigma,
        SCAN_SAMPLES,
        tol,
        EDGE_TOL * p_sigma,
    )?
    .ok_or(OptimizerError::EmptyFeasibleSet {
        axis: "p_m",
        fixed: d_k,
    })
}

/// Best relaxed key length for a fixed message power.
///
/// Returns `(d_k, u_fp)`, located to within `tol` bits.
pub fn maximize_keylen(
    scenario: &Scenario,
    p_m: f64,
    tol: f64,
    mode: ErrorMode,
) -> Result<(f64, f64), OptimizerError> {
    let n = f64::from(scenario.n);
    maximize_feasible(
        |d_k| feasible_at(scenario, d_k, p_m, mode),
        |d_k| u_fp(scenario, d_k.clamp(0.0, n), p_m, mode),
        0.0,
        n,
        SCAN_SAMPLES,
        tol,
        EDGE_TOL * n,
    )?
    .ok_or(OptimizerError::EmptyFeasibleSet {
        axis: "d_k",
        fixed: p_m,
    })
}

/// Default side length of the initialization grid.
pub const INIT_GRID: usize = 64;

/// Highest-utility feasible point of a `resolution × resolution` grid over
/// `[0, n] × [0, p_sigma]`, as `(d_k, p_m)`. Ties go to the smallest `p_m`,
/// then the smallest `d_k`.
pub fn find_initial_feasible(
    scenario: &Scenario,
    resolution: usize,
    mode: ErrorMode,
) -> Result<(f64, f64), OptimizerError> {
    let powers = linspace(0.0, scenario.p_sigma, resolution);
    let keys = linspace(0.0, f64::from(scenario.n), resolution);
    let mut best: Option<(f64, f64, f64)> = None;
    for &p_m in &powers {
        for &d_k in &keys {
            if !feasible_at(scenario, d_k, p_m, mode) {
                continue;
            }
            let u = u_fp(scenario, d_k, p_m, mode)?;
            if best.is_none_or(|(_, _, bu)| u > bu) {
                best = Some((d_k, p_m, u));
            }
        }
    }
    best.map(|(d_k, p_m, _)| (d_k, p_m))
        .ok_or(OptimizerError::Infeasible)
}

/// Integer key length from a relaxed one by comparing its floor and ceiling
/// at fixed `p_m`. Infeasible neighbours are discarded; ties go to the
/// smaller length.
pub fn round_keylen(
    scenario: &Scenario,
    p_m: f64,
    d_k_relaxed: f64,
    mode: ErrorMode,
) -> Result<u32, OptimizerError> {
    let n = f64::from(scenario.n);
    let relaxed = d_k_relaxed.clamp(0.0, n);
    let mut best: Option<(f64, f64)> = None;
    for d in [relaxed.floor(), relaxed.ceil()] {
        if best.is_some_and(|(bd, _)| bd == d) || !feasible_at(scenario, d, p_m, mode) {
            continue;
        }
        let u = u_fp(scenario, d, p_m, mode)?;
        if best.is_none_or(|(_, bu)| u > bu) {
            best = Some((d, u));
        }
    }
    best.map(|(d, _)| d as u32)
        .ok_or(OptimizerError::BothNeighborsInfeasible { d_k_relaxed })
}

/// Integer neighbour with the higher utility regardless of feasibility.
pub(crate) fn best_neighbor(
    scenario: &Scenario,
    p_m: f64,
    d_k_relaxed: f64,
    mode: ErrorMode,
) -> Result<u32, OptimizerError> {
    let relaxed = d_k_relaxed.clamp(0.0, f64::from(scenario.n));
    let (lo, hi) = (relaxed.floor(), relaxed.ceil());
    let pick = if u_fp(scenario, hi, p_m, mode)? > u_fp(scenario, lo, p_m, mode)? {
        hi
    } else {
        lo
    };
    Ok(pick as u32)
}
