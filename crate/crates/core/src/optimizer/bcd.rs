use serde::{Deserialize, Serialize};

use crate::link::{check_constraints_with, u_fp, ConstraintFlags, ErrorMode, Scenario, Strategy};

use super::blocks::{
    best_neighbor, find_initial_feasible, maximize_keylen, maximize_power, round_keylen, INIT_GRID,
};
use super::OptimizerError;

/// Settings of the alternating maximization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BcdConfig {
    /// Stop once consecutive utilities differ by at most this much.
    pub xi: f64,
    /// Iteration cap.
    pub t_max: usize,
    /// Width of the final 1-D search bracket as a fraction of the axis span.
    pub subproblem_tol: f64,
    /// Starting `(d_k, p_m)`; a grid scan picks one when absent.
    pub init: Option<(f64, f64)>,
    pub mode: ErrorMode,
}

impl Default for BcdConfig {
    fn default() -> Self {
        BcdConfig {
            xi: 2e-16,
            t_max: 100,
            subproblem_tol: 1e-6,
            init: None,
            mode: ErrorMode::Approx,
        }
    }
}

impl BcdConfig {
    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.xi.is_finite() && self.xi > 0.0) {
            out.push(format!("xi must be positive, got {}", self.xi));
        }
        if self.t_max < 1 {
            out.push("t_max must be at least 1".to_string());
        }
        if !(self.subproblem_tol.is_finite() && self.subproblem_tol > 0.0) {
            out.push(format!(
                "subproblem_tol must be positive, got {}",
                self.subproblem_tol
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub t: usize,
    pub d_k: f64,
    pub p_m: f64,
    pub u_fp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceStatus {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RoundingOutcome {
    Feasible,
    /// Neither integer neighbour of the relaxed key length is feasible; the
    /// better one is reported anyway.
    BothNeighborsInfeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTrace {
    pub initial: (f64, f64),
    pub iterations: Vec<IterationRecord>,
    pub status: TraceStatus,
    /// Relaxed solution at termination.
    pub relaxed: Strategy,
    pub rounding: RoundingOutcome,
    /// Solution with an integer key length.
    pub final_strategy: Strategy,
    pub final_utility: f64,
    pub final_flags: ConstraintFlags,
}

impl OptimizationTrace {
    pub fn iteration_count(&self) -> usize {
        self.iterations.len()
    }
}

fn accept_empty(r: Result<(f64, f64), OptimizerError>) -> Result<Option<(f64, f64)>, OptimizerError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(OptimizerError::EmptyFeasibleSet { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Alternates the power and key-length blocks from a feasible start, then
/// rounds the key length at the final message power.
///
/// A block update is accepted only if it strictly improves the utility, so
/// the recorded utilities never decrease.
pub fn bcd_optimize(scenario: &Scenario, cfg: &BcdConfig) -> Result<OptimizationTrace, OptimizerError> {
    scenario.validate()?;
    let issues = cfg.issues();
    if !issues.is_empty() {
        return Err(OptimizerError::InvalidConfig(issues.join("; ")));
    }
    let mode = cfg.mode;
    let power_tol = cfg.subproblem_tol * scenario.p_sigma;
    let key_tol = cfg.subproblem_tol * f64::from(scenario.n);

    let (mut d_k, mut p_m) = match cfg.init {
        Some(init) => init,
        None => find_initial_feasible(scenario, INIT_GRID, mode)
            .or_else(|_| find_initial_feasible(scenario, 4 * INIT_GRID, mode))?,
    };
    let initial = (d_k, p_m);
    if !check_constraints_with(scenario, &scenario.full_power(d_k, p_m), mode).feasible() {
        return Err(OptimizerError::Infeasible);
    }

    let mut current = u_fp(scenario, d_k, p_m, mode)?;
    let mut previous = f64::NEG_INFINITY;
    let mut iterations = Vec::new();
    let mut status = TraceStatus::MaxIterations;
    for t in 1..=cfg.t_max {
        // The current point is feasible, so an empty result only means the
        // scan missed it; keep the current coordinate.
        if let Some((p_new, u_p)) = accept_empty(maximize_power(scenario, d_k, power_tol, mode))? {
            if u_p > current {
                p_m = p_new;
                current = u_p;
            }
        }
        if let Some((d_new, u_d)) = accept_empty(maximize_keylen(scenario, p_m, key_tol, mode))? {
            if u_d > current {
                d_k = d_new;
                current = u_d;
            }
        }
        iterations.push(IterationRecord {
            t,
            d_k,
            p_m,
            u_fp: current,
        });
        if (current - previous).abs() <= cfg.xi {
            status = TraceStatus::Converged;
            break;
        }
        previous = current;
    }

    let (integer, rounding) = match round_keylen(scenario, p_m, d_k, mode) {
        Ok(d) => (d, RoundingOutcome::Feasible),
        Err(OptimizerError::BothNeighborsInfeasible { .. }) => (
            best_neighbor(scenario, p_m, d_k, mode)?,
            RoundingOutcome::BothNeighborsInfeasible,
        ),
        Err(e) => return Err(e),
    };
    let final_strategy = scenario.full_power(f64::from(integer), p_m);
    Ok(OptimizationTrace {
        initial,
        iterations,
        status,
        relaxed: scenario.full_power(d_k, p_m),
        rounding,
        final_strategy,
        final_utility: u_fp(scenario, final_strategy.d_k, p_m, mode)?,
        final_flags: check_constraints_with(scenario, &final_strategy, mode),
    })
}
