//! Brute-force checks of the structural claims behind the optimizer.
//!
//! Everything here is built on the public link-model API with plain grid
//! evaluation; nothing is shared with [`crate::optimizer`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::link::{
    check_constraints_with, link_report, system_utility, u_fp, ErrorMode, LinkError, Receiver,
    Scenario, Strategy,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("need at least three feasible collinear points along {axis}")]
    InsufficientPoints { axis: Axis },
    #[error("{axis} samples are not evenly spaced")]
    NonUniformAxis { axis: Axis },
    #[error("grid step must be positive and finite, got {0}")]
    InvalidStep(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    PM,
    DK,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::PM => "p_m",
            Axis::DK => "d_k",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    /// Optimal power allocation spends the whole budget.
    T1,
    /// Message errors decrease and are convex in `p_m`.
    L1,
    /// Full-power utility is concave in `p_m`.
    T2,
    /// Full-power utility is concave in `d_k`.
    T3,
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub coordinates: Vec<(String, f64)>,
    pub measured: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: TheoremId,
    pub points_checked: usize,
    pub violations: Vec<Violation>,
    pub passed: bool,
    pub notes: Vec<String>,
}

impl TheoremReport {
    fn new(theorem_id: TheoremId, points_checked: usize, violations: Vec<Violation>, notes: Vec<String>) -> Self {
        TheoremReport {
            theorem_id,
            points_checked,
            passed: violations.is_empty(),
            violations,
            notes,
        }
    }

    pub fn max_violation(&self) -> Option<f64> {
        self.violations
            .iter()
            .map(|v| v.measured)
            .max_by(f64::total_cmp)
    }
}

fn coords(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Best key power for one message power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPairColumn {
    pub p_m: f64,
    /// `None` when no key power in `[0, p_sigma − p_m]` is feasible.
    pub best: Option<(f64, f64)>,
}

impl PowerPairColumn {
    pub fn best_p_k(&self) -> Option<f64> {
        self.best.map(|(p_k, _)| p_k)
    }

    pub fn utility(&self) -> Option<f64> {
        self.best.map(|(_, u)| u)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerPairSweep {
    pub d_k: f64,
    pub step: f64,
    pub p_sigma: f64,
    pub columns: Vec<PowerPairColumn>,
}

/// Exhaustive search over both powers without the full-power restriction.
///
/// For every `p_m` on a grid of spacing `step` over `[0, p_sigma]`, scans
/// `p_k` on the same spacing over `[0, p_sigma − p_m]` (the last sample
/// exactly at the budget) and keeps the feasible maximizer of the system
/// utility. Ties go to the smaller `p_k`.
pub fn sweep_power_pair(
    scenario: &Scenario,
    d_k: f64,
    step: f64,
    mode: ErrorMode,
) -> Result<PowerPairSweep, OracleError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(OracleError::InvalidStep(step));
    }
    let p_sigma = scenario.p_sigma;
    let count = (p_sigma / step).round() as usize;
    let grid_point = |i: usize, last: usize, end: f64| if i == last { end } else { i as f64 * step };
    let columns = (0..=count)
        .into_par_iter()
        .map(|i| -> Result<PowerPairColumn, LinkError> {
            let p_m = grid_point(i, count, p_sigma);
            let room = p_sigma - p_m;
            let steps = (room / step).round() as usize;
            let mut best: Option<(f64, f64)> = None;
            for j in 0..=steps {
                let p_k = grid_point(j, steps, room);
                let s = Strategy { d_k, p_m, p_k };
                if !check_constraints_with(scenario, &s, mode).feasible() {
                    continue;
                }
                let u = system_utility(scenario, &s, mode)?;
                if best.is_none_or(|(_, bu)| u > bu) {
                    best = Some((p_k, u));
                }
            }
            Ok(PowerPairColumn { p_m, best })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PowerPairSweep {
        d_k,
        step,
        p_sigma,
        columns,
    })
}

/// Every feasible column optimum must leave at most one grid step of the
/// budget unused.
pub fn verify_theorem1(sweep: &PowerPairSweep) -> TheoremReport {
    let slack = sweep.step * (1.0 + 1e-9);
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut infeasible = 0;
    for col in &sweep.columns {
        let Some((p_k, _)) = col.best else {
            infeasible += 1;
            continue;
        };
        checked += 1;
        let unused = sweep.p_sigma - (col.p_m + p_k);
        if unused > slack {
            violations.push(Violation {
                coordinates: coords(&[("d_k", sweep.d_k), ("p_m", col.p_m), ("p_k", p_k)]),
                measured: unused,
                tolerance: sweep.step,
            });
        }
    }
    let notes = vec![format!(
        "d_k = {}: {checked} feasible and {infeasible} infeasible p_m columns",
        sweep.d_k
    )];
    TheoremReport::new(TheoremId::T1, checked, violations, notes)
}

/// Full-power utility and feasibility over a `p_m × d_k` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGrid {
    pub axis_pm: Vec<f64>,
    pub axis_dk: Vec<f64>,
    /// `u[i][j]` at `(axis_pm[i], axis_dk[j])`.
    pub u: Vec<Vec<f64>>,
    pub feasible: Vec<Vec<bool>>,
    /// Best feasible `(p_m, d_k, u)`; ties go to the lowest `p_m`, then `d_k`.
    pub argmax: Option<(f64, f64, f64)>,
}

impl SurfaceGrid {
    pub fn feasible_count(&self) -> usize {
        self.feasible.iter().flatten().filter(|&&f| f).count()
    }
}

/// Integer key lengths `0..=n`.
pub fn integer_keylengths(scenario: &Scenario) -> Vec<f64> {
    (0..=scenario.n).map(f64::from).collect()
}

pub fn full_surface(
    scenario: &Scenario,
    axis_pm: &[f64],
    axis_dk: &[f64],
    mode: ErrorMode,
) -> Result<SurfaceGrid, OracleError> {
    let rows = axis_pm
        .par_iter()
        .map(|&p_m| -> Result<(Vec<f64>, Vec<bool>), LinkError> {
            let mut u = Vec::with_capacity(axis_dk.len());
            let mut ok = Vec::with_capacity(axis_dk.len());
            for &d_k in axis_dk {
                let s = scenario.full_power(d_k, p_m);
                u.push(u_fp(scenario, d_k, p_m, mode)?);
                ok.push(check_constraints_with(scenario, &s, mode).feasible());
            }
            Ok((u, ok))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (u, feasible): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let mut argmax: Option<(f64, f64, f64)> = None;
    for (i, &p_m) in axis_pm.iter().enumerate() {
        for (j, &d_k) in axis_dk.iter().enumerate() {
            if feasible[i][j] && argmax.is_none_or(|(_, _, bu)| u[i][j] > bu) {
                argmax = Some((p_m, d_k, u[i][j]));
            }
        }
    }
    Ok(SurfaceGrid {
        axis_pm: axis_pm.to_vec(),
        axis_dk: axis_dk.to_vec(),
        u,
        feasible,
        argmax,
    })
}

fn check_uniform(xs: &[f64], axis: Axis) -> Result<(), OracleError> {
    if xs.len() < 3 {
        return Ok(());
    }
    let h = xs[1] - xs[0];
    let span = (xs[xs.len() - 1] - xs[0]).abs();
    let uniform = xs
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * span);
    if uniform {
        Ok(())
    } else {
        Err(OracleError::NonUniformAxis { axis })
    }
}

/// Second central differences of the utility along `axis`, at every interior
/// point whose two neighbours are feasible too, must not exceed `tol`.
pub fn verify_concavity(surface: &SurfaceGrid, axis: Axis, tol: f64) -> Result<TheoremReport, OracleError> {
    let (theorem, other_len, len) = match axis {
        Axis::PM => (TheoremId::T2, surface.axis_dk.len(), surface.axis_pm.len()),
        Axis::DK => (TheoremId::T3, surface.axis_pm.len(), surface.axis_dk.len()),
    };
    check_uniform(
        match axis {
            Axis::PM => &surface.axis_pm,
            Axis::DK => &surface.axis_dk,
        },
        axis,
    )?;
    let at = |line: usize, k: usize| match axis {
        Axis::PM => (k, line),
        Axis::DK => (line, k),
    };
    let mut checked = 0;
    let mut violations = Vec::new();
    for line in 0..other_len {
        for k in 1..len.saturating_sub(1) {
            let idx = [at(line, k - 1), at(line, k), at(line, k + 1)];
            if !idx.iter().all(|&(i, j)| surface.feasible[i][j]) {
                continue;
            }
            checked += 1;
            let [a, b, c] = idx.map(|(i, j)| surface.u[i][j]);
            let second = c - 2.0 * b + a;
            if second > tol {
                let (i, j) = idx[1];
                violations.push(Violation {
                    coordinates: coords(&[("p_m", surface.axis_pm[i]), ("d_k", surface.axis_dk[j])]),
                    measured: second,
                    tolerance: tol,
                });
            }
        }
    }
    if checked == 0 {
        return Err(OracleError::InsufficientPoints { axis });
    }
    let notes = vec![format!("second differences along {axis} at feasible interior points")];
    Ok(TheoremReport::new(theorem, checked, violations, notes))
}

/// Message errors of both receivers along a `p_m` grid under full power.
///
/// Monotonicity (strictly negative first differences) is checked between
/// consecutive samples inside the feasible `p_m` range, i.e. where some
/// `d_k` of `surface` is feasible. Convexity (second differences at least
/// `−tol`) is checked there as well but only where the receiver's message
/// SINR is at least 1; the unrestricted convexity outcome is added to the
/// notes.
pub fn verify_lemma1(scenario: &Scenario, surface: &SurfaceGrid, tol: f64) -> Result<TheoremReport, OracleError> {
    check_uniform(&surface.axis_pm, Axis::PM)?;
    let in_region: Vec<bool> = surface.feasible.iter().map(|row| row.iter().any(|&f| f)).collect();
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    for receiver in [Receiver::Bob, Receiver::Eve] {
        let mut eps = Vec::with_capacity(surface.axis_pm.len());
        let mut gamma = Vec::with_capacity(surface.axis_pm.len());
        for &p_m in &surface.axis_pm {
            let r = link_report(receiver, scenario, &scenario.full_power(0.0, p_m))?;
            eps.push(r.eps_m);
            gamma.push(r.gamma_m.value());
        }
        let name = format!("{receiver:?}");
        let mut restricted = 0;
        let mut unrestricted_bad = 0;
        let mut unrestricted = 0;
        for i in 0..eps.len() {
            let p_m = surface.axis_pm[i];
            if i + 1 < eps.len() && in_region[i] && in_region[i + 1] {
                checked += 1;
                let first = eps[i + 1] - eps[i];
                if first >= 0.0 {
                    violations.push(Violation {
                        coordinates: coords(&[("p_m", p_m)]),
                        measured: first,
                        tolerance: 0.0,
                    });
                }
            }
            if i == 0 || i + 1 == eps.len() || !(in_region[i - 1] && in_region[i] && in_region[i + 1]) {
                continue;
            }
            let second = eps[i + 1] - 2.0 * eps[i] + eps[i - 1];
            unrestricted += 1;
            if second < -tol {
                unrestricted_bad += 1;
            }
            if gamma[i - 1] < 1.0 {
                continue;
            }
            restricted += 1;
            checked += 1;
            if second < -tol {
                violations.push(Violation {
                    coordinates: coords(&[("p_m", p_m)]),
                    measured: second,
                    tolerance: -tol,
                });
            }
        }
        notes.push(format!(
            "{name}: convexity checked at {restricted} points with message SINR >= 1; \
             unrestricted: {unrestricted_bad} of {unrestricted} points below -{tol:e}"
        ));
    }
    Ok(TheoremReport::new(TheoremId::L1, checked, violations, notes))
}
