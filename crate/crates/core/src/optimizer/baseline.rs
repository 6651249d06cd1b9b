use crate::link::{metrics, ErrorMode, LinkError, Scenario, Strategy};

use super::search::{golden_section_max, linspace};

/// Points of the exhaustive scan preceding the local refinement.
const SCAN_POINTS: usize = 10_001;

/// Secure-reliability optimum of classical transmission without a key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineSolution {
    pub p_m: f64,
    pub r_s: f64,
}

/// Secure reliability with no key packet: `(1 − ε_B,M)·ε_E,M`.
pub fn baseline_secure_reliability(scenario: &Scenario, p_m: f64) -> Result<f64, LinkError> {
    let s = Strategy {
        d_k: 0.0,
        p_m,
        p_k: 0.0,
    };
    // Without a key both error modes coincide.
    Ok(metrics(scenario, &s, ErrorMode::Approx)?.r_s)
}

/// Maximizes the no-key secure reliability over `p_m ∈ [0, p_sigma]`.
///
/// The objective need not be unimodal, so a dense scan selects the bracket
/// before golden-section refinement to width `tol`.
pub fn baseline_optimize(scenario: &Scenario, tol: f64) -> Result<BaselineSolution, LinkError> {
    let xs = linspace(0.0, scenario.p_sigma, SCAN_POINTS);
    let mut values = Vec::with_capacity(xs.len());
    for &x in &xs {
        values.push(baseline_secure_reliability(scenario, x)?);
    }
    let mut arg = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[arg] {
            arg = i;
        }
    }
    let mut best = BaselineSolution {
        p_m: xs[arg],
        r_s: values[arg],
    };
    let left = xs[arg.saturating_sub(1)];
    let right = xs[(arg + 1).min(xs.len() - 1)];
    if right > left {
        let (p_m, r_s) = golden_section_max(
            |p| baseline_secure_reliability(scenario, p),
            left,
            right,
            tol.max(f64::EPSILON * scenario.p_sigma),
        )?;
        if r_s > best.r_s {
            best = BaselineSolution { p_m, r_s };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_channels_cap_secure_reliability() {
        let sc = Scenario {
            z_eve: 1.0,
            ..Scenario::default()
        };
        let b = baseline_optimize(&sc, 1e-9).unwrap();
        assert!(b.r_s <= 0.25 + 1e-15);
    }

    #[test]
    fn vanishing_budget_gives_no_reliability() {
        let sc = Scenario {
            p_sigma: 1e-9,
            ..Scenario::default()
        };
        assert!(baseline_optimize(&sc, 1e-15).unwrap().r_s < 1e-6);
    }

    #[test]
    fn refinement_never_loses_to_the_scan() {
        let sc = Scenario {
            p_sigma: 3.0,
            ..Scenario::default()
        };
        let b = baseline_optimize(&sc, 1e-9).unwrap();
        let scan_best = linspace(0.0, 3.0, 10_001)
            .into_iter()
            .map(|p| baseline_secure_reliability(&sc, p).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(b.r_s >= scan_best);
    }
}
