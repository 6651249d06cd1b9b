//! One-dimensional search primitives: golden-section maximization and
//! extraction of feasible intervals from a membership predicate.

/// `(√5 − 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal `f` on `[lo, hi]` until the bracket is at most `tol`
/// wide. Returns the best evaluated point; ties go to the smaller abscissa.
pub fn golden_section_max<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64), E> {
    debug_assert!(lo <= hi && tol > 0.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = if f2 > f1 { (x2, f2) } else { (x1, f1) };
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
            if f1 > best.1 || (f1 == best.1 && x1 < best.0) {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
            if f2 > best.1 || (f2 == best.1 && x2 < best.0) {
                best = (x2, f2);
            }
        }
    }
    Ok(best)
}

/// `count` evenly spaced points covering `[lo, hi]` inclusively.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| if i == count - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// Maximal feasible runs of a sampled predicate on `[lo, hi]`.
///
/// Each run's endpoints are pushed outward by bisection against the
/// neighbouring infeasible sample until within `edge_tol`; returned
/// endpoints are always feasible. Runs narrower than the sample spacing can
/// be missed.
pub fn feasible_intervals(
    feasible: impl Fn(f64) -> bool,
    lo: f64,
    hi: f64,
    samples: usize,
    edge_tol: f64,
) -> Vec<(f64, f64)> {
    let xs = linspace(lo, hi, samples.max(2));
    let mask: Vec<bool> = xs.iter().map(|&x| feasible(x)).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if !mask[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < xs.len() && mask[i + 1] {
            i += 1;
        }
        let end = i;
        let left = if start == 0 {
            xs[0]
        } else {
            refine_edge(&feasible, xs[start], xs[start - 1], edge_tol)
        };
        let right = if end == xs.len() - 1 {
            xs[end]
        } else {
            refine_edge(&feasible, xs[end], xs[end + 1], edge_tol)
        };
        out.push((left, right));
        i += 1;
    }
    out
}

fn refine_edge(feasible: &impl Fn(f64) -> bool, mut inside: f64, mut outside: f64, tol: f64) -> f64 {
    while (outside - inside).abs() > tol {
        let mid = 0.5 * (inside + outside);
        if feasible(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    inside
}

/// Points of the coarse scan used to bracket the maximum inside an interval.
const BRACKET_SAMPLES: usize = 33;

/// Maximizes `objective` over the feasible part of `[lo, hi]`.
///
/// Every feasible run is scanned coarsely, the best sample is bracketed by
/// its neighbours and refined by golden-section search. Returns `None` when
/// no feasible sample exists.
pub fn maximize_feasible<E>(
    feasible: impl Fn(f64) -> bool,
    mut objective: impl FnMut(f64) -> Result<f64, E>,
    lo: f64,
    hi: f64,
    scan_samples: usize,
    tol: f64,
    edge_tol: f64,
) -> Result<Option<(f64, f64)>, E> {
    let mut best: Option<(f64, f64)> = None;
    let consider = |x: f64, u: f64, best: &mut Option<(f64, f64)>| {
        if best.is_none_or(|(bx, bu)| u > bu || (u == bu && x < bx)) {
            *best = Some((x, u));
        }
    };
    for (a, b) in feasible_intervals(&feasible, lo, hi, scan_samples, edge_tol) {
        if b - a <= tol {
            for x in [a, b] {
                let u = objective(x)?;
                consider(x, u, &mut best);
            }
            continue;
        }
        let xs = linspace(a, b, BRACKET_SAMPLES);
        let mut values = Vec::with_capacity(xs.len());
        for &x in &xs {
            values.push(if feasible(x) { objective(x)? } else { f64::NEG_INFINITY });
        }
        let mut arg = 0;
        for (i, &u) in values.iter().enumerate() {
            if u > values[arg] {
                arg = i;
            }
        }
        if values[arg] == f64::NEG_INFINITY {
            continue;
        }
        consider(xs[arg], values[arg], &mut best);
        let left = xs[arg.saturating_sub(1)];
        let right = xs[(arg + 1).min(xs.len() - 1)];
        let (x, u) = golden_section_max(&mut objective, left, right, tol)?;
        if feasible(x) {
            consider(x, u, &mut best);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, u) =
            golden_section_max(|x| Ok::<_, Infallible>(-(x - 0.3) * (x - 0.3)), -2.0, 5.0, 1e-9)
                .unwrap();
        assert!((x - 0.3).abs() < 1e-8);
        assert!(u <= 0.0 && u > -1e-15);
    }

    #[test]
    fn golden_section_handles_boundary_maximum() {
        let (x, _) = golden_section_max(Ok::<_, Infallible>, 0.0, 1.0, 1e-10).unwrap();
        assert!(x > 1.0 - 1e-9);
    }

    #[test]
    fn linspace_hits_both_ends() {
        let xs = linspace(0.0, 10.0, 201);
        assert_eq!(xs.len(), 201);
        assert_eq!(xs[0], 0.0);
        assert_eq!(xs[200], 10.0);
        assert!((xs[1] - 0.05).abs() < 1e-15);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }

    #[test]
    fn intervals_are_refined_to_true_edges() {
        let runs = feasible_intervals(|x| (0.23..=0.61).contains(&x) || x >= 0.9, 0.0, 1.0, 11, 1e-12);
        assert_eq!(runs.len(), 2);
        assert!((runs[0].0 - 0.23).abs() < 1e-11 && (runs[0].1 - 0.61).abs() < 1e-11);
        assert!((runs[1].0 - 0.9).abs() < 1e-11 && runs[1].1 == 1.0);
    }

    #[test]
    fn maximize_feasible_respects_the_feasible_set() {
        // Unconstrained peak at 0.5 lies outside the feasible set [0.7, 1].
        let best = maximize_feasible(
            |x| x >= 0.7,
            |x| Ok::<_, Infallible>(-(x - 0.5).powi(2)),
            0.0,
            1.0,
            64,
            1e-9,
            1e-12,
        )
        .unwrap()
        .unwrap();
        assert!((best.0 - 0.7).abs() < 1e-9);

        let none = maximize_feasible(|_| false, Ok::<_, Infallible>, 0.0, 1.0, 64, 1e-9, 1e-12)
            .unwrap();
        assert!(none.is_none());
    }
}
