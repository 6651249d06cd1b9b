//! Brute-force checks of the structural claims: full-budget optimality,
//! concavity along each axis and the shape of the message error.
//!
//! ```text
//! cargo run --release --example theorem_checks
//! ```

use pls_deception::link::{ErrorMode, Scenario};
use pls_deception::optimizer::search::linspace;
use pls_deception::oracle::{
    full_surface, integer_keylengths, sweep_power_pair, verify_concavity, verify_lemma1,
    verify_theorem1, Axis, TheoremReport,
};

fn show(label: &str, r: &TheoremReport) {
    let verdict = if r.passed { "holds" } else { "fails" };
    print!("{} {label:<14} {verdict}: {} points, {} violations", r.theorem_id, r.points_checked, r.violations.len());
    match r.max_violation() {
        Some(v) => println!(", worst {v:.3e}"),
        None => println!(),
    }
    for note in &r.notes {
        println!("    {note}");
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sc = Scenario::default();
    let mode = ErrorMode::Approx;

    for d_k in [30.0, 60.0] {
        let sweep = sweep_power_pair(&sc, d_k, 0.05, mode)?;
        show(&format!("d_k={d_k}"), &verify_theorem1(&sweep));
    }

    let grid = full_surface(&sc, &linspace(0.0, sc.p_sigma, 201), &integer_keylengths(&sc), mode)?;
    show("p_m", &verify_concavity(&grid, Axis::PM, 1e-7)?);
    show("d_k", &verify_concavity(&grid, Axis::DK, 1e-7)?);
    show("message_error", &verify_lemma1(&sc, &grid, 1e-7)?);
    if let Some((p_m, d_k, u)) = grid.argmax {
        println!("grid optimum: p_m {p_m}, d_k {d_k}, U {u:.9}");
    }
    Ok(())
}
