//! Keyless baseline against the key-assisted allocation as Eve's channel
//! improves.
//!
//! ```text
//! cargo run --release --example baseline_comparison
//! ```

use pls_deception::experiments::scenario_at;
use pls_deception::link::{metrics, Scenario};
use pls_deception::optimizer::{baseline_optimize, bcd_optimize, BcdConfig, OptimizerError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = Scenario::default();
    let cfg = BcdConfig::default();
    println!("z_e_db  baseline_r_s  baseline_p_m      r_s      r_d  d_k");
    for z_e_db in [-10.0, -8.0, -6.0, -4.0, -3.0] {
        let sc = scenario_at(&base, z_e_db, 10.0);
        let b = baseline_optimize(&sc, 1e-9)?;
        let tail = match bcd_optimize(&sc, &cfg) {
            Ok(trace) => {
                let m = metrics(&sc, &trace.final_strategy, cfg.mode)?;
                format!("{:.6} {:.6}  {}", m.r_s, m.r_d, trace.final_strategy.d_k)
            }
            Err(OptimizerError::Infeasible) => "infeasible".to_string(),
            Err(e) => return Err(e.into()),
        };
        println!("{z_e_db:>6}  {:>12.6}  {:>12.6}  {tail}", b.r_s, b.p_m);
    }
    Ok(())
}
