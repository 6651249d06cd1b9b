//! Joint key length and power split by block coordinate descent.
//!
//! ```text
//! cargo run --example bcd_allocation -- 24
//! ```
//!
//! The optional argument is the message length in bits (default 16).

use pls_deception::link::{utility_report, Scenario};
use pls_deception::optimizer::{bcd_optimize, BcdConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d_m = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(16);
    let sc = Scenario {
        d_m,
        ..Scenario::default()
    };
    let cfg = BcdConfig::default();
    let trace = bcd_optimize(&sc, &cfg)?;

    let (d0, p0) = trace.initial;
    println!("start      d_k {d0:>8.4}  p_m {p0:.6}");
    for it in &trace.iterations {
        println!("t = {:>3}    d_k {:>8.4}  p_m {:.6}  U {:.9}", it.t, it.d_k, it.p_m, it.u_fp);
    }
    println!("{:?} after {} iterations", trace.status, trace.iteration_count());

    let s = trace.final_strategy;
    let u = utility_report(&sc, &s, cfg.mode)?;
    println!(
        "rounded    d_k {} p_m {:.6} p_k {:.6}  U {:.9}  R_s {:.6}  R_d {:.6}  ({:?})",
        s.d_k, s.p_m, s.p_k, trace.final_utility, u.r_s, u.r_d, trace.rounding
    );
    Ok(())
}
