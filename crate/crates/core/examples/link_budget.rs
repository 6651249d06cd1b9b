//! Decoding chain of Bob and Eve for one power split, plus the constraint
//! check and both utility readings.
//!
//! ```text
//! cargo run --example link_budget
//! ```

use pls_deception::link::{link_report, utility_report, ErrorMode, Receiver, Scenario};
use pls_deception::units::db_to_linear;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sc = Scenario {
        z_eve: db_to_linear(-10.0),
        ..Scenario::default()
    };
    let s = sc.full_power(30.0, 6.0);

    for receiver in [Receiver::Bob, Receiver::Eve] {
        let r = link_report(receiver, &sc, &s)?;
        println!(
            "{receiver:?}: gamma_m {:.3} dB, gamma_k {:.3} dB, eps_m {:.3e}, eps_k sic {:.3e}, direct {:.3e}",
            r.gamma_m.to_db(),
            r.gamma_k.to_db(),
            r.eps_m,
            r.eps_k_sic,
            r.eps_k_direct
        );
    }

    for mode in [ErrorMode::Approx, ErrorMode::Exact] {
        let u = utility_report(&sc, &s, mode)?;
        println!(
            "{mode:?}: U_bob {:.6} U_eve {:.6} U {:.6} R_s {:.6} R_d {:.6}",
            u.u_bob, u.u_eve, u.u_sigma, u.r_s, u.r_d
        );
        let violated = u.constraint_flags.violations();
        if violated.is_empty() {
            println!("  feasible");
        } else {
            println!("  violates {}", violated.join(", "));
        }
    }
    Ok(())
}
