//! Packet error of a short block code and the Gaussian tail behind it.
//!
//! ```text
//! cargo run --example fbl_kernel
//! ```

use pls_deception::fbl::{capacity, dispersion, fbl_error, q_function, BlockCode, Snr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for x in [0.0, 1.0, 5.0, 20.0, 37.0] {
        println!("Q({x:>4}) = {:.16e}", q_function(x)?);
    }

    let code = BlockCode::new(64, 16.0)?;
    println!("\nn = {}, {} bits, rate {:.3}", code.n(), code.bits(), code.rate());
    for db in [-5.0, 0.0, 2.0, 5.0, 10.0] {
        let snr = Snr::from_db(db)?;
        println!(
            "{db:>5} dB  C = {:.4}  V = {:.4}  eps = {:.6e}",
            capacity(snr),
            dispersion(snr),
            fbl_error(snr, &code)
        );
    }
    Ok(())
}
