//! Drives an experiment from a JSON config with dotted overrides and lists
//! the emitted CSV files.
//!
//! ```text
//! cargo run --release --example run_experiment -- fig6 out/fig6
//! ```

use std::path::PathBuf;

use pls_deception::experiments::{run, ExperimentConfig, ExperimentId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let id: ExperimentId = args.next().as_deref().unwrap_or("fig5").parse()?;
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join(id.as_str()));

    let json = format!(r#"{{"experiment_id": "{id}", "scenario": {{"n": 64}}}}"#);
    let cfg = ExperimentConfig::from_json_str(&json)?.with_overrides(&["bcd.t_max=50"])?;
    let manifest = run(&cfg, &out)?;

    println!("{} -> {}", manifest.experiment_id, out.display());
    for f in &manifest.files {
        println!("  {:<28} {:>6} rows", f.name, f.rows);
    }
    Ok(())
}
