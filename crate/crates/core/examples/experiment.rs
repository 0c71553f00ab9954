//! A configuration-driven run, as `rising-bandits run` performs it.
//!
//! `cargo run --example experiment -- [config] [output-dir]`

use std::path::PathBuf;

use rising_bandits::config::ExperimentConfig;
use rising_bandits::experiment::{run_experiment, RunOptions};

fn main() -> rising_bandits::Result<()> {
    let mut args = std::env::args().skip(1);
    let config_path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/cash.cfg"));
    let output = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("rb-example"));

    let config = ExperimentConfig::load(&config_path)?;
    let outcome = run_experiment(&config, &RunOptions { output: Some(output), ..RunOptions::default() })?;
    for s in &outcome.summary {
        println!("{:<22} mean J {:.4}  mean regret {:.4}", s.policy, s.mean_j, s.mean_regret);
    }
    println!("trace, report and manifest in {}", outcome.output.display());
    Ok(())
}
