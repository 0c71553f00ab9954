use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rising_bandits::config::ExperimentConfig;
use rising_bandits::experiment::{run_experiment, RunOptions};
use rising_bandits::verify::{run_suite, Suite, SUITE_SEED};
use rising_bandits::Error;

/// Rising-bandit algorithm selection experiments.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Worker threads for parallel replications and suites.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output directory, overriding the configuration's `output`.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Base seed, overriding RB_SEED and the configuration's `base_seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a configuration file.
    Run { config: PathBuf },
    /// Run a property suite: lemma1, safety, theorem1, corollary1 or theorem2.
    Verify { suite: String },
}

fn exit_code(err: &Error) -> ExitCode {
    match err {
        Error::Invariant(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // the suites use the global pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }

    let result = match &cli.command {
        Command::Run { config } => ExperimentConfig::load(config).and_then(|config| {
            let options = RunOptions { jobs: cli.jobs, output: cli.output.clone(), seed: cli.seed };
            let outcome = run_experiment(&config, &options)?;
            println!("base seed {} ({:?})", outcome.base_seed, outcome.seed_source);
            for s in &outcome.summary {
                println!(
                    "{:<22} mean J {:.6}  mean regret {:.6}  oracle-arm share {:.3}",
                    s.policy, s.mean_j, s.mean_regret, s.mean_oracle_arm_share
                );
            }
            println!("wrote {}", outcome.output.display());
            Ok(())
        }),
        Command::Verify { suite } => suite.parse::<Suite>().and_then(|suite| {
            let report = run_suite(suite, cli.seed.unwrap_or(SUITE_SEED))?;
            println!("{report}");
            for failure in &report.failures {
                println!("  {failure}");
            }
            if report.ok() {
                Ok(())
            } else {
                Err(Error::Invariant(format!("{} of {} instances failed", report.failed(), report.checked)))
            }
        }),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
