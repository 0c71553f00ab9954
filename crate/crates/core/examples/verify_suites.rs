//! The seeded property suites behind `rising-bandits verify`.

use rising_bandits::verify::{run_suite, Suite, SUITE_SEED};

fn main() -> rising_bandits::Result<()> {
    for suite in Suite::ALL {
        let report = run_suite(suite, SUITE_SEED)?;
        println!("{report}");
        if let Some(first) = report.failures.first() {
            println!("  e.g. {first}");
        }
    }
    Ok(())
}
