// Running a randomized suite and tabulating its reports.

use bohnenblust_hille::verification::{csv_row, run_suite, CheckOptions, Suite, SuiteConfig, CSV_HEADER};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = SuiteConfig {
        count: Some(12),
        checks: CheckOptions {
            seed: 99,
            samples: 2_000,
            ..CheckOptions::default()
        },
    };
    for suite in [Suite::Blei, Suite::ScalarBh, Suite::Kahane] {
        let outcome = run_suite(suite, &config)?;
        println!("# {suite}: {} reports, all pass: {}", outcome.reports.len(), outcome.all_pass());
        println!("{CSV_HEADER}");
        for (i, r) in outcome.reports.iter().take(3).enumerate() {
            println!("{}", csv_row(i, r));
        }
        assert!(outcome.all_pass());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
