// Searching for polynomials with a large coefficient-to-sup ratio.

use bohnenblust_hille::verification::lower_bound_search;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (m, n) in [(2, 2), (2, 3), (3, 2)] {
        let mut last = 0.0;
        for budget in [1, 4, 8] {
            let s = lower_bound_search(m, n, budget, 17)?;
            println!(
                "m={m} n={n} budget={budget}: best {:.5}, bound {:.5}, gap {:.5}",
                s.best_ratio,
                s.upper_bound,
                s.gap()
            );
            assert!(s.consistent() && s.best_ratio >= last);
            last = s.best_ratio;
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
