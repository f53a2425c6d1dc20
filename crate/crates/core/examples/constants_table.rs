// Closed-form constants for degrees 1 through 8.

use bohnenblust_hille::constants::{bh_multilinear_constant, hypercontractive_bound, scalar_bh_best};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>14} {:>14} {:>4} {:>12}", "m", "hypercontr.", "polynomial", "k*", "multilinear");
    for m in 1..=8 {
        let hyper = hypercontractive_bound(m)?;
        let multi = bh_multilinear_constant(m, 1.0)?;
        if m == 1 {
            println!("{m:>3} {hyper:>14.6} {:>14} {:>4} {multi:>12.6}", "-", "-");
            continue;
        }
        let (k, report) = scalar_bh_best(m)?;
        println!("{m:>3} {hyper:>14.6} {:>14.6} {k:>4} {multi:>12.6}", report.value);
        for f in &report.factors {
            assert!(f.value.is_finite() && f.value > 0.0, "{}", f.label);
        }
    }
    assert!((hypercontractive_bound(2)? - 3.0).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
