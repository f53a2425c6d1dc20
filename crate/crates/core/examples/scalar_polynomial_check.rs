// The polynomial inequality and hypercontractivity on random polynomials.

use bohnenblust_hille::constants::scalar_bh_best;
use bohnenblust_hille::polynomials::{random_polynomial, CoefficientLaw};
use bohnenblust_hille::verification::{check_hypercontractive, check_scalar_bh, CheckOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let options = CheckOptions {
        samples: 5_000,
        ..CheckOptions::default()
    };
    for (m, n) in [(1, 4), (2, 3), (3, 3), (4, 2)] {
        let p = random_polynomial(n, m, 1, CoefficientLaw::Steinhaus, (10 * m + n) as u64)?;
        let k = if m == 1 { 1 } else { scalar_bh_best(m)?.0 };
        let r = check_scalar_bh(&p, k, &options)?;
        println!(
            "m={m} n={n} k={k}: |c|_(2m/(m+1)) = {:.4} <= {:.4}  ratio {:.3}",
            r.lhs,
            r.rhs,
            r.lhs / r.rhs
        );
        assert!(r.pass);
        let h = check_hypercontractive(&p, 1.0, 2.0, &options)?;
        println!("         L2 {:.4} <= {:.4}", h.lhs, h.rhs);
        assert!(h.pass);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
