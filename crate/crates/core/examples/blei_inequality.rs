// Mixed-norm interpolation on random arrays, checked exactly.

use bohnenblust_hille::combinatorics::SubsetPair;
use bohnenblust_hille::norms::mixed_norm;
use bohnenblust_hille::polynomials::{CoefficientLaw, FullArray};
use bohnenblust_hille::verification::check_blei;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = FullArray::random(3, 3, CoefficientLaw::Gaussian, 2)?;
    let pair = SubsetPair::new(vec![1], 3)?;
    println!("mixed (1,2) norm over S = {{1}}: {:.6}", mixed_norm(&a, &pair, 1.0, 2.0)?);
    for k in 1..=3 {
        for (s, q) in [(1.0, 2.0), (4.0 / 3.0, 2.0), (1.5, 3.0)] {
            let r = check_blei(&a, k, s, q)?;
            println!("k={k} s={s:.3} q={q}: {:.6} <= {:.6}  {}", r.lhs, r.rhs, if r.pass { "ok" } else { "FAIL" });
            assert!(r.pass);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
