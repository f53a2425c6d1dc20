// Absolutely summing norms: sampled lower bounds against sound upper bounds.

use bohnenblust_hille::spaces::{summing_norm_lower, AtomicFunctionSpace, LinearOperator};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let y = AtomicFunctionSpace::unit(3, 1.0)?;
    let h = AtomicFunctionSpace::unit(3, 2.0)?;
    let v = LinearOperator::random(y, h, 21);
    for r in [1.0, 2.0] {
        let est = summing_norm_lower(&v, r, 6, 12, 3)?;
        let upper = est.upper.expect("l1 into l2 has a Grothendieck bound");
        println!("pi_({r},1): {:.5} <= pi <= {:.5} (witness of {} vectors)", est.lower, upper, est.witness.len());
        assert!(est.lower <= upper * (1.0 + 1e-9));
    }
    let ident = LinearOperator::identity(&AtomicFunctionSpace::scalar());
    let est = summing_norm_lower(&ident, 1.0, 4, 3, 0)?;
    println!("scalar identity: [{:.6}, {:?}]", est.lower, est.upper);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
