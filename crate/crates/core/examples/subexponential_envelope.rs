// The polynomial constants grow slower than any `(1+ε)^m`.

use bohnenblust_hille::constants::{scalar_bh_best, subexp_envelope};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for eps in [1.0, 0.5, 0.2] {
        let env = subexp_envelope(eps, 300)?;
        println!(
            "eps = {eps:<4} kappa = {:.4e} at m* = {:>3}, tail decreasing: {}",
            env.kappa, env.m_star, env.tail_decreasing
        );
        assert!(env.m_star < 300 && env.tail_decreasing);
    }
    for m in [10, 50, 100, 200, 400] {
        let best = scalar_bh_best(m)?.1.value;
        println!("m = {m:>3}: bound^(1/m) = {:.4}", best.powf(1.0 / m as f64));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
