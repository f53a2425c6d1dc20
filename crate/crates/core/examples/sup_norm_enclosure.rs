// Two-sided sup-norm estimates on the polydisc.

use bohnenblust_hille::norms::{coeff_lp_norm, sup_enclosure, supnorm_lower, supnorm_upper_detail};
use bohnenblust_hille::polynomials::{random_polynomial, CoefficientLaw, HomogeneousPolynomial};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // z1^2 + z1 z2 + z2^2 with positive coefficients peaks at (1, 1)
    let ones = vec![Complex64::new(1.0, 0.0); 3];
    let positive = HomogeneousPolynomial::from_dense(2, 2, 1, ones)?;
    let lower = supnorm_lower(&positive, None, 4, 1)?;
    let upper = supnorm_upper_detail(&positive, None, 64)?;
    println!("positive: lower {:.12} upper {:.12} ({})", lower.value, upper.upper, upper.method);
    assert!((lower.value - 3.0).abs() < 1e-9 && (upper.upper - 3.0).abs() < 1e-9);

    for seed in 0..4 {
        let p = random_polynomial(3, 3, 1, CoefficientLaw::Steinhaus, seed)?;
        let e = sup_enclosure(&p, None, 8, 96, seed)?;
        let sum = coeff_lp_norm(&p, 1.0, None)?;
        println!(
            "seed {seed}: [{:.5}, {:.5}] width {:.2e} via {} (coefficient sum {sum:.5})",
            e.lower,
            e.upper,
            e.width(),
            e.method
        );
        assert!(e.lower <= e.upper && e.upper <= sum * (1.0 + 1e-12));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
