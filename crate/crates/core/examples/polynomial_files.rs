// Random polynomials and their JSON file format.

use bohnenblust_hille::combinatorics::MultiIndex;
use bohnenblust_hille::polynomials::{parse, random_polynomial, serialize, CoefficientLaw, HomogeneousPolynomial};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut p = HomogeneousPolynomial::zero(3, 2, 1)?;
    p.set_coefficient(&MultiIndex::new(vec![1, 1, 0])?, &[Complex64::new(1.0, 0.0)])?;
    p.set_coefficient(&MultiIndex::new(vec![0, 0, 2])?, &[Complex64::new(0.0, -2.0)])?;
    let text = serialize(&p);
    println!("{text}");
    assert_eq!(parse(&text)?, p);

    for law in [CoefficientLaw::Steinhaus, CoefficientLaw::Gaussian, CoefficientLaw::UnimodularSparse] {
        let q = random_polynomial(2, 3, 1, law, 11)?;
        assert_eq!(q, random_polynomial(2, 3, 1, law, 11)?);
        assert_eq!(parse(&serialize(&q))?, q);
        println!("{law:?}: {} coefficients, c_0 = {:.4}", q.len(), q.coefficient(0)[0]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
