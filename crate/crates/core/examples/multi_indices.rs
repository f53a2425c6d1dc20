// Index sets, multiplicities, and the polynomial/form correspondence.

use bohnenblust_hille::combinatorics::{alpha_of, count_j, enumerate_j, enumerate_subsets, multiplicity};
use bohnenblust_hille::polynomials::{depolarize, polarize, random_polynomial, CoefficientLaw};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (m, n) = (3, 2);
    let tuples = enumerate_j(m, n)?;
    assert_eq!(tuples.len(), count_j(m, n));
    for i in &tuples {
        println!("i = {:?}  alpha = {:?}  |i| = {}", i.entries(), alpha_of(i).exponents(), multiplicity(i));
    }
    let total: u64 = tuples.iter().map(multiplicity).sum();
    assert_eq!(total, (n as u64).pow(m as u32));
    println!("{} subsets of size 2 in {{1..4}}", enumerate_subsets(4, 2)?.len());

    let p = random_polynomial(n, m, 1, CoefficientLaw::Gaussian, 7)?;
    let form = polarize(&p);
    let z = vec![Complex64::new(0.3, -0.4), Complex64::new(-0.9, 0.1)];
    let diag = form.evaluate_form(&vec![z.clone(); m])?[0];
    let direct = p.evaluate_scalar(&z)?;
    println!("L(z,z,z) = {diag:.6}, P(z) = {direct:.6}");
    assert!((diag - direct).norm() < 1e-12);
    assert_eq!(depolarize(&form).dense().len(), p.dense().len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
