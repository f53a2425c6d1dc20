// Vector-valued inequalities for operators from `ℓ_1` models into `ℓ_2` models.

use bohnenblust_hille::polynomials::{polarize, random_polynomial, CoefficientLaw};
use bohnenblust_hille::spaces::{AtomicFunctionSpace, LinearOperator};
use bohnenblust_hille::verification::{check_hilbert_lattice, check_multilinear_gt, check_vector_bh, CheckOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let y = AtomicFunctionSpace::unit(3, 1.0)?;
    let x = AtomicFunctionSpace::unit(2, 2.0)?;
    let v = LinearOperator::random(y, x, 8);
    let options = CheckOptions::default();
    for m in [2, 3] {
        let p = random_polynomial(2, m, 3, CoefficientLaw::Gaussian, m as u64)?;
        for k in 1..m {
            let r = check_vector_bh(&p, &v, 1.0, k, &options)?;
            println!("vector m={m} k={k}: {:.4} <= {:.4}", r.lhs, r.rhs);
            assert!(r.pass);
            let h = check_hilbert_lattice(&p, &v, 1.0, k, &options)?;
            println!("hilbert m={m} k={k}: {:.4} <= {:.4}", h.lhs, h.rhs);
            assert!(h.pass);
        }
        let g = check_multilinear_gt(&polarize(&p), &v, 1.0, &options)?;
        println!("multilinear m={m}: {:.4} <= {:.4} ({} warnings)", g.lhs, g.rhs, g.warnings.len());
        assert!(g.pass);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
