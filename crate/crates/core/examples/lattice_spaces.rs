// Weighted `ℓ_q` models, their lattice constants, and operator norms.

use bohnenblust_hille::spaces::{
    lattice_constants, operator_norm, weak_ell1_norm, AtomicFunctionSpace, LinearOperator,
};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (d, q) in [(3, 1.0), (3, 2.0), (4, 4.0)] {
        let x = AtomicFunctionSpace::unit(d, q)?;
        let c = lattice_constants(&x);
        println!(
            "l_{q}^{d}: cotype-2 in [{:.4}, {:.4}], M_2 = {:?}, M^2 = {:?}",
            c.cotype2.lower,
            c.cotype2.upper,
            c.concavity(2.0),
            c.convexity(2.0)
        );
    }
    let weighted = AtomicFunctionSpace::new(vec![1.0, 2.0, 0.5], 2.0)?;
    let f = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)];
    println!("weighted norm {:.6}, dual norm of a norming functional {:.6}",
        weighted.norm(&f)?, weighted.dual_norm(&weighted.norming_functional(&f)?)?);

    let y = AtomicFunctionSpace::unit(3, 1.0)?;
    let h = AtomicFunctionSpace::unit(2, 2.0)?;
    let v = LinearOperator::random(y.clone(), h, 4);
    let norm = operator_norm(&v);
    println!("random l1 -> l2 operator: norm {:.6} ({:?})", norm.value, norm.certificate);

    let units: Vec<Vec<Complex64>> = (0..3)
        .map(|i| (0..3).map(|j| Complex64::new((i == j) as u8 as f64, 0.0)).collect())
        .collect();
    let w = weak_ell1_norm(&y, &units)?;
    println!("weak l1 norm of the unit vectors in l1: [{:.6}, {:.6}]", w.lower, w.upper);
    assert!(w.lower <= w.upper + 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
