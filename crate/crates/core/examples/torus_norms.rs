// Monte Carlo `L^p` norms on the torus against the exact `L^2` norm.

use bohnenblust_hille::norms::{exact_l2_torus, torus_lp_norm};
use bohnenblust_hille::polynomials::{random_polynomial, CoefficientLaw};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = random_polynomial(3, 2, 1, CoefficientLaw::Gaussian, 5)?;
    let exact = exact_l2_torus(&p, None)?;
    let mc = torus_lp_norm(&p, None, 2.0, 50_000, 9)?;
    println!("L2: exact {exact:.5}, estimate {:.5} ± {:.5}", mc.estimate, mc.std_error);
    assert!((mc.estimate - exact).abs() <= 4.0 * mc.std_error + 1e-12);
    for q in [1.0, 4.0] {
        let e = torus_lp_norm(&p, None, q, 50_000, 9)?;
        println!("L{q}: {:.5} ± {:.5}", e.estimate, e.std_error);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
