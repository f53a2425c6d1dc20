// Empirical Kahane ratios for unit vectors in `ℓ_2^d`.

use bohnenblust_hille::spaces::AtomicFunctionSpace;
use bohnenblust_hille::verification::kahane_empirical;
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for d in [2, 4, 8, 16] {
        let space = AtomicFunctionSpace::unit(d, 2.0)?;
        let xs: Vec<Vec<Complex64>> = (0..d)
            .map(|i| (0..d).map(|j| Complex64::new((i == j) as u8 as f64, 0.0)).collect())
            .collect();
        let r = kahane_empirical(&space, &xs, 1.0, 20_000, 1)?;
        println!("d = {d:>2}: ratio {:.6} vs sqrt 2 = {:.6}", r.lhs, r.rhs);
        assert!(r.pass);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
