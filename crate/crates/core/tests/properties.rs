use bohnenblust_hille::constants::{rho, scalar_bh_best, scalar_bh_bound};
use bohnenblust_hille::norms::{coeff_lp_norm, supnorm_lower, supnorm_upper};
use bohnenblust_hille::polynomials::{
    depolarize, parse, polarize, random_polynomial, serialize, CoefficientLaw, FullArray,
};
use bohnenblust_hille::spaces::{summing_norm_lower, AtomicFunctionSpace, LinearOperator};
use bohnenblust_hille::verification::check_blei;
use num_complex::Complex64;
use proptest::prelude::*;

fn law() -> impl Strategy<Value = CoefficientLaw> {
    prop_oneof![
        Just(CoefficientLaw::Steinhaus),
        Just(CoefficientLaw::Gaussian),
        Just(CoefficientLaw::UnimodularSparse),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn blei_holds(m in 2usize..=4, n in 2usize..=3, k_raw in 0usize..4, sq in 0usize..4, seed: u64) {
        let (s, q) = [(1.0, 2.0), (4.0 / 3.0, 2.0), (2.0, 2.0), (1.5, 3.0)][sq];
        let k = 1 + k_raw % m;
        let a = FullArray::random(m, n, CoefficientLaw::Gaussian, seed).unwrap();
        let r = check_blei(&a, k, s, q).unwrap();
        prop_assert!(r.pass, "lhs {} rhs {}", r.lhs, r.rhs);
    }

    #[test]
    fn polarization_round_trip(m in 1usize..=4, n in 1usize..=4, law in law(), seed: u64) {
        let p = random_polynomial(n, m, 1, law, seed).unwrap();
        let back = depolarize(&polarize(&p));
        for (a, b) in p.dense().iter().zip(back.dense()) {
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn file_round_trip(m in 1usize..=3, n in 1usize..=3, dim in 1usize..=2, law in law(), seed: u64) {
        let p = random_polynomial(n, m, dim, law, seed).unwrap();
        prop_assert_eq!(parse(&serialize(&p)).unwrap(), p);
    }

    #[test]
    fn sup_enclosure_is_sound(m in 1usize..=3, n in 1usize..=3, seed: u64, probe in prop::collection::vec(0.0..std::f64::consts::TAU, 3)) {
        let p = random_polynomial(n, m, 1, CoefficientLaw::Steinhaus, seed).unwrap();
        let lower = supnorm_lower(&p, None, 2, seed).unwrap().value;
        let upper = supnorm_upper(&p, None, 48).unwrap();
        let z: Vec<Complex64> = probe[..n].iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let at = p.evaluate_scalar(&z).unwrap().norm();
        prop_assert!(lower <= upper * (1.0 + 1e-12));
        prop_assert!(at <= upper * (1.0 + 1e-12));
        prop_assert!(upper <= coeff_lp_norm(&p, 1.0, None).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn lattice_norm_is_monotone(weights in prop::collection::vec(0.1f64..5.0, 1..5), q in 1.0f64..6.0, seed: u64) {
        let space = AtomicFunctionSpace::new(weights.clone(), q).unwrap();
        let d = weights.len();
        let small: Vec<f64> = (0..d).map(|i| ((seed >> (i * 8)) & 0xff) as f64 / 255.0).collect();
        let big: Vec<f64> = small.iter().map(|x| x + 0.25).collect();
        prop_assert!(space.norm_of_moduli(small.iter().copied()) <= space.norm_of_moduli(big.iter().copied()));
    }

    #[test]
    fn rho_increases_with_r(m in 1usize..=8, r in 1.0f64..1.99, dr in 0.0f64..0.5) {
        let r2 = (r + dr).min(1.999);
        prop_assert!(rho(m, r, 2.0).unwrap() <= rho(m, r2, 2.0).unwrap() + 1e-15);
    }

    #[test]
    fn best_split_is_minimal(m in 2usize..=40) {
        let (k, best) = scalar_bh_best(m).unwrap();
        prop_assert!((1..m).contains(&k));
        for j in 1..m {
            prop_assert!(best.value <= scalar_bh_bound(m, j).unwrap().value);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn summing_lower_grows_with_trials(seed: u64, extra in 1usize..4) {
        let v = LinearOperator::random(AtomicFunctionSpace::unit(2, 1.0).unwrap(), AtomicFunctionSpace::unit(2, 2.0).unwrap(), seed);
        let few = summing_norm_lower(&v, 1.0, 3, 2, seed).unwrap();
        let more = summing_norm_lower(&v, 1.0, 3, 2 + extra, seed).unwrap();
        prop_assert!(few.lower <= more.lower);
        prop_assert!(more.lower <= more.upper.unwrap() * (1.0 + 1e-9));
    }
}
