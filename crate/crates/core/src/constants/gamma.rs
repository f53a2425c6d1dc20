//! Log-gamma and log-factorial.

use crate::error::{invalid, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Natural logarithm of `Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid("x", format!("log_gamma needs a finite positive argument, got {x}")));
    }
    Ok(ln_gamma_positive(x))
}

pub(crate) fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x
        return ln_gamma_positive(x + 1.0) - x.ln();
    }
    let shifted = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (shifted + i as f64);
    }
    let t = shifted + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (shifted + 0.5) * t.ln() - t + series.ln()
}

/// `ln(n!)`, exact up to rounding for `n <= 20`.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= 20 {
        (factorial_u64(n) as f64).ln()
    } else {
        ln_gamma_positive(n as f64 + 1.0)
    }
}

pub(crate) fn factorial_u64(n: usize) -> u64 {
    assert!(n <= 20, "{n}! overflows u64");
    (1..=n as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(got: f64, want: f64, rel: f64) -> bool {
        (got - want).abs() <= rel * want.abs().max(1e-2)
    }

    /// `ln Γ(n + 1/2) = ln((2n)! √π / (4^n n!))`, summed term by term.
    fn half_integer_oracle(n: u32) -> f64 {
        let ln_2n_fact: f64 = (1..=2 * n).map(|j| (j as f64).ln()).sum();
        let ln_n_fact: f64 = (1..=n).map(|j| (j as f64).ln()).sum();
        ln_2n_fact + 0.5 * PI.ln() - n as f64 * 4f64.ln() - ln_n_fact
    }

    #[test]
    fn examples() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        let want = (PI.sqrt() / 2.0).ln();
        assert!(close(log_gamma(1.5).unwrap(), want, 1e-12));
        assert!((want + 0.120_782_237_6).abs() < 1e-10);
        assert!(close(log_gamma(5.0).unwrap(), 24f64.ln(), 1e-12));
    }

    #[test]
    fn half_integers_and_integers_up_to_fifty() {
        for n in 0..50u32 {
            let x = n as f64 + 0.5;
            assert!(
                close(log_gamma(x).unwrap(), half_integer_oracle(n), 1e-12),
                "x = {x}"
            );
        }
        for n in 1..=50u32 {
            let want: f64 = (1..n).map(|j| (j as f64).ln()).sum();
            let got = log_gamma(n as f64).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-2), "n = {n}");
        }
    }

    #[test]
    fn recurrence_holds_below_one_half() {
        for &x in &[0.01, 0.1, 0.25, 0.49] {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + f64::ln(x);
            assert!((lhs - rhs).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn ln_factorial_continuity() {
        let direct: f64 = (1..=21).map(|j| (j as f64).ln()).sum();
        assert!((ln_factorial(21) - direct).abs() < 1e-12 * direct);
        assert_eq!(ln_factorial(0), 0.0);
    }
}
