//! Providers for the Kahane constants `K_{p,2}`, `1 <= p <= 2`.
//!
//! No optimal values are known in general, so the constant is an injectable
//! strategy. [`ConservativeKahane`] returns `√2` below `p = 2`, which dominates
//! `K_{p,2} <= K_{1,2} = √2` in every Banach space. [`SteinhausKhinchine`] is the
//! sharp Khinchine constant for Steinhaus sums with complex scalar coefficients,
//! `Γ(p/2 + 1)^{-1/p}`; its products over `s_j` reproduce the multilinear
//! constants `C_{k,t}`.

use std::f64::consts::SQRT_2;

use super::gamma::ln_gamma_positive;
use crate::error::{invalid, Result};

pub trait KahaneConstants: Sync {
    /// Upper bound for `K_{p,2}`.
    fn k_p2(&self, p: f64) -> Result<f64>;

    fn name(&self) -> &'static str;
}

fn check_p(p: f64) -> Result<()> {
    if (1.0..=2.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid("p", format!("Kahane constants need p in [1, 2], got {p}")))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ConservativeKahane;

impl KahaneConstants for ConservativeKahane {
    fn k_p2(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok(if p == 2.0 { 1.0 } else { SQRT_2 })
    }

    fn name(&self) -> &'static str {
        "conservative-sqrt2"
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SteinhausKhinchine;

impl KahaneConstants for SteinhausKhinchine {
    fn k_p2(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok((-ln_gamma_positive(p / 2.0 + 1.0) / p).exp())
    }

    fn name(&self) -> &'static str {
        "steinhaus-scalar"
    }
}

/// A table of `(p, K_{p,2})` pairs, looked up by exact `p` with a fallback
/// provider for anything else.
pub struct KahaneTable<F: KahaneConstants> {
    entries: Vec<(f64, f64)>,
    fallback: F,
}

impl<F: KahaneConstants> KahaneTable<F> {
    pub fn new(entries: Vec<(f64, f64)>, fallback: F) -> Result<Self> {
        for &(p, k) in &entries {
            check_p(p)?;
            if !(k >= 1.0) {
                return Err(invalid("entries", format!("K_{{{p},2}} = {k} is below 1")));
            }
        }
        Ok(Self { entries, fallback })
    }
}

impl<F: KahaneConstants> KahaneConstants for KahaneTable<F> {
    fn k_p2(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        match self.entries.iter().find(|(q, _)| *q == p) {
            Some(&(_, k)) => Ok(k),
            None => self.fallback.k_p2(p),
        }
    }

    fn name(&self) -> &'static str {
        "table"
    }
}

/// Default upper bound for `K_{p,2}` used throughout the crate.
pub fn kahane_constant_upper(p: f64) -> Result<f64> {
    ConservativeKahane.k_p2(p)
}
