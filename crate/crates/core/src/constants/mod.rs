//! Closed-form constants and exponents of the Bohnenblust-Hille type
//! inequalities, plus the subexponential envelope scan.
//!
//! Everything that involves large factorials or powers is evaluated in log
//! space; for `m <= 20` the combinatorial factors use exact integer arithmetic
//! before the final conversion to `f64`.

mod gamma;
mod kahane;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use gamma::{ln_factorial, log_gamma};
pub use kahane::{
    kahane_constant_upper, ConservativeKahane, KahaneConstants, KahaneTable, SteinhausKhinchine,
};

use crate::error::{invalid, Result};
use gamma::{factorial_u64, ln_gamma_positive};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// One multiplicative factor of a [`BoundReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub value: f64,
}

/// A constant together with its multiplicative breakdown.
///
/// `value` is always the product of the factor values, in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
    pub value: f64,
    pub factors: Vec<Factor>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    fn from_factors(
        name: &str,
        parameters: &[(&str, f64)],
        factors: Vec<(&str, f64)>,
    ) -> Result<Self> {
        let factors: Vec<Factor> = factors
            .into_iter()
            .map(|(label, value)| Factor {
                label: label.to_string(),
                value,
            })
            .collect();
        let value = factors.iter().map(|f| f.value).product::<f64>();
        if !value.is_finite() || value < 0.0 {
            return Err(invalid("bound", format!("{name} evaluated to {value}")));
        }
        Ok(Self {
            name: name.to_string(),
            parameters: parameters
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
            value,
            factors,
            notes: Vec::new(),
        })
    }

    pub fn factor(&self, label: &str) -> Option<f64> {
        self.factors.iter().find(|f| f.label == label).map(|f| f.value)
    }
}

fn check_m_k(m: usize, k: usize) -> Result<()> {
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    if k == 0 || k > m {
        return Err(invalid("k", format!("must lie in 1..={m}, got {k}")));
    }
    Ok(())
}

fn check_r(name: &'static str, r: f64) -> Result<()> {
    if (1.0..2.0).contains(&r) {
        Ok(())
    } else {
        Err(invalid(name, format!("must lie in [1, 2), got {r}")))
    }
}

/// `ρ = q m r / (q + (m - 1) r)`.
pub fn rho(m: usize, r: f64, q: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    if !(q >= 2.0) || !q.is_finite() {
        return Err(invalid("q", format!("must be finite and >= 2, got {q}")));
    }
    if !(r >= 1.0 && r < q) {
        return Err(invalid("r", format!("must lie in [1, q) = [1, {q}), got {r}")));
    }
    let m = m as f64;
    Ok(m * r / (1.0 + (m - 1.0) * r / q))
}

/// `s_k = 2 k r / (2 + (k - 1) r)`.
pub fn s_k(k: usize, r: f64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    check_r("r", r)?;
    rho(k, r, 2.0)
}

fn multilinear_log_factor(j: usize, t: f64) -> f64 {
    let j = j as f64;
    let arg = 2.0 - (2.0 - t) / (j * t - 2.0 * t + 2.0);
    let exponent = (t * (j - 2.0) + 2.0) / (2.0 * t - 2.0 * j * t);
    exponent * ln_gamma_positive(arg)
}

/// `ln C_{m,t}` where `C_{m,t} = ∏_{j=2}^m Γ(2 - (2-t)/(jt-2t+2))^{(t(j-2)+2)/(2t-2jt)}`.
pub fn log_bh_multilinear_constant(m: usize, t: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    check_r("t", t)?;
    Ok((2..=m).map(|j| multilinear_log_factor(j, t)).sum())
}

/// Multilinear Bohnenblust–Hille constant `C_{m,t}` (empty product at `m = 1`).
pub fn bh_multilinear_constant(m: usize, t: f64) -> Result<f64> {
    log_bh_multilinear_constant(m, t).map(f64::exp)
}

/// Prefix table of `ln C_{k,t}` for `k = 1..=k_max`.
#[derive(Debug, Clone)]
pub struct MultilinearTable {
    t: f64,
    logs: Vec<f64>,
}

impl MultilinearTable {
    pub fn new(t: f64, k_max: usize) -> Result<Self> {
        check_r("t", t)?;
        let mut logs = Vec::with_capacity(k_max + 1);
        logs.push(0.0); // unused k = 0 slot
        let mut acc = 0.0;
        for k in 1..=k_max {
            if k >= 2 {
                acc += multilinear_log_factor(k, t);
            }
            logs.push(acc);
        }
        Ok(Self { t, logs })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn log_constant(&self, k: usize) -> f64 {
        self.logs[k]
    }
}

/// `(1 + 1/m)^{m-1} √m (√2)^{m-1}`.
pub fn hypercontractive_bound(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    Ok(log_hypercontractive_bound(m).exp())
}

fn log_hypercontractive_bound(m: usize) -> f64 {
    let mf = m as f64;
    (mf - 1.0) * (1.0 / mf).ln_1p() + 0.5 * mf.ln() + 0.5 * (mf - 1.0) * std::f64::consts::LN_2
}

/// `m^m / (m-k)^{m-k}` (with `0^0 = 1`) and the falling factorial `m!/(m-k)!`.
/// Exact integers for `m <= 20`.
fn power_ratio_and_falling(m: usize, k: usize) -> Option<(f64, f64)> {
    if m > 20 {
        return None;
    }
    let pow = |b: usize| (b as u128).pow(b as u32);
    let ratio = pow(m) as f64 / pow(m - k) as f64;
    let falling = factorial_u64(m) / factorial_u64(m - k);
    Some((ratio, falling as f64))
}

fn log_power_ratio(m: usize, k: usize) -> f64 {
    let mf = m as f64;
    let rest = (m - k) as f64;
    let tail = if m == k { 0.0 } else { rest * rest.ln() };
    mf * mf.ln() - tail
}

/// `ln C_{m,k}`, `C_{m,k} = m^m/(m-k)^{m-k} · √((m-k)!/m!)`.
pub fn log_c_mk(m: usize, k: usize) -> Result<f64> {
    check_m_k(m, k)?;
    Ok(log_power_ratio(m, k) + 0.5 * (ln_factorial(m - k) - ln_factorial(m)))
}

pub fn c_mk(m: usize, k: usize) -> Result<f64> {
    check_m_k(m, k)?;
    match power_ratio_and_falling(m, k) {
        Some((ratio, falling)) => Ok(ratio / falling.sqrt()),
        None => log_c_mk(m, k).map(f64::exp),
    }
}

/// Polarization factor `(m-k)! m^m / ((m-k)^{m-k} m!)`.
pub fn harris_factor(m: usize, k: usize) -> Result<f64> {
    check_m_k(m, k)?;
    match power_ratio_and_falling(m, k) {
        Some((ratio, falling)) => Ok(ratio / falling),
        None => Ok((log_power_ratio(m, k) + ln_factorial(m - k) - ln_factorial(m)).exp()),
    }
}

fn hypercontractive_prefactor(m: usize, k: usize, r: f64) -> Result<f64> {
    let s = s_k(k, r)?;
    Ok((2.0 / s).powf((m - k) as f64 / 2.0))
}

/// Scalar polynomial bound
/// `(1+1/k)^{(m-k)/2} · C_{m,k} · C_{k,1}` for `1 <= k <= m-1`.
pub fn scalar_bh_bound(m: usize, k: usize) -> Result<BoundReport> {
    if m < 2 {
        return Err(invalid("m", format!("must be at least 2, got {m}")));
    }
    if k == 0 || k >= m {
        return Err(invalid("k", format!("must lie in 1..={}, got {k}", m - 1)));
    }
    BoundReport::from_factors(
        "scalar_bh_bound",
        &[("m", m as f64), ("k", k as f64)],
        vec![
            ("hypercontractive_prefactor", hypercontractive_prefactor(m, k, 1.0)?),
            ("combinatorial_c_mk", c_mk(m, k)?),
            ("multilinear_c_k", bh_multilinear_constant(k, 1.0)?),
        ],
    )
}

fn log_scalar_bh(m: usize, k: usize, table: &MultilinearTable) -> f64 {
    let s = 2.0 * k as f64 / (k as f64 + 1.0);
    0.5 * (m - k) as f64 * (2.0 / s).ln()
        + log_power_ratio(m, k)
        + 0.5 * (ln_factorial(m - k) - ln_factorial(m))
        + table.log_constant(k)
}

fn best_k(m: usize, table: &MultilinearTable) -> (usize, f64) {
    let mut best = (1, log_scalar_bh(m, 1, table));
    for k in 2..m {
        let v = log_scalar_bh(m, k, table);
        if v < best.1 {
            best = (k, v);
        }
    }
    best
}

/// Minimizes [`scalar_bh_bound`] over `k`; ties go to the smaller `k`.
pub fn scalar_bh_best(m: usize) -> Result<(usize, BoundReport)> {
    if m < 2 {
        return Err(invalid("m", format!("must be at least 2, got {m}")));
    }
    let table = MultilinearTable::new(1.0, m)?;
    let (k, _) = best_k(m, &table);
    Ok((k, scalar_bh_bound(m, k)?))
}

/// Smallest `m0` in `2..=m_max` such that `scalar_bh_best(m) <= hypercontractive_bound(m)`
/// for every `m` in `m0..=m_max`.
pub fn hypercontractive_crossover(m_max: usize) -> Result<Option<usize>> {
    if m_max < 2 {
        return Err(invalid("m_max", "must be at least 2"));
    }
    let table = MultilinearTable::new(1.0, m_max)?;
    let mut m0 = None;
    for m in (2..=m_max).rev() {
        if best_k(m, &table).1 <= log_hypercontractive_bound(m) {
            m0 = Some(m);
        } else {
            break;
        }
    }
    Ok(m0)
}

/// Constants supplied by the caller for [`vector_bound_2convex`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeInputs {
    /// 2-concavity constant `M_2(X)`.
    pub m2: f64,
    /// Cotype 2 constant `C_2(X)`.
    pub c2x: f64,
    /// Upper bound for the summing norm `π_{(r,1)}(v)`.
    pub pi_r1: f64,
}

impl LatticeInputs {
    pub const SCALAR: LatticeInputs = LatticeInputs {
        m2: 1.0,
        c2x: 1.0,
        pi_r1: 1.0,
    };
}

/// Vector-valued bound for a 2-convex, 2-concave target lattice:
/// `(2/s_k)^{(m-k)/2} C_2(X)^{k-1} ∏_{j<k} K_{s_j,2} C_{m,k} M_2(X) π_{(r,1)}(v)`.
///
/// `pi_r1 = 0` is accepted (zero operator) and yields a zero bound.
pub fn vector_bound_2convex(
    m: usize,
    k: usize,
    r: f64,
    inputs: &LatticeInputs,
    kahane: &dyn KahaneConstants,
) -> Result<BoundReport> {
    check_m_k(m, k)?;
    check_r("r", r)?;
    if !(inputs.m2 >= 1.0) || !(inputs.c2x >= 1.0) {
        return Err(invalid("inputs", "M_2(X) and C_2(X) must be at least 1"));
    }
    if !(inputs.pi_r1 >= 0.0) || !inputs.pi_r1.is_finite() {
        return Err(invalid("pi_r1", format!("must be finite and nonnegative, got {}", inputs.pi_r1)));
    }
    let mut kahane_product = 1.0;
    for j in 1..k {
        kahane_product *= kahane.k_p2(s_k(j, r)?)?;
    }
    let mut report = BoundReport::from_factors(
        "vector_bound_2convex",
        &[
            ("m", m as f64),
            ("k", k as f64),
            ("r", r),
            ("rho", rho(m, r, 2.0)?),
            ("s_k", s_k(k, r)?),
        ],
        vec![
            ("hypercontractive_prefactor", hypercontractive_prefactor(m, k, r)?),
            ("cotype_power", inputs.c2x.powi(k as i32 - 1)),
            ("kahane_product", kahane_product),
            ("combinatorial_c_mk", c_mk(m, k)?),
            ("concavity_m2", inputs.m2),
            ("summing_norm", inputs.pi_r1),
        ],
    )?;
    report.notes.push(format!("kahane provider: {}", kahane.name()));
    Ok(report)
}

/// `(2/s_k)^{(m-k)/2} C_{m,k} C_{k,r}` for Hilbert function space targets.
/// The summing-norm factor is left to the caller; its index is recorded as
/// parameter `pi_index = 2r(m-1)/(2+(m-2)r)`.
pub fn hilbert_lattice_bound(m: usize, k: usize, r: f64) -> Result<BoundReport> {
    check_m_k(m, k)?;
    check_r("r", r)?;
    let mf = m as f64;
    let pi_index = 2.0 * r * (mf - 1.0) / (2.0 + (mf - 2.0) * r);
    let mut report = BoundReport::from_factors(
        "hilbert_lattice_bound",
        &[
            ("m", mf),
            ("k", k as f64),
            ("r", r),
            ("pi_index", pi_index),
            ("rho", rho(m, r, 2.0)?),
        ],
        vec![
            ("hypercontractive_prefactor", hypercontractive_prefactor(m, k, r)?),
            ("combinatorial_c_mk", c_mk(m, k)?),
            ("multilinear_c_kr", bh_multilinear_constant(k, r)?),
        ],
    )?;
    report.notes.push(format!(
        "summing index 2r(m-1)/(2+(m-2)r) = {pi_index} differs from rho(m,r,2) = {}; \
         both kept as stated, pi factor not included",
        rho(m, r, 2.0)?
    ));
    Ok(report)
}

/// Result of [`subexp_envelope`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub eps: f64,
    pub m_max: usize,
    pub kappa: f64,
    pub m_star: usize,
    /// `(m, k*, scalar_bh_best(m) / (1+eps)^m)` for `m = 2..=m_max`.
    pub series: Vec<EnvelopePoint>,
    /// The ratio is strictly decreasing over the last ten scanned `m`.
    pub tail_decreasing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub m: usize,
    pub k_star: usize,
    pub best: f64,
    pub ratio: f64,
    pub log_ratio: f64,
}

const TAIL_WINDOW: usize = 10;

/// `κ = max_{2<=m<=m_max} scalar_bh_best(m) / (1+eps)^m` with its argmax.
pub fn subexp_envelope(eps: f64, m_max: usize) -> Result<Envelope> {
    if !(eps > 0.0) {
        return Err(invalid("eps", format!("must be positive, got {eps}")));
    }
    if m_max < 2 {
        return Err(invalid("m_max", "must be at least 2"));
    }
    let table = MultilinearTable::new(1.0, m_max)?;
    let log_base = eps.ln_1p();
    let series: Vec<EnvelopePoint> = (2..=m_max)
        .map(|m| {
            let (k_star, log_best) = best_k(m, &table);
            let log_ratio = log_best - m as f64 * log_base;
            EnvelopePoint {
                m,
                k_star,
                best: log_best.exp(),
                ratio: log_ratio.exp(),
                log_ratio,
            }
        })
        .collect();
    let argmax = series
        .iter()
        .fold(&series[0], |acc, p| if p.log_ratio > acc.log_ratio { p } else { acc });
    let tail_start = series.len().saturating_sub(TAIL_WINDOW);
    let tail_decreasing = series[tail_start..]
        .windows(2)
        .all(|w| w[1].log_ratio < w[0].log_ratio);
    Ok(Envelope {
        eps,
        m_max,
        kappa: argmax.log_ratio.exp(),
        m_star: argmax.m,
        tail_decreasing,
        series,
    })
}

/// Exponent `(γ - 1)(t - 2)/(2t)` of the subpolynomial growth of `C_{m,t}`.
pub fn asymptotic_exponent(t: f64) -> Result<f64> {
    check_r("t", t)?;
    Ok((EULER_GAMMA - 1.0) * (t - 2.0) / (2.0 * t))
}

/// `κ_t m^{(γ-1)(t-2)/(2t)}`.
pub fn asymptotic_multilinear_bound(m: usize, t: f64, kappa_t: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    if !(kappa_t > 0.0) {
        return Err(invalid("kappa_t", "must be positive"));
    }
    Ok(kappa_t * (m as f64).powf(asymptotic_exponent(t)?))
}

/// Least `κ_t` such that the asymptotic form dominates `C_{m,t}` for `1 <= m <= m_max`.
pub fn fit_asymptotic_kappa(t: f64, m_max: usize) -> Result<f64> {
    if m_max == 0 {
        return Err(invalid("m_max", "must be at least 1"));
    }
    let exponent = asymptotic_exponent(t)?;
    let table = MultilinearTable::new(t, m_max)?;
    Ok((1..=m_max)
        .map(|m| table.log_constant(m) - exponent * (m as f64).ln())
        .fold(f64::NEG_INFINITY, f64::max)
        .exp())
}
