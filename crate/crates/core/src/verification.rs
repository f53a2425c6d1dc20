//! Desk-scale checks of the inequalities, each returning a [`CheckReport`].
//!
//! Estimated quantities only ever enter on the side that makes a check harder
//! to pass: sup norms and summing norms are upper-bounded on the right-hand
//! side. A failure is therefore a counterexample candidate, not an estimator
//! artifact, up to the 3σ band on Monte Carlo integrals.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::combinatorics::{binomial, enumerate_subsets, iter_full, MultiIndex};
use crate::constants::{
    bh_multilinear_constant, hilbert_lattice_bound, kahane_constant_upper, rho, scalar_bh_best,
    scalar_bh_bound, vector_bound_2convex, ConservativeKahane, KahaneConstants, LatticeInputs,
    SteinhausKhinchine,
};
use crate::error::{ensure_dim, invalid, Error, Result};
use crate::norms::{
    coeff_lp_norm, exact_l2_torus, mixed_norm, sup_enclosure, supnorm_upper, torus_lp_norm,
    Enclosure,
};
use crate::polynomials::{
    polarize, random_polynomial, serialize, CoefficientLaw, FullArray, HomogeneousPolynomial,
    SymmetricForm,
};
use crate::spaces::{
    grothendieck_upper, lattice_constants, serialize_operator, summing_norm_upper,
    AtomicFunctionSpace, LinearOperator,
};

/// Relative tolerance of checks computed in exact arithmetic.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Relative allowance for floating-point rounding in enclosure-based checks.
pub const ROUNDING_TOLERANCE: f64 = 1e-12;
/// Width of the Monte Carlo acceptance band in standard errors.
pub const SIGMA_BAND: f64 = 3.0;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Outcome of one check. `pass` holds iff `lhs <= rhs + tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, Value>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub diagnostics: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Everything needed to replay a failed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub seed: u64,
    /// File name suffix → file contents (polynomial or operator files).
    pub files: BTreeMap<String, String>,
}

impl CheckReport {
    fn new(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self {
            check_name: name.to_string(),
            parameters: BTreeMap::new(),
            lhs,
            rhs,
            margin: rhs - lhs,
            tolerance,
            pass: lhs <= rhs + tolerance,
            diagnostics: BTreeMap::new(),
            warnings: Vec::new(),
            witness: None,
        }
    }

    fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    fn diag(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.diagnostics.insert(key.to_string(), value.into());
        self
    }

    fn with_failure_witness(
        mut self,
        seed: u64,
        poly: Option<&HomogeneousPolynomial>,
        operator: Option<&LinearOperator>,
    ) -> Self {
        if !self.pass {
            let mut files = BTreeMap::new();
            if let Some(p) = poly {
                files.insert("polynomial.json".to_string(), serialize(p));
            }
            if let Some(v) = operator {
                files.insert("operator.json".to_string(), serialize_operator(v));
            }
            self.witness = Some(Witness { seed, files });
        }
        self
    }

    /// Relative margin `(rhs - lhs) / max(|lhs|, |rhs|)` (0 when both vanish).
    pub fn relative_margin(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.margin / scale
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Column order of [`csv_row`].
pub const CSV_HEADER: &str = "index,check_name,parameters,lhs,rhs,margin,tolerance,pass";

/// One CSV row; parameters are `key=value` pairs joined by `;`.
pub fn csv_row(index: usize, report: &CheckReport) -> String {
    let params: Vec<String> = report
        .parameters
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect();
    format!(
        "{index},{},{},{:e},{:e},{:e},{:e},{}",
        report.check_name,
        params.join(";"),
        report.lhs,
        report.rhs,
        report.margin,
        report.tolerance,
        report.pass
    )
}

fn exact_tolerance(lhs: f64, rhs: f64) -> f64 {
    EXACT_TOLERANCE * lhs.abs().max(rhs.abs())
}

/// Which Kahane constants enter the vector-valued bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KahaneChoice {
    /// Steinhaus–Khinchine constants for one-atom targets, `√2` otherwise.
    #[default]
    Auto,
    Conservative,
    Steinhaus,
}

/// Estimator settings shared by the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub seed: u64,
    /// Monte Carlo samples per torus integral.
    pub samples: usize,
    /// Starts of the sup-norm ascent (lower end of the enclosure).
    pub budget: usize,
    /// Phase grid per axis for sup-norm upper bounds; `None` picks one from `n`.
    pub grid: Option<usize>,
    /// Caller-supplied upper bound for the summing norm when no closed form applies.
    pub pi_upper: Option<f64>,
    pub kahane: KahaneChoice,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            samples: 20_000,
            budget: 4,
            grid: None,
            pi_upper: None,
            kahane: KahaneChoice::Auto,
        }
    }
}

/// Largest grid with at most `2^18` points on the `n - 1` free phases.
pub fn auto_grid(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    let mut g = 256usize;
    while g > 2 && (g as f64).powi(n as i32 - 1) > (1u64 << 18) as f64 {
        g -= 1;
    }
    g
}

fn sup_side(
    poly: &HomogeneousPolynomial,
    target: Option<&AtomicFunctionSpace>,
    options: &CheckOptions,
) -> Result<Enclosure> {
    let grid = options.grid.unwrap_or_else(|| auto_grid(poly.n()));
    sup_enclosure(poly, target, options.budget.max(1), grid, options.seed)
}

fn enclosure_json(e: &Enclosure) -> Value {
    json!({"lower": e.lower, "upper": e.upper, "method": e.method, "evaluations": e.budget})
}

/// Mixed-norm interpolation inequality: the `ℓ_{msq/(kq+(m-k)s)}` norm of `a`
/// is at most the geometric mean of the mixed norms over all `k`-subsets.
pub fn check_blei(a: &FullArray, k: usize, s: f64, q: f64) -> Result<CheckReport> {
    let m = a.m();
    if k == 0 || k > m {
        return Err(invalid("k", format!("must lie in 1..={m}, got {k}")));
    }
    if !(s >= 1.0 && s <= q) || !q.is_finite() {
        return Err(invalid("s", format!("need 1 <= s <= q < ∞, got s = {s}, q = {q}")));
    }
    let (mf, kf) = (m as f64, k as f64);
    let exponent = mf * s * q / (kf * q + (mf - kf) * s);
    let scale = a.values().iter().map(|x| x.norm()).fold(0.0, f64::max);
    let lhs = if scale == 0.0 {
        0.0
    } else {
        scale
            * a.values()
                .iter()
                .map(|x| (x.norm() / scale).powf(exponent))
                .sum::<f64>()
                .powf(1.0 / exponent)
    };
    let subsets = enumerate_subsets(m, k)?;
    let count = binomial(m as u64, k as u64) as f64;
    let mut log_sum = 0.0;
    let mut zero = false;
    for pair in &subsets {
        let v = mixed_norm(a, pair, s, q)?;
        if v == 0.0 {
            zero = true;
        }
        log_sum += v.ln();
    }
    let rhs = if zero { 0.0 } else { (log_sum / count).exp() };
    Ok(CheckReport::new("blei", lhs, rhs, exact_tolerance(lhs, rhs))
        .param("m", m)
        .param("n", a.n())
        .param("k", k)
        .param("s", s)
        .param("q", q)
        .diag("lhs_exponent", exponent)
        .diag("subsets", subsets.len()))
}

/// Polynomial inequality `‖c‖_{2m/(m+1)} <= bound(m,k) ‖P‖_∞`, with the sup
/// norm upper-bounded. For `m = 1` the constant is 1 and the check also
/// records whether `Σ|c_i|` lies inside the sup-norm enclosure.
pub fn check_scalar_bh(poly: &HomogeneousPolynomial, k: usize, options: &CheckOptions) -> Result<CheckReport> {
    ensure_dim(1, poly.coeff_dim())?;
    let m = poly.m();
    if m == 0 {
        return Err(invalid("m", "degree must be at least 1"));
    }
    let (constant, factors) = if m == 1 {
        if k != 1 {
            return Err(invalid("k", "linear forms only admit k = 1"));
        }
        (1.0, Value::Null)
    } else {
        let report = scalar_bh_bound(m, k)?;
        (report.value, serde_json::to_value(&report.factors).expect("plain data"))
    };
    let exponent = 2.0 * m as f64 / (m as f64 + 1.0);
    let lhs = coeff_lp_norm(poly, exponent, None)?;
    let sup = sup_side(poly, None, options)?;
    let rhs = constant * sup.upper;
    let mut report = CheckReport::new("scalar_bh", lhs, rhs, ROUNDING_TOLERANCE * rhs)
        .param("m", m)
        .param("n", poly.n())
        .param("k", k)
        .diag("constant", constant)
        .diag("factors", factors)
        .diag("sup_enclosure", enclosure_json(&sup))
        .diag("enclosure_width", sup.width())
        .diag("seed", options.seed);
    if m == 1 {
        // linear forms: Σ|c_i| is the sup norm, so it must sit inside the enclosure
        let inside = lhs >= sup.lower - ROUNDING_TOLERANCE * lhs && lhs <= sup.upper + ROUNDING_TOLERANCE * lhs;
        report = report.diag("equality_within_enclosure", inside);
        if !inside {
            report.pass = false;
        }
    }
    Ok(report.with_failure_witness(options.seed, Some(poly), None))
}

/// Hypercontractive comparison `‖P‖_{L^q} <= (q/p)^{m/2} ‖P‖_{L^p}` on the torus.
pub fn check_hypercontractive(
    poly: &HomogeneousPolynomial,
    p: f64,
    q: f64,
    options: &CheckOptions,
) -> Result<CheckReport> {
    ensure_dim(1, poly.coeff_dim())?;
    if !(p > 0.0 && p < q && q.is_finite()) {
        return Err(invalid("p, q", format!("need 0 < p < q < ∞, got p = {p}, q = {q}")));
    }
    let (lhs, lhs_se) = if q == 2.0 {
        (exact_l2_torus(poly, None)?, 0.0)
    } else {
        let e = torus_lp_norm(poly, None, q, options.samples, options.seed)?;
        (e.estimate, e.std_error)
    };
    let constant = (q / p).powf(poly.m() as f64 / 2.0);
    let lower = torus_lp_norm(poly, None, p, options.samples, options.seed)?;
    let rhs = constant * lower.estimate;
    let rhs_se = constant * lower.std_error;
    let sigma = lhs_se.hypot(rhs_se);
    let report = CheckReport::new(
        "hypercontractive",
        lhs,
        rhs,
        SIGMA_BAND * sigma + ROUNDING_TOLERANCE * rhs,
    )
    .param("m", poly.m())
    .param("n", poly.n())
    .param("p", p)
    .param("q", q)
    .diag("constant", constant)
    .diag("lhs_std_error", lhs_se)
    .diag("rhs_std_error", rhs_se)
    .diag("lhs_exact", q == 2.0)
    .diag("samples", options.samples)
    .diag("seed", options.seed);
    let report = if rhs > 0.0 { report.diag("ratio", lhs / lower.estimate) } else { report };
    Ok(report.with_failure_witness(options.seed, Some(poly), None))
}

/// Coefficient inequality
/// `(Σ ‖c_α‖_X^q)^{1/q} <= (2/p)^{m/2} M_q(X) (∫ ‖P‖_X^p)^{1/p}`.
pub fn check_coeff_lemma(
    poly: &HomogeneousPolynomial,
    space: &AtomicFunctionSpace,
    p: f64,
    q: f64,
    options: &CheckOptions,
) -> Result<CheckReport> {
    if !((1.0..=2.0).contains(&p) && 2.0 <= q && q.is_finite()) {
        return Err(invalid("p, q", format!("need 1 <= p <= 2 <= q < ∞, got p = {p}, q = {q}")));
    }
    ensure_dim(space.atoms(), poly.coeff_dim())?;
    let constants = lattice_constants(space);
    if constants.convexity(p).is_none() {
        return Err(Error::Unsupported(format!(
            "weighted ℓ_{} model is not {p}-convex with constant 1",
            space.exponent()
        )));
    }
    let Some(mq) = constants.concavity(q) else {
        return Err(Error::Unsupported(format!(
            "no closed form for M_{q} of a weighted ℓ_{} model",
            space.exponent()
        )));
    };
    let lhs = coeff_lp_norm(poly, q, Some(space))?;
    let integral = torus_lp_norm(poly, Some(space), p, options.samples, options.seed)?;
    let constant = (2.0 / p).powf(poly.m() as f64 / 2.0) * mq;
    let rhs = constant * integral.estimate;
    let rhs_se = constant * integral.std_error;
    let report = CheckReport::new(
        "coeff_lemma",
        lhs,
        rhs,
        SIGMA_BAND * rhs_se + ROUNDING_TOLERANCE * rhs,
    )
    .param("m", poly.m())
    .param("n", poly.n())
    .param("p", p)
    .param("q", q)
    .param("atoms", space.atoms())
    .param("space_exponent", space.exponent())
    .diag("constant", constant)
    .diag("concavity_mq", mq)
    .diag("rhs_std_error", rhs_se)
    .diag("samples", options.samples)
    .diag("seed", options.seed);
    Ok(report.with_failure_witness(options.seed, Some(poly), None))
}

fn kahane_provider(choice: KahaneChoice, target: &AtomicFunctionSpace) -> &'static dyn KahaneConstants {
    match choice {
        KahaneChoice::Steinhaus => &SteinhausKhinchine,
        KahaneChoice::Conservative => &ConservativeKahane,
        KahaneChoice::Auto if target.is_scalar() => &SteinhausKhinchine,
        KahaneChoice::Auto => &ConservativeKahane,
    }
}

fn pi_upper(v: &LinearOperator, options: &CheckOptions) -> Result<(f64, String)> {
    if let Some((value, how)) = summing_norm_upper(v) {
        return Ok((value, how.to_string()));
    }
    match options.pi_upper {
        Some(value) if value >= 0.0 && value.is_finite() => Ok((value, "caller-supplied".to_string())),
        _ => Err(Error::Declined(format!(
            "no sound summing-norm upper bound for an ℓ_{} → ℓ_{} operator",
            v.source().exponent(),
            v.target().exponent()
        ))),
    }
}

/// `(Σ_α ‖v c_α‖_X^ρ)^{1/ρ}` with `ρ = rho(m, r, 2)`.
fn transported_lhs(poly: &HomogeneousPolynomial, v: &LinearOperator, r: f64) -> Result<(f64, f64)> {
    let exponent = rho(poly.m(), r, 2.0)?;
    let image = poly.apply_operator(v)?;
    Ok((coeff_lp_norm(&image, exponent, Some(v.target()))?, exponent))
}

/// Vector-valued inequality for `v: Y → X` with `X` a weighted `ℓ_2` model.
pub fn check_vector_bh(
    poly: &HomogeneousPolynomial,
    v: &LinearOperator,
    r: f64,
    k: usize,
    options: &CheckOptions,
) -> Result<CheckReport> {
    let x = v.target();
    if !x.is_hilbert() {
        return Err(Error::Unsupported(format!(
            "target must be a weighted ℓ_2 model, got exponent {}",
            x.exponent()
        )));
    }
    ensure_dim(v.source().atoms(), poly.coeff_dim())?;
    let (pi, pi_source) = pi_upper(v, options)?;
    let constants = lattice_constants(x);
    let inputs = LatticeInputs {
        m2: constants.concavity(2.0).expect("ℓ_2 model is 2-concave"),
        c2x: constants.cotype2.upper,
        pi_r1: pi,
    };
    let bound = vector_bound_2convex(poly.m(), k, r, &inputs, kahane_provider(options.kahane, x))?;
    let (lhs, exponent) = transported_lhs(poly, v, r)?;
    let sup = sup_side(poly, Some(v.source()), options)?;
    let rhs = bound.value * sup.upper;
    let report = CheckReport::new("vector_bh", lhs, rhs, ROUNDING_TOLERANCE * rhs)
        .param("m", poly.m())
        .param("n", poly.n())
        .param("k", k)
        .param("r", r)
        .param("source_atoms", v.source().atoms())
        .param("source_exponent", v.source().exponent())
        .param("target_atoms", x.atoms())
        .diag("rho", exponent)
        .diag("constant", bound.value)
        .diag("factors", serde_json::to_value(&bound.factors).expect("plain data"))
        .diag("kahane", bound.notes.join("; "))
        .diag("pi_upper", pi)
        .diag("pi_source", pi_source)
        .diag("sup_enclosure", enclosure_json(&sup))
        .diag("seed", options.seed);
    Ok(report.with_failure_witness(options.seed, Some(poly), Some(v)))
}

/// Upper bound for `sup ‖T(w^{(1)}, …, w^{(m)})‖` over torus arguments: the
/// smaller of `Σ_{i ∈ M(m,n)} ‖T(e_i)‖` and a phase grid with Lipschitz
/// inflation (one phase per argument is fixed by rotation invariance).
pub fn multilinear_sup_upper(form: &SymmetricForm, target: &AtomicFunctionSpace) -> Result<(f64, String)> {
    ensure_dim(target.atoms(), form.coeff_dim())?;
    let (m, n) = (form.m(), form.n());
    let mut total = 0.0;
    let mut lipschitz = vec![0.0f64; n];
    for i in iter_full(m, n) {
        let norm = target.norm_unchecked(form.value_at(&i));
        total += norm;
        lipschitz[i[0] - 1] += norm;
    }
    let fixed = (0..n)
        .max_by(|&a, &b| lipschitz[a].total_cmp(&lipschitz[b]).then(b.cmp(&a)))
        .expect("n >= 1");
    let free_per_arg = n - 1;
    let free = m * free_per_arg;
    if free == 0 {
        return Ok((total, "coefficient-sum".to_string()));
    }
    let mut g = 64usize;
    while g >= 4 && (g as f64).powi(free as i32) * (n as f64).powi(m as i32) > 2e7 {
        g -= 1;
    }
    if g < 4 {
        return Ok((total, "coefficient-sum".to_string()));
    }
    let roots: Vec<Complex64> = (0..g)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / g as f64))
        .collect();
    let free_coords: Vec<usize> = (0..n).filter(|&l| l != fixed).collect();
    let points = g.pow(free as u32);
    let grid_max = (0..points)
        .into_par_iter()
        .map(|mut index| {
            let mut w = vec![vec![Complex64::new(1.0, 0.0); n]; m];
            for arg in w.iter_mut() {
                for &l in &free_coords {
                    arg[l] = roots[index % g];
                    index /= g;
                }
            }
            let value = form.evaluate_form(&w).expect("sizes checked");
            target.norm_unchecked(&value)
        })
        .reduce(|| 0.0, f64::max);
    let half = std::f64::consts::PI / g as f64;
    let inflation = half * m as f64 * free_coords.iter().map(|&l| lipschitz[l]).sum::<f64>();
    let gridded = grid_max + inflation;
    Ok(if gridded < total {
        (gridded, format!("grid({g})+lipschitz"))
    } else {
        (total, "coefficient-sum".to_string())
    })
}

/// Multilinear inequality for `v: Y → H` with `Y` an `ℓ_1` model:
/// `(Σ_{i ∈ M(m,n)} ‖v T(e_i)‖^ρ)^{1/ρ} <= C_{m,r} K_G ‖v‖ ‖T‖`.
pub fn check_multilinear_gt(
    form: &SymmetricForm,
    v: &LinearOperator,
    r: f64,
    options: &CheckOptions,
) -> Result<CheckReport> {
    if v.source().exponent() != 1.0 {
        return Err(Error::Declined(format!(
            "source must be an ℓ_1 model, got exponent {}",
            v.source().exponent()
        )));
    }
    ensure_dim(v.source().atoms(), form.coeff_dim())?;
    let m = form.m();
    let exponent = rho(m, r, 2.0)?;
    let pi = grothendieck_upper(v)?;
    let mut strong = Vec::with_capacity(form.n().pow(m as u32));
    for i in iter_full(m, form.n()) {
        strong.push(v.target().norm_unchecked(&v.apply(form.value_at(&i))?));
    }
    let scale = strong.iter().copied().fold(0.0, f64::max);
    let lhs = if scale == 0.0 {
        0.0
    } else {
        scale * strong.iter().map(|x| (x / scale).powf(exponent)).sum::<f64>().powf(1.0 / exponent)
    };
    let constant = bh_multilinear_constant(m, r)?;
    let (norm_t, method) = multilinear_sup_upper(form, v.source())?;
    let rhs = constant * pi * norm_t;
    let mut report = CheckReport::new("multilinear_gt", lhs, rhs, ROUNDING_TOLERANCE * rhs)
        .param("m", m)
        .param("n", form.n())
        .param("r", r)
        .param("source_atoms", v.source().atoms())
        .param("target_atoms", v.target().atoms())
        .diag("rho", exponent)
        .diag("multilinear_constant", constant)
        .diag("pi_upper", pi)
        .diag("form_norm_upper", norm_t)
        .diag("form_norm_method", method)
        .diag("seed", options.seed);
    report.warnings.push(format!(
        "summing index of the statement is garbled; rho(m,r,2) = {exponent} is used and the \
         Grothendieck bound covers every index >= 1"
    ));
    Ok(report.with_failure_witness(options.seed, Some(&crate::polynomials::depolarize(form)), Some(v)))
}

/// Hilbert-lattice variant with constant
/// `(2/s_k)^{(m-k)/2} C_{m,k} C_{k,r} π(v) ‖P‖` and `π(v) <= K_G ‖v‖`.
pub fn check_hilbert_lattice(
    poly: &HomogeneousPolynomial,
    v: &LinearOperator,
    r: f64,
    k: usize,
    options: &CheckOptions,
) -> Result<CheckReport> {
    if v.source().exponent() != 1.0 {
        return Err(Error::Declined(format!(
            "source must be an ℓ_1 model, got exponent {}",
            v.source().exponent()
        )));
    }
    if poly.m() < 2 {
        return Err(invalid("m", "summing index 2r(m-1)/(2+(m-2)r) needs m >= 2"));
    }
    ensure_dim(v.source().atoms(), poly.coeff_dim())?;
    let bound = hilbert_lattice_bound(poly.m(), k, r)?;
    let pi = grothendieck_upper(v)?;
    let (lhs, exponent) = transported_lhs(poly, v, r)?;
    let sup = sup_side(poly, Some(v.source()), options)?;
    let rhs = bound.value * pi * sup.upper;
    let mut report = CheckReport::new("hilbert_lattice", lhs, rhs, ROUNDING_TOLERANCE * rhs)
        .param("m", poly.m())
        .param("n", poly.n())
        .param("k", k)
        .param("r", r)
        .diag("rho", exponent)
        .diag("constant", bound.value)
        .diag("factors", serde_json::to_value(&bound.factors).expect("plain data"))
        .diag("pi_index", bound.parameters["pi_index"])
        .diag("pi_upper", pi)
        .diag("sup_enclosure", enclosure_json(&sup))
        .diag("seed", options.seed);
    report.warnings.extend(bound.notes.iter().cloned());
    Ok(report.with_failure_witness(options.seed, Some(poly), Some(v)))
}

/// Empirical Kahane ratio `(E‖Σε_i x_i‖²)^{1/2} / (E‖Σε_i x_i‖^p)^{1/p}` over
/// Rademacher signs, compared with [`kahane_constant_upper`]. When
/// `2^N <= trials` the expectation is computed exactly by enumeration.
pub fn kahane_empirical(
    space: &AtomicFunctionSpace,
    xs: &[Vec<Complex64>],
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    if xs.is_empty() {
        return Err(invalid("xs", "need at least one vector"));
    }
    for x in xs {
        ensure_dim(space.atoms(), x.len())?;
    }
    let bound = kahane_constant_upper(p)?;
    if trials < 2 {
        return Err(invalid("trials", "need at least 2"));
    }
    let count = xs.len();
    let d = space.atoms();
    let norm_for = |signs: &mut dyn FnMut(usize) -> bool| {
        let mut sum = vec![Complex64::new(0.0, 0.0); d];
        for (i, x) in xs.iter().enumerate() {
            let s = if signs(i) { -1.0 } else { 1.0 };
            for (acc, v) in sum.iter_mut().zip(x) {
                *acc += v * s;
            }
        }
        space.norm_unchecked(&sum)
    };
    let exact = count < 63 && (1u64 << count) <= trials as u64;
    let norms: Vec<f64> = if exact {
        (0..1u64 << count)
            .map(|mask| norm_for(&mut |i| mask >> i & 1 == 1))
            .collect()
    } else {
        const SHARDS: usize = 8;
        let parts: Vec<Vec<f64>> = (0..SHARDS)
            .into_par_iter()
            .map(|shard| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(shard as u64);
                let draws = trials / SHARDS + usize::from(shard < trials % SHARDS);
                (0..draws)
                    .map(|_| {
                        let signs: Vec<bool> = (0..count).map(|_| rng.gen()).collect();
                        norm_for(&mut |i| signs[i])
                    })
                    .collect()
            })
            .collect();
        parts.concat()
    };
    let samples = norms.len() as f64;
    let squares: Vec<f64> = norms.iter().map(|x| x * x).collect();
    let powers: Vec<f64> = norms
        .iter()
        .map(|x| if p == 2.0 { x * x } else { x.powf(p) })
        .collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / samples;
    let (a, b) = (mean(&squares), mean(&powers));
    let ratio = if b == 0.0 || p == 2.0 {
        1.0
    } else {
        a.sqrt() / b.powf(1.0 / p)
    };
    let std_error = if exact || b == 0.0 || p == 2.0 {
        0.0
    } else {
        // delta method for g(a, b) = a^{1/2} b^{-1/p}
        let (ga, gb) = (ratio / (2.0 * a), -ratio / (p * b));
        let cov = |u: &[f64], mu: f64, v: &[f64], mv: f64| {
            u.iter().zip(v).map(|(x, y)| (x - mu) * (y - mv)).sum::<f64>() / (samples - 1.0)
        };
        let var = ga * ga * cov(&squares, a, &squares, a)
            + 2.0 * ga * gb * cov(&squares, a, &powers, b)
            + gb * gb * cov(&powers, b, &powers, b);
        (var.max(0.0) / samples).sqrt()
    };
    Ok(CheckReport::new("kahane", ratio, bound, SIGMA_BAND * std_error)
        .param("p", p)
        .param("vectors", count)
        .param("atoms", d)
        .param("space_exponent", space.exponent())
        .diag("std_error", std_error)
        .diag("exact_enumeration", exact)
        .diag("sign_draws", norms.len())
        .diag("ratio_at_least_one", ratio >= 1.0 - 1e-12)
        .diag("seed", seed))
}

/// Result of [`lower_bound_search`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub m: usize,
    pub n: usize,
    pub best_ratio: f64,
    /// `scalar_bh_best(m)` (1 for `m = 1`).
    pub upper_bound: f64,
    pub witness: HomogeneousPolynomial,
    pub evaluations: u64,
}

impl SearchResult {
    pub fn gap(&self) -> f64 {
        self.upper_bound - self.best_ratio
    }

    pub fn consistent(&self) -> bool {
        self.best_ratio <= self.upper_bound * (1.0 + 1e-6)
    }
}

const SEARCH_STEPS: usize = 40;

fn search_grid(n: usize) -> usize {
    let mut g = 128usize;
    while g > 2 && (g as f64).powi(n as i32 - 1) > 4096.0 {
        g -= 1;
    }
    g
}

fn search_ratio(poly: &HomogeneousPolynomial, grid: usize) -> Result<f64> {
    let m = poly.m() as f64;
    let lhs = coeff_lp_norm(poly, 2.0 * m / (m + 1.0), None)?;
    let sup = match supnorm_upper(poly, None, grid) {
        Ok(v) => v,
        Err(Error::TooExpensive { .. }) => coeff_lp_norm(poly, 1.0, None)?,
        Err(e) => return Err(e),
    };
    Ok(if sup > 0.0 { lhs / sup } else { 0.0 })
}

/// Empirical lower bound for the optimal polynomial constant `D(m)`:
/// maximizes `‖c‖_{2m/(m+1)} / (upper bound of ‖P‖_∞)` over `budget`
/// restarts with coordinatewise perturbation ascent. Restart `j` uses the
/// stream `(seed, j)`, so the result is nondecreasing in `budget`.
pub fn lower_bound_search(m: usize, n: usize, budget: usize, seed: u64) -> Result<SearchResult> {
    if budget == 0 {
        return Err(invalid("budget", "must be at least 1"));
    }
    if m == 0 || n == 0 {
        return Err(invalid("m, n", "must be at least 1"));
    }
    let upper_bound = if m == 1 { 1.0 } else { scalar_bh_best(m)?.1.value };
    let grid = search_grid(n);
    let restarts: Vec<Result<(f64, HomogeneousPolynomial, u64)>> = (0..budget as u64)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart);
            let mut poly = if restart == 0 {
                // z_1 z_2 ⋯ z_m (or z_1^m when n < m) has ratio 1
                let mut exps = vec![0u32; n];
                for j in 0..m {
                    exps[j.min(n - 1)] += 1;
                }
                let mut p = HomogeneousPolynomial::zero(n, m, 1)?;
                p.set_coefficient(&MultiIndex::new(exps)?, &[Complex64::new(1.0, 0.0)])?;
                p
            } else {
                random_polynomial(n, m, 1, CoefficientLaw::Steinhaus, rng.gen())?
            };
            let mut best = search_ratio(&poly, grid)?;
            let mut evaluations = 1u64;
            for _ in 0..SEARCH_STEPS {
                let j = rng.gen_range(0..poly.len());
                let alpha = poly.exponents()[j].clone();
                let old = poly.coefficient(j)[0];
                let step = Complex64::from_polar(rng.gen::<f64>() * 0.5, rng.gen::<f64>() * std::f64::consts::TAU);
                poly.set_coefficient(&alpha, &[old + step])?;
                let ratio = search_ratio(&poly, grid)?;
                evaluations += 1;
                if ratio > best {
                    best = ratio;
                } else {
                    poly.set_coefficient(&alpha, &[old])?;
                }
            }
            Ok((best, poly, evaluations))
        })
        .collect();
    let mut best: Option<(f64, HomogeneousPolynomial)> = None;
    let mut evaluations = 0;
    for r in restarts {
        let (ratio, poly, evals) = r?;
        evaluations += evals;
        if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
            best = Some((ratio, poly));
        }
    }
    let (best_ratio, witness) = best.expect("budget >= 1");
    Ok(SearchResult {
        m,
        n,
        best_ratio,
        upper_bound,
        witness,
        evaluations,
    })
}

/// The randomized sweeps available to [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Blei,
    ScalarBh,
    Hypercontractive,
    CoeffLemma,
    VectorBh,
    MultilinearGt,
    HilbertLattice,
    Kahane,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Blei,
        Suite::ScalarBh,
        Suite::Hypercontractive,
        Suite::CoeffLemma,
        Suite::VectorBh,
        Suite::MultilinearGt,
        Suite::HilbertLattice,
        Suite::Kahane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Blei => "blei",
            Suite::ScalarBh => "scalar-bh",
            Suite::Hypercontractive => "hypercontractive",
            Suite::CoeffLemma => "coeff-lemma",
            Suite::VectorBh => "vector-bh",
            Suite::MultilinearGt => "multilinear-gt",
            Suite::HilbertLattice => "hilbert-lattice",
            Suite::Kahane => "kahane",
        }
    }

    /// Number of instances when no count is given.
    pub fn default_count(self) -> usize {
        match self {
            Suite::Blei => 1000,
            Suite::ScalarBh => 200,
            Suite::Hypercontractive | Suite::CoeffLemma => 100,
            Suite::VectorBh | Suite::MultilinearGt | Suite::HilbertLattice => 50,
            Suite::Kahane => 12,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| invalid("suite", format!("unknown suite `{s}`")))
    }
}

/// Suite settings. `samples` is the number of sign draws for the Kahane suite.
#[derive(Debug, Clone, PartialEq)]
#[derive(Default)]
pub struct SuiteConfig {
    pub count: Option<usize>,
    pub checks: CheckOptions,
}


/// Reports of one suite run, in instance order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub reports: Vec<CheckReport>,
    /// `(instance, reason)` for declined instances.
    pub declined: Vec<(usize, String)>,
}

impl SuiteOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = (usize, &CheckReport)> {
        self.reports.iter().enumerate().filter(|(_, r)| !r.pass)
    }
}

/// SplitMix64 finalizer; derives the seed of instance `index`.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn unit(d: usize, q: f64) -> AtomicFunctionSpace {
    AtomicFunctionSpace::unit(d, q).expect("valid model")
}

/// Runs one instance of `suite`; instances are independent and reproducible.
pub fn run_instance(suite: Suite, index: usize, config: &SuiteConfig) -> Result<CheckReport> {
    let seed = instance_seed(config.checks.seed, index as u64);
    let options = CheckOptions {
        seed,
        ..config.checks.clone()
    };
    let i = index;
    match suite {
        Suite::Blei => {
            const PAIRS: [(f64, f64); 4] = [(1.0, 2.0), (4.0 / 3.0, 2.0), (2.0, 2.0), (1.5, 3.0)];
            let m = [2, 3, 4][i % 3];
            let n = [2, 3][(i / 3) % 2];
            let (s, q) = PAIRS[(i / 6) % 4];
            let k = 1 + (i / 24) % m;
            let a = FullArray::random(m, n, CoefficientLaw::Gaussian, seed)?;
            check_blei(&a, k, s, q)
        }
        Suite::ScalarBh => {
            let m = 1 + i % 4;
            let n = 1 + (i / 4) % 5;
            let p = random_polynomial(n, m, 1, CoefficientLaw::Steinhaus, seed)?;
            let k = if m == 1 { 1 } else { scalar_bh_best(m)?.0 };
            check_scalar_bh(&p, k, &options)
        }
        Suite::Hypercontractive => {
            let (p, q) = [(1.0, 2.0), (2.0, 4.0)][i % 2];
            let m = 1 + (i / 2) % 3;
            let n = 1 + (i / 6) % 3;
            let law = [CoefficientLaw::Steinhaus, CoefficientLaw::Gaussian][(i / 18) % 2];
            let poly = random_polynomial(n, m, 1, law, seed)?;
            check_hypercontractive(&poly, p, q, &options)
        }
        Suite::CoeffLemma => {
            let (p, q) = [(1.0, 2.0), (2.0, 2.0), (1.5, 3.0)][i % 3];
            let m = 1 + (i / 3) % 3;
            let n = 1 + (i / 9) % 3;
            let space = if i.is_multiple_of(2) {
                AtomicFunctionSpace::new(vec![1.0, 0.5], 2.0)?
            } else {
                AtomicFunctionSpace::scalar()
            };
            let poly = random_polynomial(n, m, space.atoms(), CoefficientLaw::Gaussian, seed)?;
            check_coeff_lemma(&poly, &space, p, q, &options)
        }
        Suite::VectorBh => {
            let m = [2, 3][i % 2];
            let n = 1 + (i / 2) % 3;
            let k = 1 + (i / 6) % m;
            let v = LinearOperator::random(unit(3, 1.0), unit(2, 2.0), seed);
            let poly = random_polynomial(n, m, 3, CoefficientLaw::Gaussian, seed.wrapping_add(1))?;
            check_vector_bh(&poly, &v, 1.0, k, &options)
        }
        Suite::MultilinearGt => {
            let m = 1 + i % 3;
            let n = [2, 3][(i / 3) % 2];
            let r = [1.0, 1.5][(i / 6) % 2];
            let v = LinearOperator::random(unit(3, 1.0), unit(2, 2.0), seed);
            let poly = random_polynomial(n, m, 3, CoefficientLaw::Gaussian, seed.wrapping_add(1))?;
            check_multilinear_gt(&polarize(&poly), &v, r, &options)
        }
        Suite::HilbertLattice => {
            let m = [2, 3][i % 2];
            let n = 1 + (i / 2) % 3;
            let k = 1 + (i / 6) % m;
            let r = [1.0, 1.5][(i / 12) % 2];
            let v = LinearOperator::random(unit(3, 1.0), unit(2, 2.0), seed);
            let poly = random_polynomial(n, m, 3, CoefficientLaw::Gaussian, seed.wrapping_add(1))?;
            check_hilbert_lattice(&poly, &v, r, k, &options)
        }
        Suite::Kahane => {
            let p = [1.0, 1.5][i % 2];
            let (space, xs) = match (i / 2) % 6 {
                variant @ 0..=2 => {
                    let d = [2, 4, 8][variant];
                    let basis: Vec<Vec<Complex64>> = (0..d)
                        .map(|j| {
                            (0..d)
                                .map(|l| Complex64::new(if l == j { 1.0 } else { 0.0 }, 0.0))
                                .collect()
                        })
                        .collect();
                    (unit(d, 2.0), basis)
                }
                variant => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let (d, q) = [(3, 1.0), (4, 1.5), (3, 3.0)][variant - 3];
                    let xs: Vec<Vec<Complex64>> = (0..10)
                        .map(|_| {
                            (0..d)
                                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                                .collect()
                        })
                        .collect();
                    (unit(d, q), xs)
                }
            };
            let draws = config.checks.samples.max(2);
            kahane_empirical(&space, &xs, p, draws, seed)
        }
    }
}

/// Runs `count` instances (default [`Suite::default_count`]) in parallel;
/// reports are ordered by instance index.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteOutcome> {
    let count = config.count.unwrap_or_else(|| suite.default_count());
    let results: Vec<Result<CheckReport>> = (0..count)
        .into_par_iter()
        .map(|index| run_instance(suite, index, config))
        .collect();
    let mut reports = Vec::with_capacity(count);
    let mut declined = Vec::new();
    for (index, result) in results.into_iter().enumerate() {
        match result {
            Ok(report) => reports.push(report),
            Err(Error::Declined(reason)) => declined.push((index, reason)),
            Err(e) => return Err(e),
        }
    }
    Ok(SuiteOutcome {
        suite,
        reports,
        declined,
    })
}
