//! Finite atomic models of Banach function spaces and operators between them.
//!
//! A model is weighted `ℓ_q` on `d` atoms: `‖f‖ = (Σ_j μ_j |f_j|^q)^{1/q}`.
//! Functionals pair with functions through `φ(f) = Σ_j φ_j f_j`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, invalid, Error, Result};
use crate::polynomials::{complex_normal, unit_phase};

/// Best published upper bound for the complex Grothendieck constant.
pub const GROTHENDIECK_COMPLEX_UPPER: f64 = 1.40491;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Weighted `ℓ_q` on finitely many atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicFunctionSpace {
    weights: Vec<f64>,
    exponent: f64,
}

impl AtomicFunctionSpace {
    pub fn new(weights: Vec<f64>, exponent: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("weights", "need at least one atom"));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(invalid("weights", format!("atom measure {w} is not positive and finite")));
        }
        if !(exponent >= 1.0 && exponent.is_finite()) {
            return Err(invalid("exponent", format!("must be finite and >= 1, got {exponent}")));
        }
        Ok(Self { weights, exponent })
    }

    /// Unweighted `ℓ_q^d`.
    pub fn unit(d: usize, exponent: f64) -> Result<Self> {
        Self::new(vec![1.0; d], exponent)
    }

    /// The scalar field `ℂ` as a one-atom model (norm = modulus).
    pub fn scalar() -> Self {
        Self {
            weights: vec![1.0],
            exponent: 2.0,
        }
    }

    pub fn atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// One atom of unit measure: every exponent gives the modulus.
    pub fn is_scalar(&self) -> bool {
        self.weights == [1.0]
    }

    pub fn is_hilbert(&self) -> bool {
        self.exponent == 2.0
    }

    pub fn norm(&self, f: &[Complex64]) -> Result<f64> {
        ensure_dim(self.atoms(), f.len())?;
        Ok(self.norm_unchecked(f))
    }

    pub(crate) fn norm_unchecked(&self, f: &[Complex64]) -> f64 {
        self.norm_of_moduli(f.iter().map(|x| x.norm()))
    }

    /// Norm of the function with the given pointwise moduli.
    pub fn norm_of_moduli(&self, moduli: impl IntoIterator<Item = f64>) -> f64 {
        let q = self.exponent;
        let mut scale = 0.0f64;
        let mut terms = Vec::with_capacity(self.atoms());
        for (w, a) in self.weights.iter().zip(moduli) {
            scale = scale.max(a);
            terms.push((*w, a));
        }
        if scale == 0.0 {
            return 0.0;
        }
        // rescale to avoid overflow/underflow in a^q
        let sum: f64 = terms.iter().map(|&(w, a)| w * (a / scale).powf(q)).sum();
        scale * sum.powf(1.0 / q)
    }

    /// The `p`-th power `X_[p]`, itself weighted `ℓ_{q/p}` on the same atoms.
    pub fn pth_power_space(&self, p: f64) -> Result<Self> {
        if !(p >= 1.0 && p <= self.exponent) {
            return Err(invalid(
                "p",
                format!("p-th power needs 1 <= p <= q = {}, got {p}", self.exponent),
            ));
        }
        Self::new(self.weights.clone(), self.exponent / p)
    }

    /// `‖ |f|^{1/p} ‖_X^p`, the defining formula of the `p`-th power norm.
    pub fn power_norm(&self, f: &[Complex64], p: f64) -> Result<f64> {
        ensure_dim(self.atoms(), f.len())?;
        Ok(self
            .norm_of_moduli(f.iter().map(|x| x.norm().powf(1.0 / p)))
            .powf(p))
    }

    /// Norm of a functional under the pairing `φ(f) = Σ φ_j f_j`.
    pub fn dual_norm(&self, phi: &[Complex64]) -> Result<f64> {
        ensure_dim(self.atoms(), phi.len())?;
        let q = self.exponent;
        if q == 1.0 {
            return Ok(phi
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| x.norm() / w)
                .fold(0.0, f64::max));
        }
        let dual = q / (q - 1.0);
        let scaled = AtomicFunctionSpace {
            weights: vec![1.0; self.atoms()],
            exponent: dual,
        };
        Ok(scaled.norm_of_moduli(
            phi.iter()
                .zip(&self.weights)
                .map(|(x, w)| x.norm() * w.powf(-1.0 / q)),
        ))
    }

    /// A functional of dual norm at most 1 with `φ(y) = ‖y‖`.
    pub fn norming_functional(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        let norm = self.norm(y)?;
        let q = self.exponent;
        Ok(y.iter()
            .zip(&self.weights)
            .map(|(yj, w)| {
                let a = yj.norm();
                let phase = if a > 0.0 { yj.conj() / a } else { Complex64::new(1.0, 0.0) };
                if q == 1.0 {
                    phase * *w
                } else if norm == 0.0 {
                    ZERO
                } else {
                    phase * (*w * (a / norm).powf(q - 1.0))
                }
            })
            .collect())
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            atoms: self.atoms(),
            weights: self.weights.clone(),
            exponent: self.exponent,
        }
    }
}

/// Lattice constants of a weighted `ℓ_q` model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeConstants {
    pub exponent: f64,
    pub atoms: usize,
    pub cotype2: Cotype2,
}

/// Cotype 2 constant: exact when `exact`, otherwise `lower <= C_2 <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cotype2 {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

impl LatticeConstants {
    /// `M_{q'}(X)`: 1 for `q' >= q`; no closed form otherwise.
    pub fn concavity(&self, q_prime: f64) -> Option<f64> {
        (q_prime >= self.exponent).then_some(1.0)
    }

    /// `M^{p}(X)`: 1 for `1 <= p <= q`; no closed form otherwise.
    pub fn convexity(&self, p: f64) -> Option<f64> {
        (p >= 1.0 && p <= self.exponent).then_some(1.0)
    }
}

/// Closed-form lattice constants with a default Monte Carlo cotype witness.
pub fn lattice_constants(space: &AtomicFunctionSpace) -> LatticeConstants {
    lattice_constants_with(space, 256, 0)
}

/// As [`lattice_constants`]; the cotype lower bound is the best ratio
/// `(Σ‖x_j‖²)^{1/2} / (E‖Σ ε_j x_j‖²)^{1/2}` over `trials` random families,
/// with the sign average computed exactly by enumeration.
pub fn lattice_constants_with(space: &AtomicFunctionSpace, trials: usize, seed: u64) -> LatticeConstants {
    let q = space.exponent();
    let d = space.atoms() as f64;
    let cotype2 = if q == 2.0 || space.atoms() == 1 {
        Cotype2 {
            lower: 1.0,
            upper: 1.0,
            exact: true,
        }
    } else {
        // q < 2: Khinchine–Kahane gives √2; both cases are also bounded by the
        // Banach–Mazur distance to ℓ_2^d.
        let distance = d.powf((1.0 / q - 0.5).abs());
        let upper = if q < 2.0 { distance.min(std::f64::consts::SQRT_2) } else { distance };
        Cotype2 {
            lower: cotype_lower_bound(space, trials, seed).min(upper),
            upper,
            exact: false,
        }
    };
    LatticeConstants {
        exponent: q,
        atoms: space.atoms(),
        cotype2,
    }
}

fn cotype_lower_bound(space: &AtomicFunctionSpace, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = space.atoms();
    let mut best = 1.0f64; // a single vector attains 1
    for trial in 0..trials {
        let count = 2 + trial % 5;
        let xs: Vec<Vec<Complex64>> = (0..count)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        if trial % 2 == 0 {
                            Complex64::new(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0)
                        } else {
                            complex_normal(&mut rng)
                        }
                    })
                    .collect()
            })
            .collect();
        let strong: f64 = xs.iter().map(|x| space.norm_unchecked(x).powi(2)).sum();
        let mut average = 0.0;
        for signs in 0..(1u32 << count) {
            let mut sum = vec![ZERO; d];
            for (i, x) in xs.iter().enumerate() {
                let s = if signs >> i & 1 == 1 { -1.0 } else { 1.0 };
                for (acc, v) in sum.iter_mut().zip(x) {
                    *acc += v * s;
                }
            }
            average += space.norm_unchecked(&sum).powi(2);
        }
        average /= (1u32 << count) as f64;
        if average > 0.0 {
            best = best.max((strong / average).sqrt());
        }
    }
    best
}

/// A matrix `v: source → target`, row-major `target.atoms × source.atoms`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    source: AtomicFunctionSpace,
    target: AtomicFunctionSpace,
    matrix: Vec<Complex64>,
}

impl LinearOperator {
    pub fn new(
        source: AtomicFunctionSpace,
        target: AtomicFunctionSpace,
        matrix: Vec<Complex64>,
    ) -> Result<Self> {
        ensure_dim(source.atoms() * target.atoms(), matrix.len())?;
        if matrix.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(invalid("matrix", "entries must be finite"));
        }
        Ok(Self {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(space: &AtomicFunctionSpace) -> Self {
        Self::embedding(space.clone(), space.clone()).expect("square")
    }

    /// The formal identity between two models on the same number of atoms.
    pub fn embedding(source: AtomicFunctionSpace, target: AtomicFunctionSpace) -> Result<Self> {
        ensure_dim(source.atoms(), target.atoms())?;
        let d = source.atoms();
        let mut matrix = vec![ZERO; d * d];
        for j in 0..d {
            matrix[j * d + j] = Complex64::new(1.0, 0.0);
        }
        Self::new(source, target, matrix)
    }

    pub fn zero(source: AtomicFunctionSpace, target: AtomicFunctionSpace) -> Self {
        let len = source.atoms() * target.atoms();
        Self {
            source,
            target,
            matrix: vec![ZERO; len],
        }
    }

    /// Entries i.i.d. standard complex normal.
    pub fn random(source: AtomicFunctionSpace, target: AtomicFunctionSpace, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let matrix = (0..source.atoms() * target.atoms())
            .map(|_| complex_normal(&mut rng))
            .collect();
        Self {
            source,
            target,
            matrix,
        }
    }

    pub fn source(&self) -> &AtomicFunctionSpace {
        &self.source
    }

    pub fn target(&self) -> &AtomicFunctionSpace {
        &self.target
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.source.atoms() + col]
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        ensure_dim(self.source.atoms(), x.len())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix
            .chunks_exact(self.source.atoms())
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|x| *x == ZERO)
    }

    pub fn to_file(&self) -> OperatorFile {
        OperatorFile {
            source: self.source.to_file(),
            target: self.target.to_file(),
            matrix: self
                .matrix
                .chunks_exact(self.source.atoms())
                .map(|row| row.iter().map(|x| [x.re, x.im]).collect())
                .collect(),
        }
    }
}

/// On-disk space description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub atoms: usize,
    pub weights: Vec<f64>,
    pub exponent: f64,
}

impl TryFrom<SpaceFile> for AtomicFunctionSpace {
    type Error = Error;

    fn try_from(file: SpaceFile) -> Result<Self> {
        ensure_dim(file.atoms, file.weights.len())?;
        AtomicFunctionSpace::new(file.weights, file.exponent)
    }
}

/// On-disk operator: spaces plus the matrix as rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub source: SpaceFile,
    pub target: SpaceFile,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<OperatorFile> for LinearOperator {
    type Error = Error;

    fn try_from(file: OperatorFile) -> Result<Self> {
        let wrap = |location: String, e: Error| Error::Parse {
            location,
            message: e.to_string(),
        };
        let source = AtomicFunctionSpace::try_from(file.source).map_err(|e| wrap("source".into(), e))?;
        let target = AtomicFunctionSpace::try_from(file.target).map_err(|e| wrap("target".into(), e))?;
        ensure_dim(target.atoms(), file.matrix.len()).map_err(|e| wrap("matrix".into(), e))?;
        let mut matrix = Vec::with_capacity(source.atoms() * target.atoms());
        for (i, row) in file.matrix.iter().enumerate() {
            ensure_dim(source.atoms(), row.len()).map_err(|e| wrap(format!("matrix[{i}]"), e))?;
            matrix.extend(row.iter().map(|&[re, im]| Complex64::new(re, im)));
        }
        LinearOperator::new(source, target, matrix)
    }
}

pub fn serialize_operator(v: &LinearOperator) -> String {
    serde_json::to_string_pretty(&v.to_file()).expect("plain data serializes")
}

pub fn parse_operator(text: &str) -> Result<LinearOperator> {
    let file: OperatorFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    LinearOperator::try_from(file)
}

/// How much an [`OperatorNorm`] value can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormCertificate {
    /// Closed form (`ℓ_1`-type source: maximum over extreme points).
    Exact,
    /// Largest singular value by converged power iteration.
    Converged,
    /// Multistart search; only a lower bound.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorNorm {
    pub value: f64,
    pub certificate: NormCertificate,
}

/// Operator norm of `v` between its models.
pub fn operator_norm(v: &LinearOperator) -> OperatorNorm {
    let (s, t) = (v.source(), v.target());
    if s.exponent() == 1.0 || s.atoms() == 1 {
        // extreme points of the weighted ℓ_1 ball are e_j / μ_j (up to phase)
        let value = (0..s.atoms())
            .map(|j| {
                let column: Vec<Complex64> = (0..t.atoms()).map(|i| v.entry(i, j)).collect();
                t.norm_unchecked(&column) / s.weights()[j].powf(1.0 / s.exponent())
            })
            .fold(0.0, f64::max);
        return OperatorNorm {
            value,
            certificate: NormCertificate::Exact,
        };
    }
    if s.is_hilbert() && t.is_hilbert() {
        return OperatorNorm {
            value: hilbert_operator_norm(v),
            certificate: NormCertificate::Converged,
        };
    }
    OperatorNorm {
        value: multistart_operator_norm(v, 64, 0),
        certificate: NormCertificate::LowerBound,
    }
}

/// `σ_max(D_t^{1/2} A D_s^{-1/2})` by power iteration on the Gram matrix.
fn hilbert_operator_norm(v: &LinearOperator) -> f64 {
    let (s, t) = (v.source(), v.target());
    let (rows, cols) = (t.atoms(), s.atoms());
    let b: Vec<Complex64> = (0..rows * cols)
        .map(|idx| {
            let (i, j) = (idx / cols, idx % cols);
            v.matrix[idx] * (t.weights()[i].sqrt() / s.weights()[j].sqrt())
        })
        .collect();
    let mut gram = vec![ZERO; cols * cols];
    for i in 0..cols {
        for j in 0..cols {
            gram[i * cols + j] = (0..rows).map(|r| b[r * cols + i].conj() * b[r * cols + j]).sum();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<Complex64> = (0..cols).map(|_| complex_normal(&mut rng)).collect();
    let mut lambda = 0.0;
    let mut stable = 0;
    for _ in 0..100_000 {
        let norm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        x.iter_mut().for_each(|c| *c /= norm);
        let y: Vec<Complex64> = (0..cols)
            .map(|i| (0..cols).map(|j| gram[i * cols + j] * x[j]).sum())
            .collect();
        let rayleigh: f64 = x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum();
        if (rayleigh - lambda).abs() <= 1e-15 * rayleigh.abs() {
            stable += 1;
            if stable >= 5 {
                lambda = rayleigh;
                break;
            }
        } else {
            stable = 0;
        }
        lambda = rayleigh;
        x = y;
    }
    lambda.max(0.0).sqrt()
}

fn multistart_operator_norm(v: &LinearOperator, starts: usize, seed: u64) -> f64 {
    let (s, t) = (v.source(), v.target());
    let ratio = |x: &[Complex64]| {
        let denom = s.norm_unchecked(x);
        if denom == 0.0 {
            0.0
        } else {
            t.norm_unchecked(&v.apply_unchecked(x)) / denom
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for start in 0..starts {
        let mut x: Vec<Complex64> = if start < s.atoms() {
            (0..s.atoms())
                .map(|j| if j == start { Complex64::new(1.0, 0.0) } else { ZERO })
                .collect()
        } else {
            (0..s.atoms()).map(|_| complex_normal(&mut rng)).collect()
        };
        let mut value = ratio(&x);
        let mut step = 0.5;
        while step > 1e-9 {
            let mut improved = false;
            for j in 0..x.len() {
                for dir in [
                    Complex64::new(step, 0.0),
                    Complex64::new(-step, 0.0),
                    Complex64::new(0.0, step),
                    Complex64::new(0.0, -step),
                ] {
                    let scale = x.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
                    x[j] += dir * scale;
                    let candidate = ratio(&x);
                    if candidate > value {
                        value = candidate;
                        improved = true;
                    } else {
                        x[j] -= dir * scale;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(value);
    }
    best
}

/// Tuning for [`weak_ell1_norm_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakNormOptions {
    /// Multistarts of the alternating ascent.
    pub starts: usize,
    /// Maximum number of phase-grid evaluations for the upper enclosure.
    pub grid_budget: usize,
    pub seed: u64,
}

impl Default for WeakNormOptions {
    fn default() -> Self {
        Self {
            starts: 64,
            grid_budget: 4096,
            seed: 0,
        }
    }
}

/// Enclosure of the weak `ℓ_1` norm `sup_{‖φ‖' <= 1} Σ_i |φ(x_i)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakNorm {
    pub lower: f64,
    pub upper: f64,
    /// Unimodular weights `θ` attaining `lower = ‖Σ θ_i x_i‖`.
    pub phases: Vec<Complex64>,
}

pub fn weak_ell1_norm(space: &AtomicFunctionSpace, xs: &[Vec<Complex64>]) -> Result<WeakNorm> {
    weak_ell1_norm_with(space, xs, &WeakNormOptions::default())
}

/// The weak `ℓ_1` norm equals `max_{|θ_i| = 1} ‖Σ θ_i x_i‖`. The lower bound
/// comes from alternating phase alignment and norming functionals, the upper
/// bound is the smallest of `Σ‖x_i‖`, `√N σ_max` on Hilbert models, and a
/// phase-grid maximum inflated by the grid spacing.
pub fn weak_ell1_norm_with(
    space: &AtomicFunctionSpace,
    xs: &[Vec<Complex64>],
    options: &WeakNormOptions,
) -> Result<WeakNorm> {
    if xs.is_empty() {
        return Err(invalid("xs", "need at least one vector"));
    }
    for x in xs {
        ensure_dim(space.atoms(), x.len())?;
    }
    let norms: Vec<f64> = xs.iter().map(|x| space.norm_unchecked(x)).collect();
    let d = space.atoms();
    let combine = |theta: &[Complex64]| {
        let mut y = vec![ZERO; d];
        for (t, x) in theta.iter().zip(xs) {
            for (acc, v) in y.iter_mut().zip(x) {
                *acc += t * v;
            }
        }
        y
    };

    // lower bound: alternating ascent from several starts
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut best = (0.0f64, vec![Complex64::new(1.0, 0.0); xs.len()]);
    for start in 0..options.starts.max(1) {
        let mut theta: Vec<Complex64> = if start == 0 {
            vec![Complex64::new(1.0, 0.0); xs.len()]
        } else {
            (0..xs.len()).map(|_| unit_phase(&mut rng)).collect()
        };
        let mut value = space.norm_unchecked(&combine(&theta));
        for _ in 0..200 {
            let y = combine(&theta);
            let phi = space.norming_functional(&y)?;
            let next: Vec<Complex64> = xs
                .iter()
                .map(|x| {
                    let s: Complex64 = phi.iter().zip(x).map(|(a, b)| a * b).sum();
                    if s.norm() > 0.0 { s.conj() / s.norm() } else { Complex64::new(1.0, 0.0) }
                })
                .collect();
            let next_value = space.norm_unchecked(&combine(&next));
            if next_value <= value * (1.0 + 1e-15) {
                if next_value > value {
                    value = next_value;
                    theta = next;
                }
                break;
            }
            value = next_value;
            theta = next;
        }
        if value > best.0 {
            best = (value, theta);
        }
    }

    let mut upper: f64 = norms.iter().sum();
    if space.is_hilbert() {
        upper = upper.min((xs.len() as f64).sqrt() * gram_sigma_max(space, xs));
    }
    if let Some(grid) = phase_grid_upper(space, xs, &norms, options.grid_budget) {
        upper = upper.min(grid);
    }
    // the lower bound is an attained value, the upper bounds are enclosures
    Ok(WeakNorm {
        lower: best.0.min(upper),
        upper: upper.max(best.0),
        phases: best.1,
    })
}

/// `σ_max` of the synthesis map `θ ↦ Σ θ_i x_i` into a weighted `ℓ_2` model.
fn gram_sigma_max(space: &AtomicFunctionSpace, xs: &[Vec<Complex64>]) -> f64 {
    let source = AtomicFunctionSpace::unit(xs.len(), 2.0).expect("nonempty");
    let matrix = (0..space.atoms())
        .flat_map(|r| xs.iter().map(move |x| x[r]))
        .collect();
    let synth = LinearOperator::new(source, space.clone(), matrix).expect("consistent shapes");
    hilbert_operator_norm(&synth)
}

fn phase_grid_upper(
    space: &AtomicFunctionSpace,
    xs: &[Vec<Complex64>],
    norms: &[f64],
    budget: usize,
) -> Option<f64> {
    let free = xs.len() - 1;
    if free == 0 {
        return Some(norms[0]);
    }
    let per_axis = (budget as f64).powf(1.0 / free as f64).floor() as usize;
    if per_axis < 4 {
        return None;
    }
    let roots: Vec<Complex64> = (0..per_axis)
        .map(|g| Complex64::from_polar(1.0, std::f64::consts::TAU * g as f64 / per_axis as f64))
        .collect();
    let d = space.atoms();
    let mut digits = vec![0usize; free];
    let mut grid_max = 0.0f64;
    loop {
        let mut y = xs[0].clone();
        for (digit, x) in digits.iter().zip(&xs[1..]) {
            for (acc, v) in y.iter_mut().zip(x) {
                *acc += roots[*digit] * v;
            }
        }
        debug_assert_eq!(y.len(), d);
        grid_max = grid_max.max(space.norm_unchecked(&y));
        let Some(pos) = digits.iter().rposition(|&g| g + 1 < per_axis) else {
            break;
        };
        digits[pos] += 1;
        digits[pos + 1..].iter_mut().for_each(|g| *g = 0);
    }
    // nearest grid phase is within π/K in angle, hence in modulus
    let spacing = std::f64::consts::PI / per_axis as f64;
    Some(grid_max + spacing * norms[1..].iter().sum::<f64>())
}

/// Interval estimate of an `(r,1)`-summing norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SummingEstimate {
    pub r: f64,
    pub lower: f64,
    pub upper: Option<f64>,
    /// Sequence attaining `lower` (empty if `lower = 0`).
    pub witness: Vec<Vec<Complex64>>,
}

fn trial_stream(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Lower bound for `π_{(r,1)}(v)`: best ratio `(Σ‖v x_i‖^r)^{1/r} / ‖(x_i)‖_{w,1}`
/// over random sequences, using the upper end of the weak-norm enclosure.
///
/// Trial `t` draws its vectors lazily from its own substream and every prefix
/// up to `seq_len_cap` is scored, so the result is monotone in both `trials`
/// and `seq_len_cap`.
pub fn summing_norm_lower(
    v: &LinearOperator,
    r: f64,
    seq_len_cap: usize,
    trials: usize,
    seed: u64,
) -> Result<SummingEstimate> {
    if !(r >= 1.0) {
        return Err(invalid("r", format!("must be at least 1, got {r}")));
    }
    let s = v.source();
    let d = s.atoms();
    let options = WeakNormOptions {
        starts: 8,
        ..WeakNormOptions::default()
    };
    let mut best = (0.0f64, Vec::new());
    for trial in 0..trials as u64 {
        let mut rng = trial_stream(seed, trial);
        let mut xs: Vec<Vec<Complex64>> = Vec::new();
        let mut strong = 0.0;
        for _ in 0..seq_len_cap {
            let x: Vec<Complex64> = match trial % 3 {
                0 => (0..d).map(|_| complex_normal(&mut rng)).collect(),
                1 => {
                    let j = rng.gen_range(0..d);
                    let phase = unit_phase(&mut rng);
                    (0..d).map(|i| if i == j { phase } else { ZERO }).collect()
                }
                _ => (0..d)
                    .map(|_| if rng.gen_bool(0.5) { unit_phase(&mut rng) } else { ZERO })
                    .collect(),
            };
            strong += v.target().norm_unchecked(&v.apply_unchecked(&x)).powf(r);
            xs.push(x);
            if strong == 0.0 {
                continue;
            }
            let weak = weak_ell1_norm_with(s, &xs, &options)?.upper;
            if weak > 0.0 {
                let ratio = strong.powf(1.0 / r) / weak;
                if ratio > best.0 {
                    best = (ratio, xs.clone());
                }
            }
        }
    }
    Ok(SummingEstimate {
        r,
        lower: best.0,
        upper: summing_norm_upper(v).map(|(value, _)| value),
        witness: best.1,
    })
}

/// A sound upper bound for `π_{(r,1)}(v)` (any `r >= 1`) when one is known:
/// exact on one-atom models, Grothendieck for `ℓ_1`-type into `ℓ_2`-type.
pub fn summing_norm_upper(v: &LinearOperator) -> Option<(f64, &'static str)> {
    if v.source().atoms() == 1 && v.target().atoms() == 1 {
        return Some((operator_norm(v).value, "one-dimensional: pi equals the operator norm"));
    }
    grothendieck_upper(v)
        .ok()
        .map(|value| (value, "grothendieck"))
}

/// `K_G^ℂ ‖v‖` with the default constant.
pub fn grothendieck_upper(v: &LinearOperator) -> Result<f64> {
    grothendieck_upper_with(v, GROTHENDIECK_COMPLEX_UPPER)
}

/// Grothendieck bound `K_G ‖v‖` for `v` from an `ℓ_1`-type into an `ℓ_2`-type model;
/// it dominates `π_ρ(v)` for every `ρ >= 1`.
pub fn grothendieck_upper_with(v: &LinearOperator, kg: f64) -> Result<f64> {
    if v.source().exponent() != 1.0 || !v.target().is_hilbert() {
        return Err(Error::Unsupported(format!(
            "Grothendieck bound needs an ℓ_1 source and ℓ_2 target, got exponents {} -> {}",
            v.source().exponent(),
            v.target().exponent()
        )));
    }
    if !(kg >= 1.0) {
        return Err(invalid("kg", "Grothendieck constant must be at least 1"));
    }
    Ok(kg * operator_norm(v).value)
}
