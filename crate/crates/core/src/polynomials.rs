//! m-homogeneous polynomials on `ℂⁿ` with scalar or vector coefficients,
//! their symmetric m-linear forms, random instances and the text file format.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    alpha_of, count_j, enumerate_j, full_offset, iter_full, multiplicity, rank_j,
    tuple_of_checked, MultiIndex, SubsetPair,
};
use crate::error::{ensure_dim, invalid, Error, Result};
use crate::spaces::LinearOperator;

/// Upper limit on `n^m` for routines that walk the full index set `M(m,n)`.
pub const FULL_INDEX_LIMIT: f64 = 1e7;

pub(crate) fn guard_full(m: usize, n: usize) -> Result<()> {
    let required = (n as f64).powi(m as i32);
    if required > FULL_INDEX_LIMIT {
        return Err(Error::TooExpensive {
            what: "full index set walk",
            required,
            limit: FULL_INDEX_LIMIT,
        });
    }
    Ok(())
}

/// `P(z) = Σ_{|α|=m} c_α z^α` with `c_α ∈ ℂ^{coeff_dim}`.
///
/// Coefficient `j` (in the order of [`enumerate_j`]) occupies
/// `coefficients[j*coeff_dim .. (j+1)*coeff_dim]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPolynomial {
    n: usize,
    m: usize,
    coeff_dim: usize,
    exponents: Vec<MultiIndex>,
    coefficients: Vec<Complex64>,
}

impl HomogeneousPolynomial {
    pub fn zero(n: usize, m: usize, coeff_dim: usize) -> Result<Self> {
        if coeff_dim == 0 {
            return Err(invalid("coeff_dim", "must be at least 1"));
        }
        let exponents: Vec<MultiIndex> = enumerate_j(m, n)?.iter().map(alpha_of).collect();
        let coefficients = vec![Complex64::new(0.0, 0.0); exponents.len() * coeff_dim];
        Ok(Self {
            n,
            m,
            coeff_dim,
            exponents,
            coefficients,
        })
    }

    /// Builds a polynomial from dense coefficients in `J(m,n)` order.
    pub fn from_dense(
        n: usize,
        m: usize,
        coeff_dim: usize,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        let mut p = Self::zero(n, m, coeff_dim)?;
        ensure_dim(p.coefficients.len(), coefficients.len())?;
        p.coefficients = coefficients;
        Ok(p)
    }

    /// Scalar polynomial from `(exponents, coefficient)` terms. Repeated
    /// exponents accumulate.
    pub fn from_terms(n: usize, m: usize, terms: &[(&[u32], Complex64)]) -> Result<Self> {
        let mut p = Self::zero(n, m, 1)?;
        for (alpha, c) in terms {
            let idx = p.position(&MultiIndex::new(alpha.to_vec())?)?;
            p.coefficients[idx] += c;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeff_dim(&self) -> usize {
        self.coeff_dim
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[MultiIndex] {
        &self.exponents
    }

    pub fn dense(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Coefficient vector `c_α` of the `j`-th element of `J(m,n)`.
    pub fn coefficient(&self, j: usize) -> &[Complex64] {
        &self.coefficients[j * self.coeff_dim..(j + 1) * self.coeff_dim]
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &[Complex64]> + '_ {
        self.coefficients.chunks_exact(self.coeff_dim)
    }

    /// Storage position of `α`.
    pub fn position(&self, alpha: &MultiIndex) -> Result<usize> {
        let tuple = tuple_of_checked(alpha, self.m, self.n)?;
        Ok(rank_j(tuple.entries(), self.n))
    }

    pub fn set_coefficient(&mut self, alpha: &MultiIndex, value: &[Complex64]) -> Result<()> {
        ensure_dim(self.coeff_dim, value.len())?;
        let j = self.position(alpha)?;
        self.coefficients[j * self.coeff_dim..(j + 1) * self.coeff_dim].copy_from_slice(value);
        Ok(())
    }

    /// `P(z) = Σ c_α z^α`.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        ensure_dim(self.n, z.len())?;
        let powers = power_table(z, self.m);
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeff_dim];
        for (alpha, c) in self.exponents.iter().zip(self.coefficients()) {
            let mono = monomial(&powers, alpha);
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * mono;
            }
        }
        Ok(out)
    }

    /// Scalar evaluation; errors unless `coeff_dim == 1`.
    pub fn evaluate_scalar(&self, z: &[Complex64]) -> Result<Complex64> {
        ensure_dim(1, self.coeff_dim)?;
        Ok(self.evaluate(z)?[0])
    }

    /// Restriction to coordinate `j` with the others fixed by `z`:
    /// `P(z with z_j = w) = Σ_{e=0}^{m} B_e w^e`, returned as `B_0..=B_m`
    /// (each of length `coeff_dim`).
    pub fn restrict(&self, z: &[Complex64], j: usize) -> Result<Vec<Vec<Complex64>>> {
        ensure_dim(self.n, z.len())?;
        if j >= self.n {
            return Err(invalid("j", format!("coordinate {j} outside 0..{}", self.n)));
        }
        let powers = power_table(z, self.m);
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.coeff_dim]; self.m + 1];
        for (alpha, c) in self.exponents.iter().zip(self.coefficients()) {
            let e = alpha.exponents()[j] as usize;
            let mut mono = Complex64::new(1.0, 0.0);
            for (l, &a) in alpha.exponents().iter().enumerate() {
                if l != j && a > 0 {
                    mono *= powers[l][a as usize];
                }
            }
            for (o, ci) in out[e].iter_mut().zip(c) {
                *o += ci * mono;
            }
        }
        Ok(out)
    }

    /// The polynomial `Σ (v c_α) z^α`.
    pub fn apply_operator(&self, v: &LinearOperator) -> Result<HomogeneousPolynomial> {
        ensure_dim(v.source().atoms(), self.coeff_dim)?;
        let mut coefficients = Vec::with_capacity(self.len() * v.target().atoms());
        for c in self.coefficients() {
            coefficients.extend(v.apply(c)?);
        }
        Ok(HomogeneousPolynomial {
            n: self.n,
            m: self.m,
            coeff_dim: v.target().atoms(),
            exponents: self.exponents.clone(),
            coefficients,
        })
    }

    /// Scalar polynomial formed by the `atom`-th coordinate of every coefficient.
    pub fn component(&self, atom: usize) -> Result<HomogeneousPolynomial> {
        if atom >= self.coeff_dim {
            return Err(invalid("atom", format!("{atom} outside 0..{}", self.coeff_dim)));
        }
        Ok(HomogeneousPolynomial {
            n: self.n,
            m: self.m,
            coeff_dim: 1,
            exponents: self.exponents.clone(),
            coefficients: self.coefficients().map(|c| c[atom]).collect(),
        })
    }
}

/// `powers[j][e] = z_j^e` for `e <= m`.
pub(crate) fn power_table(z: &[Complex64], m: usize) -> Vec<Vec<Complex64>> {
    z.iter()
        .map(|&zj| {
            let mut row = Vec::with_capacity(m + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=m {
                row.push(acc);
                acc *= zj;
            }
            row
        })
        .collect()
}

fn monomial(powers: &[Vec<Complex64>], alpha: &MultiIndex) -> Complex64 {
    alpha
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .fold(Complex64::new(1.0, 0.0), |acc, (j, &e)| acc * powers[j][e as usize])
}

/// Symmetric m-linear form with values `a_i` stored on `J(m,n)` and extended
/// symmetrically to `M(m,n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricForm {
    n: usize,
    m: usize,
    coeff_dim: usize,
    values: Vec<Complex64>,
}

impl SymmetricForm {
    pub fn from_dense(n: usize, m: usize, coeff_dim: usize, values: Vec<Complex64>) -> Result<Self> {
        if coeff_dim == 0 {
            return Err(invalid("coeff_dim", "must be at least 1"));
        }
        if m == 0 || n == 0 {
            return Err(invalid("m, n", "must be at least 1"));
        }
        ensure_dim(count_j(m, n) * coeff_dim, values.len())?;
        Ok(Self {
            n,
            m,
            coeff_dim,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeff_dim(&self) -> usize {
        self.coeff_dim
    }

    pub fn dense(&self) -> &[Complex64] {
        &self.values
    }

    /// `a_i` for any `i ∈ M(m,n)` (1-based entries).
    pub fn value_at(&self, entries: &[usize]) -> &[Complex64] {
        let mut sorted = entries.to_vec();
        sorted.sort_unstable();
        let j = rank_j(&sorted, self.n);
        &self.values[j * self.coeff_dim..(j + 1) * self.coeff_dim]
    }

    /// `L(w^{(1)}, ..., w^{(m)}) = Σ_{i ∈ M(m,n)} a_i ∏_k w^{(k)}_{i_k}`.
    /// Cost `n^m`; rejected above [`FULL_INDEX_LIMIT`].
    pub fn evaluate_form(&self, w: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
        ensure_dim(self.m, w.len())?;
        for wk in w {
            ensure_dim(self.n, wk.len())?;
        }
        guard_full(self.m, self.n)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeff_dim];
        for i in iter_full(self.m, self.n) {
            let weight = i
                .iter()
                .zip(w)
                .fold(Complex64::new(1.0, 0.0), |acc, (&ik, wk)| acc * wk[ik - 1]);
            if weight == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.value_at(&i)) {
                *o += a * weight;
            }
        }
        Ok(out)
    }

    /// Substitutes `fixed` into every position of `pair.complement()`,
    /// returning the symmetric `k`-linear form in the remaining positions.
    pub fn partial_apply(&self, pair: &SubsetPair, fixed: &[Complex64]) -> Result<SymmetricForm> {
        ensure_dim(self.m, pair.universe())?;
        ensure_dim(self.n, fixed.len())?;
        let k = pair.k();
        if pair.complement().is_empty() {
            return Ok(self.clone());
        }
        guard_full(self.m, self.n)?;
        let outer = enumerate_j(k, self.n)?;
        let rest = self.m - k;
        let mut values = Vec::with_capacity(outer.len() * self.coeff_dim);
        let mut merged = vec![0usize; self.m];
        for j in &outer {
            let mut acc = vec![Complex64::new(0.0, 0.0); self.coeff_dim];
            for tail in iter_full(rest, self.n) {
                let weight = tail
                    .iter()
                    .fold(Complex64::new(1.0, 0.0), |w, &t| w * fixed[t - 1]);
                merged[..k].copy_from_slice(j.entries());
                merged[k..].copy_from_slice(&tail);
                for (o, a) in acc.iter_mut().zip(self.value_at(&merged)) {
                    *o += a * weight;
                }
            }
            values.extend(acc);
        }
        SymmetricForm::from_dense(self.n, k, self.coeff_dim, values)
    }
}

/// `a_i = c_{α(i)} / |i|` on `J(m,n)`.
pub fn polarize(p: &HomogeneousPolynomial) -> SymmetricForm {
    let tuples = enumerate_j(p.m, p.n).expect("polynomial sizes are valid");
    let mut values = Vec::with_capacity(p.coefficients.len());
    for (i, c) in tuples.iter().zip(p.coefficients()) {
        let mult = multiplicity(i) as f64;
        values.extend(c.iter().map(|x| x / mult));
    }
    SymmetricForm {
        n: p.n,
        m: p.m,
        coeff_dim: p.coeff_dim,
        values,
    }
}

/// `c_α = |i_α| a_{i_α}`.
pub fn depolarize(l: &SymmetricForm) -> HomogeneousPolynomial {
    let tuples = enumerate_j(l.m, l.n).expect("form sizes are valid");
    let mut coefficients = Vec::with_capacity(l.values.len());
    for (i, a) in tuples.iter().zip(l.values.chunks_exact(l.coeff_dim)) {
        let mult = multiplicity(i) as f64;
        coefficients.extend(a.iter().map(|x| x * mult));
    }
    HomogeneousPolynomial {
        n: l.n,
        m: l.m,
        coeff_dim: l.coeff_dim,
        exponents: tuples.iter().map(alpha_of).collect(),
        coefficients,
    }
}

/// Distribution of random coefficient entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientLaw {
    /// Independent uniform points on the unit circle.
    Steinhaus,
    /// Standard complex normal, `E|c|² = 1`.
    Gaussian,
    /// Each coefficient is zero with probability 1/2, otherwise Steinhaus.
    UnimodularSparse,
}

impl std::str::FromStr for CoefficientLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "steinhaus" => Ok(Self::Steinhaus),
            "gaussian" => Ok(Self::Gaussian),
            "unimodular-sparse" => Ok(Self::UnimodularSparse),
            other => Err(invalid("law", format!("unknown coefficient law `{other}`"))),
        }
    }
}

pub(crate) fn unit_phase<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen::<f64>() * std::f64::consts::TAU)
}

pub(crate) fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Deterministic random polynomial for a given seed.
pub fn random_polynomial(
    n: usize,
    m: usize,
    coeff_dim: usize,
    law: CoefficientLaw,
    seed: u64,
) -> Result<HomogeneousPolynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = HomogeneousPolynomial::zero(n, m, coeff_dim)?;
    for chunk in p.coefficients.chunks_exact_mut(coeff_dim) {
        let keep = match law {
            CoefficientLaw::UnimodularSparse => rng.gen_bool(0.5),
            _ => true,
        };
        for c in chunk.iter_mut() {
            *c = match law {
                CoefficientLaw::Gaussian => complex_normal(&mut rng),
                _ => unit_phase(&mut rng),
            };
            if !keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(p)
}

/// On-disk representation of a polynomial. Zero coefficients are omitted and
/// missing terms read back as zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialFile {
    pub n: usize,
    pub m: usize,
    pub coeff_dim: usize,
    pub coefficients: Vec<TermFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub alpha: Vec<u32>,
    pub value: Vec<[f64; 2]>,
}

impl From<&HomogeneousPolynomial> for PolynomialFile {
    fn from(p: &HomogeneousPolynomial) -> Self {
        let coefficients = p
            .exponents
            .iter()
            .zip(p.coefficients())
            .filter(|(_, c)| c.iter().any(|x| x.re != 0.0 || x.im != 0.0))
            .map(|(alpha, c)| TermFile {
                alpha: alpha.exponents().to_vec(),
                value: c.iter().map(|x| [x.re, x.im]).collect(),
            })
            .collect();
        PolynomialFile {
            n: p.n,
            m: p.m,
            coeff_dim: p.coeff_dim,
            coefficients,
        }
    }
}

impl TryFrom<PolynomialFile> for HomogeneousPolynomial {
    type Error = Error;

    fn try_from(file: PolynomialFile) -> Result<Self> {
        let parse_err = |location: String, message: String| Error::Parse { location, message };
        let mut p = HomogeneousPolynomial::zero(file.n, file.m, file.coeff_dim)
            .map_err(|e| parse_err("header".into(), e.to_string()))?;
        let mut seen = vec![false; p.len()];
        for (t, term) in file.coefficients.iter().enumerate() {
            let location = format!("coefficients[{t}]");
            if term.alpha.len() != file.n {
                return Err(parse_err(
                    location,
                    format!("alpha has {} entries, expected n = {}", term.alpha.len(), file.n),
                ));
            }
            let alpha = MultiIndex::new(term.alpha.clone())
                .map_err(|e| parse_err(location.clone(), e.to_string()))?;
            if alpha.degree() != file.m {
                return Err(parse_err(
                    location,
                    format!("|alpha| = {} but m = {}", alpha.degree(), file.m),
                ));
            }
            if term.value.len() != file.coeff_dim {
                return Err(parse_err(
                    location,
                    format!("value has {} entries, expected coeff_dim = {}", term.value.len(), file.coeff_dim),
                ));
            }
            let j = p.position(&alpha).map_err(|e| parse_err(location.clone(), e.to_string()))?;
            if std::mem::replace(&mut seen[j], true) {
                return Err(parse_err(location, "duplicate alpha".into()));
            }
            let value: Vec<Complex64> = term.value.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
            p.set_coefficient(&alpha, &value)?;
        }
        Ok(p)
    }
}

/// Pretty-printed JSON text of the polynomial file.
pub fn serialize(p: &HomogeneousPolynomial) -> String {
    serde_json::to_string_pretty(&PolynomialFile::from(p)).expect("plain data serializes")
}

/// Parses the polynomial file format, reporting line/column or term position on failure.
pub fn parse(text: &str) -> Result<HomogeneousPolynomial> {
    let file: PolynomialFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    HomogeneousPolynomial::try_from(file)
}

/// Dense coefficient array on the full index set `M(m,n)`, row-major with the
/// first index most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct FullArray {
    m: usize,
    n: usize,
    values: Vec<Complex64>,
}

impl FullArray {
    pub fn new(m: usize, n: usize, values: Vec<Complex64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(invalid("m, n", "must be at least 1"));
        }
        guard_full(m, n)?;
        ensure_dim(n.pow(m as u32), values.len())?;
        Ok(Self { m, n, values })
    }

    pub fn random(m: usize, n: usize, law: CoefficientLaw, seed: u64) -> Result<Self> {
        guard_full(m, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n.pow(m as u32))
            .map(|_| match law {
                CoefficientLaw::Gaussian => complex_normal(&mut rng),
                CoefficientLaw::Steinhaus => unit_phase(&mut rng),
                CoefficientLaw::UnimodularSparse => {
                    let phase = unit_phase(&mut rng);
                    if rng.gen_bool(0.5) {
                        phase
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }
            })
            .collect();
        Self::new(m, n, values)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, entries: &[usize]) -> Complex64 {
        self.values[full_offset(entries, self.n)]
    }

    /// Symmetric extension of a scalar form to `M(m,n)`.
    pub fn from_form(l: &SymmetricForm) -> Result<Self> {
        ensure_dim(1, l.coeff_dim())?;
        guard_full(l.m(), l.n())?;
        let values = iter_full(l.m(), l.n()).map(|i| l.value_at(&i)[0]).collect();
        Self::new(l.m(), l.n(), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_point(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        (0..n).map(|_| complex_normal(rng)).collect()
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn evaluate_examples() {
        let p = HomogeneousPolynomial::from_terms(2, 2, &[(&[1, 1], c(1.0, 0.0))]).unwrap();
        assert_eq!(p.evaluate_scalar(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), c(1.0, 0.0));
        let q = random_polynomial(3, 3, 2, CoefficientLaw::Gaussian, 5).unwrap();
        let zero = q.evaluate(&[c(0.0, 0.0); 3]).unwrap();
        assert!(zero.iter().all(|x| x.norm() == 0.0));
        assert!(p.evaluate(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..20 {
            let m = 1 + seed as usize % 4;
            let p = random_polynomial(3, m, 2, CoefficientLaw::Gaussian, seed).unwrap();
            let z = random_point(3, &mut rng);
            for lambda in [c(0.0, 2.0), unit_phase(&mut rng)] {
                let scaled: Vec<_> = z.iter().map(|x| x * lambda).collect();
                let lhs = p.evaluate(&scaled).unwrap();
                let rhs: Vec<_> = p
                    .evaluate(&z)
                    .unwrap()
                    .iter()
                    .map(|x| x * lambda.powi(m as i32))
                    .collect();
                let scale = rhs.iter().map(|x| x.norm()).fold(1.0, f64::max);
                assert!(max_diff(&lhs, &rhs) < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn polarize_examples() {
        let sq = HomogeneousPolynomial::from_terms(2, 2, &[(&[2, 0], c(3.0, 1.0))]).unwrap();
        assert_eq!(polarize(&sq).value_at(&[1, 1]), &[c(3.0, 1.0)]);
        let mixed = HomogeneousPolynomial::from_terms(2, 2, &[(&[1, 1], c(1.0, 0.0))]).unwrap();
        let l = polarize(&mixed);
        assert_eq!(l.value_at(&[1, 2]), &[c(0.5, 0.0)]);
        assert_eq!(l.value_at(&[2, 1]), &[c(0.5, 0.0)]);
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = vec![c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(l.evaluate_form(&[e1.clone(), e2.clone()]).unwrap(), vec![c(0.5, 0.0)]);
        assert_eq!(l.evaluate_form(&[e2, e1]).unwrap(), vec![c(0.5, 0.0)]);
    }

    #[test]
    fn polarization_round_trip_and_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..30 {
            let (n, m) = (1 + seed as usize % 4, 1 + (seed as usize / 4) % 4);
            let p = random_polynomial(n, m, 1, CoefficientLaw::Gaussian, seed).unwrap();
            let l = polarize(&p);
            let back = depolarize(&l);
            let scale = p.dense().iter().map(|x| x.norm()).fold(1.0, f64::max);
            assert!(max_diff(back.dense(), p.dense()) <= 1e-15 * scale);
            let z = random_point(n, &mut rng);
            let diag = l.evaluate_form(&vec![z.clone(); m]).unwrap();
            let direct = p.evaluate(&z).unwrap();
            assert!(max_diff(&diag, &direct) < 1e-12 * direct[0].norm().max(1.0));
        }
    }

    #[test]
    fn form_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_polynomial(3, 3, 2, CoefficientLaw::Steinhaus, 1).unwrap();
        let l = polarize(&p);
        let w: Vec<_> = (0..3).map(|_| random_point(3, &mut rng)).collect();
        let base = l.evaluate_form(&w).unwrap();
        let swapped = l.evaluate_form(&[w[1].clone(), w[0].clone(), w[2].clone()]).unwrap();
        let rotated = l.evaluate_form(&[w[2].clone(), w[0].clone(), w[1].clone()]).unwrap();
        assert!(max_diff(&base, &swapped) < 1e-12);
        assert!(max_diff(&base, &rotated) < 1e-12);
        assert!(l.evaluate_form(&w[..2]).is_err());
    }

    #[test]
    fn partial_apply_examples() {
        let p = HomogeneousPolynomial::from_terms(2, 2, &[(&[1, 1], c(1.0, 0.0))]).unwrap();
        let l = polarize(&p);
        let all = SubsetPair::new(vec![1, 2], 2).unwrap();
        assert_eq!(l.partial_apply(&all, &[c(0.0, 0.0); 2]).unwrap(), l);

        let first = SubsetPair::new(vec![1], 2).unwrap();
        let lin = l.partial_apply(&first, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(lin.m(), 1);
        let at_e1 = lin.evaluate_form(&[vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert_eq!(at_e1, vec![c(0.5, 0.0)]);
    }

    #[test]
    fn partial_apply_matches_mixed_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for case in 0..100u64 {
            let n = 1 + case as usize % 3;
            let m = 2 + (case as usize / 3) % 3;
            let k = 1 + rng.gen_range(0..m);
            let p = random_polynomial(n, m, 2, CoefficientLaw::Gaussian, case).unwrap();
            let l = polarize(&p);
            let subsets = crate::combinatorics::enumerate_subsets(m, k).unwrap();
            let pair = &subsets[rng.gen_range(0..subsets.len())];
            let fixed = random_point(n, &mut rng);
            let reduced = l.partial_apply(pair, &fixed).unwrap();
            let free: Vec<_> = (0..k).map(|_| random_point(n, &mut rng)).collect();
            let mut args = vec![Vec::new(); m];
            for (slot, w) in pair.subset().iter().zip(&free) {
                args[slot - 1] = w.clone();
            }
            for slot in pair.complement() {
                args[slot - 1] = fixed.clone();
            }
            let want = l.evaluate_form(&args).unwrap();
            let got = reduced.evaluate_form(&free).unwrap();
            let scale = want.iter().map(|x| x.norm()).fold(1.0, f64::max);
            assert!(max_diff(&want, &got) < 1e-12 * scale, "case {case}");
        }
    }

    #[test]
    fn random_laws() {
        let a = random_polynomial(3, 3, 2, CoefficientLaw::Steinhaus, 42).unwrap();
        let b = random_polynomial(3, 3, 2, CoefficientLaw::Steinhaus, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.dense().iter().all(|x| (x.norm() - 1.0).abs() < 1e-15));

        let g = random_polynomial(10_000, 1, 1, CoefficientLaw::Gaussian, 7).unwrap();
        let moduli: Vec<f64> = g.dense().iter().map(|x| x.norm_sqr()).collect();
        let mean = moduli.iter().sum::<f64>() / moduli.len() as f64;
        // |c|² ~ Exp(1): mean 1, standard deviation 1
        let sigma = 1.0 / (moduli.len() as f64).sqrt();
        assert!((mean - 1.0).abs() < 5.0 * sigma, "mean {mean}");

        let s = random_polynomial(200, 1, 1, CoefficientLaw::UnimodularSparse, 1).unwrap();
        let zeros = s.dense().iter().filter(|x| x.norm() == 0.0).count();
        assert!(zeros > 50 && zeros < 150);
        assert!(s.dense().iter().all(|x| x.norm() == 0.0 || (x.norm() - 1.0).abs() < 1e-15));
        assert!("laplace".parse::<CoefficientLaw>().is_err());
    }

    #[test]
    fn file_round_trip_and_errors() {
        let p = random_polynomial(3, 3, 2, CoefficientLaw::UnimodularSparse, 8).unwrap();
        let text = serialize(&p);
        assert_eq!(parse(&text).unwrap(), p);

        let sparse = r#"{"n": 2, "m": 2, "coeff_dim": 1,
            "coefficients": [{"alpha": [1, 1], "value": [[1.5, -2e-3]]}]}"#;
        let q = parse(sparse).unwrap();
        assert_eq!(q.coefficient(1), &[c(1.5, -2e-3)]);
        assert_eq!(q.coefficient(0), &[c(0.0, 0.0)]);

        let bad_degree = r#"{"n": 2, "m": 2, "coeff_dim": 1,
            "coefficients": [{"alpha": [2, 1], "value": [[1, 0]]}]}"#;
        match parse(bad_degree) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "coefficients[0]"),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse("{\"n\": 2,\n \"m\": }") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 2")),
            other => panic!("expected parse error, got {other:?}"),
        }
        let dup = r#"{"n": 1, "m": 1, "coeff_dim": 1,
            "coefficients": [{"alpha": [1], "value": [[1, 0]]}, {"alpha": [1], "value": [[1, 0]]}]}"#;
        assert!(parse(dup).is_err());
    }

    #[test]
    fn restriction_reconstructs_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_polynomial(3, 3, 2, CoefficientLaw::Gaussian, 2).unwrap();
        let z = random_point(3, &mut rng);
        let parts = p.restrict(&z, 1).unwrap();
        let mut total = vec![c(0.0, 0.0); 2];
        for (e, b) in parts.iter().enumerate() {
            for (t, x) in total.iter_mut().zip(b) {
                *t += x * z[1].powi(e as i32);
            }
        }
        assert!(max_diff(&total, &p.evaluate(&z).unwrap()) < 1e-12);
    }
}
