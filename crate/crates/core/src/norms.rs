//! Norms of homogeneous polynomials: coefficient `ℓ_p` norms, mixed (Blei)
//! norms of coefficient arrays, sup-norm enclosures on the polydisc and
//! Monte Carlo `L^p` norms on the torus.
//!
//! A `target` of `None` means scalar coefficients (`coeff_dim == 1`, modulus);
//! otherwise coefficients are measured in the given space.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{iter_full, SubsetPair};
use crate::error::{ensure_dim, invalid, Error, Result};
use crate::polynomials::{power_table, unit_phase, FullArray, HomogeneousPolynomial};
use crate::spaces::AtomicFunctionSpace;

/// Phase resolution of the 1-D scans in [`supnorm_lower`].
pub const SCAN_POINTS: usize = 1024;
const REFINEMENTS: usize = 3;
const MAX_SWEEPS: usize = 30;

/// Largest phase grid [`supnorm_upper`] accepts (`grid_per_axis^n`).
pub const GRID_LIMIT: f64 = 1e8;

/// Default number of independent sampling shards.
pub const DEFAULT_SHARDS: usize = 8;

fn check_target(p: &HomogeneousPolynomial, target: Option<&AtomicFunctionSpace>) -> Result<()> {
    ensure_dim(target.map_or(1, AtomicFunctionSpace::atoms), p.coeff_dim())
}

pub(crate) fn value_norm(target: Option<&AtomicFunctionSpace>, v: &[Complex64]) -> f64 {
    match target {
        None => v[0].norm(),
        Some(space) => space.norm_unchecked(v),
    }
}

fn l2_of(values: impl Iterator<Item = f64>) -> f64 {
    values.map(|x| x * x).sum::<f64>().sqrt()
}

/// `(Σ_α ‖c_α‖^p)^{1/p}`; `p = ∞` gives the largest coefficient norm.
pub fn coeff_lp_norm(
    poly: &HomogeneousPolynomial,
    p: f64,
    target: Option<&AtomicFunctionSpace>,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid("p", format!("must be at least 1, got {p}")));
    }
    check_target(poly, target)?;
    let norms = poly.coefficients().map(|c| value_norm(target, c));
    Ok(if p == f64::INFINITY {
        norms.fold(0.0, f64::max)
    } else if p == 1.0 {
        norms.sum()
    } else if p == 2.0 {
        l2_of(norms)
    } else {
        let norms: Vec<f64> = norms.collect();
        let scale = norms.iter().copied().fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            scale * norms.iter().map(|x| (x / scale).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    })
}

/// `(Σ_{i_S} (Σ_{i_Ŝ} |a_i|^q)^{s/q})^{1/s}`, with `i_S` the entries of `i`
/// at the positions in `pair.subset()`.
pub fn mixed_norm(a: &FullArray, pair: &SubsetPair, s: f64, q: f64) -> Result<f64> {
    ensure_dim(a.m(), pair.universe())?;
    if !(s >= 1.0 && s <= q) || !q.is_finite() {
        return Err(invalid("s", format!("need 1 <= s <= q < ∞, got s = {s}, q = {q}")));
    }
    let n = a.n();
    let mut inner = vec![0.0f64; n.pow(pair.k() as u32)];
    for (i, value) in iter_full(a.m(), a.n()).zip(a.values()) {
        let key = pair
            .subset()
            .iter()
            .fold(0usize, |acc, &pos| acc * n + (i[pos - 1] - 1));
        inner[key] += value.norm().powf(q);
    }
    let outer: f64 = inner.iter().map(|x| x.powf(s / q)).sum();
    Ok(outer.powf(1.0 / s))
}

/// Two-sided estimate of a norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lower: f64,
    pub upper: f64,
    pub method: String,
    /// Polynomial evaluations spent.
    pub budget: u64,
}

impl Enclosure {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Result of the sup-norm ascent: `value = ‖P(point)‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupSearch {
    pub value: f64,
    pub point: Vec<Complex64>,
}

/// Lower bound for `‖P‖_{𝔻ⁿ}` from `budget` starts (the first at `(1,…,1)`,
/// the rest uniform on the torus) each followed by coordinatewise phase ascent.
pub fn supnorm_lower(
    poly: &HomogeneousPolynomial,
    target: Option<&AtomicFunctionSpace>,
    budget: usize,
    seed: u64,
) -> Result<SupSearch> {
    check_target(poly, target)?;
    if budget == 0 {
        return Err(invalid("budget", "must be at least 1"));
    }
    let n = poly.n();
    let results: Vec<SupSearch> = (0..budget as u64)
        .into_par_iter()
        .map(|start| {
            let z: Vec<Complex64> = if start == 0 {
                vec![Complex64::new(1.0, 0.0); n]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(start);
                (0..n).map(|_| unit_phase(&mut rng)).collect()
            };
            coordinate_ascent(poly, target, z)
        })
        .collect();
    Ok(results
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("budget >= 1"))
}

fn coordinate_ascent(
    poly: &HomogeneousPolynomial,
    target: Option<&AtomicFunctionSpace>,
    mut z: Vec<Complex64>,
) -> SupSearch {
    let norm_at = |z: &[Complex64]| value_norm(target, &poly.evaluate(z).expect("dimension checked"));
    let mut value = norm_at(&z);
    for _ in 0..MAX_SWEEPS {
        let before = value;
        for j in 0..poly.n() {
            let b = poly.restrict(&z, j).expect("dimension checked");
            let (theta, v) = maximize_trig(&b, target);
            if v > value {
                z[j] = Complex64::from_polar(1.0, theta);
                value = norm_at(&z);
            }
        }
        if value <= before * (1.0 + 1e-14) {
            break;
        }
    }
    SupSearch { value, point: z }
}

/// Maximizes `θ ↦ ‖Σ_e B_e e^{ieθ}‖` by a dense scan and parabolic refinement.
fn maximize_trig(b: &[Vec<Complex64>], target: Option<&AtomicFunctionSpace>) -> (f64, f64) {
    let dim = b[0].len();
    let mut buffer = vec![Complex64::new(0.0, 0.0); dim];
    let mut eval = |theta: f64| {
        buffer.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        let w = Complex64::from_polar(1.0, theta);
        let mut power = Complex64::new(1.0, 0.0);
        for coeff in b {
            for (acc, c) in buffer.iter_mut().zip(coeff) {
                *acc += c * power;
            }
            power *= w;
        }
        value_norm(target, &buffer)
    };
    let step = TAU / SCAN_POINTS as f64;
    let (mut theta, mut best) = (0..SCAN_POINTS)
        .map(|g| {
            let t = g as f64 * step;
            (t, eval(t))
        })
        .fold((0.0, f64::NEG_INFINITY), |a, c| if c.1 > a.1 { c } else { a });
    let mut delta = step;
    for _ in 0..REFINEMENTS {
        let centre = theta;
        let (left, right) = (eval(centre - delta), eval(centre + delta));
        let curvature = left - 2.0 * best + right;
        let mut candidates = vec![(centre - delta, left), (centre + delta, right)];
        if curvature < 0.0 {
            let shift = 0.5 * delta * (left - right) / curvature;
            let t = centre + shift.clamp(-delta, delta);
            candidates.push((t, eval(t)));
        }
        for (t, v) in candidates {
            if v > best {
                theta = t;
                best = v;
            }
        }
        delta /= 8.0;
    }
    (theta, best)
}

/// Upper bound for `‖P‖_{𝔻ⁿ}`; see [`supnorm_upper_detail`].
pub fn supnorm_upper(
    poly: &HomogeneousPolynomial,
    target: Option<&AtomicFunctionSpace>,
    grid_per_axis: usize,
) -> Result<f64> {
    Ok(supnorm_upper_detail(poly, target, grid_per_axis)?.upper)
}

/// Certified upper bound: the smaller of `S = Σ‖c_α‖` and a phase-grid
/// maximum plus a Taylor remainder.
///
/// `|P|` is invariant under the diagonal rotation `z ↦ e^{iφ} z`, so the
/// coordinate with the largest Lipschitz constant `L_j = Σ α_j ‖c_α‖` is held at
/// phase 0 and only the others are gridded. With `h = 2π / grid_per_axis`,
/// every torus point lies within `h/2` per free coordinate of a grid point,
/// giving the first-order inflation `(h/2) Σ_{free} L_j <= m S h / 2`. For
/// scalar and weighted-`ℓ_2` targets `‖P‖²` is smooth with zero gradient at
/// the maximum, so additionally `sup² <= grid² + δ₁² + S δ₂` where
/// `δ₁ = (h/2) Σ_{free} L_j` and `δ₂ = (h/2)² Σ_α ‖c_α‖ (Σ_{free} α_j)²`.
///
/// The result is inflated by a bound on the floating-point error of the
/// evaluations and sums involved, so computed values `‖P(z)‖` never exceed it.
pub fn supnorm_upper_detail(
    poly: &HomogeneousPolynomial,
    target: Option<&AtomicFunctionSpace>,
    grid_per_axis: usize,
) -> Result<Enclosure> {
    check_target(poly, target)?;
    if grid_per_axis == 0 {
        return Err(invalid("grid_per_axis", "must be at least 1"));
    }
    let n = poly.n();
    let required = (grid_per_axis as f64).powi(n as i32);
    if required > GRID_LIMIT {
        return Err(Error::TooExpensive {
            what: "sup-norm phase grid",
            required,
            limit: GRID_LIMIT,
        });
    }
    let norms: Vec<f64> = poly.coefficients().map(|c| value_norm(target, c)).collect();
    let total: f64 = norms.iter().sum();
    let mut lipschitz = vec![0.0f64; n];
    for (alpha, c) in poly.exponents().iter().zip(&norms) {
        for (l, &e) in lipschitz.iter_mut().zip(alpha.exponents()) {
            *l += e as f64 * c;
        }
    }
    let fixed = (0..n)
        .max_by(|&a, &b| lipschitz[a].total_cmp(&lipschitz[b]).then(b.cmp(&a)))
        .expect("n >= 1");
    let free: Vec<usize> = (0..n).filter(|&j| j != fixed).collect();
    let half = 0.5 * TAU / grid_per_axis as f64;
    let delta1 = half * free.iter().map(|&j| lipschitz[j]).sum::<f64>();
    let delta2 = half
        * half
        * poly
            .exponents()
            .iter()
            .zip(&norms)
            .map(|(alpha, c)| {
                let d: f64 = free.iter().map(|&j| alpha.exponents()[j] as f64).sum();
                c * d * d
            })
            .sum::<f64>();

    let roots: Vec<Complex64> = (0..grid_per_axis)
        .map(|g| Complex64::from_polar(1.0, TAU * g as f64 / grid_per_axis as f64))
        .collect();
    let points = grid_per_axis.pow(free.len() as u32);
    let grid_max = (0..points)
        .into_par_iter()
        .map_init(
            || vec![Complex64::new(1.0, 0.0); n],
            |z, mut index| {
                for &j in free.iter().rev() {
                    z[j] = roots[index % grid_per_axis];
                    index /= grid_per_axis;
                }
                value_norm(target, &evaluate_fast(poly, z))
            },
        )
        .reduce(|| 0.0, f64::max);

    let rounding = rounding_allowance(poly, total);
    let mut upper = total;
    let mut method = "coefficient-sum";
    let first_order = grid_max + delta1;
    if first_order < upper {
        upper = first_order;
        method = "grid+lipschitz";
    }
    if target.is_none_or(AtomicFunctionSpace::is_hilbert) {
        let second_order = (grid_max * grid_max + delta1 * delta1 + total * delta2).sqrt();
        if second_order < upper {
            upper = second_order;
            method = "grid+taylor";
        }
    }
    upper += rounding;
    Ok(Enclosure {
        lower: grid_max.min(upper),
        upper,
        method: method.to_string(),
        budget: points as u64,
    })
}

/// Generous bound on the floating-point error of evaluating `P` or summing
/// its coefficient norms, relative to `S = Σ‖c_α‖`.
fn rounding_allowance(poly: &HomogeneousPolynomial, total: f64) -> f64 {
    8.0 * (poly.m() + poly.n() + poly.len() + 4) as f64 * f64::EPSILON * total
}

fn evaluate_fast(poly: &HomogeneousPolynomial, z: &[Complex64]) -> Vec<Complex64> {
    let powers = power_table(z, poly.m());
    let mut out = vec![Complex64::new(0.0, 0.0); poly.coeff_dim()];
    for (alpha, c) in poly.exponents().iter().zip(poly.coefficients()) {
        let mono = alpha
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(Complex64::new(1.0, 0.0), |acc, (j, &e)| acc * powers[j][e as usize]);
        for (o, ci) in out.iter_mut().zip(c) {
            *o += ci * mono;
        }
    }
    out
}

/// Both ends of the sup norm. Falls back to the coefficient sum when the
/// phase grid would exceed [`GRID_LIMIT`].
pub fn sup_enclosure(
    poly: &HomogeneousPolynomial,
    target: Option<&AtomicFunctionSpace>,
    budget: usize,
    grid_per_axis: usize,
    seed: u64,
) -> Result<Enclosure> {
    let lower = supnorm_lower(poly, target, budget, seed)?;
    let (upper, method, spent) = match supnorm_upper_detail(poly, target, grid_per_axis) {
        Ok(e) => (e.upper, e.method, e.budget),
        Err(Error::TooExpensive { .. }) => {
            let total = coeff_lp_norm(poly, 1.0, target)?;
            (total + rounding_allowance(poly, total), "coefficient-sum".into(), 0)
        }
        Err(e) => return Err(e),
    };
    Ok(Enclosure {
        lower: lower.value.min(upper),
        upper: upper.max(lower.value),
        method,
        budget: spent + (budget * SCAN_POINTS) as u64,
    })
}

/// Sampling options for [`torus_lp_norm_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusOptions {
    pub shards: usize,
    /// Latin-hypercube phases per shard instead of i.i.d. uniform.
    pub stratified: bool,
}

impl Default for TorusOptions {
    fn default() -> Self {
        Self {
            shards: DEFAULT_SHARDS,
            stratified: false,
        }
    }
}

/// Monte Carlo estimate of `(∫_{𝕋ⁿ} ‖P‖^p dμⁿ)^{1/p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

pub fn torus_lp_norm(
    poly: &HomogeneousPolynomial,
    target: Option<&AtomicFunctionSpace>,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<TorusEstimate> {
    torus_lp_norm_with(poly, target, p, samples, seed, &TorusOptions::default())
}

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// As [`torus_lp_norm`]. Sample `i` of shard `s` comes from the ChaCha stream
/// `(seed, s)`; the standard error is the delta-method propagation of the
/// sample standard deviation of `‖P‖^p` through `x ↦ x^{1/p}`.
pub fn torus_lp_norm_with(
    poly: &HomogeneousPolynomial,
    target: Option<&AtomicFunctionSpace>,
    p: f64,
    samples: usize,
    seed: u64,
    options: &TorusOptions,
) -> Result<TorusEstimate> {
    check_target(poly, target)?;
    if !(p > 0.0 && p.is_finite()) {
        return Err(invalid("p", format!("must be positive and finite, got {p}")));
    }
    if samples < 2 {
        return Err(invalid("samples", "need at least 2"));
    }
    let shards = options.shards.clamp(1, samples);
    let n = poly.n();
    let partial: Vec<(KahanSum, KahanSum)> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let count = samples / shards + usize::from(shard < samples % shards);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard as u64);
            let strata: Option<Vec<Vec<usize>>> = options.stratified.then(|| {
                (0..n)
                    .map(|_| {
                        let mut perm: Vec<usize> = (0..count).collect();
                        perm.shuffle(&mut rng);
                        perm
                    })
                    .collect()
            });
            let (mut s1, mut s2) = (KahanSum::default(), KahanSum::default());
            let mut z = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..count {
                for (j, zj) in z.iter_mut().enumerate() {
                    let u: f64 = rng.gen();
                    let cell = strata.as_ref().map_or(u, |s| (s[j][i] as f64 + u) / count as f64);
                    *zj = Complex64::from_polar(1.0, TAU * cell);
                }
                let x = value_norm(target, &evaluate_fast(poly, &z)).powf(p);
                s1.add(x);
                s2.add(x * x);
            }
            (s1, s2)
        })
        .collect();
    let (mut s1, mut s2) = (KahanSum::default(), KahanSum::default());
    for (a, b) in partial {
        s1.add(a.sum);
        s1.add(-a.carry);
        s2.add(b.sum);
        s2.add(-b.carry);
    }
    let count = samples as f64;
    let mean = s1.sum / count;
    let variance = ((s2.sum - count * mean * mean) / (count - 1.0)).max(0.0);
    let estimate = mean.powf(1.0 / p);
    let std_error = if mean > 0.0 {
        estimate / (p * mean) * (variance / count).sqrt()
    } else {
        0.0
    };
    Ok(TorusEstimate {
        estimate,
        std_error,
        samples,
    })
}

/// Exact `L²(𝕋ⁿ)` norm by orthonormality of monomials: per atom the `ℓ_2`
/// norm of that coordinate's coefficients, then the target norm of the result.
pub fn exact_l2_torus(poly: &HomogeneousPolynomial, target: Option<&AtomicFunctionSpace>) -> Result<f64> {
    check_target(poly, target)?;
    Ok(match target {
        None => l2_of(poly.coefficients().map(|c| c[0].norm())),
        Some(space) => {
            let per_atom: Vec<f64> = (0..poly.coeff_dim())
                .map(|a| l2_of(poly.coefficients().map(|c| c[a].norm())))
                .collect();
            space.norm_of_moduli(per_atom)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::MultiIndex;
    use crate::polynomials::{random_polynomial, CoefficientLaw};

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn poly(n: usize, m: usize, terms: &[(&[u32], f64)]) -> HomogeneousPolynomial {
        let terms: Vec<(&[u32], Complex64)> = terms.iter().map(|&(a, c)| (a, Complex64::new(c, 0.0))).collect();
        HomogeneousPolynomial::from_terms(n, m, &terms).unwrap()
    }

    #[test]
    fn coefficient_norm_examples() {
        let p = poly(2, 2, &[(&[1, 1], 1.0)]);
        assert_eq!(coeff_lp_norm(&p, 4.0 / 3.0, None).unwrap(), 1.0);
        let p = poly(3, 1, &[(&[1, 0, 0], 1.0), (&[0, 1, 0], 1.0), (&[0, 0, 1], 1.0)]);
        assert_eq!(coeff_lp_norm(&p, 1.0, None).unwrap(), 3.0);
        assert!(coeff_lp_norm(&p, 0.5, None).is_err());

        let p = random_polynomial(3, 3, 1, CoefficientLaw::Gaussian, 5).unwrap();
        let max = coeff_lp_norm(&p, f64::INFINITY, None).unwrap();
        let direct = p.coefficients().map(|c| c[0].norm()).fold(0.0, f64::max);
        assert_eq!(max, direct);
        let p64 = coeff_lp_norm(&p, 64.0, None).unwrap();
        assert!(p64 >= max && p64 <= max * (p.len() as f64).powf(1.0 / 64.0) * (1.0 + 1e-12));
    }

    #[test]
    fn vector_coefficient_norms() {
        let space = AtomicFunctionSpace::new(vec![2.0, 1.0], 1.0).unwrap();
        let mut p = HomogeneousPolynomial::zero(2, 1, 2).unwrap();
        p.set_coefficient(&MultiIndex::new(vec![1, 0]).unwrap(), &[one(), one()]).unwrap();
        assert_eq!(coeff_lp_norm(&p, 1.0, Some(&space)).unwrap(), 3.0);
        assert!(coeff_lp_norm(&p, 1.0, None).is_err());
        let wrong = AtomicFunctionSpace::unit(3, 2.0).unwrap();
        assert!(coeff_lp_norm(&p, 1.0, Some(&wrong)).is_err());
    }

    #[test]
    fn mixed_norm_examples() {
        let pair = SubsetPair::new(vec![1], 2).unwrap();
        let delta = FullArray::new(2, 2, vec![one(), 0.0.into(), 0.0.into(), one()]).unwrap();
        assert_eq!(mixed_norm(&delta, &pair, 1.0, 2.0).unwrap(), 2.0);
        let zero = FullArray::new(2, 2, vec![0.0.into(); 4]).unwrap();
        assert_eq!(mixed_norm(&zero, &pair, 1.0, 2.0).unwrap(), 0.0);
        assert!(mixed_norm(&delta, &pair, 3.0, 2.0).is_err());

        let a = FullArray::random(3, 3, CoefficientLaw::Gaussian, 1).unwrap();
        let full: f64 = a.values().iter().map(|x| x.norm().powi(3)).sum::<f64>().cbrt();
        for subset in [vec![], vec![2], vec![1, 3], vec![1, 2, 3]] {
            let pair = SubsetPair::new(subset, 3).unwrap();
            let got = mixed_norm(&a, &pair, 3.0, 3.0).unwrap();
            assert!((got - full).abs() < 1e-12 * full);
        }
    }

    #[test]
    fn mixed_norm_with_empty_complement_is_ell_s() {
        let a = FullArray::random(2, 3, CoefficientLaw::Gaussian, 2).unwrap();
        let pair = SubsetPair::new(vec![1, 2], 2).unwrap();
        let want: f64 = a.values().iter().map(|x| x.norm()).sum();
        assert!((mixed_norm(&a, &pair, 1.0, 2.0).unwrap() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn sup_norm_examples() {
        let p = poly(2, 2, &[(&[1, 1], 1.0)]);
        assert!((supnorm_lower(&p, None, 4, 0).unwrap().value - 1.0).abs() < 1e-12);
        let upper = supnorm_upper(&p, None, 16).unwrap();
        assert!(upper >= 1.0 && upper - 1.0 < 1e-12);

        let p = poly(2, 1, &[(&[1, 0], 1.0), (&[0, 1], 1.0)]);
        let upper = supnorm_upper(&p, None, 16).unwrap();
        assert!(upper >= 2.0 && upper - 2.0 < 1e-12);

        let p = poly(2, 2, &[(&[2, 0], 1.0), (&[0, 2], -1.0)]);
        let lower = supnorm_lower(&p, None, 1, 0).unwrap();
        assert!((lower.value - 2.0).abs() < 1e-9, "{}", lower.value);

        let p = poly(3, 3, &[(&[3, 0, 0], 0.5), (&[1, 1, 1], 2.0), (&[0, 1, 2], 1.25)]);
        let e = sup_enclosure(&p, None, 1, 8, 0).unwrap();
        assert!((e.lower - 3.75).abs() < 1e-9 && (e.upper - 3.75).abs() < 1e-9);
    }

    #[test]
    fn grid_guard() {
        let p = poly(5, 1, &[(&[1, 0, 0, 0, 0], 1.0)]);
        assert!(matches!(supnorm_upper(&p, None, 100), Err(Error::TooExpensive { .. })));
        assert!(sup_enclosure(&p, None, 2, 100, 0).is_ok());
    }

    #[test]
    fn enclosures_are_ordered_on_random_polynomials() {
        let space = AtomicFunctionSpace::new(vec![1.0, 0.5], 1.0).unwrap();
        let hilbert = AtomicFunctionSpace::new(vec![1.0, 3.0], 2.0).unwrap();
        for seed in 0..120u64 {
            let n = 2 + (seed % 2) as usize;
            let m = 1 + (seed % 3) as usize;
            let law = [CoefficientLaw::Gaussian, CoefficientLaw::Steinhaus, CoefficientLaw::UnimodularSparse][seed as usize % 3];
            let (dim, target) = match seed % 3 {
                0 => (1, None),
                1 => (2, Some(&space)),
                _ => (2, Some(&hilbert)),
            };
            let p = random_polynomial(n, m, dim, law, seed).unwrap();
            let lower = supnorm_lower(&p, target, 3, seed).unwrap().value;
            let upper = supnorm_upper(&p, target, 24).unwrap();
            assert!(lower <= upper * (1.0 + 1e-12), "seed {seed}: {lower} > {upper}");
        }
    }

    #[test]
    fn torus_norm_examples() {
        let p = poly(1, 3, &[(&[3], 2.5)]);
        for &q in &[0.5, 1.0, 4.0] {
            let e = torus_lp_norm(&p, None, q, 100, 1).unwrap();
            assert!((e.estimate - 2.5).abs() < 1e-12 && e.std_error < 1e-12);
        }
        let p = poly(2, 1, &[(&[1, 0], 1.0), (&[0, 1], 1.0)]);
        let e = torus_lp_norm(&p, None, 2.0, 20_000, 3).unwrap();
        assert!((e.estimate - 2f64.sqrt()).abs() <= 3.0 * e.std_error);
        assert_eq!(exact_l2_torus(&p, None).unwrap(), 2f64.sqrt());
        assert_eq!(exact_l2_torus(&poly(2, 2, &[(&[1, 1], 1.0)]), None).unwrap(), 1.0);
        assert!(torus_lp_norm(&p, None, 2.0, 1, 0).is_err());
    }

    #[test]
    fn torus_norm_is_reproducible_and_matches_exact_l2() {
        for seed in 0..5u64 {
            let p = random_polynomial(3, 2, 1, CoefficientLaw::Gaussian, seed).unwrap();
            let a = torus_lp_norm(&p, None, 2.0, 20_000, seed).unwrap();
            assert_eq!(a, torus_lp_norm(&p, None, 2.0, 20_000, seed).unwrap());
            let exact = exact_l2_torus(&p, None).unwrap();
            assert_eq!(exact, coeff_lp_norm(&p, 2.0, None).unwrap());
            assert!((a.estimate - exact).abs() <= 3.0 * a.std_error, "seed {seed}");
            let s = torus_lp_norm_with(
                &p,
                None,
                2.0,
                20_000,
                seed,
                &TorusOptions { shards: 4, stratified: true },
            )
            .unwrap();
            assert!((s.estimate - exact).abs() <= 4.0 * s.std_error);
        }
    }

    #[test]
    fn vector_exact_l2() {
        let space = AtomicFunctionSpace::new(vec![1.0, 4.0], 1.0).unwrap();
        let mut p = HomogeneousPolynomial::zero(2, 1, 2).unwrap();
        p.set_coefficient(&MultiIndex::new(vec![1, 0]).unwrap(), &[Complex64::new(3.0, 0.0), one()]).unwrap();
        p.set_coefficient(&MultiIndex::new(vec![0, 1]).unwrap(), &[Complex64::new(0.0, 4.0), 0.0.into()]).unwrap();
        // atom 0: √(9 + 16) = 5, atom 1: 1
        assert_eq!(exact_l2_torus(&p, Some(&space)).unwrap(), 5.0 + 4.0);
        let e = torus_lp_norm(&p, Some(&space), 2.0, 40_000, 0).unwrap();
        assert!(e.estimate > 0.0 && e.std_error > 0.0);
    }
}
