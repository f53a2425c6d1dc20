//! Multi-index machinery.
//!
//! Index tuples are 1-based: an [`IndexTuple`] of degree `m` over dimension `n`
//! holds `m` entries in `1..=n`. `M(m,n)` is the set of all such tuples and
//! `J(m,n)` the nondecreasing ones. Exponent vectors ([`MultiIndex`]) are in
//! bijection with `J(m,n)`. The lexicographic order of `J(m,n)` returned by
//! [`enumerate_j`] is the storage order used by every coefficient array in the
//! crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, invalid, Error, Result};

/// An ordered tuple `(i_1, ..., i_m)` with entries in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexTuple {
    entries: Vec<usize>,
    n: usize,
}

impl IndexTuple {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "dimension must be positive"));
        }
        if let Some(bad) = entries.iter().find(|&&e| e == 0 || e > n) {
            return Err(invalid("entries", format!("entry {bad} outside 1..={n}")));
        }
        Ok(Self { entries, n })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Degree `m` (number of entries).
    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn is_canonical(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }

    /// The sorted representative of the permutation class, a member of `J(m,n)`.
    pub fn canonical(&self) -> IndexTuple {
        let mut entries = self.entries.clone();
        entries.sort_unstable();
        IndexTuple { entries, n: self.n }
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (pos, e) in self.entries.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Exponent vector `alpha = (alpha_1, ..., alpha_n)` with `|alpha| = m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    exponents: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(invalid("exponents", "dimension must be positive"));
        }
        Ok(Self { exponents })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn dimension(&self) -> usize {
        self.exponents.len()
    }
}

/// A `k`-subset `S` of the positions `{1, ..., m}` together with its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsetPair {
    subset: Vec<usize>,
    complement: Vec<usize>,
}

impl SubsetPair {
    /// Builds the pair from a subset of `{1, ..., m}` (any order, no repeats).
    pub fn new(mut subset: Vec<usize>, m: usize) -> Result<Self> {
        subset.sort_unstable();
        if subset.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("subset", "repeated position"));
        }
        if subset.iter().any(|&s| s == 0 || s > m) {
            return Err(invalid("subset", format!("position outside 1..={m}")));
        }
        let complement = (1..=m).filter(|p| subset.binary_search(p).is_err()).collect();
        Ok(Self { subset, complement })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Size of the universe `m`.
    pub fn universe(&self) -> usize {
        self.subset.len() + self.complement.len()
    }

    /// `k = |S|`.
    pub fn k(&self) -> usize {
        self.subset.len()
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as u64
}

fn check_sizes(m: usize, n: usize) -> Result<()> {
    if m == 0 {
        return Err(invalid("m", "degree must be at least 1"));
    }
    if n == 0 {
        return Err(invalid("n", "dimension must be at least 1"));
    }
    Ok(())
}

/// Number of elements of `J(m,n)`, i.e. `binomial(n+m-1, m)`.
pub fn count_j(m: usize, n: usize) -> usize {
    binomial((n + m - 1) as u64, m as u64) as usize
}

/// All nondecreasing tuples of `J(m,n)` in lexicographic order.
pub fn enumerate_j(m: usize, n: usize) -> Result<Vec<IndexTuple>> {
    check_sizes(m, n)?;
    let mut out = Vec::with_capacity(count_j(m, n));
    let mut current = vec![1usize; m];
    loop {
        out.push(IndexTuple {
            entries: current.clone(),
            n,
        });
        // rightmost position that can still grow
        let Some(pos) = (0..m).rev().find(|&p| current[p] < n) else {
            break;
        };
        let next = current[pos] + 1;
        for slot in &mut current[pos..] {
            *slot = next;
        }
    }
    Ok(out)
}

/// Iterator over the full index set `M(m,n)` in lexicographic order, i.e.
/// row-major order with the first position most significant.
#[derive(Debug, Clone)]
pub struct FullIndexIter {
    current: Option<Vec<usize>>,
    n: usize,
}

impl Iterator for FullIndexIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        match (0..cur.len()).rev().find(|&p| cur[p] < self.n) {
            Some(pos) => {
                cur[pos] += 1;
                for slot in &mut cur[pos + 1..] {
                    *slot = 1;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}

/// Lexicographic iteration of `M(m,n)`. `m = 0` yields the single empty tuple.
pub fn iter_full(m: usize, n: usize) -> FullIndexIter {
    FullIndexIter {
        current: if n == 0 { None } else { Some(vec![1; m]) },
        n,
    }
}

/// Row-major offset of an index tuple of `M(m,n)` (entries 1-based).
pub fn full_offset(entries: &[usize], n: usize) -> usize {
    entries.iter().fold(0, |acc, &e| acc * n + (e - 1))
}

/// Position of a nondecreasing tuple inside the lexicographic order of `J(m,n)`.
pub fn rank_j(entries: &[usize], n: usize) -> usize {
    let m = entries.len();
    let mut rank = 0usize;
    let mut low = 1usize;
    for (p, &v) in entries.iter().enumerate() {
        let rest = m - p - 1;
        for u in low..v {
            // tuples with this prefix, value u here, remaining entries in u..=n
            rank += binomial((n - u + rest) as u64, rest as u64) as usize;
        }
        low = v;
    }
    rank
}

/// Number of distinct rearrangements of `i`, i.e. `m! / (m_1! ... m_n!)`.
///
/// Computed as a product of binomials so intermediate values never exceed the
/// result; exact for every result that fits in `u64`.
pub fn multiplicity(i: &IndexTuple) -> u64 {
    multinomial(&occurrences(i.entries(), i.dimension()))
}

fn occurrences(entries: &[usize], n: usize) -> Vec<u32> {
    let mut counts = vec![0u32; n];
    for &e in entries {
        counts[e - 1] += 1;
    }
    counts
}

/// Multinomial coefficient `(sum k_j)! / prod k_j!`.
pub fn multinomial(counts: &[u32]) -> u64 {
    let mut total = 0u64;
    let mut acc = 1u64;
    for &c in counts {
        total += c as u64;
        acc *= binomial(total, c as u64);
    }
    acc
}

/// Exponent vector of the monomial `z_{i_1} ... z_{i_m}`.
pub fn alpha_of(i: &IndexTuple) -> MultiIndex {
    MultiIndex {
        exponents: occurrences(i.entries(), i.dimension()),
    }
}

/// Canonical (nondecreasing) tuple of an exponent vector.
pub fn tuple_of(alpha: &MultiIndex) -> Result<IndexTuple> {
    if alpha.degree() == 0 {
        return Err(invalid("alpha", "degree must be at least 1"));
    }
    let entries = alpha
        .exponents()
        .iter()
        .enumerate()
        .flat_map(|(j, &e)| std::iter::repeat_n(j + 1, e as usize))
        .collect();
    Ok(IndexTuple {
        entries,
        n: alpha.dimension(),
    })
}

/// Like [`tuple_of`] but validates the expected degree and dimension.
pub fn tuple_of_checked(alpha: &MultiIndex, m: usize, n: usize) -> Result<IndexTuple> {
    ensure_dim(n, alpha.dimension())?;
    if alpha.degree() != m {
        return Err(invalid(
            "alpha",
            format!("|alpha| = {} but degree is {m}", alpha.degree()),
        ));
    }
    tuple_of(alpha)
}

/// All `binomial(m,k)` subsets of size `k` of `{1,...,m}`, lexicographically.
pub fn enumerate_subsets(m: usize, k: usize) -> Result<Vec<SubsetPair>> {
    if m == 0 {
        return Err(invalid("m", "must be at least 1"));
    }
    if k == 0 || k > m {
        return Err(invalid("k", format!("must lie in 1..={m}, got {k}")));
    }
    let mut out = Vec::with_capacity(binomial(m as u64, k as u64) as usize);
    let mut subset: Vec<usize> = (1..=k).collect();
    loop {
        out.push(SubsetPair::new(subset.clone(), m)?);
        let Some(pos) = (0..k).rev().find(|&p| subset[p] < m - (k - 1 - p)) else {
            break;
        };
        subset[pos] += 1;
        for q in pos + 1..k {
            subset[q] = subset[q - 1] + 1;
        }
    }
    Ok(out)
}

/// Splits `i` into `(i_S, i_Ŝ)`, each in increasing position order.
pub fn split(i: &IndexTuple, pair: &SubsetPair) -> Result<(IndexTuple, IndexTuple)> {
    if pair.universe() != i.degree() {
        return Err(Error::DimensionMismatch {
            expected: i.degree(),
            actual: pair.universe(),
        });
    }
    let pick = |positions: &[usize]| IndexTuple {
        entries: positions.iter().map(|&p| i.entries[p - 1]).collect(),
        n: i.n,
    };
    Ok((pick(pair.subset()), pick(pair.complement())))
}

/// Inverse of [`split`]: places the two parts back at their positions.
pub fn merge(pair: &SubsetPair, on_subset: &[usize], on_complement: &[usize]) -> Vec<usize> {
    let mut out = vec![0; pair.universe()];
    for (&p, &v) in pair.subset().iter().zip(on_subset) {
        out[p - 1] = v;
    }
    for (&p, &v) in pair.complement().iter().zip(on_complement) {
        out[p - 1] = v;
    }
    out
}
