//! Feasible sets, transition matrices and the transition-matrix catalog.
//!
//! Matrix indices are 0-based in every method except the catalog
//! constructors that name entries (`t_pair`), which take 1-based indices.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::boolmat::BoolMatrix;
use crate::error::{Error, Result};
use crate::pauli::MAX_QUBITS;
use crate::scalar::Scalar;

/// Computational basis state; bit `n-1-q` holds qubit `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub n: usize,
    pub bits: u64,
}

impl BasisState {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS || bits >> n != 0 {
            return Err(Error::BasisState(format!("{bits} on {n} qubits")));
        }
        Ok(BasisState { n, bits })
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.n)
    }
}

impl FromStr for BasisState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('|').trim_end_matches('>').trim_end_matches('⟩');
        if s.is_empty() || s.len() > MAX_QUBITS || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::BasisState(s.to_string()));
        }
        let bits = u64::from_str_radix(s, 2).map_err(|_| Error::BasisState(s.to_string()))?;
        Ok(BasisState { n: s.len(), bits })
    }
}

/// Ordered list of distinct basis states on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibleSet {
    n: usize,
    states: Vec<u64>,
}

impl FeasibleSet {
    pub fn new(n: usize, states: Vec<u64>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Scale { what: "FeasibleSet", n, cap: MAX_QUBITS });
        }
        let mut seen = HashSet::new();
        for &s in &states {
            if s >> n != 0 {
                return Err(Error::BasisState(format!("{s} on {n} qubits")));
            }
            if !seen.insert(s) {
                return Err(Error::BasisState(format!("duplicate state {s:0n$b}")));
            }
        }
        Ok(FeasibleSet { n, states })
    }

    /// Keeps the given order.
    pub fn from_strs<T: AsRef<str>>(labels: &[T]) -> Result<Self> {
        let parsed = labels
            .iter()
            .map(|l| l.as_ref().parse::<BasisState>())
            .collect::<Result<Vec<_>>>()?;
        let n = parsed.first().map(|b| b.n).ok_or_else(|| Error::BasisState(String::new()))?;
        if let Some(b) = parsed.iter().find(|b| b.n != n) {
            return Err(Error::Dimension { expected: n, got: b.n });
        }
        Self::new(n, parsed.into_iter().map(|b| b.bits).collect())
    }

    /// One bitstring per line; `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect();
        Self::from_strs(&lines)
    }

    /// Weight-1 states in increasing integer order.
    pub fn one_hot(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|j| 1u64 << j).collect())
    }

    pub fn full(n: usize) -> Result<Self> {
        if n > 20 {
            return Err(Error::Scale { what: "full feasible set", n, cap: 20 });
        }
        Self::new(n, (0..1u64 << n).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn state(&self, j: usize) -> BasisState {
        BasisState { n: self.n, bits: self.states[j] }
    }

    pub fn contains(&self, bits: u64) -> bool {
        self.states.contains(&bits)
    }

    pub fn index_of(&self, bits: u64) -> Option<usize> {
        self.states.iter().position(|&s| s == bits)
    }

    /// States outside the set, increasing.
    pub fn complement(&self) -> Vec<u64> {
        let inside: HashSet<u64> = self.states.iter().copied().collect();
        (0..1u64 << self.n).filter(|s| !inside.contains(s)).collect()
    }

    /// `new[i] = old[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_perm(perm, self.len())?;
        Self::new(self.n, perm.iter().map(|&p| self.states[p]).collect())
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|j| self.state(j).to_string()).collect()
    }
}

fn check_perm(perm: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    if perm.len() != m {
        return Err(Error::Dimension { expected: m, got: perm.len() });
    }
    for &p in perm {
        if p >= m || seen[p] {
            return Err(Error::Domain(format!("not a permutation: {perm:?}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Symmetric real matrix stored as its upper triangle (diagonal included).
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix<S = f64> {
    m: usize,
    entries: BTreeMap<(usize, usize), S>,
}

fn ordered(j: usize, k: usize) -> (usize, usize) {
    if j <= k {
        (j, k)
    } else {
        (k, j)
    }
}

impl<S: Scalar> TransitionMatrix<S> {
    pub fn zeros(m: usize) -> Self {
        TransitionMatrix { m, entries: BTreeMap::new() }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, j: usize, k: usize) -> S {
        self.entries.get(&ordered(j, k)).cloned().unwrap_or_else(S::zero)
    }

    /// Sets both `(j,k)` and `(k,j)`; a zero removes the entry.
    pub fn set(&mut self, j: usize, k: usize, v: S) -> Result<()> {
        for i in [j, k] {
            if i >= self.m {
                return Err(Error::Index { index: i + 1, size: self.m });
            }
        }
        if v.is_zero() {
            self.entries.remove(&ordered(j, k));
        } else {
            self.entries.insert(ordered(j, k), v);
        }
        Ok(())
    }

    /// Nonzero upper-triangle entries `(j, k, value)` with `j <= k`.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.entries.iter().map(|(&(j, k), v)| (j, k, v))
    }

    /// Nonzero pairs with `j < k`.
    pub fn offdiag_pairs(&self) -> Vec<(usize, usize)> {
        self.entries.keys().filter(|(j, k)| j < k).copied().collect()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn has_zero_diagonal(&self) -> bool {
        self.entries.keys().all(|(j, k)| j != k)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::Dimension { expected: self.m, got: other.m });
        }
        let mut out = self.clone();
        for (j, k, v) in other.nonzeros() {
            let sum = out.get(j, k) + v.clone();
            out.set(j, k, sum)?;
        }
        Ok(out)
    }

    /// `new[i][l] = old[perm[i]][perm[l]]`, matching `FeasibleSet::permuted`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_perm(perm, self.m)?;
        let mut inv = vec![0; self.m];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let mut out = Self::zeros(self.m);
        for (j, k, v) in self.nonzeros() {
            out.set(inv[j], inv[k], v.clone())?;
        }
        Ok(out)
    }

    /// Support graph; the diagonal is set only where `T` has diagonal entries.
    pub fn support(&self) -> BoolMatrix {
        let mut b = BoolMatrix::zeros(self.m);
        for (j, k, _) in self.nonzeros() {
            b.set(j, k);
            b.set(k, j);
        }
        b
    }

    pub fn to_dense_f64(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.m, self.m);
        for (j, k, v) in self.nonzeros() {
            d[(j, k)] = v.to_f64_lossy();
            d[(k, j)] = v.to_f64_lossy();
        }
        d
    }

    pub fn to_f64(&self) -> TransitionMatrix<f64> {
        TransitionMatrix {
            m: self.m,
            entries: self.entries.iter().map(|(k, v)| (*k, v.to_f64_lossy())).collect(),
        }
    }

    /// Constant row sum, if there is one.
    pub fn row_sum(&self) -> Option<f64> {
        let d = self.to_dense_f64();
        let sums: Vec<f64> = (0..self.m).map(|i| d.row(i).sum()).collect();
        let first = *sums.first()?;
        sums.iter().all(|s| (s - first).abs() < 1e-12).then_some(first)
    }

    pub fn to_json(&self) -> TransitionJson {
        TransitionJson {
            m: self.m,
            entries: self.nonzeros().map(|(j, k, v)| (j + 1, k + 1, v.to_f64_lossy())).collect(),
        }
    }
}

impl TransitionMatrix<f64> {
    /// Triples are 1-based; each `(j,k)` sets both mirror entries.
    pub fn from_json(j: &TransitionJson) -> Result<Self> {
        let mut t = Self::zeros(j.m);
        for &(a, b, v) in &j.entries {
            if a == 0 || b == 0 {
                return Err(Error::Index { index: 0, size: j.m });
            }
            t.set(a - 1, b - 1, v)?;
        }
        Ok(t)
    }
}

/// Wire form: `{m, entries: [[j, k, value]]}` with 1-based indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionJson {
    pub m: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

fn log2_exact(m: usize) -> Result<usize> {
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::Domain(format!("size {m} is not a power of two")));
    }
    Ok(m.trailing_zeros() as usize)
}

/// Unit entries between indices whose binaries are at Hamming distance `d`.
pub fn t_hamming<S: Scalar>(d: usize, m: usize) -> Result<TransitionMatrix<S>> {
    let w = log2_exact(m)?;
    if d == 0 || d > w {
        return Err(Error::Domain(format!("distance {d} outside 1..={w}")));
    }
    let mut t = TransitionMatrix::zeros(m);
    for j in 0..m {
        for k in j + 1..m {
            if (j ^ k).count_ones() as usize == d {
                t.set(j, k, S::one())?;
            }
        }
    }
    Ok(t)
}

pub fn t_all<S: Scalar>(m: usize) -> TransitionMatrix<S> {
    let mut t = TransitionMatrix::zeros(m);
    for j in 0..m {
        for k in j + 1..m {
            t.entries.insert((j, k), S::one());
        }
    }
    t
}

pub fn t_delta<S: Scalar>(m: usize) -> TransitionMatrix<S> {
    let mut t = TransitionMatrix::zeros(m);
    for j in 1..m {
        t.entries.insert((j - 1, j), S::one());
    }
    t
}

/// `t_delta` plus the wrap-around entry `(1, m)`.
pub fn t_delta_cyclic<S: Scalar>(m: usize) -> TransitionMatrix<S> {
    let mut t = t_delta(m);
    if m >= 2 {
        t.entries.insert((0, m - 1), S::one());
    }
    t
}

/// Single pair `T_{k↔l}`, 1-based.
pub fn t_pair<S: Scalar>(k: usize, l: usize, m: usize) -> Result<TransitionMatrix<S>> {
    if k == 0 || k >= l || l > m {
        return Err(Error::Domain(format!("pair ({k},{l}) invalid for size {m}")));
    }
    let mut t = TransitionMatrix::zeros(m);
    t.set(k - 1, l - 1, S::one())?;
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn matches(self, one_based: usize) -> bool {
        match self {
            Parity::Odd => one_based % 2 == 1,
            Parity::Even => one_based.is_multiple_of(2),
        }
    }
}

/// Entries `{j, j+d}` (1-based) of the `d`-th off-diagonal whose larger index
/// `j+d` has the given parity. The cyclic form adds wrap entries
/// `{j, j+d-m}` whose wrapped index `j+d-m` has that parity.
pub fn t_offdiag<S: Scalar>(
    d: usize,
    parity: Parity,
    cyclic: bool,
    m: usize,
) -> Result<TransitionMatrix<S>> {
    if d == 0 || d >= m {
        return Err(Error::Domain(format!("off-diagonal {d} invalid for size {m}")));
    }
    let mut t = TransitionMatrix::zeros(m);
    for j in 1..=m {
        let k = j + d;
        if k <= m {
            if parity.matches(k) {
                t.set(j - 1, k - 1, S::one())?;
            }
        } else if cyclic && parity.matches(k - m) {
            t.set(j - 1, k - m - 1, S::one())?;
        }
    }
    Ok(t)
}

/// Upper triangle and diagonal i.i.d. uniform on (0, 1], mirrored.
/// Draws come from SplitMix64 seeded with `seed`, in row-major order.
pub fn t_random(m: usize, seed: u64) -> TransitionMatrix<f64> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut t = TransitionMatrix::zeros(m);
    for j in 0..m {
        for k in j..m {
            let v = 1.0 - rng.random::<f64>();
            t.entries.insert((j, k), v);
        }
    }
    t
}

/// Sum over nonzero entries of the Hamming distance between the binaries of
/// the two 0-based indices (both triangles counted).
pub fn ham_total<S: Scalar>(t: &TransitionMatrix<S>) -> Result<u64> {
    log2_exact(t.size())?;
    Ok(t.nonzeros().map(|(j, k, _)| 2 * (j ^ k).count_ones() as u64).sum())
}

/// Outcome of an all-pairs reachability check. Pairs are 0-based `(row, col)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub valid: bool,
    pub minimal_r: Option<usize>,
    pub missing: Vec<(usize, usize)>,
}

/// True iff every pair is joined by a support path of length at most `r_max`.
pub fn provides_transitions<S: Scalar>(t: &TransitionMatrix<S>, r_max: usize) -> TransitionReport {
    let m = t.size();
    let mut adj = vec![Vec::new(); m];
    for (j, k, _) in t.nonzeros() {
        if j != k {
            adj[j].push(k);
            adj[k].push(j);
        }
    }
    let mut worst = 0usize;
    let mut missing = Vec::new();
    for src in 0..m {
        let mut dist = vec![usize::MAX; m];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for (dst, &d) in dist.iter().enumerate() {
            if d == usize::MAX || d > r_max {
                missing.push((src, dst));
            } else {
                worst = worst.max(d);
            }
        }
    }
    let valid = missing.is_empty();
    TransitionReport { valid, minimal_r: valid.then_some(worst.max(1)), missing }
}

/// Dense-power oracle: off-diagonal `(T^r)_{jk}` above `tol` for some `r <= r_max`.
pub fn provides_transitions_numeric<S: Scalar>(
    t: &TransitionMatrix<S>,
    r_max: usize,
    tol: f64,
) -> bool {
    let m = t.size();
    let base = t.to_dense_f64();
    let mut seen = DMatrix::<bool>::from_fn(m, m, |i, j| i == j);
    let mut power = DMatrix::<f64>::identity(m, m);
    for _ in 0..r_max {
        power = &power * &base;
        for i in 0..m {
            for j in 0..m {
                if power[(i, j)].abs() > tol {
                    seen[(i, j)] = true;
                }
            }
        }
        if seen.iter().all(|&b| b) {
            return true;
        }
    }
    seen.iter().all(|&b| b)
}
