//! Cost reduction by adding pair terms over states outside the feasible set.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::cx_cost;
use crate::decompose::{pair_strings, recursive_pair, PairGroup};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::scalar::Scalar;
use crate::subspace::{BasisState, FeasibleSet, TransitionMatrix};

fn check_disjoint(b: &FeasibleSet, c: &[u64]) -> Result<()> {
    for &s in c {
        if s >> b.n_qubits() != 0 {
            return Err(Error::BasisState(format!("{s} on {} qubits", b.n_qubits())));
        }
        if b.contains(s) {
            return Err(Error::Overlap(format!("{s:0w$b}", w = b.n_qubits())));
        }
    }
    Ok(())
}

/// Strings of the pair term `(j, k)` (0-based) plus the added pair term over `c`,
/// both with weight `weight`.
pub fn augmented_pair_sum<S: Scalar>(
    b: &FeasibleSet,
    pair: (usize, usize),
    c: Option<(u64, u64)>,
    weight: &S,
) -> Result<PauliSum<S>> {
    for i in [pair.0, pair.1] {
        if i >= b.len() {
            return Err(Error::Index { index: i + 1, size: b.len() });
        }
    }
    let base = pair_strings(b, pair.0, pair.1, weight)?;
    let Some((c1, c2)) = c else { return Ok(base) };
    check_disjoint(b, &[c1, c2])?;
    if c1 == c2 {
        return Err(Error::Domain("added pair needs two distinct states".into()));
    }
    let n = b.n_qubits();
    let (added, _) = recursive_pair::<S>(BasisState::new(n, c1)?, BasisState::new(n, c2)?)?;
    base.add(&added.scaled(weight))
}

/// CX cost of the pair term `(j, k)` (0-based) with an optional added pair.
pub fn augmented_pair_cost(b: &FeasibleSet, pair: (usize, usize), c: Option<(u64, u64)>) -> Result<u64> {
    Ok(cx_cost(&augmented_pair_sum::<f64>(b, pair, c, &1.0)?))
}

/// One row of a pairwise search: the added states and the cost of every column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentationCandidate {
    pub added_states: (u64, u64),
    pub per_pair_costs: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestCell {
    pub cost: u64,
    /// `None` when no candidate beats the unaugmented term.
    pub added_states: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTable {
    pub n: usize,
    /// 0-based off-diagonal pairs, one per column.
    pub columns: Vec<(usize, usize)>,
    pub unaugmented: Vec<u64>,
    /// Sorted by total improvement, then by added-state bitstrings.
    pub rows: Vec<AugmentationCandidate>,
    pub best: Vec<BestCell>,
}

impl SearchTable {
    pub fn total_unaugmented(&self) -> u64 {
        self.unaugmented.iter().sum()
    }

    pub fn total_best(&self) -> u64 {
        self.best.iter().map(|c| c.cost).sum()
    }

    pub fn row(&self, c: (u64, u64)) -> Option<&AugmentationCandidate> {
        let key = (c.0.min(c.1), c.0.max(c.1));
        self.rows.iter().find(|r| r.added_states == key)
    }

    fn label(&self, c: Option<(u64, u64)>) -> String {
        match c {
            None => "{}".into(),
            Some((a, b)) => format!("{{{a:0w$b},{b:0w$b}}}", w = self.n),
        }
    }

    /// Header and text rows: unaugmented first, then every candidate; best cells carry a `*`.
    pub fn text_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let mut header = vec!["C".to_string()];
        header.extend(self.columns.iter().map(|(j, k)| format!("T{}<->{}", j + 1, k + 1)));
        let mut rows = vec![cells(self.label(None), &self.unaugmented, &[])];
        for r in &self.rows {
            rows.push(cells(self.label(Some(r.added_states)), &r.per_pair_costs, &self.marks(r)));
        }
        (header, rows)
    }

    pub fn to_csv(&self) -> String {
        let (header, rows) = self.text_rows();
        let mut out = header.join(",") + "\n";
        for r in rows {
            let mut r = r;
            r[0] = format!("\"{}\"", r[0]);
            out.push_str(&(r.join(",") + "\n"));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let (header, rows) = self.text_rows();
        let mut out = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
        for r in rows {
            out.push_str(&format!("| {} |\n", r.join(" | ")));
        }
        out
    }

    fn marks(&self, r: &AugmentationCandidate) -> Vec<bool> {
        r.per_pair_costs
            .iter()
            .zip(&self.best)
            .map(|(c, b)| b.added_states.is_some() && *c == b.cost)
            .collect()
    }
}

fn cells(label: String, costs: &[u64], marks: &[bool]) -> Vec<String> {
    let mut v = vec![label];
    v.extend(costs.iter().enumerate().map(|(i, c)| {
        if marks.get(i).copied().unwrap_or(false) {
            format!("{c}*")
        } else {
            c.to_string()
        }
    }));
    v
}

/// Every pair of complement states against every off-diagonal entry of `t`.
pub fn search_pairwise<S: Scalar>(b: &FeasibleSet, t: &TransitionMatrix<S>) -> Result<SearchTable> {
    if b.len() != t.size() {
        return Err(Error::Dimension { expected: b.len(), got: t.size() });
    }
    let n = b.n_qubits();
    let columns = t.offdiag_pairs();
    let weights: Vec<S> = columns.iter().map(|&(j, k)| t.get(j, k)).collect();
    let base: Vec<PauliSum<S>> = columns
        .iter()
        .zip(&weights)
        .map(|(&(j, k), w)| pair_strings(b, j, k, w))
        .collect::<Result<_>>()?;
    let unaugmented: Vec<u64> = base.iter().map(cx_cost).collect();
    let comp = b.complement();
    let mut cands = Vec::new();
    for (i, &a) in comp.iter().enumerate() {
        for &c in &comp[i + 1..] {
            cands.push((a, c));
        }
    }
    let mut rows = cands
        .par_iter()
        .map(|&(c1, c2)| {
            let (added, _) = recursive_pair::<S>(BasisState::new(n, c1)?, BasisState::new(n, c2)?)?;
            let per_pair_costs = base
                .iter()
                .zip(&weights)
                .map(|(s, w)| Ok(cx_cost(&s.add(&added.scaled(w))?)))
                .collect::<Result<Vec<u64>>>()?;
            Ok(AugmentationCandidate { added_states: (c1, c2), per_pair_costs })
        })
        .collect::<Result<Vec<_>>>()?;
    let gain = |r: &AugmentationCandidate| -> u64 {
        r.per_pair_costs.iter().zip(&unaugmented).map(|(c, u)| u.saturating_sub(*c)).sum()
    };
    rows.sort_by(|a, b| gain(b).cmp(&gain(a)).then(a.added_states.cmp(&b.added_states)));
    let best = (0..columns.len())
        .map(|col| {
            let mut cell = BestCell { cost: unaugmented[col], added_states: None };
            let mut lex: Vec<&AugmentationCandidate> = rows.iter().collect();
            lex.sort_by_key(|r| r.added_states);
            for r in lex {
                if r.per_pair_costs[col] < cell.cost {
                    cell = BestCell { cost: r.per_pair_costs[col], added_states: Some(r.added_states) };
                }
            }
            cell
        })
        .collect();
    Ok(SearchTable { n, columns, unaugmented, rows, best })
}

/// Outcome of the greedy multi-add heuristic for one column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyColumn {
    pub pair: (usize, usize),
    pub cost: u64,
    pub added: Vec<(u64, u64)>,
}

/// Heuristic: per column, keep adding the complement pair that lowers the cost
/// most until no pair helps or `max_adds` is reached. Not guaranteed optimal.
pub fn greedy_multi_add<S: Scalar>(
    b: &FeasibleSet,
    t: &TransitionMatrix<S>,
    max_adds: usize,
) -> Result<Vec<GreedyColumn>> {
    let n = b.n_qubits();
    let comp = b.complement();
    let mut added_terms = Vec::new();
    for (i, &a) in comp.iter().enumerate() {
        for &c in &comp[i + 1..] {
            let (s, _) = recursive_pair::<S>(BasisState::new(n, a)?, BasisState::new(n, c)?)?;
            added_terms.push(((a, c), s));
        }
    }
    t.offdiag_pairs()
        .into_par_iter()
        .map(|(j, k)| {
            let w = t.get(j, k);
            let mut cur = pair_strings(b, j, k, &w)?;
            let mut cost = cx_cost(&cur);
            let mut used: HashSet<(u64, u64)> = HashSet::new();
            let mut added = Vec::new();
            for _ in 0..max_adds {
                let mut step: Option<((u64, u64), PauliSum<S>, u64)> = None;
                for (key, s) in &added_terms {
                    if used.contains(key) {
                        continue;
                    }
                    let cand = cur.add(&s.scaled(&w))?;
                    let c = cx_cost(&cand);
                    if c < step.as_ref().map_or(cost, |x| x.2) {
                        step = Some((*key, cand, c));
                    }
                }
                let Some((key, next, c)) = step else { break };
                used.insert(key);
                added.push(key);
                cur = next;
                cost = c;
            }
            Ok(GreedyColumn { pair: (j, k), cost, added })
        })
        .collect()
}

/// Closed-form XY mixer on `n` one-hot states: `½ T_{jk}(X_aX_b + Y_aY_b)` per
/// off-diagonal entry, where one-hot index `j` (0-based, increasing integer
/// order) sits on qubit `n-1-j`. Diagonal entries keep their projector form.
pub fn one_hot_mixer<S: Scalar>(n: usize, t: &TransitionMatrix<S>) -> Result<Vec<PairGroup<S>>> {
    if t.size() > n {
        return Err(Error::Dimension { expected: n, got: t.size() });
    }
    let b = FeasibleSet::one_hot(n)?;
    t.nonzeros()
        .map(|(j, k, v)| {
            let strings = if j == k {
                pair_strings(&b, j, k, v)?
            } else {
                let (qa, qb) = (n - 1 - j, n - 1 - k);
                let pair = |letter: char| -> Result<PauliString> {
                    let a = PauliString::single(n, qa, letter)?;
                    let b = PauliString::single(n, qb, letter)?;
                    Ok(a.multiply(&b)?.1)
                };
                let half = v.clone() * S::half();
                PauliSum::from_terms(n, [(pair('X')?, half.clone()), (pair('Y')?, half)])?
            };
            Ok(PairGroup { pair: (j, k), weight: v.clone(), strings })
        })
        .collect()
}

/// Sum of all `2^{n-2}` added pair terms that complete one one-hot pair into
/// `½(X_aX_b + Y_aY_b)`, including the feasible pair itself.
pub fn one_hot_full_augmentation<S: Scalar>(n: usize, j: usize, k: usize, weight: &S) -> Result<PauliSum<S>> {
    if j >= n || k >= n || j == k {
        return Err(Error::Domain(format!("one-hot pair ({}, {}) on {n} qubits", j + 1, k + 1)));
    }
    let (bj, bk) = (1u64 << j, 1u64 << k);
    let rest = (0..1u64 << n).filter(|s| s & (bj | bk) == 0);
    let mut total = PauliSum::new(n);
    for s in rest {
        let (a, _) = recursive_pair::<S>(BasisState::new(n, s | bj)?, BasisState::new(n, s | bk)?)?;
        total = total.add(&a.scaled(weight))?;
    }
    Ok(total)
}
