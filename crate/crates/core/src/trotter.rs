//! Trotterization plans over pair groups, and their validity checks.
//!
//! A plan `[G_1, …, G_Q]` stands for `U = U_1 U_2 ⋯ U_Q` with
//! `U_q = e^{-iβ H_{G_q}}`, so `G_Q` acts first in time.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolmat::BoolMatrix;
use crate::decompose::{recursive_decompose, PairGroup};
use crate::error::{Error, Result};
use crate::pauli::{Accumulator, PauliString, PauliSum};
use crate::scalar::Scalar;
use crate::simulate::{apply_group_exp, check_sim_cap, state_leak, GroupPropagator};
use crate::subspace::{t_offdiag, FeasibleSet, Parity, TransitionMatrix, TransitionReport};

pub const LEAK_TOL: f64 = 1e-9;
pub const PRESERVE_GRID: usize = 16;

/// Groups of 0-based pairs `(j, k)` with `j <= k`, plus a repetition count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrotterPlan {
    pub groups: Vec<Vec<(usize, usize)>>,
    pub repetitions: usize,
}

/// Wire form `{groups: [[[j, k], …]], r}` with 1-based pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanJson {
    pub groups: Vec<Vec<[usize; 2]>>,
    pub r: usize,
}

impl TrotterPlan {
    pub fn new(groups: Vec<Vec<(usize, usize)>>, repetitions: usize) -> Result<Self> {
        if repetitions == 0 {
            return Err(Error::Plan("repetitions must be positive".into()));
        }
        let groups = groups
            .into_iter()
            .map(|g| g.into_iter().map(|(j, k)| if j <= k { (j, k) } else { (k, j) }).collect())
            .collect();
        Ok(TrotterPlan { groups, repetitions })
    }

    /// One group holding every nonzero entry of `t`.
    pub fn single_group<S: Scalar>(t: &TransitionMatrix<S>) -> Self {
        TrotterPlan { groups: vec![t.nonzeros().map(|(j, k, _)| (j, k)).collect()], repetitions: 1 }
    }

    /// One group per nonzero entry, in entry order.
    pub fn per_pair<S: Scalar>(t: &TransitionMatrix<S>) -> Self {
        TrotterPlan { groups: t.nonzeros().map(|(j, k, _)| vec![(j, k)]).collect(), repetitions: 1 }
    }

    pub fn with_repetitions(&self, r: usize) -> Self {
        TrotterPlan { groups: self.groups.clone(), repetitions: r.max(1) }
    }

    pub fn pair_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn to_json(&self) -> PlanJson {
        PlanJson {
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(|&(j, k)| [j + 1, k + 1]).collect())
                .collect(),
            r: self.repetitions,
        }
    }

    pub fn from_json(j: &PlanJson) -> Result<Self> {
        let mut groups = Vec::with_capacity(j.groups.len());
        for g in &j.groups {
            let mut out = Vec::with_capacity(g.len());
            for &[a, b] in g {
                if a == 0 || b == 0 {
                    return Err(Error::Plan("pairs are 1-based".into()));
                }
                out.push((a - 1, b - 1));
            }
            groups.push(out);
        }
        Self::new(groups, j.r)
    }

    /// Errors on any pair that is not a nonzero entry of `t`.
    pub fn check_against<S: Scalar>(&self, t: &TransitionMatrix<S>) -> Result<()> {
        for &(j, k) in self.groups.iter().flatten() {
            if j >= t.size() || k >= t.size() || t.get(j, k).is_zero() {
                return Err(Error::Plan(format!("pair ({}, {}) is not an entry of T", j + 1, k + 1)));
            }
        }
        Ok(())
    }

    /// Pooled strings of each plan group.
    pub fn string_plan<S: Scalar>(&self, n: usize, groups: &[PairGroup<S>]) -> Result<StringPlan<S>> {
        let by_pair: BTreeMap<(usize, usize), &PairGroup<S>> =
            groups.iter().map(|g| (g.pair, g)).collect();
        let mut pooled = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let mut acc = Accumulator::new(n);
            for pair in g {
                let pg = by_pair.get(pair).ok_or_else(|| {
                    Error::Plan(format!("no pair group for ({}, {})", pair.0 + 1, pair.1 + 1))
                })?;
                acc.extend(&pg.strings);
            }
            pooled.push(acc.finish());
        }
        Ok(StringPlan { groups: pooled, repetitions: self.repetitions, whole_pairs: true })
    }

    /// Whether each group's pooled strings commute pairwise.
    pub fn groups_commute<S: Scalar>(&self, n: usize, groups: &[PairGroup<S>]) -> Result<Vec<bool>> {
        Ok(self.string_plan(n, groups)?.groups.iter().map(PauliSum::is_commuting).collect())
    }
}

/// A plan over explicit string groups.
#[derive(Clone, Debug, PartialEq)]
pub struct StringPlan<S = f64> {
    pub groups: Vec<PauliSum<S>>,
    pub repetitions: usize,
    whole_pairs: bool,
}

impl<S: Scalar> StringPlan<S> {
    /// Groups that may split pair groups; nothing guarantees they preserve the subspace.
    pub fn from_string_groups_unchecked(groups: Vec<PauliSum<S>>, repetitions: usize) -> Self {
        StringPlan { groups, repetitions: repetitions.max(1), whole_pairs: false }
    }

    pub fn is_whole_pairs(&self) -> bool {
        self.whole_pairs
    }

    /// `ψ ← U(β)^r ψ`.
    pub fn apply(&self, beta: f64, psi: &mut crate::simulate::StateVector) -> Result<()> {
        for _ in 0..self.repetitions {
            for g in self.groups.iter().rev() {
                apply_group_exp(g, beta, psi)?;
            }
        }
        Ok(())
    }

    fn propagators(&self, b: &FeasibleSet) -> Result<Vec<GroupPropagator>> {
        check_sim_cap(b.n_qubits())?;
        self.groups.iter().map(GroupPropagator::new).collect()
    }

    fn evolve_with(props: &[GroupPropagator], reps: usize, b: &FeasibleSet, beta: f64) -> DMatrix<Complex64> {
        let mut cols = DMatrix::zeros(1 << b.n_qubits(), b.len());
        for (k, &x) in b.states().iter().enumerate() {
            cols[(x as usize, k)] = Complex64::new(1.0, 0.0);
        }
        for _ in 0..reps {
            for g in props.iter().rev() {
                g.apply(beta, &mut cols);
            }
        }
        cols
    }

    /// Columns `U(β)^r|x_k⟩` for every feasible state.
    pub fn evolve_feasible(&self, b: &FeasibleSet, beta: f64) -> Result<DMatrix<Complex64>> {
        Ok(Self::evolve_with(&self.propagators(b)?, self.repetitions, b, beta))
    }

    /// `⟨x_j|U(β)^r|x_k⟩` for all feasible pairs.
    pub fn feasible_overlaps(&self, b: &FeasibleSet, beta: f64) -> Result<DMatrix<Complex64>> {
        Ok(self.feasible_overlaps_grid(b, &[beta])?.remove(0))
    }

    /// [`Self::feasible_overlaps`] for each β, sharing the group spectra.
    pub fn feasible_overlaps_grid(&self, b: &FeasibleSet, betas: &[f64]) -> Result<Vec<DMatrix<Complex64>>> {
        let props = self.propagators(b)?;
        let rows: Vec<usize> = b.states().iter().map(|&x| x as usize).collect();
        Ok(betas
            .par_iter()
            .map(|&beta| Self::evolve_with(&props, self.repetitions, b, beta).select_rows(rows.iter()))
            .collect())
    }

    /// Largest leak out of span(B) over feasible inputs and the given β values.
    pub fn max_leak(&self, b: &FeasibleSet, betas: &[f64]) -> Result<f64> {
        let props = self.propagators(b)?;
        Ok(betas
            .par_iter()
            .map(|&beta| {
                let cols = Self::evolve_with(&props, self.repetitions, b, beta);
                (0..cols.ncols())
                    .map(|k| state_leak(&cols.column(k).into_owned(), b))
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max))
    }
}

/// `k π / points` for `k = 1..=points`.
pub fn beta_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|k| k as f64 * std::f64::consts::PI / points as f64).collect()
}

/// First-fit coloring of pair groups (sorted by pair) into bins of mutually
/// commuting strings.
pub fn greedy_partition<S: Scalar>(groups: &[PairGroup<S>]) -> TrotterPlan {
    let mut order: Vec<&PairGroup<S>> = groups.iter().collect();
    order.sort_by_key(|g| g.pair);
    type Bin = (Vec<(usize, usize)>, Vec<PauliString>);
    let mut bins: Vec<Bin> = Vec::new();
    for g in order {
        let strings: Vec<PauliString> = g.strings.strings().copied().collect();
        let slot = bins.iter_mut().find(|(_, pooled)| {
            strings.iter().all(|a| pooled.iter().all(|b| a.commutes_unchecked(b)))
        });
        match slot {
            Some((pairs, pooled)) => {
                pairs.push(g.pair);
                pooled.extend(strings);
            }
            None => bins.push((vec![g.pair], strings)),
        }
    }
    TrotterPlan { groups: bins.into_iter().map(|(p, _)| p).collect(), repetitions: 1 }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreservationReport {
    /// Every plan group is a union of whole pair groups.
    pub structural: bool,
    /// Largest numeric leak over the β grid; `None` beyond the simulation cap.
    pub max_leak: Option<f64>,
    pub preserved: bool,
}

fn preservation(structural: bool, max_leak: Option<f64>) -> PreservationReport {
    let numeric_ok = max_leak.is_none_or(|l| l <= LEAK_TOL);
    PreservationReport { structural, max_leak, preserved: structural && numeric_ok }
}

/// Structural verdict plus a numeric check on a 16-point β grid in (0, π].
pub fn preserves_subspace<S: Scalar>(
    plan: &TrotterPlan,
    b: &FeasibleSet,
    t: &TransitionMatrix<S>,
) -> Result<PreservationReport> {
    plan.check_against(t)?;
    let groups = recursive_decompose(b, t)?;
    let sp = plan.string_plan(b.n_qubits(), &groups)?;
    let leak = if b.n_qubits() <= crate::simulate::SIM_MAX_QUBITS {
        Some(sp.max_leak(b, &beta_grid(PRESERVE_GRID))?)
    } else {
        None
    };
    Ok(preservation(true, leak))
}

/// Numeric-only verdict for string-level plans.
pub fn string_plan_preserves<S: Scalar>(plan: &StringPlan<S>, b: &FeasibleSet) -> Result<PreservationReport> {
    let leak = plan.max_leak(b, &beta_grid(PRESERVE_GRID))?;
    let numeric_ok = leak <= LEAK_TOL;
    Ok(PreservationReport {
        structural: plan.is_whole_pairs(),
        max_leak: Some(leak),
        preserved: numeric_ok,
    })
}

/// Ordered boolean product of the groups' closures, `C_1 C_2 ⋯ C_Q`.
pub fn plan_reachability(plan: &TrotterPlan, m: usize) -> BoolMatrix {
    let mut prod = BoolMatrix::identity(m);
    for g in &plan.groups {
        let mut adj = BoolMatrix::zeros(m);
        for &(j, k) in g {
            adj.set(j, k);
            adj.set(k, j);
        }
        prod = prod.mul(&adj.closure());
    }
    let base = prod.clone();
    for _ in 1..plan.repetitions {
        prod = prod.mul(&base);
    }
    prod
}

/// Smallest `r <= r_max` with every entry of `(C_1 ⋯ C_Q)^{r·reps}` set.
/// Missing pairs are 0-based `(row, col)` at `r_max`.
pub fn provides_transitions<S: Scalar>(
    plan: &TrotterPlan,
    t: &TransitionMatrix<S>,
    r_max: usize,
) -> Result<TransitionReport> {
    plan.check_against(t)?;
    let m = t.size();
    let base = plan_reachability(plan, m);
    let mut power = base.clone();
    for r in 1..=r_max.max(1) {
        if r > 1 {
            power = power.mul(&base);
        }
        if power.is_full() {
            return Ok(TransitionReport { valid: true, minimal_r: Some(r), missing: vec![] });
        }
    }
    Ok(TransitionReport { valid: false, minimal_r: None, missing: power.zeros_list() })
}

/// Trotterizations of the one-hot XY mixer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XyStrategy {
    /// `r × (T_1 + T_2)` with `T_1` the odd cyclic and `T_2` the even first off-diagonal.
    RepeatParity(usize),
    /// `(T_1 + T_2)` followed by odd/even groups of each listed off-diagonal.
    ParityPlusOffdiag(Vec<usize>),
    /// All pairs in one simultaneous group.
    CompleteGraph,
}

/// `(T, plan)` on `n` one-hot states. Empty groups are dropped.
pub fn xy_plan(n: usize, strategy: &XyStrategy) -> Result<(TransitionMatrix<f64>, TrotterPlan)> {
    if n < 2 {
        return Err(Error::Domain(format!("XY plans need n >= 2, got {n}")));
    }
    let pairs = |t: &TransitionMatrix<f64>| -> Vec<(usize, usize)> {
        t.nonzeros().map(|(j, k, _)| (j, k)).collect()
    };
    let t1 = t_offdiag::<f64>(1, Parity::Odd, true, n)?;
    let t2 = t_offdiag::<f64>(1, Parity::Even, false, n)?;
    let mut mats = vec![t1, t2];
    let reps = match strategy {
        XyStrategy::RepeatParity(r) => (*r).max(1),
        XyStrategy::ParityPlusOffdiag(set) => {
            for &d in set {
                if d >= n {
                    return Err(Error::Domain(format!("off-diagonal {d} needs n > {d}")));
                }
                mats.push(t_offdiag(d, Parity::Odd, false, n)?);
                mats.push(t_offdiag(d, Parity::Even, false, n)?);
            }
            1
        }
        XyStrategy::CompleteGraph => {
            let t = crate::subspace::t_all::<f64>(n);
            let plan = TrotterPlan::single_group(&t);
            return Ok((t, plan));
        }
    };
    let mut t = TransitionMatrix::zeros(n);
    let mut groups = Vec::new();
    for g in &mats {
        if g.nnz() > 0 {
            groups.push(pairs(g));
            t = t.add(g)?;
        }
    }
    // add() sums overlapping entries; reset to unit weights.
    let support: BTreeSet<(usize, usize)> = t.nonzeros().map(|(j, k, _)| (j, k)).collect();
    let mut unit = TransitionMatrix::zeros(n);
    for (j, k) in support {
        unit.set(j, k, 1.0)?;
    }
    Ok((unit, TrotterPlan { groups, repetitions: reps }))
}

/// `(XX+YY)` pair terms executed per mixing step; errors if the strategy
/// does not connect every pair of one-hot states.
pub fn xy_plan_term_count(n: usize, strategy: &XyStrategy) -> Result<usize> {
    let (t, plan) = xy_plan(n, strategy)?;
    let once = plan.with_repetitions(1);
    let report = provides_transitions(&once, &t, plan.repetitions)?;
    if !report.valid {
        let missing = report.missing.iter().map(|&(j, k)| (j + 1, k + 1)).collect();
        return Err(Error::Validity { n, missing });
    }
    Ok(plan.pair_count() * plan.repetitions)
}
