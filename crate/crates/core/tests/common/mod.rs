//! Shared generators and checks for the integration tests and the acceptance run.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qmix_core::decompose::{flatten, ladder_decompose, recursive_decompose, recursive_pair, trace_decompose};
use qmix_core::simulate::{
    DenseOperator, eigen_residual, exp_pauli_sum, exp_transition, feasible_initial_state,
    InitialKind,
};
use qmix_core::subspace::*;
use qmix_core::augment::one_hot_mixer;
use qmix_core::circuit::emit_plan;
use qmix_core::cost::cx_cost;
use qmix_core::decompose::PairGroup;
use qmix_core::trotter::{TrotterPlan, XyStrategy, beta_grid, greedy_partition, xy_plan};
use qmix_core::{BasisState, Exact, FeasibleSet, PauliSum, TransitionMatrix};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Rng64 = Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> Rng64 {
    Rng64::seed_from_u64(seed)
}

pub fn exact(v: i64) -> Exact {
    Exact::from_integer(v)
}

/// Distinct random states on `n` qubits.
pub fn random_set(rng: &mut Rng64, n: usize, m: usize) -> FeasibleSet {
    let picks = rand::seq::index::sample(rng, 1 << n, m);
    FeasibleSet::new(n, picks.into_iter().map(|s| s as u64).collect()).unwrap()
}

/// Symmetric integer matrix, entries in -3..=3, about a third zero.
pub fn random_t(rng: &mut Rng64, m: usize, with_diagonal: bool) -> TransitionMatrix<Exact> {
    let mut t = TransitionMatrix::zeros(m);
    for j in 0..m {
        for k in j..m {
            if j == k && !with_diagonal {
                continue;
            }
            let v: i64 = rng.random_range(-3..=3);
            t.set(j, k, exact(v)).unwrap();
        }
    }
    t
}

/// A random `(B, T)` with `n <= 5` and `|B| <= 8`.
pub fn random_case(rng: &mut Rng64) -> (FeasibleSet, TransitionMatrix<Exact>) {
    let n = rng.random_range(1..=5);
    let m = rng.random_range(1..=8usize.min(1 << n));
    let b = random_set(rng, n, m);
    let diag = rng.random_bool(0.5);
    (b, random_t(rng, m, diag))
}

pub fn random_perm(rng: &mut Rng64, m: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..m).collect();
    p.shuffle(rng);
    p
}

/// Largest coefficient gap between the three decompositions in floating point,
/// and whether they agree exactly over the rationals.
pub fn algorithms_agree(b: &FeasibleSet, t: &TransitionMatrix<Exact>) -> (f64, bool) {
    let e_trace = trace_decompose(b, t).unwrap();
    let e_ladder = ladder_decompose(b, t).unwrap();
    let e_rec = flatten(b.n_qubits(), &recursive_decompose(b, t).unwrap());
    let tf = t.to_f64();
    let f_trace = trace_decompose(b, &tf).unwrap();
    let f_ladder = ladder_decompose(b, &tf).unwrap();
    let f_rec = flatten(b.n_qubits(), &recursive_decompose(b, &tf).unwrap());
    let gap = [
        f_trace.max_abs_diff(&f_ladder),
        f_trace.max_abs_diff(&f_rec),
        f_trace.max_abs_diff(&e_rec.to_f64()),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    (gap, e_trace == e_ladder && e_ladder == e_rec)
}

/// Strings of `a_n` commute among themselves, so do those of `b_n`, and every
/// cross pair anticommutes.
pub fn pair_commutation_holds(z: BasisState, w: BasisState) -> bool {
    let (a, b) = recursive_pair::<Exact>(z, w).unwrap();
    let a: Vec<_> = a.strings().cloned().collect();
    let b: Vec<_> = b.strings().cloned().collect();
    let all_commute = |v: &[qmix_core::PauliString]| {
        v.iter().all(|p| v.iter().all(|q| p.commutes(q).unwrap()))
    };
    all_commute(&a) && all_commute(&b) && a.iter().all(|p| b.iter().all(|q| !p.commutes(q).unwrap()))
}

pub fn random_pair(rng: &mut Rng64) -> (BasisState, BasisState) {
    let n = rng.random_range(1..=8);
    let z = rng.random_range(0..1u64 << n);
    let w = rng.random_range(0..1u64 << n);
    (BasisState::new(n, z).unwrap(), BasisState::new(n, w).unwrap())
}

pub fn ordering_invariant(b: &FeasibleSet, t: &TransitionMatrix<Exact>, perm: &[usize]) -> bool {
    let n = b.n_qubits();
    let h = flatten(n, &recursive_decompose(b, t).unwrap());
    let hp = flatten(n, &recursive_decompose(&b.permuted(perm).unwrap(), &t.permuted(perm).unwrap()).unwrap());
    h == hp
}

/// `2^n × m` embedding with columns `|x_j⟩`.
pub fn embedding(b: &FeasibleSet) -> DMatrix<Complex64> {
    let mut e = DMatrix::zeros(1 << b.n_qubits(), b.len());
    for (j, &s) in b.states().iter().enumerate() {
        e[(s as usize, j)] = Complex64::new(1.0, 0.0);
    }
    e
}

pub fn restrict(u: &DenseOperator, b: &FeasibleSet) -> DMatrix<Complex64> {
    let e = embedding(b);
    e.adjoint() * u * e
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn hamiltonian(b: &FeasibleSet, t: &TransitionMatrix<Exact>) -> PauliSum<f64> {
    flatten(b.n_qubits(), &recursive_decompose(b, t).unwrap()).to_f64()
}

/// `|⟨x_j|e^{-iβH}|x_k⟩|` for every feasible pair.
pub fn overlap_magnitudes(b: &FeasibleSet, t: &TransitionMatrix<Exact>, beta: f64) -> DMatrix<f64> {
    let u = exp_pauli_sum(&hamiltonian(b, t), beta).unwrap();
    restrict(&u, b).map(|v| v.norm())
}

/// Same `T`, two unrelated feasible sets of the same size: largest gap between
/// the overlap magnitudes across a β grid.
pub fn state_independence_gap(rng: &mut Rng64) -> f64 {
    let m = rng.random_range(2..=6);
    let diag = rng.random_bool(0.5);
    let t = random_t(rng, m, diag);
    let n1 = rng.random_range(3..=6);
    let n2 = rng.random_range(3..=6);
    let (b1, b2) = (random_set(rng, n1, m), random_set(rng, n2, m));
    beta_grid(8)
        .into_iter()
        .map(|beta| {
            let d = overlap_magnitudes(&b1, &t, beta) - overlap_magnitudes(&b2, &t, beta);
            d.amax()
        })
        .fold(0.0, f64::max)
}

/// `e^{-iβH_B} e^{-iβH_C}` and `e^{-iβH_B}` agree on span(B) for disjoint `B`, `C`.
pub fn added_mixer_gap(rng: &mut Rng64) -> f64 {
    let n = rng.random_range(2..=5);
    let size = 1usize << n;
    let all = random_set(rng, n, size.min(10));
    let mb = rng.random_range(1..all.len());
    let (bs, cs) = all.states().split_at(mb);
    let b = FeasibleSet::new(n, bs.to_vec()).unwrap();
    let c = FeasibleSet::new(n, cs.to_vec()).unwrap();
    let (tb, tc) = (random_t(rng, b.len(), true), random_t(rng, c.len(), true));
    let beta = rng.random_range(0.1..3.0);
    let ub = exp_pauli_sum(&hamiltonian(&b, &tb), beta).unwrap();
    let uc = exp_pauli_sum(&hamiltonian(&c, &tc), beta).unwrap();
    max_abs(&(restrict(&(&ub * &uc), &b) - restrict(&ub, &b)))
}

/// `Eᵀ e^{-itH} E` against `e^{-itT}`, plus the complement check when the diagonal is zero.
pub fn eith_gap(b: &FeasibleSet, t: &TransitionMatrix<Exact>, time: f64) -> f64 {
    let u = exp_pauli_sum(&hamiltonian(b, t), time).unwrap();
    let mut gap = max_abs(&(restrict(&u, b) - exp_transition(t, time)));
    if t.has_zero_diagonal() {
        for s in 0..1u64 << b.n_qubits() {
            if b.contains(s) {
                continue;
            }
            let col = u.column(s as usize);
            for (r, v) in col.iter().enumerate() {
                let want = if r == s as usize { 1.0 } else { 0.0 };
                gap = gap.max((v - Complex64::new(want, 0.0)).norm());
            }
        }
    }
    gap
}

/// Residuals of the documented eigenstates: W and uniform states on one-hot
/// sets with `T_A` and `T_Δ,c`, `|+⟩^n` with `T_Ham(1)`, sine modes with `T_Δ`.
pub fn eigen_residuals() -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        let b = FeasibleSet::one_hot(n).unwrap();
        let cases: Vec<(&str, TransitionMatrix<Exact>, InitialKind)> = vec![
            ("w/T_A", t_all(n), InitialKind::WState),
            ("w/T_Dc", t_delta_cyclic(n), InitialKind::WState),
            ("uniform/T_A", t_all(n), InitialKind::Uniform),
        ];
        for (name, t, kind) in cases {
            let psi = feasible_initial_state(&b, kind).unwrap();
            out.push((format!("{name} n={n}"), eigen_residual(&hamiltonian(&b, &t), &psi).1));
        }
        let h = hamiltonian(&b, &t_delta(n));
        for k in 1..=n {
            let psi = feasible_initial_state(&b, InitialKind::DeltaSine(k)).unwrap();
            out.push((format!("sine k={k} n={n}"), eigen_residual(&h, &psi).1));
        }
    }
    for n in 1..=6 {
        let b = FeasibleSet::full(n).unwrap();
        let t = t_hamming::<Exact>(1, 1 << n).unwrap();
        let psi = feasible_initial_state(&b, InitialKind::Uniform).unwrap();
        out.push((format!("uniform/T_Ham(1) n={n}"), eigen_residual(&hamiltonian(&b, &t), &psi).1));
    }
    out
}

pub type Fixture = (String, FeasibleSet, TransitionMatrix<f64>, TrotterPlan, Vec<PairGroup<f64>>);

/// Plans with whole, internally commuting pair groups: name, B, T, plan, groups.
/// Odd-n parity plans are left out: their odd group holds two pairs on state n.
pub fn plan_fixtures() -> Vec<Fixture> {
    let mut out: Vec<Fixture> = Vec::new();
    let mut push = |name: String, b: FeasibleSet, t: TransitionMatrix<f64>, plan: Option<TrotterPlan>| {
        let groups = recursive_decompose(&b, &t).unwrap();
        let plan = plan.unwrap_or_else(|| greedy_partition(&groups));
        out.push((name, b, t, plan, groups));
    };
    let t3 = t_all::<f64>(3);
    push("example1/T_A per pair".into(), example1(), t3.clone(), Some(TrotterPlan::per_pair(&t3)));
    push("example1/T_A per pair r=2".into(), example1(), t3.clone(), Some(TrotterPlan::per_pair(&t3).with_repetitions(2)));
    let t6 = t_delta::<f64>(6);
    push("example2/T_Delta per pair".into(), example2(), t6.clone(), Some(TrotterPlan::per_pair(&t6)));
    for n in 2..=3 {
        push(format!("full {n}/T_Ham(1) greedy"), FeasibleSet::full(n).unwrap(), t_hamming(1, 1 << n).unwrap(), None);
    }
    for n in 3..=6 {
        push(format!("one-hot {n}/T_Dc greedy"), FeasibleSet::one_hot(n).unwrap(), t_delta_cyclic(n), None);
    }
    for (n, s) in [
        (6, XyStrategy::RepeatParity(2)),
        (6, XyStrategy::ParityPlusOffdiag(vec![3])),
        (4, XyStrategy::RepeatParity(1)),
    ] {
        let (t, plan) = xy_plan(n, &s).unwrap();
        let groups = one_hot_mixer(n, &t).unwrap();
        out.push((format!("one-hot {n}/{s:?} XY"), FeasibleSet::one_hot(n).unwrap(), t, plan, groups));
    }
    out
}

/// Emitted circuit against the exact product of group exponentials: unitary gap
/// (up to the global phase of dropped identity strings), emitted CX count and the
/// cost-model prediction `r · Σ_g cost(g)`.
pub fn circuit_check(b: &FeasibleSet, plan: &TrotterPlan, groups: &[PairGroup<f64>], beta: f64) -> (f64, u64, u64) {
    let n = b.n_qubits();
    let gates = emit_plan(plan, n, groups, beta).unwrap();
    let u_circ = gates.unitary().unwrap();
    let sp = plan.string_plan(n, groups).unwrap();
    let dim = 1usize << n;
    let mut once = DenseOperator::identity(dim, dim);
    for g in &sp.groups {
        once *= exp_pauli_sum(g, beta).unwrap();
    }
    let mut exact_u = DenseOperator::identity(dim, dim);
    for _ in 0..plan.repetitions {
        exact_u *= &once;
    }
    let tr = (exact_u.adjoint() * &u_circ).trace();
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { Complex64::new(1.0, 0.0) };
    let gap = max_abs(&(u_circ - exact_u * phase));
    let predicted = plan.repetitions as u64 * sp.groups.iter().map(cx_cost).sum::<u64>();
    (gap, gates.cx_count() as u64, predicted)
}

/// Checks a transition verdict against dense simulation of the string plan on
/// a 32-point β grid: a valid plan has some β where every feasible overlap
/// exceeds 1e-6, an invalid plan has its missing overlaps below 1e-10 for every β.
pub fn transitions_confirmed(
    b: &FeasibleSet,
    groups: &[qmix_core::decompose::PairGroup<f64>],
    plan: &TrotterPlan,
    t: &TransitionMatrix<f64>,
    r_max: usize,
) -> (bool, bool) {
    let report = qmix_core::trotter::provides_transitions(plan, t, r_max).unwrap();
    let r = report.minimal_r.unwrap_or(r_max);
    let sp = plan.with_repetitions(plan.repetitions * r).string_plan(b.n_qubits(), groups).unwrap();
    let mats = sp.feasible_overlaps_grid(b, &beta_grid(32)).unwrap();
    let ok = if report.valid {
        mats.iter().any(|u| u.iter().all(|v| v.norm() > 1e-6))
    } else {
        mats.iter().all(|u| report.missing.iter().all(|&(j, k)| u[(j, k)].norm() < 1e-10))
    };
    (report.valid, ok)
}

/// One-hot plans whose transition verdicts are confirmed numerically.
pub fn xy_fixtures() -> Vec<(usize, XyStrategy)> {
    let mut out = Vec::new();
    for n in 3..=8 {
        for r in 1..=3 {
            out.push((n, XyStrategy::RepeatParity(r)));
        }
        if n >= 4 {
            out.push((n, XyStrategy::ParityPlusOffdiag(vec![3])));
        }
        out.push((n, XyStrategy::CompleteGraph));
    }
    out.push((8, XyStrategy::ParityPlusOffdiag(vec![3, 5])));
    out
}

/// Largest gap between `H_aug|x_k⟩` and `H|x_k⟩` over every complement pair,
/// every off-diagonal entry and every feasible `x_k`.
pub fn augmentation_gap(b: &FeasibleSet, t: &TransitionMatrix<f64>) -> f64 {
    use qmix_core::augment::augmented_pair_sum;
    use qmix_core::simulate::{apply_pauli_sum, basis_vector};
    let comp = b.complement();
    let inputs: Vec<_> = b.states().iter().map(|&x| basis_vector(b.n_qubits(), x)).collect();
    let mut gap: f64 = 0.0;
    for (j, k) in t.offdiag_pairs() {
        let w = t.get(j, k);
        let base = augmented_pair_sum(b, (j, k), None, &w).unwrap();
        let want: Vec<_> = inputs.iter().map(|v| apply_pauli_sum(&base, v)).collect();
        for (i, &c1) in comp.iter().enumerate() {
            for &c2 in &comp[i + 1..] {
                let aug = augmented_pair_sum(b, (j, k), Some((c1, c2)), &w).unwrap();
                for (v, wv) in inputs.iter().zip(&want) {
                    let d = apply_pauli_sum(&aug, v) - wv;
                    gap = gap.max(d.iter().map(|z| z.norm()).fold(0.0, f64::max));
                }
            }
        }
    }
    gap
}

pub fn example1() -> FeasibleSet {
    FeasibleSet::from_strs(&["100", "010", "011"]).unwrap()
}

pub fn example2() -> FeasibleSet {
    FeasibleSet::from_strs(&["10010", "01110", "10011", "11101", "00110", "01010"]).unwrap()
}
