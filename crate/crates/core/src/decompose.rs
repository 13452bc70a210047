//! Pauli decompositions of `H = E T Eᵀ`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Accumulator, ComplexAccumulator, PauliString, PauliSum, PauliSumJson};
use crate::scalar::Scalar;
use crate::subspace::{BasisState, FeasibleSet, TransitionMatrix};

pub const TRACE_MAX_QUBITS: usize = 6;

fn check_sizes<S: Scalar>(b: &FeasibleSet, t: &TransitionMatrix<S>) -> Result<()> {
    if b.len() != t.size() {
        return Err(Error::Dimension { expected: b.len(), got: t.size() });
    }
    Ok(())
}

/// Brute-force oracle: `c_P = Tr(P H) / 2^n` over all `4^n` strings.
pub fn trace_decompose<S: Scalar>(b: &FeasibleSet, t: &TransitionMatrix<S>) -> Result<PauliSum<S>> {
    check_sizes(b, t)?;
    let n = b.n_qubits();
    if n > TRACE_MAX_QUBITS {
        return Err(Error::Scale { what: "trace_decompose", n, cap: TRACE_MAX_QUBITS });
    }
    let dim = 1usize << n;
    let mut h = vec![S::zero(); dim * dim];
    for (j, k, v) in t.nonzeros() {
        let (r, c) = (b.states()[j] as usize, b.states()[k] as usize);
        h[r * dim + c] = v.clone();
        h[c * dim + r] = v.clone();
    }
    let norm = S::from_usize(dim).expect("dimension fits the scalar type");
    let mut acc = Accumulator::new(n);
    for xm in 0..dim as u64 {
        for zm in 0..dim as u64 {
            let p = PauliString::from_masks_unchecked(n, xm, zm);
            // Tr(P H) = Σ_x ⟨x|P|x⊕xm⟩ H[x⊕xm][x]
            let mut tr = Complex::new(S::zero(), S::zero());
            for x in 0..dim as u64 {
                let col = x ^ xm;
                let hv = &h[col as usize * dim + x as usize];
                if hv.is_zero() {
                    continue;
                }
                let ph = p.matrix_element(x, col).expect("nonzero by construction");
                tr = tr + ph.to_complex::<S>() * Complex::new(hv.clone(), S::zero());
            }
            acc.add(p, tr.re / norm.clone());
        }
    }
    Ok(acc.finish())
}

/// Ladder factors of `|a⟩⟨b|` on one qubit as `(x, z, coeff)` terms.
fn ladder_factor<S: Scalar>(a: u64, b: u64) -> [(u64, u64, Complex<S>); 2] {
    let h = S::half();
    let re = |v: S| Complex::new(v, S::zero());
    let im = |v: S| Complex::new(S::zero(), v);
    match (a, b) {
        (0, 1) => [(1, 0, re(h.clone())), (1, 1, im(h))],
        (1, 0) => [(1, 0, re(h.clone())), (1, 1, im(-h))],
        (0, 0) => [(0, 0, re(h.clone())), (0, 1, re(h))],
        _ => [(0, 0, re(h.clone())), (0, 1, re(-h))],
    }
}

/// Expands `value · |z⟩⟨w|` into `2^n` Pauli terms.
fn expand_outer<S: Scalar>(n: usize, z: u64, w: u64, value: &S, acc: &mut ComplexAccumulator<S>) {
    let mut terms: Vec<(u64, u64, Complex<S>)> =
        vec![(0, 0, Complex::new(value.clone(), S::zero()))];
    for q in 0..n {
        let bit = (n - 1 - q) as u32;
        let f = ladder_factor::<S>((z >> bit) & 1, (w >> bit) & 1);
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (x, zz, c) in &terms {
            for (fx, fz, fc) in &f {
                next.push(((x << 1) | fx, (zz << 1) | fz, c.clone() * fc.clone()));
            }
        }
        terms = next;
    }
    for (x, zz, c) in terms {
        acc.add(PauliString::from_masks_unchecked(n, x, zz), c);
    }
}

/// Direct expansion of every nonzero `T_{jk} |x_j⟩⟨x_k|`, both orders.
pub fn ladder_decompose<S: Scalar>(b: &FeasibleSet, t: &TransitionMatrix<S>) -> Result<PauliSum<S>> {
    check_sizes(b, t)?;
    let n = b.n_qubits();
    let mut acc = ComplexAccumulator::new(n);
    for (j, k, v) in t.nonzeros() {
        let (z, w) = (b.states()[j], b.states()[k]);
        expand_outer(n, z, w, v, &mut acc);
        if j != k {
            expand_outer(n, w, z, v, &mut acc);
        }
    }
    Ok(acc.finish_real())
}

/// `(A_n, B_n)` with `A_n = |z⟩⟨w| + |w⟩⟨z|` and `B_n = i(|z⟩⟨w| − |w⟩⟨z|)`,
/// built qubit by qubit from the left. For `z = w`, `A_n = 2|z⟩⟨z|`.
pub fn recursive_pair<S: Scalar>(z: BasisState, w: BasisState) -> Result<(PauliSum<S>, PauliSum<S>)> {
    if z.n != w.n {
        return Err(Error::Dimension { expected: z.n, got: w.n });
    }
    let n = z.n;
    type Terms<S> = Vec<(u64, u64, S)>;
    let mut a: Terms<S> = Vec::new();
    let mut bb: Terms<S> = Vec::new();
    for q in 0..n {
        let bit = (n - 1 - q) as u32;
        let (zq, wq) = ((z.bits >> bit) & 1, (w.bits >> bit) & 1);
        if q == 0 {
            match (zq, wq) {
                (0, 0) => a = vec![(0, 0, S::one()), (0, 1, S::one())],
                (1, 1) => a = vec![(0, 0, S::one()), (0, 1, -S::one())],
                (0, 1) => {
                    a = vec![(1, 0, S::one())];
                    bb = vec![(1, 1, -S::one())];
                }
                _ => {
                    a = vec![(1, 0, S::one())];
                    bb = vec![(1, 1, S::one())];
                }
            }
            continue;
        }
        let h = S::half();
        let push = |dst: &mut Terms<S>, src: &Terms<S>, lx: u64, lz: u64, sign: S| {
            for (x, zz, c) in src {
                dst.push(((x << 1) | lx, (zz << 1) | lz, c.clone() * sign.clone()));
            }
        };
        let mut na = Vec::with_capacity(2 * (a.len() + bb.len()));
        let mut nb = Vec::with_capacity(2 * (a.len() + bb.len()));
        match (zq, wq) {
            (0, 0) | (1, 1) => {
                let zs = if zq == 0 { h.clone() } else { -h.clone() };
                push(&mut na, &a, 0, 0, h.clone());
                push(&mut na, &a, 0, 1, zs.clone());
                push(&mut nb, &bb, 0, 0, h.clone());
                push(&mut nb, &bb, 0, 1, zs);
            }
            _ => {
                // (0,1): A' = ½(A X + B Y), B' = ½(B X − A Y); (1,0) flips the Y signs.
                let s = if zq == 0 { h.clone() } else { -h.clone() };
                push(&mut na, &a, 1, 0, h.clone());
                push(&mut na, &bb, 1, 1, s.clone());
                push(&mut nb, &bb, 1, 0, h.clone());
                push(&mut nb, &a, 1, 1, -s);
            }
        }
        a = na;
        bb = nb;
    }
    let collect = |terms: Terms<S>| {
        let map = terms
            .into_iter()
            .filter(|(_, _, c)| !c.is_negligible())
            .map(|(x, zz, c)| (PauliString::from_masks_unchecked(n, x, zz), c))
            .collect();
        PauliSum::from_map_unchecked(n, map)
    };
    Ok((collect(a), collect(bb)))
}

/// Strings contributed by one nonzero entry of `T`. `pair` is 0-based, `j <= k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairGroup<S = f64> {
    pub pair: (usize, usize),
    pub weight: S,
    pub strings: PauliSum<S>,
}

/// Wire form with 1-based pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairGroupJson {
    pub pair: (usize, usize),
    pub weight: f64,
    pub strings: PauliSumJson,
}

impl<S: Scalar> PairGroup<S> {
    pub fn to_json(&self) -> PairGroupJson {
        PairGroupJson {
            pair: (self.pair.0 + 1, self.pair.1 + 1),
            weight: self.weight.to_f64_lossy(),
            strings: self.strings.to_json(),
        }
    }
}

/// Strings of `T_{jk}(|x_j⟩⟨x_k| + |x_k⟩⟨x_j|)`, or `T_{jj}|x_j⟩⟨x_j|` on the diagonal.
pub fn pair_strings<S: Scalar>(b: &FeasibleSet, j: usize, k: usize, weight: &S) -> Result<PauliSum<S>> {
    let (a, _) = recursive_pair::<S>(b.state(j), b.state(k))?;
    let factor = if j == k { weight.clone() * S::half() } else { weight.clone() };
    Ok(a.scaled(&factor))
}

/// One group per nonzero upper-triangle entry, in entry order.
pub fn recursive_decompose<S: Scalar>(
    b: &FeasibleSet,
    t: &TransitionMatrix<S>,
) -> Result<Vec<PairGroup<S>>> {
    check_sizes(b, t)?;
    let entries: Vec<(usize, usize, S)> = t.nonzeros().map(|(j, k, v)| (j, k, v.clone())).collect();
    entries
        .into_par_iter()
        .map(|(j, k, v)| {
            let strings = pair_strings(b, j, k, &v)?;
            Ok(PairGroup { pair: (j, k), weight: v, strings })
        })
        .collect()
}

/// Sum of all groups with cancellation.
pub fn flatten<S: Scalar>(n: usize, groups: &[PairGroup<S>]) -> PauliSum<S> {
    let mut acc = Accumulator::new(n);
    for g in groups {
        acc.extend(&g.strings);
    }
    acc.finish()
}
