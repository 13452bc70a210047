//! Dense numerics: Pauli matrices, exponentials, overlaps, leaks and initial states.
//!
//! Vector index = basis-state bits, so qubit 0 is the most significant bit.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::scalar::Scalar;
use crate::subspace::{FeasibleSet, TransitionMatrix};

pub const SIM_MAX_QUBITS: usize = 12;

pub type DenseOperator = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn check_sim_cap(n: usize) -> Result<()> {
    if n > SIM_MAX_QUBITS {
        return Err(Error::Scale { what: "dense simulation", n, cap: SIM_MAX_QUBITS });
    }
    Ok(())
}

pub fn pauli_matrix(p: &PauliString) -> Result<DenseOperator> {
    check_sim_cap(p.n_qubits())?;
    let dim = 1usize << p.n_qubits();
    let mut m = DenseOperator::zeros(dim, dim);
    for col in 0..dim as u64 {
        let (ph, row) = p.apply_to_basis(col);
        m[(row as usize, col as usize)] = ph.to_complex::<f64>();
    }
    Ok(m)
}

pub fn dense_hamiltonian<S: Scalar>(s: &PauliSum<S>) -> Result<DenseOperator> {
    let n = s.n_qubits();
    check_sim_cap(n)?;
    let dim = 1usize << n;
    let mut m = DenseOperator::zeros(dim, dim);
    for (p, c) in s.iter() {
        let c = c.to_f64_lossy();
        for col in 0..dim as u64 {
            let (ph, row) = p.apply_to_basis(col);
            m[(row as usize, col as usize)] += ph.to_complex::<f64>() * c;
        }
    }
    Ok(m)
}

/// `e^{-itH}` by scaling and squaring with a Padé approximant.
pub fn exp_pauli_sum<S: Scalar>(s: &PauliSum<S>, t: f64) -> Result<DenseOperator> {
    let h = dense_hamiltonian(s)?;
    Ok((h * (-I * t)).exp())
}

pub fn apply_pauli(p: &PauliString, psi: &StateVector) -> StateVector {
    let mut out = StateVector::zeros(psi.len());
    for (x, a) in psi.iter().enumerate() {
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (ph, y) = p.apply_to_basis(x as u64);
        out[y as usize] += ph.to_complex::<f64>() * a;
    }
    out
}

pub fn apply_pauli_sum<S: Scalar>(s: &PauliSum<S>, psi: &StateVector) -> StateVector {
    let mut out = StateVector::zeros(psi.len());
    for (p, c) in s.iter() {
        out += apply_pauli(p, psi) * Complex64::new(c.to_f64_lossy(), 0.0);
    }
    out
}

/// `ψ ← e^{-iθP} ψ = cos θ ψ − i sin θ Pψ`.
pub fn apply_pauli_rotation(p: &PauliString, theta: f64, psi: &mut StateVector) {
    let pp = apply_pauli(p, psi);
    *psi *= Complex64::new(theta.cos(), 0.0);
    *psi += pp * (-I * theta.sin());
}

/// `e^{-iβH}ψ`, exact when the strings of `H` commute pairwise and via a
/// dense exponential otherwise.
pub fn apply_group_exp<S: Scalar>(s: &PauliSum<S>, beta: f64, psi: &mut StateVector) -> Result<()> {
    if s.is_commuting() {
        for (p, c) in s.iter() {
            apply_pauli_rotation(p, beta * c.to_f64_lossy(), psi);
        }
    } else {
        let u = exp_pauli_sum(s, beta)?;
        *psi = &u * &*psi;
    }
    Ok(())
}

/// `β ↦ e^{-iβH}` for one Hermitian group, prepared once and applied to many β.
#[derive(Clone, Debug)]
pub enum GroupPropagator {
    /// Pairwise commuting strings: one rotation each.
    Rotations(Vec<(PauliString, f64)>),
    /// `H = V diag(λ) V†`.
    Spectral { vectors: DenseOperator, values: DVector<f64> },
}

impl GroupPropagator {
    pub fn new<S: Scalar>(s: &PauliSum<S>) -> Result<Self> {
        if s.is_commuting() {
            return Ok(GroupPropagator::Rotations(
                s.iter().map(|(p, c)| (*p, c.to_f64_lossy())).collect(),
            ));
        }
        let eig = SymmetricEigen::new(dense_hamiltonian(s)?);
        Ok(GroupPropagator::Spectral { vectors: eig.eigenvectors, values: eig.eigenvalues })
    }

    /// `cols ← e^{-iβH} cols`.
    pub fn apply(&self, beta: f64, cols: &mut DMatrix<Complex64>) {
        match self {
            GroupPropagator::Rotations(terms) => {
                for c in 0..cols.ncols() {
                    let mut psi = cols.column(c).into_owned();
                    for (p, coeff) in terms {
                        apply_pauli_rotation(p, beta * coeff, &mut psi);
                    }
                    cols.set_column(c, &psi);
                }
            }
            GroupPropagator::Spectral { vectors, values } => {
                let mut w = vectors.adjoint() * &*cols;
                for (r, lambda) in values.iter().enumerate() {
                    let ph = Complex64::new(0.0, -beta * lambda).exp();
                    w.row_mut(r).iter_mut().for_each(|v| *v *= ph);
                }
                *cols = vectors * w;
            }
        }
    }
}

pub fn basis_vector(n: usize, bits: u64) -> StateVector {
    let mut v = StateVector::zeros(1 << n);
    v[bits as usize] = Complex64::new(1.0, 0.0);
    v
}

/// Norm of the part of `psi` outside span(B).
pub fn state_leak(psi: &StateVector, b: &FeasibleSet) -> f64 {
    let mut inside = vec![false; psi.len()];
    for &s in b.states() {
        inside[s as usize] = true;
    }
    psi.iter()
        .zip(inside)
        .filter(|(_, i)| !i)
        .map(|(a, _)| a.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Largest outside-span(B) norm of `U|x⟩` over feasible `x`.
pub fn subspace_leak(u: &DenseOperator, b: &FeasibleSet) -> Result<f64> {
    let dim = 1usize << b.n_qubits();
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::Dimension { expected: dim, got: u.nrows() });
    }
    Ok(b
        .states()
        .iter()
        .map(|&x| state_leak(&u.column(x as usize).into_owned(), b))
        .fold(0.0, f64::max))
}

/// `(e^{-itT})_{jk}` for each time, on the |J|-dimensional matrix. `j`, `k` are 0-based.
pub fn overlap_curve<S: Scalar>(
    t: &TransitionMatrix<S>,
    j: usize,
    k: usize,
    times: &[f64],
) -> Result<Vec<Complex64>> {
    let m = t.size();
    for i in [j, k] {
        if i >= m {
            return Err(Error::Index { index: i + 1, size: m });
        }
    }
    let eig = SymmetricEigen::new(t.to_dense_f64());
    let v = &eig.eigenvectors;
    Ok(times
        .iter()
        .map(|&time| {
            (0..m)
                .map(|l| {
                    let phase = Complex64::new(0.0, -time * eig.eigenvalues[l]).exp();
                    phase * (v[(j, l)] * v[(k, l)])
                })
                .sum()
        })
        .collect())
}

/// `e^{-itT}` on the |J|-dimensional matrix.
pub fn exp_transition<S: Scalar>(t: &TransitionMatrix<S>, time: f64) -> DenseOperator {
    let d = t.to_dense_f64().map(|v| Complex64::new(v, 0.0));
    (d * (-I * time)).exp()
}

/// CSV with `t,re,im,abs2` columns.
pub fn overlap_csv(times: &[f64], values: &[Complex64]) -> String {
    let mut out = String::from("t,re,im,abs2\n");
    for (t, v) in times.iter().zip(values) {
        out.push_str(&format!("{t},{},{},{}\n", v.re, v.im, v.norm_sqr()));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Uniform,
    WState,
    /// 1-based mode index `k` of the path-graph eigenvectors.
    DeltaSine(usize),
}

/// `E v` for the eigenvector `v` named by `kind`, normalized.
pub fn feasible_initial_state(b: &FeasibleSet, kind: InitialKind) -> Result<StateVector> {
    check_sim_cap(b.n_qubits())?;
    let m = b.len();
    if m == 0 {
        return Err(Error::Domain("empty feasible set".into()));
    }
    let amps: Vec<f64> = match kind {
        InitialKind::Uniform => vec![1.0; m],
        InitialKind::WState => {
            if b.states().iter().any(|s| s.count_ones() != 1) {
                return Err(Error::Domain("W state needs one-hot states".into()));
            }
            vec![1.0; m]
        }
        InitialKind::DeltaSine(k) => {
            if k == 0 || k > m {
                return Err(Error::Domain(format!("mode {k} outside 1..={m}")));
            }
            let c = k as f64 * std::f64::consts::PI / (m as f64 + 1.0);
            (1..=m).map(|j| (j as f64 * c).sin()).collect()
        }
    };
    let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut psi = StateVector::zeros(1 << b.n_qubits());
    for (s, a) in b.states().iter().zip(amps) {
        psi[*s as usize] = Complex64::new(a / norm, 0.0);
    }
    Ok(psi)
}

/// Rayleigh quotient and `‖Hψ − λψ‖`.
pub fn eigen_residual<S: Scalar>(h: &PauliSum<S>, psi: &StateVector) -> (f64, f64) {
    let hpsi = apply_pauli_sum(h, psi);
    let lambda = psi.dotc(&hpsi).re / psi.norm_squared();
    let r = (hpsi - psi * Complex64::new(lambda, 0.0)).norm();
    (lambda, r)
}
