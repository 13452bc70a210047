//! CX-ladder circuits for Pauli rotations and OpenQASM 2.0 output.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::decompose::PairGroup;
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::scalar::Scalar;
use crate::simulate::{basis_vector, check_sim_cap, DenseOperator, StateVector};
use crate::trotter::TrotterPlan;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    Cx(usize, usize),
    Rz(f64, usize),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct GateList {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl GateList {
    pub fn new(n: usize) -> Self {
        GateList { n, gates: Vec::new() }
    }

    pub fn extend(&mut self, other: GateList) {
        self.gates.extend(other.gates);
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cx(..))).count()
    }

    pub fn to_qasm(&self) -> String {
        let mut out = format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{}];\n", self.n);
        for g in &self.gates {
            let _ = match g {
                Gate::H(q) => writeln!(out, "h q[{q}];"),
                Gate::S(q) => writeln!(out, "s q[{q}];"),
                Gate::Sdg(q) => writeln!(out, "sdg q[{q}];"),
                Gate::Cx(a, b) => writeln!(out, "cx q[{a}],q[{b}];"),
                Gate::Rz(phi, q) => writeln!(out, "rz({phi}) q[{q}];"),
            };
        }
        out
    }

    /// Applies the gates in order to `psi`.
    pub fn apply(&self, psi: &mut StateVector) {
        let n = self.n;
        let bit = |q: usize| 1usize << (n - 1 - q);
        let i = Complex64::new(0.0, 1.0);
        for g in &self.gates {
            match *g {
                Gate::H(q) => {
                    let m = bit(q);
                    let r = std::f64::consts::FRAC_1_SQRT_2;
                    for x in 0..psi.len() {
                        if x & m == 0 {
                            let (a, b) = (psi[x], psi[x | m]);
                            psi[x] = (a + b) * r;
                            psi[x | m] = (a - b) * r;
                        }
                    }
                }
                Gate::S(q) | Gate::Sdg(q) => {
                    let ph = if matches!(g, Gate::S(_)) { i } else { -i };
                    let m = bit(q);
                    for x in 0..psi.len() {
                        if x & m != 0 {
                            psi[x] *= ph;
                        }
                    }
                }
                Gate::Cx(c, t) => {
                    let (mc, mt) = (bit(c), bit(t));
                    for x in 0..psi.len() {
                        if x & mc != 0 && x & mt == 0 {
                            psi.swap_rows(x, x | mt);
                        }
                    }
                }
                Gate::Rz(phi, q) => {
                    let m = bit(q);
                    let lo = Complex64::new(0.0, -phi / 2.0).exp();
                    let hi = Complex64::new(0.0, phi / 2.0).exp();
                    for x in 0..psi.len() {
                        psi[x] *= if x & m == 0 { lo } else { hi };
                    }
                }
            }
        }
    }

    /// Dense unitary of the whole list, column by column.
    pub fn unitary(&self) -> Result<DenseOperator> {
        check_sim_cap(self.n)?;
        let dim = 1usize << self.n;
        let mut u = DenseOperator::zeros(dim, dim);
        for col in 0..dim {
            let mut psi = basis_vector(self.n, col as u64);
            self.apply(&mut psi);
            u.set_column(col, &psi);
        }
        Ok(u)
    }
}

/// `e^{-iθP}`: basis change, CX ladder down the support, `rz(2θ)` on the last
/// support qubit, then the mirror image. Identity strings emit nothing.
pub fn emit_pauli_rotation(p: &PauliString, theta: f64) -> GateList {
    let mut out = GateList::new(p.n_qubits());
    let support = p.support();
    let Some(&last) = support.last() else {
        log::warn!("skipping identity rotation (global phase)");
        return out;
    };
    let g = &mut out.gates;
    for &q in &support {
        match p.letter(q) {
            'X' => g.push(Gate::H(q)),
            'Y' => {
                g.push(Gate::Sdg(q));
                g.push(Gate::H(q));
            }
            _ => {}
        }
    }
    for w in support.windows(2) {
        g.push(Gate::Cx(w[0], w[1]));
    }
    g.push(Gate::Rz(2.0 * theta, last));
    for w in support.windows(2).rev() {
        g.push(Gate::Cx(w[0], w[1]));
    }
    for &q in &support {
        match p.letter(q) {
            'X' => g.push(Gate::H(q)),
            'Y' => {
                g.push(Gate::H(q));
                g.push(Gate::S(q));
            }
            _ => {}
        }
    }
    out
}

/// Circuit for `(U_1 U_2 ⋯ U_Q)^r`: within one repetition the groups run in
/// reverse plan order in time, strings of a group in label order, with angle
/// `β · coeff`.
pub fn emit_plan<S: Scalar>(
    plan: &TrotterPlan,
    n: usize,
    groups: &[PairGroup<S>],
    beta: f64,
) -> Result<GateList> {
    if let Some(g) = groups.iter().find(|g| g.strings.n_qubits() != n) {
        return Err(Error::Dimension { expected: n, got: g.strings.n_qubits() });
    }
    let sp = plan.string_plan(n, groups)?;
    if let Some(i) = sp.groups.iter().position(|g| !g.is_commuting()) {
        return Err(Error::Plan(format!("strings of plan group {} do not commute", i + 1)));
    }
    let mut one = GateList::new(n);
    for g in sp.groups.iter().rev() {
        for (p, c) in g.iter() {
            one.extend(emit_pauli_rotation(p, beta * c.to_f64_lossy()));
        }
    }
    let mut out = GateList::new(n);
    for _ in 0..plan.repetitions {
        out.gates.extend(one.gates.iter().cloned());
    }
    Ok(out)
}
