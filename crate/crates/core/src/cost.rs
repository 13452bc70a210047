//! CX and single-qubit rotation counts for Pauli-rotation circuits.

use serde::{Deserialize, Serialize};

use crate::decompose::PairGroup;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::scalar::Scalar;

/// `2(w-1)` CX gates per string of weight `w >= 2`.
pub fn cx_cost<S: Scalar>(s: &PauliSum<S>) -> u64 {
    s.strings().map(|p| p.weight()).filter(|&w| w >= 2).map(|w| 2 * (w as u64 - 1)).sum()
}

/// Number of weight-1 strings. Identity terms are a global phase and count for nothing.
pub fn u3_count<S: Scalar>(s: &PauliSum<S>) -> u64 {
    s.strings().filter(|p| p.weight() == 1).count() as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub cx_count: u64,
    pub u3_count: u64,
    pub term_count: u64,
    /// 1-based pair and its CX cost.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_group: Option<Vec<((usize, usize), u64)>>,
}

impl CostReport {
    pub fn of_sum<S: Scalar>(s: &PauliSum<S>) -> Self {
        CostReport {
            cx_count: cx_cost(s),
            u3_count: u3_count(s),
            term_count: s.len() as u64,
            per_group: None,
        }
    }

    /// Totals are summed over groups without cross-group cancellation,
    /// which is what a pair-by-pair Trotterized circuit executes.
    pub fn of_groups<S: Scalar>(groups: &[PairGroup<S>]) -> Self {
        let per: Vec<((usize, usize), u64)> = groups
            .iter()
            .map(|g| ((g.pair.0 + 1, g.pair.1 + 1), cx_cost(&g.strings)))
            .collect();
        CostReport {
            cx_count: per.iter().map(|(_, c)| c).sum(),
            u3_count: groups.iter().map(|g| u3_count(&g.strings)).sum(),
            term_count: groups.iter().map(|g| g.strings.len() as u64).sum(),
            per_group: Some(per),
        }
    }

    /// `| cx | u3 | terms |` row.
    pub fn markdown_row(&self, label: &str) -> String {
        format!("| {label} | {} | {} | {} |", self.cx_count, self.u3_count, self.term_count)
    }
}

/// CX cost of one unaugmented one-hot pair term on `n` qubits:
/// `Σ_{l=2..n} 2(l-1) f_n^l` with `f_2^2 = 2`, `f_n^l = f_{n-1}^l + f_{n-1}^{l-1}`.
pub fn xy_pair_cost(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::Domain(format!("xy_pair_cost needs n >= 2, got {n}")));
    }
    // f[l] for the current n; index 0 and 1 stay zero.
    let mut f = vec![0u128; n + 1];
    f[2] = 2;
    for _ in 3..=n {
        for l in (3..=n).rev() {
            f[l] += f[l - 1];
        }
    }
    let total: u128 = (2..=n).map(|l| 2 * (l as u128 - 1) * f[l]).sum();
    u64::try_from(total).map_err(|_| Error::Domain(format!("xy_pair_cost overflows at n = {n}")))
}
