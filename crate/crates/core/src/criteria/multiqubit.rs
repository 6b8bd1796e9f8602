use serde::{Deserialize, Serialize};

use super::realign_matrix;
use crate::error::{Error, Result};
use crate::numerics::{min_eigenvalue, trace_norm, ComplexMatrix};
use crate::states::{permute_qubit_matrix, Bipartition, MultiQubitState};

fn check_partition(s: &MultiQubitState, p: &Bipartition) -> Result<()> {
    if p.qubits() != s.qubits() {
        return Err(Error::BadPartition(format!(
            "partition is over {} qubits but the state has {}",
            p.qubits(),
            s.qubits()
        )));
    }
    Ok(())
}

/// Transposes the tensor factors of every qubit in `p.left()`.
pub fn multiqubit_partial_transpose(s: &MultiQubitState, p: &Bipartition) -> Result<ComplexMatrix> {
    check_partition(s, p)?;
    let n = s.qubits();
    let mask = p
        .left()
        .iter()
        .fold(0usize, |m, &q| m | (1 << (n - 1 - q)));
    let rho = s.rho();
    let dim = rho.rows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let r2 = (r & !mask) | (c & mask);
            let c2 = (c & !mask) | (r & mask);
            out[(r2, c2)] = rho[(r, c)];
        }
    }
    Ok(out)
}

/// Realignment with `p.left()` as the first party and `p.right()` as the
/// second; the result is `4^|left| x 4^|right|`.
pub fn multiqubit_realign(s: &MultiQubitState, p: &Bipartition) -> Result<ComplexMatrix> {
    check_partition(s, p)?;
    let order: Vec<usize> = p.left().iter().chain(p.right()).copied().collect();
    let grouped = permute_qubit_matrix(s.rho(), s.qubits(), &order)?;
    Ok(realign_matrix(
        &grouped,
        1 << p.left().len(),
        1 << p.right().len(),
    ))
}

/// PPT and CCNR quantities across one bipartition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartitionReport {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub pt_min_eigenvalue: f64,
    pub realigned_trace_norm: f64,
}

pub fn bipartition_report(s: &MultiQubitState, p: &Bipartition) -> Result<BipartitionReport> {
    Ok(BipartitionReport {
        left: p.left().to_vec(),
        right: p.right().to_vec(),
        pt_min_eigenvalue: min_eigenvalue(&multiqubit_partial_transpose(s, p)?)?,
        realigned_trace_norm: trace_norm(&multiqubit_realign(s, p)?),
    })
}
