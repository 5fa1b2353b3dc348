//! Compiled sparse form of a Pauli-sum observable for repeated application.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{check_dims, validation, Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::statevector::MAX_STATE_QUBITS;

/// Row-compressed matrix of a Pauli sum in the computational basis.
///
/// Terms sharing an X mask couple the same pairs of basis states, so each row
/// holds at most one entry per distinct X mask; entries that cancel exactly
/// (e.g. particle-number-violating couplings of a molecular Hamiltonian) are
/// dropped.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    n_qubits: usize,
    row_start: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<Complex64>,
}

impl SparseOperator {
    pub fn from_pauli_sum(sum: &PauliSum) -> Result<Self> {
        let n_qubits = sum.n_qubits();
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::Capacity(format!(
                "cannot compile a {n_qubits}-qubit operator (limit {MAX_STATE_QUBITS})"
            )));
        }
        let mut groups: BTreeMap<u64, Vec<(PauliString, Complex64)>> = BTreeMap::new();
        for (s, c) in sum.iter() {
            groups.entry(s.x_mask()).or_default().push((*s, *c));
        }
        let dim = 1usize << n_qubits;
        let mut row_start = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_start.push(0);
        for row in 0..dim {
            for (&x, terms) in &groups {
                let col = row ^ x as usize;
                // <row|P|col> = phase of P|col>
                let v: Complex64 = terms
                    .iter()
                    .map(|(s, c)| c * s.apply_to_basis(col).0)
                    .sum();
                if v.norm() > 1e-14 {
                    cols.push(col as u32);
                    values.push(v);
                }
            }
            row_start.push(cols.len());
        }
        Ok(SparseOperator {
            n_qubits,
            row_start,
            cols,
            values,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `out = O·input`.
    pub fn apply_into(&self, input: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(input.len(), self.dim());
        for (row, o) in out.iter_mut().enumerate() {
            let (a, b) = (self.row_start[row], self.row_start[row + 1]);
            let mut acc = Complex64::default();
            for (c, v) in self.cols[a..b].iter().zip(&self.values[a..b]) {
                acc += v * input[*c as usize];
            }
            *o = acc;
        }
    }

    pub fn apply(&self, input: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); input.len()];
        self.apply_into(input, &mut out);
        out
    }

    /// `<ψ|O|ψ>` without allocating.
    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        let mut total = Complex64::default();
        for (row, p) in psi.iter().enumerate() {
            let (a, b) = (self.row_start[row], self.row_start[row + 1]);
            if a == b {
                continue;
            }
            let mut acc = Complex64::default();
            for (c, v) in self.cols[a..b].iter().zip(&self.values[a..b]) {
                acc += v * psi[*c as usize];
            }
            total += p.conj() * acc;
        }
        total
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(validation(format!(
                "vector length {len} does not match operator dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_qubits(&self, n_qubits: usize) -> Result<()> {
        check_dims(self.n_qubits, n_qubits)
    }
}
