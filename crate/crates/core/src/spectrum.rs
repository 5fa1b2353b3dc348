//! Exact diagonalization, optionally restricted to a particle-number sector.
//!
//! This is the full-configuration-interaction oracle that adaptive runs are
//! checked against. The Hamiltonian block is assembled directly from the Pauli
//! terms' action on basis states, independently of [`crate::operator`].

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::problem::MolecularProblem;
use crate::statevector::StateVector;

/// Largest register for which dense diagonalization is attempted.
pub const MAX_DENSE_QUBITS: usize = 16;
/// Largest (sector) matrix dimension for dense diagonalization.
pub const MAX_DENSE_DIM: usize = 8192;

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending eigenvalues.
    pub energies: Vec<f64>,
    /// Eigenvectors embedded in the full register, when requested.
    pub states: Option<Vec<StateVector>>,
}

impl Spectrum {
    /// Groups eigenvalues closer than `tol` into `(energy, degeneracy)` levels.
    pub fn levels(&self, tol: f64) -> Vec<(f64, usize)> {
        group_levels(&self.energies, tol)
    }
}

pub fn group_levels(energies: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut anchor = f64::NAN;
    for &e in energies {
        match out.last_mut() {
            Some((_, count)) if (e - anchor).abs() <= tol => *count += 1,
            _ => {
                anchor = e;
                out.push((e, 1));
            }
        }
    }
    out
}

/// Basis indices with the given Hamming weight, ascending.
pub fn sector_basis(n_qubits: usize, weight: Option<usize>) -> Vec<usize> {
    (0..1usize << n_qubits)
        .filter(|b| weight.is_none_or(|w| b.count_ones() as usize == w))
        .collect()
}

/// Dense Hermitian matrix of `h` restricted to `basis`.
pub fn sector_matrix(h: &PauliSum, basis: &[usize]) -> DMatrix<Complex64> {
    let dim = basis.len();
    let mut position = vec![usize::MAX; 1usize << h.n_qubits()];
    for (i, &b) in basis.iter().enumerate() {
        position[b] = i;
    }
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, &b) in basis.iter().enumerate() {
        for (s, c) in h.iter() {
            let (phase, target) = s.apply_to_basis(b);
            let row = position[target];
            if row != usize::MAX {
                m[(row, col)] += c * phase;
            }
        }
    }
    m
}

/// The `k` lowest eigenvalues of the problem Hamiltonian, restricted to the
/// Hamming-weight `sector` when given.
pub fn exact_spectrum(
    problem: &MolecularProblem,
    k: usize,
    sector: Option<usize>,
    with_states: bool,
) -> Result<Spectrum> {
    hamiltonian_spectrum(&problem.hamiltonian, k, sector, with_states)
}

pub fn hamiltonian_spectrum(
    h: &PauliSum,
    k: usize,
    sector: Option<usize>,
    with_states: bool,
) -> Result<Spectrum> {
    let n = h.n_qubits();
    if k == 0 {
        return Err(Error::Validation("requested zero eigenvalues".into()));
    }
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Capacity(format!(
            "dense diagonalization supports at most {MAX_DENSE_QUBITS} qubits, got {n}"
        )));
    }
    if let Some(w) = sector {
        if w > n {
            return Err(Error::Validation(format!("sector weight {w} exceeds {n} qubits")));
        }
    }
    let basis = sector_basis(n, sector);
    let dim = basis.len();
    if dim > MAX_DENSE_DIM {
        return Err(Error::Capacity(format!(
            "sector dimension {dim} exceeds the dense limit {MAX_DENSE_DIM}"
        )));
    }
    let m = sector_matrix(h, &basis);
    let k = k.min(dim);
    let is_real = m.iter().all(|z| z.im.abs() < 1e-14);

    let (mut pairs, vectors): (Vec<(f64, usize)>, Option<DMatrix<Complex64>>) = if is_real {
        let re = m.map(|z| z.re);
        if with_states {
            let eig = SymmetricEigen::new(re);
            let vals = eig.eigenvalues.iter().copied().zip(0..).collect();
            (vals, Some(eig.eigenvectors.map(|x| Complex64::new(x, 0.0))))
        } else {
            let vals = re.symmetric_eigenvalues();
            (vals.iter().copied().zip(0..).collect(), None)
        }
    } else if with_states {
        let eig = SymmetricEigen::new(m);
        let vals = eig.eigenvalues.iter().copied().zip(0..).collect();
        (vals, Some(eig.eigenvectors))
    } else {
        let vals = m.symmetric_eigenvalues();
        (vals.iter().copied().zip(0..).collect(), None)
    };
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.truncate(k);

    let states = match vectors {
        Some(v) => {
            let mut out = Vec::with_capacity(k);
            for &(_, col) in &pairs {
                let mut amps = vec![Complex64::default(); 1usize << n];
                for (i, &b) in basis.iter().enumerate() {
                    amps[b] = v[(i, col)];
                }
                let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                amps.iter_mut().for_each(|a| *a /= norm);
                out.push(StateVector::from_amplitudes(amps)?);
            }
            Some(out)
        }
        None => None,
    };
    Ok(Spectrum {
        energies: pairs.into_iter().map(|(e, _)| e).collect(),
        states,
    })
}
