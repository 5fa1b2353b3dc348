//! Dense-matrix oracles built directly from basis-state definitions.
#![allow(dead_code)]

use std::path::PathBuf;

use adapt_xstate::{
    Excitation, ExcitationElement, Flavor, MolecularProblem, Pauli, PauliString, PauliSum, PauliTerm, StateVector,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn fixture(name: &str) -> MolecularProblem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name);
    MolecularProblem::load(path).unwrap()
}

fn single_qubit(p: Option<Pauli>) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        None => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Some(Pauli::X) => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Some(Pauli::Y) => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Some(Pauli::Z) => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Kronecker product with qubit 0 as the least significant factor.
pub fn pauli_string_matrix(s: &PauliString, n: usize) -> CMat {
    let ops = s.ops();
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in 0..n {
        let p = ops.iter().find(|(i, _)| *i == q).map(|(_, p)| *p);
        m = single_qubit(p).kronecker(&m);
    }
    m
}

pub fn pauli_sum_matrix(sum: &PauliSum) -> CMat {
    let n = sum.n_qubits();
    let mut m = CMat::zeros(1 << n, 1 << n);
    for (s, coeff) in sum.iter() {
        m += pauli_string_matrix(s, n) * *coeff;
    }
    m
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(1 << n, 1 << n)
}

/// Creation operator on qubit `q` from its action on basis states.
pub fn creation(n: usize, q: usize, flavor: Flavor) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for b in 0..dim {
        if b & (1 << q) != 0 {
            continue;
        }
        let sign = match flavor {
            Flavor::Qubit => 1.0,
            Flavor::Fermionic => {
                if (b & ((1 << q) - 1)).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                }
            }
        };
        m[(b | (1 << q), b)] = c(sign, 0.0);
    }
    m
}

pub fn annihilation(n: usize, q: usize, flavor: Flavor) -> CMat {
    creation(n, q, flavor).adjoint()
}

/// Anti-Hermitian generator assembled from ladder operators.
pub fn generator_matrix(e: &ExcitationElement, n: usize) -> CMat {
    let f = e.flavor();
    let forward = match e.excitation() {
        Excitation::Single { i, k } => creation(n, i, f) * annihilation(n, k, f),
        Excitation::Double { i, j, k, l } => {
            creation(n, i, f) * creation(n, j, f) * annihilation(n, k, f) * annihilation(n, l, f)
        }
    };
    &forward - forward.adjoint()
}

pub fn state_vector(s: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(s.amplitudes())
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

pub fn random_string(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    let ops: Vec<(usize, Pauli)> = (0..n)
        .filter_map(|q| match rng.gen_range(0..4) {
            0 => None,
            1 => Some((q, Pauli::X)),
            2 => Some((q, Pauli::Y)),
            _ => Some((q, Pauli::Z)),
        })
        .collect();
    PauliString::from_ops(&ops).unwrap()
}

/// Random Hermitian observable with real coefficients.
pub fn random_hamiltonian(rng: &mut ChaCha8Rng, n: usize, n_terms: usize) -> PauliSum {
    let terms: Vec<PauliTerm> = (0..n_terms)
        .map(|_| {
            let s = random_string(rng, n);
            PauliTerm::from_string(c(rng.gen_range(-1.0..1.0), 0.0), s, n).unwrap()
        })
        .collect();
    PauliSum::from_terms(n, terms).unwrap()
}

pub fn random_element(rng: &mut ChaCha8Rng, n: usize) -> ExcitationElement {
    let flavor = if rng.gen_bool(0.5) { Flavor::Qubit } else { Flavor::Fermionic };
    let pool = adapt_xstate::pool::pool(n, flavor).unwrap();
    pool[rng.gen_range(0..pool.len())]
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
