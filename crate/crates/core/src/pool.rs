//! Ansatz-element pools.
//!
//! Pools enumerate elements in canonical form and lexicographic index order:
//! all singles `(i<k)` first, then for each 4-subset `a<b<c<d` the three
//! pairings `(a,b|c,d)`, `(a,c|b,d)`, `(a,d|b,c)`. The order is the tie-break
//! order of the adaptive loop.
//!
//! For 12 spin-orbitals the full pool has `C(12,2) + 3·C(12,4) = 1551`
//! elements. Smaller generalized-UCCSD counts such as 1521 for the same
//! register do not correspond to this pool.

use std::fmt::Write as _;

use crate::error::{validation, Result};
use crate::excitation::{Excitation, ExcitationElement, Flavor};

/// `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Predicted size of the full single+double pool on `n` qubits.
pub fn pool_size(n_qubits: usize) -> usize {
    binomial(n_qubits, 2) + 3 * binomial(n_qubits, 4)
}

fn full_pool(n_qubits: usize, flavor: Flavor) -> Result<Vec<ExcitationElement>> {
    if n_qubits < 2 {
        return Err(validation(format!("a pool needs at least 2 qubits, got {n_qubits}")));
    }
    let n = n_qubits;
    let mut pool = Vec::with_capacity(pool_size(n));
    for i in 0..n {
        for k in i + 1..n {
            pool.push(ExcitationElement::single(flavor, i, k)?);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    pool.push(ExcitationElement::double(flavor, a, b, c, d)?);
                    pool.push(ExcitationElement::double(flavor, a, c, b, d)?);
                    pool.push(ExcitationElement::double(flavor, a, d, b, c)?);
                }
            }
        }
    }
    Ok(pool)
}

/// All unique single and double qubit excitations.
pub fn qubit_pool(n_qubits: usize) -> Result<Vec<ExcitationElement>> {
    full_pool(n_qubits, Flavor::Qubit)
}

/// All unique single and double fermionic excitations (the generalized UCCSD set).
pub fn fermionic_pool(n_qubits: usize) -> Result<Vec<ExcitationElement>> {
    full_pool(n_qubits, Flavor::Fermionic)
}

pub fn pool(n_qubits: usize, flavor: Flavor) -> Result<Vec<ExcitationElement>> {
    full_pool(n_qubits, flavor)
}

/// Fermionic excitations from the occupied reference orbitals `0..n_electrons`
/// into the virtual ones, in canonical form.
pub fn uccsd_elements(n_qubits: usize, n_electrons: usize) -> Result<Vec<ExcitationElement>> {
    if n_electrons == 0 || n_electrons >= n_qubits {
        return Err(validation(format!(
            "UCCSD needs 0 < n_electrons < n_qubits, got {n_electrons} of {n_qubits}"
        )));
    }
    let f = Flavor::Fermionic;
    let occ = 0..n_electrons;
    let virt = n_electrons..n_qubits;
    let mut out = Vec::new();
    for o in occ.clone() {
        for v in virt.clone() {
            out.push(ExcitationElement::single(f, o, v)?);
        }
    }
    for o1 in occ.clone() {
        for o2 in o1 + 1..n_electrons {
            for v1 in virt.clone() {
                for v2 in v1 + 1..n_qubits {
                    out.push(ExcitationElement::double(f, o1, o2, v1, v2)?);
                }
            }
        }
    }
    Ok(out)
}

/// Keeps only excitations that conserve spin projection (interleaved ordering).
pub fn spin_preserving(pool: Vec<ExcitationElement>) -> Vec<ExcitationElement> {
    pool.into_iter().filter(|e| e.preserves_spin()).collect()
}

/// Pool listing as CSV `kind,flavor,i,j,k,l`; singles leave `j` and `l` empty.
pub fn pool_csv(pool: &[ExcitationElement]) -> String {
    let mut out = String::from("kind,flavor,i,j,k,l\n");
    for e in pool {
        let _ = match e.excitation() {
            Excitation::Single { i, k } => writeln!(out, "single,{},{i},,{k},", e.flavor()),
            Excitation::Double { i, j, k, l } => {
                writeln!(out, "double,{},{i},{j},{k},{l}", e.flavor())
            }
        };
    }
    out
}
