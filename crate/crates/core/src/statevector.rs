//! Dense statevector engine.
//!
//! Basis index `b` has qubit `q` occupied iff bit `q` of `b` is set, so qubit 0
//! is the least significant bit and corresponds to spin-orbital 0.
//!
//! Excitation evolutions are applied as Givens rotations on the amplitude pairs
//! they couple: every generator `T` maps a "source" basis state (excited pair
//! occupied, target pair empty) to `±` its "destination" partner and back with
//! the opposite sign, and annihilates everything else. Hence `T^3 = -T` and
//! `e^{θT} = 1 + sin θ · T + (1 - cos θ) · T^2`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{check_dims, validation, Error, Result};
use crate::excitation::{Excitation, ExcitationElement, Flavor};
use crate::pauli::{PauliSum, PauliTerm};

/// Largest register the dense engine accepts.
pub const MAX_STATE_QUBITS: usize = 24;

/// Norm drift tolerated before a numerical-health error is raised.
pub const NORM_DRIFT_TOLERANCE: f64 = 1e-8;

const QSV_MAGIC: &[u8; 4] = b"QSV1";

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
        return Err(Error::Capacity(format!(
            "statevector register must hold 1..={MAX_STATE_QUBITS} qubits, got {n_qubits}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(validation(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        let mut amplitudes = vec![Complex64::default(); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Wraps an amplitude vector, which must be normalized to within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(validation(format!("amplitude count {dim} is not a power of two >= 2")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let state = StateVector { n_qubits, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(validation(format!("state is not normalized (|ψ|² = {norm})")));
        }
        Ok(state)
    }

    /// Hartree-Fock-style reference: the `n_electrons` lowest qubits occupied.
    pub fn reference(n_qubits: usize, n_electrons: usize) -> Result<Self> {
        prepare_reference(n_qubits, n_electrons)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Fails if the norm has drifted by more than [`NORM_DRIFT_TOLERANCE`].
    pub fn check_norm(&self) -> Result<()> {
        let drift = (self.norm_sqr().sqrt() - 1.0).abs();
        if drift > NORM_DRIFT_TOLERANCE {
            return Err(Error::Numerical(format!("statevector norm drifted by {drift:e}")));
        }
        Ok(())
    }

    /// Overwrites the amplitudes with those of `other` (same register).
    pub fn copy_from(&mut self, other: &StateVector) -> Result<()> {
        check_dims(self.n_qubits, other.n_qubits)?;
        self.amplitudes.copy_from_slice(&other.amplitudes);
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        inner_product(self, other)
    }

    /// Expectation of the occupation of every qubit summed, i.e. the particle number.
    pub fn particle_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(b, a)| a.norm_sqr() * b.count_ones() as f64)
            .sum()
    }

    /// `<ψ|O|ψ>` for a Hermitian Pauli sum.
    pub fn expectation(&self, observable: &PauliSum) -> Result<f64> {
        expectation(self, observable)
    }

    /// `ψ <- e^{θT} ψ`.
    pub fn apply_excitation(&mut self, element: &ExcitationElement, theta: f64) -> Result<()> {
        element.validate(self.n_qubits)?;
        if !theta.is_finite() {
            return Err(validation(format!("non-finite excitation angle {theta}")));
        }
        rotate_pairs(&mut self.amplitudes, self.n_qubits, element, theta);
        Ok(())
    }

    /// `ψ <- exp(i·angle·P)ψ` for a Pauli string `P` with coefficient `±1`.
    pub fn apply_pauli_exponential(&mut self, term: &PauliTerm, angle: f64) -> Result<()> {
        check_dims(self.n_qubits, term.n_qubits())?;
        let c = term.coefficient();
        if c.im.abs() > 1e-12 || (c.re.abs() - 1.0).abs() > 1e-12 {
            return Err(validation(format!(
                "Pauli exponential needs a ±1 coefficient, got {c}"
            )));
        }
        if !angle.is_finite() {
            return Err(validation(format!("non-finite rotation angle {angle}")));
        }
        let angle = angle * c.re.signum();
        let (cos, sin) = (angle.cos(), angle.sin());
        let isin = Complex64::new(0.0, sin);
        let string = term.string();
        let x = string.x_mask() as usize;
        let amps = &mut self.amplitudes;
        if x == 0 {
            for (b, a) in amps.iter_mut().enumerate() {
                let (phase, _) = string.apply_to_basis(b);
                *a *= cos + isin * phase;
            }
            return Ok(());
        }
        let pivot = 1usize << x.trailing_zeros();
        for b in 0..amps.len() {
            if b & pivot != 0 {
                continue;
            }
            let partner = b ^ x;
            let (phase_b, _) = string.apply_to_basis(b);
            let (phase_p, _) = string.apply_to_basis(partner);
            let (ab, ap) = (amps[b], amps[partner]);
            amps[b] = ab * cos + isin * phase_p * ap;
            amps[partner] = ap * cos + isin * phase_b * ab;
        }
        Ok(())
    }

    /// Writes the binary `QSV1` dump.
    pub fn write_qsv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(QSV_MAGIC)?;
        w.write_all(&(self.n_qubits as u32).to_le_bytes())?;
        for a in &self.amplitudes {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a binary `QSV1` dump.
    pub fn read_qsv<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != QSV_MAGIC {
            return Err(validation("missing QSV1 magic"));
        }
        let mut word = [0u8; 4];
        r.read_exact(&mut word)?;
        let n_qubits = u32::from_le_bytes(word) as usize;
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut amplitudes = Vec::with_capacity(dim);
        let mut buf = [0u8; 16];
        for _ in 0..dim {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
            let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
            amplitudes.push(Complex64::new(re, im));
        }
        let state = StateVector { n_qubits, amplitudes };
        state.check_norm()?;
        Ok(state)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_qsv(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_qsv(BufReader::new(File::open(path)?))
    }
}

/// Basis state with qubits `0..n_electrons` occupied.
pub fn prepare_reference(n_qubits: usize, n_electrons: usize) -> Result<StateVector> {
    if n_electrons > n_qubits {
        return Err(validation(format!(
            "{n_electrons} electrons do not fit in {n_qubits} spin-orbitals"
        )));
    }
    StateVector::basis(n_qubits, (1usize << n_electrons) - 1)
}

/// `<a|b>`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    check_dims(a.n_qubits, b.n_qubits)?;
    Ok(dot(&a.amplitudes, &b.amplitudes))
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `<ψ|O|ψ>` evaluated term by term; `O` must have real coefficients.
pub fn expectation(state: &StateVector, observable: &PauliSum) -> Result<f64> {
    check_dims(state.n_qubits, observable.n_qubits())?;
    if !observable.is_hermitian(1e-12) {
        return Err(validation("observable has non-real coefficients"));
    }
    let amps = &state.amplitudes;
    let mut total = Complex64::default();
    for (string, coeff) in observable.iter() {
        let mut acc = Complex64::default();
        for (b, a) in amps.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let (phase, target) = string.apply_to_basis(b);
            acc += amps[target].conj() * phase * a;
        }
        total += coeff * acc;
    }
    if total.im.abs() > 1e-10 * total.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "expectation has imaginary residue {:e}",
            total.im
        )));
    }
    Ok(total.re)
}

/// Inserts zero bits at the given ascending positions.
#[inline]
fn spread(mut r: usize, positions: &[usize]) -> usize {
    for &p in positions {
        let low = r & ((1usize << p) - 1);
        r = ((r >> p) << (p + 1)) | low;
    }
    r
}

#[inline]
fn parity_below(b: usize, q: usize) -> bool {
    (b & ((1usize << q) - 1)).count_ones() & 1 == 1
}

/// Sign of `c†_i c_k |b>` (single) or `c†_i c†_j c_k c_l |b>` (double) for a
/// source basis state `b`; always `+1` for the qubit flavor.
#[inline]
fn pair_sign(excitation: Excitation, flavor: Flavor, b: usize) -> f64 {
    if flavor == Flavor::Qubit {
        return 1.0;
    }
    // each ladder operator on qubit q contributes the parity of the occupied
    // qubits below q; creation and annihilation both just flip bit q
    let mut odd = false;
    let mut b = b;
    let mut flip = |q: usize| {
        odd ^= parity_below(b, q);
        b ^= 1 << q;
    };
    match excitation {
        Excitation::Single { i, k } => {
            flip(k);
            flip(i);
        }
        Excitation::Double { i, j, k, l } => {
            flip(l);
            flip(k);
            flip(j);
            flip(i);
        }
    }
    if odd {
        -1.0
    } else {
        1.0
    }
}

/// Visits every coupled `(source, destination, sign)` triple of an excitation.
#[inline]
fn for_each_pair(n_qubits: usize, element: &ExcitationElement, mut f: impl FnMut(usize, usize, f64)) {
    let (dst_mask, src_mask) = element.masks();
    let mut positions = element.indices();
    positions.sort_unstable();
    let free = n_qubits - positions.len();
    let excitation = element.excitation();
    let flavor = element.flavor();
    for r in 0..(1usize << free) {
        let base = spread(r, &positions);
        let src = base | src_mask;
        let dst = base | dst_mask;
        f(src, dst, pair_sign(excitation, flavor, src));
    }
}

fn rotate_pairs(amps: &mut [Complex64], n_qubits: usize, element: &ExcitationElement, theta: f64) {
    if theta == 0.0 {
        return;
    }
    let (sin, cos) = theta.sin_cos();
    for_each_pair(n_qubits, element, |src, dst, s| {
        let (a, b) = (amps[src], amps[dst]);
        amps[src] = a * cos - b * (s * sin);
        amps[dst] = a * (s * sin) + b * cos;
    });
}

/// `T|ψ>` for the generator of `element` (not normalized).
pub fn apply_generator(state: &StateVector, element: &ExcitationElement) -> Result<Vec<Complex64>> {
    element.validate(state.n_qubits)?;
    Ok(apply_generator_raw(&state.amplitudes, state.n_qubits, element))
}

pub(crate) fn apply_generator_raw(
    amps: &[Complex64],
    n_qubits: usize,
    element: &ExcitationElement,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); amps.len()];
    for_each_pair(n_qubits, element, |src, dst, s| {
        out[dst] = amps[src] * s;
        out[src] = -amps[dst] * s;
    });
    out
}

/// `<bra|T|ket>` without materializing `T|ket>`.
pub(crate) fn generator_matrix_element(
    n_qubits: usize,
    bra: &[Complex64],
    ket: &[Complex64],
    element: &ExcitationElement,
) -> Complex64 {
    let mut acc = Complex64::default();
    for_each_pair(n_qubits, element, |src, dst, s| {
        acc += (bra[dst].conj() * ket[src] - bra[src].conj() * ket[dst]) * s;
    });
    acc
}

/// Raw in-place rotation on an amplitude slice of a `n_qubits` register.
pub(crate) fn apply_excitation_raw(
    amps: &mut [Complex64],
    n_qubits: usize,
    element: &ExcitationElement,
    theta: f64,
) {
    rotate_pairs(amps, n_qubits, element, theta);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;
    use std::f64::consts::PI;

    #[test]
    fn reference_states() {
        let s = prepare_reference(4, 2).unwrap();
        assert_eq!(s.amplitudes()[3], Complex64::new(1.0, 0.0));
        let z = prepare_reference(1, 0).unwrap();
        assert_eq!(z.amplitudes()[0], Complex64::new(1.0, 0.0));
        let big = prepare_reference(12, 4).unwrap();
        let idx = big.amplitudes().iter().position(|a| a.re == 1.0).unwrap();
        assert_eq!(idx.count_ones(), 4);
        assert!(prepare_reference(3, 4).is_err());
    }

    #[test]
    fn zero_angle_is_identity() {
        let mut s = prepare_reference(4, 2).unwrap();
        let before = s.clone();
        let e = ExcitationElement::double(Flavor::Qubit, 0, 1, 2, 3).unwrap();
        s.apply_excitation(&e, 0.0).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn double_qubit_excitation_quarter_turn() {
        let mut s = StateVector::basis(4, 0b1100).unwrap();
        let e = ExcitationElement::double(Flavor::Qubit, 0, 1, 2, 3).unwrap();
        s.apply_excitation(&e, PI / 2.0).unwrap();
        assert!((s.amplitudes()[0b0011] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(s.amplitudes()[0b1100].norm() < 1e-15);
    }

    #[test]
    fn fermionic_single_picks_up_parity_sign() {
        // qubit 1 occupied, qubit 2 empty, source qubit 3 occupied
        let theta = 0.37;
        let e_f = ExcitationElement::single(Flavor::Fermionic, 0, 3).unwrap();
        let e_q = e_f.with_flavor(Flavor::Qubit);
        let mut f = StateVector::basis(4, 0b1010).unwrap();
        let mut q = f.clone();
        f.apply_excitation(&e_f, theta).unwrap();
        q.apply_excitation(&e_q, theta).unwrap();
        let (fa, qa) = (f.amplitudes()[0b0011], q.amplitudes()[0b0011]);
        assert!((fa + qa).norm() < 1e-15);
        assert!((qa.re - theta.sin()).abs() < 1e-15);
    }

    #[test]
    fn diagonal_expectations() {
        let z0 = PauliSum::from(PauliTerm::real(1.0, &[(0, Pauli::Z)], 1).unwrap());
        let s = StateVector::basis(1, 0).unwrap();
        assert_eq!(s.expectation(&z0).unwrap(), 1.0);

        let total = PauliSum::from_terms(
            4,
            (0..4).map(|q| PauliTerm::real(1.0, &[(q, Pauli::Z)], 4).unwrap()),
        )
        .unwrap();
        let hf = prepare_reference(4, 2).unwrap();
        assert_eq!(hf.expectation(&total).unwrap(), 0.0);
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        let t = PauliTerm::new(Complex64::new(0.0, 1.0), &[(0, Pauli::X)], 1).unwrap();
        let s = StateVector::basis(1, 0).unwrap();
        assert!(s.expectation(&PauliSum::from(t)).is_err());
    }

    #[test]
    fn inner_products() {
        let a = StateVector::basis(2, 1).unwrap();
        let b = StateVector::basis(2, 2).unwrap();
        assert_eq!(a.inner(&a).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(a.inner(&b).unwrap(), Complex64::default());
        let c = StateVector::basis(3, 1).unwrap();
        assert!(a.inner(&c).is_err());
    }

    #[test]
    fn z_rotation_by_pi() {
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut s = StateVector::from_amplitudes(vec![amp, amp]).unwrap();
        let z = PauliTerm::real(1.0, &[(0, Pauli::Z)], 1).unwrap();
        s.apply_pauli_exponential(&z, PI).unwrap();
        // exp(iπZ) = -I
        assert!((s.amplitudes()[0] + amp).norm() < 1e-15);
        assert!((s.amplitudes()[1] + amp).norm() < 1e-15);
        let scaled = PauliTerm::real(0.5, &[(0, Pauli::Z)], 1).unwrap();
        assert!(s.apply_pauli_exponential(&scaled, 1.0).is_err());
    }

    #[test]
    fn qsv_round_trip() {
        let mut s = prepare_reference(3, 1).unwrap();
        let e = ExcitationElement::single(Flavor::Fermionic, 0, 2).unwrap();
        s.apply_excitation(&e, 0.3).unwrap();
        let mut buf = Vec::new();
        s.write_qsv(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"QSV1");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 3);
        assert_eq!(buf.len(), 8 + 16 * 8);
        let back = StateVector::read_qsv(&buf[..]).unwrap();
        assert_eq!(back, s);
        assert!(StateVector::read_qsv(&b"QSV2\x01\0\0\0"[..]).is_err());
    }

    #[test]
    fn norm_drift_is_reported() {
        let mut s = prepare_reference(2, 1).unwrap();
        s.amplitudes[1] = Complex64::new(1.0 + 1e-6, 0.0);
        assert!(matches!(s.check_norm(), Err(Error::Numerical(_))));
    }
}
