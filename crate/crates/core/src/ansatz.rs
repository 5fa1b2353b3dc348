//! Trial states `U(θ)|ψ₀⟩ = A_m(θ_m)···A_1(θ_1)|ψ₀⟩` and their energies.

use num_complex::Complex64;

use crate::error::{check_dims, validation, Result};
use crate::excitation::ExcitationElement;
use crate::problem::PenalizedHamiltonian;
use crate::statevector::{apply_excitation_raw, apply_generator_raw, dot, generator_matrix_element, StateVector};

fn check_inputs(
    h: &PenalizedHamiltonian,
    reference: &StateVector,
    elements: &[ExcitationElement],
    theta: &[f64],
) -> Result<()> {
    check_dims(h.n_qubits(), reference.n_qubits())?;
    if elements.len() != theta.len() {
        return Err(validation(format!(
            "{} elements but {} parameters",
            elements.len(),
            theta.len()
        )));
    }
    for e in elements {
        e.validate(reference.n_qubits())?;
    }
    Ok(())
}

/// Applies the ansatz evolutions to `reference` in order.
pub fn prepare_state(
    reference: &StateVector,
    elements: &[ExcitationElement],
    theta: &[f64],
) -> Result<StateVector> {
    if elements.len() != theta.len() {
        return Err(validation(format!(
            "{} elements but {} parameters",
            elements.len(),
            theta.len()
        )));
    }
    let mut state = reference.clone();
    for (e, &t) in elements.iter().zip(theta) {
        state.apply_excitation(e, t)?;
    }
    state.check_norm()?;
    Ok(state)
}

/// Energy of the trial state under the penalized Hamiltonian.
pub fn ansatz_energy(
    h: &PenalizedHamiltonian,
    reference: &StateVector,
    elements: &[ExcitationElement],
    theta: &[f64],
) -> Result<f64> {
    check_inputs(h, reference, elements, theta)?;
    let state = prepare_state(reference, elements, theta)?;
    h.penalized_expectation(&state)
}

/// Energy and its gradient in one forward and one backward sweep.
///
/// With `φ = U(θ)ψ₀` and costate `λ = H_k φ`, the backward sweep visits
/// `p = m..1`, reads `∂E/∂θ_p = 2·Re⟨λ|T_p|φ⟩` and then unwinds both vectors
/// by `A_p(−θ_p)`.
pub fn ansatz_energy_and_gradient(
    h: &PenalizedHamiltonian,
    reference: &StateVector,
    elements: &[ExcitationElement],
    theta: &[f64],
) -> Result<(f64, Vec<f64>)> {
    check_inputs(h, reference, elements, theta)?;
    let n = reference.n_qubits();
    let mut phi = reference.amplitudes().to_vec();
    for (e, &t) in elements.iter().zip(theta) {
        apply_excitation_raw(&mut phi, n, e, t);
    }
    let mut lambda = vec![Complex64::default(); phi.len()];
    h.apply_into(&phi, &mut lambda)?;
    let energy = dot(&phi, &lambda).re;

    let mut grad = vec![0.0; theta.len()];
    for p in (0..elements.len()).rev() {
        let e = &elements[p];
        grad[p] = 2.0 * generator_matrix_element(n, &lambda, &phi, e).re;
        if p > 0 {
            apply_excitation_raw(&mut phi, n, e, -theta[p]);
            apply_excitation_raw(&mut lambda, n, e, -theta[p]);
        }
    }
    Ok((energy, grad))
}

/// `E(θ) = ⟨ψ|A†(θ) H_k A(θ)|ψ⟩` for one appended element, in closed form.
///
/// Writing `A(θ)ψ = u + sinθ·v + (1 − cosθ)·w` with `u = ψ`, `v = Tψ`,
/// `w = T²ψ`, the energy is a quadratic form in the three coefficients whose
/// six matrix elements are computed once; evaluations are then exact and O(1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleParameterEnergy {
    pub e0: f64,
    uv: f64,
    uw: f64,
    vv: f64,
    vw: f64,
    ww: f64,
}

impl SingleParameterEnergy {
    /// `h_psi` must be `H_k ψ`.
    pub fn new(
        h: &PenalizedHamiltonian,
        state: &StateVector,
        h_psi: &[Complex64],
        element: &ExcitationElement,
    ) -> Result<Self> {
        check_dims(h.n_qubits(), state.n_qubits())?;
        element.validate(state.n_qubits())?;
        let n = state.n_qubits();
        let u = state.amplitudes();
        let v = apply_generator_raw(u, n, element);
        let w = apply_generator_raw(&v, n, element);
        let mut hv = vec![Complex64::default(); u.len()];
        let mut hw = vec![Complex64::default(); u.len()];
        h.apply_into(&v, &mut hv)?;
        h.apply_into(&w, &mut hw)?;
        Ok(SingleParameterEnergy {
            e0: dot(u, h_psi).re,
            uv: dot(h_psi, &v).re,
            uw: dot(h_psi, &w).re,
            vv: dot(&v, &hv).re,
            vw: dot(&v, &hw).re,
            ww: dot(&w, &hw).re,
        })
    }

    pub fn value(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let q = 1.0 - c;
        self.e0
            + s * s * self.vv
            + q * q * self.ww
            + 2.0 * s * self.uv
            + 2.0 * q * self.uw
            + 2.0 * s * q * self.vw
    }

    /// `dE/dθ` at `θ = 0`, i.e. `⟨ψ|[H_k, T]|ψ⟩`.
    pub fn gradient_at_zero(&self) -> f64 {
        2.0 * self.uv
    }
}
