//! Statevector simulation of adaptive variational eigensolvers built from
//! qubit and fermionic excitation evolutions, with overlap penalties for
//! excited states.
//!
//! The usual entry points are [`MolecularProblem::load`], [`run_adapt`] and
//! [`excited_ladder`]; [`exact_spectrum`] provides reference energies for
//! small registers.

pub mod adapt;
pub mod ansatz;
pub mod cost;
pub mod error;
pub mod excitation;
pub mod operator;
pub mod optimize;
pub mod pauli;
pub mod pool;
pub mod problem;
pub mod spectrum;
pub mod statevector;

pub use adapt::{
    excited_ladder, fixed_ansatz_ladder, run_adapt, run_adapt_with, run_fixed_ansatz, screen_pool_energy_reduction,
    screen_pool_gradient, trace_csv, AdaptConfig, AdaptRecord, AdaptTrace, LadderOutcome, LadderStage,
    ScreenResult, ScreeningMethod, Termination,
};
pub use ansatz::{ansatz_energy, ansatz_energy_and_gradient, prepare_state, SingleParameterEnergy};
pub use cost::{ansatz_cnot_count, screening_measurement_cost, AffineCost, CnotCostModel, ScreeningStrategy};
pub use error::{Error, Result};
pub use excitation::{Excitation, ExcitationElement, Flavor, Order};
pub use operator::SparseOperator;
pub use optimize::{bfgs, nelder_mead, BfgsOptions, NelderMeadOptions, OptimResult, TrigCurve};
pub use pauli::{
    commutator, excitation_generator, ladder_to_pauli, multiply, LadderOp, Pauli, PauliString, PauliSum,
    PauliTerm,
};
pub use pool::{fermionic_pool, pool_csv, pool_size, qubit_pool, spin_preserving, uccsd_elements};
pub use problem::{default_alpha, penalized_expectation, MolecularProblem, PenalizedHamiltonian, Penalty};
pub use spectrum::{exact_spectrum, hamiltonian_spectrum, Spectrum};
pub use statevector::{apply_generator, expectation, inner_product, prepare_reference, StateVector};
