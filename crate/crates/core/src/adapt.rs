//! Adaptive ansatz construction for ground and excited states.
//!
//! Each iteration screens the whole pool against a frozen snapshot of the
//! current trial state, re-optimizes all parameters for the `n` best-scored
//! candidates, and appends the candidate whose full re-optimization lowers the
//! (penalized) energy the most. The loop stops once that reduction drops below
//! `epsilon`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::ansatz::{ansatz_energy_and_gradient, prepare_state, SingleParameterEnergy};
use crate::cost::{CnotCostModel, ScreeningStrategy};
use crate::error::{validation, Error, Result};
use crate::excitation::{Excitation, ExcitationElement, Flavor};
use crate::optimize::{bfgs, nelder_mead, BfgsOptions, NelderMeadOptions, OptimResult, TrigCurve};
use crate::pool::{pool, spin_preserving};
use crate::problem::{default_alpha, MolecularProblem, PenalizedHamiltonian, Penalty};
use crate::statevector::{generator_matrix_element, StateVector};

/// How the single-parameter screening minimum is found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScreeningMethod {
    /// Nelder-Mead from `θ = 0`.
    NelderMead,
    /// Exact fit of the five-term Fourier form from five energies.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptConfig {
    pub epsilon: f64,
    pub n_candidates: usize,
    pub max_iterations: usize,
    pub flavor: Flavor,
    pub strategy: ScreeningStrategy,
    pub screening_method: ScreeningMethod,
    /// Switch to gradient screening from this iteration on.
    pub gradient_switch_iteration: Option<usize>,
    pub spin_preserving: bool,
    pub target_state: usize,
    /// Per-level penalty weights; missing levels use [`default_alpha`].
    pub alphas: Option<Vec<f64>>,
    pub nelder_mead: NelderMeadOptions,
    pub bfgs: BfgsOptions,
    pub cost_model: CnotCostModel,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        AdaptConfig {
            epsilon: 1e-8,
            n_candidates: 10,
            max_iterations: 100,
            flavor: Flavor::Qubit,
            strategy: ScreeningStrategy::EnergyReduction,
            screening_method: ScreeningMethod::NelderMead,
            gradient_switch_iteration: None,
            spin_preserving: false,
            target_state: 0,
            alphas: None,
            nelder_mead: NelderMeadOptions::default(),
            bfgs: BfgsOptions::default(),
            cost_model: CnotCostModel::default(),
        }
    }
}

impl AdaptConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.n_candidates == 0 {
            return Err(Error::Config("n_candidates must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if let Some(alphas) = &self.alphas {
            if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
                return Err(Error::Config(format!("penalty weights must be positive, got {a}")));
            }
        }
        Ok(())
    }

    /// Penalty weight for previously found level `r`.
    pub fn alpha(&self, r: usize, h: &crate::pauli::PauliSum) -> f64 {
        self.alphas
            .as_ref()
            .and_then(|a| a.get(r).copied())
            .unwrap_or_else(|| default_alpha(h))
    }

    fn strategy_at(&self, iteration: usize) -> ScreeningStrategy {
        match self.gradient_switch_iteration {
            Some(s) if iteration >= s => ScreeningStrategy::Gradient,
            _ => self.strategy,
        }
    }

    /// The element pool this configuration screens.
    pub fn pool(&self, n_qubits: usize) -> Result<Vec<ExcitationElement>> {
        let p = pool(n_qubits, self.flavor)?;
        Ok(if self.spin_preserving { spin_preserving(p) } else { p })
    }
}

/// Score of one pool element against the current state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenResult {
    pub element: ExcitationElement,
    /// Energy reduction, or gradient magnitude at `θ = 0`.
    pub score: f64,
    /// Starting parameter for the refinement step.
    pub theta: f64,
    /// Energy evaluations spent.
    pub evaluations: usize,
}

fn hamiltonian_times(h: &PenalizedHamiltonian, state: &StateVector) -> Result<Vec<Complex64>> {
    let mut out = vec![Complex64::default(); state.dim()];
    h.apply_into(state.amplitudes(), &mut out)?;
    Ok(out)
}

/// Minimal single-parameter energy of every pool element, reported as the
/// reduction `E(0) − min_θ E(θ)`. Results follow pool order.
pub fn screen_pool_energy_reduction(
    h: &PenalizedHamiltonian,
    state: &StateVector,
    pool: &[ExcitationElement],
    method: ScreeningMethod,
    options: &NelderMeadOptions,
) -> Result<Vec<ScreenResult>> {
    let h_psi = hamiltonian_times(h, state)?;
    pool.par_iter()
        .map(|element| {
            let curve = SingleParameterEnergy::new(h, state, &h_psi, element)?;
            let (theta, value, evaluations) = match method {
                ScreeningMethod::NelderMead => {
                    let r = nelder_mead(|x| curve.value(x[0]), &[0.0], options)?;
                    (r.x[0], r.value, r.evaluations)
                }
                ScreeningMethod::ClosedForm => {
                    let (t, v) = TrigCurve::fit(|t| curve.value(t)).minimize();
                    (t, v, 5)
                }
            };
            Ok(ScreenResult {
                element: *element,
                score: curve.e0 - value,
                theta,
                evaluations,
            })
        })
        .collect()
}

/// `|∂E/∂θ|` at `θ = 0` for every pool element, i.e. `|⟨ψ|[H_k, T]|ψ⟩|`.
/// Each score counts as two energy evaluations (a parameter-shift pair).
pub fn screen_pool_gradient(
    h: &PenalizedHamiltonian,
    state: &StateVector,
    pool: &[ExcitationElement],
) -> Result<Vec<ScreenResult>> {
    let h_psi = hamiltonian_times(h, state)?;
    let n = state.n_qubits();
    pool.par_iter()
        .map(|element| {
            element.validate(n)?;
            let g = 2.0 * generator_matrix_element(n, &h_psi, state.amplitudes(), element).re;
            Ok(ScreenResult {
                element: *element,
                score: g.abs(),
                theta: 0.0,
                evaluations: 2,
            })
        })
        .collect()
}

/// Pool indices of the `n` best scores; equal scores keep pool order.
fn top_candidates(scores: &[ScreenResult], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].score.total_cmp(&scores[a].score).then(a.cmp(&b)));
    order.truncate(n);
    order
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptRecord {
    pub iteration: usize,
    pub element: ExcitationElement,
    pub strategy: ScreeningStrategy,
    pub delta_e: f64,
    pub energy: f64,
    pub theta: Vec<f64>,
    /// `None` when the cost model does not cover every element kind.
    pub cnot_count: Option<u64>,
    /// Cumulative screening energy evaluations.
    pub screen_evals: usize,
    /// Cumulative energy-and-gradient evaluations of the refinement step.
    pub vqe_evals: usize,
    pub vqe_converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The best re-optimized reduction fell below `epsilon`.
    Threshold,
    /// No candidate lowered the energy although screening promised it.
    NoImprovement,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptTrace {
    pub flavor: Flavor,
    pub strategy: ScreeningStrategy,
    pub target_state: usize,
    pub pool_size: usize,
    pub initial_energy: f64,
    pub records: Vec<AdaptRecord>,
    pub elements: Vec<ExcitationElement>,
    pub theta: Vec<f64>,
    pub final_energy: f64,
    pub converged: bool,
    pub termination: Termination,
    /// Reference energy for the target level, when known.
    pub fci_energy: Option<f64>,
    pub screening_passes: usize,
    pub screen_evals: usize,
    pub vqe_evals: usize,
}

impl AdaptTrace {
    pub fn n_params(&self) -> usize {
        self.theta.len()
    }

    pub fn error_vs_fci(&self) -> Option<f64> {
        self.fci_energy.map(|e| self.final_energy - e)
    }

    /// Final trial state built from `reference`.
    pub fn state(&self, reference: &StateVector) -> Result<StateVector> {
        prepare_state(reference, &self.elements, &self.theta)
    }

    pub fn cnot_count(&self, model: &CnotCostModel) -> Option<u64> {
        crate::cost::ansatz_cnot_count(&self.elements, model).ok()
    }

    /// Average screening evaluations per element per pass.
    pub fn gamma(&self) -> f64 {
        if self.screening_passes == 0 || self.pool_size == 0 {
            return 0.0;
        }
        self.screen_evals as f64 / (self.screening_passes * self.pool_size) as f64
    }
}

fn refine(
    h: &PenalizedHamiltonian,
    reference: &StateVector,
    elements: &[ExcitationElement],
    theta: &[f64],
    options: &BfgsOptions,
) -> Result<OptimResult> {
    let mut failure = None;
    let result = bfgs(
        |x| match ansatz_energy_and_gradient(h, reference, elements, x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                (f64::NAN, vec![0.0; x.len()])
            }
        },
        theta,
        options,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(result),
    }
}

/// Builds `H_k` from the problem Hamiltonian and penalties.
pub fn penalized_hamiltonian(problem: &MolecularProblem, penalties: &[Penalty]) -> Result<PenalizedHamiltonian> {
    let mut h = PenalizedHamiltonian::new(problem.hamiltonian.clone())?;
    for p in penalties {
        h.add_penalty(p.alpha, p.state.clone())?;
    }
    Ok(h)
}

/// Runs the adaptive loop for `config.target_state`, which must equal the
/// number of penalties.
pub fn run_adapt(problem: &MolecularProblem, penalties: &[Penalty], config: &AdaptConfig) -> Result<AdaptTrace> {
    if penalties.len() != config.target_state {
        return Err(Error::Config(format!(
            "target state {} needs {} penalty states, got {}",
            config.target_state,
            config.target_state,
            penalties.len()
        )));
    }
    let h = penalized_hamiltonian(problem, penalties)?;
    let reference = problem.reference_state()?;
    let mut trace = run_adapt_with(&h, &reference, config)?;
    trace.fci_energy = problem.fci_energy(config.target_state);
    Ok(trace)
}

/// The adaptive loop on an explicit penalized Hamiltonian and reference.
pub fn run_adapt_with(
    h: &PenalizedHamiltonian,
    reference: &StateVector,
    config: &AdaptConfig,
) -> Result<AdaptTrace> {
    config.validate()?;
    let pool = config.pool(reference.n_qubits())?;
    if pool.is_empty() {
        return Err(Error::Config("the element pool is empty".into()));
    }
    // small registers have fewer elements than the default candidate count
    let n_candidates = config.n_candidates.min(pool.len());

    let initial_energy = h.penalized_expectation(reference)?;
    let mut elements: Vec<ExcitationElement> = Vec::new();
    let mut theta: Vec<f64> = Vec::new();
    let mut energy = initial_energy;
    let mut records = Vec::new();
    let (mut screen_evals, mut vqe_evals, mut passes) = (0usize, 0usize, 0usize);
    let mut termination = Termination::MaxIterations;

    for iteration in 1..=config.max_iterations {
        let state = prepare_state(reference, &elements, &theta)?;
        let strategy = config.strategy_at(iteration);
        let scores = match strategy {
            ScreeningStrategy::EnergyReduction => {
                screen_pool_energy_reduction(h, &state, &pool, config.screening_method, &config.nelder_mead)?
            }
            ScreeningStrategy::Gradient => screen_pool_gradient(h, &state, &pool)?,
        };
        passes += 1;
        screen_evals += scores.iter().map(|s| s.evaluations).sum::<usize>();

        let candidates = top_candidates(&scores, n_candidates);
        let refined: Vec<(usize, OptimResult)> = candidates
            .par_iter()
            .map(|&idx| {
                let mut els = elements.clone();
                els.push(pool[idx]);
                let mut start = theta.clone();
                start.push(scores[idx].theta);
                refine(h, reference, &els, &start, &config.bfgs).map(|r| (idx, r))
            })
            .collect::<Result<_>>()?;
        vqe_evals += refined.iter().map(|(_, r)| r.evaluations).sum::<usize>();

        // largest reduction; ties go to the lowest pool index
        let (best_idx, best) = refined
            .iter()
            .min_by(|(ia, a), (ib, b)| a.value.total_cmp(&b.value).then(ia.cmp(ib)))
            .expect("at least one candidate");
        let delta_e = energy - best.value;
        if delta_e < config.epsilon {
            let promised = match strategy {
                ScreeningStrategy::EnergyReduction => scores[candidates[0]].score >= config.epsilon,
                ScreeningStrategy::Gradient => scores[candidates[0]].score.powi(2) >= config.epsilon,
            };
            termination = if delta_e <= 0.0 && promised {
                Termination::NoImprovement
            } else {
                Termination::Threshold
            };
            break;
        }

        elements.push(pool[*best_idx]);
        theta = best.x.clone();
        energy = best.value;
        records.push(AdaptRecord {
            iteration,
            element: pool[*best_idx],
            strategy,
            delta_e,
            energy,
            theta: theta.clone(),
            cnot_count: crate::cost::ansatz_cnot_count(&elements, &config.cost_model).ok(),
            screen_evals,
            vqe_evals,
            vqe_converged: best.converged,
        });
    }

    Ok(AdaptTrace {
        flavor: config.flavor,
        strategy: config.strategy,
        target_state: config.target_state,
        pool_size: pool.len(),
        initial_energy,
        records,
        elements,
        theta,
        final_energy: energy,
        converged: termination == Termination::Threshold,
        termination,
        fci_energy: None,
        screening_passes: passes,
        screen_evals,
        vqe_evals,
    })
}

/// One BFGS minimization of a fixed ansatz from `start` (all zeros if `None`).
pub fn run_fixed_ansatz(
    problem: &MolecularProblem,
    penalties: &[Penalty],
    elements: &[ExcitationElement],
    start: Option<&[f64]>,
    options: &BfgsOptions,
) -> Result<OptimResult> {
    if elements.is_empty() {
        return Err(validation("fixed ansatz needs at least one element"));
    }
    let h = penalized_hamiltonian(problem, penalties)?;
    let reference = problem.reference_state()?;
    let zeros = vec![0.0; elements.len()];
    let start = start.unwrap_or(&zeros);
    if start.len() != elements.len() {
        return Err(validation(format!(
            "{} elements but {} starting parameters",
            elements.len(),
            start.len()
        )));
    }
    refine(&h, &reference, elements, start, options)
}

#[derive(Debug, Clone)]
pub struct LadderStage {
    pub level: usize,
    pub alpha_used: Vec<f64>,
    pub energy: f64,
    /// Energy of the bare Hamiltonian in the found state.
    pub bare_energy: f64,
    pub state: StateVector,
    pub state_file: Option<PathBuf>,
    pub trace: AdaptTrace,
}

#[derive(Debug, Clone)]
pub struct LadderOutcome {
    pub stages: Vec<LadderStage>,
    /// Level whose run did not converge; the ladder stopped there.
    pub aborted_at: Option<usize>,
}

/// Solves levels `0..=up_to_k` in turn, each penalizing all states found
/// before it. Found states are written as `state_k.qsv` into `state_dir`.
pub fn excited_ladder(
    problem: &MolecularProblem,
    config: &AdaptConfig,
    up_to_k: usize,
    state_dir: Option<&Path>,
) -> Result<LadderOutcome> {
    let reference = problem.reference_state()?;
    let mut penalties: Vec<Penalty> = Vec::new();
    let mut stages = Vec::new();
    let base = PenalizedHamiltonian::new(problem.hamiltonian.clone())?;
    for level in 0..=up_to_k {
        let cfg = AdaptConfig {
            target_state: level,
            ..config.clone()
        };
        let trace = run_adapt(problem, &penalties, &cfg)?;
        let state = trace.state(&reference)?;
        let state_file = match state_dir {
            Some(dir) => {
                let path = dir.join(format!("state_{level}.qsv"));
                state.save(&path)?;
                Some(path)
            }
            None => None,
        };
        let converged = trace.converged;
        stages.push(LadderStage {
            level,
            alpha_used: penalties.iter().map(|p| p.alpha).collect(),
            energy: trace.final_energy,
            bare_energy: base.penalized_expectation(&state)?,
            state: state.clone(),
            state_file,
            trace,
        });
        if !converged {
            return Ok(LadderOutcome {
                stages,
                aborted_at: Some(level),
            });
        }
        penalties.push(Penalty {
            alpha: config.alpha(level, &problem.hamiltonian),
            state,
        });
    }
    Ok(LadderOutcome {
        stages,
        aborted_at: None,
    })
}

#[derive(Debug, Clone)]
pub struct FixedStage {
    pub level: usize,
    pub result: OptimResult,
    pub state: StateVector,
    pub bare_energy: f64,
}

/// Ladder of fixed-ansatz minimizations, each penalizing the earlier states.
pub fn fixed_ansatz_ladder(
    problem: &MolecularProblem,
    elements: &[ExcitationElement],
    up_to_k: usize,
    alphas: Option<&[f64]>,
    options: &BfgsOptions,
) -> Result<Vec<FixedStage>> {
    let reference = problem.reference_state()?;
    let base = PenalizedHamiltonian::new(problem.hamiltonian.clone())?;
    let mut penalties: Vec<Penalty> = Vec::new();
    let mut stages = Vec::new();
    for level in 0..=up_to_k {
        let result = run_fixed_ansatz(problem, &penalties, elements, None, options)?;
        let state = prepare_state(&reference, elements, &result.x)?;
        let bare_energy = base.penalized_expectation(&state)?;
        let alpha = alphas
            .and_then(|a| a.get(level).copied())
            .unwrap_or_else(|| default_alpha(&problem.hamiltonian));
        penalties.push(Penalty {
            alpha,
            state: state.clone(),
        });
        stages.push(FixedStage {
            level,
            result,
            state,
            bare_energy,
        });
    }
    Ok(stages)
}

fn element_fields(e: &ExcitationElement) -> String {
    match e.excitation() {
        Excitation::Single { i, k } => format!("{},{},{i},,{k},", e.flavor(), e.order().as_str()),
        Excitation::Double { i, j, k, l } => format!("{},{},{i},{j},{k},{l}", e.flavor(), e.order().as_str()),
    }
}

fn opt(v: Option<impl std::fmt::Display>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const TRACE_HEADER: &str =
    "iteration,flavor,order,i,j,k,l,delta_e,energy,error_vs_fci,n_params,cnot_count,screen_evals,vqe_evals";

/// Trace rows in CSV form: header, the reference at iteration 0, then one row
/// per appended element.
pub fn trace_csv(trace: &AdaptTrace) -> String {
    let mut out = String::new();
    let err = |e: f64| trace.fci_energy.map(|f| format!("{:e}", e - f)).unwrap_or_default();
    let _ = writeln!(out, "{TRACE_HEADER}");
    let _ = writeln!(
        out,
        "0,{},,,,,,,{:e},{},0,0,0,0",
        trace.flavor,
        trace.initial_energy,
        err(trace.initial_energy)
    );
    for r in &trace.records {
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{},{},{},{},{}",
            r.iteration,
            element_fields(&r.element),
            r.delta_e,
            r.energy,
            err(r.energy),
            r.theta.len(),
            opt(r.cnot_count),
            r.screen_evals,
            r.vqe_evals
        );
    }
    out
}
