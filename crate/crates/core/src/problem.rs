//! Problem interchange format and the overlap-penalized Hamiltonian.
//!
//! A problem file is line-oriented UTF-8 text:
//!
//! ```text
//! format: adapt-xstate/problem v1
//! label: LiH sto-3g r=1.546
//! n_qubits: 12
//! n_electrons: 4
//! fci: -7.88 -7.76 ...
//! term: -1.0 Z0
//! term: 0.5
//! ```
//!
//! Spin-orbitals are interleaved: even qubits are spin-up, odd qubits spin-down
//! of the same spatial orbital. Full-line `#` comments and blank lines are
//! ignored. Coefficients are written with 17 significant digits so that a
//! parse/serialize round trip is bit-exact.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{check_dims, validation, Error, Result};
use crate::operator::SparseOperator;
use crate::pauli::{parse_term_body, PauliString, PauliSum, PauliTerm};
use crate::statevector::{dot, prepare_reference, StateVector};

pub const FORMAT_TAG: &str = "adapt-xstate/problem v1";

/// A qubit Hamiltonian together with the register and electron count.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularProblem {
    pub label: String,
    pub n_qubits: usize,
    pub n_electrons: usize,
    pub hamiltonian: PauliSum,
    /// Reference sector eigenvalues, ascending, if the generator supplied them.
    pub fci_energies: Option<Vec<f64>>,
}

impl MolecularProblem {
    pub fn new(label: impl Into<String>, n_electrons: usize, hamiltonian: PauliSum) -> Result<Self> {
        let problem = MolecularProblem {
            label: label.into(),
            n_qubits: hamiltonian.n_qubits(),
            n_electrons,
            hamiltonian,
            fci_energies: None,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        check_dims(self.n_qubits, self.hamiltonian.n_qubits())?;
        if self.n_electrons > self.n_qubits {
            return Err(validation(format!(
                "{} electrons exceed {} spin-orbitals",
                self.n_electrons, self.n_qubits
            )));
        }
        if !self.hamiltonian.is_hermitian(0.0) {
            return Err(validation("Hamiltonian coefficients must be real"));
        }
        Ok(())
    }

    pub fn reference_state(&self) -> Result<StateVector> {
        prepare_reference(self.n_qubits, self.n_electrons)
    }

    /// Reference energy of level `k`, if present.
    pub fn fci_energy(&self, k: usize) -> Option<f64> {
        self.fci_energies.as_ref().and_then(|e| e.get(k).copied())
    }

    /// Bond length parsed from an `r=<float>` token in the label.
    pub fn bond_length(&self) -> Option<f64> {
        self.label
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix("r=").and_then(|v| v.parse().ok()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_problem(text)
    }

    pub fn to_text(&self) -> String {
        serialize_problem(self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        parse_problem(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Formats like C's `%.16e` (17 significant digits, two-digit signed exponent).
pub fn format_coefficient(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let e: i32 = exp.parse().expect("rust float exponent");
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", e.abs())
        }
        None => s,
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_problem(text: &str) -> Result<MolecularProblem> {
    let mut format_seen = false;
    let mut label: Option<String> = None;
    let mut n_qubits: Option<usize> = None;
    let mut n_electrons: Option<usize> = None;
    let mut fci: Option<Vec<f64>> = None;
    let mut terms: Vec<(usize, f64, PauliString)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| perr(line_no, format!("expected `key: value`, got `{line}`")))?;
        let value = value.trim();
        if !format_seen && key != "format" {
            return Err(perr(line_no, "the first entry must be `format:`"));
        }
        let dup = |seen: bool, what: &str| -> Result<()> {
            if seen {
                Err(perr(line_no, format!("duplicate `{what}` header")))
            } else {
                Ok(())
            }
        };
        match key {
            "format" => {
                dup(format_seen, "format")?;
                if value != FORMAT_TAG {
                    return Err(perr(line_no, format!("unsupported format `{value}`")));
                }
                format_seen = true;
            }
            "label" => {
                dup(label.is_some(), "label")?;
                label = Some(value.to_string());
            }
            "n_qubits" => {
                dup(n_qubits.is_some(), "n_qubits")?;
                n_qubits = Some(
                    value
                        .parse()
                        .map_err(|_| perr(line_no, format!("invalid n_qubits `{value}`")))?,
                );
            }
            "n_electrons" => {
                dup(n_electrons.is_some(), "n_electrons")?;
                n_electrons = Some(
                    value
                        .parse()
                        .map_err(|_| perr(line_no, format!("invalid n_electrons `{value}`")))?,
                );
            }
            "fci" => {
                dup(fci.is_some(), "fci")?;
                let values = value
                    .split_whitespace()
                    .map(|v| v.parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| perr(line_no, format!("invalid fci list `{value}`")))?;
                fci = Some(values);
            }
            "term" => {
                let (c, s) = parse_term_body(value).map_err(|e| match e {
                    Error::Validation(m) => perr(line_no, m),
                    other => other,
                })?;
                terms.push((line_no, c, s));
            }
            other => return Err(perr(line_no, format!("unknown header key `{other}`"))),
        }
    }

    if !format_seen {
        return Err(perr(last_line.max(1), "missing `format:` line"));
    }
    let n_qubits = n_qubits.ok_or_else(|| perr(last_line, "missing `n_qubits`"))?;
    let n_electrons = n_electrons.ok_or_else(|| perr(last_line, "missing `n_electrons`"))?;
    let mut hamiltonian =
        PauliSum::new(n_qubits).map_err(|e| perr(last_line, e.to_string()))?;
    let mut seen: HashSet<PauliString> = HashSet::new();
    for (line_no, c, s) in terms {
        if let Some(q) = s.max_qubit() {
            if q >= n_qubits {
                return Err(perr(line_no, format!("qubit index {q} >= n_qubits {n_qubits}")));
            }
        }
        if !seen.insert(s) {
            return Err(perr(line_no, format!("duplicate term `{s}`")));
        }
        let term = PauliTerm::from_string(Complex64::new(c, 0.0), s, n_qubits)
            .map_err(|e| perr(line_no, e.to_string()))?;
        hamiltonian.add_term(&term)?;
    }
    let problem = MolecularProblem {
        label: label.unwrap_or_default(),
        n_qubits,
        n_electrons,
        hamiltonian,
        fci_energies: fci,
    };
    problem
        .validate()
        .map_err(|e| perr(last_line, e.to_string()))?;
    Ok(problem)
}

pub fn serialize_problem(problem: &MolecularProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format: {FORMAT_TAG}");
    let _ = writeln!(out, "label: {}", problem.label);
    let _ = writeln!(out, "n_qubits: {}", problem.n_qubits);
    let _ = writeln!(out, "n_electrons: {}", problem.n_electrons);
    if let Some(fci) = &problem.fci_energies {
        let list: Vec<String> = fci.iter().map(|e| format_coefficient(*e)).collect();
        let _ = writeln!(out, "fci: {}", list.join(" "));
    }
    for (s, c) in problem.hamiltonian.iter() {
        if s.is_identity() {
            let _ = writeln!(out, "term: {}", format_coefficient(c.re));
        } else {
            let _ = writeln!(out, "term: {} {s}", format_coefficient(c.re));
        }
    }
    out
}

/// `α |E⟩⟨E|` penalty against a previously found eigenstate.
#[derive(Debug, Clone)]
pub struct Penalty {
    pub alpha: f64,
    pub state: StateVector,
}

/// `H_k = H + Σ_r α_r |E_r⟩⟨E_r|`.
#[derive(Debug, Clone)]
pub struct PenalizedHamiltonian {
    base: PauliSum,
    operator: SparseOperator,
    penalties: Vec<Penalty>,
}

impl PenalizedHamiltonian {
    pub fn new(base: PauliSum) -> Result<Self> {
        if !base.is_hermitian(1e-12) {
            return Err(validation("Hamiltonian must have real coefficients"));
        }
        let operator = SparseOperator::from_pauli_sum(&base)?;
        Ok(PenalizedHamiltonian {
            base,
            operator,
            penalties: Vec::new(),
        })
    }

    pub fn with_penalty(mut self, alpha: f64, state: StateVector) -> Result<Self> {
        self.add_penalty(alpha, state)?;
        Ok(self)
    }

    pub fn add_penalty(&mut self, alpha: f64, state: StateVector) -> Result<()> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(validation(format!("penalty weight must be positive, got {alpha}")));
        }
        check_dims(self.base.n_qubits(), state.n_qubits())?;
        if (state.norm_sqr() - 1.0).abs() > 1e-10 {
            return Err(validation("penalty state is not normalized"));
        }
        self.penalties.push(Penalty { alpha, state });
        Ok(())
    }

    pub fn base(&self) -> &PauliSum {
        &self.base
    }

    pub fn operator(&self) -> &SparseOperator {
        &self.operator
    }

    pub fn penalties(&self) -> &[Penalty] {
        &self.penalties
    }

    pub fn n_qubits(&self) -> usize {
        self.base.n_qubits()
    }

    /// `<ψ|H_k|ψ>`.
    pub fn penalized_expectation(&self, state: &StateVector) -> Result<f64> {
        self.operator.check_qubits(state.n_qubits())?;
        Ok(self.energy(state.amplitudes()))
    }

    /// Unchecked `<ψ|H_k|ψ>` on raw amplitudes.
    pub(crate) fn energy(&self, psi: &[Complex64]) -> f64 {
        let mut e = self.operator.expectation(psi).re;
        for p in &self.penalties {
            e += p.alpha * dot(p.state.amplitudes(), psi).norm_sqr();
        }
        e
    }

    /// `out = H_k ψ`.
    pub fn apply_into(&self, psi: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        self.operator.check_len(psi.len())?;
        self.operator.check_len(out.len())?;
        self.operator.apply_into(psi, out);
        for p in &self.penalties {
            let amp = p.state.amplitudes();
            let w = dot(amp, psi) * p.alpha;
            for (o, e) in out.iter_mut().zip(amp) {
                *o += e * w;
            }
        }
        Ok(())
    }
}

/// `penalized_expectation(h, state)` as a free function.
pub fn penalized_expectation(h: &PenalizedHamiltonian, state: &StateVector) -> Result<f64> {
    h.penalized_expectation(state)
}

/// Penalty weight `2·Σ|h_r| + 1`, large enough that `E_0 + α` exceeds the
/// largest eigenvalue since the spectrum lies in `[-Σ|h_r|, Σ|h_r|]`.
pub fn default_alpha(h: &PauliSum) -> f64 {
    2.0 * h.one_norm() + 1.0
}
