//! CNOT and measurement cost accounting.

use std::path::Path;

use crate::error::{Error, Result};
use crate::excitation::{Excitation, ExcitationElement, Flavor};

/// `constant + Σ slope_i · span_i` with non-negative integer parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineCost {
    pub constant: u64,
    pub slopes: [u64; 2],
}

impl AffineCost {
    pub fn constant(c: u64) -> Self {
        AffineCost {
            constant: c,
            slopes: [0, 0],
        }
    }

    pub fn eval(&self, spans: (usize, usize)) -> u64 {
        self.constant + self.slopes[0] * spans.0 as u64 + self.slopes[1] * spans.1 as u64
    }
}

/// Per-element CNOT costs. Fermionic costs depend on the Jordan-Wigner parity
/// string lengths and have no built-in default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnotCostModel {
    pub single_qubit: Option<u64>,
    pub double_qubit: Option<u64>,
    pub single_fermionic: Option<AffineCost>,
    pub double_fermionic: Option<AffineCost>,
}

impl Default for CnotCostModel {
    fn default() -> Self {
        CnotCostModel {
            single_qubit: Some(2),
            double_qubit: Some(13),
            single_fermionic: None,
            double_fermionic: None,
        }
    }
}

fn parse_affine(value: &str, line: usize, vars: &[&str]) -> Result<AffineCost> {
    let err = |message: String| Error::Parse { line, message };
    let mut cost = AffineCost::constant(0);
    let mut seen_constant = false;
    let mut seen = [false; 2];
    for part in value.split('+').map(str::trim) {
        if part.is_empty() {
            return Err(err(format!("empty term in cost expression {value:?}")));
        }
        let (coeff, var) = match part.split_once('*') {
            Some((c, v)) => (c.trim(), Some(v.trim())),
            None => (part, None),
        };
        let c: u64 = coeff
            .parse()
            .map_err(|_| err(format!("expected a non-negative integer, got {coeff:?}")))?;
        match var {
            None if !seen_constant => {
                cost.constant = c;
                seen_constant = true;
            }
            None => return Err(err(format!("two constant terms in {value:?}"))),
            Some(v) => {
                let slot = vars
                    .iter()
                    .position(|name| *name == v)
                    .ok_or_else(|| err(format!("unknown variable {v:?}, expected one of {vars:?}")))?;
                if seen[slot] {
                    return Err(err(format!("variable {v:?} repeated")));
                }
                seen[slot] = true;
                cost.slopes[slot] = c;
            }
        }
    }
    Ok(cost)
}

impl CnotCostModel {
    /// A model with no entries; every element kind must be supplied.
    pub fn empty() -> Self {
        CnotCostModel {
            single_qubit: None,
            double_qubit: None,
            single_fermionic: None,
            double_fermionic: None,
        }
    }

    /// Parses `key: value` lines. Keys not present keep the built-in defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut model = CnotCostModel::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once(':').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected `key: value`, got {body:?}"),
            })?;
            let value = value.trim();
            let integer = || {
                value.parse::<u64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("expected a non-negative integer, got {value:?}"),
                })
            };
            match key.trim() {
                "single_qubit" => model.single_qubit = Some(integer()?),
                "double_qubit" => model.double_qubit = Some(integer()?),
                "single_fermionic" => model.single_fermionic = Some(parse_affine(value, line, &["span"])?),
                "double_fermionic" => {
                    model.double_fermionic = Some(parse_affine(value, line, &["span1", "span2"])?)
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown cost key {other:?}"),
                    })
                }
            }
        }
        Ok(model)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// CNOT count of one element.
    pub fn element_cost(&self, element: &ExcitationElement) -> Result<u64> {
        let spans = element.spans();
        let missing = |kind: &str| Error::Config(format!("cost model has no entry for {kind} excitations"));
        let cost = match (element.flavor(), element.excitation()) {
            (Flavor::Qubit, Excitation::Single { .. }) => self.single_qubit.ok_or_else(|| missing("single qubit"))?,
            (Flavor::Qubit, Excitation::Double { .. }) => self.double_qubit.ok_or_else(|| missing("double qubit"))?,
            (Flavor::Fermionic, Excitation::Single { .. }) => self
                .single_fermionic
                .ok_or_else(|| missing("single fermionic"))?
                .eval(spans),
            (Flavor::Fermionic, Excitation::Double { .. }) => self
                .double_fermionic
                .ok_or_else(|| missing("double fermionic"))?
                .eval(spans),
        };
        if cost == 0 {
            return Err(Error::Config(format!("cost model assigns zero CNOTs to {element}")));
        }
        Ok(cost)
    }
}

/// Total CNOT count of an ansatz.
pub fn ansatz_cnot_count(elements: &[ExcitationElement], model: &CnotCostModel) -> Result<u64> {
    elements.iter().map(|e| model.element_cost(e)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScreeningStrategy {
    EnergyReduction,
    Gradient,
}

impl ScreeningStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            ScreeningStrategy::EnergyReduction => "energy",
            ScreeningStrategy::Gradient => "gradient",
        }
    }
}

impl std::fmt::Display for ScreeningStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ScreeningStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "energy" | "energy-reduction" => Ok(ScreeningStrategy::EnergyReduction),
            "gradient" => Ok(ScreeningStrategy::Gradient),
            other => Err(Error::Config(format!("unknown screening strategy {other:?}"))),
        }
    }
}

/// Expectation values measured to screen a pool once: `2·N_H` per element for
/// gradients, `γ·N_H` per element for single-parameter minimizations taking
/// `γ` energy evaluations on average.
pub fn screening_measurement_cost(strategy: ScreeningStrategy, pool_size: usize, n_h: usize, gamma: f64) -> f64 {
    let per_element = match strategy {
        ScreeningStrategy::Gradient => 2.0,
        ScreeningStrategy::EnergyReduction => gamma,
    };
    per_element * n_h as f64 * pool_size as f64
}
