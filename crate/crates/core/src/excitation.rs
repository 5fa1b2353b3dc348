//! Ansatz element descriptors.

use std::fmt;

use crate::error::{validation, Result};

/// Statistics of the ladder operators an excitation is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// Qubit ladder operators: no Jordan-Wigner parity strings.
    Qubit,
    /// Fermionic ladder operators under the Jordan-Wigner encoding.
    Fermionic,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Qubit => "qubit",
            Flavor::Fermionic => "fermionic",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "qubit" => Ok(Flavor::Qubit),
            "fermionic" => Ok(Flavor::Fermionic),
            other => Err(format!("unknown flavor `{other}` (expected qubit|fermionic)")),
        }
    }
}

/// Index pattern of an excitation.
///
/// A single moves an excitation between `k` and `i`; a double moves the
/// occupied pair `(k, l)` into `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Excitation {
    Single { i: usize, k: usize },
    Double { i: usize, j: usize, k: usize, l: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Single,
    Double,
}

impl Order {
    pub fn as_str(self) -> &'static str {
        match self {
            Order::Single => "single",
            Order::Double => "double",
        }
    }
}

/// One excitation evolution `e^{θT}`; the parameter θ lives with the ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExcitationElement {
    flavor: Flavor,
    excitation: Excitation,
}

impl ExcitationElement {
    pub fn single(flavor: Flavor, i: usize, k: usize) -> Result<Self> {
        if i == k {
            return Err(validation(format!("single excitation indices must differ, got ({i},{k})")));
        }
        Ok(ExcitationElement {
            flavor,
            excitation: Excitation::Single { i, k },
        })
    }

    /// Requires `i < j`, `k < l` and disjoint pairs.
    pub fn double(flavor: Flavor, i: usize, j: usize, k: usize, l: usize) -> Result<Self> {
        if !(i < j && k < l) {
            return Err(validation(format!(
                "double excitation pairs must be ordered i<j, k<l, got ({i},{j},{k},{l})"
            )));
        }
        if i == k || i == l || j == k || j == l {
            return Err(validation(format!(
                "double excitation pairs must be disjoint, got ({i},{j},{k},{l})"
            )));
        }
        Ok(ExcitationElement {
            flavor,
            excitation: Excitation::Double { i, j, k, l },
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn excitation(&self) -> Excitation {
        self.excitation
    }

    pub fn order(&self) -> Order {
        match self.excitation {
            Excitation::Single { .. } => Order::Single,
            Excitation::Double { .. } => Order::Double,
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        match self.excitation {
            Excitation::Single { i, k } => vec![i, k],
            Excitation::Double { i, j, k, l } => vec![i, j, k, l],
        }
    }

    pub fn with_flavor(self, flavor: Flavor) -> Self {
        ExcitationElement { flavor, ..self }
    }

    /// Canonical representative: the pair holding the smallest index comes first.
    ///
    /// Swapping the two sides only flips the sign of the generator, so both
    /// forms describe the same family of evolutions.
    pub fn canonical(self) -> Self {
        let excitation = match self.excitation {
            Excitation::Single { i, k } if k < i => Excitation::Single { i: k, k: i },
            Excitation::Double { i, j, k, l } if k < i => Excitation::Double { i: k, j: l, k: i, l: j },
            e => e,
        };
        ExcitationElement { excitation, ..self }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let max = self.indices().into_iter().max().unwrap();
        if max >= n_qubits {
            return Err(validation(format!(
                "excitation {self} addresses qubit {max} on a {n_qubits}-qubit register"
            )));
        }
        Ok(())
    }

    /// Qubits whose occupations are swapped, as `(destination_mask, source_mask)`.
    pub(crate) fn masks(&self) -> (usize, usize) {
        match self.excitation {
            Excitation::Single { i, k } => (1 << i, 1 << k),
            Excitation::Double { i, j, k, l } => ((1 << i) | (1 << j), (1 << k) | (1 << l)),
        }
    }

    /// True if the excitation conserves the z-projection of spin under the
    /// interleaved ordering (even index = spin up, odd index = spin down).
    pub fn preserves_spin(&self) -> bool {
        match self.excitation {
            Excitation::Single { i, k } => i % 2 == k % 2,
            Excitation::Double { i, j, k, l } => (i % 2 + j % 2) == (k % 2 + l % 2),
        }
    }

    /// Lengths of the Jordan-Wigner parity strings between paired indices.
    pub fn spans(&self) -> (usize, usize) {
        match self.excitation {
            Excitation::Single { i, k } => (i.abs_diff(k) - 1, 0),
            Excitation::Double { i, j, k, l } => (j - i - 1, l - k - 1),
        }
    }
}

impl fmt::Display for ExcitationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.excitation {
            Excitation::Single { i, k } => write!(f, "{}-single({i}<-{k})", self.flavor),
            Excitation::Double { i, j, k, l } => {
                write!(f, "{}-double({i},{j}<-{k},{l})", self.flavor)
            }
        }
    }
}
