//! Pauli-string algebra and Jordan-Wigner ladder-operator building blocks.
//!
//! A Pauli string on up to 64 qubits is stored in symplectic form as a pair of
//! bit masks `(x, z)`: qubit `q` carries `X` if only bit `q` of `x` is set, `Z`
//! if only bit `q` of `z` is set, and `Y` if both are set. Under this encoding
//! the operator is `i^{|x & z|} X^x Z^z`, which makes products and the action on
//! computational basis states a handful of popcounts.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{check_dims, validation, Error, Result};
use crate::excitation::{Excitation, ExcitationElement, Flavor};

/// Largest register a [`PauliString`] can address.
pub const MAX_PAULI_QUBITS: usize = 64;

/// Coefficients below this magnitude are dropped from a [`PauliSum`].
pub const DEFAULT_PRUNE_THRESHOLD: f64 = 1e-12;

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// `i^k` for any integer `k`.
#[inline]
pub(crate) fn i_pow(k: u32) -> Complex64 {
    I_POWERS[(k & 3) as usize]
}

/// Single-qubit Pauli operator (identity is represented by absence).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// Tensor product of single-qubit Paulis with no coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    x: u64,
    z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    /// Builds a string from `(qubit, pauli)` pairs in any order.
    pub fn from_ops(ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = PauliString::IDENTITY;
        for &(q, p) in ops {
            if q >= MAX_PAULI_QUBITS {
                return Err(validation(format!(
                    "qubit index {q} exceeds the {MAX_PAULI_QUBITS}-qubit limit"
                )));
            }
            if s.get(q).is_some() {
                return Err(validation(format!("qubit {q} appears twice in one Pauli string")));
            }
            s.set(q, p);
        }
        Ok(s)
    }

    pub fn single(qubit: usize, pauli: Pauli) -> Self {
        assert!(qubit < MAX_PAULI_QUBITS);
        let mut s = PauliString::IDENTITY;
        s.set(qubit, pauli);
        s
    }

    /// Builds a string directly from symplectic masks.
    pub fn from_masks(x: u64, z: u64) -> Self {
        PauliString { x, z }
    }

    fn set(&mut self, q: usize, p: Pauli) {
        let (bx, bz) = p.bits();
        let bit = 1u64 << q;
        self.x = if bx { self.x | bit } else { self.x & !bit };
        self.z = if bz { self.z | bit } else { self.z & !bit };
    }

    pub fn get(&self, q: usize) -> Option<Pauli> {
        if q >= MAX_PAULI_QUBITS {
            return None;
        }
        let bx = (self.x >> q) & 1 == 1;
        let bz = (self.z >> q) & 1 == 1;
        match (bx, bz) {
            (false, false) => None,
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
        }
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Highest qubit index acted on, if any.
    pub fn max_qubit(&self) -> Option<usize> {
        let s = self.support();
        (s != 0).then(|| 63 - s.leading_zeros() as usize)
    }

    /// Non-identity factors sorted by qubit index.
    pub fn ops(&self) -> Vec<(usize, Pauli)> {
        let mut out = Vec::with_capacity(self.weight() as usize);
        let mut s = self.support();
        while s != 0 {
            let q = s.trailing_zeros() as usize;
            out.push((q, self.get(q).unwrap()));
            s &= s - 1;
        }
        out
    }

    /// `self · other = i^k · product`; returns `(k mod 4, product)`.
    pub fn multiply(&self, other: &PauliString) -> (u32, PauliString) {
        let prod = PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        };
        // i^{y1} X^x1 Z^z1 · i^{y2} X^x2 Z^z2 = i^{y1+y2} (-1)^{|z1 & x2|} X^x3 Z^z3
        let k = self.y_count() + other.y_count() + 2 * (self.z & other.x).count_ones()
            + 4
            - (prod.y_count() & 3);
        (k & 3, prod)
    }

    /// True if the two strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Action on a computational basis state: `P|b> = phase |b'>`.
    #[inline]
    pub fn apply_to_basis(&self, b: usize) -> (Complex64, usize) {
        let sign = ((self.z & b as u64).count_ones() * 2) + self.y_count();
        (i_pow(sign), b ^ self.x as usize)
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.ops().cmp(&other.ops()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for (q, p) in self.ops() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", p.symbol(), q)?;
            first = false;
        }
        Ok(())
    }
}

/// A Pauli string with a complex coefficient on an `n_qubits` register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    coefficient: Complex64,
    string: PauliString,
    n_qubits: usize,
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_PAULI_QUBITS {
        return Err(validation(format!(
            "register size must be in 1..={MAX_PAULI_QUBITS}, got {n_qubits}"
        )));
    }
    Ok(())
}

impl PauliTerm {
    pub fn new(coefficient: Complex64, ops: &[(usize, Pauli)], n_qubits: usize) -> Result<Self> {
        Self::from_string(coefficient, PauliString::from_ops(ops)?, n_qubits)
    }

    pub fn from_string(coefficient: Complex64, string: PauliString, n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        if let Some(q) = string.max_qubit() {
            if q >= n_qubits {
                return Err(validation(format!(
                    "qubit index {q} out of range for {n_qubits} qubits"
                )));
            }
        }
        Ok(PauliTerm {
            coefficient,
            string,
            n_qubits,
        })
    }

    /// Real-weighted term, the common case for Hamiltonians.
    pub fn real(coefficient: f64, ops: &[(usize, Pauli)], n_qubits: usize) -> Result<Self> {
        Self::new(Complex64::new(coefficient, 0.0), ops, n_qubits)
    }

    pub fn identity(coefficient: Complex64, n_qubits: usize) -> Result<Self> {
        Self::from_string(coefficient, PauliString::IDENTITY, n_qubits)
    }

    pub fn coefficient(&self) -> Complex64 {
        self.coefficient
    }

    pub fn string(&self) -> &PauliString {
        &self.string
    }

    pub fn ops(&self) -> Vec<(usize, Pauli)> {
        self.string.ops()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn scaled(&self, factor: Complex64) -> PauliTerm {
        PauliTerm {
            coefficient: self.coefficient * factor,
            ..self.clone()
        }
    }

    pub fn multiply(&self, other: &PauliTerm) -> Result<PauliTerm> {
        multiply(self, other)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coefficient;
        if c.im == 0.0 {
            write!(f, "{}", c.re)?;
        } else {
            write!(f, "({}{:+}i)", c.re, c.im)?;
        }
        if !self.string.is_identity() {
            write!(f, " {}", self.string)?;
        }
        Ok(())
    }
}

/// Product of two terms, phase folded into the coefficient.
pub fn multiply(a: &PauliTerm, b: &PauliTerm) -> Result<PauliTerm> {
    check_dims(a.n_qubits, b.n_qubits)?;
    let (k, string) = a.string.multiply(&b.string);
    Ok(PauliTerm {
        coefficient: a.coefficient * b.coefficient * i_pow(k),
        string,
        n_qubits: a.n_qubits,
    })
}

/// Linear combination of Pauli strings with merged, pruned coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
    prune_threshold: f64,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        Ok(PauliSum {
            n_qubits,
            terms: BTreeMap::new(),
            prune_threshold: DEFAULT_PRUNE_THRESHOLD,
        })
    }

    pub fn with_prune_threshold(mut self, threshold: f64) -> Self {
        self.prune_threshold = threshold;
        self.prune();
        self
    }

    pub fn from_terms<I: IntoIterator<Item = PauliTerm>>(n_qubits: usize, terms: I) -> Result<Self> {
        let mut sum = PauliSum::new(n_qubits)?;
        for t in terms {
            sum.add_term(&t)?;
        }
        Ok(sum)
    }

    pub fn from_term(term: PauliTerm) -> Self {
        let mut sum = PauliSum::new(term.n_qubits).expect("term register already validated");
        sum.accumulate(term.string, term.coefficient);
        sum
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn prune_threshold(&self) -> f64 {
        self.prune_threshold
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, string: &PauliString) -> Complex64 {
        self.terms.get(string).copied().unwrap_or_default()
    }

    /// Terms in canonical order (by weight, then by qubit/operator sequence).
    pub fn terms(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        self.terms.iter().map(move |(s, c)| PauliTerm {
            coefficient: *c,
            string: *s,
            n_qubits: self.n_qubits,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    fn accumulate(&mut self, string: PauliString, coefficient: Complex64) {
        let threshold = self.prune_threshold;
        let entry = self.terms.entry(string).or_default();
        *entry += coefficient;
        if entry.norm() < threshold {
            self.terms.remove(&string);
        }
    }

    fn prune(&mut self) {
        let threshold = self.prune_threshold;
        self.terms.retain(|_, c| c.norm() >= threshold);
    }

    pub fn add_term(&mut self, term: &PauliTerm) -> Result<()> {
        check_dims(self.n_qubits, term.n_qubits)?;
        self.accumulate(term.string, term.coefficient);
        Ok(())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        check_dims(self.n_qubits, other.n_qubits)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.accumulate(*s, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = PauliSum {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (s, c) in &self.terms {
            out.accumulate(*s, c * factor);
        }
        out
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        check_dims(self.n_qubits, other.n_qubits)?;
        let mut out = PauliSum {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        // Accumulate unpruned so that cancellations between partial products survive.
        let mut raw: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                let (k, s) = sa.multiply(sb);
                *raw.entry(s).or_default() += ca * cb * i_pow(k);
            }
        }
        for (s, c) in raw {
            out.accumulate(s, c);
        }
        Ok(out)
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> PauliSum {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    /// True if every coefficient is real to within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// Sum of coefficient magnitudes; bounds the spectral radius.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Largest coefficient-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &PauliSum) -> f64 {
        let mut keys: Vec<&PauliString> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.into_iter()
            .map(|s| (self.coefficient(s) - other.coefficient(s)).norm())
            .fold(0.0, f64::max)
    }
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    check_dims(a.n_qubits, b.n_qubits)?;
    let mut raw: BTreeMap<PauliString, Complex64> = BTreeMap::new();
    for (sa, ca) in &a.terms {
        for (sb, cb) in &b.terms {
            if sa.commutes_with(sb) {
                continue;
            }
            // anti-commuting strings: ab - ba = 2ab
            let (k, s) = sa.multiply(sb);
            *raw.entry(s).or_default() += 2.0 * ca * cb * i_pow(k);
        }
    }
    let mut out = PauliSum {
        n_qubits: a.n_qubits,
        terms: BTreeMap::new(),
        prune_threshold: a.prune_threshold,
    };
    for (s, c) in raw {
        out.accumulate(s, c);
    }
    Ok(out)
}

/// A creation or annihilation operator on one spin-orbital/qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderOp {
    pub index: usize,
    pub dagger: bool,
    pub flavor: Flavor,
}

impl LadderOp {
    pub fn create(index: usize, flavor: Flavor) -> Self {
        LadderOp {
            index,
            dagger: true,
            flavor,
        }
    }

    pub fn annihilate(index: usize, flavor: Flavor) -> Self {
        LadderOp {
            index,
            dagger: false,
            flavor,
        }
    }
}

/// Pauli form of a ladder operator: `(X ∓ iY)/2` on the target qubit, preceded
/// by the Jordan-Wigner parity string `Z_0 ... Z_{i-1}` for the fermionic flavor.
pub fn ladder_to_pauli(op: LadderOp, n_qubits: usize) -> Result<PauliSum> {
    check_register(n_qubits)?;
    if op.index >= n_qubits {
        return Err(validation(format!(
            "ladder index {} out of range for {n_qubits} qubits",
            op.index
        )));
    }
    let z_string = match op.flavor {
        Flavor::Fermionic => (1u64 << op.index) - 1,
        Flavor::Qubit => 0,
    };
    let bit = 1u64 << op.index;
    let x_part = PauliString::from_masks(bit, z_string);
    let y_part = PauliString::from_masks(bit, z_string | bit);
    let y_sign = if op.dagger { -0.5 } else { 0.5 };
    let mut sum = PauliSum::new(n_qubits)?;
    sum.accumulate(x_part, Complex64::new(0.5, 0.0));
    // the Y factor sits on a qubit disjoint from the Z string, so no reordering phase
    sum.accumulate(y_part, Complex64::new(0.0, y_sign));
    Ok(sum)
}

fn ladder_product(ops: &[LadderOp], n_qubits: usize) -> Result<PauliSum> {
    let mut acc = PauliSum::from_term(PauliTerm::identity(Complex64::new(1.0, 0.0), n_qubits)?);
    for op in ops {
        acc = acc.multiply(&ladder_to_pauli(*op, n_qubits)?)?;
    }
    Ok(acc)
}

/// Skew-Hermitian generator `T` of an excitation evolution `e^{θT}` in Pauli form.
///
/// Singles: `T = c†_i c_k - c†_k c_i`. Doubles: `T = c†_i c†_j c_k c_l - c†_k c†_l c_i c_j`,
/// where `c` is the fermionic or qubit ladder operator according to the flavor.
pub fn excitation_generator(element: &ExcitationElement, n_qubits: usize) -> Result<PauliSum> {
    element.validate(n_qubits)?;
    let f = element.flavor();
    let (forward, backward) = match element.excitation() {
        Excitation::Single { i, k } => (
            vec![LadderOp::create(i, f), LadderOp::annihilate(k, f)],
            vec![LadderOp::create(k, f), LadderOp::annihilate(i, f)],
        ),
        Excitation::Double { i, j, k, l } => (
            vec![
                LadderOp::create(i, f),
                LadderOp::create(j, f),
                LadderOp::annihilate(k, f),
                LadderOp::annihilate(l, f),
            ],
            vec![
                LadderOp::create(k, f),
                LadderOp::create(l, f),
                LadderOp::annihilate(i, f),
                LadderOp::annihilate(j, f),
            ],
        ),
    };
    ladder_product(&forward, n_qubits)?.sub(&ladder_product(&backward, n_qubits)?)
}

impl From<PauliTerm> for PauliSum {
    fn from(term: PauliTerm) -> Self {
        PauliSum::from_term(term)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (n, t) in self.terms().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliTerm {
    type Err = Error;

    /// Parses `<coeff> <P><q> ...` with a real coefficient; the register is
    /// sized to the highest qubit mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let (coefficient, string) = parse_term_body(s)?;
        let n = string.max_qubit().map_or(1, |q| q + 1);
        PauliTerm::from_string(Complex64::new(coefficient, 0.0), string, n)
    }
}

/// Parses `<coeff> [<P><q> ...]` into a real coefficient and a Pauli string.
pub(crate) fn parse_term_body(s: &str) -> Result<(f64, PauliString)> {
    let mut tokens = s.split_whitespace();
    let coeff_tok = tokens
        .next()
        .ok_or_else(|| validation("missing coefficient"))?;
    let coefficient: f64 = coeff_tok.parse().map_err(|_| {
        if coeff_tok.contains(['i', 'j']) && !coeff_tok.eq_ignore_ascii_case("inf") {
            validation(format!("non-real coefficient `{coeff_tok}`"))
        } else {
            validation(format!("invalid coefficient `{coeff_tok}`"))
        }
    })?;
    if !coefficient.is_finite() {
        return Err(validation(format!("non-finite coefficient `{coeff_tok}`")));
    }
    let mut ops = Vec::new();
    for tok in tokens {
        let mut chars = tok.chars();
        let pauli = chars
            .next()
            .and_then(Pauli::from_symbol)
            .ok_or_else(|| validation(format!("invalid Pauli factor `{tok}`")))?;
        let q: usize = chars
            .as_str()
            .parse()
            .map_err(|_| validation(format!("invalid qubit index in `{tok}`")))?;
        ops.push((q, pauli));
    }
    Ok((coefficient, PauliString::from_ops(&ops)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_squared_is_identity() {
        let x = PauliTerm::real(1.0, &[(0, Pauli::X)], 1).unwrap();
        let p = multiply(&x, &x).unwrap();
        assert!(p.string().is_identity());
        assert_eq!(p.coefficient(), c(1.0, 0.0));
    }

    #[test]
    fn xy_is_iz() {
        let x = PauliTerm::real(1.0, &[(0, Pauli::X)], 1).unwrap();
        let y = PauliTerm::real(1.0, &[(0, Pauli::Y)], 1).unwrap();
        let p = multiply(&x, &y).unwrap();
        assert_eq!(p.ops(), vec![(0, Pauli::Z)]);
        assert_eq!(p.coefficient(), c(0.0, 1.0));
        let q = multiply(&y, &x).unwrap();
        assert_eq!(q.coefficient(), c(0.0, -1.0));
    }

    #[test]
    fn multiply_rejects_mismatched_registers() {
        let a = PauliTerm::real(1.0, &[(0, Pauli::X)], 1).unwrap();
        let b = PauliTerm::real(1.0, &[(0, Pauli::X)], 2).unwrap();
        assert!(matches!(multiply(&a, &b), Err(Error::Dimension { .. })));
    }

    #[test]
    fn self_commutator_vanishes() {
        let x = PauliSum::from(PauliTerm::real(1.0, &[(0, Pauli::X)], 1).unwrap());
        assert!(commutator(&x, &x).unwrap().is_empty());
    }

    #[test]
    fn commutator_of_x_and_y() {
        let x = PauliSum::from(PauliTerm::real(1.0, &[(0, Pauli::X)], 1).unwrap());
        let y = PauliSum::from(PauliTerm::real(1.0, &[(0, Pauli::Y)], 1).unwrap());
        let com = commutator(&x, &y).unwrap();
        assert_eq!(com.len(), 1);
        assert_eq!(com.coefficient(&PauliString::single(0, Pauli::Z)), c(0.0, 2.0));
    }

    #[test]
    fn commutator_z0x1_x0() {
        let a = PauliSum::from(PauliTerm::real(1.0, &[(0, Pauli::Z), (1, Pauli::X)], 2).unwrap());
        let b = PauliSum::from(PauliTerm::real(1.0, &[(0, Pauli::X)], 2).unwrap());
        let com = commutator(&a, &b).unwrap();
        let y0x1 = PauliString::from_ops(&[(0, Pauli::Y), (1, Pauli::X)]).unwrap();
        assert_eq!(com.len(), 1);
        assert!((com.coefficient(&y0x1) - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn qubit_creation_operator() {
        let q = ladder_to_pauli(LadderOp::create(0, Flavor::Qubit), 1).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.coefficient(&PauliString::single(0, Pauli::X)), c(0.5, 0.0));
        assert_eq!(q.coefficient(&PauliString::single(0, Pauli::Y)), c(0.0, -0.5));
    }

    #[test]
    fn fermionic_creation_carries_parity_string() {
        let a = ladder_to_pauli(LadderOp::create(2, Flavor::Fermionic), 3).unwrap();
        let xzz = PauliString::from_ops(&[(0, Pauli::Z), (1, Pauli::Z), (2, Pauli::X)]).unwrap();
        let yzz = PauliString::from_ops(&[(0, Pauli::Z), (1, Pauli::Z), (2, Pauli::Y)]).unwrap();
        assert_eq!(a.coefficient(&xzz), c(0.5, 0.0));
        assert_eq!(a.coefficient(&yzz), c(0.0, -0.5));
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn lowest_fermionic_mode_matches_qubit_mode() {
        let a = ladder_to_pauli(LadderOp::annihilate(0, Flavor::Fermionic), 1).unwrap();
        let q = ladder_to_pauli(LadderOp::annihilate(0, Flavor::Qubit), 1).unwrap();
        assert_eq!(a, q);
    }

    #[test]
    fn ladder_index_out_of_range() {
        assert!(ladder_to_pauli(LadderOp::create(3, Flavor::Qubit), 3).is_err());
    }

    #[test]
    fn single_qubit_generator_closed_form() {
        let e = ExcitationElement::single(Flavor::Qubit, 0, 1).unwrap();
        let g = excitation_generator(&e, 2).unwrap();
        let xy = PauliString::from_ops(&[(0, Pauli::X), (1, Pauli::Y)]).unwrap();
        let yx = PauliString::from_ops(&[(0, Pauli::Y), (1, Pauli::X)]).unwrap();
        assert_eq!(g.len(), 2);
        assert!((g.coefficient(&xy) - c(0.0, 0.5)).norm() < 1e-15);
        assert!((g.coefficient(&yx) - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn single_fermionic_generator_closed_form() {
        let e = ExcitationElement::single(Flavor::Fermionic, 0, 3).unwrap();
        let g = excitation_generator(&e, 4).unwrap();
        let xzzy = PauliString::from_ops(&[(0, Pauli::X), (1, Pauli::Z), (2, Pauli::Z), (3, Pauli::Y)])
            .unwrap();
        let yzzx = PauliString::from_ops(&[(0, Pauli::Y), (1, Pauli::Z), (2, Pauli::Z), (3, Pauli::X)])
            .unwrap();
        assert_eq!(g.len(), 2);
        assert!((g.coefficient(&xzzy) - c(0.0, 0.5)).norm() < 1e-15);
        assert!((g.coefficient(&yzzx) - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn qubit_double_generator_is_eight_term_sum() {
        // ladder definition equals the negated closed form
        // (i/8)(XYXX + YXXX + YYYX + YYXY - XXYX - XXXY - YXYY - XYYY)
        use Pauli::{X, Y};
        let e = ExcitationElement::double(Flavor::Qubit, 0, 1, 2, 3).unwrap();
        let g = excitation_generator(&e, 4).unwrap();
        let closed = [
            ([X, Y, X, X], 1.0),
            ([Y, X, X, X], 1.0),
            ([Y, Y, Y, X], 1.0),
            ([Y, Y, X, Y], 1.0),
            ([X, X, Y, X], -1.0),
            ([X, X, X, Y], -1.0),
            ([Y, X, Y, Y], -1.0),
            ([X, Y, Y, Y], -1.0),
        ];
        assert_eq!(g.len(), 8);
        for (ps, sign) in closed {
            let s = PauliString::from_ops(&[(0, ps[0]), (1, ps[1]), (2, ps[2]), (3, ps[3])]).unwrap();
            assert!((g.coefficient(&s) - c(0.0, -sign / 8.0)).norm() < 1e-15, "{s}");
        }
    }

    #[test]
    fn term_display_and_parse() {
        let t = PauliTerm::real(0.5, &[(3, Pauli::Y), (0, Pauli::X), (1, Pauli::Z)], 4).unwrap();
        assert_eq!(t.to_string(), "0.5 X0 Z1 Y3");
        let back: PauliTerm = "0.5 X0 Z1 Y3".parse().unwrap();
        assert_eq!(back.string(), t.string());
        assert!("1+2i X0".parse::<PauliTerm>().is_err());
        assert!("1.0 X0 Z0".parse::<PauliTerm>().is_err());
        assert!("1.0 Q0".parse::<PauliTerm>().is_err());
    }

    #[test]
    fn basis_action_of_y() {
        let y = PauliString::single(0, Pauli::Y);
        assert_eq!(y.apply_to_basis(0), (c(0.0, 1.0), 1));
        assert_eq!(y.apply_to_basis(1), (c(0.0, -1.0), 0));
    }

    #[test]
    fn sum_merges_and_prunes() {
        let a = PauliTerm::real(1.0, &[(0, Pauli::Z)], 1).unwrap();
        let b = PauliTerm::real(-1.0, &[(0, Pauli::Z)], 1).unwrap();
        let s = PauliSum::from_terms(1, [a.clone(), a.clone()]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(a.string()), c(2.0, 0.0));
        let z = PauliSum::from_terms(1, [a, b]).unwrap();
        assert!(z.is_empty());
    }
}
