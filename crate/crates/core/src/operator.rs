//! Terms `λe_i` of a free module over a commutative operator monoid, the
//! admissible order family used throughout, and exact arithmetic on module
//! elements.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::coeff::Coefficient;
use crate::inversive::LaurentElement;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperatorError {
    #[error("leading term of the zero element")]
    ZeroElement,
    #[error("term does not divide")]
    NotDivisible,
    #[error("operator sequence must be a permutation of 0..{0}")]
    BadSequence(usize),
    #[error("unknown operator `{0}` in order specification")]
    UnknownOperator(String),
}

/// Exponents `(k_1, ..., k_n)` of a monomial `δ_1^{k_1}...δ_n^{k_n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(SmallVec<[u32; 8]>);

impl ExponentVector {
    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        Self(exponents.into_iter().collect())
    }

    /// The identity monomial in `n` operators.
    pub fn one(n: usize) -> Self {
        Self(SmallVec::from_elem(0, n))
    }

    /// `δ_index` alone.
    pub fn unit(n: usize, index: usize) -> Self {
        let mut e = Self::one(n);
        e.0[index] = 1;
        e
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    /// Order of the operator: the sum of the exponents.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        self.divides(other).then(|| Self(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        Self(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[u32; N]> for ExponentVector {
    fn from(v: [u32; N]) -> Self {
        Self::new(v)
    }
}

/// A term `λ e_generator`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleTerm {
    pub generator: usize,
    pub monomial: ExponentVector,
}

impl ModuleTerm {
    pub fn new(generator: usize, monomial: impl Into<ExponentVector>) -> Self {
        Self { generator, monomial: monomial.into() }
    }

    pub fn order(&self) -> u32 {
        self.monomial.order()
    }

    /// Same generator and componentwise smaller exponents.
    pub fn divides(&self, other: &ModuleTerm) -> bool {
        self.generator == other.generator && self.monomial.divides(&other.monomial)
    }

    /// The `λ` with `λ·self = other`.
    pub fn quotient_of(&self, other: &ModuleTerm) -> Result<ExponentVector, OperatorError> {
        if self.generator != other.generator {
            return Err(OperatorError::NotDivisible);
        }
        self.monomial.quotient_of(&other.monomial).ok_or(OperatorError::NotDivisible)
    }

    pub fn mul_monomial(&self, lambda: &ExponentVector) -> ModuleTerm {
        ModuleTerm { generator: self.generator, monomial: self.monomial.mul(lambda) }
    }

    /// Canonical text: operators in declared order with caret powers and the
    /// generator last, e.g. `x^2*t*u`.
    pub fn render(&self, operator_names: &[String], generator_names: &[String]) -> String {
        render_monomial(
            self.monomial.as_slice().iter().map(|&k| i64::from(k)),
            operator_names,
            &generator_names[self.generator],
        )
    }
}

impl fmt::Debug for ModuleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}e{}", self.monomial, self.generator)
    }
}

pub(crate) fn render_monomial(
    exponents: impl Iterator<Item = i64>,
    operator_names: &[String],
    generator: &str,
) -> String {
    let mut parts = Vec::new();
    for (name, k) in operator_names.iter().zip(exponents) {
        match k {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{k}")),
        }
    }
    parts.push(generator.to_string());
    parts.join("*")
}

/// Comparison key of an admissible order: `(total degree, generator index,
/// exponents in the declared operator sequence)`, compared lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OrderKey(pub(crate) SmallVec<[u32; 12]>);

/// Degree, then generator index, then exponent-lex over a configurable
/// operator sequence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissibleOrder {
    sequence: Vec<usize>,
}

impl AdmissibleOrder {
    /// Exponents compared in declaration order.
    pub fn standard(n: usize) -> Self {
        Self { sequence: (0..n).collect() }
    }

    /// `sequence[k]` is the operator index compared at position `k`.
    pub fn with_sequence(sequence: Vec<usize>) -> Result<Self, OperatorError> {
        let n = sequence.len();
        let mut seen = vec![false; n];
        for &i in &sequence {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(OperatorError::BadSequence(n));
            }
        }
        Ok(Self { sequence })
    }

    /// Builds the sequence from operator names, e.g. `["t", "x"]`.
    pub fn from_names(names: &[&str], operator_names: &[String]) -> Result<Self, OperatorError> {
        let seq = names
            .iter()
            .map(|n| {
                operator_names
                    .iter()
                    .position(|o| o == n)
                    .ok_or_else(|| OperatorError::UnknownOperator(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if seq.len() != operator_names.len() {
            return Err(OperatorError::BadSequence(operator_names.len()));
        }
        Self::with_sequence(seq)
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn operator_count(&self) -> usize {
        self.sequence.len()
    }

    pub fn key(&self, term: &ModuleTerm) -> OrderKey {
        let mut k = SmallVec::with_capacity(self.sequence.len() + 2);
        k.push(term.order());
        k.push(term.generator as u32);
        k.extend(self.sequence.iter().map(|&i| term.monomial[i]));
        OrderKey(k)
    }

    /// Inverse of [`AdmissibleOrder::key`].
    pub fn term_of(&self, key: &OrderKey) -> ModuleTerm {
        let mut exps = vec![0u32; self.sequence.len()];
        for (pos, &i) in self.sequence.iter().enumerate() {
            exps[i] = key.0[pos + 2];
        }
        ModuleTerm { generator: key.0[1] as usize, monomial: exps.into() }
    }

    pub fn cmp(&self, s: &ModuleTerm, t: &ModuleTerm) -> Ordering {
        self.key(s).cmp(&self.key(t))
    }
}

/// Finite `K`-linear combination of terms with no stored zeros.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct ModuleElement {
    terms: BTreeMap<ModuleTerm, Coefficient>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coefficient: Coefficient, term: ModuleTerm) -> Self {
        let mut e = Self::zero();
        e.add_term(term, coefficient);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ModuleTerm, Coefficient)>) -> Self {
        let mut e = Self::zero();
        for (t, c) in terms {
            e.add_term(t, c);
        }
        e
    }

    /// Adds `c·t` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, term: ModuleTerm, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModuleTerm, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, term: &ModuleTerm) -> Coefficient {
        self.terms.get(term).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        self.add(&other.scale(&Coefficient::from_integer(-1)))
    }

    pub fn scale(&self, c: &Coefficient) -> ModuleElement {
        if c.is_zero() {
            return ModuleElement::zero();
        }
        ModuleElement { terms: self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect() }
    }

    /// Action of the monomial `λ` on every term.
    pub fn apply_monomial(&self, lambda: &ExponentVector) -> ModuleElement {
        ModuleElement { terms: self.terms.iter().map(|(t, c)| (t.mul_monomial(lambda), c.clone())).collect() }
    }

    /// `(lt(f), lc(f))` under `order`.
    pub fn leading_term(&self, order: &AdmissibleOrder) -> Result<(ModuleTerm, Coefficient), OperatorError> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(t, c)| (t.clone(), c.clone()))
            .ok_or(OperatorError::ZeroElement)
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &AdmissibleOrder) -> Vec<(&ModuleTerm, &Coefficient)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    /// Operator count of the ambient ring, if the element is nonzero.
    pub fn operator_count(&self) -> Option<usize> {
        self.terms.keys().next().map(|t| t.monomial.len())
    }

    pub fn render(&self, order: &AdmissibleOrder, operator_names: &[String], generator_names: &[String]) -> String {
        render_sum(
            self.sorted_terms(order)
                .into_iter()
                .map(|(t, c)| (t.render(operator_names, generator_names), c)),
        )
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Joins `c*monomial` pieces into `t*u - a*x^2*u + (a+1)*u`.
pub(crate) fn render_sum<'a>(items: impl Iterator<Item = (String, &'a Coefficient)>) -> String {
    let mut out = String::new();
    for (mono, c) in items {
        let negative = c.is_negative();
        let abs = if negative { -c } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !abs.is_one() {
            if abs.is_compound() {
                out.push_str(&format!("({abs})*"));
            } else {
                out.push_str(&format!("{abs}*"));
            }
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Element of the commutative operator ring `K[Δ]`, used for cofactors.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct OperatorPolynomial {
    terms: BTreeMap<ExponentVector, Coefficient>,
}

impl OperatorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Coefficient, lambda: ExponentVector) -> Self {
        let mut p = Self::zero();
        p.add_term(lambda, c);
        p
    }

    pub fn add_term(&mut self, lambda: ExponentVector, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self + c·λ·other`.
    pub fn add_scaled(&mut self, other: &OperatorPolynomial, c: &Coefficient, lambda: &ExponentVector) {
        for (m, x) in &other.terms {
            self.add_term(m.mul(lambda), x * c);
        }
    }

    pub fn scale(&self, c: &Coefficient) -> OperatorPolynomial {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExponentVector, &Coefficient)> {
        self.terms.iter()
    }

    /// The action on a module element.
    pub fn apply(&self, f: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (lambda, c) in &self.terms {
            out = out.add(&f.apply_monomial(lambda).scale(c));
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Differential,
    Difference,
    Inversive,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Differential => "differential",
            SystemKind::Difference => "difference",
            SystemKind::Inversive => "inversive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "differential" => Some(SystemKind::Differential),
            "difference" => Some(SystemKind::Difference),
            "inversive" => Some(SystemKind::Inversive),
            _ => None,
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A linear system: operator ring kind, operator symbols, optional
/// coefficient parameter, unknowns (free generators) and relations.
///
/// Relations carry signed exponents; only `Inversive` presentations may use
/// negative ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    pub kind: SystemKind,
    pub operator_names: Vec<String>,
    pub parameter: Option<String>,
    pub generator_names: Vec<String>,
    pub relations: Vec<LaurentElement>,
}

impl Presentation {
    pub fn operator_count(&self) -> usize {
        self.operator_names.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    /// Checks the structural invariants: indices in range, exponent vector
    /// lengths, sign restrictions and a single coefficient parameter.
    pub fn validate(&self) -> Result<(), String> {
        let m = self.operator_count();
        for (i, rel) in self.relations.iter().enumerate() {
            for (t, c) in rel.iter() {
                if t.generator >= self.generator_count() {
                    return Err(format!("relation {}: generator index {} out of range", i + 1, t.generator));
                }
                if t.exponents.len() != m {
                    return Err(format!("relation {}: exponent vector has wrong length", i + 1));
                }
                if self.kind != SystemKind::Inversive && t.exponents.iter().any(|&k| k < 0) {
                    return Err(format!("relation {}: negative exponent in a {} system", i + 1, self.kind));
                }
                if let Some(p) = c.parameter_name() {
                    if self.parameter.as_deref() != Some(p) {
                        return Err(format!("relation {}: coefficient uses undeclared parameter `{p}`", i + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// Relations as elements of `K[Δ]E`; `None` if some exponent is negative.
    pub fn nonnegative_relations(&self) -> Option<Vec<ModuleElement>> {
        self.relations.iter().map(LaurentElement::to_nonnegative).collect()
    }
}
