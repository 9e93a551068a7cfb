//! Inversive difference presentations (Laurent exponents in `Z^m`) and their
//! embedding into a difference ring over `2m` operators `α_1..α_m, β_1..β_m`
//! where `β_i` plays the role of `δ_i^{-1}`.
//!
//! `δ^k ↦ α^{max(k,0)} β^{max(-k,0)}`; the relations `α_iβ_i e_j - e_j`
//! generate the kernel of the projection back.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::coeff::Coefficient;
use crate::operator::{render_monomial, render_sum, ExponentVector, ModuleElement, ModuleTerm};

/// Signed exponents of `δ_1^{k_1}...δ_m^{k_m}`, `k_i ∈ Z`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentExponentVector(SmallVec<[i32; 8]>);

impl LaurentExponentVector {
    pub fn new(exponents: impl IntoIterator<Item = i32>) -> Self {
        Self(exponents.into_iter().collect())
    }

    pub fn one(m: usize) -> Self {
        Self(SmallVec::from_elem(0, m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &i32> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    /// `Σ |k_i|`.
    pub fn order(&self) -> u32 {
        self.0.iter().map(|k| k.unsigned_abs()).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn from_nonnegative(e: &ExponentVector) -> Self {
        Self(e.as_slice().iter().map(|&k| k as i32).collect())
    }
}

impl fmt::Debug for LaurentExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl<const N: usize> From<[i32; N]> for LaurentExponentVector {
    fn from(v: [i32; N]) -> Self {
        Self::new(v)
    }
}

impl From<Vec<i32>> for LaurentExponentVector {
    fn from(v: Vec<i32>) -> Self {
        Self(SmallVec::from_vec(v))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LaurentTerm {
    pub generator: usize,
    pub exponents: LaurentExponentVector,
}

impl LaurentTerm {
    pub fn new(generator: usize, exponents: impl Into<LaurentExponentVector>) -> Self {
        Self { generator, exponents: exponents.into() }
    }

    pub fn render(&self, operator_names: &[String], generator_names: &[String]) -> String {
        render_monomial(
            self.exponents.iter().map(|&k| i64::from(k)),
            operator_names,
            &generator_names[self.generator],
        )
    }
}

/// Element of `K[Δ*]E`: finite combination of Laurent terms.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentElement {
    terms: BTreeMap<LaurentTerm, Coefficient>,
}

impl LaurentElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (LaurentTerm, Coefficient)>) -> Self {
        let mut e = Self::zero();
        for (t, c) in terms {
            e.add_term(t, c);
        }
        e
    }

    pub fn add_term(&mut self, term: LaurentTerm, c: Coefficient) {
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

    pub fn iter(&self) -> impl Iterator<Item = (&LaurentTerm, &Coefficient)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect() }
    }

    pub fn from_nonnegative(f: &ModuleElement) -> Self {
        Self::from_terms(f.iter().map(|(t, c)| {
            (LaurentTerm { generator: t.generator, exponents: LaurentExponentVector::from_nonnegative(&t.monomial) }, c.clone())
        }))
    }

    /// The same element in `K[Δ]E` when no exponent is negative.
    pub fn to_nonnegative(&self) -> Option<ModuleElement> {
        let mut out = ModuleElement::zero();
        for (t, c) in &self.terms {
            let exps: Option<Vec<u32>> = t.exponents.iter().map(|&k| u32::try_from(k).ok()).collect();
            out.add_term(ModuleTerm::new(t.generator, exps?), c.clone());
        }
        Some(out)
    }

    /// Renders terms in a fixed order: descending by `(order, generator,
    /// exponents)` with exponents compared in declaration order.
    pub fn render(&self, operator_names: &[String], generator_names: &[String]) -> String {
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|(a, _), (b, _)| {
            (b.exponents.order(), b.generator, &b.exponents).cmp(&(a.exponents.order(), a.generator, &a.exponents))
        });
        render_sum(items.into_iter().map(|(t, c)| (t.render(operator_names, generator_names), c)))
    }
}

impl fmt::Debug for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Operator names of the doubled ring: `alpha_<name>` for each base operator
/// followed by `beta_<name>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaRing {
    base: Vec<String>,
    names: Vec<String>,
}

impl SigmaRing {
    pub fn new(base: &[String]) -> Self {
        let names = base
            .iter()
            .map(|n| format!("alpha_{n}"))
            .chain(base.iter().map(|n| format!("beta_{n}")))
            .collect();
        Self { base: base.to_vec(), names }
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn operator_names(&self) -> &[String] {
        &self.names
    }

    pub fn m(&self) -> usize {
        self.base.len()
    }

    /// Index of `α_i` and `β_i`.
    pub fn alpha(&self, i: usize) -> usize {
        i
    }

    pub fn beta(&self, i: usize) -> usize {
        self.base.len() + i
    }
}

pub fn rho_embed_exponents(k: &LaurentExponentVector) -> ExponentVector {
    let pos = k.iter().map(|&x| x.max(0) as u32);
    let neg = k.iter().map(|&x| (-x).max(0) as u32);
    ExponentVector::new(pos.chain(neg))
}

/// Termwise split of Laurent exponents into the `α`/`β` halves.
pub fn rho_embed(f: &LaurentElement) -> ModuleElement {
    ModuleElement::from_terms(
        f.iter()
            .map(|(t, c)| (ModuleTerm { generator: t.generator, monomial: rho_embed_exponents(&t.exponents) }, c.clone())),
    )
}

/// `α^a β^b e ↦ δ^{a-b} e`; colliding terms are summed.
pub fn rho_project(f: &ModuleElement) -> LaurentElement {
    LaurentElement::from_terms(f.iter().map(|(t, c)| {
        let e = t.monomial.as_slice();
        let m = e.len() / 2;
        let k: Vec<i32> = (0..m).map(|i| e[i] as i32 - e[m + i] as i32).collect();
        (LaurentTerm::new(t.generator, k), c.clone())
    }))
}

/// Appends `α_iβ_i e_j - e_j` for every operator `i < m` and generator `j < q`.
pub fn saturate(relations: &[ModuleElement], m: usize, q: usize) -> Vec<ModuleElement> {
    let mut out = relations.to_vec();
    out.extend(saturation_relations(m, q));
    out
}

pub fn saturation_relations(m: usize, q: usize) -> Vec<ModuleElement> {
    let mut out = Vec::with_capacity(m * q);
    for j in 0..q {
        for i in 0..m {
            let mut e = vec![0u32; 2 * m];
            e[i] = 1;
            e[m + i] = 1;
            out.push(ModuleElement::from_terms([
                (ModuleTerm::new(j, e), Coefficient::one()),
                (ModuleTerm::new(j, vec![0u32; 2 * m]), Coefficient::from_integer(-1)),
            ]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::parse_coefficient;

    fn c(s: &str) -> Coefficient {
        parse_coefficient(s, Some("a")).unwrap()
    }

    fn lt(e: &[i32]) -> LaurentTerm {
        LaurentTerm::new(0, e.to_vec())
    }

    fn mt(e: &[u32]) -> ModuleTerm {
        ModuleTerm::new(0, e.to_vec())
    }

    #[test]
    fn embeds_laurent_terms() {
        // ops (x, t): dx^-1 dt e -> alpha_t beta_x e
        let f = LaurentElement::from_terms([(lt(&[-1, 1]), c("1"))]);
        assert_eq!(rho_embed(&f), ModuleElement::term(c("1"), mt(&[0, 1, 1, 0])));
        let e = LaurentElement::from_terms([(lt(&[0, 0]), c("1"))]);
        assert_eq!(rho_embed(&e), ModuleElement::term(c("1"), mt(&[0, 0, 0, 0])));
    }

    #[test]
    fn embeds_symmetric_diffusion_relation() {
        let f = LaurentElement::from_terms([
            (lt(&[0, 1]), c("1")),
            (lt(&[1, 0]), c("-a")),
            (lt(&[-1, 0]), c("-a")),
            (lt(&[0, 0]), c("2*a-1")),
        ]);
        let expected = ModuleElement::from_terms([
            (mt(&[0, 1, 0, 0]), c("1")),
            (mt(&[1, 0, 0, 0]), c("-a")),
            (mt(&[0, 0, 1, 0]), c("-a")),
            (mt(&[0, 0, 0, 0]), c("2*a-1")),
        ]);
        assert_eq!(rho_embed(&f), expected);
        assert_eq!(rho_project(&expected), f);
    }

    #[test]
    fn projection_collapses_saturation() {
        let g = ModuleElement::term(c("1"), mt(&[2, 0, 1, 0]));
        assert_eq!(rho_project(&g), LaurentElement::from_terms([(lt(&[1, 0]), c("1"))]));
        for s in saturation_relations(3, 2) {
            assert!(rho_project(&s).is_zero());
        }
    }

    #[test]
    fn saturation_counts() {
        let sat = saturate(&[], 2, 1);
        assert_eq!(sat.len(), 2);
        assert_eq!(
            sat[0],
            ModuleElement::from_terms([(mt(&[1, 0, 1, 0]), c("1")), (mt(&[0, 0, 0, 0]), c("-1"))])
        );
        assert_eq!(saturation_relations(4, 12).len(), 48);
        let f = vec![ModuleElement::term(c("1"), ModuleTerm::new(0, Vec::<u32>::new()))];
        assert_eq!(saturate(&f, 0, 1), f);
    }

    #[test]
    fn sigma_names() {
        let s = SigmaRing::new(&["x".to_string(), "t".to_string()]);
        assert_eq!(s.operator_names(), ["alpha_x", "alpha_t", "beta_x", "beta_t"]);
        assert_eq!(s.beta(1), 3);
    }
}
