//! Finite-difference discretization of differential presentations on a unit
//! grid. Each operator gets a substitution rule for `δ`, optionally with
//! explicit stencils for given powers (e.g. `δ² ↦ σ - 2 + σ^{-1}`).

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::Coefficient;
use crate::inversive::{LaurentElement, LaurentTerm};
use crate::operator::{Presentation, SystemKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("only differential systems can be discretized, got a {0} system")]
    NotDifferential(SystemKind),
    #[error("scheme has {found} rules for {expected} operators")]
    RuleCount { expected: usize, found: usize },
    #[error("unknown rule `{0}` (expected forward, backward, central or central2)")]
    UnknownRule(String),
    #[error("unknown scheme preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown operator `{0}` in rule")]
    UnknownOperator(String),
    #[error("malformed rule `{0}`, expected op=rule")]
    Malformed(String),
}

/// Image of `δ` under a substitution rule, `σ` being the unit shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `σ - 1`
    Forward,
    /// `1 - σ^{-1}`
    Backward,
    /// `(σ - σ^{-1})/2`
    Central,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Forward => "forward",
            Rule::Backward => "backward",
            Rule::Central => "central",
        }
    }

    fn image(self) -> StencilImage {
        let one = Coefficient::one;
        match self {
            Rule::Forward => StencilImage::from_pairs([(1, one()), (0, -one())]),
            Rule::Backward => StencilImage::from_pairs([(0, one()), (-1, -one())]),
            Rule::Central => StencilImage::from_pairs([(1, Coefficient::ratio(1, 2)), (-1, Coefficient::ratio(-1, 2))]),
        }
    }
}

/// Laurent polynomial `Σ c_k σ^k` in a single shift.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct StencilImage {
    terms: BTreeMap<i32, Coefficient>,
}

impl StencilImage {
    pub fn one() -> Self {
        Self::from_pairs([(0, Coefficient::one())])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, Coefficient)>) -> Self {
        let mut s = Self::default();
        for (k, c) in pairs {
            s.add(k, c);
        }
        s
    }

    fn add(&mut self, k: i32, c: Coefficient) {
        let sum = match self.terms.remove(&k) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add(a + b, x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &Coefficient)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Second-order central stencil `σ - 2 + σ^{-1}`.
    pub fn central_second() -> Self {
        Self::from_pairs([(1, Coefficient::one()), (0, Coefficient::from_integer(-2)), (-1, Coefficient::one())])
    }
}

impl fmt::Debug for StencilImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().rev().map(|(k, c)| format!("({c})s^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rule for one operator plus stencils that replace given powers outright.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorRule {
    pub rule: Rule,
    pub overrides: BTreeMap<u32, StencilImage>,
}

impl OperatorRule {
    pub fn plain(rule: Rule) -> Self {
        Self { rule, overrides: BTreeMap::new() }
    }

    /// Central with `δ² ↦ σ - 2 + σ^{-1}`.
    pub fn central2() -> Self {
        Self { rule: Rule::Central, overrides: BTreeMap::from([(2, StencilImage::central_second())]) }
    }

    pub fn parse(text: &str) -> Result<Self, SchemeError> {
        match text {
            "forward" => Ok(Self::plain(Rule::Forward)),
            "backward" => Ok(Self::plain(Rule::Backward)),
            "central" => Ok(Self::plain(Rule::Central)),
            "central2" => Ok(Self::central2()),
            _ => Err(SchemeError::UnknownRule(text.to_string())),
        }
    }

    /// `forward`, `central2`, ...; overrides other than the standard one are
    /// listed by power.
    pub fn name(&self) -> String {
        if *self == Self::central2() {
            return "central2".to_string();
        }
        let mut s = self.rule.name().to_string();
        for k in self.overrides.keys() {
            s.push_str(&format!("+override{k}"));
        }
        s
    }
}

/// Per-operator rules, indexed like the presentation's operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    pub rules: Vec<OperatorRule>,
}

pub const PRESETS: [&str; 3] = ["forward", "symmetric", "symmetric-space-forward-time"];

impl SchemeSpec {
    pub fn uniform(rule: OperatorRule, m: usize) -> Self {
        Self { rules: vec![rule; m] }
    }

    /// `forward`: all forward. `symmetric`: all central.
    /// `symmetric-space-forward-time`: the last operator forward, the others
    /// central with the second-order stencil.
    pub fn preset(name: &str, m: usize) -> Result<Self, SchemeError> {
        match name {
            "forward" => Ok(Self::uniform(OperatorRule::plain(Rule::Forward), m)),
            "symmetric" => Ok(Self::uniform(OperatorRule::plain(Rule::Central), m)),
            "symmetric-space-forward-time" => {
                let mut rules = vec![OperatorRule::central2(); m];
                if let Some(last) = rules.last_mut() {
                    *last = OperatorRule::plain(Rule::Forward);
                }
                Ok(Self { rules })
            }
            _ => Err(SchemeError::UnknownPreset(name.to_string())),
        }
    }

    /// Applies `op=rule` assignments on top of `self`.
    pub fn with_assignments(mut self, assignments: &[String], operator_names: &[String]) -> Result<Self, SchemeError> {
        for a in assignments {
            let (op, rule) = a.split_once('=').ok_or_else(|| SchemeError::Malformed(a.clone()))?;
            let i = operator_names
                .iter()
                .position(|o| o == op.trim())
                .ok_or_else(|| SchemeError::UnknownOperator(op.trim().to_string()))?;
            self.rules[i] = OperatorRule::parse(rule.trim())?;
        }
        Ok(self)
    }

    /// Overrides on non-central rules are applied as given but reported.
    pub fn diagnostics(&self, operator_names: &[String]) -> Vec<String> {
        self.rules
            .iter()
            .zip(operator_names)
            .filter(|(r, _)| r.rule != Rule::Central && !r.overrides.is_empty())
            .map(|(r, op)| format!("operator {op}: power override on a {} rule", r.rule.name()))
            .collect()
    }

    /// `x=central2 t=forward`.
    pub fn describe(&self, operator_names: &[String]) -> String {
        operator_names
            .iter()
            .zip(&self.rules)
            .map(|(op, r)| format!("{op}={}", r.name()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Image of `δ^k`: the override for `k` if present, else the rule's image
/// to the `k`-th power.
pub fn stencil_image(rule: &OperatorRule, k: u32) -> StencilImage {
    match rule.overrides.get(&k) {
        Some(s) => s.clone(),
        None => rule.rule.image().pow(k),
    }
}

/// Substitutes every monomial `Π δ_i^{k_i} e_j` by `Π image_i(k_i) e_j`,
/// producing an inversive presentation over the same symbols.
pub fn discretize(p: &Presentation, spec: &SchemeSpec) -> Result<Presentation, SchemeError> {
    if p.kind != SystemKind::Differential {
        return Err(SchemeError::NotDifferential(p.kind));
    }
    let m = p.operator_count();
    if spec.rules.len() != m {
        return Err(SchemeError::RuleCount { expected: m, found: spec.rules.len() });
    }
    let mut cache: BTreeMap<(usize, u32), StencilImage> = BTreeMap::new();
    let mut relations = Vec::with_capacity(p.relations.len());
    for rel in &p.relations {
        let mut out = LaurentElement::zero();
        for (term, c) in rel.iter() {
            // expand the product one operator at a time
            let mut partial: Vec<(Vec<i32>, Coefficient)> = vec![(Vec::with_capacity(m), c.clone())];
            for (i, &k) in term.exponents.iter().enumerate() {
                let k = u32::try_from(k).expect("differential exponents are nonnegative");
                let image = cache.entry((i, k)).or_insert_with(|| stencil_image(&spec.rules[i], k));
                let mut next = Vec::with_capacity(partial.len() * image.terms.len());
                for (e, x) in &partial {
                    for (s, y) in image.iter() {
                        let mut e2 = e.clone();
                        e2.push(s);
                        next.push((e2, x * y));
                    }
                }
                partial = next;
            }
            for (e, x) in partial {
                out.add_term(LaurentTerm::new(term.generator, e), x);
            }
        }
        relations.push(out);
    }
    Ok(Presentation {
        kind: SystemKind::Inversive,
        operator_names: p.operator_names.clone(),
        parameter: p.parameter.clone(),
        generator_names: p.generator_names.clone(),
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::parse_coefficient;

    fn c(s: &str) -> Coefficient {
        parse_coefficient(s, Some("a")).unwrap()
    }

    fn laurent(terms: &[(&str, &[i32])]) -> LaurentElement {
        LaurentElement::from_terms(terms.iter().map(|(k, e)| (LaurentTerm::new(0, e.to_vec()), c(k))))
    }

    fn diffusion() -> Presentation {
        Presentation {
            kind: SystemKind::Differential,
            operator_names: vec!["x".into(), "t".into()],
            parameter: Some("a".into()),
            generator_names: vec!["u".into()],
            relations: vec![laurent(&[("1", &[0, 1]), ("-a", &[2, 0])])],
        }
    }

    #[test]
    fn stencils() {
        let f = stencil_image(&OperatorRule::plain(Rule::Forward), 2);
        assert_eq!(f, StencilImage::from_pairs([(2, c("1")), (1, c("-2")), (0, c("1"))]));
        let cen = stencil_image(&OperatorRule::plain(Rule::Central), 2);
        assert_eq!(cen, StencilImage::from_pairs([(2, c("1/4")), (0, c("-1/2")), (-2, c("1/4"))]));
        assert_eq!(stencil_image(&OperatorRule::central2(), 2), StencilImage::central_second());
        assert_eq!(stencil_image(&OperatorRule::central2(), 1), Rule::Central.image());
        assert_eq!(stencil_image(&OperatorRule::plain(Rule::Backward), 0), StencilImage::one());
    }

    #[test]
    fn forward_diffusion() {
        let spec = SchemeSpec::preset("forward", 2).unwrap();
        let d = discretize(&diffusion(), &spec).unwrap();
        assert_eq!(d.kind, SystemKind::Inversive);
        let expected = laurent(&[("1", &[0, 1]), ("-a", &[2, 0]), ("2*a", &[1, 0]), ("-(1+a)", &[0, 0])]);
        assert_eq!(d.relations, vec![expected]);
    }

    #[test]
    fn symmetric_diffusion() {
        let spec = SchemeSpec::preset("symmetric-space-forward-time", 2).unwrap();
        let d = discretize(&diffusion(), &spec).unwrap();
        let expected = laurent(&[("1", &[0, 1]), ("-a", &[1, 0]), ("-a", &[-1, 0]), ("2*a-1", &[0, 0])]);
        assert_eq!(d.relations, vec![expected]);
        let by_rules = SchemeSpec::preset("forward", 2)
            .unwrap()
            .with_assignments(&["x=central2".into()], &diffusion().operator_names)
            .unwrap();
        assert_eq!(by_rules, spec);
        assert_eq!(spec.describe(&diffusion().operator_names), "x=central2 t=forward");
    }

    #[test]
    fn constant_relation_is_unchanged() {
        let mut p = diffusion();
        p.relations = vec![laurent(&[("3", &[0, 0])])];
        let d = discretize(&p, &SchemeSpec::preset("symmetric", 2).unwrap()).unwrap();
        assert_eq!(d.relations, p.relations);
    }

    #[test]
    fn errors() {
        let mut p = diffusion();
        assert!(matches!(
            discretize(&p, &SchemeSpec::uniform(OperatorRule::plain(Rule::Forward), 3)),
            Err(SchemeError::RuleCount { .. })
        ));
        p.kind = SystemKind::Inversive;
        assert!(discretize(&p, &SchemeSpec::preset("forward", 2).unwrap()).is_err());
        assert!(SchemeSpec::preset("upwind", 2).is_err());
        assert!(OperatorRule::parse("sideways").is_err());
        let mut odd = SchemeSpec::preset("forward", 2).unwrap();
        odd.rules[0].overrides.insert(2, StencilImage::central_second());
        assert_eq!(odd.diagnostics(&diffusion().operator_names).len(), 1);
    }
}
