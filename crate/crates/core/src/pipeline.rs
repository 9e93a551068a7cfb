//! From a presentation to its dimension polynomial: embed inversive systems
//! into the doubled ring and saturate, complete to a Gröbner basis, read off
//! the staircase, count, validate against the oracle.

use crate::dimpoly::{
    dimension_polynomial_with, invariants_of, to_binomial_basis, validate_polynomial, DimensionPolynomial, Invariants,
    StaircaseSet, Validation,
};
use crate::groebner::{buchberger, BuchbergerOptions, GroebnerBasis};
use crate::inversive::{rho_embed, saturate, SigmaRing};
use crate::operator::{AdmissibleOrder, ModuleElement, Presentation, SystemKind};
use crate::par::Exec;
use crate::scheme::{discretize, SchemeSpec};
use crate::Error;

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    /// Operator names in comparison order; `None` is declaration order.
    /// For inversive systems either the doubled names or the base names
    /// (expanded to all `alpha_*` then all `beta_*`) are accepted.
    pub order: Option<Vec<String>>,
    pub groebner: BuchbergerOptions,
    pub validate_window: u32,
    pub exec: Exec,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        Self { order: None, groebner: BuchbergerOptions::default(), validate_window: 5, exec: Exec::default() }
    }
}

/// The module-theoretic data the count runs on.
#[derive(Clone, Debug)]
pub struct CountingRing {
    pub operator_names: Vec<String>,
    pub generator_names: Vec<String>,
    pub relations: Vec<ModuleElement>,
    pub order: AdmissibleOrder,
}

/// A scheme applied before computing, with the name the user asked for.
#[derive(Clone, Debug)]
pub struct AppliedScheme {
    pub name: String,
    pub spec: SchemeSpec,
}

#[derive(Clone, Debug)]
pub struct StrengthReport {
    pub name: String,
    pub presentation: Presentation,
    pub scheme: Option<AppliedScheme>,
    pub ring: CountingRing,
    pub basis: GroebnerBasis,
    pub staircase: StaircaseSet,
    pub polynomial: DimensionPolynomial,
    pub binomial: Vec<num_bigint::BigInt>,
    pub invariants: Invariants,
    pub validation: Validation,
}

impl StrengthReport {
    /// `m`: operators of the original system.
    pub fn operator_count(&self) -> usize {
        self.presentation.operator_count()
    }
}

/// Builds the ring the count happens in: the presentation itself for
/// differential and difference systems, the doubled ring with saturation
/// relations for inversive ones.
pub fn counting_ring(p: &Presentation, order: Option<&[String]>) -> Result<CountingRing, Error> {
    p.validate().map_err(Error::Presentation)?;
    let (operator_names, relations) = match p.kind {
        SystemKind::Differential | SystemKind::Difference => {
            let rels = p.nonnegative_relations().ok_or_else(|| {
                Error::Presentation(format!("negative exponent in a {} system", p.kind))
            })?;
            (p.operator_names.clone(), rels)
        }
        SystemKind::Inversive => {
            let sigma = SigmaRing::new(&p.operator_names);
            let embedded: Vec<ModuleElement> = p.relations.iter().map(rho_embed).collect();
            (sigma.operator_names().to_vec(), saturate(&embedded, p.operator_count(), p.generator_count()))
        }
    };
    let order = match order {
        None => AdmissibleOrder::standard(operator_names.len()),
        Some(names) => {
            let expanded: Vec<String> = if p.kind == SystemKind::Inversive && names.len() == p.operator_count() {
                let alphas = names.iter().map(|n| format!("alpha_{n}"));
                let betas = names.iter().map(|n| format!("beta_{n}"));
                alphas.chain(betas).collect()
            } else {
                names.to_vec()
            };
            let refs: Vec<&str> = expanded.iter().map(String::as_str).collect();
            AdmissibleOrder::from_names(&refs, &operator_names)?
        }
    };
    Ok(CountingRing { operator_names, generator_names: p.generator_names.clone(), relations, order })
}

pub fn compute_strength(name: &str, p: &Presentation, options: &ComputeOptions) -> Result<StrengthReport, Error> {
    compute_inner(name, p, None, options)
}

/// Discretizes a differential system and computes the strength of the
/// resulting inversive difference system.
pub fn compute_scheme_strength(
    name: &str,
    p: &Presentation,
    scheme: AppliedScheme,
    options: &ComputeOptions,
) -> Result<StrengthReport, Error> {
    let discrete = discretize(p, &scheme.spec)?;
    compute_inner(name, &discrete, Some(scheme), options)
}

fn compute_inner(
    name: &str,
    p: &Presentation,
    scheme: Option<AppliedScheme>,
    options: &ComputeOptions,
) -> Result<StrengthReport, Error> {
    let ring = counting_ring(p, options.order.as_deref())?;
    let basis = buchberger(&ring.relations, &ring.order, &options.groebner);
    let staircase = StaircaseSet::from_basis(&basis, ring.generator_names.len());
    let polynomial = dimension_polynomial_with(&staircase, options.exec)?;
    let binomial = to_binomial_basis(&polynomial.polynomial)?;
    let invariants = invariants_of(&polynomial.polynomial, p.operator_count(), p.kind)?;
    let validation = validate_polynomial(&polynomial, &staircase, options.validate_window, options.exec);
    Ok(StrengthReport {
        name: name.to_string(),
        presentation: p.clone(),
        scheme,
        ring,
        basis,
        staircase,
        polynomial,
        binomial,
        invariants,
        validation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_system;
    use crate::coeff::UniPoly;

    fn preset(name: &str, m: usize) -> AppliedScheme {
        AppliedScheme { name: name.into(), spec: SchemeSpec::preset(name, m).unwrap() }
    }

    #[test]
    fn diffusion_pipeline() {
        let p = builtin_system("diffusion").unwrap();
        let opts = ComputeOptions::default();
        let r = compute_strength("diffusion", &p, &opts).unwrap();
        assert_eq!(r.polynomial.polynomial, UniPoly::from_integers(&[1, 2]));
        assert!(r.validation.ok);
        let f = compute_scheme_strength("diffusion", &p, preset("forward", 2), &opts).unwrap();
        assert_eq!(f.polynomial.polynomial, UniPoly::from_integers(&[0, 5]));
        assert_eq!(f.basis.len(), 6);
        let s = compute_scheme_strength("diffusion", &p, preset("symmetric-space-forward-time", 2), &opts).unwrap();
        assert_eq!(s.polynomial.polynomial, UniPoly::from_integers(&[0, 4]));
        assert!(f.validation.ok && s.validation.ok);
    }

    #[test]
    fn order_by_names() {
        let p = builtin_system("diffusion").unwrap();
        let ring = counting_ring(&p, Some(&["t".to_string(), "x".to_string()])).unwrap();
        assert_eq!(ring.order.sequence(), &[1, 0]);
        let discrete = discretize(&p, &SchemeSpec::preset("forward", 2).unwrap()).unwrap();
        let ring = counting_ring(&discrete, Some(&["t".to_string(), "x".to_string()])).unwrap();
        assert_eq!(ring.order.sequence(), &[1, 0, 3, 2]);
        assert_eq!(ring.relations.len(), 3);
        assert!(counting_ring(&p, Some(&["q".to_string(), "x".to_string()])).is_err());
    }
}
