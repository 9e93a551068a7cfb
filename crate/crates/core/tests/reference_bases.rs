//! A reference Gröbner basis, transcribed into the DSL, checked against the
//! basis computed here.

use std::collections::BTreeSet;

use strength_core::catalog::builtin_system;
use strength_core::dsl::parse_system;
use strength_core::groebner::{autoreduce, buchberger, is_groebner_basis, normal_form, BuchbergerOptions};
use strength_core::inversive::saturation_relations;
use strength_core::operator::{AdmissibleOrder, ModuleElement};
use strength_core::pipeline::counting_ring;
use strength_core::scheme::{discretize, SchemeSpec};

fn forward_maxwell_ring() -> (Vec<ModuleElement>, AdmissibleOrder) {
    let p = builtin_system("maxwell").unwrap();
    let d = discretize(&p, &SchemeSpec::preset("forward", 4).unwrap()).unwrap();
    let ring = counting_ring(&d, None).unwrap();
    (ring.relations, ring.order)
}

fn reference_maxwell_basis() -> Vec<ModuleElement> {
    let text = include_str!("data/maxwell_forward_reference.sys");
    let p = parse_system(text).unwrap().presentation;
    let mut g = p.nonnegative_relations().unwrap();
    g.extend(saturation_relations(4, 12));
    g
}

#[test]
fn reference_forward_maxwell_basis() {
    let (input, order) = forward_maxwell_ring();
    let shown = reference_maxwell_basis();
    assert_eq!(shown.len(), 80);
    let ours = buchberger(&input, &order, &BuchbergerOptions::default());

    // same submodule: each side reduces to zero modulo the other
    assert!(shown.iter().all(|f| normal_form(f, &ours.elements, &order).is_zero()));
    assert!(input.iter().all(|f| normal_form(f, &shown, &order).is_zero()));
    assert!(is_groebner_basis(&shown, &order));

    // a Gröbner basis, but not a minimal one
    let reduced = autoreduce(&shown, &order);
    assert_eq!(reduced, ours.elements);
    assert_eq!(ours.len(), 72);
    let lts: Vec<_> = shown.iter().map(|g| g.leading_term(&order).unwrap().0).collect();
    let redundant = lts
        .iter()
        .enumerate()
        .filter(|(i, t)| lts.iter().enumerate().any(|(j, s)| j != *i && s.divides(t) && (s != *t || j < *i)))
        .count();
    assert_eq!(redundant, 8);
    let distinct: BTreeSet<_> = lts.iter().collect();
    assert_eq!(distinct.len(), 80);
}
