//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 5 and 6 check values that do not survive verification (see
//! README). Their lines stay red and print the reason. The binary exits
//! nonzero when any other criterion fails, or when one of those two starts
//! passing, so the list of known discrepancies cannot silently go stale.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strength_core::catalog::{builtin_names, builtin_system};
use strength_core::coeff::{parse_polynomial, Rational, UniPoly};
use strength_core::dimpoly::{
    compare_strength, dimension_polynomial, free_module_polynomial, free_term_count_oracle, invariants_of,
    to_binomial_basis, StaircaseSet, Strength,
};
use strength_core::dsl::parse_system;
use strength_core::groebner::{autoreduce, is_groebner_basis};
use strength_core::inversive::saturation_relations;
use strength_core::operator::{ExponentVector, Presentation, SystemKind};
use strength_core::pipeline::{compute_scheme_strength, compute_strength, AppliedScheme, ComputeOptions, StrengthReport};
use strength_core::report::{compare_systems, ReportDocument};
use strength_core::scheme::SchemeSpec;

/// Criteria whose target value is contradicted by exact computation.
const KNOWN_RED: [u32; 2] = [5, 6];

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn poly(s: &str) -> UniPoly {
    parse_polynomial(s, "t").unwrap()
}

fn render(p: &UniPoly) -> String {
    p.render("t")
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

fn differential(name: &str) -> (StrengthReport, Duration) {
    let p = builtin_system(name).unwrap();
    let start = Instant::now();
    let r = compute_strength(name, &p, &ComputeOptions::default()).unwrap();
    (r, start.elapsed())
}

fn scheme(name: &str, preset: &str) -> (StrengthReport, Duration) {
    let p = builtin_system(name).unwrap();
    let start = Instant::now();
    let applied = AppliedScheme { name: preset.into(), spec: SchemeSpec::preset(preset, p.operator_count()).unwrap() };
    let r = compute_scheme_strength(name, &p, applied, &ComputeOptions::default()).unwrap();
    (r, start.elapsed())
}

fn staircase_vectors(r: &StrengthReport, generator: usize) -> BTreeSet<Vec<u32>> {
    r.staircase.vectors(generator).iter().map(|v| v.as_slice().to_vec()).collect()
}

fn vset(vs: &[&[u32]]) -> BTreeSet<Vec<u32>> {
    vs.iter().map(|v| v.to_vec()).collect()
}

fn criterion_1() -> Outcome {
    let (r, t) = differential("diffusion");
    let p = &r.polynomial.polynomial;
    let ok = *p == poly("2*t+1") && r.validation.ok && t < Duration::from_millis(100);
    check(ok, format!("phi(t) = {} in {}", render(p), secs(t)))
}

fn criterion_2() -> Outcome {
    let (r, t) = scheme("diffusion", "forward");
    let p = &r.polynomial.polynomial;
    let expected = vset(&[&[2, 0, 0, 0], &[1, 0, 1, 0], &[0, 1, 0, 1], &[0, 1, 1, 0], &[1, 0, 0, 1], &[0, 0, 2, 1]]);
    let lts_ok = r.basis.len() == 6 && staircase_vectors(&r, 0) == expected;
    let ok = *p == poly("5*t") && lts_ok && r.validation.ok && t < Duration::from_secs(1);
    check(ok, format!("psi(t) = {}, {} basis elements, leading terms match: {lts_ok}, {}", render(p), r.basis.len(), secs(t)))
}

fn criterion_3() -> Outcome {
    let (sym, _) = scheme("diffusion", "symmetric-space-forward-time");
    let (fwd, _) = scheme("diffusion", "forward");
    let p = &sym.polynomial.polynomial;
    // beta_x^2 beta_t, alpha_t beta_x, alpha_t beta_t, alpha_x
    let expected = vset(&[&[0, 0, 2, 1], &[0, 1, 1, 0], &[0, 1, 0, 1], &[1, 0, 0, 0]]);
    let lts_ok = sym.basis.len() == 4 && staircase_vectors(&sym, 0) == expected;
    let verdict = compare_systems(&ReportDocument::from_report(&sym, false), &ReportDocument::from_report(&fwd, false))
        .unwrap();
    let ok = *p == poly("4*t") && lts_ok && verdict.strength == Strength::Stronger && sym.validation.ok;
    check(ok, format!("psi(t) = {}, leading terms match: {lts_ok}, verdict: {}", render(p), verdict.message()))
}

fn criterion_4() -> Outcome {
    let (r, t) = differential("maxwell");
    let p = &r.polynomial.polynomial;
    let ok = *p == poly("1/4*t^4 + 19/6*t^3 + 55/4*t^2 + 137/6*t + 12") && r.validation.ok && t < Duration::from_secs(5);
    check(ok, format!("phi(t) = {} in {}", render(p), secs(t)))
}

fn criterion_5() -> Outcome {
    let (r, t) = scheme("maxwell", "forward");
    let p = &r.polynomial.polynomial;
    let poly_ok = *p == poly("4*t^4 + 18*t^3 + 35*t^2 + 31*t + 12") && r.validation.ok;
    let size = r.basis.len();

    // the 80-element reference set: 32 listed elements plus the saturation relations
    let shown = parse_system(include_str!("data/maxwell_forward_reference.sys")).unwrap().presentation;
    let mut shown = shown.nonnegative_relations().unwrap();
    shown.extend(saturation_relations(4, 12));
    let shown_is_basis = is_groebner_basis(&shown, &r.ring.order);
    let shown_reduces_to_ours = autoreduce(&shown, &r.ring.order) == r.basis.elements;

    let ok = poly_ok && size == 80 && t < Duration::from_secs(120);
    check(
        ok,
        format!(
            "psi(t) = {} (exact: {poly_ok}) in {}; reduced basis has {size} elements, not 80; \
             the {}-element reference set is a Groebner basis: {shown_is_basis}, autoreduces to ours: {shown_reduces_to_ours}",
            render(p),
            secs(t),
            shown.len()
        ),
    )
}

fn criterion_6() -> Outcome {
    let (sym, t) = scheme("maxwell", "symmetric");
    let (fwd, _) = scheme("maxwell", "forward");
    let p = &sym.polynomial.polynomial;
    let target = poly("4*t^4 + 56/3*t^3 + 36*t^2 + 4*t + 22");
    let verdict = compare_strength(&fwd.polynomial.polynomial, p);
    let target_integer_valued = to_binomial_basis(&target).is_ok();
    let ok = *p == target && verdict == Strength::Stronger && t < Duration::from_secs(300);
    check(
        ok,
        format!(
            "psi(t) = {} (oracle-validated: {}) in {}; target polynomial is integer-valued: {target_integer_valued} \
             (value {} at t=1); verdict forward stronger: {}",
            render(p),
            sym.validation.ok,
            secs(t),
            target.eval(&Rational::from(1)),
            verdict == Strength::Stronger
        ),
    )
}

fn criterion_7() -> Outcome {
    let (r, _) = differential("potential");
    let p = &r.polynomial.polynomial;
    let x1sq: &[u32] = &[2, 0, 0, 0];
    let lts_ok = r.basis.len() == 5
        && (0..3).all(|g| staircase_vectors(&r, g) == vset(&[x1sq]))
        && staircase_vectors(&r, 3) == vset(&[x1sq, &[0, 0, 0, 1]]);
    let ok = *p == poly("t^3 + 11/2*t^2 + 17/2*t + 4") && lts_ok && r.validation.ok;
    check(ok, format!("phi(t) = {}, 5 leading terms match: {lts_ok}", render(p)))
}

fn criterion_8() -> Outcome {
    let (fwd, tf) = scheme("potential", "forward");
    let (sym, ts) = scheme("potential", "symmetric");
    let p = &fwd.polynomial.polynomial;
    let interpolated_ok = fwd.validation.ok && fwd.validation.interpolated == *p;
    let stated_ends = p.coeff(3) == Rational::from(15) && p.coeff(0) == Rational::from(2);
    let sym_ok = sym.polynomial.polynomial == poly("16*t^3 - 8*t^2 + 24*t + 8") && sym.validation.ok;
    check(
        interpolated_ok && stated_ends && sym_ok,
        format!(
            "forward psi(t) = {} equals interpolated counts: {interpolated_ok}, cubic 15 and constant 2: {stated_ends} ({}); \
             symmetric psi(t) = {} ({})",
            render(p),
            secs(tf),
            render(&sym.polynomial.polynomial),
            secs(ts)
        ),
    )
}

fn free_presentation(kind: SystemKind, s: usize, m: usize) -> Presentation {
    Presentation {
        kind,
        operator_names: (1..=m).map(|i| format!("x{i}")).collect(),
        parameter: None,
        generator_names: (1..=s).map(|i| format!("u{i}")).collect(),
        relations: Vec::new(),
    }
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    for kind in [SystemKind::Differential, SystemKind::Inversive] {
        for s in 1..=3u32 {
            for m in 1..=3u32 {
                let p = free_presentation(kind, s as usize, m as usize);
                let r = compute_strength("free", &p, &ComputeOptions::default()).unwrap();
                if r.polynomial.polynomial != free_module_polynomial(s, m, kind) || !r.validation.ok {
                    failures.push(format!("{kind} s={s} m={m}"));
                }
            }
        }
    }
    let p = free_presentation(SystemKind::Inversive, 1, 2);
    let small = compute_strength("free", &p, &ComputeOptions::default()).unwrap().polynomial.polynomial;
    let small_ok = small == poly("2*t^2 + 2*t + 1");
    check(
        failures.is_empty() && small_ok,
        format!("18 free modules, mismatches: {failures:?}; inversive s=1 m=2: {}", render(&small)),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start = Instant::now();
    let mut failures = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4usize);
        let k = rng.gen_range(0..=4usize);
        let vectors: Vec<ExponentVector> =
            (0..k).map(|_| ExponentVector::new((0..n).map(|_| rng.gen_range(0..=3u32)))).collect();
        let s = StaircaseSet::new(n, vec![vectors]).unwrap();
        let dp = dimension_polynomial(&s).unwrap();
        let r0 = dp.validity_threshold;
        for r in r0..=r0 + 6 {
            let oracle = free_term_count_oracle(&s, r);
            if dp.polynomial.eval(&Rational::from(i64::from(r))) != Rational::from(oracle as i64) {
                failures += 1;
                break;
            }
        }
    }
    let t = start.elapsed();
    check(failures == 0 && t < Duration::from_secs(60), format!("200 staircases, {failures} failures, {}", secs(t)))
}

fn criterion_11() -> Outcome {
    let (diff, _) = differential("maxwell");
    let (fwd, _) = scheme("maxwell", "forward");
    let a = invariants_of(&diff.polynomial.polynomial, 4, SystemKind::Differential).unwrap().delta_dimension;
    let b = invariants_of(&fwd.polynomial.polynomial, 4, SystemKind::Inversive).unwrap().delta_dimension;
    let six = num_bigint::BigInt::from(6);
    check(a == six && b == six, format!("binomial route {a}, leading coefficient route {b}"))
}

fn compute_json(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_strength")).args(args).output().expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn criterion_12() -> Outcome {
    let mut runs = 0;
    let mut differing = Vec::new();
    for name in builtin_names() {
        for preset in [None, Some("forward"), Some("symmetric")] {
            let mut args = vec!["compute", "--json", "--builtin", name];
            if let Some(p) = preset {
                args.extend(["--scheme", p]);
            }
            runs += 1;
            if compute_json(&args) != compute_json(&args) {
                differing.push(args.join(" "));
            }
        }
    }
    check(differing.is_empty(), format!("{runs} report pairs, differing: {differing:?}"))
}

fn main() {
    // `cargo test` passes harness flags; only a name filter is honoured
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let criteria: [(u32, fn() -> Outcome); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let mut unexpected = Vec::new();
    for (n, f) in criteria {
        if filter.as_ref().is_some_and(|f| *f != n.to_string()) {
            continue;
        }
        let o = f();
        let known = KNOWN_RED.contains(&n);
        let tag = match (o.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known discrepancy)",
            (false, false) => "FAIL",
        };
        println!("criterion {n}: {tag}: {}", o.detail);
        if o.pass == known {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
