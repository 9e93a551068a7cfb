//! Dimension polynomials from leading-term staircases: inclusion–exclusion
//! over subsets of each generator's antichain, a brute-force counting
//! oracle, the binomial basis and the derived invariants.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeff::{Rational, UniPoly};
use crate::groebner::GroebnerBasis;
use crate::operator::{ExponentVector, SystemKind};
use crate::par::{self, Exec};

/// Subsets of more vectors than this are not enumerated.
pub const MAX_VECTORS_PER_GENERATOR: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimPolyError {
    #[error("generator {generator} has {count} staircase vectors (limit {MAX_VECTORS_PER_GENERATOR})")]
    TooManyVectors { generator: usize, count: usize },
    #[error("binomial coefficient c_{index} = {value} is not an integer")]
    NotIntegerValued { index: usize, value: Rational },
    #[error("leading coefficient {lead} times {m}!/2^{m} is not an integer")]
    InversiveLeadingCoefficient { lead: Rational, m: usize },
    #[error("staircase vector of length {found} in a ring with {expected} operators")]
    Length { expected: usize, found: usize },
}

/// Per-generator minimal antichains of leading exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseSet {
    n: usize,
    generators: Vec<Vec<ExponentVector>>,
}

impl StaircaseSet {
    /// No relations: every term is free.
    pub fn empty(n: usize, q: usize) -> Self {
        Self { n, generators: vec![Vec::new(); q] }
    }

    /// Drops duplicates and dominated vectors; the survivors are sorted.
    pub fn new(n: usize, generators: Vec<Vec<ExponentVector>>) -> Result<Self, DimPolyError> {
        let mut out = Vec::with_capacity(generators.len());
        for vs in generators {
            if let Some(v) = vs.iter().find(|v| v.len() != n) {
                return Err(DimPolyError::Length { expected: n, found: v.len() });
            }
            out.push(minimize(vs));
        }
        Ok(Self { n, generators: out })
    }

    /// Leading exponents of a Gröbner basis grouped by generator.
    pub fn from_basis(g: &GroebnerBasis, q: usize) -> Self {
        let mut generators = vec![Vec::new(); q];
        for t in g.leading_terms() {
            generators[t.generator].push(t.monomial);
        }
        Self { n: g.order.operator_count(), generators: generators.into_iter().map(minimize).collect() }
    }

    pub fn operator_count(&self) -> usize {
        self.n
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn vectors(&self, generator: usize) -> &[ExponentVector] {
        &self.generators[generator]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[ExponentVector]> {
        self.generators.iter().map(Vec::as_slice)
    }

    /// Is `v e_generator` divisible by some staircase vector?
    pub fn covers(&self, generator: usize, v: &[u32]) -> bool {
        self.generators[generator]
            .iter()
            .any(|s| s.as_slice().iter().zip(v).all(|(a, b)| a <= b))
    }
}

fn minimize(mut vs: Vec<ExponentVector>) -> Vec<ExponentVector> {
    vs.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    vs.dedup();
    let mut kept: Vec<ExponentVector> = Vec::new();
    for v in vs {
        if !kept.iter().any(|k| k.divides(&v)) {
            kept.push(v);
        }
    }
    kept.sort();
    kept
}

/// `hist[d]` = number of free terms of order exactly `d`, for `d <= max_order`.
pub fn free_term_histogram(s: &StaircaseSet, max_order: u32, exec: Exec) -> Vec<u64> {
    let n = s.n;
    let tasks: Vec<(usize, u32)> = (0..s.generator_count())
        .flat_map(|g| (0..=max_order).map(move |k| (g, k)))
        .collect();
    if n == 0 {
        let mut hist = vec![0u64; max_order as usize + 1];
        hist[0] = (0..s.generator_count()).filter(|&g| !s.covers(g, &[])).count() as u64;
        return hist;
    }
    // each task fixes the generator and the first exponent
    let parts = par::map_with(exec, &tasks, |&(g, k0)| {
        let mut hist = vec![0u64; max_order as usize + 1];
        let mut v = vec![0u32; n];
        v[0] = k0;
        let vectors = s.vectors(g);
        let live: Vec<&ExponentVector> = vectors.iter().filter(|x| x[0] <= k0).collect();
        enumerate(&mut v, 1, k0, max_order, &live, &mut hist);
        hist
    });
    let mut hist = vec![0u64; max_order as usize + 1];
    for h in parts {
        for (a, b) in hist.iter_mut().zip(h) {
            *a += b;
        }
    }
    hist
}

/// Fills `v[pos..]` with every completion of total order `<= max`. `live`
/// holds the staircase vectors that still divide on the fixed prefix.
fn enumerate(v: &mut [u32], pos: usize, used: u32, max: u32, live: &[&ExponentVector], hist: &mut [u64]) {
    if pos == v.len() {
        if live.is_empty() {
            hist[used as usize] += 1;
        }
        return;
    }
    if live.is_empty() {
        // all remaining completions are free: count them in closed form
        let free_vars = (v.len() - pos) as u64;
        for extra in 0..=(max - used) {
            hist[(used + extra) as usize] += binomial_u64(extra as u64 + free_vars - 1, free_vars - 1);
        }
        return;
    }
    for k in 0..=(max - used) {
        v[pos] = k;
        let next: Vec<&ExponentVector> = live.iter().copied().filter(|x| x[pos] <= k).collect();
        enumerate(v, pos + 1, used + k, max, &next, hist);
    }
    v[pos] = 0;
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Number of terms of order `<= r` not divisible by any staircase vector.
pub fn free_term_count_oracle(s: &StaircaseSet, r: u32) -> u64 {
    free_term_histogram(s, r, Exec::default()).iter().sum()
}

/// Oracle counts for every `r` in `0..=max_order`.
pub fn free_term_counts(s: &StaircaseSet, max_order: u32, exec: Exec) -> Vec<u64> {
    let mut acc = 0;
    free_term_histogram(s, max_order, exec)
        .into_iter()
        .map(|h| {
            acc += h;
            acc
        })
        .collect()
}

/// The polynomial together with the order from which it counts exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionPolynomial {
    pub polynomial: UniPoly,
    pub validity_threshold: u32,
}

/// Signed multiplicities of each `f_ξ` over all subsets `ξ` of `vs`.
fn subset_weights(vs: &[ExponentVector], n: usize, exec: Exec) -> BTreeMap<u32, i64> {
    // the first `split` vectors are decided per task, the rest recursively
    let split = vs.len().min(6);
    let prefixes: Vec<u32> = (0..1u32 << split).collect();
    let parts = par::map_with(exec, &prefixes, |&mask| {
        let mut cur = vec![0u32; n];
        let mut sign = 1i64;
        for (i, v) in vs.iter().take(split).enumerate() {
            if mask & (1 << i) != 0 {
                sign = -sign;
                for (c, x) in cur.iter_mut().zip(v.as_slice()) {
                    *c = (*c).max(*x);
                }
            }
        }
        let mut out = BTreeMap::new();
        subsets(&vs[split..], &mut cur, sign, &mut out);
        out
    });
    let mut total = BTreeMap::new();
    for part in parts {
        for (f, w) in part {
            *total.entry(f).or_insert(0) += w;
        }
    }
    total.retain(|_, w| *w != 0);
    total
}

fn subsets(rest: &[ExponentVector], cur: &mut [u32], sign: i64, out: &mut BTreeMap<u32, i64>) {
    let Some((head, tail)) = rest.split_first() else {
        *out.entry(cur.iter().sum()).or_insert(0) += sign;
        return;
    };
    subsets(tail, cur, sign, out);
    let saved: Vec<u32> = cur.to_vec();
    for (c, x) in cur.iter_mut().zip(head.as_slice()) {
        *c = (*c).max(*x);
    }
    subsets(tail, cur, -sign, out);
    cur.copy_from_slice(&saved);
}

/// `Σ_i Σ_ξ (-1)^{|ξ|} C(t + n - f_{i,ξ}, n)` expanded in `t`, where
/// `f_{i,ξ}` is the order of the lcm of the vectors in `ξ`.
pub fn dimension_polynomial(s: &StaircaseSet) -> Result<DimensionPolynomial, DimPolyError> {
    dimension_polynomial_with(s, Exec::default())
}

pub fn dimension_polynomial_with(s: &StaircaseSet, exec: Exec) -> Result<DimensionPolynomial, DimPolyError> {
    let n = s.n;
    let mut weights: BTreeMap<u32, i64> = BTreeMap::new();
    let mut threshold = 0;
    for (g, vs) in s.iter().enumerate() {
        if vs.len() > MAX_VECTORS_PER_GENERATOR {
            return Err(DimPolyError::TooManyVectors { generator: g, count: vs.len() });
        }
        // the full lcm has the largest f of all subsets
        let lcm_order: u32 = (0..n).map(|k| vs.iter().map(|v| v[k]).max().unwrap_or(0)).sum();
        threshold = threshold.max(lcm_order);
        for (f, w) in subset_weights(vs, n, exec) {
            *weights.entry(f).or_insert(0) += w;
        }
    }
    let mut polynomial = UniPoly::zero();
    for (f, w) in weights {
        if w != 0 {
            let term = UniPoly::binomial(n as i64 - i64::from(f), n as u32).scale(&Rational::from(w));
            polynomial = &polynomial + &term;
        }
    }
    Ok(DimensionPolynomial { polynomial, validity_threshold: threshold })
}

/// `Σ c_i C(t+i, i)` back to the standard basis.
pub fn from_binomial_basis(c: &[BigInt]) -> UniPoly {
    let mut p = UniPoly::zero();
    for (i, ci) in c.iter().enumerate() {
        if !ci.is_zero() {
            p = &p + &UniPoly::binomial(i as i64, i as u32).scale(&Rational::from_integer(ci.clone()));
        }
    }
    p
}

/// Coefficients `c_0..c_d` with `p(t) = Σ c_i C(t+i, i)`, obtained top down:
/// `c_d = d!·lead(p)`, subtract, repeat.
pub fn to_binomial_basis(p: &UniPoly) -> Result<Vec<BigInt>, DimPolyError> {
    let Some(d) = p.degree() else {
        return Ok(Vec::new());
    };
    let mut c = vec![BigInt::zero(); d + 1];
    let mut rest = p.clone();
    for i in (0..=d).rev() {
        let value = rest.coeff(i) * Rational::factorial(i as u32);
        let Some(ci) = value.to_integer() else {
            return Err(DimPolyError::NotIntegerValued { index: i, value });
        };
        if !ci.is_zero() {
            rest = &rest - &UniPoly::binomial(i as i64, i as u32).scale(&value);
        }
        c[i] = ci;
    }
    debug_assert!(rest.is_zero());
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    /// `None` for the zero polynomial.
    pub degree: Option<usize>,
    /// Equal to the degree.
    pub delta_type: Option<usize>,
    /// Binomial coefficient at the degree.
    pub typical_dimension: BigInt,
    pub delta_dimension: BigInt,
}

/// Degree, type, typical dimension and Δ-dimension of a dimension polynomial
/// of a system in `m` operators. For the inversive kind the Δ-dimension is
/// `lead·m!/2^m` when the degree is `m`.
pub fn invariants_of(p: &UniPoly, m: usize, kind: SystemKind) -> Result<Invariants, DimPolyError> {
    let c = to_binomial_basis(p)?;
    let degree = p.degree();
    let typical_dimension = degree.map(|d| c[d].clone()).unwrap_or_default();
    let delta_dimension = match kind {
        SystemKind::Differential | SystemKind::Difference => c.get(m).cloned().unwrap_or_default(),
        SystemKind::Inversive => {
            if degree == Some(m) {
                let lead = p.lead();
                let a = &lead * &Rational::factorial(m as u32) * Rational::from(2).pow(m as u32).recip().unwrap();
                a.to_integer().ok_or(DimPolyError::InversiveLeadingCoefficient { lead, m })?
            } else {
                BigInt::zero()
            }
        }
    };
    Ok(Invariants { degree, delta_type: degree, typical_dimension, delta_dimension })
}

/// Dimension polynomial of the free module of rank `s` in `m` operators:
/// `s·C(t+m, m)`, or `s·Σ_k (-1)^{m-k} 2^k C(m,k) C(t+k,k)` for the
/// inversive kind.
pub fn free_module_polynomial(s: u32, m: u32, kind: SystemKind) -> UniPoly {
    let p = match kind {
        SystemKind::Differential | SystemKind::Difference => UniPoly::binomial(i64::from(m), m),
        SystemKind::Inversive => {
            let mut p = UniPoly::zero();
            for k in 0..=m {
                let sign = if (m - k).is_multiple_of(2) { 1 } else { -1 };
                let coef = Rational::from(sign) * Rational::from(2).pow(k) * Rational::from(binomial_u64(m.into(), k.into()) as i64);
                p = &p + &UniPoly::binomial(i64::from(k), k).scale(&coef);
            }
            p
        }
    };
    p.scale(&Rational::from(i64::from(s)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Stronger,
    Weaker,
    Equal,
}

/// Eventual order: `Stronger` when `p(r) < q(r)` for all large `r`, i.e. the
/// system of `p` leaves fewer free values.
pub fn compare_strength(p: &UniPoly, q: &UniPoly) -> Strength {
    let diff = p - q;
    match diff.degree() {
        None => Strength::Equal,
        Some(_) => match diff.lead().signum() {
            Ordering::Less => Strength::Stronger,
            _ => Strength::Weaker,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub r: u32,
    pub oracle: u64,
    pub polynomial: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    /// Inclusive range of `r` compared against the oracle.
    pub checked_range: (u32, u32),
    pub first_mismatch: Option<Mismatch>,
    /// Interpolation of `n+1` oracle values from the threshold on.
    pub interpolated: UniPoly,
    pub ok: bool,
}

/// Compares `p(r)` with the oracle for `r ∈ [r0, r0+window]` and checks that
/// interpolating `n+1` oracle values from `r0` reproduces `p` exactly.
pub fn validate_polynomial(p: &DimensionPolynomial, s: &StaircaseSet, window: u32, exec: Exec) -> Validation {
    let r0 = p.validity_threshold;
    let window = window.max(1);
    let top = r0 + window.max(s.n as u32);
    let counts = free_term_counts(s, top, exec);
    let mut first_mismatch = None;
    for r in r0..=r0 + window {
        let value = p.polynomial.eval(&Rational::from(i64::from(r)));
        let oracle = counts[r as usize];
        if value != Rational::from(oracle as i64) {
            first_mismatch = Some(Mismatch { r, oracle, polynomial: value });
            break;
        }
    }
    let points: Vec<(Rational, Rational)> = (r0..=r0 + s.n as u32)
        .map(|r| (Rational::from(i64::from(r)), Rational::from(counts[r as usize] as i64)))
        .collect();
    let interpolated = UniPoly::interpolate(&points);
    let ok = first_mismatch.is_none() && interpolated == p.polynomial;
    Validation { checked_range: (r0, r0 + window), first_mismatch, interpolated, ok }
}

/// `C(t+i,i)` rendering of binomial coefficients, e.g. `2*C(t+1,1) - C(t,0)`.
pub fn render_binomial(c: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, ci) in c.iter().enumerate().rev() {
        if ci.is_zero() {
            continue;
        }
        let neg = ci < &BigInt::zero();
        let abs = if neg { -ci } else { ci.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&format!("{abs}*"));
        }
        if i == 0 {
            out.push_str("C(t,0)");
        } else {
            out.push_str(&format!("C(t+{i},{i})"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[u32]) -> ExponentVector {
        v.to_vec().into()
    }

    fn stair(n: usize, vs: &[&[u32]]) -> StaircaseSet {
        StaircaseSet::new(n, vec![vs.iter().map(|v| ev(v)).collect()]).unwrap()
    }

    fn forward_diffusion() -> StaircaseSet {
        stair(4, &[&[2, 0, 0, 0], &[1, 0, 1, 0], &[0, 1, 0, 1], &[0, 1, 1, 0], &[1, 0, 0, 1], &[0, 0, 2, 1]])
    }

    #[test]
    fn minimization() {
        let s = stair(2, &[&[1, 0], &[2, 0], &[1, 0]]);
        assert_eq!(s.vectors(0), &[ev(&[1, 0])]);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(free_term_count_oracle(&stair(2, &[&[2, 0]]), 3), 7);
        assert_eq!(free_term_count_oracle(&StaircaseSet::empty(2, 1), 2), 6);
        let all = stair(2, &[&[0, 0]]);
        assert!((0..6).all(|r| free_term_count_oracle(&all, r) == 0));
        let zero_ops = StaircaseSet::empty(0, 3);
        assert_eq!(free_term_count_oracle(&zero_ops, 4), 3);
    }

    #[test]
    fn polynomial_examples() {
        let p = dimension_polynomial(&stair(2, &[&[2, 0]])).unwrap();
        assert_eq!(p.polynomial, UniPoly::from_integers(&[1, 2]));
        assert_eq!(p.validity_threshold, 2);
        let p = dimension_polynomial(&forward_diffusion()).unwrap();
        assert_eq!(p.polynomial, UniPoly::from_integers(&[0, 5]));
        let sym = stair(4, &[&[0, 0, 2, 1], &[0, 1, 1, 0], &[0, 1, 0, 1], &[1, 0, 0, 0]]);
        assert_eq!(dimension_polynomial(&sym).unwrap().polynomial, UniPoly::from_integers(&[0, 4]));
        let all = stair(2, &[&[0, 0]]);
        assert!(dimension_polynomial(&all).unwrap().polynomial.is_zero());
    }

    #[test]
    fn sequential_matches_parallel() {
        let s = forward_diffusion();
        assert_eq!(dimension_polynomial_with(&s, Exec::Sequential), dimension_polynomial_with(&s, Exec::Parallel));
        assert_eq!(free_term_counts(&s, 9, Exec::Sequential), free_term_counts(&s, 9, Exec::Parallel));
    }

    #[test]
    fn subset_guard() {
        let vs: Vec<ExponentVector> = (0..26u32).map(|k| ev(&[k, 25 - k])).collect();
        let s = StaircaseSet::new(2, vec![vs]).unwrap();
        assert!(matches!(dimension_polynomial(&s), Err(DimPolyError::TooManyVectors { count: 26, .. })));
    }

    #[test]
    fn binomial_basis() {
        let c = to_binomial_basis(&UniPoly::from_integers(&[1, 2])).unwrap();
        assert_eq!(c, vec![BigInt::from(-1), BigInt::from(2)]);
        let c = to_binomial_basis(&UniPoly::binomial(4, 4)).unwrap();
        assert_eq!(c, vec![0, 0, 0, 0, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
        assert!(to_binomial_basis(&UniPoly::zero()).unwrap().is_empty());
        let half = UniPoly::from_coeffs(vec![Rational::new(1, 2)]);
        assert!(to_binomial_basis(&half).is_err());
        assert_eq!(render_binomial(&to_binomial_basis(&UniPoly::from_integers(&[1, 2])).unwrap()), "2*C(t+1,1) - C(t,0)");
    }

    #[test]
    fn invariants() {
        let maxwell = crate::coeff::parse_polynomial("1/4*t^4+19/6*t^3+55/4*t^2+137/6*t+12", "t").unwrap();
        let inv = invariants_of(&maxwell, 4, SystemKind::Differential).unwrap();
        assert_eq!(inv.degree, Some(4));
        assert_eq!(inv.delta_dimension, BigInt::from(6));
        let fwd = crate::coeff::parse_polynomial("4*t^4+18*t^3+35*t^2+31*t+12", "t").unwrap();
        let inv = invariants_of(&fwd, 4, SystemKind::Inversive).unwrap();
        assert_eq!(inv.delta_dimension, BigInt::from(6));
        assert_eq!(inv.typical_dimension, BigInt::from(96));
        let inv = invariants_of(&UniPoly::from_integers(&[1, 2]), 2, SystemKind::Differential).unwrap();
        assert_eq!((inv.degree, inv.delta_dimension.clone()), (Some(1), BigInt::zero()));
        assert_eq!(inv.typical_dimension, BigInt::from(2));
    }

    #[test]
    fn free_modules() {
        assert_eq!(free_module_polynomial(1, 2, SystemKind::Differential), UniPoly::binomial(2, 2));
        assert_eq!(free_module_polynomial(1, 2, SystemKind::Inversive), UniPoly::from_integers(&[1, 2, 2]));
        assert_eq!(free_module_polynomial(3, 0, SystemKind::Differential), UniPoly::from_integers(&[3]));
        // lattice points with |v|_1 <= t in Z^2
        let count = |t: i64| (-t..=t).flat_map(|x| (-t..=t).map(move |y| (x, y))).filter(|(x, y)| x.abs() + y.abs() <= t).count();
        let p = free_module_polynomial(1, 2, SystemKind::Inversive);
        for t in 0..6 {
            assert_eq!(p.eval(&Rational::from(t)), Rational::from(count(t) as i64));
        }
    }

    #[test]
    fn strength_order() {
        let four = UniPoly::from_integers(&[0, 4]);
        let five = UniPoly::from_integers(&[0, 5]);
        assert_eq!(compare_strength(&four, &five), Strength::Stronger);
        assert_eq!(compare_strength(&five, &four), Strength::Weaker);
        assert_eq!(compare_strength(&four, &four), Strength::Equal);
    }

    #[test]
    fn validation() {
        let s = stair(2, &[&[2, 0]]);
        let p = dimension_polynomial(&s).unwrap();
        let v = validate_polynomial(&p, &s, 5, Exec::default());
        assert!(v.ok);
        assert_eq!(v.checked_range, (2, 7));
        let wrong = DimensionPolynomial { polynomial: UniPoly::from_integers(&[2, 2]), validity_threshold: 2 };
        let v = validate_polynomial(&wrong, &s, 5, Exec::default());
        assert!(!v.ok);
        assert_eq!(v.first_mismatch.unwrap().r, 2);
        let all = stair(2, &[&[0, 0]]);
        assert!(validate_polynomial(&dimension_polynomial(&all).unwrap(), &all, 3, Exec::default()).ok);
    }
}
