//! Module elements keyed by their order key and kept sorted descending, so
//! the leading term is always at index 0 and monomial shifts keep the order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::coeff::Coefficient;
use crate::operator::{AdmissibleOrder, ExponentVector, ModuleElement, OrderKey};

/// Monomial in key space: exponents listed in the order's operator sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Shift {
    pub degree: u32,
    pub exps: SmallVec<[u32; 10]>,
}

impl Shift {
    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// The same monomial with exponents in declaration order.
    pub fn to_natural(&self, order: &AdmissibleOrder) -> ExponentVector {
        let mut e = vec![0u32; self.exps.len()];
        for (pos, &i) in order.sequence().iter().enumerate() {
            e[i] = self.exps[pos];
        }
        e.into()
    }
}

pub(crate) fn key_generator(k: &OrderKey) -> u32 {
    k.0[1]
}

/// `a | b` for keys: same generator, componentwise smaller exponents.
pub(crate) fn key_divides(a: &OrderKey, b: &OrderKey) -> bool {
    a.0[1] == b.0[1] && a.0[0] <= b.0[0] && a.0[2..].iter().zip(&b.0[2..]).all(|(x, y)| x <= y)
}

/// `b / a`, assuming `a | b`.
pub(crate) fn key_quotient(a: &OrderKey, b: &OrderKey) -> Shift {
    Shift { degree: b.0[0] - a.0[0], exps: a.0[2..].iter().zip(&b.0[2..]).map(|(x, y)| y - x).collect() }
}

/// lcm of two keys on the same generator.
pub(crate) fn key_lcm(a: &OrderKey, b: &OrderKey) -> OrderKey {
    let mut k: SmallVec<[u32; 12]> = SmallVec::with_capacity(a.0.len());
    k.push(0);
    k.push(a.0[1]);
    let mut deg = 0;
    for (x, y) in a.0[2..].iter().zip(&b.0[2..]) {
        let m = *x.max(y);
        deg += m;
        k.push(m);
    }
    k[0] = deg;
    OrderKey(k)
}

pub(crate) fn key_shift(k: &OrderKey, s: &Shift) -> OrderKey {
    if s.is_one() {
        return k.clone();
    }
    let mut out = k.0.clone();
    out[0] += s.degree;
    for (x, y) in out[2..].iter_mut().zip(&s.exps) {
        *x += y;
    }
    OrderKey(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct Poly {
    /// Sorted strictly descending by key; no zero coefficients.
    pub terms: Vec<(OrderKey, Coefficient)>,
}

impl Poly {
    pub fn from_element(f: &ModuleElement, order: &AdmissibleOrder) -> Self {
        let mut terms: Vec<_> = f.iter().map(|(t, c)| (order.key(t), c.clone())).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Self { terms }
    }

    pub fn to_element(&self, order: &AdmissibleOrder) -> ModuleElement {
        ModuleElement::from_terms(self.terms.iter().map(|(k, c)| (order.term_of(k), c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead_key(&self) -> &OrderKey {
        &self.terms[0].0
    }

    pub fn lead_coeff(&self) -> &Coefficient {
        &self.terms[0].1
    }

    pub fn scale(&self, c: &Coefficient) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    /// `c · s · self`.
    pub fn shifted_scaled(&self, c: &Coefficient, s: &Shift) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, x)| (key_shift(k, s), x * c)).collect() }
    }

    /// `self + c · s · other`, merging the two sorted term lists.
    pub fn add_shifted_scaled(&self, c: &Coefficient, s: &Shift, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(k, x)| (key_shift(k, s), x)).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().cloned().unwrap()),
                (None, Some(_)) => {
                    let (k, x) = b.next().unwrap();
                    out.push((k, x * c));
                }
                (Some((ka, _)), Some((kb, _))) => match ka.cmp(kb) {
                    std::cmp::Ordering::Greater => out.push(a.next().cloned().unwrap()),
                    std::cmp::Ordering::Less => {
                        let (k, x) = b.next().unwrap();
                        out.push((k, x * c));
                    }
                    std::cmp::Ordering::Equal => {
                        let (ka, xa) = a.next().unwrap();
                        let (_, xb) = b.next().unwrap();
                        let sum = xa + &(xb * c);
                        if !sum.is_zero() {
                            out.push((ka.clone(), sum));
                        }
                    }
                },
            }
        }
        Poly { terms: out }
    }
}

/// Remainder under repeated subtraction. Terms live in a sorted map, so a
/// step costs the reducer's length instead of the remainder's.
pub(crate) struct Accumulator {
    terms: BTreeMap<OrderKey, Coefficient>,
}

impl Accumulator {
    pub fn new(p: Poly) -> Self {
        Self { terms: p.terms.into_iter().collect() }
    }

    pub fn lead(&self) -> Option<(&OrderKey, &Coefficient)> {
        self.terms.last_key_value()
    }

    pub fn pop_lead(&mut self) -> Option<(OrderKey, Coefficient)> {
        self.terms.pop_last()
    }

    /// `self -= c · s · other`.
    pub fn sub_shifted_scaled(&mut self, c: &Coefficient, s: &Shift, other: &Poly) {
        for (k, x) in &other.terms {
            let d = x * c;
            match self.terms.entry(key_shift(k, s)) {
                Entry::Occupied(mut e) => {
                    let v = e.get() - &d;
                    if v.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = v;
                    }
                }
                Entry::Vacant(e) => {
                    e.insert(-d);
                }
            }
        }
    }

    pub fn to_poly(&self) -> Poly {
        Poly { terms: self.terms.iter().rev().map(|(k, c)| (k.clone(), c.clone())).collect() }
    }

    pub fn into_poly(self) -> Poly {
        Poly { terms: self.terms.into_iter().rev().collect() }
    }
}
