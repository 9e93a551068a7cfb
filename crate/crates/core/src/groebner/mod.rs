//! Leading-term reduction, S-polynomials and Buchberger completion for
//! submodules of a free module over a commutative operator ring.
//!
//! Pairs are processed in order of `(lcm degree, creation index)`. The final
//! basis is autoreduced, monic and sorted by `(generator, order key)`, which
//! makes it the unique reduced Gröbner basis for the chosen order.

mod poly;

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::coeff::Coefficient;
use crate::operator::{AdmissibleOrder, ModuleElement, ModuleTerm, OperatorError, OperatorPolynomial};
use crate::par;
use poly::{key_divides, key_generator, key_lcm, key_quotient, Accumulator, Poly, Shift};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuchbergerOptions {
    /// Skip pairs covered by Buchberger's chain criterion.
    pub chain_criterion: bool,
    /// Reduce all pairs of the current lcm degree concurrently. Ignored when
    /// tracing.
    pub parallel: bool,
    /// Record one [`TraceEntry`] per processed pair.
    pub trace: bool,
    /// Express every basis element in terms of the inputs.
    pub track_cofactors: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroebnerStats {
    pub pairs_processed: usize,
    pub pairs_skipped: usize,
    pub reductions: usize,
    /// Size of the completed (not yet autoreduced) generating set.
    pub completion_size: usize,
}

/// One processed pair: ids are 0-based indices into the completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub pair: (usize, usize),
    pub s_polynomial: ModuleElement,
    /// `(reducer id, remainder after the step)`.
    pub chain: Vec<(usize, ModuleElement)>,
    /// Id of the element added to the completion, if the remainder was nonzero.
    pub added: Option<usize>,
}

impl TraceEntry {
    /// `S(g1,g2) = ... ->g2 ... => 0`, with 1-based ids.
    pub fn render(&self, order: &AdmissibleOrder, operators: &[String], generators: &[String]) -> String {
        let mut line = format!(
            "S(g{},g{}) = {}",
            self.pair.0 + 1,
            self.pair.1 + 1,
            self.s_polynomial.render(order, operators, generators)
        );
        for (g, r) in &self.chain {
            line.push_str(&format!(" ->g{} {}", g + 1, r.render(order, operators, generators)));
        }
        match self.added {
            Some(k) => line.push_str(&format!(" => g{}", k + 1)),
            None => line.push_str(" => 0"),
        }
        line
    }
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    /// Autoreduced, monic, sorted by `(generator, order key)`.
    pub elements: Vec<ModuleElement>,
    pub order: AdmissibleOrder,
    pub stats: GroebnerStats,
    /// The inputs (zero relations dropped) followed by every added remainder.
    pub completion: Vec<ModuleElement>,
    pub trace: Vec<TraceEntry>,
    /// `cofactors[k][i]` multiplies input `i` in the expansion of `elements[k]`.
    pub cofactors: Option<Vec<Vec<OperatorPolynomial>>>,
    pub inputs: Vec<ModuleElement>,
}

impl GroebnerBasis {
    pub fn leading_terms(&self) -> Vec<ModuleTerm> {
        self.elements.iter().map(|g| g.leading_term(&self.order).expect("nonzero basis element").0).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Debug)]
struct Tracked {
    poly: Poly,
    cof: Option<Vec<OperatorPolynomial>>,
}

impl Tracked {
    fn sub_multiple(&self, c: &Coefficient, s: &Shift, g: &Tracked, order: &AdmissibleOrder) -> Tracked {
        let poly = self.poly.add_shifted_scaled(&-c, s, &g.poly);
        let mut cof = self.cof.clone();
        sub_cofactors(&mut cof, c, s, g, order);
        Tracked { poly, cof }
    }

    fn scale(&self, c: &Coefficient) -> Tracked {
        Tracked {
            poly: self.poly.scale(c),
            cof: self.cof.as_ref().map(|v| v.iter().map(|p| p.scale(c)).collect()),
        }
    }
}

/// `cof -= c · s · cof(g)` when both sides are tracked.
fn sub_cofactors(cof: &mut Option<Vec<OperatorPolynomial>>, c: &Coefficient, s: &Shift, g: &Tracked, order: &AdmissibleOrder) {
    if let (Some(a), Some(b)) = (cof.as_mut(), &g.cof) {
        let lambda = s.to_natural(order);
        let neg = -c;
        for (o, bi) in a.iter_mut().zip(b) {
            o.add_scaled(bi, &neg, &lambda);
        }
    }
}

/// Reducers indexed by generator for the divisibility search.
struct ReducerSet<'a> {
    items: &'a [Tracked],
    by_generator: Vec<Vec<usize>>,
}

impl<'a> ReducerSet<'a> {
    fn new(items: &'a [Tracked]) -> Self {
        let mut by_generator: Vec<Vec<usize>> = Vec::new();
        for (i, g) in items.iter().enumerate() {
            if g.poly.is_zero() {
                continue;
            }
            let gen = key_generator(g.poly.lead_key()) as usize;
            if by_generator.len() <= gen {
                by_generator.resize(gen + 1, Vec::new());
            }
            by_generator[gen].push(i);
        }
        Self { items, by_generator }
    }

    /// First reducer (in insertion order) whose leading term divides `key`.
    fn find(&self, key: &crate::operator::OrderKey, skip: Option<usize>) -> Option<usize> {
        let gen = key_generator(key) as usize;
        self.by_generator
            .get(gen)?
            .iter()
            .copied()
            .find(|&i| Some(i) != skip && key_divides(self.items[i].poly.lead_key(), key))
    }
}

/// Literal leading-term reduction loop: `r := r - λ·(lc(r)/lc(g))·g` while
/// some `lt(g)` divides `lt(r)`.
fn top_reduce(
    r: Tracked,
    reducers: &ReducerSet<'_>,
    order: &AdmissibleOrder,
    mut chain: Option<&mut Vec<(usize, ModuleElement)>>,
) -> (Tracked, usize) {
    let Tracked { poly, mut cof } = r;
    let mut acc = Accumulator::new(poly);
    let mut steps = 0;
    while let Some((key, lc)) = acc.lead() {
        let Some(i) = reducers.find(key, None) else {
            break;
        };
        let g = &reducers.items[i];
        let s = key_quotient(g.poly.lead_key(), key);
        let c = lc / g.poly.lead_coeff();
        acc.sub_shifted_scaled(&c, &s, &g.poly);
        sub_cofactors(&mut cof, &c, &s, g, order);
        steps += 1;
        if let Some(ch) = chain.as_deref_mut() {
            ch.push((i, acc.to_poly().to_element(order)));
        }
    }
    (Tracked { poly: acc.into_poly(), cof }, steps)
}

/// Reduces every term, not just the leading one. `skip` excludes one
/// reducer (the element itself during autoreduction).
fn full_reduce(f: Tracked, reducers: &ReducerSet<'_>, order: &AdmissibleOrder, skip: Option<usize>) -> Tracked {
    let Tracked { poly, mut cof } = f;
    let mut acc = Accumulator::new(poly);
    // terms no reducer divides, in descending order
    let mut done = Vec::new();
    while let Some((key, lc)) = acc.lead() {
        match reducers.find(key, skip) {
            Some(i) => {
                let g = &reducers.items[i];
                let s = key_quotient(g.poly.lead_key(), key);
                let c = lc / g.poly.lead_coeff();
                acc.sub_shifted_scaled(&c, &s, &g.poly);
                sub_cofactors(&mut cof, &c, &s, g, order);
            }
            None => done.extend(acc.pop_lead()),
        }
    }
    Tracked { poly: Poly { terms: done }, cof }
}

fn s_poly_tracked(a: &Tracked, b: &Tracked, order: &AdmissibleOrder) -> Tracked {
    let ka = a.poly.lead_key();
    let kb = b.poly.lead_key();
    let lcm = key_lcm(ka, kb);
    let ua = key_quotient(ka, &lcm);
    let ub = key_quotient(kb, &lcm);
    let ca = a.poly.lead_coeff().inv().expect("nonzero");
    let cb = b.poly.lead_coeff().inv().expect("nonzero");
    let first = Tracked { poly: a.poly.shifted_scaled(&ca, &ua), cof: a.cof.as_ref().map(|v| {
        let lambda = ua.to_natural(order);
        v.iter().map(|p| { let mut q = OperatorPolynomial::zero(); q.add_scaled(p, &ca, &lambda); q }).collect()
    }) };
    first.sub_multiple(&cb, &ub, b, order)
}

fn zero_cofactors(n: usize) -> Vec<OperatorPolynomial> {
    vec![OperatorPolynomial::zero(); n]
}

/// Reduces `f` modulo `g` by the leading-term loop only; the result's
/// leading term is not divisible by any `lt(g)`, its tail may be.
pub fn reduce(f: &ModuleElement, g: &[ModuleElement], order: &AdmissibleOrder) -> ModuleElement {
    let items: Vec<Tracked> = g.iter().map(|x| Tracked { poly: Poly::from_element(x, order), cof: None }).collect();
    let reducers = ReducerSet::new(&items);
    let (r, _) = top_reduce(Tracked { poly: Poly::from_element(f, order), cof: None }, &reducers, order, None);
    r.poly.to_element(order)
}

/// Same as [`reduce`] with a caller-chosen reducer for every step, used to
/// check that remainders do not depend on the selection strategy.
pub fn reduce_with<F>(f: &ModuleElement, g: &[ModuleElement], order: &AdmissibleOrder, mut choose: F) -> ModuleElement
where
    F: FnMut(&[usize]) -> usize,
{
    let items: Vec<Poly> = g.iter().map(|x| Poly::from_element(x, order)).collect();
    let mut r = Poly::from_element(f, order);
    while !r.is_zero() {
        let candidates: Vec<usize> =
            (0..items.len()).filter(|&i| !items[i].is_zero() && key_divides(items[i].lead_key(), r.lead_key())).collect();
        if candidates.is_empty() {
            break;
        }
        let i = candidates[choose(&candidates) % candidates.len()];
        let s = key_quotient(items[i].lead_key(), r.lead_key());
        let c = -(r.lead_coeff() / items[i].lead_coeff());
        r = r.add_shifted_scaled(&c, &s, &items[i]);
    }
    r.to_element(order)
}

/// Full normal form: no term of the result is divisible by any `lt(g)`.
pub fn normal_form(f: &ModuleElement, g: &[ModuleElement], order: &AdmissibleOrder) -> ModuleElement {
    let items: Vec<Tracked> = g.iter().map(|x| Tracked { poly: Poly::from_element(x, order), cof: None }).collect();
    let reducers = ReducerSet::new(&items);
    full_reduce(Tracked { poly: Poly::from_element(f, order), cof: None }, &reducers, order, None).poly.to_element(order)
}

/// `u1·g1/lc(g1) - u2·g2/lc(g2)` with `u_i = lcm(lt g1, lt g2)/lt g_i`; zero
/// when the leading terms sit on different generators.
pub fn s_polynomial(g1: &ModuleElement, g2: &ModuleElement, order: &AdmissibleOrder) -> Result<ModuleElement, OperatorError> {
    let a = Poly::from_element(g1, order);
    let b = Poly::from_element(g2, order);
    if a.is_zero() || b.is_zero() {
        return Err(OperatorError::ZeroElement);
    }
    if key_generator(a.lead_key()) != key_generator(b.lead_key()) {
        return Ok(ModuleElement::zero());
    }
    let s = s_poly_tracked(&Tracked { poly: a, cof: None }, &Tracked { poly: b, cof: None }, order);
    Ok(s.poly.to_element(order))
}

/// Buchberger criterion: every S-polynomial reduces to zero modulo `g`.
pub fn is_groebner_basis(g: &[ModuleElement], order: &AdmissibleOrder) -> bool {
    let items: Vec<Tracked> = g
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| Tracked { poly: Poly::from_element(x, order), cof: None })
        .collect();
    let reducers = ReducerSet::new(&items);
    let pairs: Vec<(usize, usize)> = (0..items.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .filter(|&(i, j)| key_generator(items[i].poly.lead_key()) == key_generator(items[j].poly.lead_key()))
        .collect();
    par::map(&pairs, |&(i, j)| {
        let s = s_poly_tracked(&items[i], &items[j], order);
        top_reduce(s, &reducers, order, None).0.poly.is_zero()
    })
    .into_iter()
    .all(|ok| ok)
}

/// Minimal, tail-reduced, monic form of a Gröbner basis, sorted by
/// `(generator, order key)`.
pub fn autoreduce(g: &[ModuleElement], order: &AdmissibleOrder) -> Vec<ModuleElement> {
    let items: Vec<Tracked> = g
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| Tracked { poly: Poly::from_element(x, order), cof: None })
        .collect();
    autoreduce_tracked(items, order).into_iter().map(|t| t.poly.to_element(order)).collect()
}

fn autoreduce_tracked(mut items: Vec<Tracked>, order: &AdmissibleOrder) -> Vec<Tracked> {
    items.retain(|t| !t.poly.is_zero());
    // stable: among equal leading terms the earliest survives
    items.sort_by(|a, b| a.poly.lead_key().cmp(b.poly.lead_key()));
    let mut kept: Vec<Tracked> = Vec::new();
    for t in items {
        if !kept.iter().any(|k| key_divides(k.poly.lead_key(), t.poly.lead_key())) {
            kept.push(t);
        }
    }
    let reducers = ReducerSet::new(&kept);
    let reduced: Vec<Tracked> = (0..kept.len())
        .map(|i| {
            let t = &kept[i];
            let head = Tracked {
                poly: Poly { terms: vec![t.poly.terms[0].clone()] },
                cof: None,
            };
            let tail = Tracked { poly: Poly { terms: t.poly.terms[1..].to_vec() }, cof: t.cof.clone() };
            let tail = full_reduce(tail, &reducers, order, Some(i));
            let mut terms = head.poly.terms;
            terms.extend(tail.poly.terms);
            let whole = Tracked { poly: Poly { terms }, cof: tail.cof };
            let inv = whole.poly.lead_coeff().inv().expect("nonzero");
            whole.scale(&inv)
        })
        .collect();
    let mut out = reduced;
    out.sort_by(|a, b| {
        let ka = a.poly.lead_key();
        let kb = b.poly.lead_key();
        (key_generator(ka), ka).cmp(&(key_generator(kb), kb))
    });
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct PendingPair {
    lcm_degree: u32,
    seq: usize,
    i: usize,
    j: usize,
}

struct Completion<'o> {
    order: &'o AdmissibleOrder,
    options: BuchbergerOptions,
    basis: Vec<Tracked>,
    queue: BinaryHeap<Reverse<PendingPair>>,
    pending: BTreeSet<(usize, usize)>,
    next_seq: usize,
    stats: GroebnerStats,
    trace: Vec<TraceEntry>,
}

impl<'o> Completion<'o> {
    fn push(&mut self, t: Tracked) -> usize {
        let k = self.basis.len();
        let key_k = t.poly.lead_key().clone();
        self.basis.push(t);
        for i in 0..k {
            let key_i = self.basis[i].poly.lead_key();
            if key_generator(key_i) != key_generator(&key_k) {
                continue;
            }
            let lcm = key_lcm(key_i, &key_k);
            self.queue.push(Reverse(PendingPair { lcm_degree: lcm.0[0], seq: self.next_seq, i, j: k }));
            self.pending.insert((i, k));
            self.next_seq += 1;
        }
        k
    }

    fn is_pending(&self, a: usize, b: usize) -> bool {
        self.pending.contains(&(a.min(b), a.max(b)))
    }

    /// Chain criterion: some `lt(g_k)` divides `lcm(lt g_i, lt g_j)` and
    /// both pairs `{i,k}`, `{j,k}` have already been treated.
    fn chain_skips(&self, i: usize, j: usize) -> bool {
        let lcm = key_lcm(self.basis[i].poly.lead_key(), self.basis[j].poly.lead_key());
        (0..self.basis.len()).any(|k| {
            k != i
                && k != j
                && key_divides(self.basis[k].poly.lead_key(), &lcm)
                && !self.is_pending(i, k)
                && !self.is_pending(j, k)
        })
    }

    /// Pops the next pair and decides whether it needs processing.
    fn pop(&mut self) -> Option<Option<(usize, usize)>> {
        let Reverse(p) = self.queue.pop()?;
        self.pending.remove(&(p.i, p.j));
        if self.options.chain_criterion && self.chain_skips(p.i, p.j) {
            self.stats.pairs_skipped += 1;
            return Some(None);
        }
        Some(Some((p.i, p.j)))
    }

    fn run_sequential(&mut self) {
        while let Some(next) = self.pop() {
            let Some((i, j)) = next else { continue };
            let s = s_poly_tracked(&self.basis[i], &self.basis[j], self.order);
            let s_elem = self.options.trace.then(|| s.poly.to_element(self.order));
            let mut chain = Vec::new();
            let reducers = ReducerSet::new(&self.basis);
            let (r, steps) =
                top_reduce(s, &reducers, self.order, if self.options.trace { Some(&mut chain) } else { None });
            self.stats.pairs_processed += 1;
            self.stats.reductions += steps;
            let added = (!r.poly.is_zero()).then(|| self.push(r));
            if let Some(s_polynomial) = s_elem {
                self.trace.push(TraceEntry { pair: (i, j), s_polynomial, chain, added });
            }
        }
    }

    /// Processes all pairs of the smallest pending lcm degree as one batch:
    /// S-polynomials are reduced concurrently against the basis as it stood,
    /// then re-reduced one by one in pair order before insertion.
    fn run_batched(&mut self) {
        while let Some(Reverse(head)) = self.queue.peek().copied() {
            let mut batch = Vec::new();
            while let Some(Reverse(p)) = self.queue.peek().copied() {
                if p.lcm_degree != head.lcm_degree {
                    break;
                }
                if let Some(Some(pair)) = self.pop() {
                    batch.push(pair);
                }
            }
            let snapshot_len = self.basis.len();
            let results = {
                let basis = &self.basis[..snapshot_len];
                let order = self.order;
                par::map(&batch, |&(i, j)| {
                    let reducers = ReducerSet::new(basis);
                    let s = s_poly_tracked(&basis[i], &basis[j], order);
                    top_reduce(s, &reducers, order, None)
                })
            };
            for (r, steps) in results {
                self.stats.pairs_processed += 1;
                self.stats.reductions += steps;
                if r.poly.is_zero() {
                    continue;
                }
                let reducers = ReducerSet::new(&self.basis);
                let (r, more) = top_reduce(r, &reducers, self.order, None);
                self.stats.reductions += more;
                if !r.poly.is_zero() {
                    self.push(r);
                }
            }
        }
    }
}

/// Completes `f` to a Gröbner basis (Buchberger with the literal
/// leading-term reduction), then autoreduces and normalizes it.
pub fn buchberger(f: &[ModuleElement], order: &AdmissibleOrder, options: &BuchbergerOptions) -> GroebnerBasis {
    let inputs: Vec<ModuleElement> = f.iter().filter(|x| !x.is_zero()).cloned().collect();
    let n_inputs = inputs.len();
    let mut c = Completion {
        order,
        options: options.clone(),
        basis: Vec::new(),
        queue: BinaryHeap::new(),
        pending: BTreeSet::new(),
        next_seq: 0,
        stats: GroebnerStats::default(),
        trace: Vec::new(),
    };
    let ops = order.operator_count();
    for (i, x) in inputs.iter().enumerate() {
        let cof = options.track_cofactors.then(|| {
            let mut v = zero_cofactors(n_inputs);
            v[i] = OperatorPolynomial::monomial(Coefficient::one(), crate::operator::ExponentVector::one(ops));
            v
        });
        c.push(Tracked { poly: Poly::from_element(x, order), cof });
    }
    if options.parallel && !options.trace && par::ENABLED {
        c.run_batched();
    } else {
        c.run_sequential();
    }
    c.stats.completion_size = c.basis.len();
    let completion: Vec<ModuleElement> = c.basis.iter().map(|t| t.poly.to_element(order)).collect();
    let reduced = autoreduce_tracked(c.basis, order);
    let cofactors = options
        .track_cofactors
        .then(|| reduced.iter().map(|t| t.cof.clone().expect("tracked")).collect());
    GroebnerBasis {
        elements: reduced.iter().map(|t| t.poly.to_element(order)).collect(),
        order: order.clone(),
        stats: c.stats,
        completion,
        trace: c.trace,
        cofactors,
        inputs,
    }
}
