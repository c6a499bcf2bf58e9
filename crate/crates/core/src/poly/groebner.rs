//! Buchberger's algorithm with the product and chain criteria.
//!
//! Pairs are processed in order of (total degree of the lcm, creation
//! index), reducers are chosen by basis index, and the output is the
//! reduced, monic basis sorted by leading monomial. The result is therefore
//! independent of hash order and input permutation.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;

use super::mpoly::{mono_degree, mono_div, mono_divides, mono_lcm, mono_mul, Exps, MPoly};
use super::order::MonomialOrder;
use super::PolyError;
use crate::field::{FieldSpec, FqElem};

/// Step budget and cooperative cancellation for long computations.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    pub max_steps: Option<u64>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn steps(n: u64) -> Self {
        Budget { max_steps: Some(n), cancel: None }
    }

    pub(crate) fn check(&self, used: u64) -> Result<(), PolyError> {
        if let Some(m) = self.max_steps {
            if used > m {
                return Err(PolyError::BudgetExceeded { steps: used });
            }
        }
        if let Some(c) = &self.cancel {
            if c.load(AtomicOrdering::Relaxed) {
                return Err(PolyError::Cancelled);
            }
        }
        Ok(())
    }
}

/// Polynomial as terms sorted descending under the working order.
#[derive(Clone, Debug)]
struct SPoly {
    terms: Vec<(Exps, FqElem)>,
}

impl SPoly {
    fn from_mpoly(p: &MPoly, order: &MonomialOrder) -> Self {
        SPoly { terms: p.sorted_terms(order) }
    }

    fn lead(&self) -> &Exps {
        &self.terms[0].0
    }

    fn lc(&self) -> FqElem {
        self.terms[0].1
    }

    fn to_mpoly(&self, field: &FieldSpec, nvars: usize) -> MPoly {
        MPoly::from_terms(field, nvars, self.terms.iter().cloned())
    }
}

/// `a - c * m * b`, merging sorted term lists.
fn sub_mul(field: &FieldSpec, order: &MonomialOrder, a: &[(Exps, FqElem)], c: FqElem, m: &[u16], b: &[(Exps, FqElem)]) -> Vec<(Exps, FqElem)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut shifted: Option<(Exps, FqElem)> = b.first().map(|(e, v)| (mono_mul(e, m), field.mul(c, *v)));
    while i < a.len() || shifted.is_some() {
        match (a.get(i), &shifted) {
            (Some(ta), Some(tb)) => match order.cmp(&ta.0, &tb.0) {
                Ordering::Greater => {
                    out.push(ta.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((tb.0.clone(), field.neg(tb.1)));
                    j += 1;
                    shifted = b.get(j).map(|(e, v)| (mono_mul(e, m), field.mul(c, *v)));
                }
                Ordering::Equal => {
                    let s = field.sub(ta.1, tb.1);
                    if !s.is_zero() {
                        out.push((ta.0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                    shifted = b.get(j).map(|(e, v)| (mono_mul(e, m), field.mul(c, *v)));
                }
            },
            (Some(ta), None) => {
                out.push(ta.clone());
                i += 1;
            }
            (None, Some(tb)) => {
                out.push((tb.0.clone(), field.neg(tb.1)));
                j += 1;
                shifted = b.get(j).map(|(e, v)| (mono_mul(e, m), field.mul(c, *v)));
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

struct Reducer<'a> {
    field: &'a FieldSpec,
    order: &'a MonomialOrder,
    budget: &'a Budget,
    steps: u64,
}

impl Reducer<'_> {
    /// Full normal form of `p` modulo `basis` (entries may be `None` when retired).
    fn normal_form(&mut self, p: SPoly, basis: &[Option<SPoly>]) -> Result<SPoly, PolyError> {
        let mut rest = p.terms;
        let mut done: Vec<(Exps, FqElem)> = Vec::new();
        let mut start = 0usize;
        while start < rest.len() {
            let (lead, lc) = (&rest[start].0, rest[start].1);
            let red = basis.iter().flatten().find(|g| mono_divides(g.lead(), lead));
            match red {
                Some(g) => {
                    self.steps += 1;
                    self.budget.check(self.steps)?;
                    let m = mono_div(lead, g.lead());
                    let c = self.field.div(lc, g.lc());
                    rest = sub_mul(self.field, self.order, &rest[start..], c, &m, &g.terms);
                    start = 0;
                }
                None => {
                    done.push(rest[start].clone());
                    start += 1;
                }
            }
        }
        Ok(SPoly { terms: done })
    }
}

/// A reduced Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    pub nvars: usize,
    pub polys: Vec<MPoly>,
    field: FieldSpec,
}

impl GroebnerBasis {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    /// Normal form of `f`.
    pub fn reduce(&self, f: &MPoly) -> MPoly {
        let basis: Vec<Option<SPoly>> = self.polys.iter().map(|g| Some(SPoly::from_mpoly(g, &self.order))).collect();
        let budget = Budget::unlimited();
        let mut r = Reducer { field: &self.field, order: &self.order, budget: &budget, steps: 0 };
        let nf = r.normal_form(SPoly::from_mpoly(f, &self.order), &basis).expect("unbudgeted reduction");
        nf.to_mpoly(&self.field, self.nvars)
    }

    pub fn contains(&self, f: &MPoly) -> bool {
        self.reduce(f).is_zero()
    }
}

/// Computes the reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[MPoly], order: &MonomialOrder, budget: &Budget) -> Result<GroebnerBasis, PolyError> {
    let field = gens.first().map(|g| g.field().clone()).ok_or(PolyError::EmptyInput)?;
    let nvars = gens[0].nvars();
    let mut reducer = Reducer { field: &field, order, budget, steps: 0 };

    let mut basis: Vec<Option<SPoly>> = Vec::new();
    let mut pending: BTreeSet<(u32, u64, usize, usize)> = BTreeSet::new();
    let mut pending_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut pair_counter = 0u64;

    let mut add = |h: SPoly,
                   basis: &mut Vec<Option<SPoly>>,
                   pending: &mut BTreeSet<(u32, u64, usize, usize)>,
                   pending_pairs: &mut BTreeSet<(usize, usize)>| {
        let idx = basis.len();
        for (i, g) in basis.iter().enumerate() {
            if let Some(g) = g {
                let l = mono_lcm(g.lead(), h.lead());
                pending.insert((mono_degree(&l), pair_counter, i, idx));
                pending_pairs.insert((i, idx));
                pair_counter += 1;
            }
        }
        basis.push(Some(h));
    };

    for g in gens {
        if g.nvars() != nvars {
            return Err(PolyError::RingMismatch);
        }
        if g.is_zero() {
            continue;
        }
        let nf = reducer.normal_form(SPoly::from_mpoly(g, order), &basis)?;
        if !nf.terms.is_empty() {
            add(nf, &mut basis, &mut pending, &mut pending_pairs);
        }
    }

    while let Some(&key) = pending.iter().next() {
        pending.remove(&key);
        let (_, _, i, j) = key;
        pending_pairs.remove(&(i, j));
        let (gi, gj) = match (&basis[i], &basis[j]) {
            (Some(a), Some(b)) => (a.clone(), b.clone()),
            _ => continue,
        };
        let l = mono_lcm(gi.lead(), gj.lead());
        // Product criterion: coprime leading monomials.
        if mono_mul(gi.lead(), gj.lead()) == l {
            continue;
        }
        // Chain criterion.
        let chain = basis.iter().enumerate().any(|(k, g)| {
            k != i
                && k != j
                && g.as_ref().is_some_and(|g| mono_divides(g.lead(), &l))
                && !pending_pairs.contains(&(i.min(k), i.max(k)))
                && !pending_pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let mi = mono_div(&l, gi.lead());
        let mj = mono_div(&l, gj.lead());
        let ci = field.inv(gi.lc()).unwrap();
        let cj = field.inv(gj.lc()).unwrap();
        let left: Vec<(Exps, FqElem)> = gi.terms.iter().map(|(e, c)| (mono_mul(e, &mi), field.mul(*c, ci))).collect();
        let s = sub_mul(&field, order, &left, cj, &mj, &gj.terms);
        reducer.steps += 1;
        budget.check(reducer.steps)?;
        let nf = reducer.normal_form(SPoly { terms: s }, &basis)?;
        if nf.terms.is_empty() {
            continue;
        }
        if nf.terms.len() == 1 && nf.lead().iter().all(|&e| e == 0) {
            let one = MPoly::one(&field, nvars);
            return Ok(GroebnerBasis { order: order.clone(), nvars, polys: vec![one], field });
        }
        add(nf, &mut basis, &mut pending, &mut pending_pairs);
    }

    // Minimize: drop elements whose leading monomial is divisible by another's.
    let live: Vec<SPoly> = basis.into_iter().flatten().collect();
    let mut keep: Vec<SPoly> = Vec::new();
    for (i, g) in live.iter().enumerate() {
        let redundant = live.iter().enumerate().any(|(k, h)| {
            k != i && mono_divides(h.lead(), g.lead()) && (h.lead() != g.lead() || k < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    if keep.iter().any(|g| g.lead().iter().all(|&e| e == 0)) {
        return Ok(GroebnerBasis { order: order.clone(), nvars, polys: vec![MPoly::one(&field, nvars)], field });
    }
    // Inter-reduce tails and normalize.
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Option<SPoly>> = keep.iter().enumerate().map(|(k, g)| (k != i).then(|| g.clone())).collect();
        let lead = keep[i].terms[0].clone();
        let tail = SPoly { terms: keep[i].terms[1..].to_vec() };
        let mut r = reducer.normal_form(tail, &others)?;
        r.terms.insert(0, lead);
        let inv = field.inv(r.lc()).unwrap();
        for t in r.terms.iter_mut() {
            t.1 = field.mul(t.1, inv);
        }
        reduced.push(r);
    }
    reduced.sort_by(|a, b| order.cmp(b.lead(), a.lead()));
    let polys = reduced.iter().map(|g| g.to_mpoly(&field, nvars)).collect();
    Ok(GroebnerBasis { order: order.clone(), nvars, polys, field })
}

/// Generators of `I ∩ k[kept variables]` for the ideal `I = (gens)`, using an
/// elimination order with `tail` on the kept variables. Output polynomials
/// live in the original ring and are sorted by leading monomial under `tail`.
pub fn eliminate(gens: &[MPoly], drop: &[usize], tail: &MonomialOrder, budget: &Budget) -> Result<Vec<MPoly>, PolyError> {
    let n = gens.first().ok_or(PolyError::EmptyInput)?.nvars();
    let dropped: BTreeSet<usize> = drop.iter().copied().collect();
    let mut perm: Vec<usize> = dropped.iter().copied().collect();
    perm.extend((0..n).filter(|v| !dropped.contains(v)));
    // perm[new] = old; map[old] = new
    let mut map = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        map[old] = new;
    }
    let permuted: Vec<MPoly> = gens.iter().map(|g| g.remap(n, &map)).collect();
    let order = MonomialOrder::elimination(dropped.len(), tail.clone());
    let gb = buchberger(&permuted, &order, budget)?;
    let s = dropped.len();
    let mut out: Vec<MPoly> = gb
        .polys
        .into_iter()
        .filter(|g| g.terms().all(|(e, _)| e[..s].iter().all(|&k| k == 0)))
        .map(|g| g.remap(n, &perm))
        .collect();
    let kept: Vec<usize> = (0..n).filter(|v| !dropped.contains(v)).collect();
    let lead = |p: &MPoly| p.terms().map(|(e, _)| project(e, &kept)).max_by(|a, b| tail.cmp(a, b)).unwrap();
    out.sort_by(|a, b| tail.cmp(&lead(b), &lead(a)));
    Ok(out)
}

fn project(e: &[u16], kept: &[usize]) -> Exps {
    kept.iter().map(|&v| e[v]).collect()
}

/// Whether `f` lies in the ideal with reduced basis `gb`.
pub fn ideal_member(f: &MPoly, gb: &GroebnerBasis) -> bool {
    gb.contains(f)
}
