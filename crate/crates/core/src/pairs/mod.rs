//! `c(t)`-pairs: elements `g, h` with `δ(g) = c(t) h`, their combination
//! in the Ore ring, and the three-way classification built on them.

mod classify;
mod search;

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

pub(crate) use classify::additive_part;
pub use classify::{case_b_structure, classify, Case, CaseBStructure, ClassificationReport, Criterion};
pub use search::{find_linear_pairs, find_pairs_bounded, search_degree, DegreeSearch, PairSearch, SearchConfig, SearchMethod};

use crate::garep::{Representation, TPoly};
use crate::orering::{right_divide, right_gcd_ext, AdditivePoly, OreError};
use crate::poly::linalg::SparseElim;
use crate::poly::{b_adic_membership, default_names, reduce_fraction, Exps, MPoly, MonomialOrder, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("degree {degree} has {monomials} monomials, above the cap of {cap}")]
    SearchSpaceTooLarge { degree: u32, monomials: usize, cap: usize },
    #[error("combine needs two non-trivial pairs")]
    TrivialInput,
    #[error("no non-trivial pairs supplied")]
    EmptyInput,
    #[error("({g}, {h}) is not a pair for c = {c}")]
    NotAPair { g: String, h: String, c: String },
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairKind {
    General,
    QuasiPrinciple,
    Principle,
}

impl PairKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::General => "general",
            PairKind::QuasiPrinciple => "quasi-principle",
            PairKind::Principle => "principle",
        }
    }
}

/// `(g, h, c)` with `δ(g) = c(t)·h` and `h` invariant.
#[derive(Clone, PartialEq, Eq)]
pub struct Pair {
    pub g: MPoly,
    pub h: MPoly,
    pub c: AdditivePoly,
    pub kind: PairKind,
}

impl Pair {
    /// Checks the pair, normalizes `c` and `h` to be monic, and records its kind.
    pub fn new(rep: &Representation, g: MPoly, h: MPoly, c: AdditivePoly) -> Result<Pair, PairError> {
        if !is_pair(rep, &g, &h, &c) {
            return Err(PairError::NotAPair { g: g.to_string(), h: h.to_string(), c: c.to_string() });
        }
        let f = rep.field();
        let (mut g, mut h, mut c) = (g, h, c);
        if !h.is_zero() && !c.is_zero() {
            let u = c.lead();
            c = c.monic();
            h = h.scale(u);
            let lead = h.leading_term(&MonomialOrder::DegColex).unwrap().1;
            let inv = f.inv(lead).unwrap();
            g = g.scale(inv);
            h = h.scale(inv);
        }
        let kind = pair_kind(rep, &c);
        Ok(Pair { g, h, c, kind })
    }

    pub fn is_trivial(&self) -> bool {
        self.h.is_zero() || self.c.is_zero()
    }

    pub fn to_json(&self) -> Value {
        let names = default_names(self.g.nvars());
        json!({
            "g": self.g.to_json(),
            "h": self.h.to_json(),
            "c": self.c.to_json(),
            "kind": self.kind.as_str(),
            "text": format!("({}, {}, {})", self.g.fmt_with(&names), self.h.fmt_with(&names), self.c),
        })
    }
}

impl fmt::Debug for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}) [{}]", self.g, self.h, self.c, self.kind.as_str())
    }
}

fn pair_kind(rep: &Representation, c: &AdditivePoly) -> PairKind {
    if c.is_zero() {
        PairKind::General
    } else if *c == AdditivePoly::t(rep.field()) {
        PairKind::Principle
    } else if kernel_acts_trivially(rep, c) {
        PairKind::QuasiPrinciple
    } else {
        PairKind::General
    }
}

/// `δ(g) = c(t)·h` and `δ(h) = 0`, as exact identities.
pub fn is_pair(rep: &Representation, g: &MPoly, h: &MPoly, c: &AdditivePoly) -> bool {
    if !rep.is_invariant(h) {
        return false;
    }
    let terms: Vec<(u32, _)> = c
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, &a)| ((rep.field().p() as u64).pow(i as u32) as u32, a))
        .collect();
    rep.delta(g) == TPoly::times_scalar_poly(h, &terms)
}

/// Dimension of the span of the `t`-coefficients of `coact(g)`, `g` included.
pub fn variance(rep: &Representation, g: &MPoly) -> usize {
    let c = rep.coact(g);
    let mut keys: std::collections::BTreeMap<Exps, usize> = std::collections::BTreeMap::new();
    let mut elim = SparseElim::new(rep.field());
    for coeff in c.coeffs().values() {
        let row = coeff
            .terms()
            .map(|(e, &v)| {
                let next = keys.len();
                (*keys.entry(e.clone()).or_insert(next), v)
            })
            .collect();
        elim.push(row);
    }
    elim.rank()
}

/// First entry `(i, j)` with `q_{i,j} ∉ k[b(t)]`, if any.
pub fn kernel_witness(rep: &Representation, b: &AdditivePoly) -> Option<(usize, usize)> {
    let bu = b.to_upoly();
    rep.entries().iter().find(|(_, q)| b_adic_membership(q, &bu).is_err()).map(|(&ij, _)| ij)
}

/// Whether `ker b(t)` acts trivially, i.e. every `q_{i,j}` lies in `k[b(t)]`.
pub fn kernel_acts_trivially(rep: &Representation, b: &AdditivePoly) -> bool {
    !b.is_zero() && kernel_witness(rep, b).is_none()
}

/// `a(x/y)` as a fraction, for additive `a`.
fn additive_of_fraction(a: &AdditivePoly, x: &MPoly, y: &MPoly) -> (MPoly, MPoly) {
    let p = a.field().p();
    let top = match a.degree() {
        Some(d) => d,
        None => return (MPoly::zero(x.field(), x.nvars()), MPoly::one(x.field(), x.nvars())),
    };
    let big = p.pow(top as u32);
    let mut num = MPoly::zero(x.field(), x.nvars());
    for (k, &c) in a.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let pk = p.pow(k as u32);
        num = &num + &(&x.pow(pk) * &y.pow(big - pk)).scale(c);
    }
    (num, y.pow(big))
}

/// The `b`-pair of the Bezout combination `b = b1∘c1 + b2∘c2`, with
/// `g/h = b1(g1/h1) + b2(g2/h2)` in lowest terms.
pub fn combine(rep: &Representation, p1: &Pair, p2: &Pair) -> Result<Pair, PairError> {
    if p1.is_trivial() || p2.is_trivial() {
        return Err(PairError::TrivialInput);
    }
    let cert = right_gcd_ext(&p1.c, &p2.c)?;
    let (n1, d1) = additive_of_fraction(&cert.b1, &p1.g, &p1.h);
    let (n2, d2) = additive_of_fraction(&cert.b2, &p2.g, &p2.h);
    let num = &(&n1 * &d2) + &(&n2 * &d1);
    let den = &d1 * &d2;
    let (g, h) = reduce_fraction(&num, &den);
    Pair::new(rep, g, h, cert.b)
}

/// Monic right gcd of every non-trivial pair's `c`, with a witnessing pair
/// built by folding [`combine`].
pub fn fundamental_generator(rep: &Representation, pairs: &[Pair]) -> Result<(AdditivePoly, Pair), PairError> {
    let mut live = pairs.iter().filter(|p| !p.is_trivial());
    let mut acc = live.next().ok_or(PairError::EmptyInput)?.clone();
    for p in live {
        let (_, rem) = right_divide(&p.c, &acc.c)?;
        if rem.is_zero() {
            continue;
        }
        acc = combine(rep, &acc, p)?;
    }
    debug_assert!(pairs.iter().filter(|p| !p.is_trivial()).all(|p| in_left_ideal(&p.c, &acc.c)));
    Ok((acc.c.clone(), acc))
}

/// `c = q∘b` for some `q`.
pub(crate) fn in_left_ideal(c: &AdditivePoly, b: &AdditivePoly) -> bool {
    right_divide(c, b).is_ok_and(|(_, r)| r.is_zero())
}

#[cfg(test)]
mod tests;
