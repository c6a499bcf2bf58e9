//! Invariant rings: kernel reduction, the slice substitution `t = -g/h`,
//! graph-closure separating invariants, and local invariants in case B.

mod caseb;
mod graph;

use serde_json::{json, Value};
use thiserror::Error;

pub use caseb::{caseb_local_invariants, CasebConfig, CasebData, DegreeVerdict, Frac, MembershipMethod};
pub use graph::{check_separation, graph_separators, GraphSepResult, SeparationReport};

use crate::field::FieldError;
use crate::garep::{GaRepError, Representation};
use crate::orering::{AdditivePoly, OreError};
use crate::pairs::{Pair, PairError};
use crate::poly::{b_adic_membership, default_names, subalgebra_member_localized, Budget, MPoly, PolyError, SubalgebraWitness, UPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvError {
    #[error("q_{{{i},{j}}} is not a polynomial in b(t)")]
    KernelNotTrivial { i: usize, j: usize },
    #[error("the pair is not principle (c = {c})")]
    NotPrinciple { c: String },
    #[error("{0} is not invariant")]
    NotInvariant(String),
    #[error("elimination exceeded its budget after {steps} steps")]
    EliminationBudgetExceeded { steps: u64 },
    #[error("b is inseparable: b = F^{w} ∘ c")]
    InseparableB { w: usize },
    #[error("not case B: {0}")]
    NotCaseB(String),
    #[error("b has only {found} of {expected} kernel points in every extension tried")]
    KernelNotSplit { found: usize, expected: usize },
    #[error("degree {degree} oracle has {monomials} monomials, above the cap of {cap}")]
    DegreeBudgetExceeded { degree: u32, monomials: usize, cap: usize },
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    GaRep(#[from] GaRepError),
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An action in a new parameter `s` with `q_{i,j}(t) = q̃_{i,j}(b(t))`.
#[derive(Clone, Debug)]
pub struct ReducedAction {
    pub b: AdditivePoly,
    pub rep: Representation,
}

impl ReducedAction {
    /// Substitutes `s = b(t)` back.
    pub fn expand(&self) -> Representation {
        let bu = self.b.to_upoly();
        let entries: Vec<_> = self.rep.entries().iter().map(|(&ij, q)| (ij, q.compose(&bu))).collect();
        let out = Representation::new(self.rep.field(), self.rep.n(), entries).expect("same shape");
        match self.rep.name() {
            Some(name) => out.with_name(name),
            None => out,
        }
    }
}

pub fn reduce_by_kernel(rep: &Representation, b: &AdditivePoly) -> Result<ReducedAction, InvError> {
    if b.is_zero() {
        return Err(OreError::ZeroInput.into());
    }
    let bu = b.to_upoly();
    let mut entries = Vec::new();
    for (&(i, j), q) in rep.entries() {
        let digits = b_adic_membership(q, &bu).map_err(|_| InvError::KernelNotTrivial { i, j })?;
        entries.push(((i, j), UPoly::new(rep.field(), digits)));
    }
    let mut reduced = Representation::new(rep.field(), rep.n(), entries)?;
    if let Some(name) = rep.name() {
        reduced = reduced.with_name(name);
    }
    reduced.validate()?;
    Ok(ReducedAction { b: b.clone(), rep: reduced })
}

/// Generators `f_i / h^{e_i}` of `(A_h)^{G_a}`, stored as numerators and exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedInvariantRing {
    pub numerators: Vec<MPoly>,
    pub exponents: Vec<u32>,
    pub h: MPoly,
    /// Largest degree up to which the oracle invariants were checked as members.
    pub certified_degree: Option<u32>,
}

impl LocalizedInvariantRing {
    /// Nonzero numerators, which generate the same localized ring.
    pub fn generators(&self) -> Vec<MPoly> {
        self.numerators.iter().filter(|f| !f.is_zero()).cloned().collect()
    }

    pub fn contains(&self, f: &MPoly, e_bound: u32, budget: &Budget) -> Result<Option<SubalgebraWitness>, PolyError> {
        subalgebra_member_localized(f, &self.generators(), &self.h, e_bound, budget)
    }

    /// Checks every oracle invariant of degree `<= d` for membership and
    /// records `d` on success. Returns the non-members.
    pub fn certify(&mut self, rep: &Representation, d: u32, e_bound: u32, budget: &Budget) -> Result<Vec<MPoly>, PolyError> {
        let mut missing = Vec::new();
        for f in rep.invariant_space_oracle(d) {
            if self.contains(&f, e_bound, budget)?.is_none() {
                missing.push(f);
            }
        }
        if missing.is_empty() {
            self.certified_degree = Some(d);
        }
        Ok(missing)
    }

    /// The generators as `numerator / h^e` strings.
    pub fn quotients(&self) -> Vec<String> {
        let names = default_names(self.h.nvars());
        let h = self.h.fmt_with(&names);
        self.numerators
            .iter()
            .zip(&self.exponents)
            .map(|(f, &e)| match e {
                0 => f.fmt_with(&names),
                1 => format!("({}) / ({h})", f.fmt_with(&names)),
                _ => format!("({}) / ({h})^{e}", f.fmt_with(&names)),
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .numerators
            .iter()
            .zip(&self.exponents)
            .zip(self.quotients())
            .map(|((f, e), text)| json!({"numerator": f.to_json(), "exponent": e, "text": text}))
            .collect();
        json!({"h": self.h.to_json(), "generators": gens, "certified_degree": self.certified_degree})
    }
}

/// `sum_e c_e (-g)^e h^{E-e}` over `h^E`, for `p = sum_e c_e t^e`, with
/// common factors of `h` removed.
fn substitute_slice(c: &crate::garep::TPoly, g: &MPoly, h: &MPoly) -> (MPoly, u32) {
    let top = c.t_degree().unwrap_or(0);
    let neg_g = g.scale(g.field().neg(g.field().one()));
    let mut num = MPoly::zero(g.field(), g.nvars());
    for (&e, ce) in c.coeffs() {
        num = &num + &(&(ce * &neg_g.pow(e)) * &h.pow(top - e));
    }
    if num.is_zero() {
        return (num, 0);
    }
    let (k, num) = num.strip_factor(h, top);
    (num, top - k)
}

/// `f_i = coact(x_i)` at `t = -g/h`, for a principle pair.
pub fn vde_generators(rep: &Representation, pair: &Pair) -> Result<LocalizedInvariantRing, InvError> {
    if pair.c != AdditivePoly::t(rep.field()) || pair.h.is_zero() {
        return Err(InvError::NotPrinciple { c: pair.c.to_string() });
    }
    let mut numerators = Vec::new();
    let mut exponents = Vec::new();
    for i in 1..=rep.n() {
        let (f, e) = substitute_slice(&rep.coact(&rep.var(i)), &pair.g, &pair.h);
        if !rep.is_invariant(&f) {
            return Err(InvError::NotInvariant(f.to_string()));
        }
        numerators.push(f);
        exponents.push(e);
    }
    Ok(LocalizedInvariantRing { numerators, exponents, h: pair.h.clone(), certified_degree: None })
}

/// Generators for a case C pair. A quasi-principle pair is first pushed
/// through [`reduce_by_kernel`], where it becomes principle.
pub fn case_c_generators(rep: &Representation, pair: &Pair) -> Result<(LocalizedInvariantRing, Option<ReducedAction>), InvError> {
    if pair.c == AdditivePoly::t(rep.field()) {
        return Ok((vde_generators(rep, pair)?, None));
    }
    let reduced = reduce_by_kernel(rep, &pair.c)?;
    let p = Pair::new(&reduced.rep, pair.g.clone(), pair.h.clone(), AdditivePoly::t(rep.field()))?;
    Ok((vde_generators(&reduced.rep, &p)?, Some(reduced)))
}

/// `r(f_1/h^{e_1}, ..., f_n/h^{e_n})` as a numerator over `h^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub numerator: MPoly,
    pub exponent: u32,
}

/// Evaluates an invariant `r` at the generators and checks the identity
/// `numerator = r·h^e`.
pub fn rewrite_invariant(rep: &Representation, ring: &LocalizedInvariantRing, r: &MPoly) -> Result<Rewrite, InvError> {
    if !rep.is_invariant(r) {
        return Err(InvError::NotInvariant(r.to_string()));
    }
    let top = r.total_degree().unwrap_or(0) * ring.exponents.iter().copied().max().unwrap_or(0);
    let field = r.field();
    let nvars = r.nvars();
    let mut num = MPoly::zero(field, nvars);
    for (ex, &c) in r.terms() {
        let mut term = MPoly::constant(field, nvars, c);
        let mut e = 0;
        for (i, &k) in ex.iter().enumerate() {
            if k > 0 {
                term = &term * &ring.numerators[i].pow(k as u32);
                e += k as u32 * ring.exponents[i];
            }
        }
        num = &num + &(&term * &ring.h.pow(top - e));
    }
    let (k, num) = if num.is_zero() { (top, num) } else { num.strip_factor(&ring.h, top) };
    let out = Rewrite { numerator: num, exponent: top - k };
    if out.numerator != r * &ring.h.pow(out.exponent) {
        return Err(InvError::NotInvariant(r.to_string()));
    }
    Ok(out)
}

/// `δ(f) = 0`. For a localized element `f/h^e` with `h` invariant this is
/// the same as checking the numerator.
pub fn verify_invariant(rep: &Representation, f: &MPoly) -> bool {
    rep.is_invariant(f)
}

/// [`verify_invariant`] for `num / h^e`.
pub fn verify_localized(rep: &Representation, num: &MPoly, h: &MPoly) -> bool {
    rep.is_invariant(h) && rep.is_invariant(num)
}

pub(crate) fn budget_error(e: PolyError) -> InvError {
    match e {
        PolyError::BudgetExceeded { steps } => InvError::EliminationBudgetExceeded { steps },
        other => InvError::Poly(other),
    }
}

#[cfg(test)]
mod tests;
