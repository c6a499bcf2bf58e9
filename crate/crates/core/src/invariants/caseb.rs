use serde_json::{json, Value};

use super::InvError;
use crate::field::{build_field, Embedding, FieldSpec, FqElem};
use crate::garep::{monomials, Representation};
use crate::orering::{kernel_points, separable_split, AdditivePoly};
use crate::pairs::{additive_part, kernel_acts_trivially, Pair};
use crate::poly::{b_adic_membership, default_names, subalgebra_member_graded, subalgebra_member_localized, Budget, MPoly, PolyError};

/// `num / h^exp` in `k[X]_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: MPoly,
    pub exp: u32,
}

impl Frac {
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn to_json(&self) -> Value {
        json!({"numerator": self.num.to_json(), "exponent": self.exp})
    }
}

/// Arithmetic in `k[X]_h`, keeping fractions with the least power of `h`.
#[derive(Clone, Debug)]
struct Local {
    h: MPoly,
}

impl Local {
    fn zero(&self) -> Frac {
        Frac { num: MPoly::zero(self.h.field(), self.h.nvars()), exp: 0 }
    }

    fn poly(&self, p: MPoly) -> Frac {
        Frac { num: p, exp: 0 }
    }

    fn normalize(&self, f: Frac) -> Frac {
        if f.num.is_zero() {
            return self.zero();
        }
        let (k, num) = f.num.strip_factor(&self.h, f.exp);
        Frac { num, exp: f.exp - k }
    }

    fn add(&self, a: &Frac, b: &Frac) -> Frac {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let e = a.exp.max(b.exp);
        let num = &(&a.num * &self.h.pow(e - a.exp)) + &(&b.num * &self.h.pow(e - b.exp));
        self.normalize(Frac { num, exp: e })
    }

    fn mul(&self, a: &Frac, b: &Frac) -> Frac {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        self.normalize(Frac { num: &a.num * &b.num, exp: a.exp + b.exp })
    }

    fn scale(&self, a: &Frac, c: FqElem) -> Frac {
        if c.is_zero() {
            return self.zero();
        }
        Frac { num: a.num.scale(c), exp: a.exp }
    }

    /// `sum_l a_l (-g/h)^l`.
    fn at_slice(&self, digits: &[FqElem], g: &MPoly) -> Frac {
        let k = g.field();
        let top = digits.len().saturating_sub(1) as u32;
        let neg_g = g.scale(k.neg(k.one()));
        let mut num = MPoly::zero(k, g.nvars());
        for (l, &a) in digits.iter().enumerate() {
            if !a.is_zero() {
                num = &num + &(&neg_g.pow(l as u32) * &self.h.pow(top - l as u32)).scale(a);
            }
        }
        self.normalize(Frac { num, exp: top })
    }

    fn poly_mul(&self, a: &[Frac], b: &[Frac]) -> Vec<Frac> {
        let mut out = vec![self.zero(); (a.len() + b.len()).saturating_sub(1)];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = self.add(&out[i + j], &self.mul(x, y));
                }
            }
        }
        out
    }
}

/// `k(X)[s] / (b(s) + g/h)`, elements stored by their coefficients in `1, s, ..., s^{D-1}`.
#[derive(Clone, Debug)]
struct Etale {
    local: Local,
    dim: usize,
    /// `s^D = sum c s^e + konst`.
    low: Vec<(usize, FqElem)>,
    konst: Frac,
}

impl Etale {
    fn new(local: Local, b: &AdditivePoly, g: &MPoly) -> Etale {
        let k = g.field();
        let p = k.p() as usize;
        let top = b.degree().expect("nonzero b");
        let lead_inv = k.inv(b.lead()).unwrap();
        let low = (0..top)
            .filter(|&i| !b.coeff(i).is_zero())
            .map(|i| (p.pow(i as u32), k.neg(k.mul(b.coeff(i), lead_inv))))
            .collect();
        let konst = local.normalize(Frac { num: g.scale(k.neg(lead_inv)), exp: 1 });
        Etale { local, dim: p.pow(top as u32), low, konst }
    }

    fn reduce(&self, mut raw: Vec<Frac>) -> Vec<Frac> {
        let d = self.dim;
        for m in (d..raw.len()).rev() {
            let c = std::mem::replace(&mut raw[m], self.local.zero());
            if c.is_zero() {
                continue;
            }
            for &(e, coef) in &self.low {
                let i = m - d + e;
                raw[i] = self.local.add(&raw[i], &self.local.scale(&c, coef));
            }
            raw[m - d] = self.local.add(&raw[m - d], &self.local.mul(&c, &self.konst));
        }
        raw.resize(d, self.local.zero());
        raw
    }

    fn mul(&self, a: &[Frac], b: &[Frac]) -> Vec<Frac> {
        self.reduce(self.local.poly_mul(a, b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipMethod {
    /// Elimination Gröbner basis.
    Localized,
    /// Degree-by-degree linear algebra, used when the basis exceeds its budget.
    Graded,
}

impl MembershipMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MembershipMethod::Localized => "localized",
            MembershipMethod::Graded => "graded",
        }
    }
}

/// Oracle invariants of one degree checked against the generated ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeVerdict {
    pub degree: u32,
    pub oracle_dim: usize,
    pub members: usize,
    pub gaps: Vec<MPoly>,
    pub methods: Vec<MembershipMethod>,
}

impl DegreeVerdict {
    pub fn complete(&self) -> bool {
        self.gaps.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CasebConfig {
    pub e_bound: u32,
    pub monomial_cap: usize,
    pub budget: Budget,
}

impl Default for CasebConfig {
    fn default() -> Self {
        CasebConfig { e_bound: 4, monomial_cap: 2000, budget: Budget::steps(200_000) }
    }
}

#[derive(Clone, Debug)]
pub struct CasebData {
    pub b: AdditivePoly,
    pub g: MPoly,
    pub h: MPoly,
    /// `h·b(s) + g` by powers of `s`.
    pub relation: Vec<(usize, MPoly)>,
    pub working_field: FieldSpec,
    pub kernel: Vec<FqElem>,
    /// `f_1, ..., f_{n-1}`.
    pub f_parts: Vec<Frac>,
    /// `x_n + sum_j s_{n,j}(-g/h) x_j`.
    pub fn_part: Frac,
    /// The additive parts `d_j` of the last row.
    pub u_parts: Vec<(usize, AdditivePoly)>,
    /// `r_κ` as polynomials in `s` over the working field, before reduction.
    pub orbit_raw: Vec<Vec<Frac>>,
    /// `e_1, ..., e_D`.
    pub symmetric: Vec<Frac>,
    pub symmetric_invariant: Vec<bool>,
    pub completeness: Vec<DegreeVerdict>,
    local_ext: Local,
}

impl CasebData {
    /// `P(s + κ)` for a raw polynomial in `s`.
    pub fn shift_raw(&self, raw: &[Frac], kappa: FqElem) -> Vec<Frac> {
        let l = &self.local_ext;
        let mut out: Vec<Frac> = Vec::new();
        for c in raw.iter().rev() {
            let mut next = vec![l.zero(); out.len() + 1];
            for (i, x) in out.iter().enumerate() {
                next[i + 1] = l.add(&next[i + 1], x);
                next[i] = l.add(&next[i], &l.scale(x, kappa));
            }
            next[0] = l.add(&next[0], c);
            out = next;
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// The generators whose localized ring is tested: the nonzero
    /// numerators of the `f_i` and `e_j`, plus `h`.
    pub fn generators(&self) -> Vec<MPoly> {
        let mut out: Vec<MPoly> = Vec::new();
        for f in self.f_parts.iter().chain(&self.symmetric).map(|f| &f.num).chain(std::iter::once(&self.h)) {
            if !f.is_zero() && !f.is_constant() && !out.contains(f) {
                out.push(f.clone());
            }
        }
        out
    }

    pub fn complete_through(&self) -> Option<u32> {
        self.completeness.iter().take_while(|v| v.complete()).last().map(|v| v.degree)
    }

    pub fn to_json(&self) -> Value {
        let names = default_names(self.g.nvars());
        let text = |f: &Frac| match f.exp {
            0 => f.num.fmt_with(&names),
            e => format!("({}) / ({})^{e}", f.num.fmt_with(&names), self.h.fmt_with(&names)),
        };
        json!({
            "b": self.b.to_json(),
            "g": self.g.to_json(),
            "h": self.h.to_json(),
            "working_field_order": self.working_field.q(),
            "kernel": self.kernel.iter().map(|&k| self.working_field.to_json(k)).collect::<Vec<_>>(),
            "f_parts": self.f_parts.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "fn_part": self.fn_part.to_json(),
            "symmetric": self.symmetric.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "symmetric_text": self.symmetric.iter().map(text).collect::<Vec<_>>(),
            "symmetric_invariant": self.symmetric_invariant,
            "completeness": self.completeness.iter().map(|v| json!({
                "degree": v.degree,
                "oracle_dim": v.oracle_dim,
                "members": v.members,
                "gaps": v.gaps.iter().map(|f| f.fmt_with(&names)).collect::<Vec<_>>(),
                "methods": v.methods.iter().map(|m| m.as_str()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Smallest extension of the coefficient field, up to `2^20` elements,
/// containing every root of `b`.
fn splitting_field(b: &AdditivePoly) -> Result<(FieldSpec, Vec<FqElem>), InvError> {
    let k = b.field();
    let expected = b.t_degree().unwrap_or(1) as usize;
    let mut found = 0;
    for r in 1.. {
        let m = k.m() * r;
        if (k.p() as f64).powi(m as i32) > (1u64 << 20) as f64 {
            break;
        }
        let ext = if r == 1 { k.clone() } else { build_field(k.p() as u64, m, None)? };
        let pts = kernel_points(b, &ext)?;
        if pts.len() == expected {
            return Ok((ext, pts));
        }
        found = found.max(pts.len());
    }
    Err(InvError::KernelNotSplit { found, expected })
}

fn digits_in_b(q: &crate::poly::UPoly, b: &AdditivePoly) -> Option<Vec<FqElem>> {
    b_adic_membership(q, &b.to_upoly()).ok()
}

fn embed_frac(f: &Frac, emb: &Embedding) -> Frac {
    Frac { num: f.num.embed(emb), exp: f.exp }
}

/// Local invariants on `h ≠ 0` for a case B pair `(g, h, b)`: the symmetric
/// functions of the orbit `r_κ = coact(x_n)` at `t = s + κ`, `κ ∈ ker b`,
/// where `s` is a root of `b(s) + g/h`. Membership of the oracle invariants
/// of each degree up to `degree_bound` is measured and reported.
pub fn caseb_local_invariants(rep: &Representation, pair: &Pair, degree_bound: u32, cfg: &CasebConfig) -> Result<CasebData, InvError> {
    let k = rep.field().clone();
    let n = rep.n();
    let b = pair.c.clone();
    if pair.is_trivial() {
        return Err(InvError::NotCaseB("the pair is trivial".into()));
    }
    let (_, w) = separable_split(&b)?;
    if w > 0 {
        return Err(InvError::InseparableB { w });
    }
    if kernel_acts_trivially(rep, &b) {
        return Err(InvError::NotCaseB(format!("every q_{{i,j}} lies in k[{}]", b.to_upoly())));
    }
    let local = Local { h: pair.h.clone() };
    let mut f_parts = Vec::new();
    for i in 1..n {
        let mut f = local.poly(rep.var(i));
        for j in 1..i {
            let q = rep.entry(i, j);
            if q.is_zero() {
                continue;
            }
            let digits = digits_in_b(&q, &b).ok_or_else(|| InvError::NotCaseB(format!("q_{{{i},{j}}} is not in k[b(t)]")))?;
            f = local.add(&f, &local.mul(&local.at_slice(&digits, &pair.g), &local.poly(rep.var(j))));
        }
        f_parts.push(f);
    }
    let mut fn_part = local.poly(rep.var(n));
    let mut u_parts = Vec::new();
    for j in 1..n {
        let q = rep.entry(n, j);
        if q.is_zero() {
            continue;
        }
        let (digits, d) = match digits_in_b(&q, &b) {
            Some(digits) => (digits, None),
            None => {
                let (add, rest) = additive_part(&q);
                let digits = digits_in_b(&rest, &b).ok_or_else(|| InvError::NotCaseB(format!("q_{{{n},{j}}} is not s(b(t)) + d(t)")))?;
                (digits, Some(add))
            }
        };
        fn_part = local.add(&fn_part, &local.mul(&local.at_slice(&digits, &pair.g), &local.poly(rep.var(j))));
        if let Some(d) = d {
            u_parts.push((j, d));
        }
    }

    let (ext, kernel) = splitting_field(&b)?;
    let emb = k.embedding_into(&ext)?;
    let local_ext = Local { h: pair.h.embed(&emb) };
    let alg = Etale::new(local_ext.clone(), &b, &pair.g.embed(&emb));
    let fn_ext = embed_frac(&fn_part, &emb);
    let p = k.p() as usize;
    let len = u_parts.iter().filter_map(|(_, d)| d.t_degree()).max().unwrap_or(0) as usize + 1;
    let mut orbit_raw = Vec::new();
    for &kappa in &kernel {
        let mut raw = vec![local_ext.zero(); len];
        raw[0] = fn_ext.clone();
        for (j, d) in &u_parts {
            let xj = local_ext.poly(rep.var(*j).embed(&emb));
            let at_kappa = d.to_upoly().eval_in(&emb, kappa);
            raw[0] = local_ext.add(&raw[0], &local_ext.scale(&xj, at_kappa));
            for (i, &c) in d.coeffs().iter().enumerate() {
                let e = p.pow(i as u32);
                raw[e] = local_ext.add(&raw[e], &local_ext.scale(&xj, emb.apply(c)));
            }
        }
        orbit_raw.push(raw);
    }

    // Elementary symmetric functions, by expanding prod (1 + r_κ z).
    let one = vec![local_ext.poly(MPoly::one(&ext, n))];
    let mut elem: Vec<Vec<Frac>> = vec![alg.reduce(one)];
    for raw in &orbit_raw {
        let r = alg.reduce(raw.clone());
        elem.push(vec![local_ext.zero(); alg.dim]);
        for j in (1..elem.len()).rev() {
            let prod = alg.mul(&elem[j - 1], &r);
            elem[j] = elem[j].iter().zip(&prod).map(|(a, b)| local_ext.add(a, b)).collect();
        }
    }
    let mut symmetric = Vec::new();
    for (j, e) in elem.into_iter().enumerate().skip(1) {
        if e[1..].iter().any(|c| !c.is_zero()) {
            return Err(InvError::NotCaseB(format!("e_{j} still depends on s")));
        }
        let num = e[0].num.pull_back(&emb).ok_or_else(|| InvError::NotCaseB(format!("e_{j} is not defined over the base field")))?;
        symmetric.push(Frac { num, exp: e[0].exp });
    }
    let symmetric_invariant = symmetric.iter().map(|f| rep.is_invariant(&f.num)).collect();
    let relation = {
        let mut rel: Vec<(usize, MPoly)> = vec![(0, pair.g.clone())];
        for (i, &c) in b.coeffs().iter().enumerate() {
            if !c.is_zero() {
                rel.push((p.pow(i as u32), pair.h.scale(c)));
            }
        }
        rel
    };
    let mut data = CasebData {
        b,
        g: pair.g.clone(),
        h: pair.h.clone(),
        relation,
        working_field: ext,
        kernel,
        f_parts,
        fn_part,
        u_parts,
        orbit_raw,
        symmetric,
        symmetric_invariant,
        completeness: Vec::new(),
        local_ext,
    };
    data.completeness = measure_completeness(rep, &data, degree_bound, cfg)?;
    Ok(data)
}

fn measure_completeness(rep: &Representation, data: &CasebData, degree_bound: u32, cfg: &CasebConfig) -> Result<Vec<DegreeVerdict>, InvError> {
    let gens = data.generators();
    let mut out = Vec::new();
    for d in 0..=degree_bound {
        let count = monomials(rep.n(), d).len();
        if count > cfg.monomial_cap {
            return Err(InvError::DegreeBudgetExceeded { degree: d, monomials: count, cap: cfg.monomial_cap });
        }
        let oracle = rep.invariants_of_degree(d);
        let mut v = DegreeVerdict { degree: d, oracle_dim: oracle.len(), members: 0, gaps: Vec::new(), methods: Vec::new() };
        for f in oracle {
            let (found, method) = match subalgebra_member_localized(&f, &gens, &data.h, cfg.e_bound, &cfg.budget) {
                Ok(w) => (w.is_some(), MembershipMethod::Localized),
                Err(PolyError::BudgetExceeded { .. }) => (subalgebra_member_graded(&f, &gens, &data.h, cfg.e_bound)?.is_some(), MembershipMethod::Graded),
                Err(e) => return Err(e.into()),
            };
            if !v.methods.contains(&method) {
                v.methods.push(method);
            }
            if found {
                v.members += 1;
            } else {
                v.gaps.push(f);
            }
        }
        out.push(v);
    }
    Ok(out)
}
