//! Pair search, one homogeneous degree at a time.
//!
//! The co-action preserves degree, so every homogeneous component of a
//! `c`-pair is again a `c`-pair. In degree `d` write `g = sum a_m m` over the
//! monomials `m`; `δ(g)` is then linear in `a`. A pair needs every
//! coefficient of `t^e` with `e` not a power of `p` to vanish (a linear
//! condition) and the remaining rows, one per `t^{p^k}`, to span at most a
//! line (a determinantal condition).

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use super::{Pair, PairError};
use crate::field::{FieldSpec, FqElem};
use crate::garep::{monomials, Representation};
use crate::orering::AdditivePoly;
use crate::poly::linalg::{kernel, rank, rref};
use crate::poly::{buchberger, Budget, Exps, MPoly, MonomialOrder, PolyError};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Largest number of monomials of one degree to search over.
    pub monomial_cap: usize,
    /// Largest number of directions `c` to try in the enumeration fallback.
    pub enumeration_cap: u64,
    /// Budget for the Gröbner-basis emptiness check.
    pub budget: Budget,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { monomial_cap: 400, enumeration_cap: 20_000, budget: Budget::steps(200_000) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    /// Nothing survives the linear stage modulo invariants.
    NoCandidates,
    /// Every candidate has the same `c`.
    FixedC,
    /// Every candidate has the same `h`.
    FixedH,
    /// Directions `c` over the base field were tried one by one.
    Enumerated { directions: u64, certified_empty: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSearch {
    pub degree: u32,
    pub monomials: usize,
    /// Dimension of the linear-stage solutions modulo invariants.
    pub candidates: usize,
    pub method: SearchMethod,
    /// Whether every pair of this degree over the algebraic closure lies in
    /// the span of the returned families.
    pub exhaustive: bool,
    pub found: usize,
}

impl DegreeSearch {
    pub fn to_json(&self) -> Value {
        let method = match &self.method {
            SearchMethod::NoCandidates => json!("no-candidates"),
            SearchMethod::FixedC => json!("fixed-c"),
            SearchMethod::FixedH => json!("fixed-h"),
            SearchMethod::Enumerated { directions, certified_empty } => {
                json!({"enumerated": directions, "certified_empty": certified_empty})
            }
        };
        json!({
            "degree": self.degree,
            "monomials": self.monomials,
            "candidates": self.candidates,
            "method": method,
            "exhaustive": self.exhaustive,
            "found": self.found,
        })
    }
}

#[derive(Clone, Debug)]
pub struct PairSearch {
    pub pairs: Vec<Pair>,
    pub degrees: Vec<DegreeSearch>,
}

impl PairSearch {
    pub fn exhaustive(&self) -> bool {
        self.degrees.iter().all(|d| d.exhaustive)
    }
}

/// `log_p(e)` when `e` is a power of `p`.
fn log_p(e: u32, p: u32) -> Option<usize> {
    let mut k = 0;
    let mut x = 1u32;
    while x < e {
        x = x.checked_mul(p)?;
        k += 1;
    }
    (x == e).then_some(k)
}

fn dot_rows(field: &FieldSpec, coeffs: &[FqElem], rows: &[&Vec<FqElem>], len: usize) -> Vec<FqElem> {
    let mut out = vec![FqElem::ZERO; len];
    for (&a, row) in coeffs.iter().zip(rows) {
        if a.is_zero() {
            continue;
        }
        for (o, &r) in out.iter_mut().zip(row.iter()) {
            *o = field.add(*o, field.mul(a, r));
        }
    }
    out
}

struct DegreeData {
    field: FieldSpec,
    n: usize,
    monos: Vec<Exps>,
    /// Skew indices `k` of the `t^{p^k}` rows that occur.
    pp: Vec<usize>,
    /// `rows[k][i]`: the `t^{p^{pp[k]}}` coefficient of `δ(monos[i])`, dense.
    rows: Vec<Vec<Vec<FqElem>>>,
    /// Complement of the invariants inside the linear-stage solutions, with
    /// zeros in the invariants' pivot columns.
    candidates: Vec<Vec<FqElem>>,
}

impl DegreeData {
    fn build(rep: &Representation, d: u32, cfg: &SearchConfig) -> Result<DegreeData, PairError> {
        let field = rep.field().clone();
        let n = rep.n();
        let p = field.p();
        let monos = monomials(n, d);
        let nm = monos.len();
        if nm > cfg.monomial_cap {
            return Err(PairError::SearchSpaceTooLarge { degree: d, monomials: nm, cap: cfg.monomial_cap });
        }
        let idx: BTreeMap<Exps, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        // per exponent e: per monomial i: dense row of length nm
        let mut by_e: BTreeMap<u32, Vec<Vec<FqElem>>> = BTreeMap::new();
        for (i, m) in monos.iter().enumerate() {
            let delta = rep.delta(&MPoly::monomial(&field, m.clone(), FqElem::ONE));
            for (&e, c) in delta.coeffs() {
                let block = by_e.entry(e).or_insert_with(|| vec![vec![FqElem::ZERO; nm]; nm]);
                for (ex, &v) in c.terms() {
                    block[i][idx[ex]] = v;
                }
            }
        }
        // Constraint rows over the unknowns a_i: one per (e, column).
        let constraints = |pick: &dyn Fn(u32) -> bool| -> Vec<Vec<FqElem>> {
            let mut out = Vec::new();
            for (&e, block) in &by_e {
                if !pick(e) {
                    continue;
                }
                for j in 0..nm {
                    let row: Vec<FqElem> = (0..nm).map(|i| block[i][j]).collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        out.push(row);
                    }
                }
            }
            out
        };
        let linear = kernel(&field, &constraints(&|e| log_p(e, p).is_none()), nm);
        let invariants = kernel(&field, &constraints(&|_| true), nm);
        let inv_pivots: Vec<usize> = invariants.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
        let mut residues: Vec<Vec<FqElem>> = linear
            .into_iter()
            .map(|mut v| {
                for (row, &pc) in invariants.iter().zip(&inv_pivots) {
                    let c = v[pc];
                    if !c.is_zero() {
                        for (x, &r) in v.iter_mut().zip(row) {
                            *x = field.sub(*x, field.mul(c, r));
                        }
                    }
                }
                v
            })
            .collect();
        rref(&field, &mut residues);
        let mut pp = Vec::new();
        let mut rows = Vec::new();
        for (&e, block) in &by_e {
            if let Some(k) = log_p(e, p) {
                pp.push(k);
                rows.push(block.clone());
            }
        }
        Ok(DegreeData { field, n, monos, pp, rows, candidates: residues })
    }

    /// `B(a)`: the `t^{p^k}` rows of `δ(sum a_i m_i)`.
    fn b_matrix(&self, a: &[FqElem]) -> Vec<Vec<FqElem>> {
        let nm = self.monos.len();
        self.rows
            .iter()
            .map(|block| {
                let refs: Vec<&Vec<FqElem>> = block.iter().collect();
                dot_rows(&self.field, a, &refs, nm)
            })
            .collect()
    }

    fn poly(&self, v: &[FqElem]) -> MPoly {
        MPoly::from_terms(&self.field, self.n, v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (self.monos[i].clone(), c)))
    }

    fn additive(&self, c: &[FqElem]) -> AdditivePoly {
        let top = self.pp.iter().copied().max().unwrap_or(0);
        let mut coeffs = vec![FqElem::ZERO; top + 1];
        for (&k, &v) in self.pp.iter().zip(c) {
            coeffs[k] = v;
        }
        AdditivePoly::new(&self.field, coeffs)
    }

    /// Pair from candidate `a` whose rows are `c ⊗ h`.
    fn pair(&self, rep: &Representation, a: &[FqElem], c: &[FqElem]) -> Result<Pair, PairError> {
        let b = self.b_matrix(a);
        let k0 = c.iter().position(|x| !x.is_zero()).expect("nonzero direction");
        let inv = self.field.inv(c[k0]).unwrap();
        let h: Vec<FqElem> = b[k0].iter().map(|&x| self.field.mul(x, inv)).collect();
        Pair::new(rep, self.poly(a), self.poly(&h), self.additive(c))
    }
}

/// Normalizes so the highest nonzero entry is one.
fn projective_normalize(field: &FieldSpec, v: &[FqElem]) -> Vec<FqElem> {
    let last = v.iter().rposition(|x| !x.is_zero()).expect("nonzero vector");
    let inv = field.inv(v[last]).unwrap();
    v.iter().map(|&x| field.mul(x, inv)).collect()
}

/// All points of `P^{k-1}(F_q)`, each with highest nonzero coordinate one.
fn projective_points(field: &FieldSpec, k: usize) -> Vec<Vec<FqElem>> {
    let q = field.q();
    let mut out = Vec::new();
    for last in 0..k {
        let free = last as u32;
        for code in 0..q.pow(free) {
            let mut v = vec![FqElem::ZERO; k];
            let mut c = code;
            for x in v.iter_mut().take(last) {
                *x = field.elem(c % q);
                c /= q;
            }
            v[last] = FqElem::ONE;
            out.push(v);
        }
    }
    out
}

/// Decides by Gröbner bases whether any nonzero combination of the
/// candidates has rank-one rows over the algebraic closure. `Ok(true)` means
/// there is none.
fn certify_empty(data: &DegreeData, budget: &Budget) -> Result<bool, PolyError> {
    let f = &data.field;
    let r = data.candidates.len();
    let mats: Vec<Vec<Vec<FqElem>>> = data.candidates.iter().map(|a| data.b_matrix(a)).collect();
    let mut all_rows: Vec<Vec<FqElem>> = mats.iter().flatten().cloned().collect();
    let pivots = rref(f, &mut all_rows);
    let kk = data.pp.len();
    // entry (k, pivot column) as a linear form in the r unknowns
    let entry = |k: usize, col: usize| -> MPoly {
        let mut e = MPoly::zero(f, r);
        for (q, m) in mats.iter().enumerate() {
            let v = m[k][col];
            if !v.is_zero() {
                e = &e + &MPoly::var(f, r, q).scale(v);
            }
        }
        e
    };
    let grid: Vec<Vec<MPoly>> = (0..kk).map(|k| pivots.iter().map(|&c| entry(k, c)).collect()).collect();
    let mut minors = Vec::new();
    for k1 in 0..kk {
        for k2 in k1 + 1..kk {
            for a in 0..pivots.len() {
                for b in a + 1..pivots.len() {
                    let m = &(&grid[k1][a] * &grid[k2][b]) - &(&grid[k1][b] * &grid[k2][a]);
                    if !m.is_zero() {
                        minors.push(m);
                    }
                }
            }
        }
    }
    for s in 0..r {
        let mut gens = minors.clone();
        for j in 0..s {
            gens.push(MPoly::var(f, r, j));
        }
        gens.push(&MPoly::var(f, r, s) - &MPoly::one(f, r));
        if !buchberger(&gens, &MonomialOrder::Grevlex, budget)?.is_unit() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pairs whose `g` is homogeneous of degree `d`, as bases of families
/// sharing one `c`.
pub fn search_degree(rep: &Representation, d: u32, cfg: &SearchConfig) -> Result<(Vec<Pair>, DegreeSearch), PairError> {
    let data = DegreeData::build(rep, d, cfg)?;
    let f = data.field.clone();
    let r = data.candidates.len();
    let mut report = DegreeSearch { degree: d, monomials: data.monos.len(), candidates: r, method: SearchMethod::NoCandidates, exhaustive: true, found: 0 };
    if r == 0 {
        return Ok((Vec::new(), report));
    }
    let mats: Vec<Vec<Vec<FqElem>>> = data.candidates.iter().map(|a| data.b_matrix(a)).collect();
    let kk = data.pp.len();
    let nm = data.monos.len();
    // columns of every B side by side: rank one means one shared c
    let wide: Vec<Vec<FqElem>> = (0..kk).map(|k| mats.iter().flat_map(|m| m[k].iter().copied()).collect()).collect();
    let mut pairs = Vec::new();
    if rank(&f, &wide) == 1 {
        let col = (0..wide[0].len()).find(|&j| wide.iter().any(|row| !row[j].is_zero())).unwrap();
        let c = projective_normalize(&f, &wide.iter().map(|row| row[col]).collect::<Vec<_>>());
        for a in &data.candidates {
            pairs.push(data.pair(rep, a, &c)?);
        }
        report.method = SearchMethod::FixedC;
    } else if rank(&f, &mats.iter().flatten().cloned().collect::<Vec<_>>()) == 1 {
        for (a, m) in data.candidates.iter().zip(&mats) {
            let j = (0..nm).find(|&j| m.iter().any(|row| !row[j].is_zero())).unwrap();
            let c = projective_normalize(&f, &m.iter().map(|row| row[j]).collect::<Vec<_>>());
            pairs.push(data.pair(rep, a, &c)?);
        }
        report.method = SearchMethod::FixedH;
    } else {
        let count: u64 = (0..kk as u32).map(|i| f.q().pow(i)).sum();
        let mut tried = 0;
        if count <= cfg.enumeration_cap {
            for c in projective_points(&f, kk) {
                tried += 1;
                let k0 = c.iter().position(|x| !x.is_zero()).unwrap();
                let inv = f.inv(c[k0]).unwrap();
                // sum_q lambda_q (B_q[k] - (c_k / c_k0) B_q[k0]) = 0 for every k
                let mut rows = Vec::new();
                for k in (0..kk).filter(|&k| k != k0) {
                    let ratio = f.mul(c[k], inv);
                    for j in 0..nm {
                        let row: Vec<FqElem> = mats.iter().map(|m| f.sub(m[k][j], f.mul(ratio, m[k0][j]))).collect();
                        if row.iter().any(|x| !x.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
                let lambdas = kernel(&f, &rows, r);
                if lambdas.is_empty() {
                    continue;
                }
                let cand_refs: Vec<&Vec<FqElem>> = data.candidates.iter().collect();
                let mut family: Vec<Vec<FqElem>> = lambdas.iter().map(|l| dot_rows(&f, l, &cand_refs, nm)).collect();
                rref(&f, &mut family);
                for a in &family {
                    pairs.push(data.pair(rep, a, &c)?);
                }
            }
        }
        let certified_empty = pairs.is_empty() && r <= 10 && certify_empty(&data, &cfg.budget).unwrap_or(false);
        report.method = SearchMethod::Enumerated { directions: tried, certified_empty };
        report.exhaustive = certified_empty;
    }
    pairs.sort_by(|a, b| {
        let la = a.g.leading_term(&MonomialOrder::DegColex).map(|(e, _)| e.clone());
        let lb = b.g.leading_term(&MonomialOrder::DegColex).map(|(e, _)| e.clone());
        let ord = |x: &Option<Exps>, y: &Option<Exps>| match (x, y) {
            (Some(x), Some(y)) => MonomialOrder::DegColex.cmp(x, y),
            _ => x.cmp(y),
        };
        ord(&la, &lb).then_with(|| a.c.coeffs().iter().map(|x| x.index()).cmp(b.c.coeffs().iter().map(|x| x.index())))
    });
    let mut seen = BTreeSet::new();
    pairs.retain(|p| seen.insert(format!("{:?}", p)));
    report.found = pairs.len();
    Ok((pairs, report))
}

/// Linear pairs, up to scaling and translation by invariant linear forms.
pub fn find_linear_pairs(rep: &Representation, cfg: &SearchConfig) -> Result<PairSearch, PairError> {
    find_pairs_in(rep, 1..=1, cfg)
}

/// Pairs with `g` of degree at most `max_degree`, searched per homogeneous degree.
pub fn find_pairs_bounded(rep: &Representation, max_degree: u32, cfg: &SearchConfig) -> Result<PairSearch, PairError> {
    find_pairs_in(rep, 1..=max_degree, cfg)
}

fn find_pairs_in(rep: &Representation, degrees: std::ops::RangeInclusive<u32>, cfg: &SearchConfig) -> Result<PairSearch, PairError> {
    let mut out = PairSearch { pairs: Vec::new(), degrees: Vec::new() };
    for d in degrees {
        let (pairs, report) = search_degree(rep, d, cfg)?;
        out.pairs.extend(pairs);
        out.degrees.push(report);
    }
    Ok(out)
}
