//! Unipotent representations of `G_a` given by their upper-triangular
//! entries `q_{i,j}(t)`, with co-action `x_i -> x_i + sum_{j<i} q_{i,j}(t) x_j`.

mod tpoly;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

pub use tpoly::TPoly;

use crate::field::{build_field, Embedding, FieldError, FieldSpec, FqElem};
use crate::poly::linalg::{kernel, rank, rref, SparseElim, SparseVec};
use crate::poly::{Exps, MPoly, MonomialOrder, UPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaRepError {
    #[error("cocycle identity fails at ({i},{j}): residual {}", .residual.fmt_with(&["t1".to_string(), "t2".to_string()]))]
    CocycleViolation { i: usize, j: usize, residual: MPoly },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("basis change must be lower triangular and invertible")]
    BadBasisChange,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A representation `V` of `G_a` of dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    field: FieldSpec,
    n: usize,
    q: BTreeMap<(usize, usize), UPoly>,
    name: Option<String>,
}

/// The socle filtration `soc_1 ⊂ soc_2 ⊂ ...` of `V*`, as linear forms.
#[derive(Clone, Debug)]
pub struct SocleSeries {
    /// Canonical basis of each `soc_k`, coordinates indexed by variable.
    pub layers: Vec<Vec<Vec<FqElem>>>,
    /// A basis of `V*` listing a basis of `soc_1`, then a complement in `soc_2`, and so on.
    pub adapted: Vec<Vec<FqElem>>,
    /// Number of adapted basis vectors contributed by each layer.
    pub layer_sizes: Vec<usize>,
}

impl SocleSeries {
    pub fn dims(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.len()).collect()
    }

    pub fn length(&self) -> usize {
        self.layers.len()
    }
}

/// Reduced echelon basis with pivots on the highest-index coordinates,
/// listed from lowest pivot to highest.
pub(crate) fn canonical_basis(field: &FieldSpec, vecs: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
    let mut rev: Vec<Vec<FqElem>> = vecs.iter().map(|v| v.iter().rev().copied().collect()).collect();
    rref(field, &mut rev);
    let mut out: Vec<Vec<FqElem>> = rev.into_iter().map(|v| v.into_iter().rev().collect()).collect();
    out.reverse();
    out
}

pub(crate) fn linear_form(field: &FieldSpec, a: &[FqElem]) -> MPoly {
    let n = a.len();
    let mut p = MPoly::zero(field, n);
    for (i, &c) in a.iter().enumerate() {
        let mut e = Exps::from_elem(0, n);
        e[i] = 1;
        p.add_term(e, c);
    }
    p
}

/// Monomials of total degree `d` in `n` variables, descending under `DegColex`.
pub fn monomials(n: usize, d: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    let mut cur = Exps::from_elem(0, n);
    fn rec(i: usize, left: u32, cur: &mut Exps, out: &mut Vec<Exps>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left as u16;
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k as u16;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(cur);
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort_by(|a, b| MonomialOrder::DegColex.cmp(b, a));
    out
}

/// `q(s)` for a polynomial `s` in some ring, by Horner's rule.
pub(crate) fn upoly_at(q: &UPoly, s: &MPoly) -> MPoly {
    let mut acc = MPoly::zero(s.field(), s.nvars());
    for &c in q.coeffs().iter().rev() {
        acc = &(&acc * s) + &MPoly::constant(s.field(), s.nvars(), c);
    }
    acc
}

impl Representation {
    /// Builds a representation from entries `((i, j), q_{i,j})`, 1-based with `j < i <= n`.
    pub fn new(field: &FieldSpec, n: usize, entries: impl IntoIterator<Item = ((usize, usize), UPoly)>) -> Result<Self, GaRepError> {
        let mut q = BTreeMap::new();
        for ((i, j), p) in entries {
            if !(1 <= j && j < i && i <= n) {
                return Err(GaRepError::Schema(format!("entry ({i},{j}) is not strictly lower triangular in dimension {n}")));
            }
            if p.field() != field {
                return Err(GaRepError::Schema(format!("entry ({i},{j}) has coefficients in another field")));
            }
            if !p.is_zero() {
                q.insert((i, j), p);
            }
        }
        Ok(Representation { field: field.clone(), n, q, name: None })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `q_{i,j}` (1-based); zero when absent.
    pub fn entry(&self, i: usize, j: usize) -> UPoly {
        self.q.get(&(i, j)).cloned().unwrap_or_else(|| UPoly::zero(&self.field))
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), UPoly> {
        &self.q
    }

    pub fn is_trivial(&self) -> bool {
        self.q.is_empty()
    }

    pub fn max_t_degree(&self) -> usize {
        self.q.values().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// 1-based indices `j` whose coordinate `x_j` is invariant.
    pub fn invariant_coordinates(&self) -> Vec<usize> {
        (1..=self.n).filter(|&j| !self.q.keys().any(|&(i, _)| i == j)).collect()
    }

    pub fn var(&self, i: usize) -> MPoly {
        MPoly::var(&self.field, self.n, i - 1)
    }

    /// Checks `q(0) = 0` and the cocycle identity
    /// `q_{i,j}(t1+t2) - q_{i,j}(t1) - q_{i,j}(t2) = sum_{j<s<i} q_{i,s}(t1) q_{s,j}(t2)`
    /// in order of increasing `i`, then decreasing `j`.
    pub fn validate(&self) -> Result<(), GaRepError> {
        let f = &self.field;
        let t1 = MPoly::var(f, 2, 0);
        let t2 = MPoly::var(f, 2, 1);
        let sum = &t1 + &t2;
        for i in 2..=self.n {
            for j in (1..i).rev() {
                let q = self.entry(i, j);
                let mut residual = &(&upoly_at(&q, &sum) - &upoly_at(&q, &t1)) - &upoly_at(&q, &t2);
                for s in j + 1..i {
                    let (a, b) = (self.entry(i, s), self.entry(s, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    residual = &residual - &(&upoly_at(&a, &t1) * &upoly_at(&b, &t2));
                }
                if !residual.is_zero() {
                    return Err(GaRepError::CocycleViolation { i, j, residual });
                }
            }
        }
        Ok(())
    }

    /// Images of the coordinates under the co-action, in `k[X, t]` with `t` last.
    pub fn coaction_images(&self) -> Vec<MPoly> {
        let f = &self.field;
        let n = self.n;
        let t = MPoly::var(f, n + 1, n);
        (1..=n)
            .map(|i| {
                let mut img = MPoly::var(f, n + 1, i - 1);
                for j in 1..i {
                    let q = self.entry(i, j);
                    if !q.is_zero() {
                        img = &img + &(&upoly_at(&q, &t) * &MPoly::var(f, n + 1, j - 1));
                    }
                }
                img
            })
            .collect()
    }

    pub fn coact(&self, g: &MPoly) -> TPoly {
        TPoly::from_mpoly_with_t(&g.substitute(&self.coaction_images()))
    }

    /// `coact(g) - g`.
    pub fn delta(&self, g: &MPoly) -> TPoly {
        let c = self.coact(g);
        c.sub(&TPoly::from_coeffs(&self.field, self.n, [(0, g.clone())]))
    }

    pub fn is_invariant(&self, g: &MPoly) -> bool {
        self.delta(g).is_zero()
    }

    /// For each `t`-exponent `e`, the matrix `M_e[i][j] = [t^e] q_{i+1,j+1}`.
    fn linear_delta(&self) -> BTreeMap<usize, Vec<Vec<FqElem>>> {
        let n = self.n;
        let mut out: BTreeMap<usize, Vec<Vec<FqElem>>> = BTreeMap::new();
        for (&(i, j), q) in &self.q {
            for (e, &c) in q.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                out.entry(e).or_insert_with(|| vec![vec![FqElem::ZERO; n]; n])[i - 1][j - 1] = c;
            }
        }
        out
    }

    /// Linear forms `a` (as coefficient vectors) whose `delta` coefficients
    /// all lie in the span annihilated by `annihilator`.
    fn forms_with_delta_in(&self, annihilator: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
        let f = &self.field;
        let n = self.n;
        let mut rows = Vec::new();
        for m in self.linear_delta().values() {
            for phi in annihilator {
                // sum_i a_i (sum_j M[i][j] phi_j) = 0
                let row: Vec<FqElem> = (0..n)
                    .map(|i| (0..n).fold(FqElem::ZERO, |acc, j| f.add(acc, f.mul(m[i][j], phi[j]))))
                    .collect();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        canonical_basis(f, &kernel(f, &rows, n))
    }

    /// Basis of the invariant linear forms, `(V*)^{G_a}`.
    pub fn invariant_covectors(&self) -> Vec<Vec<FqElem>> {
        let identity: Vec<Vec<FqElem>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| if i == j { FqElem::ONE } else { FqElem::ZERO }).collect())
            .collect();
        self.forms_with_delta_in(&identity)
    }

    pub fn socle_series(&self) -> SocleSeries {
        let f = &self.field;
        let n = self.n;
        let mut layers: Vec<Vec<Vec<FqElem>>> = Vec::new();
        let mut adapted: Vec<Vec<FqElem>> = Vec::new();
        let mut layer_sizes = Vec::new();
        let mut prev: Vec<Vec<FqElem>> = Vec::new();
        while prev.len() < n {
            let ann = kernel(f, &prev, n);
            let layer = self.forms_with_delta_in(&ann);
            if layer.len() == prev.len() {
                break;
            }
            let before = adapted.len();
            for v in &layer {
                let mut trial = adapted.clone();
                trial.push(v.clone());
                if rank(f, &trial) == trial.len() {
                    adapted.push(v.clone());
                }
            }
            layer_sizes.push(adapted.len() - before);
            prev = layer.clone();
            layers.push(layer);
        }
        SocleSeries { layers, adapted, layer_sizes }
    }

    /// Fixed vectors of the dual action on `V`: `u_j -> u_j + sum_{i>j} q_{i,j} u_i`.
    pub fn dual_fixed_vectors(&self) -> Vec<Vec<FqElem>> {
        let f = &self.field;
        let n = self.n;
        let mut rows = Vec::new();
        for m in self.linear_delta().values() {
            for i in 0..n {
                let row: Vec<FqElem> = (0..n).map(|j| m[i][j]).collect();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        canonical_basis(f, &kernel(f, &rows, n))
    }

    /// Basis of the homogeneous invariants of degree `d`, in reduced echelon
    /// form with columns ordered descending under `DegColex`.
    pub fn invariants_of_degree(&self, d: u32) -> Vec<MPoly> {
        let f = &self.field;
        let monos = monomials(self.n, d);
        let images = self.coaction_images();
        let mut keys: BTreeMap<(u32, Exps), usize> = BTreeMap::new();
        let mut elim = SparseElim::new(f);
        for m in &monos {
            let mono = MPoly::monomial(f, m.clone(), FqElem::ONE);
            let delta = TPoly::from_mpoly_with_t(&mono.substitute(&images));
            let mut row = SparseVec::new();
            for (&e, c) in delta.coeffs() {
                if e == 0 {
                    // t^0 part of the co-action is the monomial itself
                    let rest = c - &mono;
                    for (ex, &v) in rest.terms() {
                        let next = keys.len();
                        row.insert(*keys.entry((e, ex.clone())).or_insert(next), v);
                    }
                    continue;
                }
                for (ex, &v) in c.terms() {
                    let next = keys.len();
                    row.insert(*keys.entry((e, ex.clone())).or_insert(next), v);
                }
            }
            elim.push(row);
        }
        let mut vecs: Vec<Vec<FqElem>> = elim
            .kernel()
            .iter()
            .map(|k| {
                let mut v = vec![FqElem::ZERO; monos.len()];
                for (&i, &c) in k {
                    v[i] = c;
                }
                v
            })
            .collect();
        rref(f, &mut vecs);
        vecs.iter()
            .map(|v| MPoly::from_terms(f, self.n, v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (monos[i].clone(), c))))
            .collect()
    }

    /// All invariants of degree at most `d`, by degree.
    pub fn invariant_space_oracle(&self, d: u32) -> Vec<MPoly> {
        (0..=d).flat_map(|k| self.invariants_of_degree(k)).collect()
    }

    /// The action of `t0` on a point with coordinates in `emb.target`.
    pub fn act_point(&self, emb: &Embedding, t0: FqElem, a: &[FqElem]) -> Vec<FqElem> {
        let k = &emb.target;
        (1..=self.n)
            .map(|i| {
                let mut v = a[i - 1];
                for j in 1..i {
                    if let Some(q) = self.q.get(&(i, j)) {
                        v = k.add(v, k.mul(q.eval_in(emb, t0), a[j - 1]));
                    }
                }
                v
            })
            .collect()
    }

    /// The same representation in coordinates `y_i = sum_{j<=i} m[i][j] x_j`.
    pub fn change_basis(&self, m: &[Vec<FqElem>]) -> Result<Representation, GaRepError> {
        let f = &self.field;
        let n = self.n;
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(GaRepError::BadBasisChange);
        }
        for i in 0..n {
            if m[i][i].is_zero() || (i + 1..n).any(|j| !m[i][j].is_zero()) {
                return Err(GaRepError::BadBasisChange);
            }
        }
        // Inverse by forward substitution.
        let mut inv = vec![vec![FqElem::ZERO; n]; n];
        for i in 0..n {
            let d = f.inv(m[i][i]).unwrap();
            for c in 0..=i {
                let mut s = if c == i { FqElem::ONE } else { FqElem::ZERO };
                for k in c..i {
                    s = f.sub(s, f.mul(m[i][k], inv[k][c]));
                }
                inv[i][c] = f.mul(s, d);
            }
        }
        // Q' = M Q M^{-1}
        let zero = UPoly::zero(f);
        let mut mq = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for b in 0..n {
                let mut s = zero.clone();
                for a in 0..n {
                    if !m[i][a].is_zero() {
                        s = &s + &self.entry(a + 1, b + 1).scale(m[i][a]);
                    }
                }
                mq[i][b] = s;
            }
        }
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..i {
                let mut s = zero.clone();
                for b in 0..n {
                    if !inv[b][j].is_zero() {
                        s = &s + &mq[i][b].scale(inv[b][j]);
                    }
                }
                entries.push(((i + 1, j + 1), s));
            }
        }
        let mut r = Representation::new(f, n, entries)?;
        r.name = self.name.clone();
        Ok(r)
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let mut obj = Map::new();
        if let Some(name) = &self.name {
            obj.insert("name".into(), json!(name));
        }
        obj.insert("p".into(), json!(f.p()));
        obj.insert("field_degree".into(), json!(f.m()));
        if f.m() > 1 {
            obj.insert("modulus".into(), json!(f.modulus()));
        }
        obj.insert("n".into(), json!(self.n));
        let mut q = Map::new();
        for (&(i, j), p) in &self.q {
            q.insert(format!("{i},{j}"), p.to_json());
        }
        obj.insert("q".into(), Value::Object(q));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Representation, GaRepError> {
        let schema = |s: String| GaRepError::Schema(s);
        let obj = v.as_object().ok_or_else(|| schema("representation must be an object".into()))?;
        for key in obj.keys() {
            if !["name", "p", "field_degree", "modulus", "n", "q"].contains(&key.as_str()) {
                return Err(schema(format!("unknown key {key:?}")));
            }
        }
        let uint = |k: &str| obj.get(k).and_then(Value::as_u64).ok_or_else(|| schema(format!("missing or invalid {k:?}")));
        let p = uint("p")?;
        let m = uint("field_degree")? as u32;
        let n = uint("n")? as usize;
        let modulus: Option<Vec<u64>> = match obj.get("modulus") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(
                a.iter()
                    .map(|x| x.as_u64().ok_or_else(|| schema("modulus entries must be non-negative integers".into())))
                    .collect::<Result<_, _>>()?,
            ),
            Some(_) => return Err(schema("modulus must be an array".into())),
        };
        let field = build_field(p, m, modulus.as_deref())?;
        let q = obj.get("q").and_then(Value::as_object).ok_or_else(|| schema("missing \"q\" object".into()))?;
        let mut entries = Vec::new();
        for (key, coeffs) in q {
            let parts: Vec<&str> = key.split(',').collect();
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| schema(format!("bad index key {key:?}")));
            if parts.len() != 2 {
                return Err(schema(format!("bad index key {key:?}")));
            }
            let (i, j) = (parse(parts[0])?, parse(parts[1])?);
            entries.push(((i, j), UPoly::from_json(&field, coeffs)?));
        }
        let mut r = Representation::new(&field, n, entries)?;
        r.name = obj.get("name").and_then(Value::as_str).map(str::to_string);
        Ok(r)
    }

    pub fn from_json_str(s: &str) -> Result<Representation, GaRepError> {
        let v: Value = serde_json::from_str(s).map_err(|e| GaRepError::Schema(e.to_string()))?;
        Self::from_json(&v)
    }
}

#[cfg(test)]
mod tests;
