use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};
use smallvec::SmallVec;

use super::order::MonomialOrder;
use crate::field::{Embedding, FieldError, FieldSpec, FqElem};

/// Exponent vector.
pub type Exps = SmallVec<[u16; 8]>;

/// Sparse multivariate polynomial in `nvars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Exps, FqElem>,
}

pub fn mono_degree(e: &[u16]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

pub fn mono_divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_mul(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x.checked_add(*y).expect("exponent overflow")).collect()
}

pub fn mono_div(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_lcm(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Default variable names `x1..xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl MPoly {
    pub fn zero(field: &FieldSpec, nvars: usize) -> Self {
        MPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &FieldSpec, nvars: usize, c: FqElem) -> Self {
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(SmallVec::from_elem(0, nvars), c);
        }
        p
    }

    pub fn one(field: &FieldSpec, nvars: usize) -> Self {
        Self::constant(field, nvars, FqElem::ONE)
    }

    /// Variable `i` (0-based).
    pub fn var(field: &FieldSpec, nvars: usize, i: usize) -> Self {
        let mut e: Exps = SmallVec::from_elem(0, nvars);
        e[i] = 1;
        Self::monomial(field, e, FqElem::ONE)
    }

    pub fn monomial(field: &FieldSpec, e: Exps, c: FqElem) -> Self {
        let nvars = e.len();
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms(field: &FieldSpec, nvars: usize, terms: impl IntoIterator<Item = (Exps, FqElem)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    /// Convenience constructor from `(exponents, integer coefficient)` pairs.
    pub fn from_int_terms(field: &FieldSpec, nvars: usize, terms: &[(&[u16], i64)]) -> Self {
        Self::from_terms(field, nvars, terms.iter().map(|(e, c)| (Exps::from_slice(e), field.from_int(*c))))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &FqElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u16]) -> FqElem {
        self.terms.get(e).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn add_term(&mut self, e: Exps, c: FqElem) {
        if c.is_zero() {
            return;
        }
        let f = self.field.clone();
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> FqElem {
        self.coeff(&SmallVec::<[u16; 8]>::from_elem(0, self.nvars))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| mono_degree(e)).max()
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| mono_degree(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Variables that occur, ascending.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.terms.keys().any(|e| e[v] > 0)).collect()
    }

    /// `(exponents, coefficient)` of the largest term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Exps, FqElem)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)).map(|(e, c)| (e, *c))
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Exps, FqElem)> {
        let mut v: Vec<(Exps, FqElem)> = self.terms.iter().map(|(e, c)| (e.clone(), *c)).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn scale(&self, c: FqElem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        MPoly { field: f.clone(), nvars: self.nvars, terms: self.terms.iter().map(|(e, &a)| (e.clone(), f.mul(a, c))).collect() }
    }

    /// Scales so the leading coefficient under `order` is 1.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(self.field.inv(c).unwrap()),
            None => self.clone(),
        }
    }

    pub fn mul_monomial(&self, e: &[u16], c: FqElem) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, &a) in &self.terms {
            out.terms.insert(mono_mul(m, e), f.mul(a, c));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.field, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[FqElem]) -> FqElem {
        let f = &self.field;
        let mut acc = FqElem::ZERO;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = f.mul(t, f.pow(point[i], k as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Evaluates at a point with coordinates in `emb.target`.
    pub fn eval_in(&self, emb: &Embedding, point: &[FqElem]) -> FqElem {
        let f = &emb.target;
        let mut acc = FqElem::ZERO;
        for (e, &c) in &self.terms {
            let mut t = emb.apply(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = f.mul(t, f.pow(point[i], k as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Ring homomorphism `x_i -> images[i]`; all images share one ring.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target_n = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<MPoly>> = images.iter().map(|p| vec![MPoly::one(&self.field, target_n), p.clone()]).collect();
        let mut out = MPoly::zero(&self.field, target_n);
        for (e, &c) in &self.terms {
            let mut t = MPoly::constant(&self.field, target_n, c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = &cache[i][cache[i].len() - 1] * &cache[i][1];
                    cache[i].push(next);
                }
                t = &t * &cache[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Re-indexes variables: variable `i` becomes variable `map[i]` of an
    /// `n`-variable ring.
    pub fn remap(&self, n: usize, map: &[usize]) -> MPoly {
        let mut out = MPoly::zero(&self.field, n);
        for (e, &c) in &self.terms {
            let mut ne: Exps = SmallVec::from_elem(0, n);
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c);
        }
        out
    }

    /// Embeds into a ring with `n >= nvars` variables, keeping indices.
    pub fn extend_vars(&self, n: usize) -> MPoly {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.remap(n, &map)
    }

    /// Restricts to the first `n` variables; panics if a dropped one occurs.
    pub fn truncate_vars(&self, n: usize) -> MPoly {
        let mut out = MPoly::zero(&self.field, n);
        for (e, &c) in &self.terms {
            assert!(e[n..].iter().all(|&k| k == 0), "truncated variable occurs");
            out.terms.insert(Exps::from_slice(&e[..n]), c);
        }
        out
    }

    /// Coefficients with respect to variable `v`: `self = sum_k out[k] v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(&self.field, self.nvars); self.degree_in(v) as usize + 1];
        for (e, &c) in &self.terms {
            let k = e[v] as usize;
            let mut ne = e.clone();
            ne[v] = 0;
            out[k].terms.insert(ne, c);
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// Homogeneous components by total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, &c) in &self.terms {
            out.entry(mono_degree(e)).or_insert_with(|| MPoly::zero(&self.field, self.nvars)).terms.insert(e.clone(), c);
        }
        out
    }

    /// Exact quotient `self / d`, if `d` divides `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        let order = MonomialOrder::Grevlex;
        let (dl, dc) = d.leading_term(&order).map(|(e, c)| (e.clone(), c)).unwrap();
        let dinv = self.field.inv(dc).unwrap();
        let mut r = self.clone();
        let mut q = MPoly::zero(&self.field, self.nvars);
        while let Some((le, lc)) = r.leading_term(&order).map(|(e, c)| (e.clone(), c)) {
            if !mono_divides(&dl, &le) {
                return None;
            }
            let m = mono_div(&le, &dl);
            let c = self.field.mul(lc, dinv);
            r = &r - &d.mul_monomial(&m, c);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Largest `k` with `d^k | self` (capped at `limit`), and the quotient.
    pub fn strip_factor(&self, d: &MPoly, limit: u32) -> (u32, MPoly) {
        let mut k = 0;
        let mut cur = self.clone();
        if cur.is_zero() || d.is_constant() {
            return (0, cur);
        }
        while k < limit {
            match cur.div_exact(d) {
                Some(q) => {
                    cur = q;
                    k += 1;
                }
                None => break,
            }
        }
        (k, cur)
    }

    /// Same polynomial over a larger field.
    pub fn embed(&self, emb: &Embedding) -> MPoly {
        MPoly {
            field: emb.target.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), emb.apply(c))).collect(),
        }
    }

    /// Pulls coefficients back along `emb`; `None` if one is not in the image.
    pub fn pull_back(&self, emb: &Embedding) -> Option<MPoly> {
        let mut terms = BTreeMap::new();
        for (e, &c) in &self.terms {
            terms.insert(e.clone(), emb.pull_back(c)?);
        }
        Some(MPoly { field: emb.source.clone(), nvars: self.nvars, terms })
    }

    /// JSON: terms `[[exponents], coefficient]`, sorted descending under `DegColex`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms(&MonomialOrder::DegColex)
            .into_iter()
            .map(|(e, c)| json!([e.to_vec(), self.field.to_json(c)]))
            .collect();
        json!({ "nvars": self.nvars, "terms": terms })
    }

    pub fn from_json(field: &FieldSpec, v: &Value) -> Result<MPoly, FieldError> {
        let bad = |s: &str| FieldError::BadElement(format!("polynomial: {s}"));
        let nvars = v.get("nvars").and_then(Value::as_u64).ok_or_else(|| bad("missing nvars"))? as usize;
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))?;
        let mut p = MPoly::zero(field, nvars);
        for t in terms {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term must be [exps, coeff]"))?;
            let exps = pair[0].as_array().filter(|a| a.len() == nvars).ok_or_else(|| bad("exponent length"))?;
            let mut e: Exps = SmallVec::new();
            for x in exps {
                e.push(x.as_u64().filter(|&k| k <= u16::MAX as u64).ok_or_else(|| bad("exponent"))? as u16);
            }
            p.add_term(e, field.from_json(&pair[1])?);
        }
        Ok(p)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.sorted_terms(&MonomialOrder::DegColex).into_iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], x)),
                }
            }
            let cs = self.field.fmt_elem(c);
            let term = if factors.is_empty() {
                cs
            } else if cs == "1" {
                factors.join("*")
            } else {
                format!("{}*{}", cs, factors.join("*"))
            };
            if k > 0 {
                out.push_str(" + ");
            }
            out.push_str(&term);
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_names(self.nvars)))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (e, &c) in &small.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), self.field.neg(c));
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        let f = &self.field;
        MPoly { field: f.clone(), nvars: self.nvars, terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect() }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let f = &self.field;
        let mut out = MPoly::zero(f, self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                out.add_term(mono_mul(a, b), f.mul(ca, cb));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn arithmetic_and_display() {
        let k = build_field(5, 1, None).unwrap();
        let x = |i| MPoly::var(&k, 4, i);
        let d = &(&x(0) * &x(3)) - &(&x(1) * &x(2));
        assert_eq!(d.to_string(), "x1*x4 + 4*x2*x3");
        assert!(d.is_homogeneous());
        assert_eq!(d.total_degree(), Some(2));
        let sq = d.pow(2);
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn substitute_and_exact_division() {
        let k = build_field(3, 1, None).unwrap();
        let x = MPoly::var(&k, 2, 0);
        let y = MPoly::var(&k, 2, 1);
        let f = &(&x * &x) - &(&y * &y);
        let g = f.substitute(&[&x + &y, y.clone()]);
        assert_eq!(g, &(&x * &x) + (&(&x * &y).scale(k.from_int(2))));
        let q = f.div_exact(&(&x - &y)).unwrap();
        assert_eq!(q, &x + &y);
        assert!(f.div_exact(&(&x + &MPoly::one(&k, 2))).is_none());
        assert_eq!(x.pow(3).strip_factor(&x, 10).0, 3);
    }

    #[test]
    fn json_round_trip() {
        let k = build_field(3, 2, None).unwrap();
        let a = k.generator();
        let p = MPoly::from_terms(&k, 2, [(Exps::from_slice(&[2, 1]), a), (Exps::from_slice(&[0, 0]), FqElem::ONE)]);
        assert_eq!(MPoly::from_json(&k, &p.to_json()).unwrap(), p);
    }
}
