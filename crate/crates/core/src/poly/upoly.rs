use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::Value;

use crate::field::{Embedding, FieldError, FieldSpec, FqElem};

/// Dense univariate polynomial in `t`, coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    field: FieldSpec,
    coeffs: Vec<FqElem>,
}

impl UPoly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &FieldSpec, c: &[i64]) -> Self {
        Self::new(field, c.iter().map(|&x| field.from_int(x)).collect())
    }

    pub fn zero(field: &FieldSpec) -> Self {
        UPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &FieldSpec, c: FqElem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn monomial(field: &FieldSpec, c: FqElem, e: usize) -> Self {
        let mut v = vec![FqElem::ZERO; e + 1];
        v[e] = c;
        Self::new(field, v)
    }

    /// The polynomial `t`.
    pub fn t(field: &FieldSpec) -> Self {
        Self::monomial(field, FqElem::ONE, 1)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: FqElem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(self.lead()) {
            Some(u) => self.scale(u),
            None => self.clone(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = UPoly::constant(&self.field, FqElem::ONE);
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

    /// Euclidean division; `None` when `b` is zero.
    pub fn div_rem(&self, b: &UPoly) -> Option<(UPoly, UPoly)> {
        let f = &self.field;
        let db = b.degree()?;
        let inv = f.inv(b.lead())?;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Some((UPoly::zero(f), self.clone()));
        }
        let mut q = vec![FqElem::ZERO; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + db], inv);
            if c.is_zero() {
                continue;
            }
            q[k] = c;
            for (i, &bi) in b.coeffs.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, bi));
            }
        }
        r.truncate(db);
        Some((UPoly::new(f, q), UPoly::new(f, r)))
    }

    /// `self(inner(t))`.
    pub fn compose(&self, inner: &UPoly) -> UPoly {
        let mut acc = UPoly::zero(&self.field);
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &UPoly::constant(&self.field, c);
        }
        acc
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates at a point of an extension field reached via `emb`.
    pub fn eval_in(&self, emb: &Embedding, x: FqElem) -> FqElem {
        let f = &emb.target;
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| f.add(f.mul(acc, x), emb.apply(c)))
    }

    /// Monic gcd; the gcd of two zeros is zero.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|&c| self.field.to_json(c)).collect())
    }

    pub fn from_json(field: &FieldSpec, v: &Value) -> Result<UPoly, FieldError> {
        let items = v.as_array().ok_or_else(|| FieldError::BadElement(format!("expected coefficient array, got {v}")))?;
        let mut c = Vec::with_capacity(items.len());
        for it in items {
            c.push(field.from_json(it)?);
        }
        Ok(UPoly::new(field, c))
    }

    pub fn fmt_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = self.field.fmt_elem(c);
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            parts.push(match (e, cs.as_str()) {
                (0, _) => cs,
                (_, "1") => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_in("t"))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_in("t"))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new(f, (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        let f = &self.field;
        UPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero(f);
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UPoly::new(f, out)
    }
}
