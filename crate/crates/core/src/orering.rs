//! The Ore ring of additive polynomials.
//!
//! An additive polynomial `sum a_i t^(p^i)` is stored in skew form as the
//! coefficient list `[a_0, a_1, ...]`, i.e. as `sum a_i F^i` where `F` is the
//! Frobenius. Multiplication is composition, governed by
//! `(a F^j)(b F^i) = a b^(p^j) F^(i+j)`.

use std::fmt;

use serde_json::Value;
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, FqElem};
use crate::poly::UPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OreError {
    #[error("polynomial is not additive: exponent {0} is not a power of p")]
    NotAdditive(usize),
    #[error("division by the zero additive polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("zero input")]
    ZeroInput,
    #[error("Bezout certificate failed to verify")]
    CertificateMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct AdditivePoly {
    field: FieldSpec,
    coeffs: Vec<FqElem>,
}

/// Right gcd with Bezout cofactors and quotients:
/// `b = b1∘c1 + b2∘c2`, `c1 = d1∘b`, `c2 = d2∘b`, with `b` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdCert {
    pub b: AdditivePoly,
    pub b1: AdditivePoly,
    pub b2: AdditivePoly,
    pub d1: AdditivePoly,
    pub d2: AdditivePoly,
}

impl AdditivePoly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        AdditivePoly { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &FieldSpec, c: &[i64]) -> Self {
        Self::new(field, c.iter().map(|&x| field.from_int(x)).collect())
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self::new(field, Vec::new())
    }

    /// `c F^i`, i.e. `c t^(p^i)`.
    pub fn term(field: &FieldSpec, c: FqElem, i: usize) -> Self {
        let mut v = vec![FqElem::ZERO; i + 1];
        v[i] = c;
        Self::new(field, v)
    }

    /// The identity `t`.
    pub fn t(field: &FieldSpec) -> Self {
        Self::term(field, FqElem::ONE, 0)
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

    /// Degree in `F`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree in `t`, i.e. `p^degree`.
    pub fn t_degree(&self) -> Option<u64> {
        self.degree().map(|d| (self.field.p() as u64).pow(d as u32))
    }

    pub fn lead(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FqElem::ONE
    }

    /// Left scalar multiple `c·f`.
    pub fn scale(&self, c: FqElem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(c, a)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(self.lead()) {
            Some(u) => self.scale(u),
            None => self.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn eval(&self, x: FqElem) -> FqElem {
        let f = &self.field;
        let mut acc = FqElem::ZERO;
        let mut xp = x;
        for &a in &self.coeffs {
            acc = f.add(acc, f.mul(a, xp));
            xp = f.pow(xp, f.p() as u64);
        }
        acc
    }

    /// The polynomial in `t`.
    pub fn to_upoly(&self) -> UPoly {
        let f = &self.field;
        let p = f.p() as usize;
        let Some(d) = self.degree() else { return UPoly::zero(f) };
        let mut v = vec![FqElem::ZERO; p.pow(d as u32) + 1];
        let mut e = 1usize;
        for &a in &self.coeffs {
            v[e] = a;
            e *= p;
        }
        UPoly::new(f, v)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|&c| self.field.to_json(c)).collect())
    }

    pub fn from_json(field: &FieldSpec, v: &Value) -> Result<Self, FieldError> {
        let items = v.as_array().ok_or_else(|| FieldError::BadElement(format!("expected skew coefficient array, got {v}")))?;
        let mut c = Vec::with_capacity(items.len());
        for it in items {
            c.push(field.from_json(it)?);
        }
        Ok(Self::new(field, c))
    }
}

impl fmt::Debug for AdditivePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_upoly())
    }
}

impl fmt::Display for AdditivePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_upoly())
    }
}

fn is_power_of(mut e: usize, p: usize) -> bool {
    if e == 0 {
        return false;
    }
    while e.is_multiple_of(p) {
        e /= p;
    }
    e == 1
}

/// Skew form of `u`; fails on the first exponent that is not a power of `p`.
pub fn to_additive(u: &UPoly) -> Result<AdditivePoly, OreError> {
    let f = u.field();
    let p = f.p() as usize;
    let mut coeffs = Vec::new();
    for (e, &c) in u.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !is_power_of(e, p) {
            return Err(OreError::NotAdditive(e));
        }
        let (mut i, mut pe) = (0usize, 1usize);
        while pe < e {
            pe *= p;
            i += 1;
        }
        if coeffs.len() <= i {
            coeffs.resize(i + 1, FqElem::ZERO);
        }
        coeffs[i] = c;
    }
    Ok(AdditivePoly::new(f, coeffs))
}

/// `f ∘ g`.
pub fn compose(f: &AdditivePoly, g: &AdditivePoly) -> AdditivePoly {
    let k = &f.field;
    if f.is_zero() || g.is_zero() {
        return AdditivePoly::zero(k);
    }
    let mut out = vec![FqElem::ZERO; f.coeffs.len() + g.coeffs.len() - 1];
    for (j, &a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (i, &b) in g.coeffs.iter().enumerate() {
            let term = k.mul(a, k.frobenius(b, j as i64));
            out[i + j] = k.add(out[i + j], term);
        }
    }
    AdditivePoly::new(k, out)
}

/// `f = q∘g + r` with `deg r < deg g`.
pub fn right_divide(f: &AdditivePoly, g: &AdditivePoly) -> Result<(AdditivePoly, AdditivePoly), OreError> {
    let k = &f.field;
    let m = g.degree().ok_or(OreError::DivisionByZero)?;
    let bm = g.lead();
    let mut r = f.clone();
    let mut q = AdditivePoly::zero(k);
    while let Some(n) = r.degree() {
        if n < m {
            break;
        }
        // (c F^(n-m)) (b_m F^m) = c b_m^(p^(n-m)) F^n
        let c = k.div(r.lead(), k.frobenius(bm, (n - m) as i64));
        let t = AdditivePoly::term(k, c, n - m);
        r = r.sub(&compose(&t, g));
        q = q.add(&t);
    }
    Ok((q, r))
}

/// `f = g∘q + r` with `deg r < deg g`.
pub fn left_divide(f: &AdditivePoly, g: &AdditivePoly) -> Result<(AdditivePoly, AdditivePoly), OreError> {
    let k = &f.field;
    let m = g.degree().ok_or(OreError::DivisionByZero)?;
    let bm = g.lead();
    let mut r = f.clone();
    let mut q = AdditivePoly::zero(k);
    while let Some(n) = r.degree() {
        if n < m {
            break;
        }
        // (b_m F^m) (c F^(n-m)) = b_m c^(p^m) F^n
        let c = k.frobenius(k.div(r.lead(), bm), -(m as i64));
        let t = AdditivePoly::term(k, c, n - m);
        r = r.sub(&compose(g, &t));
        q = q.add(&t);
    }
    Ok((q, r))
}

/// Extended right Euclid. The gcd is monic and every identity in the
/// certificate is checked before returning.
pub fn right_gcd_ext(c1: &AdditivePoly, c2: &AdditivePoly) -> Result<GcdCert, OreError> {
    if c1.is_zero() && c2.is_zero() {
        return Err(OreError::BothZero);
    }
    let k = c1.field.clone();
    let one = AdditivePoly::t(&k);
    let zero = AdditivePoly::zero(&k);
    let (mut r0, mut r1) = (c1.clone(), c2.clone());
    let (mut s0, mut s1) = (one.clone(), zero.clone());
    let (mut u0, mut u1) = (zero.clone(), one);
    while !r1.is_zero() {
        let (q, r) = right_divide(&r0, &r1)?;
        let s2 = s0.sub(&compose(&q, &s1));
        let u2 = u0.sub(&compose(&q, &u1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        u0 = std::mem::replace(&mut u1, u2);
    }
    let unit = k.inv(r0.lead()).expect("nonzero gcd");
    let b = r0.scale(unit);
    let b1 = s0.scale(unit);
    let b2 = u0.scale(unit);
    let (d1, rem1) = right_divide(c1, &b)?;
    let (d2, rem2) = right_divide(c2, &b)?;
    let bezout = compose(&b1, c1).add(&compose(&b2, c2));
    if !rem1.is_zero() || !rem2.is_zero() || bezout != b {
        return Err(OreError::CertificateMismatch);
    }
    Ok(GcdCert { b, b1, b2, d1, d2 })
}

/// Writes `b = F^w ∘ c` with `c` separable (nonzero `t` coefficient).
pub fn separable_split(b: &AdditivePoly) -> Result<(AdditivePoly, usize), OreError> {
    let k = &b.field;
    let w = b.coeffs.iter().position(|c| !c.is_zero()).ok_or(OreError::ZeroInput)?;
    // F^w ∘ (sum c_i F^i) = sum c_i^(p^w) F^(i+w)
    let c: Vec<FqElem> = b.coeffs[w..].iter().map(|&a| k.frobenius(a, -(w as i64))).collect();
    Ok((AdditivePoly::new(k, c), w))
}

/// Roots of `b` in the extension `ext` of the coefficient field, in index order.
pub fn kernel_points(b: &AdditivePoly, ext: &FieldSpec) -> Result<Vec<FqElem>, OreError> {
    if b.is_zero() {
        return Err(OreError::ZeroInput);
    }
    let emb = b.field.embedding_into(ext)?;
    let u = b.to_upoly();
    Ok(ext.elements().filter(|&x| u.eval_in(&emb, x).is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn f3() -> FieldSpec {
        build_field(3, 1, None).unwrap()
    }

    fn up(k: &FieldSpec, c: &[i64]) -> UPoly {
        UPoly::from_ints(k, c)
    }

    fn ap(k: &FieldSpec, c: &[i64]) -> AdditivePoly {
        AdditivePoly::from_ints(k, c)
    }

    #[test]
    fn to_additive_examples() {
        let k = f3();
        // t^9 + 2t^3
        let mut c = vec![0i64; 10];
        c[9] = 1;
        c[3] = 2;
        assert_eq!(to_additive(&up(&k, &c)).unwrap(), ap(&k, &[0, 2, 1]));
        assert_eq!(to_additive(&up(&k, &[0, 1, 1])).unwrap_err(), OreError::NotAdditive(2));
        assert_eq!(to_additive(&up(&k, &[1, 1])).unwrap_err(), OreError::NotAdditive(0));
    }

    #[test]
    fn compose_examples_match_substitution() {
        let k = f3();
        let lhs = compose(&ap(&k, &[0, 2]), &ap(&k, &[0, 1]));
        assert_eq!(lhs, ap(&k, &[0, 0, 2]));
        let f = ap(&k, &[-1, 1]);
        let g = ap(&k, &[0, 1]);
        let fg = compose(&f, &g);
        assert_eq!(fg, ap(&k, &[0, -1, 1]));
        assert_eq!(fg.to_upoly(), f.to_upoly().compose(&g.to_upoly()));
    }

    #[test]
    fn composition_does_not_commute_over_f9() {
        let k = build_field(3, 2, None).unwrap();
        let a = k.generator();
        let f = AdditivePoly::term(&k, a, 0);
        let g = AdditivePoly::term(&k, FqElem::ONE, 1);
        assert_ne!(compose(&f, &g), compose(&g, &f));
    }

    #[test]
    fn right_division_example() {
        let k = f3();
        let (q, r) = right_divide(&ap(&k, &[-1, 1]), &ap(&k, &[0, 1])).unwrap();
        assert_eq!(q, ap(&k, &[1]));
        assert_eq!(r, ap(&k, &[-1]));
        assert_eq!(right_divide(&q, &AdditivePoly::zero(&k)).unwrap_err(), OreError::DivisionByZero);
    }

    #[test]
    fn left_division_example() {
        let k = f3();
        let (q, r) = left_divide(&ap(&k, &[0, 0, 2]), &ap(&k, &[0, 1])).unwrap();
        assert_eq!(q, ap(&k, &[0, 2]));
        assert!(r.is_zero());
    }

    #[test]
    fn left_division_uses_inverse_frobenius() {
        let k = build_field(3, 2, None).unwrap();
        let a = k.generator();
        let f = AdditivePoly::new(&k, vec![FqElem::ZERO, k.add(a, FqElem::ONE), a]);
        let g = AdditivePoly::new(&k, vec![a, k.from_int(2)]);
        let (q, r) = left_divide(&f, &g).unwrap();
        assert_eq!(compose(&g, &q).add(&r), f);
        assert!(r.degree().is_none_or(|d| d < 1));
    }

    #[test]
    fn gcd_examples() {
        let k = f3();
        let c = right_gcd_ext(&ap(&k, &[0, 1]), &ap(&k, &[-1, 1])).unwrap();
        assert_eq!(c.b, ap(&k, &[1]));
        assert_eq!(c.b1, ap(&k, &[1]));
        assert_eq!(c.b2, ap(&k, &[-1]));
        assert_eq!(c.d1, ap(&k, &[0, 1]));
        assert_eq!(c.d2, ap(&k, &[-1, 1]));

        let c = right_gcd_ext(&ap(&k, &[0, 0, 1]), &ap(&k, &[0, 1])).unwrap();
        assert_eq!(c.b, ap(&k, &[0, 1]));
        assert!(c.b1.is_zero());
        assert_eq!(c.b2, ap(&k, &[1]));
        assert_eq!(c.d1, ap(&k, &[0, 1]));
        assert_eq!(c.d2, ap(&k, &[1]));

        let z = AdditivePoly::zero(&k);
        assert_eq!(right_gcd_ext(&z, &z).unwrap_err(), OreError::BothZero);
        let c = right_gcd_ext(&ap(&k, &[0, 2]), &z).unwrap();
        assert_eq!(c.b, ap(&k, &[0, 1]));
        assert_eq!(compose(&c.d1, &c.b), ap(&k, &[0, 2]));
    }

    #[test]
    fn separable_split_example() {
        let k = f3();
        let (c, w) = separable_split(&ap(&k, &[0, -1, 1])).unwrap();
        assert_eq!((c.clone(), w), (ap(&k, &[-1, 1]), 1));
        // F∘c is the p-th power of c
        assert_eq!(compose(&ap(&k, &[0, 1]), &c).to_upoly(), c.to_upoly().pow(3));
        assert_eq!(separable_split(&AdditivePoly::zero(&k)).unwrap_err(), OreError::ZeroInput);
    }

    #[test]
    fn kernel_point_examples() {
        let k = f3();
        let f9 = build_field(3, 2, None).unwrap();
        let pts = kernel_points(&ap(&k, &[-1, 1]), &k).unwrap();
        assert_eq!(pts, vec![k.from_int(0), k.from_int(1), k.from_int(2)]);
        assert_eq!(kernel_points(&ap(&k, &[0, 1]), &f9).unwrap(), vec![FqElem::ZERO]);
        let all = kernel_points(&ap(&k, &[-1, 0, 1]), &f9).unwrap();
        assert_eq!(all.len(), 9);
        for x in all {
            assert_eq!(f9.pow(x, 9), x);
        }
    }
}
