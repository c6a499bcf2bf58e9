//! Finite fields `F_{p^m}` with table-driven arithmetic.
//!
//! An element of `F_{p^m}` is stored as the integer `sum c_i p^i` where
//! `c_0 + c_1 a + ... + c_{m-1} a^{m-1}` is its residue modulo the defining
//! polynomial. Prime fields use plain modular arithmetic; extensions use
//! log/exp tables built from a primitive element.

use std::fmt;
use std::sync::Arc;

use serde_json::Value;
use thiserror::Error;

/// Largest field order for which extension tables are built.
pub const MAX_TABLE_ORDER: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    BadModulus { expected: u32, got: Vec<u64> },
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0} is too large for table arithmetic")]
    TooLarge(u64),
    #[error("cannot embed F_{from_p}^{from_m} into F_{to_p}^{to_m}")]
    NoEmbedding { from_p: u32, from_m: u32, to_p: u32, to_m: u32 },
    #[error("malformed field element: {0}")]
    BadElement(String),
}

/// An element of some [`FieldSpec`]. Carries no reference to its field.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    /// The base-`p` encoding of the element.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct FieldData {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A validated finite field. Cloning is cheap.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldData>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.m, self.0.modulus)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomial helpers over F_p, used only while building a field.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = pow_mod(b[db] as u64, p as u64 - 2, p as u64) as u32;
    while r.len() > db {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let c = (lead as u64 * inv_lead as u64 % p as u64) as u32;
            let shift = r.len() - 1 - db;
            for (k, &bk) in b.iter().enumerate() {
                let sub = (c as u64 * bk as u64 % p as u64) as u32;
                r[shift + k] = (r[shift + k] + p - sub) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn digits(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(m as usize);
    for _ in 0..m {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = (f.len() - 1) as u32;
    // Trial division by every monic polynomial of degree 1..=m/2.
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d);
        for idx in 0..count {
            let mut g = digits(idx as u32, p, d);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Builds `F_{p^m}`. With `modulus = None` the first irreducible monic
/// polynomial of degree `m` in the base-`p` enumeration of its lower
/// coefficients is used. A supplied modulus is little-endian and may omit
/// the leading 1.
pub fn build_field(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) || p > u32::MAX as u64 {
        return Err(FieldError::NotPrime(p));
    }
    if m == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = (p as u128).pow(m);
    if m > 1 && q > MAX_TABLE_ORDER as u128 {
        return Err(FieldError::TooLarge(q.min(u64::MAX as u128) as u64));
    }
    let p32 = p as u32;
    let modulus: Vec<u32> = match modulus {
        Some(c) => {
            let mut v: Vec<u64> = c.to_vec();
            if v.len() == m as usize {
                v.push(1);
            }
            if v.len() != m as usize + 1 || v[m as usize] % p != 1 {
                return Err(FieldError::BadModulus { expected: m, got: c.to_vec() });
            }
            let v: Vec<u32> = v.iter().map(|&x| (x % p) as u32).collect();
            if !is_irreducible(&v, p32) {
                return Err(FieldError::ReducibleModulus { p: p32 });
            }
            v
        }
        None => {
            if m == 1 {
                vec![0, 1]
            } else {
                let mut found = None;
                for idx in 0..p.pow(m) {
                    let mut f = digits(idx as u32, p32, m);
                    f.push(1);
                    if is_irreducible(&f, p32) {
                        found = Some(f);
                        break;
                    }
                }
                found.expect("an irreducible polynomial of every degree exists")
            }
        }
    };
    let q = q as u64;
    let pow_p: Vec<u32> = (0..m).map(|i| p32.pow(i)).collect();
    let mut data = FieldData { p: p32, m, q: q as u32, modulus, pow_p, exp: Vec::new(), log: Vec::new() };
    if m == 1 && q > u32::MAX as u64 {
        return Err(FieldError::TooLarge(q));
    }
    if m > 1 {
        build_tables(&mut data);
    }
    Ok(FieldSpec(Arc::new(data)))
}

fn slow_mul(a: u32, b: u32, d: &FieldData) -> u32 {
    let (p, m) = (d.p, d.m);
    let da = digits(a, p, m);
    let db = digits(b, p, m);
    let mut prod = vec![0u32; (2 * m - 1) as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, &d.modulus, p);
    r.resize(m as usize, 0);
    undigits(&r, p)
}

fn build_tables(d: &mut FieldData) {
    let order = d.q as u64 - 1;
    let factors = prime_factors(order);
    let slow_pow = |g: u32, mut e: u64, d: &FieldData| {
        let mut acc = 1u32;
        let mut base = g;
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(acc, base, d);
            }
            base = slow_mul(base, base, d);
            e >>= 1;
        }
        acc
    };
    let gen = (2..d.q)
        .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r, d) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; order as usize];
    let mut log = vec![0u32; d.q as usize];
    let mut x = 1u32;
    for (k, slot) in exp.iter_mut().enumerate() {
        *slot = x;
        log[x as usize] = k as u32;
        x = slow_mul(x, gen, d);
    }
    d.exp = exp;
    d.log = log;
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    /// Field order `p^m`.
    pub fn q(&self) -> u64 {
        self.0.q as u64
    }

    /// Monic defining polynomial, little-endian, length `m + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The generator `a` of the extension (the class of the variable).
    pub fn generator(&self) -> FqElem {
        if self.0.m == 1 {
            FqElem::ONE
        } else {
            FqElem(self.0.p)
        }
    }

    /// Element with the given little-endian coordinates; extra entries must be absent.
    pub fn from_coeffs(&self, c: &[u64]) -> Result<FqElem, FieldError> {
        if c.len() > self.0.m as usize {
            return Err(FieldError::BadElement(format!("{c:?} has more than {} coordinates", self.0.m)));
        }
        let p = self.0.p as u64;
        let d: Vec<u32> = c.iter().map(|&x| (x % p) as u32).collect();
        Ok(FqElem(undigits(&d, self.0.p)))
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        digits(x.0, self.0.p, self.0.m)
    }

    pub fn elem(&self, index: u64) -> FqElem {
        debug_assert!(index < self.q());
        FqElem(index as u32)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let d = &*self.0;
        if d.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            let p = d.p as u64;
            FqElem(if s >= p { (s - p) as u32 } else { s as u32 })
        } else if d.p == 2 {
            FqElem(a.0 ^ b.0)
        } else {
            let mut out = 0u32;
            let (mut x, mut y) = (a.0, b.0);
            for &pp in &d.pow_p {
                let c = (x % d.p + y % d.p) % d.p;
                out += c * pp;
                x /= d.p;
                y /= d.p;
            }
            FqElem(out)
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        let d = &*self.0;
        if a.0 == 0 {
            return a;
        }
        if d.m == 1 {
            FqElem(d.p - a.0)
        } else if d.p == 2 {
            a
        } else {
            let mut out = 0u32;
            let mut x = a.0;
            for &pp in &d.pow_p {
                let c = (d.p - x % d.p) % d.p;
                out += c * pp;
                x /= d.p;
            }
            FqElem(out)
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let d = &*self.0;
        if a.0 == 0 || b.0 == 0 {
            return FqElem::ZERO;
        }
        if d.m == 1 {
            FqElem((a.0 as u64 * b.0 as u64 % d.p as u64) as u32)
        } else {
            let order = d.q - 1;
            let mut k = d.log[a.0 as usize] + d.log[b.0 as usize];
            if k >= order {
                k -= order;
            }
            FqElem(d.exp[k as usize])
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        let d = &*self.0;
        if a.0 == 0 {
            return None;
        }
        if d.m == 1 {
            Some(FqElem(pow_mod(a.0 as u64, d.p as u64 - 2, d.p as u64) as u32))
        } else {
            let order = d.q - 1;
            let k = (order - d.log[a.0 as usize]) % order;
            Some(FqElem(d.exp[k as usize]))
        }
    }

    /// `a / b`; panics when `b` is zero.
    pub fn div(&self, a: FqElem, b: FqElem) -> FqElem {
        self.mul(a, self.inv(b).expect("division by zero in finite field"))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        let d = &*self.0;
        if e == 0 {
            return FqElem::ONE;
        }
        if a.0 == 0 {
            return FqElem::ZERO;
        }
        if d.m == 1 {
            FqElem(pow_mod(a.0 as u64, e, d.p as u64) as u32)
        } else {
            let order = (d.q - 1) as u64;
            let k = (d.log[a.0 as usize] as u64 * (e % order)) % order;
            FqElem(d.exp[k as usize])
        }
    }

    /// `x^(p^j)`. Negative `j` applies the inverse automorphism, which is
    /// the `(m-1)`-fold Frobenius per step.
    pub fn frobenius(&self, x: FqElem, j: i64) -> FqElem {
        let m = self.0.m as i64;
        if m == 1 || x.0 == 0 {
            return x;
        }
        let k = j.rem_euclid(m) as u32;
        let mut y = x;
        for _ in 0..k {
            y = self.pow(y, self.0.p as u64);
        }
        y
    }

    pub fn is_one(&self, x: FqElem) -> bool {
        x.0 == 1
    }

    /// Whether `x` lies in the prime subfield.
    pub fn in_prime_field(&self, x: FqElem) -> bool {
        x.0 < self.0.p
    }

    pub fn to_json(&self, x: FqElem) -> Value {
        if self.0.m == 1 {
            Value::from(x.0)
        } else {
            Value::from(self.coeffs(x))
        }
    }

    pub fn from_json(&self, v: &Value) -> Result<FqElem, FieldError> {
        match v {
            Value::Number(n) => {
                let i = n.as_i64().ok_or_else(|| FieldError::BadElement(n.to_string()))?;
                Ok(self.from_int(i))
            }
            Value::Array(items) => {
                let mut c = Vec::with_capacity(items.len());
                for it in items {
                    let i = it.as_i64().ok_or_else(|| FieldError::BadElement(it.to_string()))?;
                    c.push(i.rem_euclid(self.0.p as i64) as u64);
                }
                self.from_coeffs(&c)
            }
            other => Err(FieldError::BadElement(other.to_string())),
        }
    }

    /// Human-readable form: an integer in prime fields, `(c0+c1a+...)` otherwise.
    pub fn fmt_elem(&self, x: FqElem) -> String {
        if self.0.m == 1 {
            return x.0.to_string();
        }
        let c = self.coeffs(x);
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            parts.push(match i {
                0 => ci.to_string(),
                1 if ci == 1 => "a".to_string(),
                1 => format!("{ci}a"),
                _ if ci == 1 => format!("a^{i}"),
                _ => format!("{ci}a^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else if parts.len() == 1 && c[0] != 0 {
            parts.remove(0)
        } else {
            format!("({})", parts.join("+"))
        }
    }

    /// Embedding of `self` into `target`, sending the generator to the
    /// smallest-index root of the defining polynomial.
    pub fn embedding_into(&self, target: &FieldSpec) -> Result<Embedding, FieldError> {
        let err = || FieldError::NoEmbedding { from_p: self.p(), from_m: self.m(), to_p: target.p(), to_m: target.m() };
        if self.p() != target.p() || !target.m().is_multiple_of(self.m()) {
            return Err(err());
        }
        let eval = |root: FqElem, coeffs: &[u32]| {
            coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| target.add(target.mul(acc, root), target.from_int(c as i64)))
        };
        let root = if self.m() == 1 {
            FqElem::ONE
        } else {
            target.elements().find(|&r| eval(r, self.modulus()).is_zero()).ok_or_else(err)?
        };
        let map: Vec<FqElem> = self.elements().map(|x| eval(root, &self.coeffs(x))).collect();
        let mut preimage = vec![u32::MAX; target.q() as usize];
        for (i, y) in map.iter().enumerate() {
            preimage[y.0 as usize] = i as u32;
        }
        Ok(Embedding { source: self.clone(), target: target.clone(), map, preimage })
    }
}

/// A field embedding `source -> target`.
#[derive(Clone)]
pub struct Embedding {
    pub source: FieldSpec,
    pub target: FieldSpec,
    map: Vec<FqElem>,
    preimage: Vec<u32>,
}

impl Embedding {
    pub fn apply(&self, x: FqElem) -> FqElem {
        self.map[x.0 as usize]
    }

    /// Preimage of `y`, if `y` lies in the image.
    pub fn pull_back(&self, y: FqElem) -> Option<FqElem> {
        match self.preimage[y.0 as usize] {
            u32::MAX => None,
            i => Some(FqElem(i)),
        }
    }
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}", self.source, self.target)
    }
}
