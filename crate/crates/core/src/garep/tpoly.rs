use std::collections::BTreeMap;
use std::fmt;

use crate::field::{FieldSpec, FqElem};
use crate::poly::{default_names, Exps, MPoly};

/// Element of `k[X][t]`, stored by powers of `t`. No zero coefficients are kept.
#[derive(Clone, PartialEq, Eq)]
pub struct TPoly {
    field: FieldSpec,
    nvars: usize,
    coeffs: BTreeMap<u32, MPoly>,
}

impl TPoly {
    pub fn zero(field: &FieldSpec, nvars: usize) -> Self {
        TPoly { field: field.clone(), nvars, coeffs: BTreeMap::new() }
    }

    /// Splits an `(n+1)`-variable polynomial whose last variable is `t`.
    pub fn from_mpoly_with_t(p: &MPoly) -> Self {
        let n = p.nvars() - 1;
        let mut out = TPoly::zero(p.field(), n);
        for (e, &c) in p.terms() {
            let k = e[n] as u32;
            let entry = out.coeffs.entry(k).or_insert_with(|| MPoly::zero(p.field(), n));
            entry.add_term(Exps::from_slice(&e[..n]), c);
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out
    }

    pub fn from_coeffs(field: &FieldSpec, nvars: usize, coeffs: impl IntoIterator<Item = (u32, MPoly)>) -> Self {
        let mut out = TPoly::zero(field, nvars);
        for (e, c) in coeffs {
            out.add_coeff(e, &c);
        }
        out
    }

    /// `(n+1)`-variable form, `t` last.
    pub fn to_mpoly_with_t(&self) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars + 1);
        for (&k, c) in &self.coeffs {
            for (e, &v) in c.terms() {
                let mut ne = e.clone();
                ne.push(k as u16);
                out.add_term(ne, v);
            }
        }
        out
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: u32) -> MPoly {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| MPoly::zero(&self.field, self.nvars))
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, MPoly> {
        &self.coeffs
    }

    pub fn t_degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    fn add_coeff(&mut self, e: u32, c: &MPoly) {
        if c.is_zero() {
            return;
        }
        let s = match self.coeffs.get(&e) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if s.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, s);
        }
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (&e, c) in &other.coeffs {
            out.add_coeff(e, c);
        }
        out
    }

    pub fn sub(&self, other: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (&e, c) in &other.coeffs {
            out.add_coeff(e, &-c);
        }
        out
    }

    pub fn mul(&self, other: &TPoly) -> TPoly {
        let mut out = TPoly::zero(&self.field, self.nvars);
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                out.add_coeff(a + b, &(ca * cb));
            }
        }
        out
    }

    /// Multiplies by `c(t) * h` where `c` is given by `(exponent, scalar)` terms.
    pub fn times_scalar_poly(h: &MPoly, c: &[(u32, FqElem)]) -> TPoly {
        let mut out = TPoly::zero(h.field(), h.nvars());
        for &(e, s) in c {
            out.add_coeff(e, &h.scale(s));
        }
        out
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&e, c)| {
                let body = c.fmt_with(names);
                match e {
                    0 => format!("({body})"),
                    1 => format!("t*({body})"),
                    _ => format!("t^{e}*({body})"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&default_names(self.nvars)))
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
