//! Multivariate gcd by recursive primitive remainder sequences.

use super::mpoly::MPoly;
use super::order::MonomialOrder;

fn highest_var(p: &MPoly) -> Option<usize> {
    p.support_vars().last().copied()
}

/// Content of `p` as a polynomial in `v`: gcd of its coefficients.
fn content(p: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero(p.field(), p.nvars());
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = mpoly_gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let db = b.degree_in(v);
    let bc = b.coeffs_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v)[dr as usize].clone();
        let mut shift = super::mpoly::Exps::from_elem(0u16, a.nvars());
        shift[v] = dr - db;
        let t = (&lr * b).mul_monomial(&shift, crate::field::FqElem::ONE);
        r = &(&lb * &r) - &t;
    }
    r
}

fn normalize(p: &MPoly) -> MPoly {
    p.monic(&MonomialOrder::DegColex)
}

/// Monic gcd under `DegColex`. `gcd(0, 0) = 0`.
pub fn mpoly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    let field = a.field().clone();
    let n = a.nvars();
    let one = MPoly::one(&field, n);
    let v = match (highest_var(a), highest_var(b)) {
        (None, _) | (_, None) => return one,
        (Some(x), Some(y)) => x.max(y),
    };
    if a.degree_in(v) == 0 {
        return mpoly_gcd(a, &content(b, v));
    }
    if b.degree_in(v) == 0 {
        return mpoly_gcd(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = mpoly_gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            return normalize(&c);
        }
        p = q;
        let cr = content(&r, v);
        q = r.div_exact(&cr).expect("content divides");
    }
    let cq = content(&q, v);
    let pq = q.div_exact(&cq).expect("content divides");
    normalize(&(&c * &pq))
}

/// Divides numerator and denominator by their gcd; the denominator is made
/// monic and the numerator absorbs the scalar.
pub fn reduce_fraction(num: &MPoly, den: &MPoly) -> (MPoly, MPoly) {
    let g = mpoly_gcd(num, den);
    let (n, d) = if g.is_zero() || g.is_constant() {
        (num.clone(), den.clone())
    } else {
        (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
    };
    match d.leading_term(&MonomialOrder::DegColex) {
        Some((_, c)) => {
            let inv = d.field().inv(c).unwrap();
            (n.scale(inv), d.scale(inv))
        }
        None => (n, d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn gcd_of_products() {
        let k = build_field(5, 1, None).unwrap();
        let x = |i| MPoly::var(&k, 3, i);
        let one = MPoly::one(&k, 3);
        let a = &x(0) + &x(1);
        let b = &(&x(0) * &x(2)) - &one;
        let c = &x(1) + &x(2);
        let f = &(&a * &b) * &c;
        let g = &(&a * &c) * &(&x(0) - &x(2));
        let d = mpoly_gcd(&f, &g);
        assert_eq!(d, normalize(&(&a * &c)));
        assert!(mpoly_gcd(&x(0), &x(1)).is_constant());
    }

    #[test]
    fn fraction_reduction() {
        let k = build_field(3, 1, None).unwrap();
        let x = |i| MPoly::var(&k, 2, i);
        let num = &(&x(0) * &x(0)) * &x(1);
        let den = &x(0) * &x(1).scale(k.from_int(2));
        let (n, d) = reduce_fraction(&num, &den);
        assert_eq!(d, MPoly::one(&k, 2));
        assert_eq!(n, x(0).scale(k.from_int(2)));
    }
}
