use std::collections::BTreeMap;

use super::groebner::{buchberger, Budget};
use super::linalg::{SparseElim, SparseVec};
use super::mpoly::{Exps, MPoly};
use super::order::MonomialOrder;
use super::upoly::UPoly;
use super::PolyError;
use crate::field::FqElem;

/// Digits `a_i` with `q = sum a_i b^i`, if `q ∈ k[b]`.
pub fn b_adic_membership(q: &UPoly, b: &UPoly) -> Result<Vec<FqElem>, PolyError> {
    if b.is_constant() {
        return Err(PolyError::ConstantBase);
    }
    let mut digits = Vec::new();
    let mut cur = q.clone();
    while !cur.is_zero() {
        let (quo, rem) = cur.div_rem(b).expect("nonconstant divisor");
        if !rem.is_constant() {
            return Err(PolyError::NotMember);
        }
        digits.push(rem.coeff(0));
        cur = quo;
    }
    while digits.last().is_some_and(|d| d.is_zero()) {
        digits.pop();
    }
    Ok(digits)
}

/// Certificate that `h^e f = expression(gens)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraWitness {
    pub exponent: u32,
    /// Polynomial in one variable per generator.
    pub expression: MPoly,
}

/// Decides whether `h^e f ∈ k[gens]` for some `e <= e_bound`, by reducing
/// modulo the ideal `(T_i - gens_i)` under an order eliminating the
/// original variables. The smallest such `e` is reported.
pub fn subalgebra_member_localized(
    f: &MPoly,
    gens: &[MPoly],
    h: &MPoly,
    e_bound: u32,
    budget: &Budget,
) -> Result<Option<SubalgebraWitness>, PolyError> {
    if h.is_zero() {
        return Err(PolyError::ZeroDenominator);
    }
    let field = f.field().clone();
    let n = f.nvars();
    let k = gens.len();
    if k == 0 {
        return Ok(f.is_constant().then(|| SubalgebraWitness { exponent: 0, expression: MPoly::constant(&field, 0, f.constant_term()) }));
    }
    let total = n + k;
    let ideal: Vec<MPoly> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| &MPoly::var(&field, total, n + i) - &g.extend_vars(total))
        .collect();
    let order = MonomialOrder::elimination(n, MonomialOrder::Grevlex);
    let gb = buchberger(&ideal, &order, budget)?;
    let mut cur = f.extend_vars(total);
    let hh = h.extend_vars(total);
    for e in 0..=e_bound {
        let nf = gb.reduce(&cur);
        if nf.terms().all(|(ex, _)| ex[..n].iter().all(|&x| x == 0)) {
            let map: Vec<usize> = (0..total).map(|v| v.saturating_sub(n)).collect();
            return Ok(Some(SubalgebraWitness { exponent: e, expression: nf.remap(k, &map) }));
        }
        cur = &cur * &hh;
    }
    Ok(None)
}

/// Same question for homogeneous inputs, answered degree by degree with
/// linear algebra on products of generators. Exact when `f`, `h` and every
/// generator are homogeneous of positive degree.
pub fn subalgebra_member_graded(f: &MPoly, gens: &[MPoly], h: &MPoly, e_bound: u32) -> Result<Option<SubalgebraWitness>, PolyError> {
    if h.is_zero() {
        return Err(PolyError::ZeroDenominator);
    }
    let field = f.field().clone();
    let k = gens.len();
    let gen_deg: Vec<u32> = gens.iter().map(|g| g.total_degree().unwrap_or(0)).collect();
    let homogeneous = f.is_homogeneous() && h.is_homogeneous() && gens.iter().zip(&gen_deg).all(|(g, &d)| g.is_homogeneous() && d > 0);
    if !homogeneous {
        return Err(PolyError::NotMember);
    }
    if f.is_zero() {
        return Ok(Some(SubalgebraWitness { exponent: 0, expression: MPoly::zero(&field, k) }));
    }
    let fd = f.total_degree().unwrap();
    let hd = h.total_degree().unwrap_or(0);
    let mut cur = f.clone();
    for e in 0..=e_bound {
        let target_deg = fd + e * hd;
        // Monomials in the generators of weighted degree target_deg.
        let mut monos: Vec<Exps> = Vec::new();
        let mut stack: Vec<(usize, Exps, u32)> = vec![(0, Exps::from_elem(0, k), 0)];
        while let Some((i, ex, d)) = stack.pop() {
            if i == k {
                if d == target_deg {
                    monos.push(ex);
                }
                continue;
            }
            let mut ex2 = ex.clone();
            let mut d2 = d;
            loop {
                stack.push((i + 1, ex2.clone(), d2));
                d2 += gen_deg[i];
                if d2 > target_deg {
                    break;
                }
                ex2[i] += 1;
            }
        }
        monos.sort();
        let mut index: BTreeMap<Exps, usize> = BTreeMap::new();
        let mut to_vec = |p: &MPoly| -> SparseVec {
            let mut v = SparseVec::new();
            for (e, &c) in p.terms() {
                let next = index.len();
                let id = *index.entry(e.clone()).or_insert(next);
                v.insert(id, c);
            }
            v
        };
        let mut elim = SparseElim::new(&field);
        let mut cache: Vec<Vec<MPoly>> = gens.iter().map(|g| vec![MPoly::one(&field, f.nvars()), g.clone()]).collect();
        for m in &monos {
            let mut prod = MPoly::one(&field, f.nvars());
            for (i, &x) in m.iter().enumerate() {
                while cache[i].len() <= x as usize {
                    let next = &cache[i][cache[i].len() - 1] * &cache[i][1];
                    cache[i].push(next);
                }
                if x > 0 {
                    prod = &prod * &cache[i][x as usize];
                }
            }
            elim.push(to_vec(&prod));
        }
        let target = to_vec(&cur);
        if let Some(combo) = elim.solve(&target) {
            let expr = MPoly::from_terms(&field, k, combo.iter().map(|(&i, &c)| (monos[i].clone(), c)));
            return Ok(Some(SubalgebraWitness { exponent: e, expression: expr }));
        }
        cur = &cur * h;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    #[test]
    fn b_adic_examples() {
        let k = build_field(3, 1, None).unwrap();
        let b = UPoly::from_ints(&k, &[0, 0, 0, 1]);
        let q = UPoly::from_ints(&k, &[0, 0, 0, 2, 0, 0, 1]);
        assert_eq!(b_adic_membership(&q, &b).unwrap(), vec![k.from_int(0), k.from_int(2), k.from_int(1)]);
        let t4 = UPoly::from_ints(&k, &[0, 0, 0, 0, 1]);
        assert_eq!(b_adic_membership(&t4, &b).unwrap_err(), PolyError::NotMember);
        assert_eq!(b_adic_membership(&t4, &UPoly::from_ints(&k, &[2])).unwrap_err(), PolyError::ConstantBase);
    }

    #[test]
    fn localized_membership_examples() {
        let k = build_field(5, 1, None).unwrap();
        let x = |i| MPoly::var(&k, 4, i);
        let det = &(&x(0) * &x(3)) - &(&x(1) * &x(2));
        // x4 is not invariant, so no power of x1 brings it into k[x1, x2, det].
        let gens = vec![x(0), x(1), det.clone()];
        assert!(subalgebra_member_localized(&x(3), &gens, &x(0), 3, &Budget::unlimited()).unwrap().is_none());
        assert!(subalgebra_member_graded(&x(3), &gens, &x(0), 3).unwrap().is_none());
        // With x3 available, x1 * x4 = det + x2 * x3.
        let gens = vec![x(0), x(1), x(2), det.clone()];
        let w = subalgebra_member_localized(&x(3), &gens, &x(0), 3, &Budget::unlimited()).unwrap().unwrap();
        assert_eq!(w.exponent, 1);
        assert_eq!(w.expression.substitute(&gens), &x(0) * &x(3));
        let g = subalgebra_member_graded(&x(3), &gens, &x(0), 3).unwrap().unwrap();
        assert_eq!(g.exponent, 1);
        assert_eq!(g.expression.substitute(&gens), &x(0) * &x(3));

        let gens2 = vec![x(0), x(1)];
        assert!(subalgebra_member_localized(&x(2), &gens2, &x(0), 4, &Budget::unlimited()).unwrap().is_none());
        assert!(subalgebra_member_graded(&x(2), &gens2, &x(0), 4).unwrap().is_none());
        let zero = MPoly::zero(&k, 4);
        assert_eq!(subalgebra_member_localized(&x(2), &gens2, &zero, 1, &Budget::unlimited()).unwrap_err(), PolyError::ZeroDenominator);
    }
}
