use super::*;
use crate::fixtures::fixture;

fn ints(k: &FieldSpec, v: &[i64]) -> Vec<FqElem> {
    v.iter().map(|&x| k.from_int(x)).collect()
}

#[test]
fn shipped_fixtures_validate() {
    for r in crate::fixtures::all() {
        r.validate().unwrap_or_else(|e| panic!("{}: {e}", r.name().unwrap()));
    }
}

#[test]
fn mutated_eg1_is_rejected_at_the_mutated_entry() {
    let r = fixture("eg1").unwrap();
    let k = r.field().clone();
    let mut entries: Vec<_> = r.entries().clone().into_iter().collect();
    for e in entries.iter_mut() {
        if e.0 == (3, 1) {
            e.1 = UPoly::from_ints(&k, &[0, 1, 1]);
        }
    }
    let bad = Representation::new(&k, 3, entries).unwrap();
    match bad.validate() {
        Err(GaRepError::CocycleViolation { i, j, residual }) => {
            assert_eq!((i, j), (3, 1));
            assert!(!residual.is_zero());
        }
        other => panic!("expected violation, got {other:?}"),
    }
}

#[test]
fn coaction_examples() {
    let det4 = fixture("det4").unwrap();
    let x = |i| det4.var(i);
    let c = det4.coact(&(&x(3) * &x(2)));
    assert_eq!(c.coeff(0), &x(2) * &x(3));
    assert_eq!(c.coeff(1), &x(1) * &x(2));
    assert_eq!(c.t_degree(), Some(1));
    assert_eq!(det4.delta(&x(1)), TPoly::zero(det4.field(), 4));

    let eg1 = fixture("eg1").unwrap();
    let x = |i| eg1.var(i);
    let d = eg1.delta(&x(3));
    assert_eq!(d.coeff(1), x(1));
    assert_eq!(d.coeff(3), x(2));
    assert_eq!(d.coeffs().len(), 2);
    // delta(x3^3) = (t x1 + t^3 x2)^3 = t^3 x1^3 + t^9 x2^3
    let d3 = eg1.delta(&x(3).pow(3));
    assert_eq!(d3.coeff(3), x(1).pow(3));
    assert_eq!(d3.coeff(9), x(2).pow(3));
    assert_eq!(d3.coeffs().len(), 2);
    assert!(eg1.is_invariant(&(&x(1) * &x(2))));
}

#[test]
fn covectors_and_socle() {
    let eg1 = fixture("eg1").unwrap();
    let k = eg1.field().clone();
    assert_eq!(eg1.invariant_covectors(), vec![ints(&k, &[1, 0, 0]), ints(&k, &[0, 1, 0])]);
    assert_eq!(eg1.socle_series().dims(), vec![2, 3]);

    let e89 = fixture("e89").unwrap();
    assert_eq!(e89.invariant_covectors().len(), 2);
    let s = e89.socle_series();
    assert_eq!(s.dims(), vec![2, 4, 5]);
    assert_eq!(s.layer_sizes, vec![2, 2, 1]);
    assert_eq!(s.adapted.len(), 5);

    let triv = Representation::new(&k, 3, []).unwrap();
    assert_eq!(triv.socle_series().dims(), vec![3]);
    assert_eq!(triv.invariant_covectors().len(), 3);
    assert_eq!(triv.dual_fixed_vectors().len(), 3);
}

#[test]
fn dual_fixed_vectors_examples() {
    let eg1 = fixture("eg1").unwrap();
    let k = eg1.field().clone();
    assert_eq!(eg1.dual_fixed_vectors(), vec![ints(&k, &[0, 0, 1])]);
    let det4 = fixture("det4").unwrap();
    let k5 = det4.field().clone();
    assert_eq!(det4.dual_fixed_vectors(), vec![ints(&k5, &[0, 0, 1, 0]), ints(&k5, &[0, 0, 0, 1])]);
}

#[test]
fn oracle_examples() {
    let eg1 = fixture("eg1").unwrap();
    let inv = eg1.invariant_space_oracle(2);
    assert_eq!(inv.len(), 6);
    assert!(inv.iter().all(|f| f.degree_in(2) == 0));

    let det4 = fixture("det4").unwrap();
    let x = |i| det4.var(i);
    let det = &(&x(1) * &x(4)) - &(&x(2) * &x(3));
    let deg2 = det4.invariants_of_degree(2);
    let mut elim = SparseElim::new(det4.field());
    let idx: BTreeMap<Exps, usize> = monomials(4, 2).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let vec_of = |p: &MPoly| -> SparseVec { p.terms().map(|(e, &c)| (idx[e], c)).collect() };
    for f in &deg2 {
        assert!(det4.is_invariant(f));
        elim.push(vec_of(f));
    }
    assert!(elim.in_span(&vec_of(&det)));

    let k = eg1.field().clone();
    let triv = Representation::new(&k, 4, []).unwrap();
    assert_eq!(triv.invariant_space_oracle(1).len(), 5);
}

#[test]
fn monomial_enumeration_is_graded_and_colex_descending() {
    let m = monomials(2, 2);
    let v: Vec<Vec<u16>> = m.iter().map(|e| e.to_vec()).collect();
    assert_eq!(v, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    assert_eq!(monomials(3, 3).len(), 10);
}

#[test]
fn basis_change_roundtrip() {
    let det4 = fixture("det4").unwrap();
    let k = det4.field().clone();
    let m = vec![ints(&k, &[1, 0, 0, 0]), ints(&k, &[2, 1, 0, 0]), ints(&k, &[0, 3, 1, 0]), ints(&k, &[1, 1, 4, 2])];
    let r2 = det4.change_basis(&m).unwrap();
    r2.validate().unwrap();
    let mut id = vec![vec![FqElem::ZERO; 4]; 4];
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = FqElem::ONE;
    }
    assert_eq!(det4.change_basis(&id).unwrap(), det4);
    assert_eq!(r2.socle_series().dims(), det4.socle_series().dims());
    assert!(det4.change_basis(&vec![ints(&k, &[0, 1, 0, 0]); 4]).is_err());
}

#[test]
fn json_roundtrip() {
    for r in crate::fixtures::all() {
        let back = Representation::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
    assert!(matches!(Representation::from_json_str("{\"p\": 4, \"field_degree\": 1, \"n\": 1, \"q\": {}}"), Err(GaRepError::Field(_))));
    assert!(matches!(Representation::from_json_str("{\"p\": 3, \"field_degree\": 1, \"n\": 2, \"q\": {\"1,2\": [0, 1]}}"), Err(GaRepError::Schema(_))));
}

#[test]
fn point_action_matches_coaction() {
    let e89 = fixture("e89").unwrap();
    let k = e89.field().clone();
    let big = build_field(3, 2, None).unwrap();
    let emb = k.embedding_into(&big).unwrap();
    let a: Vec<FqElem> = (0..5).map(|i| big.elem((i * 2 + 1) % 9)).collect();
    let t0 = big.generator();
    let moved = e89.act_point(&emb, t0, &a);
    let back = e89.act_point(&emb, big.neg(t0), &moved);
    assert_eq!(back, a);
    let mut pt = a.clone();
    pt.push(t0);
    for (i, img) in e89.coaction_images().iter().enumerate() {
        assert_eq!(img.eval_in(&emb, &pt), moved[i]);
    }
}
