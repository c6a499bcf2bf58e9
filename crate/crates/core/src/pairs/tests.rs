use super::*;
use crate::field::FieldSpec;
use crate::fixtures::fixture;
use crate::poly::UPoly;

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn add(k: &FieldSpec, c: &[i64]) -> AdditivePoly {
    AdditivePoly::from_ints(k, c)
}

fn has_pair(pairs: &[Pair], g: &MPoly, h: &MPoly, c: &AdditivePoly) -> bool {
    pairs.iter().any(|p| p.g == *g && p.h == *h && p.c == *c)
}

#[test]
fn is_pair_examples() {
    let e89 = fixture("e89").unwrap();
    let k = e89.field().clone();
    let c1 = add(&k, &[2, 1]);
    assert!(is_pair(&e89, &e89.var(3), &e89.var(1), &c1));
    assert!(!is_pair(&e89, &e89.var(3), &e89.var(2), &c1));

    let eg1 = fixture("eg1").unwrap();
    let t = AdditivePoly::t(&k);
    assert!(!is_pair(&eg1, &eg1.var(3), &eg1.var(1), &t));
    let zero = MPoly::zero(&k, 3);
    assert!(is_pair(&eg1, &eg1.var(1), &zero, &t));
    // h must be invariant
    assert!(!is_pair(&eg1, &eg1.var(1), &eg1.var(3), &AdditivePoly::zero(&k)));
}

#[test]
fn variance_examples() {
    let eg1 = fixture("eg1").unwrap();
    assert_eq!(variance(&eg1, &eg1.var(3)), 3);
    assert_eq!(variance(&eg1, &eg1.var(1)), 1);
    let det4 = fixture("det4").unwrap();
    assert_eq!(variance(&det4, &det4.var(3)), 2);
    // translating by a constant keeps the translates' span at two
    let g = &det4.var(3) + &MPoly::one(det4.field(), 4);
    assert_eq!(variance(&det4, &g), 2);
}

#[test]
fn linear_pairs_examples() {
    let e89 = fixture("e89").unwrap();
    let k = e89.field().clone();
    let c1 = add(&k, &[2, 1]);
    let s = find_linear_pairs(&e89, &cfg()).unwrap();
    assert!(has_pair(&s.pairs, &e89.var(3), &e89.var(1), &c1));
    assert!(has_pair(&s.pairs, &e89.var(4), &e89.var(2), &c1));
    assert!(s.exhaustive());

    let eg1 = fixture("eg1").unwrap();
    let s = find_linear_pairs(&eg1, &cfg()).unwrap();
    assert!(s.pairs.is_empty());
    assert!(s.exhaustive());

    let det4 = fixture("det4").unwrap();
    let t = AdditivePoly::t(det4.field());
    let s = find_linear_pairs(&det4, &cfg()).unwrap();
    assert!(has_pair(&s.pairs, &det4.var(3), &det4.var(1), &t));
    assert!(has_pair(&s.pairs, &det4.var(4), &det4.var(2), &t));
    for p in &s.pairs {
        assert_eq!(p.kind, PairKind::Principle);
        assert_eq!(variance(&det4, &p.g), 2);
    }
}

#[test]
fn bounded_search_examples() {
    let eg1 = fixture("eg1").unwrap();
    let s = find_pairs_bounded(&eg1, 3, &cfg()).unwrap();
    assert!(s.pairs.is_empty());

    let det4 = fixture("det4").unwrap();
    let t = AdditivePoly::t(det4.field());
    let s = find_pairs_bounded(&det4, 2, &cfg()).unwrap();
    assert!(s.pairs.iter().any(|p| p.g.total_degree() == Some(2)));
    assert!(s.pairs.iter().all(|p| p.c == t));

    let e89 = fixture("e89").unwrap();
    let s = find_pairs_bounded(&e89, 2, &cfg()).unwrap();
    let (b, w) = fundamental_generator(&e89, &s.pairs).unwrap();
    assert_eq!(b, add(e89.field(), &[2, 1]));
    assert!(is_pair(&e89, &w.g, &w.h, &w.c));
    for p in &s.pairs {
        assert!(is_pair(&e89, &p.g, &p.h, &p.c));
        assert!(in_left_ideal(&p.c, &b));
    }
}

#[test]
fn search_space_cap() {
    let e89 = fixture("e89").unwrap();
    let small = SearchConfig { monomial_cap: 10, ..SearchConfig::default() };
    assert!(matches!(find_pairs_bounded(&e89, 2, &small), Err(PairError::SearchSpaceTooLarge { degree: 2, monomials: 15, cap: 10 })));
}

/// `q_{3,1} = t^3`, `q_{4,2} = t^3 - t` over `F_3`.
fn two_blocks() -> Representation {
    let k = crate::field::build_field(3, 1, None).unwrap();
    Representation::new(&k, 4, [((3, 1), UPoly::from_ints(&k, &[0, 0, 0, 1])), ((4, 2), UPoly::from_ints(&k, &[0, 2, 0, 1]))]).unwrap()
}

#[test]
fn combine_examples() {
    let r = two_blocks();
    r.validate().unwrap();
    let k = r.field().clone();
    let p1 = Pair::new(&r, r.var(3), r.var(1), add(&k, &[0, 1])).unwrap();
    let p2 = Pair::new(&r, r.var(4), r.var(2), add(&k, &[2, 1])).unwrap();
    let cert = right_gcd_ext(&p1.c, &p2.c).unwrap();
    assert_eq!(cert.b, AdditivePoly::t(&k));
    assert_eq!(cert.b1, AdditivePoly::t(&k));
    assert_eq!(cert.b2, AdditivePoly::t(&k).neg());
    let c = combine(&r, &p1, &p2).unwrap();
    assert_eq!(c.kind, PairKind::Principle);
    // g/h = x3/x1 - x4/x2
    let num = &(&r.var(3) * &r.var(2)) - &(&r.var(4) * &r.var(1));
    let den = &r.var(1) * &r.var(2);
    assert_eq!(&c.g * &den, &num * &c.h);

    assert_eq!(combine(&r, &p1, &p1).unwrap(), p1);
    let trivial = Pair::new(&r, r.var(1), MPoly::zero(&k, 4), AdditivePoly::t(&k)).unwrap();
    assert_eq!(combine(&r, &p1, &trivial).unwrap_err(), PairError::TrivialInput);
    assert_eq!(fundamental_generator(&r, &[trivial]).unwrap_err(), PairError::EmptyInput);

    let det4 = fixture("det4").unwrap();
    let t = AdditivePoly::t(det4.field());
    let a = Pair::new(&det4, det4.var(3), det4.var(1), t.clone()).unwrap();
    let b = Pair::new(&det4, det4.var(4), det4.var(2), t.clone()).unwrap();
    let c = combine(&det4, &a, &b).unwrap();
    assert!(is_pair(&det4, &c.g, &c.h, &t));
    assert_eq!(fundamental_generator(&det4, &[a, b]).unwrap().0, t);
}

#[test]
fn fundamental_generator_of_a_single_pair_is_its_monic_c() {
    let k = crate::field::build_field(3, 1, None).unwrap();
    let r = Representation::new(&k, 2, [((2, 1), UPoly::from_ints(&k, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 2]))]).unwrap();
    let p = Pair::new(&r, r.var(2), r.var(1), add(&k, &[0, 0, 2])).unwrap();
    assert_eq!(p.c, add(&k, &[0, 0, 1]));
    assert_eq!(p.h, r.var(1));
    assert_eq!(p.g, r.var(2).scale(k.from_int(2)));
    assert_eq!(fundamental_generator(&r, &[p]).unwrap().0, add(&k, &[0, 0, 1]));
}

#[test]
fn kernel_triviality_examples() {
    let det4 = fixture("det4").unwrap();
    assert!(kernel_acts_trivially(&det4, &AdditivePoly::t(det4.field())));
    let e89 = fixture("e89").unwrap();
    let c1 = add(e89.field(), &[2, 1]);
    assert!(!kernel_acts_trivially(&e89, &c1));
    assert_eq!(kernel_witness(&e89, &c1), Some((5, 1)));
    let single = fixture("caseC-single").unwrap();
    assert!(kernel_acts_trivially(&single, &add(single.field(), &[0, 1])));
}

#[test]
fn classify_examples() {
    let eg1 = fixture("eg1").unwrap();
    let r = classify(&eg1, 3, &cfg()).unwrap();
    assert_eq!(r.case, Case::A);
    assert!(r.pairs.is_empty());

    let det4 = fixture("det4").unwrap();
    let r = classify(&det4, 1, &cfg()).unwrap();
    assert_eq!(r.case, Case::C);
    let w = r.fundamental_pair.unwrap();
    assert_eq!((w.g, w.h, w.kind), (det4.var(3), det4.var(1), PairKind::Principle));

    let e89 = fixture("e89").unwrap();
    let r = classify(&e89, 2, &cfg()).unwrap();
    assert_eq!(r.case, Case::B);
    assert_eq!(r.fundamental, Some(add(e89.field(), &[2, 1])));
    assert_eq!(r.kernel_witness, Some((5, 1)));
    let s = r.case_b.unwrap();
    assert_eq!(s.d_span_dim, 2);
    assert_eq!(s.d, vec![(1, add(e89.field(), &[1])), (2, add(e89.field(), &[0, 0, 1]))]);
    // t^9 = (t^3 + t)∘(t^3 - t) + t, so both parts agree modulo b
    assert_eq!(s.d_span_dim_mod_b, 1);
    assert!(!s.certified);

    let single = fixture("caseC-single").unwrap();
    let r = classify(&single, 1, &cfg()).unwrap();
    assert_eq!(r.case, Case::C);
    assert_eq!(r.fundamental_pair.unwrap().kind, PairKind::QuasiPrinciple);
}

/// A principle pair in degree three for the e89 fixture, with
/// `h = (x1 + x2) x2^2`.
fn e89_degree_three_pair(r: &Representation) -> (MPoly, MPoly) {
    let k = r.field();
    let g = MPoly::from_int_terms(
        k,
        5,
        &[(&[0, 2, 0, 0, 1], 1), (&[0, 0, 0, 3, 0], -1), (&[0, 1, 0, 2, 0], 1), (&[1, 0, 0, 2, 0], -1), (&[0, 1, 1, 1, 0], -1), (&[0, 2, 0, 1, 0], -1)],
    );
    let h = &(&r.var(1) + &r.var(2)) * &r.var(2).pow(2);
    (g, h)
}

#[test]
fn e89_has_a_principle_pair_in_degree_three() {
    let e89 = fixture("e89").unwrap();
    let (g, h) = e89_degree_three_pair(&e89);
    assert!(is_pair(&e89, &g, &h, &AdditivePoly::t(e89.field())));
}

#[test]
fn e89_search_to_degree_three_finds_case_c() {
    let e89 = fixture("e89").unwrap();
    let r = classify(&e89, 3, &cfg()).unwrap();
    assert_eq!(r.case, Case::C);
    assert_eq!(r.fundamental, Some(AdditivePoly::t(e89.field())));
}

#[test]
fn basis_change_keeps_the_label() {
    let det4 = fixture("det4").unwrap();
    let k = det4.field().clone();
    let m: Vec<Vec<_>> = [[1, 0, 0, 0], [3, 1, 0, 0], [0, 2, 1, 0], [4, 1, 1, 3]].iter().map(|r| r.iter().map(|&x| k.from_int(x)).collect()).collect();
    let other = det4.change_basis(&m).unwrap();
    assert_eq!(classify(&other, 1, &cfg()).unwrap().case, Case::C);
    let eg1 = fixture("eg1").unwrap();
    let k = eg1.field().clone();
    let m: Vec<Vec<_>> = [[1, 0, 0], [1, 1, 0], [2, 1, 1]].iter().map(|r| r.iter().map(|&x| k.from_int(x)).collect()).collect();
    assert_eq!(classify(&eg1.change_basis(&m).unwrap(), 2, &cfg()).unwrap().case, Case::A);
}

