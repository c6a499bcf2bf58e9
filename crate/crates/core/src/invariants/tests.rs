use super::*;
use crate::fixtures::fixture;
use crate::pairs::PairKind;

fn ints(k: &crate::field::FieldSpec, c: &[i64]) -> AdditivePoly {
    AdditivePoly::from_ints(k, c)
}

fn x(rep: &Representation, i: usize) -> MPoly {
    rep.var(i)
}

#[test]
fn reduce_by_kernel_examples() {
    let single = fixture("caseC-single").unwrap();
    let k = single.field().clone();
    let red = reduce_by_kernel(&single, &ints(&k, &[0, 1])).unwrap();
    assert_eq!(red.rep.entry(3, 1), UPoly::from_ints(&k, &[0, 1]));
    assert_eq!(red.expand(), single);

    let det4 = fixture("det4").unwrap();
    let red = reduce_by_kernel(&det4, &AdditivePoly::t(det4.field())).unwrap();
    assert_eq!(red.rep, det4);

    let e89 = fixture("e89").unwrap();
    let c1 = ints(e89.field(), &[2, 1]);
    assert_eq!(reduce_by_kernel(&e89, &c1).unwrap_err(), InvError::KernelNotTrivial { i: 5, j: 1 });
}

#[test]
fn vde_det4() {
    let det4 = fixture("det4").unwrap();
    let pair = Pair::new(&det4, x(&det4, 3), x(&det4, 1), AdditivePoly::t(det4.field())).unwrap();
    let ring = vde_generators(&det4, &pair).unwrap();
    let det = &(&x(&det4, 1) * &x(&det4, 4)) - &(&x(&det4, 2) * &x(&det4, 3));
    assert_eq!(ring.numerators, vec![x(&det4, 1), x(&det4, 2), MPoly::zero(det4.field(), 4), det]);
    assert_eq!(ring.exponents, vec![0, 0, 0, 1]);
    assert_eq!(ring.quotients()[3], "(x1*x4 + 4*x2*x3) / (x1)");
}

#[test]
fn vde_three_dimensional_line() {
    let k = crate::field::build_field(3, 1, None).unwrap();
    let rep = Representation::new(&k, 3, [((3, 1), UPoly::from_ints(&k, &[0, 1]))]).unwrap();
    let pair = Pair::new(&rep, x(&rep, 3), x(&rep, 1), AdditivePoly::t(&k)).unwrap();
    let ring = vde_generators(&rep, &pair).unwrap();
    assert_eq!(ring.numerators, vec![x(&rep, 1), x(&rep, 2), MPoly::zero(&k, 3)]);
    assert_eq!(ring.exponents, vec![0, 0, 0]);
}

#[test]
fn vde_rejects_other_pairs() {
    let e89 = fixture("e89").unwrap();
    let pair = Pair::new(&e89, x(&e89, 3), x(&e89, 1), ints(e89.field(), &[2, 1])).unwrap();
    assert!(matches!(vde_generators(&e89, &pair), Err(InvError::NotPrinciple { .. })));
}

#[test]
fn case_c_through_kernel_reduction() {
    let single = fixture("caseC-single").unwrap();
    let k = single.field().clone();
    let pair = Pair::new(&single, x(&single, 3), x(&single, 1), ints(&k, &[0, 1])).unwrap();
    assert_eq!(pair.kind, PairKind::QuasiPrinciple);
    let (ring, red) = case_c_generators(&single, &pair).unwrap();
    assert!(red.is_some());
    assert_eq!(ring.numerators, vec![x(&single, 1), x(&single, 2), MPoly::zero(&k, 3)]);
    for f in ring.generators() {
        assert!(verify_invariant(&single, &f));
    }
}

#[test]
fn oracle_invariants_lie_in_the_generated_ring() {
    let budget = Budget::steps(100_000);
    for name in ["det4", "caseC-single"] {
        let rep = fixture(name).unwrap();
        let pairs = crate::pairs::find_linear_pairs(&rep, &Default::default()).unwrap().pairs;
        let pair = &pairs[0];
        let (mut ring, _) = case_c_generators(&rep, pair).unwrap();
        assert!(ring.certify(&rep, 3, 3, &budget).unwrap().is_empty(), "{name}");
        assert_eq!(ring.certified_degree, Some(3));
    }
}

#[test]
fn membership_needs_the_right_generators() {
    let det4 = fixture("det4").unwrap();
    let k = det4.field();
    let det = &(&x(&det4, 1) * &x(&det4, 4)) - &(&x(&det4, 2) * &x(&det4, 3));
    let budget = Budget::steps(100_000);
    let gens = [x(&det4, 1), x(&det4, 2), det.clone()];
    let f = x(&det4, 4);
    assert!(subalgebra_member_localized(&f, &gens, &x(&det4, 1), 1, &budget).unwrap().is_none());
    let more = [x(&det4, 1), x(&det4, 2), det, x(&det4, 3)];
    let w = subalgebra_member_localized(&f, &more, &x(&det4, 1), 1, &budget).unwrap().unwrap();
    assert_eq!(w.exponent, 1);
    let _ = k;
}

#[test]
fn rewrite_examples() {
    let det4 = fixture("det4").unwrap();
    let pair = Pair::new(&det4, x(&det4, 3), x(&det4, 1), AdditivePoly::t(det4.field())).unwrap();
    let ring = vde_generators(&det4, &pair).unwrap();
    let det = &(&x(&det4, 1) * &x(&det4, 4)) - &(&x(&det4, 2) * &x(&det4, 3));
    assert_eq!(rewrite_invariant(&det4, &ring, &det).unwrap(), Rewrite { numerator: det.clone(), exponent: 0 });
    assert_eq!(rewrite_invariant(&det4, &ring, &x(&det4, 1)).unwrap().numerator, x(&det4, 1));
    assert_eq!(rewrite_invariant(&det4, &ring, &x(&det4, 2).pow(2)).unwrap().numerator, x(&det4, 2).pow(2));
    assert!(matches!(rewrite_invariant(&det4, &ring, &x(&det4, 3)), Err(InvError::NotInvariant(_))));
    for r in det4.invariant_space_oracle(3) {
        let out = rewrite_invariant(&det4, &ring, &r).unwrap();
        assert_eq!(out.numerator, &r * &ring.h.pow(out.exponent));
    }
}

#[test]
fn verify_invariant_examples() {
    let det4 = fixture("det4").unwrap();
    let det = &(&x(&det4, 1) * &x(&det4, 4)) - &(&x(&det4, 2) * &x(&det4, 3));
    assert!(verify_invariant(&det4, &det));
    assert!(verify_localized(&det4, &det, &x(&det4, 1)));
    let eg1 = fixture("eg1").unwrap();
    assert!(!verify_invariant(&eg1, &x(&eg1, 3)));
    assert!(verify_invariant(&eg1, &MPoly::constant(eg1.field(), 3, eg1.field().from_int(2))));
}

fn separators(name: &str) -> (Representation, GraphSepResult) {
    let rep = fixture(name).unwrap();
    let res = graph_separators(&rep, &Budget::steps(500_000)).unwrap();
    (rep, res)
}

#[test]
fn graph_separators_line2() {
    let (rep, res) = separators("line2");
    assert!(res.invariants.contains(&x(&rep, 1)), "{:?}", res.invariants);
    assert_eq!(res.u_description, vec![x(&rep, 1)]);
    assert!(res.non_invariant.is_empty());
    let report = check_separation(&rep, &res, &res.invariants, 2, 100, 0).unwrap();
    assert!(report.passed(), "{:?}", report.counterexamples);
    assert!(report.same_orbit > 0 && report.distinct_orbit > 0);
}

/// The reduced basis contains `w1 y4 - w2 y3 + w3 y2 - w4 y1`, which
/// vanishes on the graph although its coefficients `x3, x4` are not
/// invariant. Every ideal element of bidegree (1, 1) involving `y3` or `y4`
/// has such a coefficient, so no monomial order avoids this.
#[test]
fn graph_separators_det4() {
    let (rep, res) = separators("det4");
    assert_eq!(res.invariants, (1..=4).map(|i| x(&rep, i)).collect::<Vec<_>>());
    assert_eq!(res.non_invariant, vec![x(&rep, 3), x(&rep, 4)]);
    let names: Vec<String> = (0..5).map(|i| format!("w{i}")).chain((0..5).map(|i| format!("y{i}"))).collect();
    let text: Vec<String> = res.basis.iter().map(|g| g.fmt_with(&names)).collect();
    assert!(text.contains(&"w1*y4 + 4*w2*y3 + w3*y2 + 4*w4*y1".to_string()), "{text:?}");

    let full = check_separation(&rep, &res, &res.invariants, 2, 100, 0).unwrap();
    assert!(!full.passed());
    assert!(full.counterexamples.iter().all(|c| c.starts_with("same orbit")));
    let subset = check_separation(&rep, &res, &res.invariant_subset(), 2, 100, 0).unwrap();
    assert!(subset.counterexamples.iter().all(|c| c.starts_with("different orbits")));
    assert!(!subset.passed());
}

#[test]
fn graph_separators_trivial_and_eg1() {
    let k = crate::field::build_field(3, 1, None).unwrap();
    let trivial = Representation::new(&k, 2, []).unwrap();
    let res = graph_separators(&trivial, &Budget::steps(100_000)).unwrap();
    assert!(res.invariants.iter().all(|f| f.total_degree() == Some(1) && f.num_terms() == 1));
    let report = check_separation(&trivial, &res, &res.invariants, 1, 30, 1).unwrap();
    assert!(report.passed());

    let (eg1, res) = separators("eg1");
    assert!(res.non_invariant.is_empty(), "{:?}", res.non_invariant);
    assert!(res.invariants.iter().all(|f| f.degree_in(2) == 0));
    let _ = eg1;
}

fn e89_caseb(bound: u32) -> (Representation, CasebData) {
    let e89 = fixture("e89").unwrap();
    let pair = Pair::new(&e89, x(&e89, 3), x(&e89, 1), ints(e89.field(), &[2, 1])).unwrap();
    let data = caseb_local_invariants(&e89, &pair, bound, &CasebConfig::default()).unwrap();
    (e89, data)
}

#[test]
fn caseb_e89_symmetric_functions() {
    let (e89, data) = e89_caseb(2);
    assert_eq!(data.kernel.len(), 3);
    assert_eq!(data.symmetric.len(), 3);
    assert!(data.symmetric[0].is_zero());
    assert!(!data.symmetric[1].is_zero() && !data.symmetric[2].is_zero());
    assert!(data.symmetric_invariant.iter().all(|&b| b));
    assert!(data.f_parts[2].is_zero(), "f_3 = x3 - (x3/x1) x1");
    for (i, v) in data.completeness.iter().enumerate() {
        assert!(v.complete(), "degree {i}: gaps {:?}", v.gaps);
    }
    let _ = e89;
}

#[test]
fn caseb_orbit_is_permuted_by_the_kernel() {
    let (_, data) = e89_caseb(0);
    for &k0 in &data.kernel {
        let shifted: Vec<Vec<Frac>> = data.orbit_raw.iter().map(|r| data.shift_raw(r, k0)).collect();
        for s in &shifted {
            assert!(data.orbit_raw.contains(s));
        }
    }
}

#[test]
fn caseb_guards() {
    let det4 = fixture("det4").unwrap();
    let pair = Pair::new(&det4, x(&det4, 3), x(&det4, 1), AdditivePoly::t(det4.field())).unwrap();
    assert!(matches!(caseb_local_invariants(&det4, &pair, 1, &CasebConfig::default()), Err(InvError::NotCaseB(_))));
    let single = fixture("caseC-single").unwrap();
    let pair = Pair::new(&single, x(&single, 3), x(&single, 1), ints(single.field(), &[0, 1])).unwrap();
    assert_eq!(caseb_local_invariants(&single, &pair, 1, &CasebConfig::default()).unwrap_err(), InvError::InseparableB { w: 1 });
}
