//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see
//! the lines; the test fails if any criterion fails.

use std::path::PathBuf;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use ga_invariants::field::{build_field, FieldSpec};
use ga_invariants::fixtures::fixture;
use ga_invariants::garep::{GaRepError, Representation};
use ga_invariants::invariants::{case_c_generators, caseb_local_invariants, check_separation, graph_separators, verify_invariant, CasebConfig};
use ga_invariants::orering::{compose, left_divide, right_divide, right_gcd_ext, AdditivePoly};
use ga_invariants::pairs::{classify, find_linear_pairs, find_pairs_bounded, fundamental_generator, kernel_acts_trivially, kernel_witness, Case, Pair, SearchConfig};
use ga_invariants::poly::{Budget, MPoly, UPoly};
use ga_invariants_cli::Command;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240611;
const ORE_SAMPLES: usize = 1000;
const ORE_MAX_DEGREE: usize = 6;
const ORE_TIME_LIMIT: Duration = Duration::from_secs(10);
const MUTATIONS: usize = 20;
const CASE_C_TIME_LIMIT: Duration = Duration::from_secs(60);
const CASE_C_DEGREE: u32 = 3;
const CASE_C_E_BOUND: u32 = 3;
const SEPARATION_SAMPLES: usize = 100;
const SEPARATION_EXT: u32 = 2;
const CASE_B_TIME_LIMIT: Duration = Duration::from_secs(300);
const CASE_B_DEGREE: u32 = 2;
/// Largest pair degree at which e89 is still reported as case B.
const E89_SEARCH_DEGREE: u32 = 2;

const LISTED_FIXTURES: [&str; 5] = ["eg1", "e89", "det4", "caseC-single", "unipotent3"];

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn first(problems: &[String]) -> String {
    problems.first().map_or_else(String::new, |p| format!("; first: {p}"))
}

/// Builds `gainv` with the profile of this test binary and returns its path.
fn gainv_binary() -> PathBuf {
    let mut build = Process::new(option_env!("CARGO").unwrap_or("cargo"));
    build.args(["build", "-q", "-p", "ga-invariants-cli", "--bin", "gainv"]);
    if !cfg!(debug_assertions) {
        build.arg("--release");
    }
    assert!(build.status().expect("cargo runs").success(), "building gainv failed");
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().join(format!("gainv{}", std::env::consts::EXE_SUFFIX))
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.json"))
}

fn random_additive(rng: &mut ChaCha8Rng, k: &FieldSpec, nonzero: bool) -> AdditivePoly {
    loop {
        let deg = rng.gen_range(0..=ORE_MAX_DEGREE);
        let coeffs = (0..=deg).map(|_| k.elem(rng.gen_range(0..k.q()))).collect();
        let f = AdditivePoly::new(k, coeffs);
        if !nonzero || !f.is_zero() {
            return f;
        }
    }
}

fn ore_laws() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        // Degree two over the prime field, so that the Frobenius twist is visible.
        let k = build_field(p, 2, None).unwrap();
        for _ in 0..ORE_SAMPLES {
            let f = random_additive(&mut rng, &k, false);
            let g = random_additive(&mut rng, &k, true);
            let gd = g.degree().unwrap();
            let (q, r) = right_divide(&f, &g).unwrap();
            let right_ok = compose(&q, &g).add(&r) == f && r.degree().is_none_or(|d| d < gd);
            let (q, r) = left_divide(&f, &g).unwrap();
            let left_ok = compose(&g, &q).add(&r) == f && r.degree().is_none_or(|d| d < gd);
            let gcd_ok = f.is_zero() || {
                let c = right_gcd_ext(&f, &g).unwrap();
                c.b.is_monic() && compose(&c.b1, &f).add(&compose(&c.b2, &g)) == c.b && compose(&c.d1, &c.b) == f && compose(&c.d2, &c.b) == g
            };
            checked += 1;
            if !(right_ok && left_ok && gcd_ok) {
                failures.push(format!("p={p}: f={f} g={g}"));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures.is_empty() && elapsed < ORE_TIME_LIMIT,
        format!("{checked} pairs over F_4, F_9, F_25 in {:.2}s, {} failures{}", elapsed.as_secs_f64(), failures.len(), first(&failures)),
    )
}

fn mutate(rep: &Representation, rng: &mut ChaCha8Rng) -> (Representation, (usize, usize)) {
    let k = rep.field();
    let p = k.p() as usize;
    let n = rep.n();
    let i = rng.gen_range(2..=n);
    let j = rng.gen_range(1..i);
    let e = loop {
        let e = rng.gen_range(2..=12usize);
        let mut pe = 1;
        while pe < e {
            pe *= p;
        }
        if pe != e {
            break e;
        }
    };
    let c = k.elem(rng.gen_range(1..k.q()));
    let mut entries = rep.entries().clone();
    let old = rep.entry(i, j);
    entries.insert((i, j), &old + &UPoly::monomial(k, c, e));
    (Representation::new(k, n, entries).unwrap(), (i, j))
}

fn cocycle_validation() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut problems = Vec::new();
    let mut rejected = 0;
    for name in LISTED_FIXTURES {
        let rep = fixture(name).unwrap();
        if let Err(e) = rep.validate() {
            problems.push(format!("{name} does not validate: {e}"));
        }
        for _ in 0..MUTATIONS {
            let (bad, ij) = mutate(&rep, &mut rng);
            match bad.validate() {
                Err(GaRepError::CocycleViolation { i, j, .. }) if (i, j) == ij => rejected += 1,
                other => problems.push(format!("{name} mutated at {ij:?}: {other:?}")),
            }
        }
    }
    verdict(
        problems.is_empty(),
        format!("{} fixtures checked, {rejected}/{} mutations rejected with the mutated (i,j){}", LISTED_FIXTURES.len(), LISTED_FIXTURES.len() * MUTATIONS, first(&problems)),
    )
}

fn eg1_reproduction() -> Verdict {
    let eg1 = fixture("eg1").unwrap();
    let cfg = SearchConfig::default();
    let case = classify(&eg1, 3, &cfg).unwrap().case;
    let pairs = find_pairs_bounded(&eg1, 3, &cfg).unwrap().pairs;
    let oracle = eg1.invariant_space_oracle(4);
    let in_x1_x2 = oracle.iter().all(|f| f.degree_in(2) == 0);
    verdict(
        case == Case::A && pairs.is_empty() && oracle.len() == 15 && in_x1_x2,
        format!("case {}, {} pairs to degree 3, degree <= 4 oracle dimension {} (expected 15), inside k[x1, x2]: {in_x1_x2}", case.as_str(), pairs.len(), oracle.len()),
    )
}

fn e89_reproduction() -> Verdict {
    let e89 = fixture("e89").unwrap();
    let k = e89.field();
    let c1 = AdditivePoly::from_ints(k, &[-1, 1]);
    let valid = e89.validate().is_ok();
    let linear = find_linear_pairs(&e89, &SearchConfig::default()).unwrap().pairs;
    let wanted = [Pair::new(&e89, e89.var(3), e89.var(1), c1.clone()).unwrap(), Pair::new(&e89, e89.var(4), e89.var(2), c1.clone()).unwrap()];
    let found = wanted.iter().all(|w| linear.iter().any(|p| (&p.g, &p.h, &p.c) == (&w.g, &w.h, &w.c)));
    let (b, _) = fundamental_generator(&e89, &linear).unwrap();
    let trivial = kernel_acts_trivially(&e89, &c1);
    let witness = kernel_witness(&e89, &c1);
    let report = classify(&e89, E89_SEARCH_DEGREE, &SearchConfig::default()).unwrap();
    let span = report.case_b.as_ref().map(|s| s.d_span_dim);
    verdict(
        valid && found && b == c1.monic() && !trivial && witness == Some((5, 1)) && report.case == Case::B && span == Some(2),
        format!(
            "valid {valid}, linear pairs found {found}, fundamental {b}, kernel trivial {trivial}, witness {witness:?}, classify(D = {E89_SEARCH_DEGREE}) = {}, d-span {span:?}",
            report.case.as_str()
        ),
    )
}

fn case_c() -> Verdict {
    let start = Instant::now();
    let budget = Budget::steps(500_000);
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["det4", "caseC-single"] {
        let rep = fixture(name).unwrap();
        let report = classify(&rep, 1, &SearchConfig::default()).unwrap();
        let pair = report.fundamental_pair.expect("case C witness");
        let (mut ring, _) = case_c_generators(&rep, &pair).unwrap();
        let invariant = ring.generators().iter().all(|f| verify_invariant(&rep, f));
        let missing = ring.certify(&rep, CASE_C_DEGREE, CASE_C_E_BOUND, &budget).unwrap();
        ok &= report.case == Case::C && invariant && missing.is_empty();
        notes.push(format!("{name}: {} generators invariant {invariant}, {} oracle invariants missing", ring.generators().len(), missing.len()));
        if name == "det4" {
            let x = |i| rep.var(i);
            let det = &(&x(1) * &x(4)) - &(&x(2) * &x(3));
            let gens = ring.generators();
            let has = [x(1), x(2), det].iter().all(|f| gens.contains(f));
            ok &= has;
            notes.push(format!("det4 has x1, x2, x1*x4 - x2*x3: {has}"));
        }
    }
    let elapsed = start.elapsed();
    notes.push(format!("{:.2}s", elapsed.as_secs_f64()));
    verdict(ok && elapsed < CASE_C_TIME_LIMIT, notes.join("; "))
}

fn graph_separation() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["line2", "det4"] {
        let rep = fixture(name).unwrap();
        let res = graph_separators(&rep, &Budget::steps(500_000)).unwrap();
        let bad: Vec<String> = res.invariants.iter().filter(|f| !verify_invariant(&rep, f)).map(|f| f.to_string()).collect();
        let sep = check_separation(&rep, &res, &res.invariants, SEPARATION_EXT, SEPARATION_SAMPLES, SEED).unwrap();
        ok &= bad.is_empty() && sep.passed();
        notes.push(format!(
            "{name}: {} extracted, non-invariant {bad:?}, {} pairs over F_{} ({} same orbit), {} counterexamples",
            res.invariants.len(),
            sep.pairs,
            sep.field_order,
            sep.same_orbit,
            sep.counterexamples.len()
        ));
    }
    verdict(ok, notes.join("; "))
}

fn case_b() -> Verdict {
    let start = Instant::now();
    let e89 = fixture("e89").unwrap();
    let k = e89.field();
    let pair = Pair::new(&e89, e89.var(3), e89.var(1), AdditivePoly::from_ints(k, &[-1, 1])).unwrap();
    let data = caseb_local_invariants(&e89, &pair, CASE_B_DEGREE, &CasebConfig::default()).unwrap();
    let e = &data.symmetric;
    let shape = e.len() >= 3 && e[0].is_zero() && !e[1].is_zero() && !e[2].is_zero();
    let invariant = data.symmetric_invariant.iter().all(|&b| b) && e.iter().all(|f| verify_invariant(&e89, &f.num));
    let expected: Vec<MPoly> = vec![e89.var(1), e89.var(2)];
    let gens = data.generators();
    let has_base = expected.iter().all(|f| gens.contains(f));
    let gaps: Vec<String> = data.completeness.iter().filter(|v| !v.complete()).map(|v| format!("degree {}: {} gaps", v.degree, v.gaps.len())).collect();
    let members: Vec<String> = data.completeness.iter().map(|v| format!("{}/{}", v.members, v.oracle_dim)).collect();
    let elapsed = start.elapsed();
    verdict(
        shape && invariant && has_base && gaps.is_empty() && elapsed < CASE_B_TIME_LIMIT,
        format!(
            "e_1 = 0 and e_2, e_3 nonzero: {shape}; invariant: {invariant}; {} generators; members by degree {members:?}; gaps {gaps:?}; {:.2}s",
            gens.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn cli_determinism() -> Verdict {
    let bin = gainv_binary();
    let mut differing = Vec::new();
    let mut runs = 0;
    for name in ["eg1", "e89", "det4", "caseC-single", "unipotent3", "line2"] {
        let path = fixture_path(name);
        for cmd in Command::ALL {
            let once = || Process::new(&bin).args([cmd.as_str(), path.to_str().unwrap(), "--json"]).output().unwrap();
            let (a, b) = (once(), once());
            runs += 2;
            if a.stdout != b.stdout || a.status.code() != b.status.code() {
                differing.push(format!("{} {name}", cmd.as_str()));
            }
        }
    }
    verdict(differing.is_empty(), format!("{runs} runs, differing: {differing:?}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("Ore ring laws", ore_laws),
        ("cocycle validation", cocycle_validation),
        ("eg1 reproduction", eg1_reproduction),
        ("e89 reproduction", e89_reproduction),
        ("case C generators", case_c),
        ("graph separators", graph_separation),
        ("case B local invariants", case_b),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!("criterion {} {}: {}: {}", i + 1, if v.passed { "PASS" } else { "FAIL" }, name, v.detail);
        if !v.passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
