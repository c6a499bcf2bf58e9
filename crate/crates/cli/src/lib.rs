//! Driver behind the `gainv` binary: loads a representation file, runs one
//! command and builds a deterministic JSON report.

use std::fmt::Write as _;
use std::path::PathBuf;

use ga_invariants::garep::{monomials, GaRepError, Representation};
use ga_invariants::invariants::{
    case_c_generators, caseb_local_invariants, check_separation, graph_separators, verify_invariant, CasebConfig, InvError,
};
use ga_invariants::pairs::{classify, find_pairs_bounded, Case, ClassificationReport, PairError, SearchConfig};
use ga_invariants::poly::{default_names, Budget, MPoly, PolyError};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_SCHEMA: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Classify,
    Pairs,
    Invariants,
    Separators,
    Oracle,
}

impl Command {
    pub const ALL: [Command; 6] = [Command::Validate, Command::Classify, Command::Pairs, Command::Invariants, Command::Separators, Command::Oracle];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Classify => "classify",
            Command::Pairs => "pairs",
            Command::Invariants => "invariants",
            Command::Separators => "separators",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub max_degree: u32,
    pub oracle_degree: u32,
    pub seed: u64,
    /// Degree of the sampling extension over the coefficient field.
    pub ext: u32,
    pub json: bool,
    pub budget: u64,
    pub samples: usize,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        RunConfig { command, input: input.into(), max_degree: 2, oracle_degree: 2, seed: 0, ext: 2, json: true, budget: 200_000, samples: 100 }
    }

    fn search(&self) -> SearchConfig {
        SearchConfig { budget: Budget::steps(self.budget), ..SearchConfig::default() }
    }
}

/// Exit code and report of one run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    /// The report as it is printed: pretty JSON, or a text summary.
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            return serde_json::to_string_pretty(&self.report).expect("serializable") + "\n";
        }
        render_text(&self.report)
    }
}

struct Report {
    command: Command,
    input: String,
    case: Option<String>,
    fundamental: Option<Value>,
    pairs: Vec<Value>,
    generators: Vec<Value>,
    checks: Vec<Value>,
    details: Value,
    error: Option<String>,
}

impl Report {
    fn new(cfg: &RunConfig) -> Self {
        Report {
            command: cfg.command,
            input: cfg.input.file_name().map_or_else(|| cfg.input.display().to_string(), |s| s.to_string_lossy().into_owned()),
            case: None,
            fundamental: None,
            pairs: Vec::new(),
            generators: Vec::new(),
            checks: Vec::new(),
            details: Value::Null,
            error: None,
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(json!({"name": name.into(), "passed": passed, "detail": detail.into()}));
    }

    fn finish(self, code: i32) -> Outcome {
        let report = json!({
            "command": self.command.as_str(),
            "input": self.input,
            "exit_code": code,
            "case": self.case,
            "fundamental": self.fundamental,
            "pairs": self.pairs,
            "generators": self.generators,
            "checks": self.checks,
            "details": self.details,
            "error": self.error,
        });
        Outcome { code, report }
    }

    fn fail(mut self, code: i32, msg: String) -> Outcome {
        self.error = Some(msg);
        self.finish(code)
    }
}

fn poly_json(f: &MPoly) -> Value {
    json!({"poly": f.to_json(), "text": f.fmt_with(&default_names(f.nvars()))})
}

fn exit_for_poly(e: &PolyError) -> i32 {
    match e {
        PolyError::BudgetExceeded { .. } | PolyError::Cancelled => EXIT_BUDGET,
        _ => EXIT_ERROR,
    }
}

fn exit_for_pair(e: &PairError) -> i32 {
    match e {
        PairError::SearchSpaceTooLarge { .. } => EXIT_BUDGET,
        PairError::Poly(p) => exit_for_poly(p),
        _ => EXIT_ERROR,
    }
}

fn exit_for_inv(e: &InvError) -> i32 {
    match e {
        InvError::EliminationBudgetExceeded { .. } | InvError::DegreeBudgetExceeded { .. } => EXIT_BUDGET,
        InvError::Poly(p) => exit_for_poly(p),
        InvError::Pair(p) => exit_for_pair(p),
        InvError::GaRep(GaRepError::CocycleViolation { .. }) => EXIT_VALIDATION,
        _ => EXIT_ERROR,
    }
}

pub fn load(path: &std::path::Path) -> Result<Representation, GaRepError> {
    let text = std::fs::read_to_string(path).map_err(|e| GaRepError::Schema(format!("{}: {e}", path.display())))?;
    Representation::from_json_str(&text)
}

pub fn run(cfg: &RunConfig) -> Outcome {
    let mut report = Report::new(cfg);
    let rep = match load(&cfg.input) {
        Ok(rep) => rep,
        Err(e) => return report.fail(EXIT_SCHEMA, e.to_string()),
    };
    if let Err(e) = rep.validate() {
        let detail = e.to_string();
        let witness = match &e {
            GaRepError::CocycleViolation { i, j, .. } => json!([i, j]),
            _ => Value::Null,
        };
        report.check("cocycle identity", false, detail.clone());
        report.details = json!({"witness": witness});
        return report.fail(EXIT_VALIDATION, detail);
    }
    report.check("cocycle identity", true, format!("all {} entries checked", rep.entries().len()));
    match cfg.command {
        Command::Validate => {
            report.details = json!({"n": rep.n(), "p": rep.field().p(), "field_degree": rep.field().m(), "socle_dims": rep.socle_series().dims()});
            report.finish(EXIT_OK)
        }
        Command::Classify => match classify(&rep, cfg.max_degree, &cfg.search()) {
            Ok(c) => {
                fill_classification(&mut report, &c);
                report.details = c.to_json();
                report.finish(EXIT_OK)
            }
            Err(e) => report.fail(exit_for_pair(&e), e.to_string()),
        },
        Command::Pairs => match find_pairs_bounded(&rep, cfg.max_degree, &cfg.search()) {
            Ok(s) => {
                report.pairs = s.pairs.iter().map(|p| p.to_json()).collect();
                report.check("search exhaustive", s.exhaustive(), format!("degrees 1..={}", cfg.max_degree));
                report.details = json!({"search": s.degrees.iter().map(|d| d.to_json()).collect::<Vec<_>>()});
                report.finish(EXIT_OK)
            }
            Err(e) => report.fail(exit_for_pair(&e), e.to_string()),
        },
        Command::Invariants => run_invariants(cfg, &rep, report),
        Command::Separators => run_separators(cfg, &rep, report),
        Command::Oracle => {
            let mut dims = Vec::new();
            for d in 0..=cfg.oracle_degree {
                let basis = rep.invariants_of_degree(d);
                dims.push(basis.len());
                report.generators.extend(basis.iter().map(poly_json));
            }
            report.details = json!({"degree": cfg.oracle_degree, "dims": dims});
            report.finish(EXIT_OK)
        }
    }
}

fn fill_classification(report: &mut Report, c: &ClassificationReport) {
    report.case = Some(c.case.as_str().to_string());
    report.fundamental = c.fundamental.as_ref().map(|b| json!({"coeffs": b.to_json(), "text": b.to_string()}));
    report.pairs = c.pairs.iter().map(|p| p.to_json()).collect();
    for crit in &c.criteria {
        report.check(crit.name.clone(), crit.holds, crit.detail.clone());
    }
}

fn run_invariants(cfg: &RunConfig, rep: &Representation, mut report: Report) -> Outcome {
    let c = match classify(rep, cfg.max_degree, &cfg.search()) {
        Ok(c) => c,
        Err(e) => return report.fail(exit_for_pair(&e), e.to_string()),
    };
    fill_classification(&mut report, &c);
    let budget = Budget::steps(cfg.budget);
    match c.case {
        Case::C => {
            let pair = c.fundamental_pair.as_ref().expect("case C has a witness");
            let (mut ring, reduced) = match case_c_generators(rep, pair) {
                Ok(x) => x,
                Err(e) => return report.fail(exit_for_inv(&e), e.to_string()),
            };
            let all_invariant = ring.generators().iter().all(|f| verify_invariant(rep, f));
            report.check("generators are invariant", all_invariant, format!("{} generators over h = {}", ring.generators().len(), ring.h));
            let missing = match ring.certify(rep, cfg.oracle_degree, 3, &budget) {
                Ok(m) => m,
                Err(e) => return report.fail(exit_for_poly(&e), e.to_string()),
            };
            report.check(
                format!("oracle invariants of degree <= {} are in the localized ring", cfg.oracle_degree),
                missing.is_empty(),
                format!("{} missing", missing.len()),
            );
            report.generators = ring.to_json()["generators"].as_array().cloned().unwrap_or_default();
            report.details = json!({
                "ring": ring.to_json(),
                "reduced_by": reduced.as_ref().map(|r| r.b.to_json()),
            });
            report.finish(EXIT_OK)
        }
        Case::B => {
            let pair = c.fundamental_pair.as_ref().expect("case B has a pair");
            let ccfg = CasebConfig { budget: budget.clone(), ..CasebConfig::default() };
            let data = match caseb_local_invariants(rep, pair, cfg.oracle_degree, &ccfg) {
                Ok(d) => d,
                Err(e) => return report.fail(exit_for_inv(&e), e.to_string()),
            };
            report.check("symmetric functions are invariant", data.symmetric_invariant.iter().all(|&b| b), format!("{:?}", data.symmetric_invariant));
            for v in &data.completeness {
                let gaps: Vec<String> = v.gaps.iter().map(|f| f.to_string()).collect();
                report.check(format!("degree {} oracle invariants are members", v.degree), v.complete(), format!("{}/{} members; gaps {:?}", v.members, v.oracle_dim, gaps));
            }
            let details = data.to_json();
            report.generators = data.generators().iter().map(poly_json).collect();
            report.details = details;
            report.finish(EXIT_OK)
        }
        Case::A => {
            let coords = rep.invariant_coordinates();
            let gens: Vec<MPoly> = coords.iter().map(|&j| rep.var(j)).collect();
            for d in 0..=cfg.oracle_degree {
                let dim = rep.invariants_of_degree(d).len();
                let expected = monomials(coords.len(), d).len();
                report.check(format!("degree {d} invariants are the polynomials in the invariant coordinates"), dim == expected, format!("dimension {dim}, expected {expected}"));
            }
            report.generators = gens.iter().map(poly_json).collect();
            report.finish(EXIT_OK)
        }
        Case::Inconclusive => {
            report.details = c.to_json();
            report.finish(EXIT_OK)
        }
    }
}

fn run_separators(cfg: &RunConfig, rep: &Representation, mut report: Report) -> Outcome {
    let res = match graph_separators(rep, &Budget::steps(cfg.budget)) {
        Ok(r) => r,
        Err(e) => return report.fail(exit_for_inv(&e), e.to_string()),
    };
    let names = default_names(rep.n());
    let bad: Vec<String> = res.non_invariant.iter().map(|f| f.fmt_with(&names)).collect();
    report.check("extracted coefficients are invariant", bad.is_empty(), format!("non-invariant: {bad:?}"));
    match check_separation(rep, &res, &res.invariants, cfg.ext, cfg.samples, cfg.seed) {
        Ok(s) => {
            report.check(
                "orbit separation on sampled pairs",
                s.passed(),
                format!("{} pairs over F_{}: {} same orbit, {} distinct, {} counterexamples", s.pairs, s.field_order, s.same_orbit, s.distinct_orbit, s.counterexamples.len()),
            );
            report.details = json!({"graph": res.to_json(), "separation": s.to_json()});
        }
        Err(e) => return report.fail(exit_for_inv(&e), e.to_string()),
    }
    report.generators = res.invariants.iter().map(poly_json).collect();
    report.finish(EXIT_OK)
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let s = |x: &Value| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string());
    let _ = writeln!(out, "{} {}", s(&v["command"]), s(&v["input"]));
    if let Some(e) = v["error"].as_str() {
        let _ = writeln!(out, "error: {e}");
    }
    if !v["case"].is_null() {
        let _ = writeln!(out, "case: {}", s(&v["case"]));
    }
    if !v["fundamental"].is_null() {
        let _ = writeln!(out, "fundamental: {}", s(&v["fundamental"]["text"]));
    }
    for p in v["pairs"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "pair: {} [{}]", s(&p["text"]), s(&p["kind"]));
    }
    for g in v["generators"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "generator: {}", s(&g["text"]));
    }
    for c in v["checks"].as_array().into_iter().flatten() {
        let mark = if c["passed"].as_bool() == Some(true) { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "[{mark}] {}: {}", s(&c["name"]), s(&c["detail"]));
    }
    out
}
