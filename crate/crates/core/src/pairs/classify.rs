use serde_json::{json, Value};

use super::search::{find_pairs_bounded, DegreeSearch, SearchConfig};
use super::{fundamental_generator, kernel_acts_trivially, kernel_witness, variance, Pair, PairError};
use crate::field::FqElem;
use crate::garep::{linear_form, Representation};
use crate::orering::{right_divide, to_additive, AdditivePoly};
use crate::poly::b_adic_membership;
use crate::poly::linalg::rank;
use crate::poly::UPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    A,
    B,
    C,
    Inconclusive,
}

impl Case {
    pub fn as_str(self) -> &'static str {
        match self {
            Case::A => "A",
            Case::B => "B",
            Case::C => "C",
            Case::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Criterion {
    fn new(name: &str, holds: bool, detail: String) -> Self {
        Criterion { name: name.to_string(), holds, detail }
    }
}

/// Shape of the last row when every other entry lies in `k[b(t)]`:
/// `q_{n,j} = s_j(b(t)) + d_j(t)` over the invariant coordinates `x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseBStructure {
    pub b: AdditivePoly,
    /// The additive parts `d_j`, indexed by `j`.
    pub d: Vec<(usize, AdditivePoly)>,
    /// Right remainders of the `d_j` modulo `b`.
    pub d_reduced: Vec<(usize, AdditivePoly)>,
    /// Dimension of the span of the `d_j`.
    pub d_span_dim: usize,
    /// Dimension of the span of the `d_j` modulo the left ideal generated by `b`.
    pub d_span_dim_mod_b: usize,
    /// `d_span_dim_mod_b >= 2`.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub case: Case,
    pub max_degree: u32,
    /// Whether the bounded search is known to have found every pair family.
    pub exhaustive: bool,
    pub fundamental: Option<AdditivePoly>,
    pub fundamental_pair: Option<Pair>,
    pub pairs: Vec<Pair>,
    pub search: Vec<DegreeSearch>,
    pub kernel_witness: Option<(usize, usize)>,
    pub socle_dims: Vec<usize>,
    pub case_b: Option<CaseBStructure>,
    pub criteria: Vec<Criterion>,
}

fn span_dim(polys: &[AdditivePoly]) -> usize {
    let Some(first) = polys.first() else { return 0 };
    let len = polys.iter().filter_map(|d| d.degree()).max().map_or(0, |d| d + 1);
    let rows: Vec<Vec<FqElem>> = polys.iter().map(|d| (0..len).map(|i| d.coeff(i)).collect()).collect();
    rank(first.field(), &rows)
}

/// Splits `q` into its terms at powers of `p` and the rest.
pub(crate) fn additive_part(q: &UPoly) -> (AdditivePoly, UPoly) {
    let k = q.field();
    let p = k.p() as usize;
    let mut add = vec![FqElem::ZERO; q.coeffs().len()];
    let mut rest = q.coeffs().to_vec();
    let mut e = 1;
    while e < q.coeffs().len() {
        add[e] = rest[e];
        rest[e] = FqElem::ZERO;
        e *= p;
    }
    let add = to_additive(&UPoly::new(k, add)).expect("only p-power exponents");
    (add, UPoly::new(k, rest))
}

/// Checks the normal form in the given basis; `None` when some entry
/// outside the last row's invariant columns is not in `k[b(t)]`.
pub fn case_b_structure(rep: &Representation, b: &AdditivePoly) -> Option<CaseBStructure> {
    let n = rep.n();
    let bu = b.to_upoly();
    let inv = rep.invariant_coordinates();
    let mut d = Vec::new();
    for (&(i, j), q) in rep.entries() {
        if i == n && inv.contains(&j) {
            let (add, rest) = additive_part(q);
            b_adic_membership(&rest, &bu).ok()?;
            if !add.is_zero() {
                d.push((j, add));
            }
        } else {
            b_adic_membership(q, &bu).ok()?;
        }
    }
    let d_reduced: Vec<(usize, AdditivePoly)> = d.iter().map(|(j, dj)| (*j, right_divide(dj, b).expect("b nonzero").1)).collect();
    let d_span_dim = span_dim(&d.iter().map(|x| x.1.clone()).collect::<Vec<_>>());
    let d_span_dim_mod_b = span_dim(&d_reduced.iter().map(|x| x.1.clone()).collect::<Vec<_>>());
    Some(CaseBStructure { b: b.clone(), d, d_reduced, d_span_dim, d_span_dim_mod_b, certified: d_span_dim_mod_b >= 2 })
}

/// Labels the representation from the pairs of degree at most `max_degree`
/// and the socle data. Every label carries its certificate in `criteria`.
pub fn classify(rep: &Representation, max_degree: u32, cfg: &SearchConfig) -> Result<ClassificationReport, PairError> {
    let search = find_pairs_bounded(rep, max_degree, cfg)?;
    let socle = rep.socle_series();
    let mut report = ClassificationReport {
        case: Case::Inconclusive,
        max_degree,
        exhaustive: search.exhaustive(),
        fundamental: None,
        fundamental_pair: None,
        pairs: search.pairs.clone(),
        search: search.degrees.clone(),
        kernel_witness: None,
        socle_dims: socle.dims(),
        case_b: None,
        criteria: Vec::new(),
    };
    report.criteria.push(Criterion::new(
        "pairs found",
        !search.pairs.is_empty(),
        format!("{} pair(s) with deg g <= {max_degree}; search exhaustive: {}", search.pairs.len(), search.exhaustive()),
    ));
    if !search.pairs.is_empty() {
        let (b, witness) = fundamental_generator(rep, &search.pairs)?;
        let trivial = kernel_acts_trivially(rep, &b);
        report.kernel_witness = kernel_witness(rep, &b);
        let detail = match report.kernel_witness {
            Some((i, j)) => format!("q_{{{i},{j}}} is not in k[{}]", b.to_upoly()),
            None => format!("every q_{{i,j}} lies in k[{}]", b.to_upoly()),
        };
        report.criteria.push(Criterion::new("kernel of the fundamental generator acts trivially", trivial, detail));
        if trivial {
            report.case = Case::C;
        } else {
            report.case = Case::B;
            report.case_b = case_b_structure(rep, &b);
            if let Some(s) = &report.case_b {
                report.criteria.push(Criterion::new(
                    "last-row additive parts span at least two dimensions modulo b",
                    s.certified,
                    format!("span of d_j: {}; modulo b: {}", s.d_span_dim, s.d_span_dim_mod_b),
                ));
            }
        }
        report.fundamental = Some(b);
        report.fundamental_pair = Some(witness);
        return Ok(report);
    }
    let length_two = socle.length() == 2;
    report.criteria.push(Criterion::new("socle series has length two", length_two, format!("dims {:?}", socle.dims())));
    let top_one = length_two && socle.layer_sizes[1] == 1;
    report.criteria.push(Criterion::new("soc_2 / invariants is one-dimensional", top_one, format!("layer sizes {:?}", socle.layer_sizes)));
    let var = if top_one {
        let last = socle.adapted.last().expect("nonempty basis");
        Some(variance(rep, &linear_form(rep.field(), last)))
    } else {
        None
    };
    let wide = var.is_some_and(|v| v > 2);
    report.criteria.push(Criterion::new(
        "variance of the top adapted coordinate exceeds two",
        wide,
        var.map_or("not applicable".to_string(), |v| format!("variance {v}")),
    ));
    if length_two && top_one && wide {
        report.case = Case::A;
    }
    Ok(report)
}

impl CaseBStructure {
    pub fn to_json(&self) -> Value {
        let list = |v: &[(usize, AdditivePoly)]| -> Value { v.iter().map(|(j, d)| json!({"j": j, "d": d.to_json()})).collect() };
        json!({
            "b": self.b.to_json(),
            "d": list(&self.d),
            "d_reduced": list(&self.d_reduced),
            "d_span_dim": self.d_span_dim,
            "d_span_dim_mod_b": self.d_span_dim_mod_b,
            "certified": self.certified,
        })
    }
}

impl ClassificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case.as_str(),
            "max_degree": self.max_degree,
            "exhaustive": self.exhaustive,
            "fundamental": self.fundamental.as_ref().map(|b| b.to_json()),
            "fundamental_pair": self.fundamental_pair.as_ref().map(|p| p.to_json()),
            "pairs": self.pairs.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "search": self.search.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
            "kernel_witness": self.kernel_witness.map(|(i, j)| json!([i, j])),
            "socle_dims": self.socle_dims,
            "case_b": self.case_b.as_ref().map(|s| s.to_json()),
            "criteria": self.criteria.iter().map(|c| json!({"name": c.name, "holds": c.holds, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }
}
