use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{budget_error, InvError};
use crate::field::{build_field, FieldSpec, FqElem};
use crate::garep::Representation;
use crate::poly::{buchberger, default_names, eliminate, Budget, Exps, MPoly, MonomialOrder};

/// Separating invariants on `U`, read off the closure of the graph of the action.
#[derive(Clone, Debug)]
pub struct GraphSepResult {
    /// Largest `t`-degree among the `coact(x_i)`.
    pub d: u32,
    /// Leading `t`-coefficients of the rows of degree `d`; `U` is where one of them is nonzero.
    pub u_description: Vec<MPoly>,
    /// Dehomogenized coefficients `f_{i,J}(1, x_1, ..., x_n)`, without constants or repeats.
    pub invariants: Vec<MPoly>,
    /// Extracted coefficients that failed the invariance check.
    pub non_invariant: Vec<MPoly>,
    /// Reduced basis in `w_0..w_n, y_0..y_n` under colex.
    pub basis: Vec<MPoly>,
}

impl GraphSepResult {
    /// The extracted coefficients that passed the invariance check.
    pub fn invariant_subset(&self) -> Vec<MPoly> {
        self.invariants.iter().filter(|f| !self.non_invariant.contains(f)).cloned().collect()
    }

    pub fn in_u(&self, emb: &crate::field::Embedding, a: &[FqElem]) -> bool {
        self.u_description.iter().any(|phi| !phi.eval_in(emb, a).is_zero())
    }

    pub fn to_json(&self) -> Value {
        let names = default_names(self.invariants.first().map_or(0, |f| f.nvars()));
        json!({
            "d": self.d,
            "u_description": self.u_description.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "invariants": self.invariants.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "text": self.invariants.iter().map(|f| f.fmt_with(&names)).collect::<Vec<_>>(),
            "non_invariant": self.non_invariant.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "basis_size": self.basis.len(),
        })
    }
}

/// Variables `t0, t1, w_0..w_n, y_0..y_n`. The graph ideal is generated by
/// `y_0 - w_0 t1^d` and `y_i - t1^d v_i(w, t0/t1)`, where `v_i = coact(x_i)`
/// and `w_i` stands for `x_i`.
fn graph_ideal(rep: &Representation, d: u32) -> Vec<MPoly> {
    let k = rep.field();
    let n = rep.n();
    let total = 2 * n + 4;
    let w = |i: usize| 2 + i;
    let y = |i: usize| 3 + n + i;
    let mono = |t0: u32, t1: u32, var: usize| -> Exps {
        let mut e = Exps::from_elem(0, total);
        e[0] = t0 as u16;
        e[1] = t1 as u16;
        e[var] += 1;
        e
    };
    let minus_one = k.neg(k.one());
    let mut gens = Vec::new();
    let mut g0 = MPoly::var(k, total, y(0));
    g0.add_term(mono(0, d, w(0)), minus_one);
    gens.push(g0);
    for i in 1..=n {
        let mut g = MPoly::var(k, total, y(i));
        g.add_term(mono(0, d, w(i)), minus_one);
        for j in 1..i {
            let q = rep.entry(i, j);
            for (e, &c) in q.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    g.add_term(mono(e as u32, d - e as u32, w(j)), k.neg(c));
                }
            }
        }
        gens.push(g);
    }
    gens
}

pub fn graph_separators(rep: &Representation, budget: &Budget) -> Result<GraphSepResult, InvError> {
    let k = rep.field();
    let n = rep.n();
    let d = rep.max_t_degree() as u32;
    let gens = graph_ideal(rep, d);
    let total = 2 * n + 4;
    let kept = total - 2;
    let elim = eliminate(&gens, &[0, 1], &MonomialOrder::Colex, budget).map_err(budget_error)?;
    let map: Vec<usize> = (0..total).map(|v| v.saturating_sub(2)).collect();
    let projected: Vec<MPoly> = elim.iter().map(|g| g.remap(kept, &map)).collect();
    let basis = buchberger(&projected, &MonomialOrder::Colex, budget).map_err(budget_error)?.polys;

    let mut invariants: Vec<MPoly> = Vec::new();
    for g in &basis {
        let mut parts: BTreeMap<Exps, MPoly> = BTreeMap::new();
        for (e, &c) in g.terms() {
            let yexp = Exps::from_slice(&e[n + 1..]);
            let xexp = Exps::from_slice(&e[1..=n]);
            parts.entry(yexp).or_insert_with(|| MPoly::zero(k, n)).add_term(xexp, c);
        }
        for f in parts.into_values() {
            if f.is_zero() || f.is_constant() {
                continue;
            }
            let f = f.monic(&MonomialOrder::DegColex);
            if !invariants.contains(&f) {
                invariants.push(f);
            }
        }
    }
    invariants.sort_by(|a, b| {
        let la = a.leading_term(&MonomialOrder::DegColex).unwrap().0;
        let lb = b.leading_term(&MonomialOrder::DegColex).unwrap().0;
        MonomialOrder::DegColex.cmp(la, lb)
    });
    let non_invariant = invariants.iter().filter(|f| !rep.is_invariant(f)).cloned().collect();

    let u_description = (1..=n)
        .filter_map(|i| {
            let c = rep.coact(&rep.var(i));
            (c.t_degree() == Some(d)).then(|| c.coeff(d))
        })
        .collect();
    Ok(GraphSepResult { d, u_description, invariants, non_invariant, basis })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub field_order: u64,
    pub pairs: usize,
    pub same_orbit: usize,
    pub distinct_orbit: usize,
    /// Point pairs whose invariant vectors disagree with the orbit relation.
    pub counterexamples: Vec<String>,
}

impl SeparationReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field_order": self.field_order,
            "pairs": self.pairs,
            "same_orbit": self.same_orbit,
            "distinct_orbit": self.distinct_orbit,
            "counterexamples": self.counterexamples,
        })
    }
}

fn random_point(rng: &mut ChaCha8Rng, ext: &FieldSpec, n: usize) -> Vec<FqElem> {
    (0..n).map(|_| ext.elem(rng.gen_range(0..ext.q()))).collect()
}

/// Samples `samples` pairs of points of `U` over the degree `ext_degree`
/// extension: a third in one orbit, a third independent, a third an orbit
/// translate with the top coordinate perturbed. The orbit relation is
/// decided by trying every `t0` in the extension, and compared with the
/// values of `separators`.
pub fn check_separation(
    rep: &Representation,
    res: &GraphSepResult,
    separators: &[MPoly],
    ext_degree: u32,
    samples: usize,
    seed: u64,
) -> Result<SeparationReport, InvError> {
    let k = rep.field();
    let n = rep.n();
    let ext = build_field(k.p() as u64, k.m() * ext_degree.max(1), None)?;
    let emb = k.embedding_into(&ext)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SeparationReport { field_order: ext.q(), pairs: 0, same_orbit: 0, distinct_orbit: 0, counterexamples: Vec::new() };
    let values = |x: &[FqElem]| -> Vec<FqElem> { separators.iter().map(|f| f.eval_in(&emb, x)).collect() };
    let fmt = |x: &[FqElem]| -> String { format!("({})", x.iter().map(|&c| ext.fmt_elem(c)).collect::<Vec<_>>().join(", ")) };
    let mut s = 0;
    while s < samples {
        let a = random_point(&mut rng, &ext, n);
        if !res.in_u(&emb, &a) {
            continue;
        }
        let t0 = ext.elem(rng.gen_range(0..ext.q()));
        let b = match s % 3 {
            0 => rep.act_point(&emb, t0, &a),
            1 => random_point(&mut rng, &ext, n),
            _ => {
                let mut b = rep.act_point(&emb, t0, &a);
                let delta = ext.elem(rng.gen_range(1..ext.q()));
                b[n - 1] = ext.add(b[n - 1], delta);
                b
            }
        };
        if !res.in_u(&emb, &b) {
            continue;
        }
        s += 1;
        let same = ext.elements().any(|t| rep.act_point(&emb, t, &a) == b);
        let equal = values(&a) == values(&b);
        report.pairs += 1;
        if same {
            report.same_orbit += 1;
        } else {
            report.distinct_orbit += 1;
        }
        if same != equal {
            let what = if same { "same orbit, different values" } else { "different orbits, equal values" };
            report.counterexamples.push(format!("{what}: {} and {}", fmt(&a), fmt(&b)));
        }
    }
    Ok(report)
}
