//! Exact linear algebra over a finite field.

use std::collections::BTreeMap;

use crate::field::{FieldSpec, FqElem};

pub type SparseVec = BTreeMap<usize, FqElem>;

fn axpy(field: &FieldSpec, y: &mut SparseVec, c: FqElem, x: &SparseVec) {
    for (&k, &v) in x {
        let e = y.entry(k).or_insert(FqElem::ZERO);
        *e = field.sub(*e, field.mul(c, v));
        if e.is_zero() {
            y.remove(&k);
        }
    }
}

/// Reduced row echelon form in place; returns pivot columns. Zero rows are dropped.
pub fn rref(field: &FieldSpec, rows: &mut Vec<Vec<FqElem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(f, p));
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &FieldSpec, rows: &[Vec<FqElem>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Basis of `{x : A x = 0}` for a dense `A` with `ncols` columns, in reduced form.
pub fn kernel(field: &FieldSpec, a: &[Vec<FqElem>], ncols: usize) -> Vec<Vec<FqElem>> {
    let mut m = a.to_vec();
    let pivots = rref(field, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FqElem::ZERO; ncols];
        v[free] = FqElem::ONE;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        basis.push(v);
    }
    let mut b = basis;
    rref(field, &mut b);
    b
}

/// Incremental sparse elimination that tracks how each kept row was built
/// from the inputs. Rows that reduce to zero yield left-kernel vectors.
pub struct SparseElim {
    field: FieldSpec,
    pivots: BTreeMap<usize, (SparseVec, SparseVec)>,
    kernel: Vec<SparseVec>,
    count: usize,
}

impl SparseElim {
    pub fn new(field: &FieldSpec) -> Self {
        SparseElim { field: field.clone(), pivots: BTreeMap::new(), kernel: Vec::new(), count: 0 }
    }

    /// Adds the next input row. Returns `true` if it was independent.
    pub fn push(&mut self, mut row: SparseVec) -> bool {
        let f = self.field.clone();
        let mut combo = SparseVec::new();
        combo.insert(self.count, FqElem::ONE);
        self.count += 1;
        loop {
            let Some((&k, &c)) = row.iter().next() else {
                self.kernel.push(combo);
                return false;
            };
            match self.pivots.get(&k) {
                Some((prow, pcombo)) => {
                    axpy(&f, &mut row, c, prow);
                    axpy(&f, &mut combo, c, pcombo);
                }
                None => {
                    let inv = f.inv(c).unwrap();
                    for v in row.values_mut() {
                        *v = f.mul(*v, inv);
                    }
                    for v in combo.values_mut() {
                        *v = f.mul(*v, inv);
                    }
                    self.pivots.insert(k, (row, combo));
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Left-kernel vectors found so far, as combinations of input rows.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    /// Whether `row` lies in the span of the pushed rows.
    pub fn in_span(&self, row: &SparseVec) -> bool {
        self.reduce(row).is_empty()
    }

    /// Reduces `row` against the pivots, returning the residue.
    pub fn reduce(&self, row: &SparseVec) -> SparseVec {
        let f = &self.field;
        let mut row = row.clone();
        let mut cursor = 0usize;
        loop {
            let Some((&k, &c)) = row.range(cursor..).next() else { return row };
            match self.pivots.get(&k) {
                Some((prow, _)) => axpy(f, &mut row, c, prow),
                None => cursor = k + 1,
            }
        }
    }

    /// Expresses `row` as a combination of input rows, if it is in the span.
    pub fn solve(&self, row: &SparseVec) -> Option<SparseVec> {
        let f = &self.field;
        let mut row = row.clone();
        let mut combo = SparseVec::new();
        loop {
            let Some((&k, &c)) = row.iter().next() else { return Some(combo) };
            let (prow, pcombo) = self.pivots.get(&k)?;
            axpy(f, &mut row, c, prow);
            let neg = f.neg(c);
            axpy(f, &mut combo, neg, pcombo);
        }
    }
}

/// Canonical basis (reduced echelon form) of the span of `vectors`.
pub fn span_basis(field: &FieldSpec, vectors: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
    let mut m = vectors.to_vec();
    rref(field, &mut m);
    m
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<FqElem> {
    let mut out = vec![FqElem::ZERO; n];
    for (&k, &c) in v {
        out[k] = c;
    }
    out
}

pub fn to_sparse(v: &[FqElem]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (i, c)).collect()
}
