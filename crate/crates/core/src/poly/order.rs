use std::cmp::Ordering;

/// Monomial orders on exponent vectors. Variable 0 is `x1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Lexicographic, `x1 > x2 > ... > xn`.
    Lex,
    /// Lexicographic on the reversed variable list, `xn > ... > x1`.
    Colex,
    /// Total degree, then `Lex`.
    Grlex,
    /// Total degree, then `Colex`. Used for display and enumeration.
    DegColex,
    /// Graded reverse lexicographic.
    Grevlex,
    /// The first `split` variables dominate: compare them by `head`, break
    /// ties on the remaining variables by `tail`.
    Block { split: usize, head: Box<MonomialOrder>, tail: Box<MonomialOrder> },
}

fn total(a: &[u16]) -> u32 {
    a.iter().map(|&e| e as u32).sum()
}

impl MonomialOrder {
    pub fn block(split: usize, head: MonomialOrder, tail: MonomialOrder) -> Self {
        MonomialOrder::Block { split, head: Box::new(head), tail: Box::new(tail) }
    }

    /// An elimination order for the first `split` variables.
    pub fn elimination(split: usize, tail: MonomialOrder) -> Self {
        Self::block(split, MonomialOrder::Grevlex, tail)
    }

    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Colex => a.iter().rev().cmp(b.iter().rev()),
            MonomialOrder::Grlex => total(a).cmp(&total(b)).then_with(|| a.cmp(b)),
            MonomialOrder::DegColex => total(a).cmp(&total(b)).then_with(|| a.iter().rev().cmp(b.iter().rev())),
            MonomialOrder::Grevlex => total(a).cmp(&total(b)).then_with(|| b.iter().rev().cmp(a.iter().rev())),
            MonomialOrder::Block { split, head, tail } => {
                let s = (*split).min(a.len());
                head.cmp(&a[..s], &b[..s]).then_with(|| tail.cmp(&a[s..], &b[s..]))
            }
        }
    }
}
