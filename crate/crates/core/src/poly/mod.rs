//! Univariate and multivariate polynomials, Gröbner bases and membership tests.

mod gcd;
mod groebner;
pub mod linalg;
mod membership;
mod mpoly;
mod order;
mod upoly;

use thiserror::Error;

pub use gcd::{mpoly_gcd, reduce_fraction};
pub use groebner::{buchberger, eliminate, ideal_member, Budget, GroebnerBasis};
pub use membership::{b_adic_membership, subalgebra_member_graded, subalgebra_member_localized, SubalgebraWitness};
pub use mpoly::{default_names, mono_degree, mono_divides, Exps, MPoly};
pub use order::MonomialOrder;
pub use upoly::UPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("computation exceeded its budget after {steps} steps")]
    BudgetExceeded { steps: u64 },
    #[error("computation cancelled")]
    Cancelled,
    #[error("not a member")]
    NotMember,
    #[error("base polynomial is constant")]
    ConstantBase,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("empty input")]
    EmptyInput,
    #[error("polynomials live in different rings")]
    RingMismatch,
}
