//! Invariants, pairs and case classification for unipotent `G_a`
//! representations over finite fields.

pub mod field;
pub mod orering;
pub mod poly;
pub mod garep;
pub mod fixtures;
pub mod pairs;
pub mod invariants;
