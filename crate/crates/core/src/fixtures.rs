//! The shipped representation corpus.

use crate::garep::Representation;

pub const FIXTURES: &[(&str, &str)] = &[
    ("eg1", include_str!("../fixtures/eg1.json")),
    ("e89", include_str!("../fixtures/e89.json")),
    ("det4", include_str!("../fixtures/det4.json")),
    ("caseC-single", include_str!("../fixtures/caseC-single.json")),
    ("unipotent3", include_str!("../fixtures/unipotent3.json")),
    ("line2", include_str!("../fixtures/line2.json")),
];

pub fn fixture(name: &str) -> Option<Representation> {
    let (_, text) = FIXTURES.iter().find(|(n, _)| *n == name)?;
    Some(Representation::from_json_str(text).expect("shipped fixtures parse"))
}

pub fn all() -> Vec<Representation> {
    FIXTURES.iter().map(|(n, _)| fixture(n).unwrap()).collect()
}
