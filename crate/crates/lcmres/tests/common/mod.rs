//! Shared helpers for the integration suites.
#![allow(dead_code)]

use std::path::PathBuf;

use lcmres::io::{parse_generator_file, ParsedInput};
use lcmres::lattice::LcmLattice;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn load(name: &str) -> ParsedInput {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_generator_file(&text).expect("fixture parses")
}

pub fn load_lattice(name: &str) -> (ParsedInput, LcmLattice) {
    let parsed = load(name);
    let lat = LcmLattice::build(&parsed.gens);
    (parsed, lat)
}

pub const MONOMIAL_FIXTURES: &[&str] = &["ex41.gens", "ex42.gens", "ex43.gens"];
pub const ALL_FIXTURES: &[&str] = &["ex41.gens", "ex42.gens", "ex43.gens", "ex51.gens"];
