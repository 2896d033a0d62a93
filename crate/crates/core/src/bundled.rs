//! Example theories shipped with the library.

use crate::dsl::{parse_theory, TheorySource};
use crate::theory::Theory;

pub const LOAN: &str = include_str!("../theories/loan.fth");
pub const LOAN_MAKE: &str = include_str!("../theories/loan-make.fth");
pub const LOAN_ETON: &str = include_str!("../theories/loan-eton.fth");
pub const LOAN_UNDERREP: &str = include_str!("../theories/loan-underrep.fth");

/// `(file name, source)` for every bundled theory.
pub const ALL: &[(&str, &str)] = &[
    ("loan.fth", LOAN),
    ("loan-make.fth", LOAN_MAKE),
    ("loan-eton.fth", LOAN_ETON),
    ("loan-underrep.fth", LOAN_UNDERREP),
];

fn load(name: &str, text: &str) -> Theory {
    parse_theory(&TheorySource::new(text, name)).unwrap_or_else(|d| panic!("bundled theory {name} is invalid: {d:?}"))
}

pub fn loan() -> Theory {
    load("loan.fth", LOAN)
}

pub fn loan_make() -> Theory {
    load("loan-make.fth", LOAN_MAKE)
}

pub fn loan_eton() -> Theory {
    load("loan-eton.fth", LOAN_ETON)
}

pub fn loan_underrep() -> Theory {
    load("loan-underrep.fth", LOAN_UNDERREP)
}

/// Look a bundled theory up by file name, with or without `.fth`.
pub fn by_name(name: &str) -> Option<Theory> {
    let stem = name.strip_suffix(".fth").unwrap_or(name);
    ALL.iter()
        .find(|(file, _)| file.strip_suffix(".fth") == Some(stem))
        .map(|(file, text)| load(file, text))
}
