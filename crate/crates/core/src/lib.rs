//! Finite-domain model checking for the epistemic situation calculus, with
//! decision procedures for fairness notions over action sequences.
//!
//! The usual entry points are [`dsl::parse_theory`] to load a theory,
//! [`world::Engine`] to enumerate worlds and decide entailment, and the
//! checkers in [`fairness`].

pub mod bundled;
pub mod dsl;
pub mod error;
pub mod fairness;
pub mod forget;
pub mod formula;
pub mod search;
pub mod theory;
pub mod world;

pub use dsl::{parse_formula, parse_formula_with_free, parse_plan, parse_theory, ParseDiagnostic, TheorySource};
pub use error::{Error, Result};
pub use fairness::{EoReading, FairnessQuery, FairnessVerdict, Notion};
pub use formula::{ActionInstance, Formula, GroundAtom, ObjectName};
pub use search::{find_plans, SearchConfig};
pub use theory::Theory;
pub use world::{Engine, EngineConfig, Verdict, WorldState};
