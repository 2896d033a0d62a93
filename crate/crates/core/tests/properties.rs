//! Validities of the logic, checked as bounded validities at horizon 3.

use fames_core::formula::{ActionInstance, Formula};
use fames_core::{bundled, parse_formula, Engine, Theory};
use fames_testkit::gen::{self, QueryShape, Signature, TestRng, TheoryShape};
use fames_testkit::props::{knowledge_ssa, schema_instances};

const HORIZON: usize = 3;

fn assert_valid(engine: &Engine, what: &str, f: &Formula) {
    let v = engine.validity_bounded(f, HORIZON).unwrap();
    assert!(v.holds, "{what} fails on {}:\n{f}\n{:?}\n{}", engine.theory().name, v.diagnostics, engine.theory());
}

fn check_theory(rng: &mut TestRng, theory: &Theory, samples: usize, guarded: bool) {
    let engine = Engine::new(theory).unwrap();
    let shape = QueryShape { depth: 2, ..QueryShape::default() };
    for _ in 0..samples {
        let alpha = gen::query(rng, theory, &shape);
        let beta = gen::query(rng, theory, &shape);
        let open = gen::open_query(rng, theory, "x", &shape);
        for (what, f) in schema_instances(&alpha, &beta, &open) {
            assert_valid(&engine, what, &f);
        }
        let ssa = Formula::conjoin(
            Signature::of(theory).ground_actions().iter().map(|a| knowledge_ssa(a, &alpha, guarded)),
        );
        assert_valid(&engine, "knowledge successor state", &ssa);
    }
}

#[test]
fn loan_examples() {
    let engine = Engine::new(&bundled::loan()).unwrap();
    let t = engine.theory();
    for text in ["K(Eligible(n)) & K(Eligible(n) -> Eligible(n) | Male(n)) -> K(Eligible(n) | Male(n))", "!K(Male(n)) -> K(!K(Male(n)))"] {
        let f = parse_formula(text, t).unwrap();
        assert!(engine.validity_bounded(&f, 2).unwrap().holds, "{text}");
    }
}

#[test]
fn bundled_theories() {
    let mut rng = gen::rng(0xa11ce);
    for (name, _) in bundled::ALL {
        check_theory(&mut rng, &bundled::by_name(name).unwrap(), 2, false);
    }
}

#[test]
fn random_theories_always_possible() {
    let mut rng = gen::rng(0xa11ce + 1);
    let shape = TheoryShape { trivial_poss: true, ..TheoryShape::default() };
    for _ in 0..50 {
        let theory = gen::theory(&mut rng, &shape);
        check_theory(&mut rng, &theory, 2, false);
    }
}

#[test]
fn random_theories_with_preconditions() {
    let mut rng = gen::rng(0xa11ce + 2);
    for _ in 0..50 {
        let theory = gen::theory(&mut rng, &TheoryShape::default());
        check_theory(&mut rng, &theory, 2, true);
    }
}

/// Compatibility consults `Poss` in the other world only, so without the
/// guard the equivalence breaks as soon as an action can be impossible.
#[test]
fn unguarded_equivalence_needs_trivial_preconditions() {
    let theory = fames_core::parse_theory(&fames_core::TheorySource::new(
        "domain p\nobjects: o\nfluent F/0\naction go\nposs go(): F\nssa F: F\ninit_true: true\ninit_known: true\n",
        "<p>",
    ))
    .unwrap();
    let engine = Engine::new(&theory).unwrap();
    let go = ActionInstance::new("go", vec![]);
    let alpha = parse_formula("F", &theory).unwrap();
    assert!(!engine.validity_bounded(&knowledge_ssa(&go, &alpha, false), 1).unwrap().holds);
    assert!(engine.validity_bounded(&knowledge_ssa(&go, &alpha, true), 1).unwrap().holds);
}

#[test]
fn knowledge_is_not_truth() {
    // The agent may know something false: the real world need not be in E.
    let base = bundled::loan();
    let known = parse_formula("Eligible(n) & !Eligible(nprime) & hasLoan(n)", &base).unwrap();
    let truth = parse_formula("Male(n) & !Male(nprime) & Eligible(n) & !Eligible(nprime) & !hasLoan(n)", &base).unwrap();
    let engine = Engine::new(&base.with_initial(truth, known)).unwrap();
    let f = parse_formula("K(hasLoan(n)) -> hasLoan(n)", &base).unwrap();
    assert!(!engine.entails(&f).unwrap().holds);
}
