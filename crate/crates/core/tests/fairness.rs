use fames_core::fairness::{check, Notion};
use fames_testkit::acceptance::{ac1_examples, ac6_checker_formulas, extra_scenarios, scenarios};

#[test]
fn worked_examples() {
    ac1_examples().unwrap();
}

#[test]
fn checkers_agree_with_defining_formulas() {
    ac6_checker_formulas().unwrap();
}

#[test]
fn failures_name_a_clause() {
    for s in scenarios().into_iter().chain(extra_scenarios()) {
        let e = s.engine();
        let v = check(&e, s.notion, &s.query(e.theory())).unwrap();
        assert_eq!(v.holds, v.failed_clause.is_none(), "{}", s.describe());
        assert_eq!(v.holds, s.expect, "{}", s.describe());
        if s.notion == Notion::Eo {
            assert_eq!(v.reading, Some(s.reading));
        }
    }
}
