use fames_core::fairness::{check, FairnessQuery, Notion};
use fames_core::search::{find_plans, SearchConfig};
use fames_core::{bundled, parse_formula_with_free, Engine};
use fames_testkit::acceptance::ac7_search;

#[test]
fn matches_naive_enumeration() {
    ac7_search().unwrap();
}

#[test]
fn results_reverify_and_are_deterministic() {
    let engine = Engine::new(&bundled::loan()).unwrap();
    let goal = parse_formula_with_free("hasLoan(x)", engine.theory(), &["x"]).unwrap();
    let cfg = SearchConfig::new(Notion::FtuDp, FairnessQuery::new(vec![], goal, "Male"), 3).with_max_results(50);
    let first = find_plans(&engine, &cfg).unwrap();
    assert!(!first.is_empty());
    for (plan, _) in &first {
        let q = FairnessQuery { plan: plan.clone(), ..cfg.query.clone() };
        assert!(check(&engine, Notion::FtuDp, &q).unwrap().holds);
    }
    let again = find_plans(&Engine::new(&bundled::loan()).unwrap(), &cfg).unwrap();
    assert_eq!(first, again);
    let lens: Vec<usize> = first.iter().map(|(p, _)| p.len()).collect();
    assert!(lens.windows(2).all(|w| w[0] <= w[1]));
}
