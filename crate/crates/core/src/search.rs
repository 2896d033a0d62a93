//! Bounded breadth-first search for plans that implement a fairness notion.

use crate::error::{Error, Result};
use crate::fairness::{check_with, FairnessQuery, FairnessVerdict, Notion};
use crate::formula::ActionInstance;
use crate::world::{odometer, trace_budget, Engine};

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub horizon: usize,
    pub notion: Notion,
    /// The plan field is ignored.
    pub query: FairnessQuery,
    pub max_results: usize,
    /// Only ground instances of these action names are tried.
    pub action_filter: Option<Vec<String>>,
}

impl SearchConfig {
    pub fn new(notion: Notion, query: FairnessQuery, horizon: usize) -> Self {
        SearchConfig { horizon, notion, query, max_results: 1, action_filter: None }
    }

    pub fn with_max_results(mut self, k: usize) -> Self {
        self.max_results = k;
        self
    }

    pub fn with_actions(mut self, names: Vec<String>) -> Self {
        self.action_filter = Some(names);
        self
    }
}

/// The ground actions a search over `cfg` branches on, in engine order.
pub fn candidate_actions(engine: &Engine, cfg: &SearchConfig) -> Result<Vec<ActionInstance>> {
    if let Some(names) = &cfg.action_filter {
        for n in names {
            if engine.theory().action(n).is_none() {
                return Err(Error::Undeclared(format!("action `{n}`")));
            }
        }
    }
    Ok(engine
        .ground()
        .actions()
        .iter()
        .filter(|a| cfg.action_filter.as_ref().map_or(true, |names| names.iter().any(|n| *n == a.action)))
        .cloned()
        .collect())
}

/// Plans of length `0..=horizon`, shortest first and lexicographic by ground
/// action order within a length, whose verdict holds; at most `max_results`.
pub fn find_plans(engine: &Engine, cfg: &SearchConfig) -> Result<Vec<(Vec<ActionInstance>, FairnessVerdict)>> {
    if cfg.max_results == 0 {
        return Err(Error::InvalidQuery("max_results must be at least 1".into()));
    }
    if cfg.notion.world_level() {
        return Err(Error::InvalidQuery(format!("notion {} does not depend on a plan", cfg.notion)));
    }
    let actions = candidate_actions(engine, cfg)?;
    if actions.is_empty() {
        return Err(Error::InvalidQuery("no ground actions to search over".into()));
    }
    trace_budget(actions.len(), cfg.horizon, engine.config().max_traces)?;

    let mut session = engine.session();
    let mut found = Vec::new();
    let mut q = cfg.query.clone();
    for len in 0..=cfg.horizon {
        let mut idx = vec![0usize; len];
        loop {
            q.plan = idx.iter().map(|&i| actions[i].clone()).collect();
            let v = check_with(&mut session, cfg.notion, &q)?;
            if v.holds {
                found.push((q.plan.clone(), v));
                if found.len() == cfg.max_results {
                    return Ok(found);
                }
            }
            if !odometer(&mut idx, actions.len()) {
                break;
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::dsl::{parse_formula_with_free, parse_plan};
    use crate::formula::display_plan;

    fn query(e: &Engine, goal: &str) -> FairnessQuery {
        FairnessQuery::new(vec![], parse_formula_with_free(goal, e.theory(), &["x"]).unwrap(), "Male")
    }

    #[test]
    fn ftu_dp_finds_approvals() {
        let e = Engine::new(&bundled::loan()).unwrap();
        let cfg = SearchConfig::new(Notion::FtuDp, query(&e, "hasLoan(x)"), 2).with_max_results(10);
        let plans = find_plans(&e, &cfg).unwrap();
        let texts: Vec<String> = plans.iter().map(|(p, _)| display_plan(p)).collect();
        assert_eq!(texts, vec!["approve(n); approve(nprime)", "approve(nprime); approve(n)"]);
        assert!(plans.iter().all(|(_, v)| v.holds));
    }

    #[test]
    fn dp_high_salary_is_unreachable() {
        let e = Engine::new(&bundled::loan()).unwrap();
        let cfg = SearchConfig::new(Notion::Dp, query(&e, "highSalary(x)"), 4);
        assert!(find_plans(&e, &cfg).unwrap().is_empty());
    }

    #[test]
    fn make_enables_ftu() {
        let e = Engine::new(&bundled::loan_make()).unwrap();
        let target = parse_plan("make(n); make(nprime); promote(n); promote(nprime)", e.theory()).unwrap();
        let cfg = SearchConfig::new(Notion::Ftu, query(&e, "forall x. highSalary(x)"), 4).with_max_results(1000);
        let plans = find_plans(&e, &cfg).unwrap();
        assert!(plans.iter().any(|(p, _)| *p == target));
        assert!(plans.iter().all(|(p, _)| p.len() >= 3));
    }

    #[test]
    fn filter_and_budget() {
        let e = Engine::new(&bundled::loan()).unwrap();
        let cfg = SearchConfig::new(Notion::Dp, query(&e, "hasLoan(x)"), 2).with_actions(vec!["approve".into()]);
        let plans = find_plans(&e, &cfg).unwrap();
        assert_eq!(display_plan(&plans[0].0), "approve(n); approve(nprime)");
        let cfg = SearchConfig::new(Notion::Dp, query(&e, "hasLoan(x)"), 9);
        assert!(find_plans(&e, &cfg).unwrap_err().is_resource());
        let cfg = SearchConfig::new(Notion::Dp, query(&e, "hasLoan(x)"), 1).with_actions(vec!["fly".into()]);
        assert!(matches!(find_plans(&e, &cfg), Err(Error::Undeclared(_))));
    }

    #[test]
    fn horizon_zero() {
        let e = Engine::new(&bundled::loan()).unwrap();
        let cfg = SearchConfig::new(Notion::Dp, query(&e, "hasLoan(x)"), 0);
        assert!(find_plans(&e, &cfg).unwrap().is_empty());
    }
}
