//! Naive plan enumeration: every sequence up to the horizon, each checked in
//! isolation.

use fames_core::fairness::{check, FairnessQuery, Notion};
use fames_core::{ActionInstance, Engine, Result};

/// All sequences over `actions` of length `0..=horizon`.
pub fn all_plans(actions: &[ActionInstance], horizon: usize) -> Vec<Vec<ActionInstance>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<ActionInstance>> = vec![vec![]];
    for _ in 0..horizon {
        let mut next = Vec::new();
        for p in &layer {
            for a in actions {
                let mut q = p.clone();
                q.push(a.clone());
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Every plan whose verdict holds, each checked on a fresh session.
pub fn naive_plans(
    engine: &Engine,
    notion: Notion,
    query: &FairnessQuery,
    actions: &[ActionInstance],
    horizon: usize,
) -> Result<Vec<Vec<ActionInstance>>> {
    let mut found = Vec::new();
    for plan in all_plans(actions, horizon) {
        let q = FairnessQuery { plan: plan.clone(), ..query.clone() };
        if check(engine, notion, &q)?.holds {
            found.push(plan);
        }
    }
    Ok(found)
}
