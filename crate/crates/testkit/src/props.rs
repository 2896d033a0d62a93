//! Schemas of valid formulas, instantiated with concrete formulas.

use fames_core::{ActionInstance, Formula};

fn k(f: Formula) -> Formula {
    Formula::knows(f)
}

/// Properties 1–5 for one choice of `α`, `β` and `α(x)` (free in `x`):
/// closure under modus ponens, positive and negative introspection, and the
/// two Barcan directions.
pub fn schema_instances(alpha: &Formula, beta: &Formula, open: &Formula) -> Vec<(&'static str, Formula)> {
    vec![
        (
            "closure",
            Formula::implies(
                Formula::and(k(alpha.clone()), k(Formula::implies(alpha.clone(), beta.clone()))),
                k(beta.clone()),
            ),
        ),
        ("positive introspection", Formula::implies(k(alpha.clone()), k(k(alpha.clone())))),
        (
            "negative introspection",
            Formula::implies(Formula::not(k(alpha.clone())), k(Formula::not(k(alpha.clone())))),
        ),
        (
            "barcan forall",
            Formula::implies(Formula::forall("x", k(open.clone())), k(Formula::forall("x", open.clone()))),
        ),
        (
            "barcan exists",
            Formula::implies(Formula::exists("x", k(open.clone())), k(Formula::exists("x", open.clone()))),
        ),
    ]
}

fn after(a: &ActionInstance, f: Formula) -> Formula {
    Formula::after_plan(std::slice::from_ref(a), f)
}

/// `[a]Kα ≡ SF(a) ∧ K(g ∧ SF(a) ⊃ [a]α) ∨ ¬SF(a) ∧ K(g ∧ ¬SF(a) ⊃ [a]α)`,
/// with guard `g` either `true` or `Poss(a)`.
pub fn knowledge_ssa(a: &ActionInstance, alpha: &Formula, guarded: bool) -> Formula {
    let sf = Formula::Sense(a.to_term());
    let guard = |f: Formula| if guarded { Formula::and(Formula::Poss(a.to_term()), f) } else { f };
    let branch = |s: Formula| Formula::and(s.clone(), k(Formula::implies(guard(s), after(a, alpha.clone()))));
    Formula::iff(after(a, k(alpha.clone())), Formula::or(branch(sf.clone()), branch(Formula::not(sf))))
}
