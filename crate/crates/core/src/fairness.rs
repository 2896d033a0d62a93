//! Fairness notions as entailment checks over a plan `δ`, a goal `φ` and a
//! protected attribute `θ`.
//!
//! Every checker reduces to entailments of epistemic formulas against the
//! background theory; parametric goals use the free variable `x`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forget::{forget_engine, restrict_engine};
use crate::formula::{display_plan, ActionInstance, Formula, GroundAtom, ObjectName, Term};
use crate::world::{Diagnostics, Engine, Session, Verdict};

/// The variable parametric goals are written in.
pub const GOAL_VAR: &str = "x";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notion {
    Ftu,
    FtuInd,
    Dp,
    StrongDp,
    FtuDp,
    Eo,
    Cf,
    StrongEquity,
    WeakEquity,
    EquitableFtu,
}

impl Notion {
    pub const ALL: [Notion; 10] = [
        Notion::Ftu,
        Notion::FtuInd,
        Notion::Dp,
        Notion::StrongDp,
        Notion::FtuDp,
        Notion::Eo,
        Notion::Cf,
        Notion::StrongEquity,
        Notion::WeakEquity,
        Notion::EquitableFtu,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Notion::Ftu => "ftu",
            Notion::FtuInd => "ftu-ind",
            Notion::Dp => "dp",
            Notion::StrongDp => "strong-dp",
            Notion::FtuDp => "ftu-dp",
            Notion::Eo => "eo",
            Notion::Cf => "cf",
            Notion::StrongEquity => "strong-equity",
            Notion::WeakEquity => "weak-equity",
            Notion::EquitableFtu => "equitable-ftu",
        }
    }

    /// Notions whose goal is parametric in `x`.
    pub fn parametric_goal(self) -> bool {
        matches!(self, Notion::Dp | Notion::StrongDp | Notion::FtuDp | Notion::Eo)
    }

    /// Notions that say nothing about a plan.
    pub fn world_level(self) -> bool {
        matches!(self, Notion::StrongEquity | Notion::WeakEquity)
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Notion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Notion::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = Notion::ALL.iter().map(|n| n.as_str()).collect();
            format!("unknown notion `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// How to read the second conjunct of equality of opportunity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EoReading {
    /// `∀x(η ∧ ¬θ ⊃ φ)`: qualified members of the unprotected group.
    #[default]
    Conditioned,
    /// `∀x(¬(η ∧ θ) ⊃ φ)`, as the formula is literally written.
    Literal,
}

impl FromStr for EoReading {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "conditioned" => Ok(EoReading::Conditioned),
            "literal" => Ok(EoReading::Literal),
            _ => Err(format!("unknown EO reading `{s}` (expected conditioned or literal)")),
        }
    }
}

impl fmt::Display for EoReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EoReading::Conditioned => "conditioned",
            EoReading::Literal => "literal",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FairnessQuery {
    pub plan: Vec<ActionInstance>,
    /// Closed, or with free variable `x` for the parametric notions.
    pub goal: Formula,
    pub protected: String,
    pub criterion: Option<String>,
    pub positive_property: Option<String>,
    pub individual: Option<ObjectName>,
    pub eo_reading: EoReading,
}

impl FairnessQuery {
    pub fn new(plan: Vec<ActionInstance>, goal: Formula, protected: impl Into<String>) -> Self {
        FairnessQuery {
            plan,
            goal,
            protected: protected.into(),
            criterion: None,
            positive_property: None,
            individual: None,
            eo_reading: EoReading::default(),
        }
    }

    pub fn with_criterion(mut self, eta: impl Into<String>) -> Self {
        self.criterion = Some(eta.into());
        self
    }

    pub fn with_property(mut self, eta: impl Into<String>) -> Self {
        self.positive_property = Some(eta.into());
        self
    }

    pub fn with_individual(mut self, n: impl Into<String>) -> Self {
        self.individual = Some(ObjectName::new(n));
        self
    }

    pub fn with_reading(mut self, reading: EoReading) -> Self {
        self.eo_reading = reading;
        self
    }
}

fn ser_plan_opt<S: serde::Serializer>(
    plan: &Option<Vec<ActionInstance>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match plan {
        Some(p) => s.collect_seq(p.iter().map(|a| a.to_string())),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessVerdict {
    pub notion: Notion,
    pub holds: bool,
    /// Label of the first clause that failed; present iff `holds` is false.
    pub failed_clause: Option<String>,
    /// One-line explanation of the failure.
    pub detail: Option<String>,
    pub diagnostics: Option<Diagnostics>,
    /// Set when the verdict was decided on a modified theory.
    pub derived_theory: Option<String>,
    pub reading: Option<EoReading>,
    /// The failing prefix of the plan for prefix clauses.
    #[serde(serialize_with = "ser_plan_opt")]
    pub failing_prefix: Option<Vec<ActionInstance>>,
    pub warnings: Vec<String>,
}

impl FairnessVerdict {
    fn pass(notion: Notion) -> Self {
        FairnessVerdict {
            notion,
            holds: true,
            failed_clause: None,
            detail: None,
            diagnostics: None,
            derived_theory: None,
            reading: None,
            failing_prefix: None,
            warnings: Vec::new(),
        }
    }

    fn fail(notion: Notion, clause: &str, detail: String, verdict: Verdict) -> Self {
        FairnessVerdict {
            notion,
            holds: false,
            failed_clause: Some(clause.to_string()),
            detail: Some(detail),
            diagnostics: verdict.diagnostics,
            derived_theory: None,
            reading: None,
            failing_prefix: None,
            warnings: verdict.warnings,
        }
    }
}

// ---------------------------------------------------------------------------
// Formula builders

fn x() -> Term {
    Term::Var(GOAL_VAR.to_string())
}

fn unary(pred: &str, t: Term) -> Formula {
    Formula::atom(pred, vec![t])
}

fn after(plan: &[ActionInstance], f: Formula) -> Formula {
    Formula::after_plan(plan, f)
}

/// `[δ]Kφ`
pub fn knowledge_of_goal(plan: &[ActionInstance], goal: &Formula) -> Formula {
    after(plan, Formula::knows(goal.clone()))
}

/// `[δ′]¬∃x Kθ(x)`
pub fn ignorance(prefix: &[ActionInstance], theta: &str) -> Formula {
    after(prefix, Formula::not(Formula::exists(GOAL_VAR, Formula::knows(unary(theta, x())))))
}

/// `[δ′]¬Kθ(n)`
pub fn ignorance_of(prefix: &[ActionInstance], theta: &str, n: &ObjectName) -> Formula {
    after(prefix, Formula::not(Formula::knows(unary(theta, Term::Obj(n.clone())))))
}

/// `[δ]K(∀x(θ ⊃ φ) ∧ ∀x(¬θ ⊃ φ))`
pub fn parity(plan: &[ActionInstance], goal: &Formula, theta: &str) -> Formula {
    let th = unary(theta, x());
    let body = Formula::and(
        Formula::forall(GOAL_VAR, Formula::implies(th.clone(), goal.clone())),
        Formula::forall(GOAL_VAR, Formula::implies(Formula::not(th), goal.clone())),
    );
    after(plan, Formula::knows(body))
}

/// `[δ]∀x(Kθ(x) ∨ K¬θ(x))`
pub fn knows_whether(plan: &[ActionInstance], theta: &str) -> Formula {
    let th = unary(theta, x());
    after(
        plan,
        Formula::forall(GOAL_VAR, Formula::or(Formula::knows(th.clone()), Formula::knows(Formula::not(th)))),
    )
}

/// `[δ]K(∀x(η∧θ ⊃ φ) ∧ ∀x(ψ ⊃ φ))` with `ψ = η∧¬θ` (conditioned) or
/// `ψ = ¬(η∧θ)` (literal).
pub fn opportunity(plan: &[ActionInstance], goal: &Formula, theta: &str, eta: &str, reading: EoReading) -> Formula {
    let th = unary(theta, x());
    let et = unary(eta, x());
    let qualified = Formula::and(et.clone(), th.clone());
    let other = match reading {
        EoReading::Conditioned => Formula::and(et, Formula::not(th)),
        EoReading::Literal => Formula::not(qualified.clone()),
    };
    let body = Formula::and(
        Formula::forall(GOAL_VAR, Formula::implies(qualified, goal.clone())),
        Formula::forall(GOAL_VAR, Formula::implies(other, goal.clone())),
    );
    after(plan, Formula::knows(body))
}

/// `∀x(θ ⊃ η) ∧ ∀x(¬θ ⊃ η)`
pub fn strong_equity(theta: &str, eta: &str) -> Formula {
    let th = unary(theta, x());
    let et = unary(eta, x());
    Formula::and(
        Formula::forall(GOAL_VAR, Formula::implies(th.clone(), et.clone())),
        Formula::forall(GOAL_VAR, Formula::implies(Formula::not(th), et)),
    )
}

/// `∃x(θ ∧ η) ∧ ∃x(¬θ ∧ η)`
pub fn weak_equity(theta: &str, eta: &str) -> Formula {
    let th = unary(theta, x());
    let et = unary(eta, x());
    Formula::and(
        Formula::exists(GOAL_VAR, Formula::and(th.clone(), et.clone())),
        Formula::exists(GOAL_VAR, Formula::and(Formula::not(th), et)),
    )
}

/// `∃x∃y(θ(x) ∧ ¬θ(y))`
pub fn integrity(theta: &str) -> Formula {
    let y = Term::Var("y".to_string());
    Formula::exists(
        GOAL_VAR,
        Formula::exists("y", Formula::and(unary(theta, x()), Formula::not(unary(theta, y)))),
    )
}

// ---------------------------------------------------------------------------
// Checkers

fn unary_predicate(engine: &Engine, name: &str, role: &str) -> Result<()> {
    match engine.theory().predicate(name) {
        None => Err(Error::Undeclared(format!("{role} predicate `{name}`"))),
        Some(p) if p.arity != 1 => {
            Err(Error::InvalidQuery(format!("{role} predicate `{name}` must be unary, not of arity {}", p.arity)))
        }
        Some(_) => Ok(()),
    }
}

fn check_goal(engine: &Engine, goal: &Formula, parametric: bool) -> Result<()> {
    let free: &[&str] = if parametric { &[GOAL_VAR] } else { &[] };
    engine.theory().check_formula(goal, free).map_err(|e| {
        if parametric {
            Error::InvalidQuery(format!("goal {goal}: {e}"))
        } else {
            Error::InvalidQuery(format!("goal {goal} must be closed for this notion: {e}"))
        }
    })
}

fn check_plan(engine: &Engine, plan: &[ActionInstance]) -> Result<()> {
    for a in plan {
        if engine.ground().action_index(a).is_none() {
            return Err(Error::Undeclared(format!("action {a}")));
        }
    }
    Ok(())
}

fn individual(engine: &Engine, q: &FairnessQuery, notion: Notion) -> Result<ObjectName> {
    let n = q
        .individual
        .clone()
        .ok_or_else(|| Error::InvalidQuery(format!("notion {notion} needs an individual")))?;
    if engine.theory().object(n.as_str()).is_none() {
        return Err(Error::Undeclared(format!("object `{n}`")));
    }
    Ok(n)
}

fn prefix_text(prefix: &[ActionInstance]) -> String {
    if prefix.is_empty() {
        "the empty prefix".to_string()
    } else {
        format!("prefix {} ({})", prefix.len(), display_plan(prefix))
    }
}

fn goal_detail(plan: &[ActionInstance], goal: &Formula) -> String {
    let after = if plan.is_empty() { "initially".to_string() } else { format!("after {}", display_plan(plan)) };
    format!("{goal} is not known {after}")
}

/// What the agent knows in the failing ignorance check, read off the
/// diagnostics.
fn known_attribute(v: &Verdict, theta: &str) -> String {
    let Some(d) = &v.diagnostics else { return format!("{theta}(?)") };
    match d.instantiation.last() {
        Some(b) => GroundAtom::new(theta, vec![b.object.clone()]).to_string(),
        None => d.subformula_path.last().cloned().unwrap_or_default(),
    }
}

/// First prefix (shortest first, the empty one included) at which the agent
/// knows a protected attribute.
fn check_ignorance(
    s: &mut Session<'_>,
    notion: Notion,
    plan: &[ActionInstance],
    theta: &str,
    who: Option<&ObjectName>,
) -> Result<Option<FairnessVerdict>> {
    for k in 0..=plan.len() {
        let prefix = &plan[..k];
        let f = match who {
            None => ignorance(prefix, theta),
            Some(n) => ignorance_of(prefix, theta, n),
        };
        let v = s.entails(&f)?;
        if !v.holds {
            let known = match who {
                None => known_attribute(&v, theta),
                Some(n) => GroundAtom::new(theta, vec![n.clone()]).to_string(),
            };
            let detail = format!("at {} the agent knows {known}", prefix_text(prefix));
            let mut out = FairnessVerdict::fail(notion, "ignorance-prefix", detail, v);
            out.failing_prefix = Some(prefix.to_vec());
            return Ok(Some(out));
        }
    }
    Ok(None)
}

fn check_clause(
    s: &mut Session<'_>,
    notion: Notion,
    clause: &str,
    f: &Formula,
    detail: impl FnOnce() -> String,
) -> Result<Option<FairnessVerdict>> {
    let v = s.entails(f)?;
    Ok((!v.holds).then(|| FairnessVerdict::fail(notion, clause, detail(), v)))
}

macro_rules! bail {
    ($e:expr) => {
        if let Some(v) = $e? {
            return Ok(v);
        }
    };
}

pub fn check_ftu(engine: &Engine, q: &FairnessQuery) -> Result<FairnessVerdict> {
    check_with(&mut engine.session(), Notion::Ftu, q)
}

pub fn check_ftu_individual(engine: &Engine, q: &FairnessQuery) -> Result<FairnessVerdict> {
    check_with(&mut engine.session(), Notion::FtuInd, q)
}

pub fn check_dp(engine: &Engine, q: &FairnessQuery) -> Result<FairnessVerdict> {
    check_with(&mut engine.session(), Notion::Dp, q)
}

pub fn check_strong_dp(engine: &Engine, q: &FairnessQuery) -> Result<FairnessVerdict> {
    check_with(&mut engine.session(), Notion::StrongDp, q)
}

pub fn check_ftu_dp(engine: &Engine, q: &FairnessQuery) -> Result<FairnessVerdict> {
    check_with(&mut engine.session(), Notion::FtuDp, q)
}

pub fn check_eo(engine: &Engine, q: &FairnessQuery) -> Result<FairnessVerdict> {
    check_with(&mut engine.session(), Notion::Eo, q)
}

pub fn check_cf(engine: &Engine, q: &FairnessQuery) -> Result<FairnessVerdict> {
    check_with(&mut engine.session(), Notion::Cf, q)
}

pub fn check_equitable_ftu(engine: &Engine, q: &FairnessQuery) -> Result<FairnessVerdict> {
    check_with(&mut engine.session(), Notion::EquitableFtu, q)
}

pub fn check_strong_equity(engine: &Engine, theta: &str, eta: &str) -> Result<FairnessVerdict> {
    strong_equity_in(&mut engine.session(), theta, eta)
}

pub fn check_weak_equity(engine: &Engine, theta: &str, eta: &str) -> Result<FairnessVerdict> {
    weak_equity_in(&mut engine.session(), theta, eta)
}

/// Dispatch on the notion. For the equity notions, the query's plan and goal
/// are ignored.
pub fn check(engine: &Engine, notion: Notion, q: &FairnessQuery) -> Result<FairnessVerdict> {
    check_with(&mut engine.session(), notion, q)
}

/// As [`check`], reusing the caches of an existing session. Checks that need
/// a derived theory (CF, equitable FTU) evaluate their last clause in a
/// fresh session over it.
pub fn check_with(s: &mut Session<'_>, notion: Notion, q: &FairnessQuery) -> Result<FairnessVerdict> {
    match notion {
        Notion::Ftu => ftu_in(s, notion, q, None),
        Notion::FtuInd => {
            let n = individual(s.engine(), q, notion)?;
            ftu_in(s, notion, q, Some(&n))
        }
        Notion::Dp => {
            bail!(dp_in(s, notion, q));
            Ok(FairnessVerdict::pass(notion))
        }
        Notion::StrongDp => {
            bail!(dp_in(s, notion, q));
            bail!(check_clause(s, notion, "knows-whether", &knows_whether(&q.plan, &q.protected), || {
                format!("after the plan the agent does not know for everyone whether {} holds", q.protected)
            }));
            Ok(FairnessVerdict::pass(notion))
        }
        Notion::FtuDp => {
            bail!(dp_in(s, notion, q));
            bail!(check_ignorance(s, notion, &q.plan, &q.protected, None));
            Ok(FairnessVerdict::pass(notion))
        }
        Notion::Eo => eo_in(s, q),
        Notion::Cf => cf_in(s, q),
        Notion::StrongEquity => strong_equity_in(s, &q.protected, property(q)?),
        Notion::WeakEquity => weak_equity_in(s, &q.protected, property(q)?),
        Notion::EquitableFtu => equitable_ftu_in(s, q),
    }
}

fn property(q: &FairnessQuery) -> Result<&str> {
    q.positive_property.as_deref().ok_or_else(|| Error::InvalidQuery("equity needs a positive property".into()))
}

fn ftu_in(s: &mut Session<'_>, notion: Notion, q: &FairnessQuery, who: Option<&ObjectName>) -> Result<FairnessVerdict> {
    let engine = s.engine();
    unary_predicate(engine, &q.protected, "protected")?;
    check_goal(engine, &q.goal, false)?;
    check_plan(engine, &q.plan)?;
    bail!(check_clause(s, notion, "knowledge-of-goal", &knowledge_of_goal(&q.plan, &q.goal), || goal_detail(
        &q.plan, &q.goal
    )));
    bail!(check_ignorance(s, notion, &q.plan, &q.protected, who));
    Ok(FairnessVerdict::pass(notion))
}

fn dp_in(s: &mut Session<'_>, notion: Notion, q: &FairnessQuery) -> Result<Option<FairnessVerdict>> {
    let engine = s.engine();
    unary_predicate(engine, &q.protected, "protected")?;
    check_goal(engine, &q.goal, true)?;
    check_plan(engine, &q.plan)?;
    check_clause(s, notion, "parity", &parity(&q.plan, &q.goal, &q.protected), || {
        let after = if q.plan.is_empty() { "initially".into() } else { format!("after {}", display_plan(&q.plan)) };
        format!("{after} the agent does not know {} for both groups of {}", q.goal, q.protected)
    })
}

fn eo_in(s: &mut Session<'_>, q: &FairnessQuery) -> Result<FairnessVerdict> {
    let notion = Notion::Eo;
    let engine = s.engine();
    unary_predicate(engine, &q.protected, "protected")?;
    let eta = q.criterion.as_deref().ok_or_else(|| Error::InvalidQuery("notion eo needs a criterion".into()))?;
    unary_predicate(engine, eta, "criterion")?;
    check_goal(engine, &q.goal, true)?;
    check_plan(engine, &q.plan)?;
    let f = opportunity(&q.plan, &q.goal, &q.protected, eta, q.eo_reading);
    let mut out = match check_clause(s, notion, "opportunity", &f, || {
        format!("the agent does not know {} for every {eta} individual in both groups of {}", q.goal, q.protected)
    })? {
        Some(v) => v,
        None => FairnessVerdict::pass(notion),
    };
    out.reading = Some(q.eo_reading);
    Ok(out)
}

fn cf_in(s: &mut Session<'_>, q: &FairnessQuery) -> Result<FairnessVerdict> {
    let notion = Notion::Cf;
    let engine = s.engine();
    unary_predicate(engine, &q.protected, "protected")?;
    check_goal(engine, &q.goal, false)?;
    check_plan(engine, &q.plan)?;
    let n = individual(engine, q, notion)?;
    let atom = GroundAtom::new(q.protected.clone(), vec![n.clone()]);
    let lit = Formula::ground_atom(&atom);
    let b = if s.entails(&lit)?.holds {
        true
    } else if s.entails(&Formula::not(lit.clone()))?.holds {
        false
    } else {
        let v = s.entails(&lit)?;
        return Ok(FairnessVerdict::fail(
            notion,
            "attribute-undetermined",
            format!("the theory entails neither {atom} nor its negation"),
            v,
        ));
    };
    let goal = knowledge_of_goal(&q.plan, &q.goal);
    bail!(check_clause(s, notion, "knowledge-of-goal", &goal, || goal_detail(&q.plan, &q.goal)));

    let flipped = if b { Formula::not(lit) } else { lit };
    let derived = restrict_engine(&forget_engine(engine, std::slice::from_ref(&atom))?, &flipped)?;
    let note = format!("Forget(Σ, {atom}) with {flipped} added to what is true and what is known");
    let v = derived.entails(&goal)?;
    let mut out = if v.holds {
        FairnessVerdict::pass(notion)
    } else {
        FairnessVerdict::fail(
            notion,
            "counterfactual",
            format!("with {atom} forgotten and set to {}, {}", !b, goal_detail(&q.plan, &q.goal)),
            v,
        )
    };
    out.derived_theory = Some(note);
    Ok(out)
}

fn equity_predicates<'q>(engine: &Engine, theta: &str, eta: Option<&'q str>) -> Result<&'q str> {
    unary_predicate(engine, theta, "protected")?;
    let eta = eta.ok_or_else(|| Error::InvalidQuery("equity needs a positive property".into()))?;
    unary_predicate(engine, eta, "positive property")?;
    Ok(eta)
}

fn strong_equity_in(s: &mut Session<'_>, theta: &str, eta: &str) -> Result<FairnessVerdict> {
    let notion = Notion::StrongEquity;
    equity_predicates(s.engine(), theta, Some(eta))?;
    bail!(check_clause(s, notion, "equity", &strong_equity(theta, eta), || {
        format!("not everyone in both groups of {theta} is {eta}")
    }));
    Ok(FairnessVerdict::pass(notion))
}

fn weak_equity_in(s: &mut Session<'_>, theta: &str, eta: &str) -> Result<FairnessVerdict> {
    let notion = Notion::WeakEquity;
    equity_predicates(s.engine(), theta, Some(eta))?;
    bail!(check_clause(s, notion, "integrity-violation", &integrity(theta), || {
        format!("the theory does not entail that both groups of {theta} are nonempty")
    }));
    bail!(check_clause(s, notion, "equity", &weak_equity(theta, eta), || {
        format!("some group of {theta} may have no {eta} member")
    }));
    Ok(FairnessVerdict::pass(notion))
}

fn equitable_ftu_in(s: &mut Session<'_>, q: &FairnessQuery) -> Result<FairnessVerdict> {
    let notion = Notion::EquitableFtu;
    let engine = s.engine();
    let eta = equity_predicates(engine, &q.protected, q.positive_property.as_deref())?;
    let equity = weak_equity_in(s, &q.protected, eta)?;
    let mut out = if equity.holds {
        let mut v = ftu_in(s, notion, q, None)?;
        v.derived_theory = Some("weak equity holds; FTU checked on the original theory".into());
        v
    } else {
        let atoms: Vec<GroundAtom> =
            engine.theory().objects.iter().map(|o| GroundAtom::new(eta.to_string(), vec![o.clone()])).collect();
        let forgotten = forget_engine(engine, &atoms)?;
        let mut v = ftu_in(&mut forgotten.session(), notion, q, None)?;
        let names: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
        v.derived_theory = Some(format!(
            "weak equity fails; FTU checked on Forget(Σ, {{{}}}) (forgetting again changes nothing, so the recursion stops here)",
            names.join(", ")
        ));
        v
    };
    out.notion = notion;
    Ok(out)
}

/// Unary predicates `η ≠ θ` with `Σ ⊨ ∀x(η(x) ⊃ θ(x))`, in declaration order.
pub fn proxy_set(engine: &Engine, protected: &str) -> Result<Vec<String>> {
    unary_predicate(engine, protected, "protected")?;
    let mut s = engine.session();
    let mut out = Vec::new();
    for p in engine.theory().unary_predicates() {
        if p.name == protected {
            continue;
        }
        let f = Formula::forall(GOAL_VAR, Formula::implies(unary(&p.name, x()), unary(protected, x())));
        if s.entails(&f)?.holds {
            out.push(p.name.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::dsl::{parse_formula_with_free, parse_plan};

    fn setup(theory: crate::Theory) -> Engine {
        Engine::new(&theory).unwrap()
    }

    fn q(e: &Engine, plan: &str, goal: &str) -> FairnessQuery {
        let t = e.theory();
        FairnessQuery::new(parse_plan(plan, t).unwrap(), parse_formula_with_free(goal, t, &["x"]).unwrap(), "Male")
    }

    #[test]
    fn ftu_examples() {
        let e = setup(bundled::loan());
        assert!(check_ftu(&e, &q(&e, "approve(n); approve(nprime)", "forall x. hasLoan(x)")).unwrap().holds);
        let v = check_ftu(&e, &q(&e, "isMale(n); approve(n); approve(nprime)", "forall x. hasLoan(x)")).unwrap();
        assert_eq!(v.failed_clause.as_deref(), Some("ignorance-prefix"));
        assert_eq!(v.failing_prefix.as_ref().unwrap().len(), 1);
        assert!(v.detail.unwrap().contains("Male(n)"));
        let v = check_ftu(&e, &q(&e, "", "forall x. hasLoan(x)")).unwrap();
        assert_eq!(v.failed_clause.as_deref(), Some("knowledge-of-goal"));
    }

    #[test]
    fn ftu_rejects_open_goal() {
        let e = setup(bundled::loan());
        assert!(matches!(check_ftu(&e, &q(&e, "", "hasLoan(x)")), Err(Error::InvalidQuery(_))));
    }

    #[test]
    fn ftu_individual_examples() {
        let e = setup(bundled::loan());
        let ind = |plan: &str, n: &str| check_ftu_individual(&e, &q(&e, plan, "hasLoan(n)").with_individual(n)).unwrap();
        assert!(ind("approve(n); approve(nprime)", "n").holds);
        assert!(ind("isMale(nprime); approve(n)", "n").holds);
        // Sensing teaches ¬Male(nprime); the clause only forbids knowing Male(nprime).
        assert!(ind("isMale(nprime); approve(n)", "nprime").holds);
        let learned = crate::parse_formula("[isMale(nprime)] K(!Male(nprime))", e.theory()).unwrap();
        assert!(e.entails(&learned).unwrap().holds);
        let v = ind("isMale(n); approve(n)", "n");
        assert_eq!(v.failed_clause.as_deref(), Some("ignorance-prefix"));
        assert_eq!(v.failing_prefix.unwrap().len(), 1);
    }

    #[test]
    fn dp_family_examples() {
        let e = setup(bundled::loan());
        let both = "approve(n); approve(nprime)";
        assert!(check_dp(&e, &q(&e, both, "hasLoan(x)")).unwrap().holds);
        assert!(!check_dp(&e, &q(&e, "approve(n)", "hasLoan(x)")).unwrap().holds);
        assert!(!check_dp(&e, &q(&e, "promote(n); promote(nprime)", "highSalary(x)")).unwrap().holds);
        let sensed = "isMale(n); isMale(nprime); approve(n); approve(nprime)";
        assert!(check_strong_dp(&e, &q(&e, sensed, "hasLoan(x)")).unwrap().holds);
        let v = check_strong_dp(&e, &q(&e, both, "hasLoan(x)")).unwrap();
        assert_eq!(v.failed_clause.as_deref(), Some("knows-whether"));
        assert!(check_ftu_dp(&e, &q(&e, both, "hasLoan(x)")).unwrap().holds);
        assert!(check_ftu_dp(&e, &q(&e, "approve(nprime); approve(n)", "hasLoan(x)")).unwrap().holds);
        let v = check_ftu_dp(&e, &q(&e, "isMale(n); approve(n); approve(nprime)", "hasLoan(x)")).unwrap();
        assert_eq!(v.failing_prefix.unwrap().len(), 1);
    }

    #[test]
    fn eo_examples() {
        let e = setup(bundled::loan());
        let eo = |plan: &str, r: EoReading| {
            check_eo(&e, &q(&e, plan, "highSalary(x)").with_criterion("Eligible").with_reading(r)).unwrap()
        };
        let v = eo("promote(n); promote(nprime)", EoReading::Conditioned);
        assert!(v.holds);
        assert_eq!(v.reading, Some(EoReading::Conditioned));
        let v = eo("promote(n); promote(nprime)", EoReading::Literal);
        assert!(!v.holds);
        assert_eq!(v.reading, Some(EoReading::Literal));
        assert!(!eo("", EoReading::Conditioned).holds);
        assert!(check_eo(&e, &q(&e, "", "highSalary(x)")).is_err());
    }

    #[test]
    fn cf_examples() {
        let e = setup(bundled::loan());
        let cf = |plan: &str, goal: &str, n: &str| check_cf(&e, &q(&e, plan, goal).with_individual(n)).unwrap();
        let v = cf("approve(n)", "hasLoan(n)", "n");
        assert!(v.holds);
        assert!(v.derived_theory.unwrap().contains("Forget"));
        let v = cf("promote(nprime)", "highSalary(nprime)", "nprime");
        assert_eq!(v.failed_clause.as_deref(), Some("knowledge-of-goal"));
        assert!(cf("promote(n)", "highSalary(n)", "n").holds);
    }

    #[test]
    fn cf_undetermined_attribute() {
        let t = bundled::loan();
        let t = t.with_initial(parse_formula_with_free("Eligible(n)", &t, &[]).unwrap(), t.init_known.clone());
        let e = setup(t);
        let v = check_cf(&e, &q(&e, "approve(n)", "hasLoan(n)").with_individual("n")).unwrap();
        assert_eq!(v.failed_clause.as_deref(), Some("attribute-undetermined"));
    }

    #[test]
    fn equity_examples() {
        let e = setup(bundled::loan());
        assert!(!check_strong_equity(&e, "Male", "Eligible").unwrap().holds);
        let v = check_weak_equity(&e, "Male", "Eligible").unwrap();
        assert_eq!(v.failed_clause.as_deref(), Some("equity"));

        let t = bundled::loan();
        let all = parse_formula_with_free("Male(n) & !Male(nprime) & Eligible(n) & Eligible(nprime)", &t, &[]).unwrap();
        let e2 = setup(t.with_initial(all, t.init_known.clone()));
        assert!(check_strong_equity(&e2, "Male", "Eligible").unwrap().holds);
        assert!(check_weak_equity(&e2, "Male", "Eligible").unwrap().holds);

        let single = crate::dsl::parse_theory(&crate::TheorySource::new(
            "domain s\nobjects: o\nrigid M/1\nrigid P/1\ninit_true: M(o) & P(o)\n",
            "<s>",
        ))
        .unwrap();
        let v = check_weak_equity(&setup(single), "M", "P").unwrap();
        assert_eq!(v.failed_clause.as_deref(), Some("integrity-violation"));
    }

    #[test]
    fn equitable_ftu_examples() {
        let e = setup(bundled::loan());
        let query = q(&e, "promote(n); promote(nprime)", "forall x. highSalary(x)").with_property("Eligible");
        let v = check_equitable_ftu(&e, &query).unwrap();
        assert!(!v.holds);
        assert_eq!(v.notion, Notion::EquitableFtu);
        assert!(v.derived_theory.unwrap().contains("Forget"));

        let e = setup(bundled::loan_make());
        let query = q(&e, "make(n); make(nprime); promote(n); promote(nprime)", "forall x. highSalary(x)")
            .with_property("Eligible");
        assert!(check_equitable_ftu(&e, &query).unwrap().holds);
    }

    #[test]
    fn underrepresented_strong_dp() {
        let e = setup(bundled::loan_underrep());
        let mut query = q(&e, "checkU(n); checkU(nprime); approve(n); approve(nprime)", "hasLoan(x)");
        query.protected = "Underrepresented".into();
        assert!(check_strong_dp(&e, &query).unwrap().holds);
    }

    #[test]
    fn proxy_examples() {
        let e = setup(bundled::loan_eton());
        assert!(proxy_set(&e, "Male").unwrap().contains(&"EtonForBoys".to_string()));
        let e = setup(bundled::loan());
        assert_eq!(proxy_set(&e, "Male").unwrap(), vec!["Eligible".to_string()]);
        let single = crate::dsl::parse_theory(&crate::TheorySource::new("domain s\nobjects: o\nrigid M/1\n", "<s>")).unwrap();
        assert!(proxy_set(&setup(single), "M").unwrap().is_empty());
    }

    #[test]
    fn notion_names_round_trip() {
        for n in Notion::ALL {
            assert_eq!(n.as_str().parse::<Notion>().unwrap(), n);
        }
        assert!("fair".parse::<Notion>().is_err());
    }
}
