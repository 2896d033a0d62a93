//! Terms, atoms, actions and the formula AST, together with substitution,
//! grounding over a finite domain and static (non-modal) evaluation.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A standard name for an object. Distinct names denote distinct objects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ObjectName(String);

impl ObjectName {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        debug_assert!(!name.is_empty(), "object names are nonempty");
        ObjectName(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjectName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PredicateKind {
    Rigid,
    Fluent,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredicateDecl {
    pub name: String,
    pub arity: usize,
    pub kind: PredicateKind,
}

/// An action symbol with its parameter names, optional sensing schema (the
/// right-hand side of `SF`) and precondition schema (the right-hand side of
/// `Poss`).
#[derive(Debug, Clone, PartialEq)]
pub struct ActionDecl {
    pub name: String,
    pub params: Vec<String>,
    pub sensing: Option<Formula>,
    pub precondition: Formula,
}

impl ActionDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// Successor state axiom `[a]F(params) <-> rhs`, where `rhs` may mention the
/// distinguished action variable [`ACTION_VAR`].
#[derive(Debug, Clone, PartialEq)]
pub struct SsaDecl {
    pub fluent: String,
    pub params: Vec<String>,
    pub rhs: Formula,
}

/// Name of the action variable available inside successor state axioms.
pub const ACTION_VAR: &str = "a";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<ObjectName>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<ObjectName>) -> Self {
        GroundAtom { predicate: predicate.into(), args }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_application(f, &self.predicate, &self.args, true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ActionInstance {
    pub action: String,
    pub args: Vec<ObjectName>,
}

impl ActionInstance {
    pub fn new(action: impl Into<String>, args: Vec<ObjectName>) -> Self {
        ActionInstance { action: action.into(), args }
    }

    pub fn to_term(&self) -> ActionTerm {
        ActionTerm {
            action: self.action.clone(),
            args: self.args.iter().cloned().map(Term::Obj).collect(),
        }
    }
}

impl fmt::Display for ActionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // actions always print with parentheses so `noop()` stays an action
        write_application(f, &self.action, &self.args, false)
    }
}

fn write_application<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    head: &str,
    args: &[T],
    omit_empty: bool,
) -> fmt::Result {
    f.write_str(head)?;
    if args.is_empty() && omit_empty {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, arg) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{arg}")?;
    }
    f.write_str(")")
}

/// Render a plan as `act; act; ...`, the syntax accepted by the plan parser.
pub fn display_plan(plan: &[ActionInstance]) -> String {
    plan.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Obj(ObjectName),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Obj(o) => write!(f, "{o}"),
        }
    }
}

/// An action symbol applied to (possibly non-ground) terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionTerm {
    pub action: String,
    pub args: Vec<Term>,
}

impl ActionTerm {
    pub fn to_instance(&self) -> Option<ActionInstance> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Obj(o) => Some(o.clone()),
                Term::Var(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(ActionInstance::new(self.action.clone(), args))
    }
}

impl fmt::Display for ActionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_application(f, &self.action, &self.args, false)
    }
}

/// Left-hand side of an action equality: the action variable or an action term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ActionOperand {
    Var(String),
    Term(ActionTerm),
}

impl fmt::Display for ActionOperand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionOperand::Var(v) => f.write_str(v),
            ActionOperand::Term(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    True,
    False,
    Atom { predicate: String, args: Vec<Term> },
    TermEq(Term, Term),
    ActionEq(ActionOperand, ActionTerm),
    /// `SF(a)`: the sensing outcome of an action at the current situation.
    Sense(ActionTerm),
    /// `Poss(a)`: executability of an action at the current situation.
    Poss(ActionTerm),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    Knows(Box<Formula>),
    OnlyKnows(Box<Formula>),
    AfterAction(ActionTerm, Box<Formula>),
    AfterPlan(Vec<ActionTerm>, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom { predicate: predicate.into(), args }
    }

    pub fn ground_atom(atom: &GroundAtom) -> Self {
        Formula::atom(atom.predicate.clone(), atom.args.iter().cloned().map(Term::Obj).collect())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn knows(f: Formula) -> Self {
        Formula::Knows(Box::new(f))
    }

    pub fn only_knows(f: Formula) -> Self {
        Formula::OnlyKnows(Box::new(f))
    }

    /// `[a1; ...; ak] f`. An empty plan yields `f` itself wrapped in an
    /// empty `AfterPlan`, which evaluates exactly like `f`.
    pub fn after_plan(plan: &[ActionInstance], f: Formula) -> Self {
        Formula::AfterPlan(plan.iter().map(ActionInstance::to_term).collect(), Box::new(f))
    }

    /// Conjunction of a list, `true` when empty. Left-nested.
    pub fn conjoin(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Disjunction of a list, `false` when empty. Left-nested.
    pub fn disjoin(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// True when the formula has no `K`, `O`, `[a]`, `SF` or `Poss` node.
    pub fn is_static(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if matches!(
                f,
                Formula::Knows(_)
                    | Formula::OnlyKnows(_)
                    | Formula::AfterAction(..)
                    | Formula::AfterPlan(..)
                    | Formula::Sense(_)
                    | Formula::Poss(_)
            ) {
                ok = false;
            }
        });
        ok
    }

    /// True when the formula mentions `K`, `O` or an action modality.
    pub fn is_modal(&self) -> bool {
        let mut modal = false;
        self.visit(&mut |f| {
            if matches!(
                f,
                Formula::Knows(_) | Formula::OnlyKnows(_) | Formula::AfterAction(..) | Formula::AfterPlan(..)
            ) {
                modal = true;
            }
        });
        modal
    }

    /// Pre-order traversal over every subformula.
    pub fn visit(&self, visitor: &mut impl FnMut(&Formula)) {
        visitor(self);
        match self {
            Formula::Not(f)
            | Formula::Forall(_, f)
            | Formula::Exists(_, f)
            | Formula::Knows(f)
            | Formula::OnlyKnows(f)
            | Formula::AfterAction(_, f)
            | Formula::AfterPlan(_, f) => f.visit(visitor),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.visit(visitor);
                r.visit(visitor);
            }
            _ => {}
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Ground atoms occurring in a ground formula, deduplicated, in order of
    /// first occurrence.
    pub fn atoms(&self) -> Vec<GroundAtom> {
        let mut out: Vec<GroundAtom> = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom { predicate, args } = f {
                if let Some(args) = ground_args(args) {
                    let atom = GroundAtom::new(predicate.clone(), args);
                    if !out.contains(&atom) {
                        out.push(atom);
                    }
                }
            }
        });
        out
    }
}

fn ground_args(args: &[Term]) -> Option<Vec<ObjectName>> {
    args.iter()
        .map(|t| match t {
            Term::Obj(o) => Some(o.clone()),
            Term::Var(_) => None,
        })
        .collect()
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
    let note = |v: &String, bound: &Vec<String>, out: &mut Vec<String>| {
        if !bound.contains(v) && !out.contains(v) {
            out.push(v.clone());
        }
    };
    let terms = |ts: &[Term], bound: &Vec<String>, out: &mut Vec<String>| {
        for t in ts {
            if let Term::Var(v) = t {
                note(v, bound, out);
            }
        }
    };
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom { args, .. } => terms(args, bound, out),
        Formula::TermEq(l, r) => terms(&[l.clone(), r.clone()], bound, out),
        Formula::ActionEq(lhs, rhs) => {
            match lhs {
                ActionOperand::Var(v) => {
                    if !bound.contains(v) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                ActionOperand::Term(t) => terms(&t.args, bound, out),
            }
            terms(&rhs.args, bound, out);
        }
        Formula::Sense(t) | Formula::Poss(t) => terms(&t.args, bound, out),
        Formula::Not(g) | Formula::Knows(g) | Formula::OnlyKnows(g) => collect_free(g, bound, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            collect_free(l, bound, out);
            collect_free(r, bound, out);
        }
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            bound.push(v.clone());
            collect_free(g, bound, out);
            bound.pop();
        }
        Formula::AfterAction(t, g) => {
            terms(&t.args, bound, out);
            collect_free(g, bound, out);
        }
        Formula::AfterPlan(ts, g) => {
            for t in ts {
                terms(&t.args, bound, out);
            }
            collect_free(g, bound, out);
        }
    }
}

/// Value bound to a variable by [`substitute`].
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Object(ObjectName),
    Action(ActionInstance),
}

impl From<ObjectName> for Value {
    fn from(o: ObjectName) -> Self {
        Value::Object(o)
    }
}

impl From<ActionInstance> for Value {
    fn from(a: ActionInstance) -> Self {
        Value::Action(a)
    }
}

/// Replace every free occurrence of `var` with `value`.
///
/// Substituted values are ground, so no capture can occur; occurrences under
/// a binder for the same variable are left untouched.
pub fn substitute(f: &Formula, var: &str, value: &Value) -> Result<Formula> {
    let sub_term = |t: &Term| -> Result<Term> {
        match t {
            Term::Var(v) if v == var => match value {
                Value::Object(o) => Ok(Term::Obj(o.clone())),
                Value::Action(a) => Err(Error::Malformed(format!(
                    "variable `{var}` is used as an object but bound to action {a}"
                ))),
            },
            other => Ok(other.clone()),
        }
    };
    let sub_action = |t: &ActionTerm| -> Result<ActionTerm> {
        Ok(ActionTerm { action: t.action.clone(), args: t.args.iter().map(sub_term).collect::<Result<_>>()? })
    };
    let rec = |g: &Formula| substitute(g, var, value).map(Box::new);
    Ok(match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom { predicate, args } => Formula::Atom {
            predicate: predicate.clone(),
            args: args.iter().map(sub_term).collect::<Result<_>>()?,
        },
        Formula::TermEq(l, r) => Formula::TermEq(sub_term(l)?, sub_term(r)?),
        Formula::ActionEq(lhs, rhs) => {
            let lhs = match lhs {
                ActionOperand::Var(v) if v == var => match value {
                    Value::Action(a) => ActionOperand::Term(a.to_term()),
                    Value::Object(o) => {
                        return Err(Error::Malformed(format!(
                            "variable `{var}` is used as an action but bound to object {o}"
                        )))
                    }
                },
                ActionOperand::Var(v) => ActionOperand::Var(v.clone()),
                ActionOperand::Term(t) => ActionOperand::Term(sub_action(t)?),
            };
            Formula::ActionEq(lhs, sub_action(rhs)?)
        }
        Formula::Sense(t) => Formula::Sense(sub_action(t)?),
        Formula::Poss(t) => Formula::Poss(sub_action(t)?),
        Formula::Not(g) => Formula::Not(rec(g)?),
        Formula::And(l, r) => Formula::And(rec(l)?, rec(r)?),
        Formula::Or(l, r) => Formula::Or(rec(l)?, rec(r)?),
        Formula::Implies(l, r) => Formula::Implies(rec(l)?, rec(r)?),
        Formula::Iff(l, r) => Formula::Iff(rec(l)?, rec(r)?),
        Formula::Forall(v, g) if v == var => Formula::Forall(v.clone(), g.clone()),
        Formula::Exists(v, g) if v == var => Formula::Exists(v.clone(), g.clone()),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), rec(g)?),
        Formula::Exists(v, g) => Formula::Exists(v.clone(), rec(g)?),
        Formula::Knows(g) => Formula::Knows(rec(g)?),
        Formula::OnlyKnows(g) => Formula::OnlyKnows(rec(g)?),
        Formula::AfterAction(t, g) => Formula::AfterAction(sub_action(t)?, rec(g)?),
        Formula::AfterPlan(ts, g) => {
            Formula::AfterPlan(ts.iter().map(sub_action).collect::<Result<_>>()?, rec(g)?)
        }
    })
}

/// Expand quantifiers over `objects` and simplify.
///
/// `forall` becomes a left-nested conjunction over the objects in order,
/// `exists` a disjunction. Equalities between names are decided by the
/// unique-name assumption. Any variable left unbound is an error.
pub fn ground(f: &Formula, objects: &[ObjectName]) -> Result<Formula> {
    if objects.is_empty() {
        return Err(Error::Malformed("grounding requires a nonempty domain".into()));
    }
    let g = ground_rec(f, objects)?;
    if let Some(v) = g.free_vars().into_iter().next() {
        return Err(Error::Malformed(format!("unbound variable `{v}`")));
    }
    Ok(simplify(&g))
}

fn ground_rec(f: &Formula, objects: &[ObjectName]) -> Result<Formula> {
    let rec = |g: &Formula| ground_rec(g, objects).map(Box::new);
    Ok(match f {
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let instances = objects
                .iter()
                .map(|o| ground_rec(&substitute(body, v, &Value::Object(o.clone()))?, objects))
                .collect::<Result<Vec<_>>>()?;
            if matches!(f, Formula::Forall(..)) {
                Formula::conjoin(instances)
            } else {
                Formula::disjoin(instances)
            }
        }
        Formula::Not(g) => Formula::Not(rec(g)?),
        Formula::And(l, r) => Formula::And(rec(l)?, rec(r)?),
        Formula::Or(l, r) => Formula::Or(rec(l)?, rec(r)?),
        Formula::Implies(l, r) => Formula::Implies(rec(l)?, rec(r)?),
        Formula::Iff(l, r) => Formula::Iff(rec(l)?, rec(r)?),
        Formula::Knows(g) => Formula::Knows(rec(g)?),
        Formula::OnlyKnows(g) => Formula::OnlyKnows(rec(g)?),
        Formula::AfterAction(t, g) => Formula::AfterAction(t.clone(), rec(g)?),
        Formula::AfterPlan(ts, g) => Formula::AfterPlan(ts.clone(), rec(g)?),
        other => other.clone(),
    })
}

/// Constant folding and unique-name resolution. Semantics preserving; the
/// result is a fixpoint (simplifying twice changes nothing).
pub fn simplify(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        TermEq(Term::Obj(l), Term::Obj(r)) => bool_formula(l == r),
        TermEq(Term::Var(l), Term::Var(r)) if l == r => True,
        ActionEq(ActionOperand::Term(l), r) => match (l.to_instance(), r.to_instance()) {
            (Some(l), Some(r)) => bool_formula(l == r),
            _ if l.action != r.action || l.args.len() != r.args.len() => False,
            _ => f.clone(),
        },
        Not(g) => match simplify(g) {
            True => False,
            False => True,
            g => Formula::not(g),
        },
        And(l, r) => match (simplify(l), simplify(r)) {
            (False, _) | (_, False) => False,
            (True, g) | (g, True) => g,
            (l, r) => Formula::and(l, r),
        },
        Or(l, r) => match (simplify(l), simplify(r)) {
            (True, _) | (_, True) => True,
            (False, g) | (g, False) => g,
            (l, r) if l == r => l,
            (l, r) => Formula::or(l, r),
        },
        Implies(l, r) => match (simplify(l), simplify(r)) {
            (False, _) | (_, True) => True,
            (True, g) => g,
            (g, False) => simplify(&Formula::not(g)),
            (l, r) => Formula::implies(l, r),
        },
        Iff(l, r) => match (simplify(l), simplify(r)) {
            (True, g) | (g, True) => g,
            (False, g) | (g, False) => simplify(&Formula::not(g)),
            (l, r) => Formula::iff(l, r),
        },
        Forall(v, g) => Formula::forall(v.clone(), simplify(g)),
        Exists(v, g) => Formula::exists(v.clone(), simplify(g)),
        Knows(g) => match simplify(g) {
            True => True,
            g => Formula::knows(g),
        },
        OnlyKnows(g) => Formula::only_knows(simplify(g)),
        AfterAction(t, g) => match simplify(g) {
            g @ (True | False) => g,
            g => AfterAction(t.clone(), Box::new(g)),
        },
        AfterPlan(ts, g) => match simplify(g) {
            g @ (True | False) => g,
            g => AfterPlan(ts.clone(), Box::new(g)),
        },
        other => other.clone(),
    }
}

fn bool_formula(b: bool) -> Formula {
    if b {
        Formula::True
    } else {
        Formula::False
    }
}

/// Classical truth value of a ground, non-modal formula under `valuation`.
pub fn eval_static(f: &Formula, valuation: &impl Fn(&GroundAtom) -> bool) -> Result<bool> {
    use Formula::*;
    Ok(match f {
        True => true,
        False => false,
        Atom { predicate, args } => {
            let args = ground_args(args)
                .ok_or_else(|| Error::Malformed(format!("atom {} is not ground", display_atom(predicate, args))))?;
            valuation(&GroundAtom::new(predicate.clone(), args))
        }
        TermEq(Term::Obj(l), Term::Obj(r)) => l == r,
        TermEq(..) => return Err(Error::Malformed("equality over unbound variables".into())),
        ActionEq(ActionOperand::Term(l), r) => match (l.to_instance(), r.to_instance()) {
            (Some(l), Some(r)) => l == r,
            _ => return Err(Error::Malformed("action equality is not ground".into())),
        },
        ActionEq(ActionOperand::Var(v), _) => {
            return Err(Error::Malformed(format!("unbound action variable `{v}`")))
        }
        Not(g) => !eval_static(g, valuation)?,
        And(l, r) => eval_static(l, valuation)? && eval_static(r, valuation)?,
        Or(l, r) => eval_static(l, valuation)? || eval_static(r, valuation)?,
        Implies(l, r) => !eval_static(l, valuation)? || eval_static(r, valuation)?,
        Iff(l, r) => eval_static(l, valuation)? == eval_static(r, valuation)?,
        Forall(v, _) | Exists(v, _) => {
            return Err(Error::Malformed(format!("quantifier over `{v}` in a formula that should be ground")))
        }
        Knows(_) | OnlyKnows(_) | AfterAction(..) | AfterPlan(..) | Sense(_) | Poss(_) => {
            return Err(Error::NotStatic(f.to_string()))
        }
    })
}

fn display_atom(predicate: &str, args: &[Term]) -> String {
    Formula::atom(predicate, args.to_vec()).to_string()
}

// Pretty printing. Output re-parses to a structurally identical formula.

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Iff = 1,
    Implies = 2,
    Or = 3,
    And = 4,
    Unary = 5,
}

impl Formula {
    fn prec(&self) -> Option<Prec> {
        match self {
            Formula::Iff(..) => Some(Prec::Iff),
            Formula::Implies(..) => Some(Prec::Implies),
            Formula::Or(..) => Some(Prec::Or),
            Formula::And(..) => Some(Prec::And),
            // quantifiers extend to the right as far as possible
            Formula::Forall(..) | Formula::Exists(..) => None,
            _ => Some(Prec::Unary),
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, min: Prec) -> fmt::Result {
        match self.prec() {
            Some(p) if p >= min && !(min == Prec::Unary && matches!(self, Formula::TermEq(..) | Formula::ActionEq(..))) => {
                write!(f, "{self}")
            }
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom { predicate, args } => write_application(f, predicate, args, true),
            Formula::TermEq(l, r) => write!(f, "{l} == {r}"),
            Formula::ActionEq(l, r) => write!(f, "{l} == {r}"),
            Formula::Sense(t) => write!(f, "SF({t})"),
            Formula::Poss(t) => write!(f, "Poss({t})"),
            Formula::Not(g) => {
                f.write_str("!")?;
                g.fmt_operand(f, Prec::Unary)
            }
            Formula::And(l, r) => binary(f, l, r, "&", Prec::And),
            Formula::Or(l, r) => binary(f, l, r, "|", Prec::Or),
            Formula::Implies(l, r) => {
                // right associative
                l.fmt_operand(f, Prec::Or)?;
                f.write_str(" -> ")?;
                r.fmt_operand(f, Prec::Implies)
            }
            Formula::Iff(l, r) => binary(f, l, r, "<->", Prec::Iff),
            Formula::Forall(v, g) => write!(f, "forall {v}. {g}"),
            Formula::Exists(v, g) => write!(f, "exists {v}. {g}"),
            Formula::Knows(g) => write!(f, "K({g})"),
            Formula::OnlyKnows(g) => write!(f, "O({g})"),
            Formula::AfterAction(t, g) => {
                write!(f, "[{t}] ")?;
                g.fmt_operand(f, Prec::Unary)
            }
            Formula::AfterPlan(ts, g) => {
                f.write_str("[")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{t}")?;
                }
                // a single action would re-parse as AfterAction
                if ts.len() == 1 {
                    f.write_str(";")?;
                }
                f.write_str("] ")?;
                g.fmt_operand(f, Prec::Unary)
            }
        }
    }
}

/// Left-associative binary operator.
fn binary(f: &mut fmt::Formatter<'_>, l: &Formula, r: &Formula, op: &str, prec: Prec) -> fmt::Result {
    l.fmt_operand(f, prec)?;
    write!(f, " {op} ")?;
    let tighter = match prec {
        Prec::Iff => Prec::Implies,
        Prec::Implies => Prec::Or,
        Prec::Or => Prec::And,
        _ => Prec::Unary,
    };
    r.fmt_operand(f, tighter)
}
