//! The background theory: declared symbols, initial theories for the world
//! (`init_true`) and for the agent (`init_known`), and the shared dynamics
//! (successor state, precondition and sensing axioms).

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{
    ActionDecl, ActionOperand, ActionTerm, Formula, GroundAtom, ObjectName, PredicateDecl, PredicateKind,
    SsaDecl, Term, ACTION_VAR,
};

/// Identifiers with a fixed meaning in formulas.
pub const RESERVED: &[&str] = &["true", "false", "forall", "exists", "K", "O", "SF", "Poss"];

#[derive(Debug, Clone, PartialEq)]
pub struct Theory {
    pub name: String,
    pub objects: Vec<ObjectName>,
    pub predicates: Vec<PredicateDecl>,
    pub actions: Vec<ActionDecl>,
    pub ssas: Vec<SsaDecl>,
    /// What is true initially.
    pub init_true: Formula,
    /// What the agent knows (only-knows) initially.
    pub init_known: Formula,
}

impl Theory {
    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionDecl> {
        self.actions.iter().find(|a| a.name == name)
    }

    pub fn object(&self, name: &str) -> Option<&ObjectName> {
        self.objects.iter().find(|o| o.as_str() == name)
    }

    pub fn ssa(&self, fluent: &str) -> Option<&SsaDecl> {
        self.ssas.iter().find(|s| s.fluent == fluent)
    }

    pub fn unary_predicates(&self) -> impl Iterator<Item = &PredicateDecl> {
        self.predicates.iter().filter(|p| p.arity == 1)
    }

    /// Resolve a ground atom against the declarations.
    pub fn check_atom(&self, atom: &GroundAtom) -> Result<()> {
        let decl = self
            .predicate(&atom.predicate)
            .ok_or_else(|| Error::Undeclared(format!("predicate `{}`", atom.predicate)))?;
        if decl.arity != atom.args.len() {
            return Err(Error::Malformed(format!(
                "{atom}: `{}` expects {} argument(s)",
                decl.name, decl.arity
            )));
        }
        for o in &atom.args {
            if self.object(o.as_str()).is_none() {
                return Err(Error::Undeclared(format!("object `{o}`")));
            }
        }
        Ok(())
    }

    /// Check every declaration and axiom. Parsed theories pass this by
    /// construction; programmatically built ones should call it.
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::InvalidTheory(m));
        if self.objects.is_empty() {
            return invalid("at least one object must be declared".into());
        }
        let mut seen = HashSet::new();
        let names = self
            .objects
            .iter()
            .map(|o| o.as_str())
            .chain(self.predicates.iter().map(|p| p.name.as_str()))
            .chain(self.actions.iter().map(|a| a.name.as_str()));
        for name in names {
            if name.is_empty() {
                return invalid("empty identifier".into());
            }
            if RESERVED.contains(&name) {
                return invalid(format!("`{name}` is reserved"));
            }
            if !seen.insert(name) {
                return invalid(format!("`{name}` is declared more than once"));
            }
        }
        for action in &self.actions {
            check_params(&action.params, &action.name)?;
            if let Some(s) = &action.sensing {
                self.check_schema(s, &action.params, false)
                    .map_err(|e| Error::InvalidTheory(format!("sensing axiom of `{}`: {e}", action.name)))?;
            }
            self.check_schema(&action.precondition, &action.params, false)
                .map_err(|e| Error::InvalidTheory(format!("precondition of `{}`: {e}", action.name)))?;
        }
        let mut with_ssa = HashSet::new();
        for ssa in &self.ssas {
            let Some(decl) = self.predicate(&ssa.fluent) else {
                return invalid(format!("successor state axiom for undeclared fluent `{}`", ssa.fluent));
            };
            if decl.kind != PredicateKind::Fluent {
                return invalid(format!("`{}` is rigid and cannot have a successor state axiom", ssa.fluent));
            }
            if decl.arity != ssa.params.len() {
                return invalid(format!("successor state axiom for `{}` has wrong arity", ssa.fluent));
            }
            if !with_ssa.insert(ssa.fluent.as_str()) {
                return invalid(format!("duplicate successor state axiom for `{}`", ssa.fluent));
            }
            check_params(&ssa.params, &ssa.fluent)?;
            self.check_schema(&ssa.rhs, &ssa.params, true)
                .map_err(|e| Error::InvalidTheory(format!("successor state axiom of `{}`: {e}", ssa.fluent)))?;
        }
        for p in &self.predicates {
            if p.kind == PredicateKind::Fluent && !with_ssa.contains(p.name.as_str()) {
                return invalid(format!("fluent `{}` has no successor state axiom", p.name));
            }
        }
        self.check_schema(&self.init_true, &[], false)
            .map_err(|e| Error::InvalidTheory(format!("init_true: {e}")))?;
        self.check_schema(&self.init_known, &[], false)
            .map_err(|e| Error::InvalidTheory(format!("init_known: {e}")))?;
        Ok(())
    }

    /// A static schema: no modal, `SF` or `Poss` node, free variables among
    /// `params` (plus the action variable when `action_var` is set).
    fn check_schema(&self, f: &Formula, params: &[String], action_var: bool) -> Result<()> {
        if !f.is_static() {
            return Err(Error::NotStatic(f.to_string()));
        }
        let mut scope: Vec<String> = params.to_vec();
        self.check_formula_in(f, &mut scope, action_var)
    }

    /// Symbols declared, arities right, variables bound by `scope`.
    pub fn check_formula(&self, f: &Formula, free: &[&str]) -> Result<()> {
        let mut scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
        self.check_formula_in(f, &mut scope, false)
    }

    fn check_formula_in(&self, f: &Formula, scope: &mut Vec<String>, action_var: bool) -> Result<()> {
        let term = |t: &Term, scope: &Vec<String>| -> Result<()> {
            match t {
                Term::Var(v) if scope.contains(v) => Ok(()),
                Term::Var(v) => Err(Error::Malformed(format!("unbound variable `{v}`"))),
                Term::Obj(o) if self.object(o.as_str()).is_some() => Ok(()),
                Term::Obj(o) => Err(Error::Undeclared(format!("object `{o}`"))),
            }
        };
        let action = |t: &ActionTerm, scope: &Vec<String>| -> Result<()> {
            let decl = self
                .action(&t.action)
                .ok_or_else(|| Error::Undeclared(format!("action `{}`", t.action)))?;
            if decl.arity() != t.args.len() {
                return Err(Error::Malformed(format!("{t}: `{}` expects {} argument(s)", decl.name, decl.arity())));
            }
            t.args.iter().try_for_each(|a| term(a, scope))
        };
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom { predicate, args } => {
                let decl = self
                    .predicate(predicate)
                    .ok_or_else(|| Error::Undeclared(format!("predicate `{predicate}`")))?;
                if decl.arity != args.len() {
                    return Err(Error::Malformed(format!(
                        "{f}: `{predicate}` expects {} argument(s)",
                        decl.arity
                    )));
                }
                args.iter().try_for_each(|a| term(a, scope))
            }
            Formula::TermEq(l, r) => {
                term(l, scope)?;
                term(r, scope)
            }
            Formula::ActionEq(lhs, rhs) => {
                match lhs {
                    ActionOperand::Var(v) if action_var && v == ACTION_VAR => {}
                    ActionOperand::Var(v) => {
                        return Err(Error::Malformed(format!("`{v}` is not an action variable here")))
                    }
                    ActionOperand::Term(t) => action(t, scope)?,
                }
                action(rhs, scope)
            }
            Formula::Sense(t) | Formula::Poss(t) => action(t, scope),
            Formula::Not(g) | Formula::Knows(g) | Formula::OnlyKnows(g) => self.check_formula_in(g, scope, action_var),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                self.check_formula_in(l, scope, action_var)?;
                self.check_formula_in(r, scope, action_var)
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                scope.push(v.clone());
                let r = self.check_formula_in(g, scope, action_var);
                scope.pop();
                r
            }
            Formula::AfterAction(t, g) => {
                action(t, scope)?;
                self.check_formula_in(g, scope, action_var)
            }
            Formula::AfterPlan(ts, g) => {
                ts.iter().try_for_each(|t| action(t, scope))?;
                self.check_formula_in(g, scope, action_var)
            }
        }
    }

    /// Same theory with new initial formulas; dynamics are shared.
    pub fn with_initial(&self, init_true: Formula, init_known: Formula) -> Theory {
        Theory { init_true, init_known, ..self.clone() }
    }
}

fn check_params(params: &[String], owner: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for p in params {
        if p == ACTION_VAR {
            return Err(Error::InvalidTheory(format!(
                "`{owner}`: `{ACTION_VAR}` is reserved for the action variable"
            )));
        }
        if !seen.insert(p) {
            return Err(Error::InvalidTheory(format!("`{owner}`: parameter `{p}` repeated")));
        }
    }
    Ok(())
}

/// Prints the theory in the `.fth` syntax; the output re-parses to an equal
/// theory.
impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.name)?;
        let objects: Vec<&str> = self.objects.iter().map(|o| o.as_str()).collect();
        writeln!(f, "objects: {}", objects.join(", "))?;
        for p in &self.predicates {
            let kind = match p.kind {
                PredicateKind::Rigid => "rigid",
                PredicateKind::Fluent => "fluent",
            };
            writeln!(f, "{kind} {}/{}", p.name, p.arity)?;
        }
        for a in &self.actions {
            writeln!(f, "action {}({})", a.name, a.params.join(", "))?;
        }
        for a in &self.actions {
            if let Some(s) = &a.sensing {
                writeln!(f, "sense {}({}): {s}", a.name, a.params.join(", "))?;
            }
        }
        for a in &self.actions {
            if a.precondition != Formula::True {
                writeln!(f, "poss {}({}): {}", a.name, a.params.join(", "), a.precondition)?;
            }
        }
        for s in &self.ssas {
            if s.params.is_empty() {
                writeln!(f, "ssa {}: {}", s.fluent, s.rhs)?;
            } else {
                writeln!(f, "ssa {}({}): {}", s.fluent, s.params.join(", "), s.rhs)?;
            }
        }
        writeln!(f, "init_true: {}", self.init_true)?;
        writeln!(f, "init_known: {}", self.init_known)
    }
}
