//! Possible-worlds engine.
//!
//! A world is identified with its initial valuation: the dynamic axioms are
//! shared and deterministic, so the value of every atom after every trace
//! follows from the initial state. States are bitsets over the ground atoms,
//! atom `i` stored at bit `n - 1 - i`, so that numeric order on states is
//! the lexicographic order on valuations (atoms ordered by predicate name,
//! then argument tuple in object declaration order).
//!
//! The agent's epistemic state is fixed to `E`, the models of `init_known`;
//! entailment ranges the actual world over `W0`, the models of `init_true`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{
    ground, simplify, substitute, ActionInstance, ActionOperand, ActionTerm, Formula, GroundAtom, ObjectName,
    PredicateKind, Term, Value, ACTION_VAR,
};
use crate::theory::Theory;

pub const DEFAULT_ATOM_CAP: usize = 24;
/// Environment variable overriding the ground-atom cap.
pub const ATOM_CAP_ENV: &str = "FAMES_ATOM_CAP";
/// Sensing outcomes along a trace are packed into a `u64`.
pub const MAX_TRACE_LEN: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    pub atom_cap: usize,
    /// Upper bound on traces enumerated by `validity_bounded` and plan search.
    pub max_traces: u64,
    /// Upper bound on cached (trace, world) states per evaluation session.
    pub max_cells: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { atom_cap: DEFAULT_ATOM_CAP, max_traces: 1_000_000, max_cells: 1 << 25 }
    }
}

impl EngineConfig {
    /// Defaults, with the atom cap taken from `FAMES_ATOM_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = EngineConfig::default();
        if let Ok(v) = std::env::var(ATOM_CAP_ENV) {
            cfg.atom_cap = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidQuery(format!("{ATOM_CAP_ENV}={v:?} is not a non-negative integer")))?;
        }
        Ok(cfg)
    }
}

/// An initial valuation, i.e. a world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WorldState(u64);

impl WorldState {
    pub fn from_bits(bits: u64) -> Self {
        WorldState(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }
}

/// An explicit valuation, listed in atom order. Serializes as `{atom: bool}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation(pub Vec<(GroundAtom, bool)>);

impl Valuation {
    pub fn get(&self, atom: &GroundAtom) -> Option<bool> {
        self.0.iter().find(|(a, _)| a == atom).map(|(_, v)| *v)
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (atom, v) in &self.0 {
            map.serialize_entry(&atom.to_string(), v)?;
        }
        map.end()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|(a, v)| if *v { a.to_string() } else { format!("!{a}") }).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

// ---------------------------------------------------------------------------
// Compiled static formulas

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Prop {
    Const(bool),
    Atom(u64),
    Not(Box<Prop>),
    And(Vec<Prop>),
    Or(Vec<Prop>),
    Iff(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub(crate) fn eval(&self, s: u64) -> bool {
        match self {
            Prop::Const(b) => *b,
            Prop::Atom(m) => s & m != 0,
            Prop::Not(p) => !p.eval(s),
            Prop::And(ps) => ps.iter().all(|p| p.eval(s)),
            Prop::Or(ps) => ps.iter().any(|p| p.eval(s)),
            Prop::Iff(l, r) => l.eval(s) == r.eval(s),
        }
    }
}

// ---------------------------------------------------------------------------
// Ground theory

/// The theory grounded over its objects: atoms, ground actions and the
/// compiled dynamic and initial axioms.
#[derive(Debug, Clone)]
pub struct GroundTheory {
    theory: Theory,
    atoms: Vec<GroundAtom>,
    atom_index: HashMap<GroundAtom, usize>,
    actions: Vec<ActionInstance>,
    action_index: HashMap<ActionInstance, usize>,
    rigid_mask: u64,
    /// Per ground action: fluent bits copied unchanged, and the others with
    /// their compiled successor value.
    effects: Vec<(u64, Vec<(u64, Prop)>)>,
    sense: Vec<Prop>,
    poss: Vec<Prop>,
    init_true: Prop,
    init_known: Prop,
}

fn tuples(objects: &[ObjectName], arity: usize) -> Vec<Vec<ObjectName>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                objects.iter().map(move |o| {
                    let mut t = prefix.clone();
                    t.push(o.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Number of ground atoms of `theory`, without materializing them.
pub fn atom_count(theory: &Theory) -> u128 {
    let k = theory.objects.len() as u128;
    theory
        .predicates
        .iter()
        .map(|p| k.checked_pow(p.arity as u32).unwrap_or(u128::MAX))
        .fold(0u128, |a, b| a.saturating_add(b))
}

impl GroundTheory {
    pub fn new(theory: &Theory, atom_cap: usize) -> Result<Self> {
        theory.validate()?;
        let count = atom_count(theory);
        let cap = atom_cap.min(MAX_TRACE_LEN);
        if count > cap as u128 {
            return Err(Error::resource("ground atoms", count, cap as u128));
        }
        let n = count as usize;
        let mut preds: Vec<_> = theory.predicates.iter().collect();
        preds.sort_by(|a, b| a.name.cmp(&b.name));
        let mut atoms = Vec::with_capacity(n);
        let mut rigid_mask = 0u64;
        for p in preds {
            for args in tuples(&theory.objects, p.arity) {
                if p.kind == PredicateKind::Rigid {
                    rigid_mask |= 1 << (n - 1 - atoms.len());
                }
                atoms.push(GroundAtom::new(p.name.clone(), args));
            }
        }
        let atom_index = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();

        let mut decls: Vec<_> = theory.actions.iter().collect();
        decls.sort_by(|a, b| a.name.cmp(&b.name));
        let mut actions = Vec::new();
        for d in &decls {
            for args in tuples(&theory.objects, d.arity()) {
                actions.push(ActionInstance::new(d.name.clone(), args));
            }
        }
        let action_index = actions.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();

        let mut g = GroundTheory {
            theory: theory.clone(),
            atoms,
            atom_index,
            actions,
            action_index,
            rigid_mask,
            effects: Vec::new(),
            sense: Vec::new(),
            poss: Vec::new(),
            init_true: Prop::Const(true),
            init_known: Prop::Const(true),
        };
        g.init_true = g.compile_static(&theory.init_true)?;
        g.init_known = g.compile_static(&theory.init_known)?;
        for act in g.actions.clone() {
            let decl = theory.action(&act.action).expect("ground action of a declared action");
            let bind = |f: &Formula| -> Result<Formula> {
                decl.params.iter().zip(&act.args).try_fold(f.clone(), |f, (p, o)| {
                    substitute(&f, p, &Value::Object(o.clone()))
                })
            };
            let sense = match &decl.sensing {
                Some(s) => g.compile_static(&bind(s)?)?,
                None => Prop::Const(true),
            };
            let poss = g.compile_static(&bind(&decl.precondition)?)?;
            let mut copied = 0u64;
            let mut changed = Vec::new();
            for (i, atom) in g.atoms.iter().enumerate() {
                let mask = 1u64 << (n - 1 - i);
                if mask & g.rigid_mask != 0 {
                    continue;
                }
                let ssa = theory.ssa(&atom.predicate).expect("validated: every fluent has an SSA");
                let rhs = ssa.params.iter().zip(&atom.args).try_fold(ssa.rhs.clone(), |f, (p, o)| {
                    substitute(&f, p, &Value::Object(o.clone()))
                })?;
                let rhs = substitute(&rhs, ACTION_VAR, &Value::Action(act.clone()))?;
                match g.compile_static(&rhs)? {
                    Prop::Atom(m) if m == mask => copied |= mask,
                    p => changed.push((mask, p)),
                }
            }
            g.effects.push((copied, changed));
            g.sense.push(sense);
            g.poss.push(poss);
        }
        Ok(g)
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn actions(&self) -> &[ActionInstance] {
        &self.actions
    }

    pub fn atom_index(&self, atom: &GroundAtom) -> Option<usize> {
        self.atom_index.get(atom).copied()
    }

    pub fn action_index(&self, action: &ActionInstance) -> Option<usize> {
        self.action_index.get(action).copied()
    }

    pub fn mask(&self, atom: usize) -> u64 {
        1 << (self.atoms.len() - 1 - atom)
    }

    pub fn is_rigid(&self, atom: usize) -> bool {
        self.rigid_mask & self.mask(atom) != 0
    }

    /// Bitmask of the given atoms; errors on undeclared atoms.
    pub fn mask_of(&self, atoms: &[GroundAtom]) -> Result<u64> {
        atoms.iter().try_fold(0u64, |m, a| {
            self.theory.check_atom(a)?;
            Ok(m | self.mask(self.atom_index(a).expect("declared atom is ground")))
        })
    }

    pub fn world_count(&self) -> u64 {
        1u64 << self.atoms.len()
    }

    pub fn value(&self, s: WorldState, atom: &GroundAtom) -> Option<bool> {
        self.atom_index(atom).map(|i| s.0 & self.mask(i) != 0)
    }

    pub fn valuation(&self, s: WorldState) -> Valuation {
        Valuation(self.atoms.iter().enumerate().map(|(i, a)| (a.clone(), s.0 & self.mask(i) != 0)).collect())
    }

    pub fn world_of(&self, valuation: impl Fn(&GroundAtom) -> bool) -> WorldState {
        WorldState(
            self.atoms.iter().enumerate().filter(|(_, a)| valuation(a)).fold(0, |s, (i, _)| s | self.mask(i)),
        )
    }

    fn resolve_action(&self, a: &ActionInstance) -> Result<usize> {
        self.action_index(a).ok_or_else(|| Error::Undeclared(format!("action {a}")))
    }

    fn resolve_term(&self, t: &ActionTerm) -> Result<usize> {
        let inst = t.to_instance().ok_or_else(|| Error::Malformed(format!("action {t} is not ground")))?;
        self.resolve_action(&inst)
    }

    /// Compile a closed static formula (quantifiers allowed).
    pub(crate) fn compile_static(&self, f: &Formula) -> Result<Prop> {
        if !f.is_static() {
            return Err(Error::NotStatic(f.to_string()));
        }
        let g = ground(f, &self.theory.objects)?;
        self.prop_of(&g)
    }

    fn prop_of(&self, f: &Formula) -> Result<Prop> {
        Ok(match f {
            Formula::True => Prop::Const(true),
            Formula::False => Prop::Const(false),
            Formula::Atom { predicate, args } => {
                let args = args
                    .iter()
                    .map(|t| match t {
                        Term::Obj(o) => Ok(o.clone()),
                        Term::Var(v) => Err(Error::Malformed(format!("unbound variable `{v}`"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let atom = GroundAtom::new(predicate.clone(), args);
                self.theory.check_atom(&atom)?;
                Prop::Atom(self.mask(self.atom_index(&atom).expect("checked atom")))
            }
            Formula::TermEq(Term::Obj(l), Term::Obj(r)) => Prop::Const(l == r),
            Formula::ActionEq(ActionOperand::Term(l), r) => match (l.to_instance(), r.to_instance()) {
                (Some(l), Some(r)) => Prop::Const(l == r),
                _ => return Err(Error::Malformed(format!("non-ground action equality {f}"))),
            },
            Formula::TermEq(..) | Formula::ActionEq(..) => {
                return Err(Error::Malformed(format!("non-ground equality {f}")))
            }
            Formula::Not(g) => Prop::Not(Box::new(self.prop_of(g)?)),
            Formula::And(l, r) => Prop::And(vec![self.prop_of(l)?, self.prop_of(r)?]),
            Formula::Or(l, r) => Prop::Or(vec![self.prop_of(l)?, self.prop_of(r)?]),
            Formula::Implies(l, r) => Prop::Or(vec![Prop::Not(Box::new(self.prop_of(l)?)), self.prop_of(r)?]),
            Formula::Iff(l, r) => Prop::Iff(Box::new(self.prop_of(l)?), Box::new(self.prop_of(r)?)),
            _ => return Err(Error::NotStatic(f.to_string())),
        })
    }

    /// Successor state of `s` under ground action number `a`.
    pub(crate) fn step(&self, s: u64, a: usize) -> u64 {
        let (copied, changed) = &self.effects[a];
        let mut next = s & (self.rigid_mask | copied);
        for (mask, p) in changed {
            if p.eval(s) {
                next |= mask;
            }
        }
        next
    }

    pub(crate) fn sf(&self, s: u64, a: usize) -> bool {
        self.sense[a].eval(s)
    }

    pub(crate) fn possible(&self, s: u64, a: usize) -> bool {
        self.poss[a].eval(s)
    }

    pub(crate) fn init_true_holds(&self, s: u64) -> bool {
        self.init_true.eval(s)
    }

    pub(crate) fn init_known_holds(&self, s: u64) -> bool {
        self.init_known.eval(s)
    }
}

// ---------------------------------------------------------------------------
// Verdicts

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub var: String,
    pub object: ObjectName,
}

fn ser_plan<S: Serializer>(plan: &[ActionInstance], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(plan.iter().map(|a| a.to_string()))
}

fn ser_opt_plan<S: Serializer>(plan: &Option<Vec<ActionInstance>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match plan {
        Some(p) => ser_plan(p, s),
        None => s.serialize_none(),
    }
}

/// Why a formula failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    /// The actual world (initial valuation) where the formula fails.
    pub counterexample_world: Valuation,
    /// Actions executed when the failing subformula was reached.
    #[serde(serialize_with = "ser_plan")]
    pub failing_prefix: Vec<ActionInstance>,
    /// Quantifier instantiations along the failing branch.
    pub instantiation: Vec<Binding>,
    /// Subformulas from the root down to the failing one.
    pub subformula_path: Vec<String>,
    /// A compatible world refuting the innermost failing `K`.
    pub witness_world: Option<Valuation>,
    /// For bounded validity, the trace at which the formula failed.
    #[serde(serialize_with = "ser_opt_plan")]
    pub trace: Option<Vec<ActionInstance>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// Present iff `holds` is false.
    pub diagnostics: Option<Diagnostics>,
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn pass(warnings: Vec<String>) -> Self {
        Verdict { holds: true, diagnostics: None, warnings }
    }
}

// ---------------------------------------------------------------------------
// Compiled epistemic formulas

type NodeId = usize;
type TraceId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Const(bool),
    Atom(u64),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Implies(NodeId, NodeId),
    Iff(NodeId, NodeId),
    Quant { universal: bool, var: String, branches: Vec<(ObjectName, NodeId)> },
    Knows(NodeId),
    OnlyKnows(NodeId),
    After(usize, NodeId),
    Sense(usize),
    Poss(usize),
}

#[derive(Debug, Clone, Copy)]
struct Sit {
    trace: TraceId,
    state: u64,
    /// Sensing outcomes along the trace, most recent in the lowest bit.
    sf: u64,
}

#[derive(Debug)]
struct TraceInfo {
    parent: Option<(TraceId, usize)>,
    children: HashMap<usize, TraceId>,
    len: usize,
    /// Per world of `E`: state after the trace, and sensing signature
    /// (`None` once some action on the trace was not possible).
    e_states: Vec<u64>,
    e_sigs: Vec<Option<u64>>,
    /// The same over all worlds, built on demand for `O`.
    all: Option<(Vec<u64>, Vec<Option<u64>>)>,
}

/// Reusable evaluation context: compiled formulas, per-trace state tables
/// and the `K`/`O` memo share one lifetime, so repeated queries against the
/// same engine are cheap.
pub struct Session<'a> {
    engine: &'a Engine,
    nodes: Vec<Node>,
    src: Vec<Formula>,
    traces: Vec<TraceInfo>,
    memo: HashMap<(NodeId, TraceId, u64), bool>,
    /// Hash-consing: structurally equal nodes share an id, and so their memo.
    interned: HashMap<Node, NodeId>,
    vacuous: BTreeSet<TraceId>,
    cells: u64,
    /// Compiled roots and entailment verdicts, keyed by the printed formula.
    roots: HashMap<String, NodeId>,
    verdicts: HashMap<String, Verdict>,
}

impl<'a> Session<'a> {
    fn new(engine: &'a Engine) -> Self {
        let e = &engine.e;
        let root = TraceInfo {
            parent: None,
            children: HashMap::new(),
            len: 0,
            e_states: e.iter().map(|w| w.0).collect(),
            e_sigs: vec![Some(0); e.len()],
            all: None,
        };
        Session {
            engine,
            nodes: Vec::new(),
            src: Vec::new(),
            traces: vec![root],
            memo: HashMap::new(),
            interned: HashMap::new(),
            vacuous: BTreeSet::new(),
            cells: e.len() as u64,
            roots: HashMap::new(),
            verdicts: HashMap::new(),
        }
    }

    pub fn engine(&self) -> &'a Engine {
        self.engine
    }

    fn g(&self) -> &'a GroundTheory {
        &self.engine.ground
    }

    fn add(&mut self, node: Node, src: &Formula) -> NodeId {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        self.interned.insert(node.clone(), self.nodes.len());
        self.nodes.push(node);
        self.src.push(src.clone());
        self.nodes.len() - 1
    }

    fn compile(&mut self, f: &Formula) -> Result<NodeId> {
        let g = self.g();
        let node = match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom { .. } | Formula::TermEq(..) | Formula::ActionEq(..) => match g.prop_of(&simplify(f))? {
                Prop::Const(b) => Node::Const(b),
                Prop::Atom(m) => Node::Atom(m),
                Prop::Not(p) => match *p {
                    Prop::Const(b) => Node::Const(!b),
                    _ => unreachable!("simplified equalities are constants"),
                },
                _ => unreachable!("atoms and equalities compile to leaves"),
            },
            Formula::Sense(t) => Node::Sense(g.resolve_term(t)?),
            Formula::Poss(t) => Node::Poss(g.resolve_term(t)?),
            Formula::Not(x) => Node::Not(self.compile(x)?),
            Formula::And(l, r) => Node::And(self.compile(l)?, self.compile(r)?),
            Formula::Or(l, r) => Node::Or(self.compile(l)?, self.compile(r)?),
            Formula::Implies(l, r) => Node::Implies(self.compile(l)?, self.compile(r)?),
            Formula::Iff(l, r) => Node::Iff(self.compile(l)?, self.compile(r)?),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let objects = g.theory.objects.clone();
                let mut branches = Vec::with_capacity(objects.len());
                for o in objects {
                    let inst = substitute(body, v, &Value::Object(o.clone()))?;
                    branches.push((o, self.compile(&inst)?));
                }
                Node::Quant { universal: matches!(f, Formula::Forall(..)), var: v.clone(), branches }
            }
            Formula::Knows(x) => Node::Knows(self.compile(x)?),
            Formula::OnlyKnows(x) => Node::OnlyKnows(self.compile(x)?),
            Formula::AfterAction(t, x) => Node::After(g.resolve_term(t)?, self.compile(x)?),
            Formula::AfterPlan(ts, x) => {
                let mut id = self.compile(x)?;
                for (k, t) in ts.iter().enumerate().rev() {
                    let a = g.resolve_term(t)?;
                    let rest = Formula::AfterPlan(ts[k..].to_vec(), x.clone());
                    id = self.add(Node::After(a, id), &rest);
                }
                return Ok(id);
            }
        };
        Ok(self.add(node, f))
    }

    fn charge(&mut self, cells: u64) -> Result<()> {
        self.cells += cells;
        let cap = self.engine.config.max_cells;
        if self.cells > cap {
            return Err(Error::resource("cached world states", self.cells as u128, cap as u128));
        }
        Ok(())
    }

    fn child(&mut self, t: TraceId, a: usize) -> Result<TraceId> {
        if let Some(&c) = self.traces[t].children.get(&a) {
            return Ok(c);
        }
        let len = self.traces[t].len + 1;
        if len > MAX_TRACE_LEN {
            return Err(Error::resource("trace length", len as u128, MAX_TRACE_LEN as u128));
        }
        self.charge(self.engine.e.len() as u64)?;
        let g = self.g();
        let (e_states, e_sigs) = advance(g, &self.traces[t].e_states, &self.traces[t].e_sigs, a);
        let id = self.traces.len();
        self.traces.push(TraceInfo { parent: Some((t, a)), children: HashMap::new(), len, e_states, e_sigs, all: None });
        self.traces[t].children.insert(a, id);
        Ok(id)
    }

    fn ensure_all(&mut self, t: TraceId) -> Result<()> {
        if self.traces[t].all.is_some() {
            return Ok(());
        }
        let table = match self.traces[t].parent {
            None => {
                let n = self.g().world_count();
                self.charge(n)?;
                ((0..n).collect(), vec![Some(0); n as usize])
            }
            Some((p, a)) => {
                self.ensure_all(p)?;
                self.charge(self.g().world_count())?;
                let (states, sigs) = self.traces[p].all.as_ref().unwrap();
                advance(self.g(), states, sigs, a)
            }
        };
        self.traces[t].all = Some(table);
        Ok(())
    }

    fn step_sit(&mut self, sit: Sit, a: usize) -> Result<Sit> {
        let g = self.g();
        let sf = (sit.sf << 1) | g.sf(sit.state, a) as u64;
        Ok(Sit { trace: self.child(sit.trace, a)?, state: g.step(sit.state, a), sf })
    }

    /// States of the `E` worlds compatible with a world whose sensing
    /// signature along the trace is `sf`.
    fn compatible(&self, t: TraceId, sf: u64) -> Vec<u64> {
        let info = &self.traces[t];
        info.e_sigs
            .iter()
            .zip(&info.e_states)
            .filter(|(sig, _)| **sig == Some(sf))
            .map(|(_, s)| *s)
            .collect()
    }

    fn eval(&mut self, node: NodeId, sit: Sit) -> Result<bool> {
        Ok(match &self.nodes[node] {
            Node::Const(b) => *b,
            Node::Atom(m) => sit.state & m != 0,
            &Node::Not(x) => !self.eval(x, sit)?,
            &Node::And(l, r) => self.eval(l, sit)? && self.eval(r, sit)?,
            &Node::Or(l, r) => self.eval(l, sit)? || self.eval(r, sit)?,
            &Node::Implies(l, r) => !self.eval(l, sit)? || self.eval(r, sit)?,
            &Node::Iff(l, r) => self.eval(l, sit)? == self.eval(r, sit)?,
            Node::Quant { universal, branches, .. } => {
                let universal = *universal;
                let ids: Vec<NodeId> = branches.iter().map(|(_, id)| *id).collect();
                for id in ids {
                    if self.eval(id, sit)? != universal {
                        return Ok(!universal);
                    }
                }
                universal
            }
            &Node::After(a, x) => {
                let next = self.step_sit(sit, a)?;
                self.eval(x, next)?
            }
            &Node::Sense(a) => self.g().sf(sit.state, a),
            &Node::Poss(a) => self.g().possible(sit.state, a),
            &Node::Knows(x) => {
                let key = (node, sit.trace, sit.sf);
                if let Some(&v) = self.memo.get(&key) {
                    return Ok(v);
                }
                let worlds = self.compatible(sit.trace, sit.sf);
                if worlds.is_empty() {
                    self.vacuous.insert(sit.trace);
                }
                let mut v = true;
                for state in worlds {
                    if !self.eval(x, Sit { state, ..sit })? {
                        v = false;
                        break;
                    }
                }
                self.memo.insert(key, v);
                v
            }
            &Node::OnlyKnows(x) => {
                let key = (node, sit.trace, sit.sf);
                if let Some(&v) = self.memo.get(&key) {
                    return Ok(v);
                }
                self.ensure_all(sit.trace)?;
                let candidates: Vec<(u64, u64)> = {
                    let (states, sigs) = self.traces[sit.trace].all.as_ref().unwrap();
                    sigs.iter()
                        .enumerate()
                        .filter(|(_, sig)| **sig == Some(sit.sf))
                        .map(|(w, _)| (w as u64, states[w]))
                        .collect()
                };
                let mut v = true;
                for (w, state) in candidates {
                    let in_e = self.engine.e.binary_search(&WorldState(w)).is_ok();
                    if self.eval(x, Sit { state, ..sit })? != in_e {
                        v = false;
                        break;
                    }
                }
                self.memo.insert(key, v);
                v
            }
        })
    }

    fn trace_actions(&self, mut t: TraceId) -> Vec<ActionInstance> {
        let mut out = Vec::new();
        while let Some((p, a)) = self.traces[t].parent {
            out.push(self.g().actions[a].clone());
            t = p;
        }
        out.reverse();
        out
    }

    /// Follow the branch that makes `node` evaluate to `!want` at `sit`.
    fn explain(&mut self, node: NodeId, sit: Sit, want: bool, d: &mut Diagnostics) -> Result<()> {
        d.subformula_path.push(self.src[node].to_string());
        d.failing_prefix = self.trace_actions(sit.trace);
        match self.nodes[node].clone() {
            Node::Not(x) => self.explain(x, sit, !want, d)?,
            Node::And(l, r) | Node::Or(l, r) => {
                // a single side decides when a false conjunct (or a true
                // disjunct) is to blame; otherwise both do and the left one is shown
                let is_and = matches!(self.nodes[node], Node::And(..));
                let target = if want == is_and && self.eval(l, sit)? == want { r } else { l };
                self.explain(target, sit, want, d)?;
            }
            Node::Implies(l, r) => {
                if want {
                    // antecedent true, consequent false
                    self.explain(r, sit, true, d)?;
                } else if !self.eval(l, sit)? {
                    self.explain(l, sit, true, d)?;
                } else {
                    self.explain(r, sit, false, d)?;
                }
            }
            Node::Iff(l, _) => {
                let lv = self.eval(l, sit)?;
                self.explain(l, sit, !lv, d)?;
            }
            Node::Quant { universal, var, branches } => {
                for (o, id) in branches {
                    if self.eval(id, sit)? != want || (want != universal) {
                        d.instantiation.push(Binding { var, object: o });
                        self.explain(id, sit, want, d)?;
                        break;
                    }
                }
            }
            Node::After(a, x) => {
                let next = self.step_sit(sit, a)?;
                self.explain(x, next, want, d)?;
            }
            Node::Knows(x) => {
                if want {
                    for state in self.compatible(sit.trace, sit.sf) {
                        if !self.eval(x, Sit { state, ..sit })? {
                            d.witness_world = Some(self.witness(sit.trace, state));
                            self.explain(x, Sit { state, ..sit }, true, d)?;
                            break;
                        }
                    }
                }
            }
            Node::OnlyKnows(_) | Node::Const(_) | Node::Atom(_) | Node::Sense(_) | Node::Poss(_) => {}
        }
        Ok(())
    }

    /// The initial valuation of the `E` world whose state at `t` is `state`.
    fn witness(&self, t: TraceId, state: u64) -> Valuation {
        let info = &self.traces[t];
        let idx = info.e_states.iter().position(|s| *s == state).expect("witness is an E world");
        self.g().valuation(self.engine.e[idx])
    }

    fn warnings(&self) -> Vec<String> {
        self.vacuous
            .iter()
            .map(|&t| {
                let plan = self.trace_actions(t);
                let at = if plan.is_empty() { "the empty trace".to_string() } else { crate::formula::display_plan(&plan) };
                format!("vacuous K: no world of E is compatible after {at}")
            })
            .collect()
    }

    fn root(&self, w: WorldState) -> Sit {
        Sit { trace: 0, state: w.0, sf: 0 }
    }

    fn prepare(&mut self, f: &Formula) -> Result<NodeId> {
        let key = f.to_string();
        if let Some(&id) = self.roots.get(&key) {
            return Ok(id);
        }
        let theory = self.g().theory();
        theory.check_formula(f, &[]).map_err(|e| Error::InvalidQuery(format!("{f}: {e}")))?;
        let id = self.compile(f)?;
        self.roots.insert(key, id);
        Ok(id)
    }

    fn failure(&mut self, root: NodeId, w: WorldState, sit: Sit, trace: Option<Vec<ActionInstance>>) -> Result<Verdict> {
        let mut d = Diagnostics {
            counterexample_world: self.g().valuation(w),
            failing_prefix: Vec::new(),
            instantiation: Vec::new(),
            subformula_path: Vec::new(),
            witness_world: None,
            trace,
        };
        self.explain(root, sit, true, &mut d)?;
        Ok(Verdict { holds: false, diagnostics: Some(d), warnings: self.warnings() })
    }

    /// Truth of a closed formula at `(E, w, z)`.
    pub fn holds(&mut self, w: WorldState, z: &[ActionInstance], f: &Formula) -> Result<bool> {
        let root = self.prepare(f)?;
        let mut sit = self.root(w);
        for a in z {
            let a = self.g().resolve_action(a)?;
            sit = self.step_sit(sit, a)?;
        }
        self.eval(root, sit)
    }

    /// `Σ ⊨ f`: `f` holds at `(E, w, ⟨⟩)` for every `w ∈ W0`.
    pub fn entails(&mut self, f: &Formula) -> Result<Verdict> {
        let key = f.to_string();
        if let Some(v) = self.verdicts.get(&key) {
            return Ok(v.clone());
        }
        let v = self.entails_uncached(f)?;
        self.verdicts.insert(key, v.clone());
        Ok(v)
    }

    fn entails_uncached(&mut self, f: &Formula) -> Result<Verdict> {
        self.vacuous.clear();
        let root = self.prepare(f)?;
        let engine = self.engine;
        if engine.w0.is_empty() {
            return Ok(Verdict::pass(vec!["W0 is empty (init_true is unsatisfiable): entailment holds vacuously".into()]));
        }
        for &w in &engine.w0 {
            let sit = self.root(w);
            if !self.eval(root, sit)? {
                return self.failure(root, w, sit, None);
            }
        }
        Ok(Verdict::pass(self.warnings()))
    }

    /// `f` holds at `(E, w, z)` for every `w ∈ W0` and every trace `z` of
    /// length at most `horizon` (bounded validity).
    pub fn validity_bounded(&mut self, f: &Formula, horizon: usize) -> Result<Verdict> {
        self.vacuous.clear();
        let root = self.prepare(f)?;
        let engine = self.engine;
        let b = engine.ground.actions.len();
        trace_budget(b, horizon, engine.config.max_traces)?;
        let mut warnings = vec![format!("bounded validity: traces of length <= {horizon} only")];
        if engine.w0.is_empty() {
            warnings.push("W0 is empty (init_true is unsatisfiable): validity holds vacuously".into());
            return Ok(Verdict::pass(warnings));
        }
        for len in 0..=horizon {
            if len > 0 && b == 0 {
                break;
            }
            let mut z = vec![0usize; len];
            loop {
                for &w in &engine.w0 {
                    let mut sit = self.root(w);
                    for &a in &z {
                        sit = self.step_sit(sit, a)?;
                    }
                    if !self.eval(root, sit)? {
                        let trace = z.iter().map(|&a| engine.ground.actions[a].clone()).collect();
                        let mut v = self.failure(root, w, sit, Some(trace))?;
                        v.warnings.splice(0..0, warnings);
                        return Ok(v);
                    }
                }
                if !odometer(&mut z, b) {
                    break;
                }
            }
        }
        warnings.extend(self.warnings());
        Ok(Verdict::pass(warnings))
    }
}

/// Advance a (states, signatures) table through ground action `a`.
fn advance(g: &GroundTheory, states: &[u64], sigs: &[Option<u64>], a: usize) -> (Vec<u64>, Vec<Option<u64>>) {
    let next = states.iter().map(|&s| g.step(s, a)).collect();
    let sigs = states
        .iter()
        .zip(sigs)
        .map(|(&s, sig)| sig.and_then(|sig| g.possible(s, a).then(|| (sig << 1) | g.sf(s, a) as u64)))
        .collect();
    (next, sigs)
}

/// Next sequence in lexicographic order; false after the last one.
pub(crate) fn odometer(z: &mut [usize], base: usize) -> bool {
    for i in (0..z.len()).rev() {
        z[i] += 1;
        if z[i] < base {
            return true;
        }
        z[i] = 0;
    }
    false
}

/// Number of traces of length `0..=horizon` over `branching` actions,
/// checked against `cap`.
pub fn trace_budget(branching: usize, horizon: usize, cap: u64) -> Result<u64> {
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for k in 0..=horizon {
        if k > 0 {
            level = level.saturating_mul(branching as u128);
        }
        total = total.saturating_add(level);
        if total > cap as u128 {
            return Err(Error::resource(
                &format!("traces ({branching} ground actions, horizon {horizon})"),
                total_traces(branching, horizon),
                cap as u128,
            ));
        }
    }
    Ok(total as u64)
}

fn total_traces(b: usize, h: usize) -> u128 {
    (0..=h).fold(0u128, |t, k| t.saturating_add((b as u128).saturating_pow(k as u32)))
}

// ---------------------------------------------------------------------------
// Engine

/// A ground theory with its enumerated world sets `W0` and `E`.
#[derive(Debug, Clone)]
pub struct Engine {
    ground: GroundTheory,
    w0: Vec<WorldState>,
    e: Vec<WorldState>,
    config: EngineConfig,
}

impl Engine {
    pub fn new(theory: &Theory) -> Result<Self> {
        Self::with_config(theory, EngineConfig::default())
    }

    pub fn with_config(theory: &Theory, config: EngineConfig) -> Result<Self> {
        let ground = GroundTheory::new(theory, config.atom_cap)?;
        let mut w0 = Vec::new();
        let mut e = Vec::new();
        for s in 0..ground.world_count() {
            if ground.init_true_holds(s) {
                w0.push(WorldState(s));
            }
            if ground.init_known_holds(s) {
                e.push(WorldState(s));
            }
        }
        Ok(Engine { ground, w0, e, config })
    }

    /// An engine over explicit world sets (e.g. after semantic forgetting).
    /// Both sets are sorted and deduplicated.
    pub fn from_worlds(ground: GroundTheory, mut w0: Vec<WorldState>, mut e: Vec<WorldState>, config: EngineConfig) -> Self {
        w0.sort_unstable();
        w0.dedup();
        e.sort_unstable();
        e.dedup();
        Engine { ground, w0, e, config }
    }

    pub fn ground(&self) -> &GroundTheory {
        &self.ground
    }

    pub fn theory(&self) -> &Theory {
        &self.ground.theory
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Models of `init_true`, in state order.
    pub fn w0(&self) -> &[WorldState] {
        &self.w0
    }

    /// Models of `init_known` (the epistemic state), in state order.
    pub fn e(&self) -> &[WorldState] {
        &self.e
    }

    /// An evaluation context for several queries; see [`Session`].
    pub fn session(&self) -> Session<'_> {
        Session::new(self)
    }

    pub fn progress(&self, s: WorldState, a: &ActionInstance) -> Result<WorldState> {
        let a = self.ground.resolve_action(a)?;
        Ok(WorldState(self.ground.step(s.0, a)))
    }

    pub fn state_after(&self, w: WorldState, z: &[ActionInstance]) -> Result<WorldState> {
        z.iter().try_fold(w, |s, a| self.progress(s, a))
    }

    pub fn sf_value(&self, w: WorldState, z: &[ActionInstance], a: &ActionInstance) -> Result<bool> {
        let s = self.state_after(w, z)?;
        Ok(self.ground.sf(s.0, self.ground.resolve_action(a)?))
    }

    pub fn poss_value(&self, w: WorldState, z: &[ActionInstance], a: &ActionInstance) -> Result<bool> {
        let s = self.state_after(w, z)?;
        Ok(self.ground.possible(s.0, self.ground.resolve_action(a)?))
    }

    /// `{w' ∈ E : w' ∼z w}`. Executability is checked on `w'` only.
    pub fn compatible_worlds(&self, w: WorldState, z: &[ActionInstance]) -> Result<Vec<WorldState>> {
        let z = z.iter().map(|a| self.ground.resolve_action(a)).collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        'worlds: for &w2 in &self.e {
            let (mut s, mut s2) = (w.0, w2.0);
            for &a in &z {
                if !self.ground.possible(s2, a) || self.ground.sf(s2, a) != self.ground.sf(s, a) {
                    continue 'worlds;
                }
                s = self.ground.step(s, a);
                s2 = self.ground.step(s2, a);
            }
            out.push(w2);
        }
        Ok(out)
    }

    /// Truth of a closed formula at `(E, w, z)`.
    pub fn holds(&self, w: WorldState, z: &[ActionInstance], f: &Formula) -> Result<bool> {
        self.session().holds(w, z, f)
    }

    pub fn entails(&self, f: &Formula) -> Result<Verdict> {
        self.session().entails(f)
    }

    pub fn validity_bounded(&self, f: &Formula, horizon: usize) -> Result<Verdict> {
        self.session().validity_bounded(f, horizon)
    }

    /// All valuations satisfying a closed static formula, in state order.
    pub fn models(&self, f: &Formula) -> Result<Vec<WorldState>> {
        models_of(&self.ground, f)
    }
}

pub fn models_of(g: &GroundTheory, f: &Formula) -> Result<Vec<WorldState>> {
    let p = g.compile_static(f)?;
    Ok((0..g.world_count()).filter(|&s| p.eval(s)).map(WorldState).collect())
}

/// `(W0, E)` for a theory, with the default configuration.
pub fn enumerate_worlds(theory: &Theory) -> Result<(Vec<WorldState>, Vec<WorldState>)> {
    let engine = Engine::new(theory)?;
    Ok((engine.w0, engine.e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::dsl::{parse_formula, parse_plan};

    fn engine() -> Engine {
        Engine::new(&bundled::loan()).unwrap()
    }

    fn plan(e: &Engine, text: &str) -> Vec<ActionInstance> {
        parse_plan(text, e.theory()).unwrap()
    }

    fn atom(text: &str, e: &Engine) -> GroundAtom {
        crate::dsl::parse_atoms(text, e.theory()).unwrap().remove(0)
    }

    fn f(e: &Engine, text: &str) -> Formula {
        parse_formula(text, e.theory()).unwrap()
    }

    #[test]
    fn loan_grounding() {
        let e = engine();
        assert_eq!(e.ground().atoms().len(), 8);
        assert_eq!(e.ground().actions().len(), 10);
        // predicates by name, then object order
        assert_eq!(e.ground().atoms()[0].to_string(), "Eligible(n)");
        assert_eq!(e.ground().atoms()[7].to_string(), "highSalary(nprime)");
        assert_eq!(e.ground().actions()[0].to_string(), "approve(n)");
    }

    #[test]
    fn world_counts() {
        let e = engine();
        assert_eq!(e.w0().len(), 16);
        assert_eq!(e.e().len(), 64);
        assert!(e.w0().windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn atom_cap_is_a_resource_error() {
        let cfg = EngineConfig { atom_cap: 7, ..EngineConfig::default() };
        let err = Engine::with_config(&bundled::loan(), cfg).unwrap_err();
        assert!(err.is_resource());
        assert!(err.to_string().contains('8'), "{err}");
    }

    #[test]
    fn empty_w0_is_vacuous_with_warning() {
        let t = bundled::loan();
        let t = t.with_initial(Formula::False, t.init_known.clone());
        let e = Engine::new(&t).unwrap();
        assert!(e.w0().is_empty());
        let v = e.entails(&Formula::False).unwrap();
        assert!(v.holds);
        assert!(v.warnings[0].contains("vacuous"));
    }

    #[test]
    fn progress_examples() {
        let e = engine();
        let g = e.ground();
        let has_n = atom("hasLoan(n)", &e);
        let s = g.world_of(|_| false);
        let s2 = e.progress(s, &plan(&e, "approve(n)")[0]).unwrap();
        assert_eq!(g.value(s2, &has_n), Some(true));

        let hs = atom("highSalary(nprime)", &e);
        let s3 = e.progress(s, &plan(&e, "promote(nprime)")[0]).unwrap();
        assert_eq!(g.value(s3, &hs), Some(false));

        let hs_n = atom("highSalary(n)", &e);
        let s = g.world_of(|a| *a == hs_n);
        let s4 = e.progress(s, &plan(&e, "demote(n)")[0]).unwrap();
        assert_eq!(g.value(s4, &hs_n), Some(false));
    }

    #[test]
    fn state_after_examples() {
        let e = engine();
        let g = e.ground();
        for &w in e.w0() {
            assert_eq!(e.state_after(w, &[]).unwrap(), w);
            let s = e.state_after(w, &plan(&e, "approve(n); approve(nprime)")).unwrap();
            assert_eq!(g.value(s, &atom("hasLoan(n)", &e)), Some(true));
            assert_eq!(g.value(s, &atom("hasLoan(nprime)", &e)), Some(true));
            let s = e.state_after(w, &plan(&e, "approve(n); deny(n)")).unwrap();
            assert_eq!(g.value(s, &atom("hasLoan(n)", &e)), Some(false));
        }
    }

    #[test]
    fn sensing_and_poss_values() {
        let e = engine();
        let male_n = atom("Male(n)", &e);
        for w in (0..256).map(WorldState::from_bits) {
            let is_male = &plan(&e, "isMale(n)")[0];
            assert_eq!(e.sf_value(w, &[], is_male).unwrap(), e.ground().value(w, &male_n).unwrap());
            assert!(e.sf_value(w, &[], &plan(&e, "approve(n)")[0]).unwrap());
            for a in e.ground().actions() {
                assert!(e.poss_value(w, &plan(&e, "approve(n)"), a).unwrap());
            }
        }
    }

    #[test]
    fn compatible_world_examples() {
        let e = engine();
        let w = e.w0()[0];
        assert_eq!(e.compatible_worlds(w, &[]).unwrap().len(), 64);
        let c = e.compatible_worlds(w, &plan(&e, "isMale(n)")).unwrap();
        assert_eq!(c.len(), 32);
        let male_n = atom("Male(n)", &e);
        assert!(c.iter().all(|&v| e.ground().value(v, &male_n) == Some(true)));
        let c = e.compatible_worlds(w, &plan(&e, "isMale(n); isMale(nprime)")).unwrap();
        assert_eq!(c.len(), 16);
        let male_np = atom("Male(nprime)", &e);
        assert!(c.iter().all(|&v| e.ground().value(v, &male_np) == Some(false)));
    }

    #[test]
    fn holds_examples() {
        let e = engine();
        for &w in e.w0() {
            assert!(e.holds(w, &[], &f(&e, "K(Eligible(n))")).unwrap());
            assert!(!e.holds(w, &[], &f(&e, "K(Male(n))")).unwrap());
            assert!(!e.holds(w, &[], &f(&e, "K(!Male(n))")).unwrap());
            assert!(e.holds(w, &plan(&e, "isMale(n)"), &f(&e, "K(Male(n))")).unwrap());
        }
    }

    #[test]
    fn entails_examples() {
        let e = engine();
        assert!(e.entails(&f(&e, "Male(n)")).unwrap().holds);
        assert!(e.entails(&f(&e, "[approve(n); approve(nprime)] K(forall x. hasLoan(x))")).unwrap().holds);
        let v = e.entails(&f(&e, "K(Male(n))")).unwrap();
        assert!(!v.holds);
        let d = v.diagnostics.unwrap();
        assert_eq!(d.counterexample_world, e.ground().valuation(e.w0()[0]));
        let witness = d.witness_world.unwrap();
        assert_eq!(witness.get(&atom("Male(n)", &e)), Some(false));
    }

    #[test]
    fn diagnostics_follow_the_failing_branch() {
        let e = engine();
        let v = e.entails(&f(&e, "[isMale(n)] forall x. K(Male(x))")).unwrap();
        let d = v.diagnostics.unwrap();
        assert_eq!(d.failing_prefix, plan(&e, "isMale(n)"));
        assert_eq!(d.instantiation, vec![Binding { var: "x".into(), object: ObjectName::new("nprime") }]);
        assert_eq!(d.subformula_path.last().unwrap(), "Male(nprime)");
    }

    #[test]
    fn validity_examples() {
        let e = engine();
        let v = e.validity_bounded(&f(&e, "K(Eligible(n)) & K(Eligible(n) -> Eligible(n) | Male(n)) -> K(Eligible(n) | Male(n))"), 2).unwrap();
        assert!(v.holds);
        assert!(v.warnings[0].contains("bounded"));
        assert!(e.validity_bounded(&f(&e, "!K(Male(n)) -> K(!K(Male(n)))"), 2).unwrap().holds);
        let ssa = "[isMale(n)] K(Male(n)) <-> (SF(isMale(n)) & K(SF(isMale(n)) -> [isMale(n)] Male(n))) | (!SF(isMale(n)) & K(!SF(isMale(n)) -> [isMale(n)] Male(n)))";
        assert!(e.validity_bounded(&f(&e, ssa), 1).unwrap().holds);
        // not valid: reports the shortest failing trace
        let v = e.validity_bounded(&f(&e, "!K(Male(n))"), 2).unwrap();
        assert!(!v.holds);
        assert_eq!(v.diagnostics.unwrap().trace.unwrap().len(), 1);
    }

    #[test]
    fn validity_budget() {
        let e = engine();
        let cfg = EngineConfig { max_traces: 100, ..EngineConfig::default() };
        let e = Engine::with_config(e.theory(), cfg).unwrap();
        assert!(e.validity_bounded(&Formula::True, 1).unwrap().holds);
        assert!(e.validity_bounded(&Formula::True, 2).unwrap_err().is_resource());
    }

    #[test]
    fn only_knowing_the_initial_knowledge() {
        let e = engine();
        assert!(e.entails(&f(&e, "O(Eligible(n) & !Eligible(nprime))")).unwrap().holds);
        assert!(!e.entails(&f(&e, "O(Eligible(n))")).unwrap().holds);
        assert!(e.entails(&f(&e, "[isMale(n)] O(Eligible(n) & !Eligible(nprime) & Male(n))")).unwrap().holds);
    }

    #[test]
    fn vacuous_knowledge_warns() {
        let t = crate::dsl::parse_theory(&crate::dsl::TheorySource::new(
            "domain t\nobjects: o\nfluent p/0\naction go\nposs go: p\nssa p: p\ninit_true: !p\ninit_known: !p\n",
            "<t>",
        ))
        .unwrap();
        let e = Engine::new(&t).unwrap();
        let v = e.entails(&parse_formula("[go] K(false)", &t).unwrap()).unwrap();
        assert!(v.holds);
        assert!(v.warnings.iter().any(|w| w.contains("vacuous K")));
    }

    #[test]
    fn knowledge_without_truth() {
        let t = bundled::loan();
        let known = Formula::and(t.init_known.clone(), parse_formula("hasLoan(n)", &t).unwrap());
        let e = Engine::new(&t.with_initial(t.init_true.clone(), known)).unwrap();
        assert!(e.entails(&parse_formula("K(hasLoan(n))", &t).unwrap()).unwrap().holds);
        assert!(!e.entails(&parse_formula("hasLoan(n)", &t).unwrap()).unwrap().holds);
    }

    #[test]
    fn odometer_is_lexicographic() {
        let mut z = vec![0, 0];
        let mut seen = vec![z.clone()];
        while odometer(&mut z, 3) {
            seen.push(z.clone());
        }
        assert_eq!(seen.len(), 9);
        assert!(seen.windows(2).all(|p| p[0] < p[1]));
    }
}
