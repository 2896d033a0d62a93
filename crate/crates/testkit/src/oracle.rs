//! A brute-force reference evaluator, written straight from the satisfaction
//! clauses and sharing no code with the engine beyond the AST.
//!
//! Worlds are initial valuations (`Vec<bool>` indexed by [`Oracle::atoms`]);
//! the state of every world after every trace up to the horizon is
//! materialized up front.

use std::collections::HashMap;

use fames_core::formula::{ActionOperand, ActionTerm, PredicateKind, Term, ACTION_VAR};
use fames_core::{ActionInstance, Formula, GroundAtom, ObjectName, Theory};

type State = Vec<bool>;

#[derive(Debug, Clone, PartialEq)]
enum Val {
    Obj(ObjectName),
    Act(ActionInstance),
}

type Env = Vec<(String, Val)>;

fn lookup<'e>(env: &'e Env, v: &str) -> &'e Val {
    env.iter().rev().find(|(n, _)| n == v).map(|(_, x)| x).unwrap_or_else(|| panic!("unbound `{v}`"))
}

pub struct Oracle {
    theory: Theory,
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, usize>,
    actions: Vec<ActionInstance>,
    /// Every initial valuation, in counting order.
    all: Vec<State>,
    w0: Vec<usize>,
    e: Vec<usize>,
    horizon: usize,
    table: HashMap<(usize, Vec<usize>), State>,
}

impl Oracle {
    pub fn new(theory: &Theory, horizon: usize) -> Self {
        let mut atoms = Vec::new();
        for p in &theory.predicates {
            let mut args = vec![vec![]];
            for _ in 0..p.arity {
                args = args
                    .into_iter()
                    .flat_map(|t: Vec<ObjectName>| {
                        theory.objects.iter().map(move |o| {
                            let mut t = t.clone();
                            t.push(o.clone());
                            t
                        })
                    })
                    .collect();
            }
            atoms.extend(args.into_iter().map(|a| GroundAtom::new(p.name.clone(), a)));
        }
        let mut actions = Vec::new();
        for a in &theory.actions {
            let mut args = vec![vec![]];
            for _ in 0..a.arity() {
                args = args
                    .into_iter()
                    .flat_map(|t: Vec<ObjectName>| {
                        theory.objects.iter().map(move |o| {
                            let mut t = t.clone();
                            t.push(o.clone());
                            t
                        })
                    })
                    .collect();
            }
            actions.extend(args.into_iter().map(|args| ActionInstance::new(a.name.clone(), args)));
        }
        assert!(atoms.len() <= 16, "oracle is for small theories");
        let index = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let all: Vec<State> =
            (0..1usize << atoms.len()).map(|m| (0..atoms.len()).map(|i| m >> i & 1 == 1).collect()).collect();
        let mut o = Oracle {
            theory: theory.clone(),
            atoms,
            index,
            actions,
            all,
            w0: vec![],
            e: vec![],
            horizon,
            table: HashMap::new(),
        };
        o.w0 = (0..o.all.len()).filter(|&w| o.static_holds(&o.all[w], &theory.init_true, &mut vec![])).collect();
        o.e = (0..o.all.len()).filter(|&w| o.static_holds(&o.all[w], &theory.init_known, &mut vec![])).collect();
        o.materialize();
        o
    }

    fn materialize(&mut self) {
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for w in 0..self.all.len() {
            self.table.insert((w, vec![]), self.all[w].clone());
        }
        for _ in 0..self.horizon {
            let mut next = Vec::new();
            for z in &frontier {
                for a in 0..self.actions.len() {
                    let mut za = z.clone();
                    za.push(a);
                    for w in 0..self.all.len() {
                        let s = self.successor(&self.table[&(w, z.clone())], &self.actions[a]);
                        self.table.insert((w, za.clone()), s);
                    }
                    next.push(za);
                }
            }
            frontier = next;
        }
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn actions(&self) -> &[ActionInstance] {
        &self.actions
    }

    pub fn worlds(&self) -> &[State] {
        &self.all
    }

    pub fn w0(&self) -> Vec<&State> {
        self.w0.iter().map(|&w| &self.all[w]).collect()
    }

    pub fn e(&self) -> Vec<&State> {
        self.e.iter().map(|&w| &self.all[w]).collect()
    }

    /// Index of the world with the given initial valuation.
    pub fn world(&self, value: impl Fn(&GroundAtom) -> bool) -> usize {
        self.atoms.iter().enumerate().filter(|(_, a)| value(a)).map(|(i, _)| 1 << i).sum()
    }

    pub fn value(&self, w: usize, atom: &GroundAtom) -> bool {
        self.all[w][self.index[atom]]
    }

    fn action_index(&self, a: &ActionInstance) -> usize {
        self.actions.iter().position(|b| b == a).unwrap_or_else(|| panic!("unknown action {a}"))
    }

    /// Looked up in the table, or computed from the longest tabled prefix
    /// when a formula reaches past the horizon.
    fn state(&self, w: usize, z: &[usize]) -> State {
        let k = z.len().min(self.horizon);
        let mut s = self.table[&(w, z[..k].to_vec())].clone();
        for &a in &z[k..] {
            s = self.successor(&s, &self.actions[a]);
        }
        s
    }

    fn obj(&self, t: &Term, env: &Env) -> ObjectName {
        match t {
            Term::Obj(o) => o.clone(),
            Term::Var(v) => match lookup(env, v) {
                Val::Obj(o) => o.clone(),
                Val::Act(_) => panic!("`{v}` is an action"),
            },
        }
    }

    fn act(&self, t: &ActionTerm, env: &Env) -> ActionInstance {
        ActionInstance::new(t.action.clone(), t.args.iter().map(|a| self.obj(a, env)).collect())
    }

    fn bind_params(&self, params: &[String], args: &[ObjectName]) -> Env {
        params.iter().cloned().zip(args.iter().cloned().map(Val::Obj)).collect()
    }

    /// Static truth at a single state.
    fn static_holds(&self, s: &State, f: &Formula, env: &mut Env) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom { predicate, args } => {
                let atom = GroundAtom::new(predicate.clone(), args.iter().map(|t| self.obj(t, env)).collect());
                s[self.index[&atom]]
            }
            Formula::TermEq(l, r) => self.obj(l, env) == self.obj(r, env),
            Formula::ActionEq(l, r) => {
                let lv = match l {
                    ActionOperand::Var(v) => match lookup(env, v) {
                        Val::Act(a) => a.clone(),
                        Val::Obj(_) => panic!("`{v}` is an object"),
                    },
                    ActionOperand::Term(t) => self.act(t, env),
                };
                lv == self.act(r, env)
            }
            Formula::Not(g) => !self.static_holds(s, g, env),
            Formula::And(l, r) => self.static_holds(s, l, env) && self.static_holds(s, r, env),
            Formula::Or(l, r) => self.static_holds(s, l, env) || self.static_holds(s, r, env),
            Formula::Implies(l, r) => !self.static_holds(s, l, env) || self.static_holds(s, r, env),
            Formula::Iff(l, r) => self.static_holds(s, l, env) == self.static_holds(s, r, env),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let universal = matches!(f, Formula::Forall(..));
                for o in self.theory.objects.clone() {
                    env.push((v.clone(), Val::Obj(o)));
                    let r = self.static_holds(s, g, env);
                    env.pop();
                    if r != universal {
                        return r;
                    }
                }
                universal
            }
            other => panic!("not static: {other}"),
        }
    }

    fn successor(&self, s: &State, a: &ActionInstance) -> State {
        let mut next = s.clone();
        for (i, atom) in self.atoms.iter().enumerate() {
            let decl = self.theory.predicate(&atom.predicate).unwrap();
            if decl.kind == PredicateKind::Rigid {
                continue;
            }
            let ssa = self.theory.ssa(&atom.predicate).unwrap();
            let mut env = self.bind_params(&ssa.params, &atom.args);
            env.push((ACTION_VAR.to_string(), Val::Act(a.clone())));
            next[i] = self.static_holds(s, &ssa.rhs, &mut env);
        }
        next
    }

    fn sf(&self, s: &State, a: &ActionInstance) -> bool {
        let decl = self.theory.action(&a.action).unwrap();
        match &decl.sensing {
            None => true,
            Some(f) => self.static_holds(s, f, &mut self.bind_params(&decl.params, &a.args)),
        }
    }

    fn poss(&self, s: &State, a: &ActionInstance) -> bool {
        let decl = self.theory.action(&a.action).unwrap();
        self.static_holds(s, &decl.precondition, &mut self.bind_params(&decl.params, &a.args))
    }

    /// `w′ ∼_z w`: along `z`, each action is possible in `w′` and senses the
    /// same value in both worlds.
    fn compatible(&self, w2: usize, w: usize, z: &[usize]) -> bool {
        (0..z.len()).all(|k| {
            let a = &self.actions[z[k]];
            let s2 = self.state(w2, &z[..k]);
            let s = self.state(w, &z[..k]);
            self.poss(&s2, a) && self.sf(&s2, a) == self.sf(&s, a)
        })
    }

    fn sat(&self, e: &[usize], w: usize, z: &mut Vec<usize>, f: &Formula, env: &mut Env) -> bool {
        match f {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::TermEq(..) | Formula::ActionEq(..) => {
                self.static_holds(&self.state(w, z), f, env)
            }
            Formula::Sense(t) => self.sf(&self.state(w, z), &self.act(t, env)),
            Formula::Poss(t) => self.poss(&self.state(w, z), &self.act(t, env)),
            Formula::Not(g) => !self.sat(e, w, z, g, env),
            Formula::And(l, r) => self.sat(e, w, z, l, env) && self.sat(e, w, z, r, env),
            Formula::Or(l, r) => self.sat(e, w, z, l, env) || self.sat(e, w, z, r, env),
            Formula::Implies(l, r) => !self.sat(e, w, z, l, env) || self.sat(e, w, z, r, env),
            Formula::Iff(l, r) => self.sat(e, w, z, l, env) == self.sat(e, w, z, r, env),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let universal = matches!(f, Formula::Forall(..));
                for o in self.theory.objects.clone() {
                    env.push((v.clone(), Val::Obj(o)));
                    let r = self.sat(e, w, z, g, env);
                    env.pop();
                    if r != universal {
                        return r;
                    }
                }
                universal
            }
            Formula::AfterAction(t, g) => {
                z.push(self.action_index(&self.act(t, env)));
                let r = self.sat(e, w, z, g, env);
                z.pop();
                r
            }
            Formula::AfterPlan(ts, g) => {
                let n = z.len();
                for t in ts {
                    let a = self.action_index(&self.act(t, env));
                    z.push(a);
                }
                let r = self.sat(e, w, z, g, env);
                z.truncate(n);
                r
            }
            Formula::Knows(g) => e
                .iter()
                .filter(|&&w2| self.compatible(w2, w, z))
                .all(|&w2| self.sat(e, w2, &mut z.clone(), g, &mut env.clone())),
            Formula::OnlyKnows(g) => (0..self.all.len())
                .filter(|&w2| self.compatible(w2, w, z))
                .all(|w2| e.contains(&w2) == self.sat(e, w2, &mut z.clone(), g, &mut env.clone())),
        }
    }

    /// `e, w, z ⊨ f`.
    pub fn holds(&self, w: usize, z: &[ActionInstance], f: &Formula) -> bool {
        let mut z: Vec<usize> = z.iter().map(|a| self.action_index(a)).collect();
        self.sat(&self.e, w, &mut z, f, &mut vec![])
    }

    /// Truth at every world of `W0` with the empty trace.
    pub fn entails(&self, f: &Formula) -> bool {
        self.w0.iter().all(|&w| self.sat(&self.e, w, &mut vec![], f, &mut vec![]))
    }

    /// Truth at every world of `W0` after every trace up to `horizon`.
    pub fn valid_up_to(&self, f: &Formula, horizon: usize) -> bool {
        assert!(horizon <= self.horizon);
        self.table
            .keys()
            .filter(|(w, z)| z.len() <= horizon && self.w0.contains(w))
            .all(|(w, z)| self.sat(&self.e, *w, &mut z.clone(), f, &mut vec![]))
    }

    /// Static models of a closed formula, as world indices.
    pub fn models(&self, f: &Formula) -> Vec<usize> {
        (0..self.all.len()).filter(|&w| self.static_holds(&self.all[w], f, &mut vec![])).collect()
    }

    /// Index set of `E`.
    pub fn e_indices(&self) -> &[usize] {
        &self.e
    }

    pub fn w0_indices(&self) -> &[usize] {
        &self.w0
    }
}
