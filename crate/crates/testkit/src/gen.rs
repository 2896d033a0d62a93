//! Seeded random theories, formulas and plans, emitted as DSL text and
//! parsed through the real front end.

use fames_core::{parse_formula, parse_theory, ActionInstance, ObjectName, Theory, TheorySource};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct TheoryShape {
    pub max_atoms: usize,
    pub max_ground_actions: usize,
    /// Every action always possible.
    pub trivial_poss: bool,
    pub sensing: bool,
    pub max_objects: usize,
}

impl Default for TheoryShape {
    fn default() -> Self {
        TheoryShape { max_atoms: 6, max_ground_actions: 4, trivial_poss: false, sensing: true, max_objects: 2 }
    }
}

/// Declared symbols of a generated theory.
#[derive(Debug, Clone)]
pub struct Signature {
    pub objects: Vec<String>,
    /// (name, arity, fluent)
    pub predicates: Vec<(String, usize, bool)>,
    /// (name, arity)
    pub actions: Vec<(String, usize)>,
}

impl Signature {
    pub fn of(theory: &Theory) -> Self {
        Signature {
            objects: theory.objects.iter().map(|o| o.to_string()).collect(),
            predicates: theory
                .predicates
                .iter()
                .map(|p| (p.name.clone(), p.arity, p.kind == fames_core::formula::PredicateKind::Fluent))
                .collect(),
            actions: theory.actions.iter().map(|a| (a.name.clone(), a.arity())).collect(),
        }
    }

    pub fn ground_actions(&self) -> Vec<ActionInstance> {
        let mut out = Vec::new();
        for (name, arity) in &self.actions {
            for args in tuples(&self.objects, *arity) {
                out.push(ActionInstance::new(name.clone(), args.into_iter().map(ObjectName::new).collect()));
            }
        }
        out
    }
}

fn tuples(objects: &[String], k: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t: Vec<String>| {
                objects.iter().map(move |o| {
                    let mut t = t.clone();
                    t.push(o.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn app(head: &str, args: &[String], omit_empty: bool) -> String {
    if args.is_empty() && omit_empty {
        head.to_string()
    } else {
        format!("{head}({})", args.join(", "))
    }
}

/// Random static formula text over `sig`, free variables among `vars`.
pub fn static_formula(rng: &mut TestRng, sig: &Signature, vars: &mut Vec<String>, depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.25) {
        return static_leaf(rng, sig, vars);
    }
    match rng.gen_range(0..8) {
        0 => format!("!({})", static_formula(rng, sig, vars, depth - 1)),
        1 | 2 => binary(rng, sig, vars, depth, "&", static_formula),
        3 | 4 => binary(rng, sig, vars, depth, "|", static_formula),
        5 => binary(rng, sig, vars, depth, "->", static_formula),
        6 => binary(rng, sig, vars, depth, "<->", static_formula),
        _ => quantified(rng, sig, vars, depth, static_formula),
    }
}

type Gen = fn(&mut TestRng, &Signature, &mut Vec<String>, usize) -> String;

fn binary(rng: &mut TestRng, sig: &Signature, vars: &mut Vec<String>, depth: usize, op: &str, g: Gen) -> String {
    let l = g(rng, sig, vars, depth - 1);
    let r = g(rng, sig, vars, depth - 1);
    format!("({l}) {op} ({r})")
}

fn quantified(rng: &mut TestRng, sig: &Signature, vars: &mut Vec<String>, depth: usize, g: Gen) -> String {
    let v = format!("v{}", vars.len());
    let q = if rng.gen_bool(0.5) { "forall" } else { "exists" };
    vars.push(v.clone());
    let body = g(rng, sig, vars, depth - 1);
    vars.pop();
    format!("{q} {v}. ({body})")
}

fn term(rng: &mut TestRng, sig: &Signature, vars: &[String]) -> String {
    if !vars.is_empty() && rng.gen_bool(0.6) {
        vars.choose(rng).unwrap().clone()
    } else {
        sig.objects.choose(rng).unwrap().clone()
    }
}

fn static_leaf(rng: &mut TestRng, sig: &Signature, vars: &[String]) -> String {
    let roll = rng.gen_range(0..20);
    if roll == 0 || sig.predicates.is_empty() {
        return if rng.gen_bool(0.5) { "true".into() } else { "false".into() };
    }
    if roll <= 2 {
        let l = term(rng, sig, vars);
        let r = term(rng, sig, vars);
        return format!("{l} == {r}");
    }
    let (name, arity, _) = sig.predicates.choose(rng).unwrap().clone();
    let args: Vec<String> = (0..arity).map(|_| term(rng, sig, vars)).collect();
    app(&name, &args, true)
}

fn action_term(rng: &mut TestRng, sig: &Signature, vars: &[String]) -> String {
    let (name, arity) = sig.actions.choose(rng).unwrap().clone();
    let args: Vec<String> = (0..arity).map(|_| term(rng, sig, vars)).collect();
    app(&name, &args, false)
}

/// Random signature within the shape's budgets.
pub fn signature(rng: &mut TestRng, shape: &TheoryShape) -> Signature {
    let n_obj = rng.gen_range(1..=shape.max_objects.max(1));
    let objects: Vec<String> = (1..=n_obj).map(|i| format!("o{i}")).collect();
    let target = rng.gen_range(1..=shape.max_atoms.max(1));
    let mut predicates = Vec::new();
    let mut atoms = 0;
    while atoms < target {
        let arity = if target - atoms >= n_obj && rng.gen_bool(0.6) { 1 } else { 0 };
        atoms += if arity == 1 { n_obj } else { 1 };
        predicates.push((format!("P{}", predicates.len()), arity, rng.gen_bool(0.6)));
    }
    let target = rng.gen_range(1..=shape.max_ground_actions.max(1));
    let mut actions = Vec::new();
    let mut ground = 0;
    while ground < target {
        let arity = if target - ground >= n_obj && rng.gen_bool(0.5) { 1 } else { 0 };
        ground += if arity == 1 { n_obj } else { 1 };
        actions.push((format!("act{}", actions.len()), arity));
    }
    Signature { objects, predicates, actions }
}

fn ssa_rhs(rng: &mut TestRng, sig: &Signature, fluent: &str, params: &[String]) -> String {
    let mut vars = params.to_vec();
    let effect = |rng: &mut TestRng| -> String {
        let (name, arity) = sig.actions.choose(rng).unwrap().clone();
        let args: Vec<String> = (0..arity)
            .map(|_| if !params.is_empty() && rng.gen_bool(0.7) { params[0].clone() } else { term(rng, sig, &[]) })
            .collect();
        format!("a == {}", app(&name, &args, false))
    };
    let mut disjuncts = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let e = effect(rng);
        if rng.gen_bool(0.5) {
            disjuncts.push(format!("({e})"));
        } else {
            let c = static_formula(rng, sig, &mut vars, 1);
            disjuncts.push(format!("({e} & ({c}))"));
        }
    }
    let mut frame = vec![app(fluent, params, true)];
    for _ in 0..rng.gen_range(0..=2) {
        frame.push(format!("!({})", effect(rng)));
    }
    disjuncts.push(format!("({})", frame.join(" & ")));
    if rng.gen_bool(0.1) {
        // an unstructured axiom now and then
        disjuncts.push(format!("({})", static_formula(rng, sig, &mut vars, 2)));
    }
    disjuncts.join(" | ")
}

/// Random theory text within `shape`.
pub fn theory_text(rng: &mut TestRng, shape: &TheoryShape) -> String {
    let sig = signature(rng, shape);
    let mut out = String::from("domain random\n");
    out += &format!("objects: {}\n", sig.objects.join(", "));
    for (name, arity, fluent) in &sig.predicates {
        out += &format!("{} {name}/{arity}\n", if *fluent { "fluent" } else { "rigid" });
    }
    for (name, arity) in &sig.actions {
        let params: Vec<String> = (0..*arity).map(|i| format!("y{i}")).collect();
        out += &format!("action {}\n", app(name, &params, false));
        if shape.sensing && rng.gen_bool(0.6) {
            let mut vars = params.clone();
            out += &format!("sense {}: {}\n", app(name, &params, false), static_formula(rng, &sig, &mut vars, 1));
        }
        if !shape.trivial_poss && rng.gen_bool(0.4) {
            let mut vars = params.clone();
            out += &format!("poss {}: {}\n", app(name, &params, false), static_formula(rng, &sig, &mut vars, 1));
        }
    }
    for (name, arity, fluent) in &sig.predicates {
        if *fluent {
            let params: Vec<String> = (0..*arity).map(|i| format!("x{i}")).collect();
            out += &format!("ssa {}: {}\n", app(name, &params, true), ssa_rhs(rng, &sig, name, &params));
        }
    }
    let known = static_formula(rng, &sig, &mut vec![], 2);
    let truth = match rng.gen_range(0..4) {
        0 => known.clone(),
        1 => static_formula(rng, &sig, &mut vec![], 2),
        _ => format!("({known}) & ({})", static_leaf(rng, &sig, &[])),
    };
    out += &format!("init_true: {truth}\ninit_known: {known}\n");
    out
}

pub fn theory(rng: &mut TestRng, shape: &TheoryShape) -> Theory {
    let text = theory_text(rng, shape);
    parse_theory(&TheorySource::new(text.clone(), "<random>"))
        .unwrap_or_else(|d| panic!("generated theory does not parse: {d:?}\n{text}"))
}

/// Which modal constructs a random query may use.
#[derive(Debug, Clone, Copy)]
pub struct QueryShape {
    pub depth: usize,
    pub knows: bool,
    pub only_knows: bool,
    pub actions: bool,
}

impl Default for QueryShape {
    fn default() -> Self {
        QueryShape { depth: 3, knows: true, only_knows: true, actions: true }
    }
}

/// Random closed query text.
pub fn query_text(rng: &mut TestRng, sig: &Signature, shape: &QueryShape) -> String {
    query_rec(rng, sig, &mut vec![], shape.depth, shape)
}

fn query_rec(rng: &mut TestRng, sig: &Signature, vars: &mut Vec<String>, depth: usize, shape: &QueryShape) -> String {
    if depth == 0 || rng.gen_bool(0.2) {
        if shape.actions && !sig.actions.is_empty() && rng.gen_bool(0.15) {
            let t = action_term(rng, sig, vars);
            return if rng.gen_bool(0.5) { format!("SF({t})") } else { format!("Poss({t})") };
        }
        return static_leaf(rng, sig, vars);
    }
    let sub = |rng: &mut TestRng, vars: &mut Vec<String>| query_rec(rng, sig, vars, depth - 1, shape);
    match rng.gen_range(0..12) {
        0 => format!("!({})", sub(rng, vars)),
        1 | 2 => format!("({}) & ({})", sub(rng, vars), sub(rng, vars)),
        3 => format!("({}) | ({})", sub(rng, vars), sub(rng, vars)),
        4 => format!("({}) -> ({})", sub(rng, vars), sub(rng, vars)),
        5 => {
            let v = format!("v{}", vars.len());
            let q = if rng.gen_bool(0.5) { "forall" } else { "exists" };
            vars.push(v.clone());
            let body = sub(rng, vars);
            vars.pop();
            format!("{q} {v}. ({body})")
        }
        6 | 7 if shape.knows => format!("K({})", sub(rng, vars)),
        8 if shape.only_knows => format!("O({})", static_formula(rng, sig, vars, depth - 1)),
        9 | 10 if shape.actions && !sig.actions.is_empty() => {
            let t = action_term(rng, sig, vars);
            format!("[{t}]({})", sub(rng, vars))
        }
        _ => format!("({}) <-> ({})", sub(rng, vars), sub(rng, vars)),
    }
}

pub fn query(rng: &mut TestRng, theory: &Theory, shape: &QueryShape) -> fames_core::Formula {
    let text = query_text(rng, &Signature::of(theory), shape);
    parse_formula(&text, theory).unwrap_or_else(|e| panic!("generated query does not parse: {e:?}\n{text}"))
}

/// Random static closed formula over the theory's symbols.
pub fn static_query(rng: &mut TestRng, theory: &Theory, depth: usize) -> fames_core::Formula {
    let text = static_formula(rng, &Signature::of(theory), &mut vec![], depth);
    parse_formula(&text, theory).unwrap_or_else(|e| panic!("generated formula does not parse: {e:?}\n{text}"))
}

pub fn plan(rng: &mut TestRng, theory: &Theory, len: usize) -> Vec<ActionInstance> {
    let acts = Signature::of(theory).ground_actions();
    (0..len).map(|_| acts.choose(rng).unwrap().clone()).collect()
}

/// Random query with the single free variable `var`.
pub fn open_query(rng: &mut TestRng, theory: &Theory, var: &str, shape: &QueryShape) -> fames_core::Formula {
    let sig = Signature::of(theory);
    let mut vars = vec![var.to_string()];
    let body = query_rec(rng, &sig, &mut vars, shape.depth, shape);
    // an extra leaf so the variable usually occurs
    let leaf = static_leaf(rng, &sig, &[var.to_string()]);
    let text = format!("({body}) {} ({leaf})", if rng.gen_bool(0.5) { "&" } else { "|" });
    fames_core::parse_formula_with_free(&text, theory, &[var])
        .unwrap_or_else(|e| panic!("generated query does not parse: {e:?}\n{text}"))
}
