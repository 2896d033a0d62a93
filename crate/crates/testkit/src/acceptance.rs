//! Drivers for the acceptance criteria AC1–AC7. Each returns a one-line
//! summary on success and a description of the first disagreement otherwise.
//! AC8 (CLI determinism) lives with the CLI tests.

use std::collections::BTreeSet;

use fames_core::fairness::{check, EoReading, FairnessQuery, Notion};
use fames_core::forget::{forget_formula, forget_theory, forget_worlds};
use fames_core::formula::{display_plan, ground};
use fames_core::search::{candidate_actions, find_plans, SearchConfig};
use fames_core::world::models_of;
use fames_core::{bundled, parse_formula, parse_formula_with_free, parse_plan, Engine, Formula, GroundAtom, Theory};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::gen::{self, QueryShape, Signature, TestRng, TheoryShape};
use crate::naive::naive_plans;
use crate::oracle::Oracle;
use crate::props::{knowledge_ssa, schema_instances};

pub type Outcome = Result<String, String>;

/// A fairness question about a bundled theory, with its expected answer.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub theory: &'static str,
    pub notion: Notion,
    pub plan: &'static str,
    pub goal: &'static str,
    pub protected: &'static str,
    pub criterion: Option<&'static str>,
    pub property: Option<&'static str>,
    pub individual: Option<&'static str>,
    pub reading: EoReading,
    pub expect: bool,
}

const fn sc(theory: &'static str, notion: Notion, plan: &'static str, goal: &'static str, expect: bool) -> Scenario {
    Scenario {
        theory,
        notion,
        plan,
        goal,
        protected: "Male",
        criterion: None,
        property: None,
        individual: None,
        reading: EoReading::Conditioned,
        expect,
    }
}

const APPROVE: &str = "approve(n); approve(nprime)";
const APPROVE_REV: &str = "approve(nprime); approve(n)";
const SENSE_APPROVE: &str = "isMale(n); isMale(nprime); approve(n); approve(nprime)";
const PROMOTE: &str = "promote(n); promote(nprime)";
const MAKE_PROMOTE: &str = "make(n); make(nprime); promote(n); promote(nprime)";

/// The worked examples, each with its expected verdict.
pub fn scenarios() -> Vec<Scenario> {
    use Notion::*;
    vec![
        sc("loan", Ftu, APPROVE, "forall x. hasLoan(x)", true),
        sc("loan", Ftu, APPROVE, "hasLoan(n)", true),
        sc("loan", Dp, APPROVE, "hasLoan(x)", true),
        sc("loan", FtuDp, APPROVE, "hasLoan(x)", true),
        sc("loan", Dp, APPROVE_REV, "hasLoan(x)", true),
        sc("loan", FtuDp, APPROVE_REV, "hasLoan(x)", true),
        sc("loan", StrongDp, SENSE_APPROVE, "hasLoan(x)", true),
        sc("loan", StrongDp, APPROVE, "hasLoan(x)", false),
        Scenario { criterion: Some("Eligible"), ..sc("loan", Eo, PROMOTE, "highSalary(x)", true) },
        Scenario { individual: Some("n"), ..sc("loan", Cf, "approve(n)", "hasLoan(n)", true) },
        Scenario { individual: Some("n"), ..sc("loan", Cf, "promote(n)", "highSalary(n)", true) },
        Scenario { individual: Some("nprime"), ..sc("loan", Cf, "promote(nprime)", "highSalary(nprime)", false) },
        Scenario { property: Some("Eligible"), ..sc("loan", WeakEquity, "", "true", false) },
        Scenario { property: Some("Eligible"), ..sc("loan", EquitableFtu, PROMOTE, "forall x. highSalary(x)", false) },
        Scenario {
            property: Some("Eligible"),
            ..sc("loan-make", EquitableFtu, MAKE_PROMOTE, "forall x. highSalary(x)", true)
        },
        Scenario {
            protected: "Underrepresented",
            ..sc(
                "loan-underrep",
                StrongDp,
                "checkU(n); checkU(nprime); approve(n); approve(nprime)",
                "hasLoan(x)",
                true,
            )
        },
    ]
}

/// Further bundled scenarios used for checker/formula agreement.
pub fn extra_scenarios() -> Vec<Scenario> {
    use Notion::*;
    vec![
        sc("loan", Ftu, "isMale(n); approve(n); approve(nprime)", "forall x. hasLoan(x)", false),
        sc("loan", Ftu, "", "forall x. hasLoan(x)", false),
        Scenario { individual: Some("n"), ..sc("loan", FtuInd, APPROVE, "hasLoan(n)", true) },
        Scenario { individual: Some("n"), ..sc("loan", FtuInd, "isMale(nprime); approve(n)", "hasLoan(n)", true) },
        Scenario { individual: Some("n"), ..sc("loan", FtuInd, "isMale(n); approve(n)", "hasLoan(n)", false) },
        sc("loan", Dp, "approve(n)", "hasLoan(x)", false),
        sc("loan", Dp, PROMOTE, "highSalary(x)", false),
        sc("loan", FtuDp, "isMale(n); approve(n); approve(nprime)", "hasLoan(x)", false),
        Scenario {
            criterion: Some("Eligible"),
            reading: EoReading::Literal,
            ..sc("loan", Eo, PROMOTE, "highSalary(x)", false)
        },
        Scenario { criterion: Some("Eligible"), ..sc("loan", Eo, "", "highSalary(x)", false) },
        Scenario { property: Some("Eligible"), ..sc("loan", StrongEquity, "", "true", false) },
        Scenario { property: Some("Eligible"), ..sc("loan-make", WeakEquity, "", "true", false) },
        // EtonForBoys(n) is known from the start
        Scenario { protected: "EtonForBoys", ..sc("loan-eton", Ftu, APPROVE, "forall x. hasLoan(x)", false) },
        Scenario { individual: Some("n"), ..sc("loan-eton", Cf, "approve(n)", "hasLoan(n)", true) },
    ]
}

impl Scenario {
    pub fn engine(&self) -> Engine {
        Engine::new(&bundled::by_name(self.theory).expect("bundled theory")).expect("engine")
    }

    pub fn query(&self, theory: &Theory) -> FairnessQuery {
        let free: &[&str] = if self.notion.parametric_goal() { &["x"] } else { &[] };
        FairnessQuery {
            plan: parse_plan(self.plan, theory).expect("plan"),
            goal: parse_formula_with_free(self.goal, theory, free).expect("goal"),
            protected: self.protected.to_string(),
            criterion: self.criterion.map(String::from),
            positive_property: self.property.map(String::from),
            individual: self.individual.map(fames_core::ObjectName::new),
            eo_reading: self.reading,
        }
    }

    pub fn describe(&self) -> String {
        format!("{} {} [{}] {} wrt {}", self.theory, self.notion, self.plan, self.goal, self.protected)
    }
}

pub fn ac1_examples() -> Outcome {
    let all = scenarios();
    for s in &all {
        let e = s.engine();
        let v = check(&e, s.notion, &s.query(e.theory())).map_err(|err| format!("{}: {err}", s.describe()))?;
        if v.holds != s.expect {
            return Err(format!("{}: expected {}, got {} ({:?})", s.describe(), s.expect, v.holds, v.failed_clause));
        }
    }
    Ok(format!("{} worked examples", all.len()))
}

fn properties_on(rng: &mut TestRng, theory: &Theory, samples: usize, guarded: bool) -> Result<usize, String> {
    let engine = Engine::new(theory).map_err(|e| e.to_string())?;
    let shape = QueryShape { depth: 2, ..QueryShape::default() };
    let mut n = 0;
    for _ in 0..samples {
        let alpha = gen::query(rng, theory, &shape);
        let beta = gen::query(rng, theory, &shape);
        let open = gen::open_query(rng, theory, "x", &shape);
        let mut all = schema_instances(&alpha, &beta, &open);
        let ssa =
            Formula::conjoin(Signature::of(theory).ground_actions().iter().map(|a| knowledge_ssa(a, &alpha, guarded)));
        all.push(("knowledge successor state", ssa));
        for (what, f) in all {
            let v = engine.validity_bounded(&f, 3).map_err(|e| e.to_string())?;
            if !v.holds {
                return Err(format!("{what} fails on theory `{}`: {f}\n{theory}", theory.name));
            }
            n += 1;
        }
    }
    Ok(n)
}

pub fn ac2_validities() -> Outcome {
    let mut rng = gen::rng(0xac2);
    let mut n = 0;
    for (name, _) in bundled::ALL {
        n += properties_on(&mut rng, &bundled::by_name(name).unwrap(), 2, false)?;
    }
    let trivial = TheoryShape { trivial_poss: true, ..TheoryShape::default() };
    for _ in 0..50 {
        let t = gen::theory(&mut rng, &trivial);
        n += properties_on(&mut rng, &t, 1, false)?;
    }
    for _ in 0..50 {
        let t = gen::theory(&mut rng, &TheoryShape::default());
        n += properties_on(&mut rng, &t, 1, true)?;
    }
    Ok(format!("{n} instances valid at horizon 3 (4 bundled + 100 random theories)"))
}

pub fn ac3_only_knowing() -> Outcome {
    let mut rng = gen::rng(0xac3);
    let shape = TheoryShape { max_ground_actions: 1, ..TheoryShape::default() };
    for _ in 0..50 {
        let base = gen::theory(&mut rng, &shape);
        let theory = base.with_initial(Formula::True, base.init_known.clone());
        let engine = Engine::new(&theory).map_err(|e| e.to_string())?;
        let oracle = Oracle::new(&theory, 0);
        for _ in 0..20 {
            let psi = gen::static_query(&mut rng, &theory, 3);
            let models = oracle.models(&psi);
            let all_e = oracle.e_indices().iter().all(|w| models.contains(w));
            let k = engine.entails(&Formula::knows(psi.clone())).map_err(|e| e.to_string())?.holds;
            let not_k = engine.entails(&Formula::not(Formula::knows(psi.clone()))).map_err(|e| e.to_string())?.holds;
            if k != all_e || not_k == all_e {
                return Err(format!("K/¬K of {psi} under {} disagree with enumeration", theory.init_known));
            }
        }
    }
    Ok("1000 (Σ0′, ψ) pairs agree with enumeration".into())
}

fn set<T: Ord>(v: Vec<T>) -> BTreeSet<T> {
    v.into_iter().collect()
}

pub fn ac4_forgetting() -> Outcome {
    let mut rng = gen::rng(0xac4);
    let shape = TheoryShape { max_ground_actions: 1, ..TheoryShape::default() };
    let err = |e: fames_core::Error| e.to_string();
    for _ in 0..200 {
        let theory = gen::theory(&mut rng, &shape);
        let engine = Engine::new(&theory).map_err(err)?;
        let g = engine.ground();
        let phi = ground(&gen::static_query(&mut rng, &theory, 3), &theory.objects).map_err(err)?;
        let atoms = g.atoms().to_vec();
        let k = rng.gen_range(1..=atoms.len().min(3));
        let s: Vec<GroundAtom> = atoms.choose_multiple(&mut rng, k).cloned().collect();
        let models = |f: &Formula| models_of(g, f).map(set);
        let once = forget_formula(&phi, &s).map_err(err)?;
        let m_phi = models_of(g, &phi).map_err(err)?;
        let m_once = models(&once).map_err(err)?;
        if m_once != set(forget_worlds(g, &m_phi, &s).map_err(err)?) {
            return Err(format!("syntactic and semantic forgetting differ on {phi}"));
        }
        if !set(m_phi).is_subset(&m_once) {
            return Err(format!("forgetting does not weaken {phi}"));
        }
        if models(&forget_formula(&once, &s).map_err(err)?).map_err(err)? != m_once {
            return Err(format!("forgetting is not idempotent on {phi}"));
        }
        let (s1, s2) = s.split_at(s.len() / 2);
        for (x, y) in [(s1, s2), (s2, s1)] {
            let f = forget_formula(&forget_formula(&phi, x).map_err(err)?, y).map_err(err)?;
            if models(&f).map_err(err)? != m_once {
                return Err(format!("forgetting depends on order for {phi}"));
            }
        }
    }
    for _ in 0..50 {
        let base = gen::theory(&mut rng, &shape);
        let theory = base.with_initial(Formula::True, base.init_known.clone());
        let atoms = Engine::new(&theory).map_err(err)?.ground().atoms().to_vec();
        let p = vec![atoms.choose(&mut rng).unwrap().clone()];
        let forgotten = Engine::new(&forget_theory(&theory, &p).map_err(err)?).map_err(err)?;
        let kb = forget_formula(&ground(&theory.init_known, &theory.objects).map_err(err)?, &p).map_err(err)?;
        let kb_models = set(models_of(forgotten.ground(), &kb).map_err(err)?);
        let psi = gen::static_query(&mut rng, &theory, 2);
        let entailed = kb_models.is_subset(&set(models_of(forgotten.ground(), &psi).map_err(err)?));
        let known = forgotten.entails(&Formula::knows(psi.clone())).map_err(err)?.holds;
        if entailed && !known {
            return Err(format!("Forget(Σ0′, {}) entails {psi} but K{psi} is not entailed", p[0]));
        }
    }
    Ok("200 formula/atom-set pairs and 50 knowledge-transfer instances".into())
}

pub fn ac5_oracle() -> Outcome {
    let mut rng = gen::rng(0xac5);
    let mut n = 0;
    while n < 500 {
        let theory = gen::theory(&mut rng, &TheoryShape::default());
        let engine = Engine::new(&theory).map_err(|e| e.to_string())?;
        let oracle = Oracle::new(&theory, 3);
        for _ in 0..10 {
            let f = gen::query(&mut rng, &theory, &QueryShape::default());
            let len = rng.gen_range(0..=3);
            let z = gen::plan(&mut rng, &theory, len);
            let w = rng.gen_range(0..oracle.worlds().len());
            let ws = engine.ground().world_of(|a| oracle.value(w, a));
            let got = engine.holds(ws, &z, &f).map_err(|e| e.to_string())?;
            if got != oracle.holds(w, &z, &f) {
                return Err(format!("holds({f}) after [{}] disagrees with the reference\n{theory}", display_plan(&z)));
            }
            n += 1;
        }
    }
    Ok("500 (theory, formula, trace) triples agree".into())
}

// ---------------------------------------------------------------------------
// Defining formulas, written out as text and decided by raw entailment.

fn after(plan: &[fames_core::ActionInstance], body: &str) -> String {
    if plan.is_empty() {
        body.to_string()
    } else {
        format!("[{}]({body})", display_plan(plan))
    }
}

fn entails_text(engine: &Engine, text: &str) -> Result<bool, String> {
    let f = parse_formula(text, engine.theory()).map_err(|e| format!("{text}: {e:?}"))?;
    Ok(engine.entails(&f).map_err(|e| e.to_string())?.holds)
}

fn all_text(engine: &Engine, texts: &[String]) -> Result<bool, String> {
    for t in texts {
        if !entails_text(engine, t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ignorance_texts(q: &FairnessQuery, who: Option<&str>) -> Vec<String> {
    let th = &q.protected;
    (0..=q.plan.len())
        .map(|k| match who {
            None => after(&q.plan[..k], &format!("!(exists x. K({th}(x)))")),
            Some(n) => after(&q.plan[..k], &format!("!K({th}({n}))")),
        })
        .collect()
}

fn ftu_texts(q: &FairnessQuery, who: Option<&str>) -> Vec<String> {
    let mut v = vec![after(&q.plan, &format!("K({})", q.goal))];
    v.extend(ignorance_texts(q, who));
    v
}

fn dp_text(q: &FairnessQuery) -> String {
    let (th, g) = (&q.protected, &q.goal);
    after(&q.plan, &format!("K((forall x. {th}(x) -> ({g})) & (forall x. !{th}(x) -> ({g})))"))
}

fn weak_equity_texts(th: &str, eta: &str) -> Vec<String> {
    vec![
        format!("exists x. exists y. {th}(x) & !{th}(y)"),
        format!("(exists x. {th}(x) & {eta}(x)) & (exists x. !{th}(x) & {eta}(x))"),
    ]
}

/// The verdict obtained from the defining formulas alone.
pub fn raw_verdict(engine: &Engine, notion: Notion, q: &FairnessQuery) -> Result<bool, String> {
    let th = q.protected.as_str();
    let eta_c = q.criterion.as_deref().unwrap_or("");
    let eta_p = q.positive_property.as_deref().unwrap_or("");
    let n = q.individual.as_ref().map(|o| o.to_string()).unwrap_or_default();
    let g = &q.goal;
    match notion {
        Notion::Ftu => all_text(engine, &ftu_texts(q, None)),
        Notion::FtuInd => all_text(engine, &ftu_texts(q, Some(&n))),
        Notion::Dp => entails_text(engine, &dp_text(q)),
        Notion::StrongDp => all_text(
            engine,
            &[dp_text(q), after(&q.plan, &format!("forall x. K({th}(x)) | K(!{th}(x))"))],
        ),
        Notion::FtuDp => {
            let mut v = vec![dp_text(q)];
            v.extend(ignorance_texts(q, None));
            all_text(engine, &v)
        }
        Notion::Eo => {
            let other = match q.eo_reading {
                EoReading::Conditioned => format!("{eta_c}(x) & !{th}(x)"),
                EoReading::Literal => format!("!({eta_c}(x) & {th}(x))"),
            };
            entails_text(
                engine,
                &after(&q.plan, &format!("K((forall x. {eta_c}(x) & {th}(x) -> ({g})) & (forall x. {other} -> ({g})))")),
            )
        }
        Notion::Cf => {
            let b = if entails_text(engine, &format!("{th}({n})"))? {
                true
            } else if entails_text(engine, &format!("!{th}({n})"))? {
                false
            } else {
                return Ok(false);
            };
            let goal = after(&q.plan, &format!("K({g})"));
            if !entails_text(engine, &goal)? {
                return Ok(false);
            }
            let atom = GroundAtom::new(th, vec![fames_core::ObjectName::new(&n)]);
            let forgotten = forget_theory(engine.theory(), &[atom]).map_err(|e| e.to_string())?;
            let flipped = parse_formula(&if b { format!("!{th}({n})") } else { format!("{th}({n})") }, &forgotten)
                .map_err(|e| format!("{e:?}"))?;
            let derived = forgotten.with_initial(
                Formula::and(forgotten.init_true.clone(), flipped.clone()),
                Formula::and(forgotten.init_known.clone(), flipped),
            );
            entails_text(&Engine::new(&derived).map_err(|e| e.to_string())?, &goal)
        }
        Notion::StrongEquity => {
            entails_text(engine, &format!("(forall x. {th}(x) -> {eta_p}(x)) & (forall x. !{th}(x) -> {eta_p}(x))"))
        }
        Notion::WeakEquity => all_text(engine, &weak_equity_texts(th, eta_p)),
        Notion::EquitableFtu => {
            if all_text(engine, &weak_equity_texts(th, eta_p))? {
                all_text(engine, &ftu_texts(q, None))
            } else {
                let atoms: Vec<GroundAtom> =
                    engine.theory().objects.iter().map(|o| GroundAtom::new(eta_p, vec![o.clone()])).collect();
                let forgotten = forget_theory(engine.theory(), &atoms).map_err(|e| e.to_string())?;
                all_text(&Engine::new(&forgotten).map_err(|e| e.to_string())?, &ftu_texts(q, None))
            }
        }
    }
}

fn random_query(rng: &mut TestRng, theory: &Theory, notion: Notion) -> FairnessQuery {
    let unary: Vec<String> = theory.unary_predicates().map(|p| p.name.clone()).collect();
    let shape = QueryShape { depth: 2, only_knows: false, ..QueryShape::default() };
    let goal = if notion.parametric_goal() {
        gen::open_query(rng, theory, "x", &shape)
    } else {
        gen::query(rng, theory, &shape)
    };
    let len = rng.gen_range(0..=3);
    FairnessQuery {
        plan: gen::plan(rng, theory, len),
        goal,
        protected: unary.choose(rng).unwrap().clone(),
        criterion: Some(unary.choose(rng).unwrap().clone()),
        positive_property: Some(unary.choose(rng).unwrap().clone()),
        individual: Some(theory.objects.choose(rng).unwrap().clone()),
        eo_reading: if rng.gen_bool(0.5) { EoReading::Conditioned } else { EoReading::Literal },
    }
}

pub fn ac6_checker_formulas() -> Outcome {
    let (mut n, mut held) = (0, 0);
    for s in scenarios().into_iter().chain(extra_scenarios()) {
        let e = s.engine();
        let q = s.query(e.theory());
        let v = check(&e, s.notion, &q).map_err(|err| format!("{}: {err}", s.describe()))?;
        if v.holds != raw_verdict(&e, s.notion, &q)? {
            return Err(format!("{}: checker says {}, defining formulas disagree", s.describe(), v.holds));
        }
        n += 1;
        held += v.holds as usize;
    }
    let mut rng = gen::rng(0xac6);
    let engines: Vec<Engine> =
        ["loan", "loan-make", "loan-eton"].iter().map(|t| Engine::new(&bundled::by_name(t).unwrap()).unwrap()).collect();
    for i in 0..100 {
        let notion = Notion::ALL[i % Notion::ALL.len()];
        let e = engines.choose(&mut rng).unwrap();
        let q = random_query(&mut rng, e.theory(), notion);
        let v = check(e, notion, &q).map_err(|err| format!("{notion} {q:?}: {err}"))?;
        if v.holds != raw_verdict(e, notion, &q)? {
            return Err(format!("{notion} on {}: checker says {} for {q:?}", e.theory().name, v.holds));
        }
        n += 1;
        held += v.holds as usize;
    }
    Ok(format!("{n} checks agree with their defining formulas ({held} hold)"))
}

/// A random theory with at least one unary predicate and at most
/// `max_actions` ground actions.
fn search_theory(rng: &mut TestRng, max_actions: usize) -> Theory {
    loop {
        let shape = TheoryShape { max_ground_actions: max_actions, ..TheoryShape::default() };
        let t = gen::theory(rng, &shape);
        if t.unary_predicates().next().is_some() {
            return t;
        }
    }
}

pub fn ac7_search() -> Outcome {
    let mut rng = gen::rng(0xac7);
    let mut cases = Vec::new();
    // the loan theory restricted to six ground actions
    let loan = Engine::new(&bundled::loan()).unwrap();
    for (notion, goal) in [(Notion::FtuDp, "hasLoan(x)"), (Notion::Dp, "hasLoan(x)"), (Notion::Ftu, "forall x. hasLoan(x)")] {
        let free: &[&str] = if notion.parametric_goal() { &["x"] } else { &[] };
        let q = FairnessQuery::new(vec![], parse_formula_with_free(goal, loan.theory(), free).unwrap(), "Male");
        let cfg = SearchConfig::new(notion, q, 3)
            .with_max_results(usize::MAX)
            .with_actions(vec!["approve".into(), "isMale".into(), "deny".into()]);
        cases.push((Engine::new(&bundled::loan()).unwrap(), cfg));
    }
    let plan_notions: Vec<Notion> = Notion::ALL.into_iter().filter(|n| !n.world_level()).collect();
    for i in 0..30 {
        let theory = search_theory(&mut rng, 6);
        let notion = plan_notions[i % plan_notions.len()];
        let q = random_query(&mut rng, &theory, notion);
        let horizon = rng.gen_range(0..=3);
        let cfg = SearchConfig::new(notion, q, horizon).with_max_results(usize::MAX);
        cases.push((Engine::new(&theory).unwrap(), cfg));
    }
    let mut found = 0;
    for (engine, cfg) in &cases {
        let actions = candidate_actions(engine, cfg).map_err(|e| e.to_string())?;
        if actions.len() > 6 {
            return Err(format!("{} ground actions", actions.len()));
        }
        let got: Vec<_> = find_plans(engine, cfg).map_err(|e| e.to_string())?.into_iter().map(|(p, _)| p).collect();
        let want = naive_plans(engine, cfg.notion, &cfg.query, &actions, cfg.horizon).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!(
                "{} on {}: search found {} plans, naive enumeration {}",
                cfg.notion,
                engine.theory().name,
                got.len(),
                want.len()
            ));
        }
        found += got.len();
    }
    Ok(format!("{} searches match naive enumeration ({found} plans)", cases.len()))
}
