//! Forgetting: syntactic and semantic versions agree, and the usual algebraic
//! laws hold.

use std::collections::BTreeSet;

use fames_core::forget::{forget_engine, forget_formula, forget_theory, forget_worlds};
use fames_core::formula::ground;
use fames_core::world::GroundTheory;
use fames_core::{Engine, Formula, GroundAtom, WorldState};
use fames_testkit::gen::{self, TheoryShape};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

struct Case {
    engine: Engine,
    phi: Formula,
    s: Vec<GroundAtom>,
}

fn case(seed: u64) -> Case {
    let mut rng = gen::rng(seed);
    let theory = gen::theory(&mut rng, &TheoryShape { max_ground_actions: 1, ..TheoryShape::default() });
    let engine = Engine::new(&theory).unwrap();
    let phi = ground(&gen::static_query(&mut rng, &theory, 3), &theory.objects).unwrap();
    let atoms = engine.ground().atoms().to_vec();
    let k = rng.gen_range(1..=atoms.len().min(3));
    let s = atoms.choose_multiple(&mut rng, k).cloned().collect();
    Case { engine, phi, s }
}

fn models(g: &GroundTheory, f: &Formula) -> Vec<WorldState> {
    fames_core::world::models_of(g, f).unwrap()
}

fn set(ws: Vec<WorldState>) -> BTreeSet<WorldState> {
    ws.into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn syntactic_matches_semantic(seed in any::<u64>()) {
        let Case { engine, phi, s } = case(seed);
        let g = engine.ground();
        let forgotten = forget_formula(&phi, &s).unwrap();
        for a in forgotten.atoms() {
            prop_assert!(!s.contains(&a), "{forgotten} still mentions {a}");
        }
        prop_assert_eq!(models(g, &forgotten), forget_worlds(g, &models(g, &phi), &s).unwrap());
    }

    #[test]
    fn weakening_idempotence_order(seed in any::<u64>()) {
        let Case { engine, phi, s } = case(seed);
        let g = engine.ground();
        let once = forget_formula(&phi, &s).unwrap();
        let m_phi = set(models(g, &phi));
        let m_once = set(models(g, &once));
        prop_assert!(m_phi.is_subset(&m_once));
        prop_assert_eq!(&set(models(g, &forget_formula(&once, &s).unwrap())), &m_once);

        let (s1, s2) = s.split_at(s.len() / 2);
        let a = forget_formula(&forget_formula(&phi, s1).unwrap(), s2).unwrap();
        let b = forget_formula(&forget_formula(&phi, s2).unwrap(), s1).unwrap();
        prop_assert_eq!(&set(models(g, &a)), &m_once);
        prop_assert_eq!(&set(models(g, &b)), &m_once);
    }
}

/// Whatever the forgotten knowledge base entails is known afterwards.
#[test]
fn knowledge_transfer() {
    let mut rng = gen::rng(0xf0e);
    let mut transferred = 0;
    for i in 0..50 {
        let Case { engine, s, .. } = case(0xf0e0 + i);
        let theory = engine.theory().with_initial(Formula::True, engine.theory().init_known.clone());
        let syntactic = Engine::new(&forget_theory(&theory, &s).unwrap()).unwrap();
        let semantic = forget_engine(&Engine::new(&theory).unwrap(), &s).unwrap();
        let kb = ground(&theory.init_known, &theory.objects).unwrap();
        let kb_models = set(models(syntactic.ground(), &forget_formula(&kb, &s).unwrap()));
        assert_eq!(set(syntactic.e().to_vec()), kb_models);
        assert_eq!(semantic.e(), syntactic.e());
        let mut hits = 0;
        while hits < 5 {
            let psi = gen::static_query(&mut rng, &theory, 2);
            let entailed = kb_models.is_subset(&set(models(syntactic.ground(), &psi)));
            let k = Formula::knows(psi);
            assert_eq!(syntactic.entails(&k).unwrap().holds, entailed);
            assert_eq!(semantic.entails(&k).unwrap().holds, entailed);
            hits += 1;
            transferred += entailed as usize;
        }
    }
    assert!(transferred > 0);
}
