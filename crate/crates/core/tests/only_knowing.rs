//! Only-knowing: `K` and `¬K` of non-modal formulas against the enumerated
//! epistemic state.

use fames_core::{Engine, Formula};
use fames_testkit::gen::{self, TheoryShape};
use fames_testkit::Oracle;

#[test]
fn knows_iff_every_e_world_satisfies() {
    let mut rng = gen::rng(0x0c4);
    let mut knowns = 0;
    let mut unknowns = 0;
    for _ in 0..50 {
        let base = gen::theory(&mut rng, &TheoryShape { max_ground_actions: 1, ..TheoryShape::default() });
        // W0 = all worlds, so entailment is never vacuous
        let theory = base.with_initial(Formula::True, base.init_known.clone());
        let engine = Engine::new(&theory).unwrap();
        let oracle = Oracle::new(&theory, 0);
        for _ in 0..20 {
            let psi = gen::static_query(&mut rng, &theory, 3);
            let models = oracle.models(&psi);
            let all_e = oracle.e_indices().iter().all(|w| models.contains(w));
            let some_not = oracle.e_indices().iter().any(|w| !models.contains(w));
            let k = engine.entails(&Formula::knows(psi.clone())).unwrap().holds;
            let not_k = engine.entails(&Formula::not(Formula::knows(psi.clone()))).unwrap().holds;
            assert_eq!(k, all_e, "K {psi} under {}", theory.init_known);
            assert_eq!(not_k, some_not, "¬K {psi} under {}", theory.init_known);
            if k {
                knowns += 1;
            } else {
                unknowns += 1;
            }
        }
    }
    // both directions actually exercised
    assert!(knowns > 50 && unknowns > 50, "{knowns} known, {unknowns} not known");
}

#[test]
fn only_knowing_the_initial_theory() {
    let mut rng = gen::rng(0x0c5);
    for _ in 0..30 {
        let base = gen::theory(&mut rng, &TheoryShape::default());
        let theory = base.with_initial(Formula::True, base.init_known.clone());
        let engine = Engine::new(&theory).unwrap();
        let o = Formula::only_knows(theory.init_known.clone());
        assert!(engine.entails(&o).unwrap().holds, "{}", theory.init_known);
        let psi = gen::static_query(&mut rng, &theory, 2);
        let stronger = Formula::and(theory.init_known.clone(), psi.clone());
        let same = engine.models(&stronger).unwrap() == engine.e();
        assert_eq!(engine.entails(&Formula::only_knows(stronger)).unwrap().holds, same);
    }
}
