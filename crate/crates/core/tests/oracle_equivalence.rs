use fames_core::Engine;
use fames_testkit::gen::{self, QueryShape, TheoryShape};
use fames_testkit::Oracle;
use rand::Rng;

#[test]
fn holds_matches_reference_on_500_triples() {
    let mut rng = gen::rng(0x5eed_0005);
    let shape = TheoryShape::default();
    let mut checked = 0;
    let mut theory_seed = 0;
    while checked < 500 {
        theory_seed += 1;
        let theory = gen::theory(&mut rng, &shape);
        let engine = Engine::new(&theory).unwrap();
        let oracle = Oracle::new(&theory, 3);
        for _ in 0..10 {
            let f = gen::query(&mut rng, &theory, &QueryShape::default());
            let len = rng.gen_range(0..=3);
            let z = gen::plan(&mut rng, &theory, len);
            let w = rng.gen_range(0..oracle.worlds().len());
            let ws = engine.ground().world_of(|a| oracle.value(w, a));
            let got = engine.holds(ws, &z, &f).unwrap();
            let want = oracle.holds(w, &z, &f);
            assert_eq!(got, want, "theory #{theory_seed}:\n{theory}\nformula {f}\ntrace {z:?}\nworld {w}");
            checked += 1;
        }
    }
}

#[test]
fn entails_matches_reference() {
    let mut rng = gen::rng(0x5eed_0105);
    for _ in 0..60 {
        let theory = gen::theory(&mut rng, &TheoryShape::default());
        let engine = Engine::new(&theory).unwrap();
        let oracle = Oracle::new(&theory, 3);
        assert_eq!(engine.w0().len(), oracle.w0().len());
        assert_eq!(engine.e().len(), oracle.e().len());
        for _ in 0..5 {
            let f = gen::query(&mut rng, &theory, &QueryShape::default());
            assert_eq!(engine.entails(&f).unwrap().holds, oracle.entails(&f), "{theory}\n{f}");
        }
    }
}

#[test]
fn bounded_validity_matches_reference() {
    let mut rng = gen::rng(0x5eed_0205);
    let shape = TheoryShape { max_ground_actions: 3, ..TheoryShape::default() };
    for _ in 0..40 {
        let theory = gen::theory(&mut rng, &shape);
        let engine = Engine::new(&theory).unwrap();
        let oracle = Oracle::new(&theory, 2);
        for _ in 0..3 {
            let f = gen::query(&mut rng, &theory, &QueryShape { depth: 2, ..QueryShape::default() });
            let v = engine.validity_bounded(&f, 2).unwrap();
            assert_eq!(v.holds, oracle.valid_up_to(&f, 2), "{theory}\n{f}");
        }
    }
}

#[test]
fn bundled_theories_match_reference() {
    for (name, _) in fames_core::bundled::ALL {
        let theory = fames_core::bundled::by_name(name).unwrap();
        let engine = Engine::new(&theory).unwrap();
        let oracle = Oracle::new(&theory, 1);
        let mut rng = gen::rng(name.len() as u64);
        for _ in 0..40 {
            let f = gen::query(&mut rng, &theory, &QueryShape { depth: 3, only_knows: false, ..QueryShape::default() });
            let len = rng.gen_range(0..=1);
            let z = gen::plan(&mut rng, &theory, len);
            let w = oracle.w0_indices()[rng.gen_range(0..oracle.w0_indices().len())];
            let ws = engine.ground().world_of(|a| oracle.value(w, a));
            assert_eq!(engine.holds(ws, &z, &f).unwrap(), oracle.holds(w, &z, &f), "{name}: {f} after {z:?}");
        }
    }
}
