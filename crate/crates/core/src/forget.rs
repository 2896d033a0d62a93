//! Forgetting ground atoms from initial theories.
//!
//! `Forget(φ, S)` is the disjunction of `φ` with the atoms of `S` fixed to
//! each of the `2^|S|` truth assignments. On world sets this is closure under
//! flipping the atoms of `S`. Forgetting touches only what is true and what
//! is known initially; the dynamic axioms are kept.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::{ground, simplify, Formula, GroundAtom, Term};
use crate::theory::Theory;
use crate::world::{models_of, Engine, GroundTheory, WorldState};

/// Largest atom set accepted by the forgetting operations.
pub const MAX_FORGET_ATOMS: usize = 16;

fn check_size(s: &[GroundAtom]) -> Result<()> {
    if s.len() > MAX_FORGET_ATOMS {
        return Err(Error::resource("atoms to forget", s.len() as u128, MAX_FORGET_ATOMS as u128));
    }
    Ok(())
}

fn dedup(s: &[GroundAtom]) -> Vec<GroundAtom> {
    let mut out: Vec<GroundAtom> = Vec::with_capacity(s.len());
    for a in s {
        if !out.contains(a) {
            out.push(a.clone());
        }
    }
    out
}

/// `f` with every atom in `s` replaced by its value under `assignment`
/// (bit `i` of `assignment` is the value of `s[i]`).
fn fix_atoms(f: &Formula, s: &[GroundAtom], assignment: u32) -> Formula {
    use Formula::*;
    let rec = |g: &Formula| Box::new(fix_atoms(g, s, assignment));
    match f {
        Atom { predicate, args } => {
            let hit = s.iter().position(|a| {
                a.predicate == *predicate
                    && a.args.len() == args.len()
                    && a.args.iter().zip(args).all(|(o, t)| matches!(t, Term::Obj(p) if p == o))
            });
            match hit {
                Some(i) if assignment >> i & 1 == 1 => True,
                Some(_) => False,
                None => f.clone(),
            }
        }
        Not(g) => Not(rec(g)),
        And(l, r) => And(rec(l), rec(r)),
        Or(l, r) => Or(rec(l), rec(r)),
        Implies(l, r) => Implies(rec(l), rec(r)),
        Iff(l, r) => Iff(rec(l), rec(r)),
        other => other.clone(),
    }
}

fn check_ground_static(f: &Formula) -> Result<()> {
    if !f.is_static() {
        return Err(Error::NotStatic(f.to_string()));
    }
    let mut quantified = None;
    f.visit(&mut |g| {
        if let Formula::Forall(v, _) | Formula::Exists(v, _) = g {
            quantified.get_or_insert_with(|| v.clone());
        }
    });
    if let Some(v) = quantified {
        return Err(Error::Malformed(format!("forgetting needs a ground formula; `{v}` is quantified")));
    }
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Error::Malformed(format!("forgetting needs a ground formula; `{v}` is free")));
    }
    Ok(())
}

/// `Forget(f, s)` for a ground, non-modal `f`, simplified. The result
/// mentions no atom of `s`.
pub fn forget_formula(f: &Formula, s: &[GroundAtom]) -> Result<Formula> {
    check_ground_static(f)?;
    check_size(s)?;
    let s = dedup(s);
    if s.is_empty() {
        return Ok(f.clone());
    }
    let mut disjuncts = Vec::new();
    // all-true assignment first
    for m in (0..1u32 << s.len()).rev() {
        let g = simplify(&fix_atoms(f, &s, m));
        if g == Formula::True {
            return Ok(Formula::True);
        }
        if g != Formula::False && !disjuncts.contains(&g) {
            disjuncts.push(g);
        }
    }
    Ok(simplify(&Formula::disjoin(disjuncts)))
}

/// Closure of `worlds` under flipping the atoms of `s`, in state order.
pub fn forget_worlds(g: &GroundTheory, worlds: &[WorldState], s: &[GroundAtom]) -> Result<Vec<WorldState>> {
    check_size(s)?;
    let mask = g.mask_of(s)?;
    let mut out = BTreeSet::new();
    for w in worlds {
        let base = w.bits() & !mask;
        // enumerate the subsets of `mask`
        let mut sub = mask;
        loop {
            out.insert(WorldState::from_bits(base | sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
    }
    Ok(out.into_iter().collect())
}

/// `Forget(Σ, s)`: both initial formulas are grounded and forgotten, the
/// dynamics kept. A formula that mentions no atom of `s` is kept as is.
pub fn forget_theory(theory: &Theory, s: &[GroundAtom]) -> Result<Theory> {
    for a in s {
        theory.check_atom(a)?;
    }
    check_size(s)?;
    let forget = |f: &Formula| -> Result<Formula> {
        let g = ground(f, &theory.objects)?;
        if g.atoms().iter().any(|a| s.contains(a)) {
            forget_formula(&g, s)
        } else {
            Ok(f.clone())
        }
    };
    Ok(theory.with_initial(forget(&theory.init_true)?, forget(&theory.init_known)?))
}

/// Semantic `Forget(Σ, s)` on an engine: `W0` and `E` are closed under
/// flipping the atoms of `s`. The engine's theory keeps its original initial
/// formulas; the world sets are authoritative.
pub fn forget_engine(engine: &Engine, s: &[GroundAtom]) -> Result<Engine> {
    let g = engine.ground();
    let w0 = forget_worlds(g, engine.w0(), s)?;
    let e = forget_worlds(g, engine.e(), s)?;
    Ok(Engine::from_worlds(g.clone(), w0, e, engine.config().clone()))
}

/// Conjoin a closed static formula to both initial theories, semantically:
/// `W0` and `E` keep only its models.
pub fn restrict_engine(engine: &Engine, f: &Formula) -> Result<Engine> {
    let models: BTreeSet<WorldState> = models_of(engine.ground(), f)?.into_iter().collect();
    let keep = |ws: &[WorldState]| ws.iter().copied().filter(|w| models.contains(w)).collect::<Vec<_>>();
    Ok(Engine::from_worlds(engine.ground().clone(), keep(engine.w0()), keep(engine.e()), engine.config().clone()))
}
