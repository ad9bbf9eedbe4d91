//! Per-seed property checks, run under proptest by `properties` and as a
//! fixed seed sweep by `acceptance`.

use std::collections::BTreeSet;

use amr_intens::amr::{free, free_at_level};
use amr_intens::evaluator::{
    entails, entails_exhaustive, enumerate_models, eval, EnumerationBound, Signature, Verdict,
};
use amr_intens::penman::{normalize_inverse_roles, parse, print, print_compact, NormalizeError};
use amr_intens::scope::{derive_reading, translate_scoped_traced, DeterminerTable};
use amr_intens::stlc::{
    alpha_eq, beta_normalize, equiv_mod_ac_alpha, flatten_conjunctions, pretty, type_of, Term, Type,
};
use amr_intens::translate::{
    and_w, exists_w, translate_ext, translate_ext_closed, translate_int, translate_int_closed,
    Regime,
};

use super::GraphShape;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn eq<T: PartialEq + std::fmt::Debug>(left: T, right: T, what: &str) -> Check {
    ensure!(left == right, "{what}: {left:?} != {right:?}");
    Ok(())
}

pub fn penman_round_trip(seed: u64) -> Check {
    let g = super::graph(seed, GraphShape::intensional());
    eq(
        parse(&print(&g)).map_err(|e| e.to_string())?,
        g.clone(),
        "print",
    )?;
    eq(
        parse(&print_compact(&g)).map_err(|e| e.to_string())?,
        g,
        "print_compact",
    )
}

/// A graph whose root carries an inverse role cannot be normalized in place;
/// those are skipped.
pub fn inverse_normalization_idempotent(seed: u64) -> Check {
    let g = super::graph(seed, GraphShape::extensional());
    let once = match normalize_inverse_roles(&g) {
        Ok(once) => once,
        Err(NormalizeError::Orphan { .. }) => return Ok(()),
        Err(e) => return Err(format!("{e}: {}", print(&g))),
    };
    let twice = normalize_inverse_roles(&once).map_err(|e| e.to_string())?;
    eq(&twice, &once, "second normalization")?;
    eq(
        parse(&print(&once)).map_err(|e| e.to_string())?,
        once,
        "round trip",
    )
}

pub fn subject_reduction(seed: u64) -> Check {
    let (t, ty) = super::term(seed);
    let typed = |t: &Term| type_of(t).map_err(|e| format!("{e}: {}", pretty(t)));
    eq(typed(&t)?, ty.clone(), "generated")?;
    let n = beta_normalize(&t);
    eq(typed(&n)?, ty.clone(), "beta normal form")?;
    eq(typed(&flatten_conjunctions(&n))?, ty, "flattened")
}

pub fn normalization_idempotent(seed: u64) -> Check {
    let (t, _) = super::term(seed);
    let n = beta_normalize(&t);
    ensure!(alpha_eq(&beta_normalize(&n), &n), "beta: {}", pretty(&n));
    let f = flatten_conjunctions(&n);
    ensure!(
        alpha_eq(&flatten_conjunctions(&f), &f),
        "flatten: {}",
        pretty(&f)
    );
    Ok(())
}

pub fn equivalences_are_reflexive_and_symmetric(a: u64, b: u64) -> Check {
    let (s, _) = super::term(a);
    let (t, _) = super::term(b);
    ensure!(
        alpha_eq(&s, &s) && equiv_mod_ac_alpha(&s, &s),
        "reflexivity: {}",
        pretty(&s)
    );
    eq(alpha_eq(&s, &t), alpha_eq(&t, &s), "alpha symmetry")?;
    eq(
        equiv_mod_ac_alpha(&s, &t),
        equiv_mod_ac_alpha(&t, &s),
        "ac symmetry",
    )?;
    ensure!(
        !alpha_eq(&s, &t) || equiv_mod_ac_alpha(&s, &t),
        "alpha without ac"
    );
    Ok(())
}

pub fn extensional_translations_are_propositions(seed: u64) -> Check {
    let g = super::graph(seed, GraphShape::extensional());
    let open = translate_ext(&g).map_err(|e| e.to_string())?;
    eq(
        type_of(&open).map_err(|e| e.to_string())?,
        Type::T,
        "open type",
    )?;
    eq(open.free_vars(), free(&g), "free variables")?;
    let closed = translate_ext_closed(&g).map_err(|e| e.to_string())?;
    eq(
        type_of(&closed).map_err(|e| e.to_string())?,
        Type::T,
        "closed type",
    )?;
    ensure!(closed.is_closed(), "not closed: {}", pretty(&closed));
    Ok(())
}

pub fn intensional_translations_are_world_propositions(seed: u64) -> Check {
    let g = super::graph(seed, GraphShape::intensional());
    let open = translate_int(&g).map_err(|e| e.to_string())?;
    eq(
        type_of(&open).map_err(|e| e.to_string())?,
        Type::prop(),
        "open type",
    )?;
    eq(open.free_vars(), free_at_level(&g), "free variables")?;
    let closed = translate_int_closed(&g).map_err(|e| e.to_string())?;
    eq(
        type_of(&closed).map_err(|e| e.to_string())?,
        Type::prop(),
        "closed type",
    )?;
    ensure!(closed.is_closed(), "not closed: {}", pretty(&closed));
    Ok(())
}

pub fn free_invariants(seed: u64) -> Check {
    let g = super::graph(seed, GraphShape::intensional());
    let declared: BTreeSet<String> = g.declared_vars().into_iter().map(str::to_string).collect();
    eq(free(&g), declared, "free")?;
    ensure!(
        free_at_level(&g).is_subset(&free(&g)),
        "free_at_level not within free"
    );
    ensure!(
        free_at_level(&g).contains(g.variable().unwrap()),
        "root missing"
    );
    Ok(())
}

pub fn storage_agrees_without_quantifiers(seed: u64) -> Check {
    let table = DeterminerTable::standard();
    for (shape, regime) in [
        (GraphShape::extensional(), Regime::Extensional),
        (GraphShape::intensional(), Regime::Intensional),
    ] {
        let g = super::graph(seed, shape);
        let scoped = derive_reading(&g, regime, &table).map_err(|e| e.to_string())?;
        let plain = match regime {
            Regime::Extensional => translate_ext_closed(&g),
            Regime::Intensional => translate_int_closed(&g),
        }
        .map_err(|e| e.to_string())?;
        ensure!(
            equiv_mod_ac_alpha(&scoped, &plain),
            "{} vs {}",
            pretty(&scoped),
            pretty(&plain)
        );
    }
    Ok(())
}

pub fn events_take_narrow_scope(seed: u64, intensional: bool) -> Check {
    let table = DeterminerTable::standard();
    let regime = if intensional {
        Regime::Intensional
    } else {
        Regime::Extensional
    };
    let g = super::scope_graph(seed, intensional);
    let (_, trace) =
        translate_scoped_traced(&g, regime, &table).map_err(|e| format!("{e}: {}", print(&g)))?;
    ensure!(!trace.is_empty(), "no scope node evaluated");
    for record in &trace {
        ensure!(
            record.events_take_narrow_scope(),
            "{}",
            pretty(&record.ordinary)
        );
    }
    let reading = derive_reading(&g, regime, &table).map_err(|e| format!("{e}: {}", print(&g)))?;
    ensure!(reading.is_closed(), "not closed: {}", pretty(&reading));
    eq(
        type_of(&reading).map_err(|e| e.to_string())?,
        regime.prop_type(),
        "reading type",
    )
}

/// `P(x)` becomes `P(x)(w)`, and likewise for `R`.
fn lift(t: &Term, w: &Term) -> Term {
    match t {
        Term::And(a, b) => lift(a, w).and(lift(b, w)),
        Term::Exists { var, body } => Term::exists(var.clone(), lift(body, w)),
        Term::Top => Term::Top,
        _ => {
            let (head, args) = t.spine();
            let Term::Const { name, ty } = head else {
                return t.clone();
            };
            let (params, _) = ty.uncurry();
            let lifted = Term::constant(
                name.clone(),
                Type::function(params.into_iter().cloned(), Type::prop()),
            );
            lifted.apply(args.into_iter().cloned()).app(w.clone())
        }
    }
}

pub fn intensional(t: &Term) -> Term {
    let w = Term::var("w", Type::S);
    Term::lam("w", Type::S, lift(t, &w))
}

pub fn small_bounds() -> Vec<EnumerationBound> {
    let mut out = Vec::new();
    for w in 1..=2 {
        for i in 1..=2 {
            out.push(EnumerationBound::new(w, i));
        }
    }
    out
}

/// Same truth value at every world of every model with 1–2 worlds and 1–2
/// individuals.
pub fn agree_everywhere(a: &Term, b: &Term) -> bool {
    let table = DeterminerTable::standard();
    let sig = Signature::of_terms(&[a, b], &table).unwrap();
    for bound in small_bounds() {
        for model in enumerate_models(&sig, &bound).unwrap() {
            for w in 0..bound.worlds {
                if eval(&model, w, a).unwrap() != eval(&model, w, b).unwrap() {
                    return false;
                }
            }
        }
    }
    true
}

/// Mutual entailment at every size up to 2 worlds and 3 individuals. Any
/// world can serve as the actual one, so checking `w0` covers them all.
pub fn equivalent_within(a: &Term, b: &Term) -> bool {
    let table = DeterminerTable::standard();
    let bound = EnumerationBound::new(2, 3);
    entails(a, b, &bound, 0, &table).unwrap().is_entailed()
        && entails(b, a, &bound, 0, &table).unwrap().is_entailed()
}

/// `∃z(ψ ∧ ∃x φ)` against `∃z∃x(ψ ∧ φ)`, extensional and world-lifted.
pub fn deferred_pairs(seed: u64) -> [(Term, Term); 2] {
    let mut rng = super::rng(seed);
    let psi = super::formula(&mut rng, &["z"], 2);
    let phi = super::formula(&mut rng, &["z", "x"], 2);
    let early = Term::exists("z", psi.clone().and(Term::exists("x", phi.clone())));
    let late = Term::exists("z", Term::exists("x", psi.clone().and(phi.clone())));
    let (psi, phi) = (intensional(&psi), intensional(&phi));
    let early_w = exists_w("z", &and_w(&psi, &exists_w("x", &phi).unwrap()).unwrap()).unwrap();
    let late_w = exists_w("z", &exists_w("x", &and_w(&psi, &phi).unwrap()).unwrap()).unwrap();
    [(early, late), (early_w, late_w)]
}

pub fn deferred_binding_on_enumerated_models(seed: u64) -> Check {
    for (early, late) in deferred_pairs(seed) {
        ensure!(
            agree_everywhere(&early, &late),
            "{} vs {}",
            pretty(&early),
            pretty(&late)
        );
    }
    Ok(())
}

pub fn deferred_binding_within_bound(seed: u64) -> Check {
    for (early, late) in deferred_pairs(seed) {
        ensure!(
            equivalent_within(&early, &late),
            "{} vs {}",
            pretty(&early),
            pretty(&late)
        );
    }
    Ok(())
}

/// The SAT-backed `entails` agrees with brute force, its counterexamples are
/// genuine, and mutual entailment coincides with agreement on every model.
pub fn solver_matches_enumeration(seed: u64, lifted: bool) -> Check {
    let table = DeterminerTable::standard();
    let mut rng = super::rng(seed);
    let mut pick = || {
        let f = Term::exists("z", super::formula(&mut rng, &["z"], 3));
        if lifted {
            intensional(&f)
        } else {
            f
        }
    };
    let (p, c) = (pick(), pick());
    let bound = EnumerationBound::new(2, 2);
    let forward = entails(&p, &c, &bound, 0, &table).map_err(|e| e.to_string())?;
    let brute = entails_exhaustive(&p, &c, &bound, 0, &table).map_err(|e| e.to_string())?;
    eq(&forward, &brute, "solver against enumeration")?;
    if let Verdict::Counterexample { model, actual } = &forward {
        ensure!(
            eval(model, *actual, &p).unwrap(),
            "premise fails on counterexample"
        );
        ensure!(
            !eval(model, *actual, &c).unwrap(),
            "conclusion holds on counterexample"
        );
    }
    let backward = entails(&c, &p, &bound, 0, &table).map_err(|e| e.to_string())?;
    let sig = Signature::of_terms(&[&p, &c], &table).unwrap();
    let equivalent = small_bounds().into_iter().all(|b| {
        enumerate_models(&sig, &b)
            .unwrap()
            .all(|m| eval(&m, 0, &p).unwrap() == eval(&m, 0, &c).unwrap())
    });
    eq(
        forward.is_entailed() && backward.is_entailed(),
        equivalent,
        "mutual entailment",
    )
}
