use std::collections::BTreeSet;

use super::{binder_order, check_valid, compose, fresh_world, tidy, Regime, TranslateError};
use crate::amr::{free_at_level, AmrNode};
use crate::stlc::{beta_normalize, fresh_name, type_of, Term, Type, TypeError};

pub(crate) fn and_w_raw(a: Term, b: Term) -> Term {
    let w = fresh_world(&[&a, &b]);
    let wv = Term::var(w.clone(), Type::S);
    Term::lam(w, Type::S, a.app(wv.clone()).and(b.app(wv)))
}

pub(crate) fn exists_w_raw(x: &str, body: Term) -> Term {
    let w = fresh_name("w", |n| n == x || body.has_free(n));
    Term::lam(
        w.clone(),
        Type::S,
        Term::exists(x, body.app(Term::var(w, Type::S))),
    )
}

fn expect_prop(t: &Term) -> Result<(), TypeError> {
    let ty = type_of(t)?;
    if ty == Type::prop() {
        Ok(())
    } else {
        Err(TypeError {
            term: crate::stlc::pretty(t),
            expected: Type::prop().to_string(),
            actual: ty.to_string(),
        })
    }
}

/// `φ ∧_w ψ = \w . φ(w) & ψ(w)`, normalized.
pub fn and_w(a: &Term, b: &Term) -> Result<Term, TypeError> {
    expect_prop(a)?;
    expect_prop(b)?;
    Ok(beta_normalize(&and_w_raw(a.clone(), b.clone())))
}

/// `∃_w x(φ) = \w . exists x . φ(w)`, normalized.
pub fn exists_w(x: &str, body: &Term) -> Result<Term, TypeError> {
    expect_prop(body)?;
    Ok(beta_normalize(&exists_w_raw(x, body.clone())))
}

/// World-lifted `close`: `exists_w` over `vars` in first-occurrence order.
pub fn close_int(term: &Term, vars: &BTreeSet<String>) -> Result<Term, TranslateError> {
    let order = binder_order(term, vars)?;
    let closed = order
        .iter()
        .rev()
        .fold(term.clone(), |acc, x| exists_w_raw(x, acc));
    Ok(tidy(&closed))
}

/// Intensional translation: predicates of type `e -> s -> t`, roles of
/// type `e -> e -> s -> t`, and `:content A` as
/// `\x . cont(x)(close(A))`. Rejects `:quant` and scope nodes.
pub fn translate_int(graph: &AmrNode) -> Result<Term, TranslateError> {
    check_valid(graph)?;
    Ok(tidy(&compose(Regime::Intensional, graph)?))
}

/// `close_int(translate_int(g))`, checked closed.
pub fn translate_int_closed(graph: &AmrNode) -> Result<Term, TranslateError> {
    let closed = close_int(&translate_int(graph)?, &free_at_level(graph))?;
    match closed.free_vars().into_iter().next() {
        Some(var) => Err(TranslateError::ContentEscape { var }),
        None => Ok(closed),
    }
}
