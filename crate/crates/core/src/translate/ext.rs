use std::collections::BTreeSet;

use super::{binder_order, check_valid, compose, tidy, Regime, TranslateError};
use crate::amr::{free, AmrNode};
use crate::stlc::Term;

/// First-order translation of a basic AMR. `:content`, `:quant` and scope
/// nodes are rejected.
pub fn translate_ext(graph: &AmrNode) -> Result<Term, TranslateError> {
    check_valid(graph)?;
    Ok(tidy(&compose(Regime::Extensional, graph)?))
}

/// `exists x1 ... xn . term` over `vars`, binders in order of first
/// occurrence. Every variable must occur free in `term`.
pub fn close_v1(term: &Term, vars: &BTreeSet<String>) -> Result<Term, TranslateError> {
    Ok(Term::exists_all(binder_order(term, vars)?, term.clone()))
}

pub fn translate_ext_closed(graph: &AmrNode) -> Result<Term, TranslateError> {
    close_v1(&translate_ext(graph)?, &free(graph))
}
