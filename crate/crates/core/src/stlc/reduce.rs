use std::collections::BTreeSet;

use super::{Term, Type};

/// Smallest name `stem`, `stem2`, `stem3`, ... rejected by `taken`.
/// Trailing digits of `base` are dropped first.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let trimmed = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if trimmed.is_empty() { base } else { trimmed };
    if !taken(stem) {
        return stem.to_string();
    }
    (2..)
        .map(|n| format!("{stem}{n}"))
        .find(|cand| !taken(cand))
        .expect("unbounded suffix search")
}

/// Capture-avoiding `term[var := value]`.
pub fn subst(term: &Term, var: &str, value: &Term) -> Term {
    let fv = value.free_vars();
    subst_with(term, var, value, &fv)
}

fn subst_with(term: &Term, var: &str, value: &Term, fv: &BTreeSet<String>) -> Term {
    match term {
        Term::Var { name, .. } if name == var => value.clone(),
        Term::Var { .. } | Term::Const { .. } | Term::Top => term.clone(),
        Term::App(f, a) => Term::App(
            Box::new(subst_with(f, var, value, fv)),
            Box::new(subst_with(a, var, value, fv)),
        ),
        Term::And(l, r) => Term::And(
            Box::new(subst_with(l, var, value, fv)),
            Box::new(subst_with(r, var, value, fv)),
        ),
        Term::Lam {
            var: bound,
            ty,
            body,
        } => {
            let (bound, body) = under_binder(bound, ty, body, var, value, fv);
            Term::Lam {
                var: bound,
                ty: ty.clone(),
                body: Box::new(body),
            }
        }
        Term::Exists { var: bound, body } => {
            let (bound, body) = under_binder(bound, &Type::E, body, var, value, fv);
            Term::Exists {
                var: bound,
                body: Box::new(body),
            }
        }
    }
}

fn under_binder(
    bound: &str,
    ty: &Type,
    body: &Term,
    var: &str,
    value: &Term,
    fv: &BTreeSet<String>,
) -> (String, Term) {
    if bound == var || !body.has_free(var) {
        return (bound.to_string(), body.clone());
    }
    if !fv.contains(bound) {
        return (bound.to_string(), subst_with(body, var, value, fv));
    }
    let body_names = body.all_names();
    let renamed = fresh_name(bound, |n| {
        fv.contains(n) || body_names.contains(n) || n == var
    });
    let body = subst(body, bound, &Term::var(renamed.clone(), ty.clone()));
    let body = subst_with(&body, var, value, fv);
    (renamed, body)
}

/// Full normal-order beta reduction, with `φ & true` and `true & φ`
/// collapsed to `φ`.
pub fn beta_normalize(term: &Term) -> Term {
    match term {
        Term::App(f, a) => match beta_normalize(f) {
            Term::Lam { var, body, .. } => beta_normalize(&subst(&body, &var, a)),
            head => Term::App(Box::new(head), Box::new(beta_normalize(a))),
        },
        Term::Lam { var, ty, body } => Term::Lam {
            var: var.clone(),
            ty: ty.clone(),
            body: Box::new(beta_normalize(body)),
        },
        Term::Exists { var, body } => Term::Exists {
            var: var.clone(),
            body: Box::new(beta_normalize(body)),
        },
        Term::And(l, r) => match (beta_normalize(l), beta_normalize(r)) {
            (Term::Top, other) | (other, Term::Top) => other,
            (l, r) => Term::And(Box::new(l), Box::new(r)),
        },
        Term::Var { .. } | Term::Const { .. } | Term::Top => term.clone(),
    }
}

/// Re-associates every conjunction chain to the right, keeping conjunct order.
pub fn flatten_conjunctions(term: &Term) -> Term {
    match term {
        Term::And(..) => Term::conj(term.conjuncts().into_iter().map(flatten_conjunctions)),
        Term::App(f, a) => Term::App(
            Box::new(flatten_conjunctions(f)),
            Box::new(flatten_conjunctions(a)),
        ),
        Term::Lam { var, ty, body } => Term::Lam {
            var: var.clone(),
            ty: ty.clone(),
            body: Box::new(flatten_conjunctions(body)),
        },
        Term::Exists { var, body } => Term::Exists {
            var: var.clone(),
            body: Box::new(flatten_conjunctions(body)),
        },
        Term::Var { .. } | Term::Const { .. } | Term::Top => term.clone(),
    }
}

fn peel_exists(term: Term) -> (Vec<String>, Term) {
    let mut vars = Vec::new();
    let mut t = term;
    while let Term::Exists { var, body } = t {
        vars.push(var);
        t = *body;
    }
    (vars, t)
}

/// Pulls existentials out of conjunctions: `φ & exists x . ψ` becomes
/// `exists x . φ & ψ`, renaming `x` when it would capture.
pub fn prenex(term: &Term) -> Term {
    match term {
        Term::And(l, r) => {
            let (xs, mut l) = peel_exists(prenex(l));
            let (ys, mut r) = peel_exists(prenex(r));
            let mut binders: Vec<String> = Vec::new();
            let mut avoid: BTreeSet<String> = l.all_names();
            avoid.extend(r.all_names());
            avoid.extend(xs.iter().cloned());
            avoid.extend(ys.iter().cloned());
            for x in xs {
                if (r.has_free(&x) && !ys.contains(&x)) || binders.contains(&x) {
                    let fresh = fresh_name(&x, |n| avoid.contains(n));
                    avoid.insert(fresh.clone());
                    l = subst(&l, &x, &Term::var(fresh.clone(), Type::E));
                    binders.push(fresh);
                } else {
                    binders.push(x);
                }
            }
            for y in ys {
                if l.has_free(&y) || binders.contains(&y) {
                    let fresh = fresh_name(&y, |n| avoid.contains(n));
                    avoid.insert(fresh.clone());
                    r = subst(&r, &y, &Term::var(fresh.clone(), Type::E));
                    binders.push(fresh);
                } else {
                    binders.push(y);
                }
            }
            Term::exists_all(binders, l.and(r))
        }
        Term::Exists { var, body } => Term::Exists {
            var: var.clone(),
            body: Box::new(prenex(body)),
        },
        Term::Lam { var, ty, body } => Term::Lam {
            var: var.clone(),
            ty: ty.clone(),
            body: Box::new(prenex(body)),
        },
        Term::App(f, a) => Term::App(Box::new(prenex(f)), Box::new(prenex(a))),
        Term::Var { .. } | Term::Const { .. } | Term::Top => term.clone(),
    }
}

pub(crate) fn world_var_name(depth: usize) -> String {
    if depth <= 1 {
        "w".to_string()
    } else {
        format!("w{depth}")
    }
}

/// Renames world binders by nesting depth: `w`, `w2`, `w3`, ...
pub fn rename_world_binders(term: &Term) -> Term {
    fn go(t: &Term, depth: usize) -> Term {
        match t {
            Term::Lam { var, ty, body } if *ty == Type::S => {
                let target = world_var_name(depth + 1);
                let (var, body) = if *var != target && !body.has_free(&target) {
                    let body = subst(body, var, &Term::var(target.clone(), Type::S));
                    (target, body)
                } else {
                    (var.clone(), (**body).clone())
                };
                Term::Lam {
                    var,
                    ty: ty.clone(),
                    body: Box::new(go(&body, depth + 1)),
                }
            }
            Term::Lam { var, ty, body } => Term::Lam {
                var: var.clone(),
                ty: ty.clone(),
                body: Box::new(go(body, depth)),
            },
            Term::Exists { var, body } => Term::Exists {
                var: var.clone(),
                body: Box::new(go(body, depth)),
            },
            Term::App(f, a) => Term::App(Box::new(go(f, depth)), Box::new(go(a, depth))),
            Term::And(l, r) => Term::And(Box::new(go(l, depth)), Box::new(go(r, depth))),
            Term::Var { .. } | Term::Const { .. } | Term::Top => t.clone(),
        }
    }
    go(term, 0)
}
