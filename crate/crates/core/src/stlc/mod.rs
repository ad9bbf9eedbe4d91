//! Simply-typed lambda calculus over individuals (`e`), truth values (`t`)
//! and worlds (`s`), with conjunction, existential quantification and `⊤`
//! as first-class constructors.

mod equiv;
mod pretty;
pub mod reader;
mod reduce;

use std::collections::BTreeSet;
use std::fmt;

pub use equiv::{alpha_eq, equiv_mod_ac_alpha};
pub use pretty::{pretty, pretty_unicode, to_json};
pub use reduce::{
    beta_normalize, flatten_conjunctions, fresh_name, prenex, rename_world_binders, subst,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    E,
    T,
    S,
    Arrow(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arrow(from: Type, to: Type) -> Type {
        Type::Arrow(Box::new(from), Box::new(to))
    }

    /// Right-folds `a1 -> a2 -> ... -> result`.
    pub fn function(params: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let params: Vec<Type> = params.into_iter().collect();
        params
            .into_iter()
            .rev()
            .fold(result, |acc, p| Type::arrow(p, acc))
    }

    /// `s -> t`
    pub fn prop() -> Type {
        Type::arrow(Type::S, Type::T)
    }

    pub fn split_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Parameter types and final result of a curried function type.
    pub fn uncurry(&self) -> (Vec<&Type>, &Type) {
        let mut params = Vec::new();
        let mut ty = self;
        while let Type::Arrow(a, b) = ty {
            params.push(a.as_ref());
            ty = b;
        }
        (params, ty)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::E => f.write_str("e"),
            Type::T => f.write_str("t"),
            Type::S => f.write_str("s"),
            Type::Arrow(a, b) => {
                if matches!(**a, Type::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const {
        name: String,
        ty: Type,
    },
    Var {
        name: String,
        ty: Type,
    },
    Lam {
        var: String,
        ty: Type,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    And(Box<Term>, Box<Term>),
    /// Binds an individual.
    Exists {
        var: String,
        body: Box<Term>,
    },
    Top,
}

impl Term {
    pub fn constant(name: impl Into<String>, ty: Type) -> Term {
        Term::Const {
            name: name.into(),
            ty,
        }
    }

    pub fn var(name: impl Into<String>, ty: Type) -> Term {
        Term::Var {
            name: name.into(),
            ty,
        }
    }

    pub fn lam(var: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Lam {
            var: var.into(),
            ty,
            body: Box::new(body),
        }
    }

    pub fn app(self, arg: Term) -> Term {
        Term::App(Box::new(self), Box::new(arg))
    }

    pub fn apply(self, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(self, Term::app)
    }

    pub fn and(self, other: Term) -> Term {
        Term::And(Box::new(self), Box::new(other))
    }

    pub fn exists(var: impl Into<String>, body: Term) -> Term {
        Term::Exists {
            var: var.into(),
            body: Box::new(body),
        }
    }

    /// `exists x1 ... xn . body`, with `x1` outermost.
    pub fn exists_all<S: Into<String>>(vars: impl IntoIterator<Item = S>, body: Term) -> Term {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Term::exists(v, acc))
    }

    /// Right-nested conjunction; `⊤` for an empty list.
    pub fn conj(terms: impl IntoIterator<Item = Term>) -> Term {
        let terms: Vec<Term> = terms.into_iter().collect();
        terms
            .into_iter()
            .rev()
            .reduce(|acc, t| t.and(acc))
            .unwrap_or(Term::Top)
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Conjuncts of a (possibly nested) conjunction, left to right.
    pub fn conjuncts(&self) -> Vec<&Term> {
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            match t {
                Term::And(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                _ => out.push(t),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut |name, _| {
            out.insert(name.to_string());
        });
        out
    }

    /// Free variables with their annotated types, in left-to-right order of
    /// first occurrence.
    pub fn free_vars_ordered(&self) -> Vec<(String, Type)> {
        let mut out: Vec<(String, Type)> = Vec::new();
        self.collect_free(&mut Vec::new(), &mut |name, ty| {
            if !out.iter().any(|(n, _)| n == name) {
                out.push((name.to_string(), ty.clone()));
            }
        });
        out
    }

    pub fn has_free(&self, name: &str) -> bool {
        let mut found = false;
        self.collect_free(&mut Vec::new(), &mut |n, _| found |= n == name);
        found
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, f: &mut impl FnMut(&'a str, &'a Type)) {
        match self {
            Term::Var { name, ty } => {
                if !bound.contains(&name.as_str()) {
                    f(name, ty);
                }
            }
            Term::Const { .. } | Term::Top => {}
            Term::Lam { var, body, .. } | Term::Exists { var, body } => {
                bound.push(var);
                body.collect_free(bound, f);
                bound.pop();
            }
            Term::App(a, b) | Term::And(a, b) => {
                a.collect_free(bound, f);
                b.collect_free(bound, f);
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        fn go(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var { name, .. } => {
                    out.insert(name.clone());
                }
                Term::Const { .. } | Term::Top => {}
                Term::Lam { var, body, .. } | Term::Exists { var, body } => {
                    out.insert(var.clone());
                    go(body, out);
                }
                Term::App(a, b) | Term::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Constants with their types, in first-occurrence order.
    pub fn constants(&self) -> Vec<(String, Type)> {
        fn go(t: &Term, out: &mut Vec<(String, Type)>) {
            match t {
                Term::Const { name, ty } => {
                    if !out.iter().any(|(n, ty2)| n == name && ty2 == ty) {
                        out.push((name.clone(), ty.clone()));
                    }
                }
                Term::Var { .. } | Term::Top => {}
                Term::Lam { body, .. } | Term::Exists { body, .. } => go(body, out),
                Term::App(a, b) | Term::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Const { .. } | Term::Var { .. } | Term::Top => 1,
            Term::Lam { body, .. } | Term::Exists { body, .. } => 1 + body.size(),
            Term::App(a, b) | Term::And(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("type error in `{term}`: expected {expected}, found {actual}")]
pub struct TypeError {
    pub term: String,
    pub expected: String,
    pub actual: String,
}

impl TypeError {
    fn new(term: &Term, expected: impl fmt::Display, actual: impl fmt::Display) -> TypeError {
        TypeError {
            term: pretty(term),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}

/// The unique simple type of a term. Variable annotations must agree with
/// their binders.
pub fn type_of(term: &Term) -> Result<Type, TypeError> {
    fn go(t: &Term, env: &mut Vec<(String, Type)>) -> Result<Type, TypeError> {
        match t {
            Term::Const { ty, .. } => Ok(ty.clone()),
            Term::Var { name, ty } => {
                if let Some((_, bound)) = env.iter().rev().find(|(n, _)| n == name) {
                    if bound != ty {
                        return Err(TypeError::new(t, bound, ty));
                    }
                }
                Ok(ty.clone())
            }
            Term::Top => Ok(Type::T),
            Term::Lam { var, ty, body } => {
                env.push((var.clone(), ty.clone()));
                let body_ty = go(body, env);
                env.pop();
                Ok(Type::arrow(ty.clone(), body_ty?))
            }
            Term::Exists { var, body } => {
                env.push((var.clone(), Type::E));
                let body_ty = go(body, env);
                env.pop();
                let body_ty = body_ty?;
                if body_ty != Type::T {
                    return Err(TypeError::new(body, Type::T, body_ty));
                }
                Ok(Type::T)
            }
            Term::And(l, r) => {
                for side in [l, r] {
                    let ty = go(side, env)?;
                    if ty != Type::T {
                        return Err(TypeError::new(side, Type::T, ty));
                    }
                }
                Ok(Type::T)
            }
            Term::App(fun, arg) => {
                let fun_ty = go(fun, env)?;
                let arg_ty = go(arg, env)?;
                match fun_ty {
                    Type::Arrow(from, to) if *from == arg_ty => Ok(*to),
                    Type::Arrow(from, _) => Err(TypeError::new(arg, from, arg_ty)),
                    other => Err(TypeError::new(fun, format!("{arg_ty} -> _"), other)),
                }
            }
        }
    }
    go(term, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred() -> Type {
        Type::arrow(Type::E, Type::T)
    }

    #[test]
    fn single_application() {
        let t = Term::constant("boy", pred()).app(Term::var("b", Type::E));
        assert_eq!(type_of(&t), Ok(Type::T));
    }

    #[test]
    fn cont_has_its_relational_type() {
        let cont_ty = Type::function([Type::E, Type::prop()], Type::prop());
        let t = Term::constant("cont", cont_ty).app(Term::var("b", Type::E));
        assert_eq!(
            type_of(&t).unwrap(),
            Type::arrow(Type::prop(), Type::prop())
        );
        assert_eq!(type_of(&t).unwrap().to_string(), "(s -> t) -> s -> t");
    }

    #[test]
    fn arrow_mismatch() {
        let boy = Term::constant("boy", pred());
        let err = type_of(&boy.clone().app(boy)).unwrap_err();
        assert_eq!(err.expected, "e");
        assert_eq!(err.actual, "e -> t");
    }

    #[test]
    fn and_needs_truth_values() {
        let t = Term::var("x", Type::E).and(Term::Top);
        assert!(type_of(&t).is_err());
    }

    #[test]
    fn binder_annotation_mismatch() {
        let t = Term::lam(
            "x",
            Type::S,
            Term::constant("P", pred()).app(Term::var("x", Type::E)),
        );
        assert!(type_of(&t).is_err());
    }

    #[test]
    fn arrows_print_right_associated() {
        let ty = Type::function([Type::E, Type::E], Type::T);
        assert_eq!(ty.to_string(), "e -> e -> t");
        let gq = Type::function([pred(), pred()], Type::T);
        assert_eq!(gq.to_string(), "(e -> t) -> (e -> t) -> t");
    }

    #[test]
    fn free_variable_order() {
        let r = Type::function([Type::E, Type::E], Type::T);
        let t = Term::constant("R", r)
            .apply([Term::var("b", Type::E), Term::var("a", Type::E)])
            .and(Term::exists(
                "b",
                Term::constant("P", pred()).app(Term::var("b", Type::E)),
            ));
        let names: Vec<String> = t.free_vars_ordered().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["b", "a"]);
    }
}
