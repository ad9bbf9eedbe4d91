//! Finite intensional models and a bounded model checker.
//!
//! Predicates and roles are interpreted per world, so extensional terms are
//! read at a designated world. `cont(x)(p)(w)` holds iff `p` holds at every
//! world in the content set of `x` at `w`. Events are ordinary individuals.

mod entail;
mod enumerate;
mod model;

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

pub use entail::{entails, entails_exhaustive, Verdict};
pub use enumerate::{enumerate_models, model_count, EnumerationBound, ModelStream};
pub use model::{Model, ModelError};

use crate::scope::{DeterminerKind, DeterminerTable};
use crate::stlc::{type_of, Term, Type, TypeError};
use crate::translate::Regime;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown constant {name} : {ty}")]
    UnknownConstant { name: String, ty: String },
    #[error("term has free variables: {}", vars.join(", "))]
    NotClosed { vars: Vec<String> },
    #[error("cannot evaluate a term of type {ty}; expected t or s -> t")]
    BadType { ty: String },
    #[error("premise has type {premise} but conclusion has type {conclusion}")]
    TypeMismatch { premise: String, conclusion: String },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("world {world} out of range for {worlds} worlds")]
    WorldOutOfRange { world: usize, worlds: usize },
    #[error("bounds must be at least 1")]
    ZeroBound,
    #[error("{count} models exceed the enumeration cap of {cap}")]
    BoundTooLarge { count: String, cap: u128 },
    #[error("solver failure: {0}")]
    Solver(String),
}

/// How a constant is interpreted, decided by its type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ConstKind {
    Individual,
    Predicate {
        intensional: bool,
    },
    Role {
        intensional: bool,
    },
    Content,
    Determiner {
        kind: DeterminerKind,
        intensional: bool,
    },
}

pub(crate) fn classify(name: &str, ty: &Type, table: &DeterminerTable) -> Option<ConstKind> {
    let e_t = |r: Regime| Type::arrow(Type::E, r.prop_type());
    for (regime, intensional) in [(Regime::Extensional, false), (Regime::Intensional, true)] {
        if *ty == e_t(regime) {
            return Some(ConstKind::Predicate { intensional });
        }
        if *ty == regime.role_type() {
            return Some(ConstKind::Role { intensional });
        }
        if *ty == regime.determiner_type() {
            return table
                .kind_of(name)
                .map(|kind| ConstKind::Determiner { kind, intensional });
        }
    }
    if *ty == Type::E {
        return Some(ConstKind::Individual);
    }
    if name == "cont" && *ty == crate::translate::cont_type() {
        return Some(ConstKind::Content);
    }
    None
}

/// The non-logical symbols a set of formulas needs interpreted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub predicates: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub content: bool,
    pub constants: BTreeSet<String>,
    pub determiners: BTreeMap<String, DeterminerKind>,
}

impl Signature {
    pub fn of_terms(terms: &[&Term], table: &DeterminerTable) -> Result<Signature, EvalError> {
        let mut sig = Signature::default();
        for term in terms {
            for (name, ty) in term.constants() {
                match classify(&name, &ty, table) {
                    Some(ConstKind::Individual) => {
                        sig.constants.insert(name);
                    }
                    Some(ConstKind::Predicate { .. }) => {
                        sig.predicates.insert(name);
                    }
                    Some(ConstKind::Role { .. }) => {
                        sig.roles.insert(name);
                    }
                    Some(ConstKind::Content) => sig.content = true,
                    Some(ConstKind::Determiner { kind, .. }) => {
                        sig.determiners.insert(name, kind);
                    }
                    None => {
                        return Err(EvalError::UnknownConstant {
                            name,
                            ty: ty.to_string(),
                        })
                    }
                }
            }
        }
        Ok(sig)
    }

    /// Independent yes/no choices in a model of the given size.
    pub fn bit_count(&self, worlds: usize, individuals: usize) -> usize {
        let (w, i) = (worlds, individuals);
        self.predicates.len() * w * i
            + self.roles.len() * w * i * i
            + if self.content { i * w * w } else { 0 }
    }
}

/// Truth values the evaluator computes with: plain booleans for concrete
/// models, propositional formulas when grounding for the solver.
pub(crate) trait Truth: Clone {
    fn constant(value: bool) -> Self;
    fn and(&self, other: &Self) -> Self;
    fn or(&self, other: &Self) -> Self;
    fn not(&self) -> Self;
}

impl Truth for bool {
    fn constant(value: bool) -> bool {
        value
    }
    fn and(&self, other: &bool) -> bool {
        *self && *other
    }
    fn or(&self, other: &bool) -> bool {
        *self || *other
    }
    fn not(&self) -> bool {
        !*self
    }
}

/// Atomic facts of a model, possibly symbolic.
pub(crate) trait Interp {
    type B: Truth;
    fn worlds(&self) -> usize;
    fn individuals(&self) -> usize;
    fn predicate(&self, name: &str, world: usize, x: usize) -> Self::B;
    fn role(&self, name: &str, world: usize, x: usize, y: usize) -> Self::B;
    fn content(&self, x: usize, world: usize, target: usize) -> Self::B;
    fn constant(&self, name: &str) -> Option<usize>;
}

type Fun<'a, B> = Rc<dyn Fn(Val<'a, B>) -> Result<Val<'a, B>, EvalError> + 'a>;

#[derive(Clone)]
enum Val<'a, B> {
    Ind(usize),
    World(usize),
    Truth(B),
    Fun(Fun<'a, B>),
}

fn shape_error() -> EvalError {
    EvalError::BadType {
        ty: "ill-shaped value".into(),
    }
}

impl<'a, B: Truth> Val<'a, B> {
    fn truth(self) -> Result<B, EvalError> {
        match self {
            Val::Truth(b) => Ok(b),
            _ => Err(shape_error()),
        }
    }
    fn ind(self) -> Result<usize, EvalError> {
        match self {
            Val::Ind(i) => Ok(i),
            _ => Err(shape_error()),
        }
    }
    fn world(self) -> Result<usize, EvalError> {
        match self {
            Val::World(w) => Ok(w),
            _ => Err(shape_error()),
        }
    }
    fn apply(&self, arg: Val<'a, B>) -> Result<Val<'a, B>, EvalError> {
        match self {
            Val::Fun(f) => f(arg),
            _ => Err(shape_error()),
        }
    }
    fn fun(f: impl Fn(Val<'a, B>) -> Result<Val<'a, B>, EvalError> + 'a) -> Val<'a, B> {
        Val::Fun(Rc::new(f))
    }
}

struct Env<'a, B> {
    name: &'a str,
    value: Val<'a, B>,
    next: Option<Rc<Env<'a, B>>>,
}

type Scope<'a, B> = Option<Rc<Env<'a, B>>>;

fn all<B: Truth>(items: impl IntoIterator<Item = B>) -> B {
    items
        .into_iter()
        .fold(B::constant(true), |acc, b| acc.and(&b))
}

fn any<B: Truth>(items: impl IntoIterator<Item = B>) -> B {
    items
        .into_iter()
        .fold(B::constant(false), |acc, b| acc.or(&b))
}

fn at_least<B: Truth>(n: u32, items: Vec<B>) -> B {
    let n = n as usize;
    let mut counts = vec![B::constant(false); n + 1];
    counts[0] = B::constant(true);
    for item in &items {
        for k in (1..=n).rev() {
            counts[k] = counts[k].or(&counts[k - 1].and(item));
        }
    }
    counts.pop().unwrap_or_else(|| B::constant(true))
}

fn quantify<B: Truth>(kind: DeterminerKind, restrictor: Vec<B>, nucleus: Vec<B>) -> B {
    let pairs = restrictor.into_iter().zip(nucleus);
    match kind {
        DeterminerKind::Universal => all(pairs.map(|(p, q)| p.not().or(&q))),
        DeterminerKind::Existential => any(pairs.map(|(p, q)| p.and(&q))),
        DeterminerKind::AtLeast(n) => at_least(n, pairs.map(|(p, q)| p.and(&q)).collect()),
    }
}

struct Evaluator<'a, I: Interp> {
    interp: &'a I,
    table: &'a DeterminerTable,
    world: usize,
}

impl<'a, I: Interp> Evaluator<'a, I> {
    fn eval(&'a self, t: &'a Term, env: &Scope<'a, I::B>) -> Result<Val<'a, I::B>, EvalError> {
        match t {
            Term::Top => Ok(Val::Truth(I::B::constant(true))),
            Term::Var { name, .. } => {
                let mut cur = env.as_ref();
                while let Some(frame) = cur {
                    if frame.name == name {
                        return Ok(frame.value.clone());
                    }
                    cur = frame.next.as_ref();
                }
                Err(EvalError::NotClosed {
                    vars: vec![name.clone()],
                })
            }
            Term::Const { name, ty } => self.constant(name, ty),
            Term::Lam { var, body, .. } => {
                let env = env.clone();
                Ok(Val::fun(move |value| {
                    let frame = Some(Rc::new(Env {
                        name: var.as_str(),
                        value,
                        next: env.clone(),
                    }));
                    self.eval(body, &frame)
                }))
            }
            Term::App(f, a) => {
                let f = self.eval(f, env)?;
                f.apply(self.eval(a, env)?)
            }
            Term::And(l, r) => {
                let l = self.eval(l, env)?.truth()?;
                let r = self.eval(r, env)?.truth()?;
                Ok(Val::Truth(l.and(&r)))
            }
            Term::Exists { var, body } => {
                let mut cases = Vec::new();
                for x in 0..self.interp.individuals() {
                    let frame = Some(Rc::new(Env {
                        name: var.as_str(),
                        value: Val::Ind(x),
                        next: env.clone(),
                    }));
                    cases.push(self.eval(body, &frame)?.truth()?);
                }
                Ok(Val::Truth(any(cases)))
            }
        }
    }

    fn constant(&'a self, name: &'a str, ty: &Type) -> Result<Val<'a, I::B>, EvalError> {
        let unknown = || EvalError::UnknownConstant {
            name: name.to_string(),
            ty: ty.to_string(),
        };
        let m = self.interp;
        let here = self.world;
        let value = match classify(name, ty, self.table).ok_or_else(unknown)? {
            ConstKind::Individual => Val::Ind(m.constant(name).ok_or_else(unknown)?),
            ConstKind::Predicate { intensional: false } => {
                Val::fun(move |x| Ok(Val::Truth(m.predicate(name, here, x.ind()?))))
            }
            ConstKind::Predicate { intensional: true } => Val::fun(move |x| {
                let x = x.ind()?;
                Ok(Val::fun(move |w| {
                    Ok(Val::Truth(m.predicate(name, w.world()?, x)))
                }))
            }),
            ConstKind::Role { intensional } => Val::fun(move |x| {
                let x = x.ind()?;
                Ok(Val::fun(move |y| {
                    let y = y.ind()?;
                    Ok(if intensional {
                        Val::fun(move |w| Ok(Val::Truth(m.role(name, w.world()?, x, y))))
                    } else {
                        Val::Truth(m.role(name, here, x, y))
                    })
                }))
            }),
            ConstKind::Content => Val::fun(move |x| {
                let x = x.ind()?;
                Ok(Val::fun(move |p| {
                    Ok(Val::fun(move |w| {
                        let w = w.world()?;
                        let mut cases = Vec::new();
                        for v in 0..m.worlds() {
                            let holds = p.apply(Val::World(v))?.truth()?;
                            cases.push(m.content(x, w, v).not().or(&holds));
                        }
                        Ok(Val::Truth(all(cases)))
                    }))
                }))
            }),
            ConstKind::Determiner { kind, intensional } => Val::fun(move |p| {
                Ok(Val::fun(move |q| {
                    let p = p.clone();
                    let gather = move |w: Option<usize>| -> Result<I::B, EvalError> {
                        let (mut ps, mut qs) = (Vec::new(), Vec::new());
                        for x in 0..m.individuals() {
                            for (f, out) in [(&p, &mut ps), (&q, &mut qs)] {
                                let v = f.apply(Val::Ind(x))?;
                                let v = match w {
                                    Some(w) => v.apply(Val::World(w))?,
                                    None => v,
                                };
                                out.push(v.truth()?);
                            }
                        }
                        Ok(quantify(kind, ps, qs))
                    };
                    if intensional {
                        Ok(Val::fun(move |w| Ok(Val::Truth(gather(Some(w.world()?))?))))
                    } else {
                        Ok(Val::Truth(gather(None)?))
                    }
                }))
            }),
        };
        Ok(value)
    }
}

/// Checks that `term` is closed and of type `t` or `s -> t`; returns whether
/// it is a proposition.
pub(crate) fn check_formula(term: &Term) -> Result<Type, EvalError> {
    let ty = type_of(term)?;
    if ty != Type::T && ty != Type::prop() {
        return Err(EvalError::BadType { ty: ty.to_string() });
    }
    let free: Vec<String> = term.free_vars().into_iter().collect();
    if !free.is_empty() {
        return Err(EvalError::NotClosed { vars: free });
    }
    Ok(ty)
}

/// Truth of a checked formula at `world`.
pub(crate) fn eval_generic<I: Interp>(
    interp: &I,
    table: &DeterminerTable,
    world: usize,
    term: &Term,
) -> Result<I::B, EvalError> {
    let ev = Evaluator {
        interp,
        table,
        world,
    };
    let v = ev.eval(term, &None)?;
    match v {
        Val::Truth(b) => Ok(b),
        other => other.apply(Val::World(world))?.truth(),
    }
}

/// Truth of a closed formula of type `t` or `s -> t` at `world`, with the
/// standard determiner table.
pub fn eval(model: &Model, world: usize, term: &Term) -> Result<bool, EvalError> {
    eval_with(model, world, term, &DeterminerTable::standard())
}

pub fn eval_with(
    model: &Model,
    world: usize,
    term: &Term,
    table: &DeterminerTable,
) -> Result<bool, EvalError> {
    check_formula(term)?;
    if world >= model.world_count() {
        return Err(EvalError::WorldOutOfRange {
            world,
            worlds: model.world_count(),
        });
    }
    eval_generic(model, table, world, term)
}
