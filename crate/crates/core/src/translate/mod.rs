//! Compositional translation of AMR graphs into lambda terms.
//!
//! Concepts become predicate constants, roles become relation constants named
//! by their base label. An inverted role `:R-of y` under `x` contributes
//! `R(y)(x)`.

mod ext;
mod int;

pub use ext::{close_v1, translate_ext, translate_ext_closed};
pub use int::{and_w, close_int, exists_w, translate_int, translate_int_closed};

use crate::amr::{validate, AmrNode, Span, ValidationReport};
use crate::stlc::reader::Lexicon;
use crate::stlc::{
    beta_normalize, flatten_conjunctions, fresh_name, rename_world_binders, Term, Type,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Extensional,
    Intensional,
}

impl Regime {
    /// `t`, or `s -> t` once intensionalized.
    pub fn prop_type(self) -> Type {
        match self {
            Regime::Extensional => Type::T,
            Regime::Intensional => Type::prop(),
        }
    }

    pub fn pred_type(self) -> Type {
        Type::arrow(Type::E, self.prop_type())
    }

    pub fn role_type(self) -> Type {
        Type::function([Type::E, Type::E], self.prop_type())
    }

    /// Generalized quantifier: `(e -> t) -> t` or its world-lifted analogue.
    pub fn quantifier_type(self) -> Type {
        Type::arrow(self.pred_type(), self.prop_type())
    }

    pub fn determiner_type(self) -> Type {
        Type::arrow(self.pred_type(), self.quantifier_type())
    }

    pub(crate) fn truth(self) -> Term {
        match self {
            Regime::Extensional => Term::Top,
            Regime::Intensional => Term::lam("w", Type::S, Term::Top),
        }
    }

    /// `head(args)`, eta-expanded over a world in the intensional regime.
    pub(crate) fn atom(self, head: Term, args: Vec<Term>) -> Term {
        let applied = head.apply(args);
        match self {
            Regime::Extensional => applied,
            Regime::Intensional => {
                let w = fresh_world(&[&applied]);
                Term::lam(w.clone(), Type::S, applied.app(Term::var(w, Type::S)))
            }
        }
    }

    pub(crate) fn and(self, a: Term, b: Term) -> Term {
        match self {
            Regime::Extensional => a.and(b),
            Regime::Intensional => int::and_w_raw(a, b),
        }
    }

    pub(crate) fn exists(self, var: &str, body: Term) -> Term {
        match self {
            Regime::Extensional => Term::exists(var, body),
            Regime::Intensional => int::exists_w_raw(var, body),
        }
    }
}

pub(crate) fn fresh_world(parts: &[&Term]) -> String {
    fresh_name("w", |n| parts.iter().any(|t| t.has_free(n)))
}

pub(crate) fn cont_type() -> Type {
    Type::function([Type::E, Type::prop()], Type::prop())
}

pub(crate) fn cont() -> Term {
    Term::constant("cont", cont_type())
}

/// Beta-normal, right-nested, world binders named by depth.
pub(crate) fn tidy(term: &Term) -> Term {
    rename_world_binders(&flatten_conjunctions(&beta_normalize(term)))
}

/// Reader lexicon for formulas in either regime: `cont` plus the given
/// determiner names.
pub fn lexicon<'a>(regime: Regime, determiners: impl IntoIterator<Item = &'a str>) -> Lexicon {
    let mut lex = Lexicon::new().with("cont", cont_type());
    for d in determiners {
        lex = lex.with(d, regime.determiner_type());
    }
    lex
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("ill-formed graph: {0}")]
    Invalid(ValidationReport),
    #[error("{construct} at {var} needs the {regime} regime")]
    WrongRegime {
        construct: String,
        var: String,
        regime: &'static str,
        span: Option<Span>,
    },
    #[error("content embeds variable {var}")]
    ContentEmbedsVariable { var: String, span: Option<Span> },
    #[error("content embeds constant {symbol}")]
    ContentEmbedsConstant { symbol: String, span: Option<Span> },
    #[error("inverse role :content-of at {var} has no interpretation")]
    InvertedContent { var: String, span: Option<Span> },
    #[error("variable {var} occurs outside the :content that declares it")]
    ContentEscape { var: String },
    #[error("close: {var} does not occur in the term")]
    CloseAbsent { var: String },
    #[error("unknown determiner {token} at {var}")]
    UnknownDeterminer { token: String, var: String },
    #[error("{var} has {count} :quant roles")]
    BadQuant { var: String, count: usize },
    #[error("variable {var} is stored twice")]
    StoreCollision { var: String },
    #[error("scope node {var} needs exactly one :pred, found {count}")]
    ScopePred { var: String, count: usize },
    #[error("scope node {var}: :{role} must be a bare variable")]
    ScopeArgument { var: String, role: String },
    #[error("scope node {var} carries unexpected role :{role}")]
    ScopeRole { var: String, role: String },
    #[error("scope node {var} appears as an ordinary argument")]
    MisplacedScope { var: String },
    #[error("pop: no quantifier stored for {var}")]
    NotStored { var: String },
    #[error("free variable {} remains after evaluation{}", vars.join(", "), at.as_ref().map(|v| format!(" of scope node {v}")).unwrap_or_default())]
    ResidualFreeVariable {
        vars: Vec<String>,
        at: Option<String>,
    },
    #[error("quantifiers never retrieved from the store: {}", vars.join(", "))]
    ResidualStore { vars: Vec<String> },
}

impl TranslateError {
    pub fn span(&self) -> Option<Span> {
        match self {
            TranslateError::WrongRegime { span, .. }
            | TranslateError::ContentEmbedsVariable { span, .. }
            | TranslateError::ContentEmbedsConstant { span, .. }
            | TranslateError::InvertedContent { span, .. } => *span,
            _ => None,
        }
    }
}

pub(crate) fn check_valid(graph: &AmrNode) -> Result<(), TranslateError> {
    let report = validate(graph);
    if report.is_valid() {
        Ok(())
    } else {
        Err(TranslateError::Invalid(report))
    }
}

/// The `:content` argument rule shared by every intensional translation.
pub(crate) fn content_target<'a>(
    holder: &str,
    role: &'a crate::amr::Role,
) -> Result<&'a AmrNode, TranslateError> {
    if role.name.is_inverted() {
        return Err(TranslateError::InvertedContent {
            var: holder.to_string(),
            span: role.span,
        });
    }
    match &role.target {
        AmrNode::VarRef { var, span } => Err(TranslateError::ContentEmbedsVariable {
            var: var.clone(),
            span: *span,
        }),
        AmrNode::Constant { value, span } => Err(TranslateError::ContentEmbedsConstant {
            symbol: value.symbol.clone(),
            span: *span,
        }),
        target @ AmrNode::Instance(_) => Ok(target),
    }
}

/// Binders in first-occurrence order among the free variables of `term`.
pub(crate) fn binder_order(
    term: &Term,
    vars: &std::collections::BTreeSet<String>,
) -> Result<Vec<String>, TranslateError> {
    let order: Vec<String> = term
        .free_vars_ordered()
        .into_iter()
        .filter(|(n, ty)| *ty == Type::E && vars.contains(n))
        .map(|(n, _)| n)
        .collect();
    if let Some(missing) = vars.iter().find(|v| !order.contains(v)) {
        return Err(TranslateError::CloseAbsent {
            var: missing.clone(),
        });
    }
    Ok(order)
}

/// The rules shared by both regimes: instance assignments, role assignments
/// and sequences, complex AMRs, and (intensional only) `:content`.
pub(crate) fn compose(regime: Regime, node: &AmrNode) -> Result<Term, TranslateError> {
    match node {
        AmrNode::Constant { value, .. } => Ok(Term::constant(value.symbol.clone(), Type::E)),
        AmrNode::VarRef { var, .. } => Ok(Term::var(var.clone(), Type::E)),
        AmrNode::Instance(inst) => {
            if inst.concept == "scope" {
                return Err(TranslateError::WrongRegime {
                    construct: "scope node".into(),
                    var: inst.var.clone(),
                    regime: "scope",
                    span: inst.span,
                });
            }
            let x = Term::var(inst.var.clone(), Type::E);
            let head = regime.atom(
                Term::constant(inst.concept.clone(), regime.pred_type()),
                vec![x.clone()],
            );
            if inst.roles.is_empty() {
                return Ok(head);
            }
            let mut parts = Vec::new();
            for role in &inst.roles {
                parts.push(role_assignment(regime, &inst.var, role)?.app(x.clone()));
            }
            let seq = Term::lam(inst.var.clone(), Type::E, conj_in(regime, parts));
            Ok(regime.and(head, seq.app(x)))
        }
    }
}

pub(crate) fn conj_in(regime: Regime, parts: Vec<Term>) -> Term {
    parts
        .into_iter()
        .rev()
        .reduce(|acc, t| regime.and(t, acc))
        .unwrap_or_else(|| regime.truth())
}

fn role_assignment(
    regime: Regime,
    holder: &str,
    role: &crate::amr::Role,
) -> Result<Term, TranslateError> {
    let x = Term::var(holder.to_string(), Type::E);
    match role.name.base() {
        "quant" => {
            return Err(TranslateError::WrongRegime {
                construct: ":quant".into(),
                var: holder.to_string(),
                regime: "scope",
                span: role.span,
            })
        }
        "content" => {
            if regime == Regime::Extensional {
                return Err(TranslateError::WrongRegime {
                    construct: ":content".into(),
                    var: holder.to_string(),
                    regime: "intensional",
                    span: role.span,
                });
            }
            let target = content_target(holder, role)?;
            let inner = tidy(&compose(regime, target)?);
            let closed = close_int(&inner, &crate::amr::free_at_level(target))?;
            return Ok(Term::lam(
                holder,
                Type::E,
                regime.atom(cont(), vec![x, closed]),
            ));
        }
        _ => {}
    }
    let y = compose(regime, &role.target)?;
    let y_ref = match &role.target {
        AmrNode::Instance(inst) => Term::var(inst.var.clone(), Type::E),
        _ => y.clone(),
    };
    let args = if role.name.is_inverted() {
        vec![y_ref, x]
    } else {
        vec![x, y_ref]
    };
    let relation = regime.atom(Term::constant(role.name.base(), regime.role_type()), args);
    let body = match role.target {
        AmrNode::Instance(_) => regime.and(relation, y),
        _ => relation,
    };
    Ok(Term::lam(holder, Type::E, body))
}
