//! Cooper storage: translations pair a store of delayed quantifiers with an
//! ordinary value, and scope nodes retrieve stored quantifiers in `:ARGi`
//! order.
//!
//! Beyond the basic rules:
//!
//! * a scope-node target without `:quant` is stored as if it carried
//!   `:quant some`;
//! * at a `:content` boundary the embedded value is closed, and stored
//!   quantifiers that no enclosing scope node will retrieve are popped
//!   there, first key outermost;
//! * a restrictor `D(\x . P(x) & ...)` existentially closes the unstored
//!   variables declared inside it;
//! * each value tracks which of its instance variables are still unbound, so
//!   that no variable is closed twice.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::amr::{AmrNode, Instance, Role};
use crate::stlc::{
    beta_normalize, flatten_conjunctions, fresh_name, prenex, pretty, rename_world_binders,
    type_of, Term, Type,
};
use crate::translate::{check_valid, conj_in, cont, content_target, tidy, Regime, TranslateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeterminerKind {
    Universal,
    Existential,
    AtLeast(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Determiner {
    pub name: String,
    pub kind: DeterminerKind,
}

#[derive(Debug, thiserror::Error)]
pub enum DeterminerError {
    #[error("cannot read determiner table: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed determiner table: {0}")]
    Json(#[from] serde_json::Error),
    #[error("determiner {token}: {message}")]
    Entry { token: String, message: String },
}

#[derive(Deserialize)]
struct EntrySpec {
    name: Option<String>,
    kind: String,
    n: Option<u32>,
}

const NUMBER_WORDS: [&str; 21] = [
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
    "twenty",
];

fn numeral_name(n: u32) -> String {
    NUMBER_WORDS
        .get(n as usize)
        .map(|w| w.to_string())
        .unwrap_or_else(|| format!("at-least-{n}"))
}

/// Maps `:quant` tokens to determiner constants. Numerals not listed
/// explicitly read as "at least n" and are spelled out (`2` is `two`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminerTable {
    tokens: BTreeMap<String, Determiner>,
}

impl Default for DeterminerTable {
    fn default() -> Self {
        DeterminerTable::standard()
    }
}

impl DeterminerTable {
    pub const ENV_VAR: &'static str = "AMR_INTENS_DETERMINERS";

    pub fn standard() -> DeterminerTable {
        let mut tokens = BTreeMap::new();
        for (token, kind) in [
            ("every", DeterminerKind::Universal),
            ("a", DeterminerKind::Existential),
            ("some", DeterminerKind::Existential),
        ] {
            tokens.insert(
                token.to_string(),
                Determiner {
                    name: token.to_string(),
                    kind,
                },
            );
        }
        DeterminerTable { tokens }
    }

    pub fn resolve(&self, token: &str) -> Option<Determiner> {
        if let Some(d) = self.tokens.get(token) {
            return Some(d.clone());
        }
        let n: u32 = token
            .parse()
            .ok()
            .filter(|_| token.bytes().all(|b| b.is_ascii_digit()))?;
        Some(Determiner {
            name: numeral_name(n),
            kind: DeterminerKind::AtLeast(n),
        })
    }

    /// Kind of a determiner constant by its rendered name.
    pub fn kind_of(&self, name: &str) -> Option<DeterminerKind> {
        if let Some(d) = self.tokens.values().find(|d| d.name == name) {
            return Some(d.kind);
        }
        if let Some(n) = NUMBER_WORDS.iter().position(|w| *w == name) {
            return Some(DeterminerKind::AtLeast(n as u32));
        }
        name.strip_prefix("at-least-")
            .and_then(|n| n.parse().ok())
            .map(DeterminerKind::AtLeast)
    }

    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.tokens.values().map(|d| d.name.clone()).collect();
        names.extend(NUMBER_WORDS.iter().map(|w| w.to_string()));
        names.sort();
        names.dedup();
        names
    }

    /// Layers `{"token": {"name": .., "kind": "universal" | "existential" |
    /// "at-least", "n": ..}}` over this table.
    pub fn with_overrides(mut self, json: &str) -> Result<DeterminerTable, DeterminerError> {
        let specs: BTreeMap<String, EntrySpec> = serde_json::from_str(json)?;
        for (token, spec) in specs {
            let kind = match (spec.kind.as_str(), spec.n) {
                ("universal", _) => DeterminerKind::Universal,
                ("existential", _) => DeterminerKind::Existential,
                ("at-least", Some(n)) => DeterminerKind::AtLeast(n),
                ("at-least", None) => {
                    return Err(DeterminerError::Entry {
                        token,
                        message: "kind at-least needs n".into(),
                    })
                }
                (other, _) => {
                    return Err(DeterminerError::Entry {
                        token,
                        message: format!("unknown kind {other}"),
                    })
                }
            };
            let name = spec.name.unwrap_or_else(|| token.clone());
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || "()&.\\".contains(c))
            {
                return Err(DeterminerError::Entry {
                    token,
                    message: format!("unusable constant name {name:?}"),
                });
            }
            self.tokens.insert(token, Determiner { name, kind });
        }
        Ok(self)
    }

    /// The standard table, overridden by the file (or inline JSON) named by
    /// `AMR_INTENS_DETERMINERS` when set.
    pub fn from_env() -> Result<DeterminerTable, DeterminerError> {
        match std::env::var(Self::ENV_VAR) {
            Ok(value) => DeterminerTable::from_setting(&value),
            Err(_) => Ok(DeterminerTable::standard()),
        }
    }

    /// The standard table overridden by inline JSON (anything starting with
    /// `{`) or by the JSON file at the given path. Empty means no overrides.
    pub fn from_setting(value: &str) -> Result<DeterminerTable, DeterminerError> {
        if value.trim_start().starts_with('{') {
            DeterminerTable::standard().with_overrides(value)
        } else if value.is_empty() {
            Ok(DeterminerTable::standard())
        } else {
            let text = std::fs::read_to_string(value)?;
            DeterminerTable::standard().with_overrides(&text)
        }
    }
}

/// Variables paired with generalized quantifiers, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Store {
    entries: Vec<(String, Term)>,
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.entries.iter().find(|(k, _)| k == var).map(|(_, t)| t)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.get(var).is_some()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.entries.iter().map(|(k, t)| (k.as_str(), t))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(
        &mut self,
        var: impl Into<String>,
        quantifier: Term,
    ) -> Result<(), TranslateError> {
        let var = var.into();
        if self.contains(&var) {
            return Err(TranslateError::StoreCollision { var });
        }
        self.entries.push((var, quantifier));
        Ok(())
    }

    pub fn union(mut self, other: Store) -> Result<Store, TranslateError> {
        for (k, t) in other.entries {
            self.insert(k, t)?;
        }
        Ok(self)
    }

    fn remove(&mut self, var: &str) -> Option<Term> {
        let i = self.entries.iter().position(|(k, _)| k == var)?;
        Some(self.entries.remove(i).1)
    }
}

impl fmt::Display for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(k, t)| format!("({k}, {})", pretty(t)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A store paired with an ordinary value. `unbound` holds the instance
/// variables no `close` or `pop` has bound yet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredValue {
    pub store: Store,
    pub ordinary: Term,
    pub unbound: BTreeSet<String>,
}

impl StoredValue {
    pub fn plain(ordinary: Term) -> StoredValue {
        StoredValue {
            store: Store::new(),
            ordinary,
            unbound: BTreeSet::new(),
        }
    }
}

impl fmt::Display for StoredValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.store, pretty(&self.ordinary))
    }
}

/// `pop_x(s, φ) = (s - {(x, s_x)}, s_x(\x . φ))`.
pub fn pop(var: &str, value: &StoredValue) -> Result<StoredValue, TranslateError> {
    let mut store = value.store.clone();
    let quantifier = store.remove(var).ok_or_else(|| TranslateError::NotStored {
        var: var.to_string(),
    })?;
    let ordinary = tidy(&quantifier.app(Term::lam(var, Type::E, value.ordinary.clone())));
    let mut unbound = value.unbound.clone();
    unbound.remove(var);
    Ok(StoredValue {
        store,
        ordinary,
        unbound,
    })
}

/// Existentially binds the unbound variables that have no store entry,
/// binders in order of first occurrence. The regime follows from the type
/// of the ordinary value.
pub fn close_v2(value: &StoredValue) -> StoredValue {
    let regime = match type_of(&value.ordinary) {
        Ok(Type::T) => Regime::Extensional,
        Ok(ty) if ty == Type::prop() => Regime::Intensional,
        _ => return value.clone(),
    };
    let targets: BTreeSet<&String> = value
        .unbound
        .iter()
        .filter(|v| !value.store.contains(v))
        .collect();
    let order: Vec<String> = value
        .ordinary
        .free_vars_ordered()
        .into_iter()
        .filter(|(n, ty)| *ty == Type::E && targets.contains(n))
        .map(|(n, _)| n)
        .collect();
    let ordinary = order
        .iter()
        .rev()
        .fold(value.ordinary.clone(), |acc, x| regime.exists(x, acc));
    StoredValue {
        store: value.store.clone(),
        ordinary: tidy(&ordinary),
        unbound: value
            .unbound
            .iter()
            .filter(|v| value.store.contains(v))
            .cloned()
            .collect(),
    }
}

/// What one scope node did: the variables it retrieved (`:ARG0` first), the
/// existential binders of its closed `:pred`, and its ordinary result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeRecord {
    pub node: String,
    pub popped: Vec<String>,
    pub closed: Vec<String>,
    pub ordinary: Term,
}

impl ScopeRecord {
    /// Every existential introduced under the `:pred` sits inside the
    /// nuclear scope of every retrieved quantifier: the result is a chain
    /// `D1(R1)(\x1 . D2(R2)(\x2 . ...))` over the retrieved variables
    /// (world abstractions allowed in between) before anything else.
    pub fn events_take_narrow_scope(&self) -> bool {
        let mut pending: Vec<&str> = self.popped.iter().map(String::as_str).collect();
        let mut cur = &self.ordinary;
        while !pending.is_empty() {
            if let Term::Lam {
                ty: Type::S, body, ..
            } = cur
            {
                cur = body;
                continue;
            }
            let (head, args) = cur.spine();
            match (head, args.as_slice()) {
                (Term::Const { .. }, [_, Term::Lam { var, body, .. }])
                    if pending.contains(&var.as_str()) =>
                {
                    pending.retain(|p| p != var);
                    cur = body;
                }
                _ => return false,
            }
        }
        true
    }
}

fn exists_binders(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Exists { var, body } => {
            out.push(var.clone());
            exists_binders(body, out);
        }
        Term::Lam { body, .. } => exists_binders(body, out),
        Term::App(a, b) | Term::And(a, b) => {
            exists_binders(a, out);
            exists_binders(b, out);
        }
        Term::Var { .. } | Term::Const { .. } | Term::Top => {}
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Place {
    /// Root, `:pred` or `:content` argument: a scope node may stand here.
    Clause,
    Argument,
}

struct Scoper<'a> {
    regime: Regime,
    table: &'a DeterminerTable,
    /// Targets of the enclosing scope nodes.
    targets: Vec<String>,
    trace: Vec<ScopeRecord>,
}

impl Scoper<'_> {
    fn node(&mut self, node: &AmrNode, place: Place) -> Result<StoredValue, TranslateError> {
        match node {
            AmrNode::Constant { value, .. } => Ok(StoredValue::plain(Term::constant(
                value.symbol.clone(),
                Type::E,
            ))),
            AmrNode::VarRef { var, .. } => Ok(StoredValue::plain(Term::var(var.clone(), Type::E))),
            AmrNode::Instance(inst) if inst.concept == "scope" => {
                if place == Place::Argument {
                    return Err(TranslateError::MisplacedScope {
                        var: inst.var.clone(),
                    });
                }
                self.scope_node(inst)
            }
            AmrNode::Instance(inst) => self.instance(inst),
        }
    }

    fn determiner(&self, inst: &Instance) -> Result<Option<Determiner>, TranslateError> {
        let quants: Vec<&Role> = inst.roles_named("quant").collect();
        match quants.as_slice() {
            [] if self.targets.contains(&inst.var) => {
                Ok(Some(self.table.resolve("some").unwrap_or(Determiner {
                    name: "some".into(),
                    kind: DeterminerKind::Existential,
                })))
            }
            [] => Ok(None),
            [q] => {
                let token = match &q.target {
                    AmrNode::Constant { value, .. } => value.symbol.clone(),
                    other => other.variable().unwrap_or_default().to_string(),
                };
                self.table
                    .resolve(&token)
                    .map(Some)
                    .ok_or(TranslateError::UnknownDeterminer {
                        token,
                        var: inst.var.clone(),
                    })
            }
            more => Err(TranslateError::BadQuant {
                var: inst.var.clone(),
                count: more.len(),
            }),
        }
    }

    fn instance(&mut self, inst: &Instance) -> Result<StoredValue, TranslateError> {
        let regime = self.regime;
        let determiner = self.determiner(inst)?;
        let x = Term::var(inst.var.clone(), Type::E);
        let pred = Term::constant(inst.concept.clone(), regime.pred_type());

        let mut store = Store::new();
        let mut unbound = BTreeSet::from([inst.var.clone()]);
        let mut parts = Vec::new();
        for role in inst.roles.iter().filter(|r| !r.name.is("quant")) {
            let v = self.role(&inst.var, role)?;
            store = store.union(v.store)?;
            unbound.extend(v.unbound);
            parts.push(v.ordinary.app(x.clone()));
        }
        let head = regime.atom(pred.clone(), vec![x.clone()]);
        let body = if parts.is_empty() {
            head
        } else {
            let seq = Term::lam(inst.var.clone(), Type::E, conj_in(regime, parts));
            regime.and(head, seq.app(x.clone()))
        };

        let Some(det) = determiner else {
            return Ok(StoredValue {
                store,
                ordinary: tidy(&body),
                unbound,
            });
        };

        let restrictor = if inst.roles.iter().all(|r| r.name.is("quant")) {
            pred
        } else {
            let inner = close_v2(&StoredValue {
                store: store.clone(),
                ordinary: tidy(&body),
                unbound: unbound
                    .iter()
                    .filter(|v| **v != inst.var)
                    .cloned()
                    .collect(),
            });
            unbound = inner.unbound;
            unbound.insert(inst.var.clone());
            Term::lam(inst.var.clone(), Type::E, inner.ordinary)
        };
        let quantifier = Term::constant(det.name, regime.determiner_type()).app(restrictor);
        store.insert(inst.var.clone(), tidy(&quantifier))?;
        Ok(StoredValue {
            store,
            ordinary: regime.truth(),
            unbound,
        })
    }

    /// A role assignment as `\x . ...` awaiting its holder.
    fn role(&mut self, holder: &str, role: &Role) -> Result<StoredValue, TranslateError> {
        let regime = self.regime;
        let x = Term::var(holder.to_string(), Type::E);
        if role.name.base() == "content" {
            if regime == Regime::Extensional {
                return Err(TranslateError::WrongRegime {
                    construct: ":content".into(),
                    var: holder.to_string(),
                    regime: "intensional",
                    span: role.span,
                });
            }
            let target = content_target(holder, role)?;
            let inner = self.node(target, Place::Clause)?;
            let mut v = close_v2(&inner);
            let local: Vec<String> = v
                .store
                .keys()
                .filter(|k| !self.targets.iter().any(|t| t == k))
                .map(str::to_string)
                .collect();
            for k in local.iter().rev() {
                v = pop(k, &v)?;
            }
            let body = regime.atom(cont(), vec![x, v.ordinary]);
            return Ok(StoredValue {
                store: v.store,
                ordinary: Term::lam(holder, Type::E, body),
                unbound: v.unbound,
            });
        }
        let target = self.node(&role.target, Place::Argument)?;
        let y = match &role.target {
            AmrNode::Instance(inst) => Term::var(inst.var.clone(), Type::E),
            _ => target.ordinary.clone(),
        };
        let args = if role.name.is_inverted() {
            vec![y, x]
        } else {
            vec![x, y]
        };
        let relation = regime.atom(Term::constant(role.name.base(), regime.role_type()), args);
        let body = match role.target {
            AmrNode::Instance(_) => regime.and(relation, target.ordinary),
            _ => relation,
        };
        Ok(StoredValue {
            store: target.store,
            ordinary: Term::lam(holder, Type::E, body),
            unbound: target.unbound,
        })
    }

    fn scope_node(&mut self, inst: &Instance) -> Result<StoredValue, TranslateError> {
        let mut preds = Vec::new();
        let mut args: Vec<(usize, String)> = Vec::new();
        for role in &inst.roles {
            match (
                role.name.is_inverted(),
                role.name.base(),
                role.name.arg_index(),
            ) {
                (false, "pred", _) => preds.push(&role.target),
                (false, _, Some(i)) => match &role.target {
                    AmrNode::VarRef { var, .. } => args.push((i, var.clone())),
                    _ => {
                        return Err(TranslateError::ScopeArgument {
                            var: inst.var.clone(),
                            role: role.name.to_string(),
                        })
                    }
                },
                _ => {
                    return Err(TranslateError::ScopeRole {
                        var: inst.var.clone(),
                        role: role.name.to_string(),
                    })
                }
            }
        }
        let [pred] = preds.as_slice() else {
            return Err(TranslateError::ScopePred {
                var: inst.var.clone(),
                count: preds.len(),
            });
        };
        args.sort_by_key(|(i, _)| *i);
        let popped: Vec<String> = args.into_iter().map(|(_, v)| v).collect();

        let depth = self.targets.len();
        self.targets.extend(popped.iter().cloned());
        let inner = self.node(pred, Place::Clause);
        self.targets.truncate(depth);

        let mut v = close_v2(&inner?);
        let mut closed = Vec::new();
        exists_binders(&v.ordinary, &mut closed);
        for x in popped.iter().rev() {
            v = pop(x, &v)?;
        }
        let residual: Vec<String> = popped
            .iter()
            .filter(|x| v.ordinary.has_free(x))
            .cloned()
            .collect();
        if !residual.is_empty() {
            return Err(TranslateError::ResidualFreeVariable {
                vars: residual,
                at: Some(inst.var.clone()),
            });
        }
        self.trace.push(ScopeRecord {
            node: inst.var.clone(),
            popped,
            closed,
            ordinary: v.ordinary.clone(),
        });
        Ok(v)
    }
}

/// Storage-aware translation of a whole graph.
pub fn translate_scoped(
    graph: &AmrNode,
    regime: Regime,
    table: &DeterminerTable,
) -> Result<StoredValue, TranslateError> {
    translate_scoped_traced(graph, regime, table).map(|(v, _)| v)
}

/// As [`translate_scoped`], also reporting every scope node evaluated,
/// innermost first.
pub fn translate_scoped_traced(
    graph: &AmrNode,
    regime: Regime,
    table: &DeterminerTable,
) -> Result<(StoredValue, Vec<ScopeRecord>), TranslateError> {
    check_valid(graph)?;
    let mut scoper = Scoper {
        regime,
        table,
        targets: Vec::new(),
        trace: Vec::new(),
    };
    let value = scoper.node(graph, Place::Clause)?;
    Ok((value, scoper.trace))
}

/// Rewrites `D(P)(N)` for existential `D` into `exists v . P(v) & N(v)`
/// (pointwise in the intensional regime).
pub fn expand_existentials(term: &Term, regime: Regime, table: &DeterminerTable) -> Term {
    let rebuilt = match term {
        Term::App(f, a) => Term::App(
            Box::new(expand_existentials(f, regime, table)),
            Box::new(expand_existentials(a, regime, table)),
        ),
        Term::And(l, r) => Term::And(
            Box::new(expand_existentials(l, regime, table)),
            Box::new(expand_existentials(r, regime, table)),
        ),
        Term::Lam { var, ty, body } => Term::Lam {
            var: var.clone(),
            ty: ty.clone(),
            body: Box::new(expand_existentials(body, regime, table)),
        },
        Term::Exists { var, body } => Term::Exists {
            var: var.clone(),
            body: Box::new(expand_existentials(body, regime, table)),
        },
        Term::Var { .. } | Term::Const { .. } | Term::Top => return term.clone(),
    };
    let (head, args) = rebuilt.spine();
    let (Term::Const { name, ty }, [restrictor, nucleus]) = (head, args.as_slice()) else {
        return rebuilt;
    };
    if *ty != regime.determiner_type() || table.kind_of(name) != Some(DeterminerKind::Existential) {
        return rebuilt;
    }
    let hint = match nucleus {
        Term::Lam { var, .. } => var.as_str(),
        _ => "x",
    };
    let v = fresh_name(hint, |n| restrictor.has_free(n) || nucleus.has_free(n));
    let vt = Term::var(v.clone(), Type::E);
    let apply = |p: &Term| (*p).clone().app(vt.clone());
    match regime {
        Regime::Extensional => Term::exists(v.clone(), apply(restrictor).and(apply(nucleus))),
        Regime::Intensional => {
            let w = fresh_name("w", |n| {
                n == v || restrictor.has_free(n) || nucleus.has_free(n)
            });
            let wt = Term::var(w.clone(), Type::S);
            Term::lam(
                w,
                Type::S,
                Term::exists(
                    v.clone(),
                    apply(restrictor)
                        .app(wt.clone())
                        .and(apply(nucleus).app(wt)),
                ),
            )
        }
    }
}

/// A complete reading: translate, close, require an empty store and a
/// closed result, then spell out existential determiners and prenex.
pub fn derive_reading(
    graph: &AmrNode,
    regime: Regime,
    table: &DeterminerTable,
) -> Result<Term, TranslateError> {
    let value = close_v2(&translate_scoped(graph, regime, table)?);
    if !value.store.is_empty() {
        return Err(TranslateError::ResidualStore {
            vars: value.store.keys().map(str::to_string).collect(),
        });
    }
    let expanded = beta_normalize(&expand_existentials(&value.ordinary, regime, table));
    let reading = rename_world_binders(&flatten_conjunctions(&prenex(&expanded)));
    let free: Vec<String> = reading.free_vars().into_iter().collect();
    if !free.is_empty() {
        return Err(TranslateError::ResidualFreeVariable {
            vars: free,
            at: None,
        });
    }
    Ok(reading)
}
