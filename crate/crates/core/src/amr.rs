//! The recursive AMR data model.
//!
//! An AMR is a constant, a (re-entrant) variable, or an instance assignment
//! `(x / P)` optionally followed by a sequence of role assignments
//! `:R1 A1 ... :Rn An`. Variables are scoped to one rooted graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

/// Character offsets into the Penman source a node was read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// A role label such as `ARG0`, `content` or `prep-with`, possibly inverted
/// (written with an `-of` suffix).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoleName {
    base: String,
    inverted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RoleNameError {
    #[error("empty role name")]
    Empty,
    #[error("role name `{0}` contains an illegal character")]
    IllegalChar(String),
    #[error("role `{0}` cannot be inverted")]
    NotInvertible(String),
}

impl RoleName {
    pub fn new(base: impl Into<String>, inverted: bool) -> Result<RoleName, RoleNameError> {
        let base = base.into();
        if base.is_empty() {
            return Err(RoleNameError::Empty);
        }
        if base
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '/' | ':'))
        {
            return Err(RoleNameError::IllegalChar(base));
        }
        if inverted && (base == "quant" || base == "pred") {
            return Err(RoleNameError::NotInvertible(base));
        }
        Ok(RoleName { base, inverted })
    }

    /// Reads a role label as written after the colon, detecting `-of`.
    pub fn from_label(label: &str) -> Result<RoleName, RoleNameError> {
        match label.strip_suffix("-of") {
            Some(base) if !base.is_empty() => RoleName::new(base, true),
            _ => RoleName::new(label, false),
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    pub fn inverse(&self) -> RoleName {
        RoleName {
            base: self.base.clone(),
            inverted: !self.inverted,
        }
    }

    /// `Some(i)` for `ARGi`.
    pub fn arg_index(&self) -> Option<usize> {
        self.base.strip_prefix("ARG")?.parse().ok()
    }

    pub fn is(&self, base: &str) -> bool {
        !self.inverted && self.base == base
    }
}

impl fmt::Display for RoleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "{}-of", self.base)
        } else {
            f.write_str(&self.base)
        }
    }
}

/// An attribute value: a number, polarity sign, bare symbol or quoted string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constant {
    pub symbol: String,
    pub quoted: bool,
}

impl Constant {
    pub fn bare(symbol: impl Into<String>) -> Constant {
        Constant {
            symbol: symbol.into(),
            quoted: false,
        }
    }

    pub fn quoted(symbol: impl Into<String>) -> Constant {
        Constant {
            symbol: symbol.into(),
            quoted: true,
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.quoted {
            f.write_str("\"")?;
            for c in self.symbol.chars() {
                if c == '"' || c == '\\' {
                    f.write_str("\\")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("\"")
        } else {
            f.write_str(&self.symbol)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Role {
    pub name: RoleName,
    pub target: AmrNode,
    pub span: Option<Span>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub var: String,
    pub concept: String,
    pub roles: Vec<Role>,
    pub span: Option<Span>,
}

impl Instance {
    pub fn roles_named<'a>(&'a self, base: &'a str) -> impl Iterator<Item = &'a Role> + 'a {
        self.roles.iter().filter(move |r| r.name.is(base))
    }
}

/// `A := c | x | (x / P) | (x / P :R1 A1 ... :Rn An)`.
///
/// Equality is structural and ignores source spans.
#[derive(Debug, Clone)]
pub enum AmrNode {
    Constant { value: Constant, span: Option<Span> },
    VarRef { var: String, span: Option<Span> },
    Instance(Instance),
}

impl PartialEq for Role {
    fn eq(&self, other: &Role) -> bool {
        self.name == other.name && self.target == other.target
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Instance) -> bool {
        self.var == other.var && self.concept == other.concept && self.roles == other.roles
    }
}

impl PartialEq for AmrNode {
    fn eq(&self, other: &AmrNode) -> bool {
        match (self, other) {
            (AmrNode::Constant { value: a, .. }, AmrNode::Constant { value: b, .. }) => a == b,
            (AmrNode::VarRef { var: a, .. }, AmrNode::VarRef { var: b, .. }) => a == b,
            (AmrNode::Instance(a), AmrNode::Instance(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for AmrNode {}

impl AmrNode {
    pub fn constant(symbol: impl Into<String>) -> AmrNode {
        AmrNode::Constant {
            value: Constant::bare(symbol),
            span: None,
        }
    }

    /// A quoted string constant.
    pub fn string(text: impl Into<String>) -> AmrNode {
        AmrNode::Constant {
            value: Constant::quoted(text),
            span: None,
        }
    }

    pub fn var(name: impl Into<String>) -> AmrNode {
        AmrNode::VarRef {
            var: name.into(),
            span: None,
        }
    }

    pub fn instance(var: impl Into<String>, concept: impl Into<String>) -> AmrNode {
        AmrNode::Instance(Instance {
            var: var.into(),
            concept: concept.into(),
            roles: Vec::new(),
            span: None,
        })
    }

    /// Builder: appends a role to an instance node. Panics on non-instances
    /// and on malformed role labels.
    pub fn with_role(mut self, label: &str, target: AmrNode) -> AmrNode {
        match &mut self {
            AmrNode::Instance(inst) => inst.roles.push(Role {
                name: RoleName::from_label(label).expect("valid role label"),
                target,
                span: None,
            }),
            _ => panic!("with_role on a non-instance node"),
        }
        self
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            AmrNode::Constant { span, .. } | AmrNode::VarRef { span, .. } => *span,
            AmrNode::Instance(inst) => inst.span,
        }
    }

    pub fn as_instance(&self) -> Option<&Instance> {
        match self {
            AmrNode::Instance(inst) => Some(inst),
            _ => None,
        }
    }

    /// The variable this node denotes, if any.
    pub fn variable(&self) -> Option<&str> {
        match self {
            AmrNode::VarRef { var, .. } => Some(var),
            AmrNode::Instance(inst) => Some(&inst.var),
            AmrNode::Constant { .. } => None,
        }
    }

    /// Pre-order walk over every node.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a AmrNode)) {
        f(self);
        if let AmrNode::Instance(inst) = self {
            for role in &inst.roles {
                role.target.walk(f);
            }
        }
    }

    /// Instance-assigned variables in pre-order (with repeats if the graph
    /// is malformed).
    pub fn declared_vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if let AmrNode::Instance(inst) = n {
                out.push(inst.var.as_str());
            }
        });
        out
    }

    pub fn instance_count(&self) -> usize {
        self.declared_vars().len()
    }

    pub fn role_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |node| {
            if let AmrNode::Instance(inst) = node {
                n += inst.roles.len();
            }
        });
        n
    }
}

/// `Free` as defined for AMRs: the instance-assigned variables of a graph.
/// Bare re-entrant variables and constants contribute nothing, so a
/// re-entrancy is never bound before its instance assignment.
pub fn free(graph: &AmrNode) -> BTreeSet<String> {
    match graph {
        AmrNode::Constant { .. } | AmrNode::VarRef { .. } => BTreeSet::new(),
        AmrNode::Instance(inst) => {
            let mut out = BTreeSet::from([inst.var.clone()]);
            for role in &inst.roles {
                out.extend(free(&role.target));
            }
            out
        }
    }
}

/// `Free` without descending into `:content` arguments, whose variables are
/// closed off inside the content.
pub fn free_at_level(graph: &AmrNode) -> BTreeSet<String> {
    match graph {
        AmrNode::Constant { .. } | AmrNode::VarRef { .. } => BTreeSet::new(),
        AmrNode::Instance(inst) => {
            let mut out = BTreeSet::from([inst.var.clone()]);
            for role in inst.roles.iter().filter(|r| r.name.base() != "content") {
                out.extend(free_at_level(&role.target));
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    DuplicateInstance {
        var: String,
    },
    DanglingReference {
        var: String,
    },
    /// A bare constant spelled like a declared variable; it would be read
    /// back as a re-entrancy.
    ConstantShadowsVariable {
        symbol: String,
    },
    Cycle {
        vars: Vec<String>,
    },
    BadRole {
        role: String,
        reason: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateInstance { var } => {
                write!(f, "variable {var} has more than one instance assignment")
            }
            Violation::DanglingReference { var } => {
                write!(
                    f,
                    "variable {var} is referenced but never instance-assigned"
                )
            }
            Violation::ConstantShadowsVariable { symbol } => {
                write!(f, "constant {symbol} is spelled like a declared variable")
            }
            Violation::Cycle { vars } => write!(f, "cycle through {}", vars.join(" -> ")),
            Violation::BadRole { role, reason } => write!(f, "role :{role}: {reason}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks single instance assignment, reference resolution, role sanity and
/// acyclicity of the variable graph once `-of` edges are flipped.
pub fn validate(graph: &AmrNode) -> ValidationReport {
    let mut violations = Vec::new();

    let mut seen = BTreeSet::new();
    let mut reported = BTreeSet::new();
    for var in graph.declared_vars() {
        if !seen.insert(var) && reported.insert(var) {
            violations.push(Violation::DuplicateInstance {
                var: var.to_string(),
            });
        }
    }

    let mut dangling = BTreeSet::new();
    let mut shadowing = BTreeSet::new();
    graph.walk(&mut |n| match n {
        AmrNode::VarRef { var, .. } if !seen.contains(var.as_str()) => {
            dangling.insert(var.clone());
        }
        AmrNode::Constant { value, .. }
            if !value.quoted && seen.contains(value.symbol.as_str()) =>
        {
            shadowing.insert(value.symbol.clone());
        }
        AmrNode::Instance(inst) => {
            for role in &inst.roles {
                if role.name.is_inverted() && matches!(role.target, AmrNode::Constant { .. }) {
                    violations.push(Violation::BadRole {
                        role: role.name.to_string(),
                        reason: "an inverted role needs a variable argument".into(),
                    });
                }
            }
        }
        _ => {}
    });
    violations.extend(
        dangling
            .into_iter()
            .map(|var| Violation::DanglingReference { var }),
    );
    violations.extend(
        shadowing
            .into_iter()
            .map(|symbol| Violation::ConstantShadowsVariable { symbol }),
    );

    if let Some(vars) = find_cycle(graph) {
        violations.push(Violation::Cycle { vars });
    }

    ValidationReport { violations }
}

/// Directed variable-to-variable edges with inverse roles flipped.
pub(crate) fn normalized_edges(graph: &AmrNode) -> BTreeMap<String, BTreeSet<String>> {
    fn go(node: &AmrNode, edges: &mut BTreeMap<String, BTreeSet<String>>) {
        if let AmrNode::Instance(inst) = node {
            edges.entry(inst.var.clone()).or_default();
            for role in &inst.roles {
                if let Some(target) = role.target.variable() {
                    let (from, to) = if role.name.is_inverted() {
                        (target, inst.var.as_str())
                    } else {
                        (inst.var.as_str(), target)
                    };
                    edges
                        .entry(from.to_string())
                        .or_default()
                        .insert(to.to_string());
                }
                go(&role.target, edges);
            }
        }
    }
    let mut edges = BTreeMap::new();
    go(graph, &mut edges);
    edges
}

fn find_cycle(graph: &AmrNode) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn dfs(
        v: &str,
        edges: &BTreeMap<String, BTreeSet<String>>,
        marks: &mut BTreeMap<String, Mark>,
        stack: &mut Vec<String>,
    ) -> Option<Vec<String>> {
        marks.insert(v.to_string(), Mark::Open);
        stack.push(v.to_string());
        for next in edges.get(v).into_iter().flatten() {
            match marks.get(next.as_str()) {
                Some(Mark::Open) => {
                    let start = stack.iter().position(|s| s == next).unwrap_or(0);
                    let mut cycle = stack[start..].to_vec();
                    cycle.push(next.clone());
                    return Some(cycle);
                }
                Some(Mark::Done) => {}
                None => {
                    if let Some(c) = dfs(next, edges, marks, stack) {
                        return Some(c);
                    }
                }
            }
        }
        stack.pop();
        marks.insert(v.to_string(), Mark::Done);
        None
    }

    let edges = normalized_edges(graph);
    let mut marks = BTreeMap::new();
    for v in edges.keys() {
        if !marks.contains_key(v.as_str()) {
            if let Some(c) = dfs(v, &edges, &mut marks, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}
