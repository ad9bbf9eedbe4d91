//! Penman notation: reading, writing, inverse-role normalization and logical
//! triples.
//!
//! Grammar:
//!
//! ```text
//! node    := '(' VAR '/' CONCEPT role* ')'
//! role    := ROLE arg
//! arg     := node | VAR | CONST
//! ROLE    := ':' [A-Za-z0-9-]+
//! VAR     := [a-z][A-Za-z0-9]*
//! CONCEPT := [A-Za-z][A-Za-z0-9-]*
//! CONST   := number | '-' | '+' | bare identifier | "quoted string"
//! ```
//!
//! A bare token in argument position is a variable iff some `/` in the same
//! graph declares it. `#` starts a comment running to the end of the line.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::amr::{AmrNode, Constant, Instance, Role, RoleName, Span};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{message}")]
    Lexical { span: Span, message: String },
    #[error("{message}")]
    Syntax { span: Span, message: String },
    #[error("unbalanced parenthesis")]
    Unbalanced { span: Span },
    #[error("variable {var} has a second instance assignment")]
    DuplicateInstance { var: String, span: Span },
    #[error("role :{role} has no argument")]
    MissingArgument { role: String, span: Span },
    #[error("empty graph")]
    Empty,
}

impl ParseError {
    pub fn span(&self) -> Option<Span> {
        match self {
            ParseError::Lexical { span, .. }
            | ParseError::Syntax { span, .. }
            | ParseError::Unbalanced { span }
            | ParseError::DuplicateInstance { span, .. }
            | ParseError::MissingArgument { span, .. } => Some(*span),
            ParseError::Empty => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Slash,
    Role(String),
    Symbol(String),
    Str(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.' | '+')
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            _ if c.is_whitespace() => i += 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' | ')' | '/' => {
                i += 1;
                let tok = match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    _ => Tok::Slash,
                };
                tokens.push(Token {
                    tok,
                    span: Span::new(start, i),
                });
            }
            ':' => {
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '-') {
                    i += 1;
                }
                if i == start + 1 {
                    return Err(ParseError::Lexical {
                        span: Span::new(start, i),
                        message: "role marker `:` without a label".into(),
                    });
                }
                tokens.push(Token {
                    tok: Tok::Role(chars[start + 1..i].iter().collect()),
                    span: Span::new(start, i),
                });
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => {
                            return Err(ParseError::Lexical {
                                span: Span::new(start, i),
                                message: "unterminated string".into(),
                            })
                        }
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') if i + 1 < chars.len() => {
                            s.push(chars[i + 1]);
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                tokens.push(Token {
                    tok: Tok::Str(s),
                    span: Span::new(start, i),
                });
            }
            _ if is_symbol_char(c) => {
                while i < chars.len() && is_symbol_char(chars[i]) {
                    i += 1;
                }
                tokens.push(Token {
                    tok: Tok::Symbol(chars[start..i].iter().collect()),
                    span: Span::new(start, i),
                });
            }
            _ => {
                return Err(ParseError::Lexical {
                    span: Span::new(start, start + 1),
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(tokens)
}

pub fn is_variable_token(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase()) && cs.all(|c| c.is_ascii_alphanumeric())
}

pub fn is_concept_token(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '-')
}

fn is_number(s: &str) -> bool {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    !digits.is_empty()
        && digits.chars().next().is_some_and(|c| c.is_ascii_digit())
        && digits.parse::<f64>().is_ok()
}

/// Whether a bare token can stand as an attribute constant.
pub fn is_constant_token(s: &str) -> bool {
    s == "-"
        || s == "+"
        || is_number(s)
        || (s.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && s.chars().all(is_symbol_char))
}

enum RawArg {
    Node(RawNode),
    Symbol(String, Span),
    Str(String, Span),
}

struct RawNode {
    var: String,
    concept: String,
    roles: Vec<(RoleName, RawArg, Span)>,
    span: Span,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn node(&mut self, declared: &mut BTreeMap<String, Span>) -> Result<RawNode, ParseError> {
        let open = match self.peek() {
            Some(Token {
                tok: Tok::Open,
                span,
            }) => *span,
            Some(Token {
                tok: Tok::Close,
                span,
            }) => return Err(ParseError::Unbalanced { span: *span }),
            Some(t) => {
                return Err(ParseError::Syntax {
                    span: t.span,
                    message: "expected `(`".into(),
                })
            }
            None => return Err(ParseError::Empty),
        };
        self.pos += 1;

        let (var, var_span) = match self.peek().cloned() {
            Some(Token {
                tok: Tok::Symbol(s),
                span,
            }) => {
                if !is_variable_token(&s) {
                    return Err(ParseError::Lexical {
                        span,
                        message: format!("`{s}` is not a valid variable"),
                    });
                }
                (s, span)
            }
            Some(t) => {
                return Err(ParseError::Syntax {
                    span: t.span,
                    message: "expected a variable after `(`".into(),
                })
            }
            None => return Err(ParseError::Unbalanced { span: open }),
        };
        self.pos += 1;
        if declared.contains_key(&var) {
            return Err(ParseError::DuplicateInstance {
                var,
                span: var_span,
            });
        }
        declared.insert(var.clone(), var_span);

        match self.peek() {
            Some(Token {
                tok: Tok::Slash, ..
            }) => self.pos += 1,
            Some(t) => {
                return Err(ParseError::Syntax {
                    span: t.span,
                    message: "expected `/`".into(),
                })
            }
            None => return Err(ParseError::Unbalanced { span: open }),
        }

        let concept = match self.peek().cloned() {
            Some(Token {
                tok: Tok::Symbol(s),
                span,
            }) => {
                if !is_concept_token(&s) {
                    return Err(ParseError::Lexical {
                        span,
                        message: format!("`{s}` is not a valid concept"),
                    });
                }
                s
            }
            Some(t) => {
                return Err(ParseError::Syntax {
                    span: t.span,
                    message: "expected a concept after `/`".into(),
                })
            }
            None => return Err(ParseError::Unbalanced { span: open }),
        };
        self.pos += 1;

        let mut roles = Vec::new();
        loop {
            match self.peek().cloned() {
                Some(Token {
                    tok: Tok::Close,
                    span,
                }) => {
                    self.pos += 1;
                    return Ok(RawNode {
                        var,
                        concept,
                        roles,
                        span: open.join(span),
                    });
                }
                Some(Token {
                    tok: Tok::Role(label),
                    span,
                }) => {
                    self.pos += 1;
                    let name = RoleName::from_label(&label).map_err(|e| ParseError::Lexical {
                        span,
                        message: e.to_string(),
                    })?;
                    let arg = match self.peek().cloned() {
                        Some(Token { tok: Tok::Open, .. }) => RawArg::Node(self.node(declared)?),
                        Some(Token {
                            tok: Tok::Symbol(s),
                            span,
                        }) => {
                            self.pos += 1;
                            RawArg::Symbol(s, span)
                        }
                        Some(Token {
                            tok: Tok::Str(s),
                            span,
                        }) => {
                            self.pos += 1;
                            RawArg::Str(s, span)
                        }
                        _ => return Err(ParseError::MissingArgument { role: label, span }),
                    };
                    roles.push((name, arg, span));
                }
                Some(t) => {
                    return Err(ParseError::Syntax {
                        span: t.span,
                        message: "expected a role or `)`".into(),
                    })
                }
                None => return Err(ParseError::Unbalanced { span: open }),
            }
        }
    }
}

fn resolve(raw: RawNode, declared: &BTreeMap<String, Span>) -> Result<AmrNode, ParseError> {
    let mut roles = Vec::with_capacity(raw.roles.len());
    for (name, arg, role_span) in raw.roles {
        let target = match arg {
            RawArg::Node(n) => resolve(n, declared)?,
            RawArg::Symbol(s, span) => {
                if declared.contains_key(&s) {
                    AmrNode::VarRef {
                        var: s,
                        span: Some(span),
                    }
                } else if is_constant_token(&s) {
                    AmrNode::Constant {
                        value: Constant::bare(s),
                        span: Some(span),
                    }
                } else {
                    return Err(ParseError::Lexical {
                        span,
                        message: format!("`{s}` is not a valid constant"),
                    });
                }
            }
            RawArg::Str(s, span) => AmrNode::Constant {
                value: Constant {
                    symbol: s,
                    quoted: true,
                },
                span: Some(span),
            },
        };
        let span = target.span().map_or(role_span, |s| role_span.join(s));
        roles.push(Role {
            name,
            target,
            span: Some(span),
        });
    }
    Ok(AmrNode::Instance(Instance {
        var: raw.var,
        concept: raw.concept,
        roles,
        span: Some(raw.span),
    }))
}

fn parse_one(parser: &mut Parser) -> Result<AmrNode, ParseError> {
    let mut declared = BTreeMap::new();
    let raw = parser.node(&mut declared)?;
    resolve(raw, &declared)
}

/// Parses exactly one rooted graph.
pub fn parse(text: &str) -> Result<AmrNode, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let graph = parse_one(&mut parser)?;
    match parser.peek() {
        None => Ok(graph),
        Some(Token {
            tok: Tok::Close,
            span,
        }) => Err(ParseError::Unbalanced { span: *span }),
        Some(t) => Err(ParseError::Syntax {
            span: t.span,
            message: "trailing input after the graph".into(),
        }),
    }
}

/// Parses a sequence of graphs, conventionally separated by blank lines.
/// Each graph has its own variable scope.
pub fn parse_many(text: &str) -> Result<Vec<AmrNode>, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let mut graphs = Vec::new();
    while parser.peek().is_some() {
        graphs.push(parse_one(&mut parser)?);
    }
    if graphs.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(graphs)
}

fn write_node(out: &mut String, node: &AmrNode, depth: usize, pretty: bool) {
    match node {
        AmrNode::Constant { value, .. } => out.push_str(&value.to_string()),
        AmrNode::VarRef { var, .. } => out.push_str(var),
        AmrNode::Instance(inst) => {
            out.push('(');
            out.push_str(&inst.var);
            out.push_str(" / ");
            out.push_str(&inst.concept);
            for role in &inst.roles {
                if pretty {
                    out.push('\n');
                    out.push_str(&"    ".repeat(depth + 1));
                } else {
                    out.push(' ');
                }
                out.push(':');
                out.push_str(&role.name.to_string());
                out.push(' ');
                write_node(out, &role.target, depth + 1, pretty);
            }
            out.push(')');
        }
    }
}

/// Indented Penman, one role per line.
pub fn print(graph: &AmrNode) -> String {
    let mut out = String::new();
    write_node(&mut out, graph, 0, true);
    out
}

/// Single-line Penman.
pub fn print_compact(graph: &AmrNode) -> String {
    let mut out = String::new();
    write_node(&mut out, graph, 0, false);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("normalizing inverse roles would orphan {var} from the root")]
    Orphan { var: String },
    #[error("inverse role :{role} on {var} points at a constant")]
    ConstantSource { role: String, var: String },
}

enum FlatTarget {
    Var(String, Option<Span>),
    Const(Constant, Option<Span>),
}

struct FlatEdge {
    name: RoleName,
    target: FlatTarget,
    span: Option<Span>,
}

#[derive(Clone, PartialEq)]
enum Home {
    Root,
    Edge { parent: String, index: usize },
    FirstMention,
}

struct FlatNode {
    concept: String,
    span: Option<Span>,
    home: Home,
}

#[derive(Default)]
struct Flat {
    order: Vec<String>,
    nodes: BTreeMap<String, FlatNode>,
    edges: BTreeMap<String, Vec<FlatEdge>>,
}

impl Flat {
    fn add(&mut self, inst: &Instance, home: Home) -> Result<(), NormalizeError> {
        self.order.push(inst.var.clone());
        self.nodes.insert(
            inst.var.clone(),
            FlatNode {
                concept: inst.concept.clone(),
                span: inst.span,
                home,
            },
        );
        self.edges.entry(inst.var.clone()).or_default();
        for role in &inst.roles {
            if role.name.is_inverted() {
                let Some(target) = role.target.variable() else {
                    return Err(NormalizeError::ConstantSource {
                        role: role.name.to_string(),
                        var: inst.var.clone(),
                    });
                };
                self.edges
                    .entry(target.to_string())
                    .or_default()
                    .push(FlatEdge {
                        name: role.name.inverse(),
                        target: FlatTarget::Var(inst.var.clone(), role.span),
                        span: role.span,
                    });
                if let AmrNode::Instance(child) = &role.target {
                    self.add(child, Home::FirstMention)?;
                }
            } else {
                let list = self.edges.entry(inst.var.clone()).or_default();
                let index = list.len();
                let target = match &role.target {
                    AmrNode::Constant { value, span } => FlatTarget::Const(value.clone(), *span),
                    AmrNode::VarRef { var, span } => FlatTarget::Var(var.clone(), *span),
                    AmrNode::Instance(child) => FlatTarget::Var(child.var.clone(), child.span),
                };
                list.push(FlatEdge {
                    name: role.name.clone(),
                    target,
                    span: role.span,
                });
                if let AmrNode::Instance(child) = &role.target {
                    self.add(
                        child,
                        Home::Edge {
                            parent: inst.var.clone(),
                            index,
                        },
                    )?;
                }
            }
        }
        Ok(())
    }

    fn build(&self, var: &str, emitted: &mut BTreeSet<String>) -> Instance {
        let node = &self.nodes[var];
        let mut roles = Vec::new();
        for (index, edge) in self.edges[var].iter().enumerate() {
            let target = match &edge.target {
                FlatTarget::Const(c, span) => AmrNode::Constant {
                    value: c.clone(),
                    span: *span,
                },
                FlatTarget::Var(t, span) => {
                    let declare_here = self.nodes.get(t).is_some_and(|n| match &n.home {
                        Home::Edge { parent, index: i } => parent == var && *i == index,
                        Home::FirstMention => true,
                        Home::Root => false,
                    });
                    if declare_here && !emitted.contains(t) {
                        emitted.insert(t.clone());
                        AmrNode::Instance(self.build(t, emitted))
                    } else {
                        AmrNode::VarRef {
                            var: t.clone(),
                            span: *span,
                        }
                    }
                }
            };
            roles.push(Role {
                name: edge.name.clone(),
                target,
                span: edge.span,
            });
        }
        Instance {
            var: var.to_string(),
            concept: node.concept.clone(),
            roles,
            span: node.span,
        }
    }
}

/// Re-expresses every `:R-of` edge as `:R` from the other end, moving
/// instance assignments to a reachable mention where needed. Instances that
/// keep a non-inverted parent edge stay where they were, so graphs without
/// inverse roles come back unchanged.
pub fn normalize_inverse_roles(graph: &AmrNode) -> Result<AmrNode, NormalizeError> {
    let AmrNode::Instance(root) = graph else {
        return Ok(graph.clone());
    };
    let mut flat = Flat::default();
    flat.add(root, Home::Root)?;

    // Everything must stay reachable from the root along normalized edges.
    let mut reached = BTreeSet::from([root.var.clone()]);
    let mut queue = VecDeque::from([root.var.clone()]);
    while let Some(v) = queue.pop_front() {
        for edge in flat.edges.get(&v).into_iter().flatten() {
            if let FlatTarget::Var(t, _) = &edge.target {
                if flat.nodes.contains_key(t) && reached.insert(t.clone()) {
                    queue.push_back(t.clone());
                }
            }
        }
    }
    if let Some(orphan) = flat.order.iter().find(|v| !reached.contains(*v)) {
        return Err(NormalizeError::Orphan {
            var: orphan.clone(),
        });
    }

    loop {
        let mut emitted = BTreeSet::from([root.var.clone()]);
        let rebuilt = flat.build(&root.var, &mut emitted);
        let missing: Vec<String> = flat
            .order
            .iter()
            .filter(|v| !emitted.contains(*v))
            .cloned()
            .collect();
        if missing.is_empty() {
            return Ok(AmrNode::Instance(rebuilt));
        }
        // A kept parent edge can hang below a relocated ancestor; let those
        // instances move to their first mention instead.
        for v in missing {
            flat.nodes.get_mut(&v).expect("declared").home = Home::FirstMention;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TripleArg {
    Var(String),
    Const(String),
}

impl fmt::Display for TripleArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleArg::Var(s) | TripleArg::Const(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Triple {
    Instance {
        var: String,
        concept: String,
    },
    Relation {
        role: String,
        source: TripleArg,
        target: TripleArg,
    },
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Triple::Instance { var, concept } => write!(f, "INSTANCE({var}, {concept})"),
            Triple::Relation {
                role,
                source,
                target,
            } => write!(f, "{role}({source}, {target})"),
        }
    }
}

fn arg_of(node: &AmrNode) -> TripleArg {
    match node {
        AmrNode::Constant { value, .. } => TripleArg::Const(value.to_string()),
        AmrNode::VarRef { var, .. } => TripleArg::Var(var.clone()),
        AmrNode::Instance(inst) => TripleArg::Var(inst.var.clone()),
    }
}

/// Logical triples in depth-first order: a child's `INSTANCE` triple comes
/// right before the edge that introduces it, then the child's own edges.
/// `:R-of` edges are emitted as `R` with the arguments swapped.
pub fn to_triples(graph: &AmrNode) -> Vec<Triple> {
    fn relations(inst: &Instance, out: &mut Vec<Triple>) {
        for role in &inst.roles {
            if let AmrNode::Instance(child) = &role.target {
                out.push(Triple::Instance {
                    var: child.var.clone(),
                    concept: child.concept.clone(),
                });
            }
            let here = TripleArg::Var(inst.var.clone());
            let there = arg_of(&role.target);
            let (source, target) = if role.name.is_inverted() {
                (there, here)
            } else {
                (here, there)
            };
            out.push(Triple::Relation {
                role: role.name.base().to_string(),
                source,
                target,
            });
            if let AmrNode::Instance(child) = &role.target {
                relations(child, out);
            }
        }
    }

    let mut out = Vec::new();
    if let AmrNode::Instance(inst) = graph {
        out.push(Triple::Instance {
            var: inst.var.clone(),
            concept: inst.concept.clone(),
        });
        relations(inst, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amr::validate;

    const HUG: &str = "(h / hug-01 :ARG0 (b / boy) :ARG1 (d / dog))";

    #[test]
    fn parses_the_hug_graph() {
        let g = parse(HUG).unwrap();
        let expected = AmrNode::instance("h", "hug-01")
            .with_role("ARG0", AmrNode::instance("b", "boy"))
            .with_role("ARG1", AmrNode::instance("d", "dog"));
        assert_eq!(g, expected);
        assert_eq!(g.span(), Some(Span::new(0, HUG.chars().count())));
    }

    #[test]
    fn simplex_instance() {
        assert_eq!(parse("(b / boy)").unwrap(), AmrNode::instance("b", "boy"));
        assert_eq!(print(&AmrNode::instance("b", "boy")), "(b / boy)");
    }

    #[test]
    fn content_reentrancy_is_a_varref() {
        let g = parse("(b / believe-01 :ARG0 (b2 / boy) :content (s / sick-05 :ARG1 b2))").unwrap();
        let s = &g.as_instance().unwrap().roles[1].target;
        let inner = &s.as_instance().unwrap().roles[0].target;
        assert!(matches!(inner, AmrNode::VarRef { var, .. } if var == "b2"));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse("(x / P :ARG0 (x / Q))"),
            Err(ParseError::DuplicateInstance { var, .. }) if var == "x"
        ));
        assert!(matches!(
            parse("(b / boy"),
            Err(ParseError::Unbalanced { .. })
        ));
        assert!(matches!(
            parse("(b / boy))"),
            Err(ParseError::Unbalanced { .. })
        ));
        assert!(matches!(
            parse("(b / boy :ARG0)"),
            Err(ParseError::MissingArgument { role, .. }) if role == "ARG0"
        ));
        assert!(matches!(
            parse("   # only a comment\n"),
            Err(ParseError::Empty)
        ));
        assert!(matches!(
            parse("(b / boy :ARG0 @)"),
            Err(ParseError::Lexical { span, .. }) if span == Span::new(15, 16)
        ));
        assert!(matches!(
            parse("(B / boy)"),
            Err(ParseError::Lexical { .. })
        ));
    }

    #[test]
    fn constants_and_variables_are_told_apart_by_declaration() {
        let g = parse(
            "(d / dance-01 :ARG0 (b / boy :quant every) :polarity - :mod 2 :name \"Al\" :ARG1 b)",
        )
        .unwrap();
        let inst = g.as_instance().unwrap();
        assert!(
            matches!(&inst.roles[1].target, AmrNode::Constant { value, .. } if value.symbol == "-")
        );
        assert!(
            matches!(&inst.roles[2].target, AmrNode::Constant { value, .. } if value.symbol == "2")
        );
        assert!(
            matches!(&inst.roles[3].target, AmrNode::Constant { value, .. } if value.quoted && value.symbol == "Al")
        );
        assert!(matches!(&inst.roles[4].target, AmrNode::VarRef { var, .. } if var == "b"));
        let b = inst.roles[0].target.as_instance().unwrap();
        assert!(
            matches!(&b.roles[0].target, AmrNode::Constant { value, .. } if value.symbol == "every")
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let g = parse("# the boy\n(b   /\tboy # trailing\n)").unwrap();
        assert_eq!(g, AmrNode::instance("b", "boy"));
    }

    #[test]
    fn prints_reentrancy_as_bare_variable() {
        let text = "(a / admire-01 :ARG0 (b / boy) :ARG1 b)";
        let g = parse(text).unwrap();
        assert_eq!(print_compact(&g), text);
        assert_eq!(
            print(&g),
            "(a / admire-01\n    :ARG0 (b / boy)\n    :ARG1 b)"
        );
        assert_eq!(parse(&print(&g)).unwrap(), g);
    }

    #[test]
    fn hug_prints_back() {
        let g = parse(HUG).unwrap();
        let squash = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
        assert_eq!(squash(&print(&g)), squash(HUG));
    }

    #[test]
    fn quoted_string_round_trip() {
        let g = parse(r#"(n / name :op1 "say \"hi\"")"#).unwrap();
        assert_eq!(parse(&print(&g)).unwrap(), g);
    }

    #[test]
    fn normalizes_the_freakshow_graph() {
        let inverted =
            parse("(b / believe-01 :ARG0 (b2 / boy :ARG1-of (s / sick-05)) :ARG1 s)").unwrap();
        let plain =
            parse("(b / believe-01 :ARG0 (b2 / boy) :ARG1 (s / sick-05 :ARG1 b2))").unwrap();
        let normalized = normalize_inverse_roles(&inverted).unwrap();
        let set = |g: &AmrNode| to_triples(g).into_iter().collect::<BTreeSet<_>>();
        assert_eq!(set(&normalized), set(&plain));
        assert_eq!(set(&inverted), set(&plain));
        assert!(validate(&normalized).is_valid());
        let mut any_inverted = false;
        normalized.walk(&mut |n| {
            if let AmrNode::Instance(i) = n {
                any_inverted |= i.roles.iter().any(|r| r.name.is_inverted());
            }
        });
        assert!(!any_inverted);
        assert_eq!(normalize_inverse_roles(&normalized).unwrap(), normalized);
    }

    #[test]
    fn normalization_is_identity_without_inverse_roles() {
        let g = parse("(a / admire-01 :ARG1 b :ARG0 (b / boy))").unwrap();
        assert_eq!(normalize_inverse_roles(&g).unwrap(), g);
    }

    #[test]
    fn normalization_reports_orphans() {
        let g = parse("(b / boy :ARG0-of (l / like-01 :ARG1 b))").unwrap();
        assert_eq!(
            normalize_inverse_roles(&g),
            Err(NormalizeError::Orphan { var: "l".into() })
        );
    }

    #[test]
    fn hug_triples() {
        let got: Vec<String> = to_triples(&parse(HUG).unwrap())
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(
            got,
            [
                "INSTANCE(h, hug-01)",
                "INSTANCE(b, boy)",
                "ARG0(h, b)",
                "INSTANCE(d, dog)",
                "ARG1(h, d)"
            ]
        );
        assert_eq!(
            to_triples(&parse("(b / boy)").unwrap()),
            vec![Triple::Instance {
                var: "b".into(),
                concept: "boy".into()
            }]
        );
    }
}
