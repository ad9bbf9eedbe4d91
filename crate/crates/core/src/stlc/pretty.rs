use serde_json::{json, Value};

use super::{Term, Type, TypeError};

struct Glyphs {
    lambda: &'static str,
    exists: &'static str,
    and: &'static str,
    top: &'static str,
}

const ASCII: Glyphs = Glyphs {
    lambda: "\\",
    exists: "exists ",
    and: " & ",
    top: "true",
};

const UNICODE: Glyphs = Glyphs {
    lambda: "λ",
    exists: "∃",
    and: " ∧ ",
    top: "⊤",
};

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Open,
    AndLeft,
    Head,
}

pub fn pretty(term: &Term) -> String {
    let mut out = String::new();
    render(term, Slot::Open, &ASCII, &mut out);
    out
}

pub fn pretty_unicode(term: &Term) -> String {
    let mut out = String::new();
    render(term, Slot::Open, &UNICODE, &mut out);
    out
}

fn render(t: &Term, slot: Slot, g: &Glyphs, out: &mut String) {
    let wrap = match t {
        Term::Lam { .. } | Term::Exists { .. } | Term::And(..) => slot != Slot::Open,
        Term::Top => slot == Slot::Head,
        _ => false,
    };
    if wrap {
        out.push('(');
    }
    match t {
        Term::Const { name, .. } | Term::Var { name, .. } => out.push_str(name),
        Term::Top => out.push_str(g.top),
        Term::Lam { var, body, .. } => {
            out.push_str(g.lambda);
            out.push_str(var);
            out.push_str(" . ");
            render(body, Slot::Open, g, out);
        }
        Term::Exists { .. } => {
            out.push_str(g.exists);
            let mut cur = t;
            let mut first = true;
            while let Term::Exists { var, body } = cur {
                if !first {
                    out.push(' ');
                }
                out.push_str(var);
                first = false;
                cur = body;
            }
            out.push_str(" . ");
            render(cur, Slot::Open, g, out);
        }
        Term::And(l, r) => {
            render(l, Slot::AndLeft, g, out);
            out.push_str(g.and);
            render(r, Slot::Open, g, out);
        }
        Term::App(f, a) => {
            render(f, Slot::Head, g, out);
            out.push('(');
            render(a, Slot::Open, g, out);
            out.push(')');
        }
    }
    if wrap {
        out.push(')');
    }
}

/// JSON tree with `kind`, `type` and `children` on every node.
pub fn to_json(term: &Term) -> Result<Value, TypeError> {
    fn go(t: &Term, env: &mut Vec<(String, Type)>) -> Result<(Value, Type), TypeError> {
        let (node, ty) = match t {
            Term::Const { name, ty } => (
                json!({"kind": "const", "name": name, "children": []}),
                ty.clone(),
            ),
            Term::Var { name, ty } => (
                json!({"kind": "var", "name": name, "children": []}),
                ty.clone(),
            ),
            Term::Top => (json!({"kind": "top", "children": []}), Type::T),
            Term::Lam { var, ty, body } => {
                env.push((var.clone(), ty.clone()));
                let inner = go(body, env);
                env.pop();
                let (child, body_ty) = inner?;
                (
                    json!({"kind": "lam", "var": var, "var_type": ty.to_string(), "children": [child]}),
                    Type::arrow(ty.clone(), body_ty),
                )
            }
            Term::Exists { var, body } => {
                env.push((var.clone(), Type::E));
                let inner = go(body, env);
                env.pop();
                let (child, _) = inner?;
                (
                    json!({"kind": "exists", "var": var, "children": [child]}),
                    Type::T,
                )
            }
            Term::And(l, r) => {
                let (lv, _) = go(l, env)?;
                let (rv, _) = go(r, env)?;
                (json!({"kind": "and", "children": [lv, rv]}), Type::T)
            }
            Term::App(f, a) => {
                let (fv, fty) = go(f, env)?;
                let (av, _) = go(a, env)?;
                let result = match fty {
                    Type::Arrow(_, to) => *to,
                    _ => return Err(super::type_of(t).unwrap_err()),
                };
                (json!({"kind": "app", "children": [fv, av]}), result)
            }
        };
        let mut node = node;
        node["type"] = Value::String(ty.to_string());
        Ok((node, ty))
    }
    super::type_of(term)?;
    go(term, &mut Vec::new()).map(|(v, _)| v)
}
