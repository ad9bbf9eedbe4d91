//! Reads the ASCII term syntax back into typed terms.
//!
//! Binders may carry an annotation (`\w:s . ...`); otherwise their type comes
//! from the expected type. Constants are typed by a [`Lexicon`] when listed
//! there, and otherwise from the argument types of their application spine
//! together with the type the context expects (`t` when nothing is expected).
//! The unicode glyphs are accepted as synonyms.

use std::collections::BTreeMap;

use super::{Term, Type};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReadError {
    #[error("unexpected {found} at offset {offset}, expected {expected}")]
    Unexpected {
        offset: usize,
        found: String,
        expected: String,
    },
    #[error("cannot determine the type of `{0}`")]
    Underdetermined(String),
    #[error("`{name}` has type {actual} where {expected} is required")]
    Mismatch {
        name: String,
        expected: Type,
        actual: Type,
    },
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Type>,
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon::default()
    }

    pub fn with(mut self, name: impl Into<String>, ty: Type) -> Lexicon {
        self.entries.insert(name.into(), ty);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Type> {
        self.entries.get(name)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Exists,
    Dot,
    Colon,
    Arrow,
    LParen,
    RParen,
    And,
    True,
    Ident(String),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::End => "end of input".into(),
        other => format!("{other:?}"),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ReadError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let single = match c {
            '\\' | 'λ' => Some(Tok::Lambda),
            '∃' => Some(Tok::Exists),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '&' | '∧' => Some(Tok::And),
            '⊤' => Some(Tok::True),
            _ => None,
        };
        if c.is_whitespace() || c == ',' {
            i += 1;
            continue;
        }
        if let Some(tok) = single {
            out.push((off, tok));
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1).map(|p| p.1) == Some('>') {
            out.push((off, Tok::Arrow));
            i += 2;
            continue;
        }
        if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i].1) {
                // `->` ends an identifier
                if chars[i].1 == '-' && chars.get(i + 1).map(|p| p.1) == Some('>') {
                    break;
                }
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|p| p.1).collect();
            out.push((
                off,
                match word.as_str() {
                    "exists" => Tok::Exists,
                    "true" => Tok::True,
                    _ => Tok::Ident(word),
                },
            ));
            continue;
        }
        return Err(ReadError::Unexpected {
            offset: off,
            found: format!("`{c}`"),
            expected: "a term".into(),
        });
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '-' | '_' | '\'' | '+')
}

#[derive(Debug, Clone)]
enum Raw {
    Ident(String),
    Top,
    Lam(String, Option<Type>, Box<Raw>),
    Exists(Vec<String>, Box<Raw>),
    App(Box<Raw>, Box<Raw>),
    And(Box<Raw>, Box<Raw>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ReadError> {
        let (offset, tok) = &self.toks[self.pos];
        Err(ReadError::Unexpected {
            offset: *offset,
            found: describe(tok),
            expected: expected.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ReadError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn ident(&mut self) -> Result<String, ReadError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.fail("an identifier"),
        }
    }

    fn term(&mut self) -> Result<Raw, ReadError> {
        match self.peek() {
            Tok::Lambda => {
                self.next();
                let var = self.ident()?;
                let ann = if *self.peek() == Tok::Colon {
                    self.next();
                    Some(self.ty()?)
                } else {
                    None
                };
                self.expect(Tok::Dot, "`.`")?;
                Ok(Raw::Lam(var, ann, Box::new(self.term()?)))
            }
            Tok::Exists => {
                self.next();
                let mut vars = vec![self.ident()?];
                while let Tok::Ident(_) = self.peek() {
                    vars.push(self.ident()?);
                }
                self.expect(Tok::Dot, "`.`")?;
                Ok(Raw::Exists(vars, Box::new(self.term()?)))
            }
            _ => {
                let left = self.app()?;
                if *self.peek() == Tok::And {
                    self.next();
                    Ok(Raw::And(Box::new(left), Box::new(self.term()?)))
                } else {
                    Ok(left)
                }
            }
        }
    }

    fn app(&mut self) -> Result<Raw, ReadError> {
        let mut head = self.atom()?;
        while *self.peek() == Tok::LParen {
            self.next();
            let arg = self.term()?;
            self.expect(Tok::RParen, "`)`")?;
            head = Raw::App(Box::new(head), Box::new(arg));
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Raw, ReadError> {
        if *self.peek() == Tok::End {
            return self.fail("a term");
        }
        match self.next() {
            Tok::Ident(s) => Ok(Raw::Ident(s)),
            Tok::True => Ok(Raw::Top),
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => {
                self.pos -= 1;
                self.fail("a term")
            }
        }
    }

    fn ty(&mut self) -> Result<Type, ReadError> {
        if *self.peek() == Tok::End {
            return self.fail("a type");
        }
        let base = match self.next() {
            Tok::Ident(s) if s == "e" => Type::E,
            Tok::Ident(s) if s == "t" => Type::T,
            Tok::Ident(s) if s == "s" => Type::S,
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                t
            }
            _ => {
                self.pos -= 1;
                return self.fail("a type");
            }
        };
        if *self.peek() == Tok::Arrow {
            self.next();
            Ok(Type::arrow(base, self.ty()?))
        } else {
            Ok(base)
        }
    }
}

struct Elaborator<'a> {
    lexicon: &'a Lexicon,
    env: Vec<(String, Type)>,
}

fn check_against(name: &str, actual: Type, expected: Option<&Type>) -> Result<Type, ReadError> {
    match expected {
        Some(exp) if *exp != actual => Err(ReadError::Mismatch {
            name: name.into(),
            expected: exp.clone(),
            actual,
        }),
        _ => Ok(actual),
    }
}

impl Elaborator<'_> {
    fn known(&self, name: &str) -> Option<Term> {
        if let Some((_, ty)) = self.env.iter().rev().find(|(n, _)| n == name) {
            return Some(Term::var(name, ty.clone()));
        }
        self.lexicon
            .get(name)
            .map(|ty| Term::constant(name, ty.clone()))
    }

    fn elab(&mut self, raw: &Raw, expected: Option<&Type>) -> Result<Term, ReadError> {
        match raw {
            Raw::Top => {
                check_against("true", Type::T, expected)?;
                Ok(Term::Top)
            }
            Raw::And(l, r) => {
                check_against("&", Type::T, expected)?;
                let l = self.elab(l, Some(&Type::T))?;
                let r = self.elab(r, Some(&Type::T))?;
                Ok(l.and(r))
            }
            Raw::Exists(vars, body) => {
                check_against("exists", Type::T, expected)?;
                for v in vars {
                    self.env.push((v.clone(), Type::E));
                }
                let body = self.elab(body, Some(&Type::T));
                self.env.truncate(self.env.len() - vars.len());
                Ok(Term::exists_all(vars.clone(), body?))
            }
            Raw::Lam(var, ann, body) => {
                let (param, result) = match (ann, expected) {
                    (Some(a), Some(Type::Arrow(from, to))) => {
                        if a != from.as_ref() {
                            return Err(ReadError::Mismatch {
                                name: var.clone(),
                                expected: (**from).clone(),
                                actual: a.clone(),
                            });
                        }
                        (a.clone(), Some((**to).clone()))
                    }
                    (Some(a), None) => (a.clone(), None),
                    (None, Some(Type::Arrow(from, to))) => ((**from).clone(), Some((**to).clone())),
                    (_, Some(other)) => {
                        return Err(ReadError::Mismatch {
                            name: format!("\\{var}"),
                            expected: other.clone(),
                            actual: Type::arrow(Type::E, Type::T),
                        })
                    }
                    (None, None) => return Err(ReadError::Underdetermined(format!("\\{var}"))),
                };
                self.env.push((var.clone(), param.clone()));
                let body = self.elab(body, result.as_ref());
                self.env.pop();
                Ok(Term::lam(var.clone(), param, body?))
            }
            Raw::Ident(name) => match self.known(name) {
                Some(t) => {
                    let ty = super::type_of(&t).expect("atom");
                    check_against(name, ty, expected)?;
                    Ok(t)
                }
                None => match expected {
                    Some(ty) => Ok(Term::constant(name.clone(), ty.clone())),
                    None => Err(ReadError::Underdetermined(name.clone())),
                },
            },
            Raw::App(..) => self.elab_spine(raw, expected),
        }
    }

    fn elab_spine(&mut self, raw: &Raw, expected: Option<&Type>) -> Result<Term, ReadError> {
        let mut args = Vec::new();
        let mut head = raw;
        while let Raw::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        let head_term = match head {
            Raw::Ident(name) => self.known(name),
            Raw::Lam(_, Some(_), _) | Raw::App(..) => Some(self.elab(head, None)?),
            _ => None,
        };
        match head_term {
            Some(h) => {
                let mut ty = super::type_of(&h)
                    .map_err(|_| ReadError::Underdetermined(describe_raw(head)))?;
                let mut out = h;
                for arg in args {
                    let (from, to) = match ty {
                        Type::Arrow(from, to) => (*from, *to),
                        other => {
                            return Err(ReadError::Mismatch {
                                name: describe_raw(head),
                                expected: Type::arrow(Type::E, Type::T),
                                actual: other,
                            })
                        }
                    };
                    let a = self.elab(arg, Some(&from))?;
                    out = out.app(a);
                    ty = to;
                }
                check_against(&describe_raw(head), ty, expected)?;
                Ok(out)
            }
            None => {
                let Raw::Ident(name) = head else {
                    return Err(ReadError::Underdetermined(describe_raw(head)));
                };
                let result = expected.cloned().unwrap_or(Type::T);
                let mut elaborated = Vec::new();
                for arg in args {
                    elaborated.push(self.elab(arg, None)?);
                }
                let mut param_types = Vec::new();
                for a in &elaborated {
                    param_types.push(
                        super::type_of(a).map_err(|_| ReadError::Underdetermined(name.clone()))?,
                    );
                }
                let head_ty = Type::function(param_types, result);
                Ok(Term::constant(name.clone(), head_ty).apply(elaborated))
            }
        }
    }
}

fn describe_raw(raw: &Raw) -> String {
    match raw {
        Raw::Ident(s) => s.clone(),
        Raw::Lam(v, ..) => format!("\\{v}"),
        _ => "term".into(),
    }
}

/// Parses `src` and elaborates it against `expected` when given.
pub fn read_term(src: &str, expected: Option<&Type>, lexicon: &Lexicon) -> Result<Term, ReadError> {
    let mut parser = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let raw = parser.term()?;
    if *parser.peek() != Tok::End {
        return parser.fail("end of input");
    }
    Elaborator {
        lexicon,
        env: Vec::new(),
    }
    .elab(&raw, expected)
}

/// Parses a type such as `(e -> t) -> t`.
pub fn read_type(src: &str) -> Result<Type, ReadError> {
    let mut parser = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let ty = parser.ty()?;
    if *parser.peek() != Tok::End {
        return parser.fail("end of input");
    }
    Ok(ty)
}
