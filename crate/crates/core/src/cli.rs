//! Command-line front end. [`run`] does all the work and returns what to
//! print; the binary only forwards it.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::amr::{AmrNode, Span};
use crate::evaluator::{entails, EnumerationBound, EvalError, Verdict};
use crate::penman::{parse, parse_many, to_triples, ParseError};
use crate::scope::{derive_reading, DeterminerError, DeterminerTable};
use crate::stlc::{pretty, pretty_unicode, to_json, type_of, Term};
use crate::translate::{translate_ext_closed, translate_int_closed, Regime, TranslateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Extensional translation, existentially closed
    Ext,
    /// Intensional translation with `:content`
    Int,
    /// Cooper storage, extensional
    ScopeExt,
    /// Cooper storage, intensional
    ScopeInt,
    /// Logical triples
    Triples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Json,
}

/// Translate Penman AMR into simply-typed lambda terms and check bounded
/// entailment between translations.
#[derive(Debug, Clone, Parser)]
#[command(name = "amr-intens", version)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value = "ext")]
    pub mode: Mode,

    #[arg(long, value_enum, default_value = "ascii")]
    pub format: Format,

    /// Check whether the first graph's translation entails the second's
    #[arg(long, num_args = 2, value_names = ["PREMISE", "CONCLUSION"], conflicts_with_all = ["input", "batch"])]
    pub entails: Option<Vec<PathBuf>>,

    /// Largest number of worlds tried by --entails
    #[arg(long, default_value_t = 2)]
    pub worlds: usize,

    /// Largest number of individuals tried by --entails
    #[arg(long, default_value_t = 3)]
    pub individuals: usize,

    /// World at which formulas are evaluated (`w0`, `w1`, ...); default `w0`
    #[arg(long)]
    pub actual: Option<String>,

    /// Render with λ, ∃ and ∧
    #[arg(long)]
    pub unicode: bool,

    /// Accept several graphs separated by blank lines
    #[arg(long)]
    pub batch: bool,

    /// Penman file; standard input when absent
    pub input: Option<PathBuf>,

    /// Determiner overrides: inline JSON or a path to a JSON file
    #[arg(skip)]
    pub determiners: Option<String>,
}

impl RunConfig {
    pub fn new(mode: Mode) -> RunConfig {
        RunConfig::parse_from([
            "amr-intens",
            "--mode",
            mode.to_possible_value().unwrap().get_name(),
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Determiners(#[from] DeterminerError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Io { .. } | Failure::Parse(_) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Io { .. } => "io",
            Failure::Parse(_) => "parse",
            Failure::Translate(_) => "translate",
            Failure::Determiners(_) => "determiners",
            Failure::Eval(_) => "eval",
            Failure::Usage(_) => "usage",
        }
    }

    fn span(&self) -> Option<Span> {
        match self {
            Failure::Parse(e) => e.span(),
            Failure::Translate(e) => e.span(),
            _ => None,
        }
    }
}

/// 1-based line and column of a byte offset.
fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let before = &source[..offset.min(source.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// A failure with the input it arose in, when there is one.
type Failed = Box<(Failure, Option<Source>)>;

struct Source {
    name: String,
    text: String,
}

fn read_source(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<Source, Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map(|text| Source {
                name: p.display().to_string(),
                text,
            })
            .map_err(|source| Failure::Io {
                path: p.display().to_string(),
                source,
            }),
        None => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|source| Failure::Io {
                    path: "<stdin>".into(),
                    source,
                })?;
            Ok(Source {
                name: "<stdin>".into(),
                text,
            })
        }
    }
}

fn regime_of(mode: Mode) -> Regime {
    match mode {
        Mode::Int | Mode::ScopeInt => Regime::Intensional,
        _ => Regime::Extensional,
    }
}

fn formula(mode: Mode, graph: &AmrNode, table: &DeterminerTable) -> Result<Term, Failure> {
    Ok(match mode {
        Mode::Ext => translate_ext_closed(graph)?,
        Mode::Int => translate_int_closed(graph)?,
        Mode::ScopeExt | Mode::ScopeInt => derive_reading(graph, regime_of(mode), table)?,
        Mode::Triples => return Err(Failure::Usage("triples mode yields no formula".into())),
    })
}

struct Runner<'c> {
    config: &'c RunConfig,
    table: DeterminerTable,
}

impl Runner<'_> {
    fn render(&self, term: &Term) -> String {
        if self.config.unicode {
            pretty_unicode(term)
        } else {
            pretty(term)
        }
    }

    fn formula_json(&self, term: &Term) -> Value {
        json!({
            "formula": self.render(term),
            "type": type_of(term).map(|t| t.to_string()).unwrap_or_default(),
            "term": to_json(term).unwrap_or(Value::Null),
        })
    }

    /// One graph's output, as text and as JSON.
    fn item(&self, graph: &AmrNode) -> Result<(String, Value), Failure> {
        if self.config.mode == Mode::Triples {
            let triples: Vec<String> = to_triples(graph).iter().map(|t| t.to_string()).collect();
            let text = triples.iter().map(|t| format!("{t}\n")).collect();
            return Ok((text, json!({ "triples": triples })));
        }
        let term = formula(self.config.mode, graph, &self.table)?;
        Ok((
            format!("{}\n", self.render(&term)),
            self.formula_json(&term),
        ))
    }

    fn translate(&self, stdin: &mut dyn Read) -> Result<String, Failed> {
        let source =
            read_source(self.config.input.as_ref(), stdin).map_err(|e| Box::new((e, None)))?;
        let graphs = if self.config.batch {
            parse_many(&source.text)
        } else {
            parse(&source.text).map(|g| vec![g])
        };
        let graphs = match graphs {
            Ok(g) => g,
            Err(e) => return Err(Box::new((e.into(), Some(source)))),
        };
        let mut items = Vec::new();
        for g in &graphs {
            match self.item(g) {
                Ok(item) => items.push(item),
                Err(e) => return Err(Box::new((e, Some(source)))),
            }
        }
        Ok(match (self.config.format, self.config.batch) {
            (Format::Json, true) => {
                let values: Vec<Value> = items.into_iter().map(|(_, v)| v).collect();
                format!("{}\n", serde_json::to_string_pretty(&values).unwrap())
            }
            (Format::Json, false) => {
                format!("{}\n", serde_json::to_string_pretty(&items[0].1).unwrap())
            }
            (Format::Ascii, _) => {
                let sep = if self.config.mode == Mode::Triples {
                    "\n"
                } else {
                    ""
                };
                items
                    .into_iter()
                    .map(|(t, _)| t)
                    .collect::<Vec<_>>()
                    .join(sep)
            }
        })
    }

    fn actual_world(&self) -> Result<usize, Failure> {
        let Some(name) = &self.config.actual else {
            return Ok(0);
        };
        name.strip_prefix('w').unwrap_or(name).parse().map_err(|_| {
            Failure::Usage(format!(
                "bad world identifier {name:?}; expected w0, w1, ..."
            ))
        })
    }

    fn entail(&self, files: &[PathBuf]) -> Result<String, Failed> {
        let mut terms = Vec::new();
        for path in files {
            let source =
                read_source(Some(path), &mut std::io::empty()).map_err(|e| Box::new((e, None)))?;
            let result = parse(&source.text)
                .map_err(Failure::from)
                .and_then(|g| formula(self.config.mode, &g, &self.table));
            match result {
                Ok(t) => terms.push(t),
                Err(e) => return Err(Box::new((e, Some(source)))),
            }
        }
        let actual = self.actual_world().map_err(|e| Box::new((e, None)))?;
        let bound = EnumerationBound::new(self.config.worlds, self.config.individuals);
        let verdict = entails(&terms[0], &terms[1], &bound, actual, &self.table)
            .map_err(|e| Box::new((e.into(), None)))?;
        Ok(match self.config.format {
            Format::Json => {
                let mut out = json!({
                    "premise": self.formula_json(&terms[0]),
                    "conclusion": self.formula_json(&terms[1]),
                    "bound": {"worlds": bound.worlds, "individuals": bound.individuals},
                    "actual": format!("w{actual}"),
                });
                match &verdict {
                    Verdict::EntailedWithinBound { .. } => {
                        out["verdict"] = json!("entailed-within-bound");
                    }
                    Verdict::Counterexample { model, .. } => {
                        out["verdict"] = json!("counterexample");
                        out["model"] = model.to_json();
                    }
                }
                format!("{}\n", serde_json::to_string_pretty(&out).unwrap())
            }
            Format::Ascii => {
                let mut out = format!(
                    "premise: {}\nconclusion: {}\n",
                    self.render(&terms[0]),
                    self.render(&terms[1])
                );
                match &verdict {
                    Verdict::EntailedWithinBound { worlds, individuals } => out.push_str(&format!(
                        "verdict: entailed within bound ({worlds} worlds, {individuals} individuals)\n"
                    )),
                    Verdict::Counterexample { model, actual } => {
                        out.push_str(&format!("verdict: counterexample at w{actual}\n"));
                        out.push_str(&serde_json::to_string_pretty(&model.to_json()).unwrap());
                        out.push('\n');
                    }
                }
                out
            }
        })
    }

    fn report(&self, failure: &Failure, source: Option<&Source>) -> String {
        let located = failure
            .span()
            .zip(source)
            .map(|(span, src)| (span, src, line_col(&src.text, span.start)));
        match self.config.format {
            Format::Json => {
                let span = located.map(|(span, src, (line, column))| {
                    json!({"file": src.name, "start": span.start, "end": span.end, "line": line, "column": column})
                });
                let body = json!({"error": {
                    "kind": failure.kind(),
                    "message": failure.to_string(),
                    "span": span,
                }});
                format!("{}\n", serde_json::to_string_pretty(&body).unwrap())
            }
            Format::Ascii => match located {
                Some((_, src, (line, column))) => {
                    format!("error: {failure}\n  --> {}:{line}:{column}\n", src.name)
                }
                None => format!("error: {failure}\n"),
            },
        }
    }
}

/// Runs one invocation. Nothing is written to `stdout` unless the whole run
/// succeeds. Exit codes: 0 success, 1 translation or evaluation error, 2
/// unreadable or unparsable input.
pub fn run(config: &RunConfig, stdin: &mut dyn Read) -> RunOutcome {
    let table = match config.determiners.as_deref() {
        Some(setting) => DeterminerTable::from_setting(setting),
        None => Ok(DeterminerTable::standard()),
    };
    let runner = Runner {
        config,
        table: DeterminerTable::standard(),
    };
    let result = match table {
        Err(e) => Err(Box::new((Failure::from(e), None))),
        Ok(table) => {
            let runner = Runner { config, table };
            match &config.entails {
                Some(files) => runner.entail(files),
                None => runner.translate(stdin),
            }
        }
    };
    match result {
        Ok(stdout) => RunOutcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(failed) => {
            let (failure, source) = *failed;
            RunOutcome {
                code: failure.code(),
                stdout: String::new(),
                stderr: runner.report(&failure, source.as_ref()),
            }
        }
    }
}
