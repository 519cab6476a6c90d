//! The textual surface language: lexing, parsing into core syntax, and
//! printing core syntax back.

pub mod lexer;
pub mod parser;
pub mod pretty;

use std::fmt;

use serde::Serialize;

use crate::schema::Schema;
use crate::syntax::Term;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Span {
    pub file: String,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl Span {
    pub fn new(
        file: &str,
        start_line: usize,
        start_col: usize,
        end_line: usize,
        end_col: usize,
    ) -> Self {
        Span {
            file: file.to_string(),
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }

    pub fn to(&self, other: &Span) -> Span {
        Span {
            file: self.file.clone(),
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start_line, self.start_col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Scope,
    Duplicate,
}

impl ParseErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "SyntaxError",
            ParseErrorKind::Scope => "ScopeError",
            ParseErrorKind::Duplicate => "DuplicateName",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, span: Span, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A finite-set literal used to instantiate schema parameters in `eval` items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    /// A bare element, written as an identifier or a number.
    Atom(String),
    Tuple(Vec<Literal>),
    Set(Vec<Literal>),
    Map(Vec<(Literal, Literal)>),
    Family(Vec<(Literal, Literal)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalRequest {
    pub name: String,
    pub schema: String,
    pub params: Vec<Literal>,
    pub fuel: Option<usize>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub ty: Term,
    pub body: Term,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Def(Definition),
    Schema(Schema),
    Eval(EvalRequest),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Module {
    pub items: Vec<Item>,
}

impl Module {
    pub fn schemas(&self) -> impl Iterator<Item = &Schema> {
        self.items.iter().filter_map(|i| match i {
            Item::Schema(s) => Some(s),
            _ => None,
        })
    }

    pub fn defs(&self) -> impl Iterator<Item = &Definition> {
        self.items.iter().filter_map(|i| match i {
            Item::Def(d) => Some(d),
            _ => None,
        })
    }

    pub fn evals(&self) -> impl Iterator<Item = &EvalRequest> {
        self.items.iter().filter_map(|i| match i {
            Item::Eval(e) => Some(e),
            _ => None,
        })
    }
}

/// Names visible to a module before its first item.
#[derive(Clone, Debug, Default)]
pub struct ParseEnv {
    pub schemas: Vec<Schema>,
    pub defs: Vec<String>,
}

impl ParseEnv {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The environment holding the builtin schema library.
    pub fn prelude() -> Self {
        ParseEnv {
            schemas: crate::schema::builtin_schemas(),
            defs: vec![],
        }
    }
}

/// Parses a module against the builtin schema library.
pub fn parse_module(text: &str) -> Result<Module, ParseError> {
    parser::parse_module_in("<input>", text, &ParseEnv::prelude())
}

pub use parser::{parse_module_in, parse_term, parse_term_with_params};
