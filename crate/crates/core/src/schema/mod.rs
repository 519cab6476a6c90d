//! Higher inductive type schemas: representation, validation and rule generation.

pub mod rules;
mod types;
pub mod validate;

use std::fmt;
use std::sync::OnceLock;

pub use rules::{generate_rules, BetaRule, Clause, RuleSet};
pub use types::*;
pub use validate::{validate_cells, validate_param_scheme, validate_schema};

use crate::surface::{parser::parse_module_in, ParseEnv, Span};
use crate::typeck::TypeError;

/// Source text of the builtin schema library.
pub const PRELUDE: &str = include_str!("prelude.hit");

/// The builtin schema library, parsed from [`PRELUDE`].
pub fn builtin_schemas() -> Vec<Schema> {
    static CACHE: OnceLock<Vec<Schema>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let m = parse_module_in("<prelude>", PRELUDE, &ParseEnv::empty())
                .expect("the builtin prelude parses");
            m.schemas().cloned().collect()
        })
        .clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemaErrorKind {
    ParamScheme,
    Positivity,
    FibrantStructure,
    BoundaryMismatch,
    UnsupportedDimension,
    DuplicateCell,
}

impl SchemaErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemaErrorKind::ParamScheme => "SchemaError",
            SchemaErrorKind::Positivity => "PositivityError",
            SchemaErrorKind::FibrantStructure => "FibrantStructureError",
            SchemaErrorKind::BoundaryMismatch => "BoundaryMismatch",
            SchemaErrorKind::UnsupportedDimension => "UnsupportedDimension",
            SchemaErrorKind::DuplicateCell => "DuplicateCell",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    pub kind: SchemaErrorKind,
    pub schema: String,
    /// Offending cell, if the error is about one.
    pub cell: Option<String>,
    /// Offending parameter index, for parameter scheme errors.
    pub entry: Option<usize>,
    pub message: String,
    pub cause: Option<TypeError>,
    pub span: Option<Span>,
}

impl SchemaError {
    pub fn new(kind: SchemaErrorKind, schema: &str, message: impl Into<String>) -> Self {
        SchemaError {
            kind,
            schema: schema.to_string(),
            cell: None,
            entry: None,
            message: message.into(),
            cause: None,
            span: None,
        }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for SchemaError {}

#[cfg(test)]
mod tests;
