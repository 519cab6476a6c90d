//! A small dependent type theory kernel with identity types, dependent
//! identity types and a generic engine for higher inductive type schemas,
//! plus a finite-set model used to evaluate schema instances.

// Errors carry spans and rendered terms; boxing them would only move the cost.
#![allow(clippy::result_large_err)]

pub mod driver;
pub mod model;
pub mod report;
pub mod schema;
pub mod surface;
pub mod syntax;
pub mod typeck;

pub use schema::{builtin_schemas, Schema};
pub use surface::{parse_module, pretty::pretty_print, Module};
pub use syntax::{alpha_equal, Abs, Context, Substitution, Term};
pub use typeck::{Checker, Signature, TypeError};
