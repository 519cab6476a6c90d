//! Set-level semantics: closed types denote finite sets, identity types are
//! diagonals, and schema instances denote quotient inductive sets built by
//! fueled saturation.

mod eliminate;
mod eval;
mod initiality;
mod saturate;
mod value;

use std::fmt;

pub use eliminate::Methods;
pub use eval::{to_value, Algebra, Model, Scope, Sem, This, MAX_SET};
pub use initiality::{FinAlgebra, InitialityReport, MAX_CANDIDATES};
pub use saturate::{Carrier, RoundStats, Status, Tree, UnionFind, DEFAULT_ROUNDS, MAX_TREES};
pub use value::{finset, literal_element, match_literal, FinSet, ParamSem, ParamVal, Value};

use crate::schema::{ParamKind, Schema};
use crate::surface::Literal;
use crate::syntax::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelErrorKind {
    InfiniteType,
    Unbound,
    NotAType,
    NotATerm,
    NonCanonical,
    /// A constructor tuple that saturation has not reached yet.
    Missing,
    Coherence,
    NotInitial,
    TooLarge,
    BadLiteral,
}

impl ModelErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelErrorKind::InfiniteType => "InfiniteType",
            ModelErrorKind::Unbound => "UnboundParam",
            ModelErrorKind::NotAType => "NotAType",
            ModelErrorKind::NotATerm => "NotATerm",
            ModelErrorKind::NonCanonical => "NonCanonical",
            ModelErrorKind::Missing => "NonCanonical",
            ModelErrorKind::Coherence => "CoherenceError",
            ModelErrorKind::NotInitial => "NotInitial",
            ModelErrorKind::TooLarge => "TooLarge",
            ModelErrorKind::BadLiteral => "BadLiteral",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelError {
    pub kind: ModelErrorKind,
    pub message: String,
}

impl ModelError {
    pub fn new(kind: ModelErrorKind, message: impl Into<String>) -> Self {
        ModelError {
            kind,
            message: message.into(),
        }
    }
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for ModelError {}

pub type MResult<T> = Result<T, ModelError>;

fn bad<T>(msg: impl Into<String>) -> MResult<T> {
    Err(ModelError::new(ModelErrorKind::BadLiteral, msg))
}

fn key_matches(lit: &Literal, key: &[Value]) -> bool {
    match (lit, key) {
        (Literal::Tuple(xs), _) if key.len() > 1 => {
            xs.len() == key.len()
                && xs
                    .iter()
                    .zip(key)
                    .all(|(l, v)| l.to_string() == v.to_string())
        }
        (l, [v]) => l.to_string() == v.to_string(),
        _ => false,
    }
}

/// Parameter values of a schema instance given by finite-set literals.
pub fn env_from_literals(
    m: &Model<'_>,
    schema: &Schema,
    lits: &[Literal],
) -> MResult<Vec<ParamVal>> {
    if lits.len() != schema.params.len() {
        return bad(format!(
            "{} takes {} parameters, {} given",
            schema.name,
            schema.params.len(),
            lits.len()
        ));
    }
    let mut vals: Vec<ParamVal> = Vec::new();
    for (e, lit) in schema.params.entries.iter().zip(lits) {
        let prior = vals.clone();
        let psc = Scope {
            params: &prior,
            vars: vec![],
            this: None,
        };
        let ext: Vec<Term> = e.ext.iter().map(|(_, t)| t.clone()).collect();
        let tuples = m.enumerate(&psc, &ext)?;
        let one = |lit: &Literal, tup: &[Value]| -> MResult<ParamSem> {
            match &e.kind {
                ParamKind::Type => match lit {
                    Literal::Set(xs) => {
                        let els = xs
                            .iter()
                            .map(|x| literal_element(x).ok_or(()))
                            .collect::<Result<Vec<_>, ()>>();
                        match els {
                            Ok(els) => {
                                let n = els.len();
                                let set = finset(els);
                                if set.len() != n {
                                    return bad(format!(
                                        "finset for {} lists an element twice",
                                        e.name
                                    ));
                                }
                                Ok(ParamSem::Set(set))
                            }
                            Err(()) => {
                                bad(format!("elements of {} must be names or tuples", e.name))
                            }
                        }
                    }
                    other => bad(format!(
                        "{} is a type parameter; expected a finset, found {other}",
                        e.name
                    )),
                },
                ParamKind::Term(ty) => {
                    let set = m.eval_type(&psc.with_values(tup), ty)?;
                    match match_literal(lit, &set) {
                        Some(v) => Ok(ParamSem::Elem(v)),
                        None => bad(format!("{lit} is not an element of the type of {}", e.name)),
                    }
                }
            }
        };
        let mut rows = Vec::new();
        if ext.is_empty() {
            rows.push((vec![], one(lit, &[])?));
        } else {
            let entries = match (lit, &e.kind) {
                (Literal::Family(rows), ParamKind::Type) => rows,
                (Literal::Map(rows), ParamKind::Term(_)) => rows,
                (other, ParamKind::Type) => {
                    return bad(format!("{} needs a family literal, found {other}", e.name))
                }
                (other, _) => {
                    return bad(format!("{} needs a finmap literal, found {other}", e.name))
                }
            };
            for (k, _) in entries {
                if !tuples.iter().any(|t| key_matches(k, t)) {
                    return bad(format!("{k} is not in the domain of {}", e.name));
                }
            }
            for tup in &tuples {
                let hits: Vec<_> = entries
                    .iter()
                    .filter(|(k, _)| key_matches(k, tup))
                    .collect();
                match hits.as_slice() {
                    [(_, v)] => rows.push((tup.clone(), one(v, tup)?)),
                    [] => {
                        let shown: Vec<String> = tup.iter().map(|v| v.to_string()).collect();
                        return bad(format!(
                            "{} is missing a value at ({})",
                            e.name,
                            shown.join(", ")
                        ));
                    }
                    _ => return bad(format!("{} has several values at one point", e.name)),
                }
            }
        }
        rows.sort();
        vals.push(ParamVal { rows });
    }
    Ok(vals)
}
