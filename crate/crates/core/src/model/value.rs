use std::fmt;

use crate::surface::Literal;

/// A canonical semantic value. Functions are stored as sorted tables so that
/// values can be compared and used as keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Star,
    Nat(u64),
    Atom(String),
    Pair(Box<Value>, Box<Value>),
    Inl(Box<Value>),
    Inr(Box<Value>),
    Table(Vec<(Value, Value)>),
    /// The unique inhabitant of an inhabited identity type.
    Refl,
    /// A class of a carrier: carrier id and least tree index of the class.
    Class(usize, usize),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn lookup(&self, key: &Value) -> Option<&Value> {
        match self {
            Value::Table(rows) => rows
                .binary_search_by(|(k, _)| k.cmp(key))
                .ok()
                .map(|i| &rows[i].1),
            _ => None,
        }
    }

    /// Rewrites every class reference with `f`, keeping tables sorted.
    pub fn map_classes(&self, f: &mut impl FnMut(usize, usize) -> Value) -> Value {
        match self {
            Value::Class(c, i) => f(*c, *i),
            Value::Pair(a, b) => Value::pair(a.map_classes(f), b.map_classes(f)),
            Value::Inl(a) => Value::Inl(Box::new(a.map_classes(f))),
            Value::Inr(a) => Value::Inr(Box::new(a.map_classes(f))),
            Value::Table(rows) => {
                let mut rows: Vec<_> = rows
                    .iter()
                    .map(|(k, v)| (k.map_classes(f), v.map_classes(f)))
                    .collect();
                rows.sort();
                rows.dedup_by(|a, b| a.0 == b.0);
                Value::Table(rows)
            }
            v => v.clone(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Star => write!(f, "star"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Atom(s) => write!(f, "{s}"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Inl(a) => write!(f, "inl {a}"),
            Value::Inr(a) => write!(f, "inr {a}"),
            Value::Table(rows) => {
                write!(f, "{{")?;
                for (i, (k, v)) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k} |-> {v}")?;
                }
                write!(f, "}}")
            }
            Value::Refl => write!(f, "refl"),
            Value::Class(c, i) => write!(f, "#{c}.{i}"),
        }
    }
}

/// A finite set, listed in canonical order without duplicates.
pub type FinSet = Vec<Value>;

pub fn finset(mut v: Vec<Value>) -> FinSet {
    v.sort();
    v.dedup();
    v
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParamSem {
    Set(FinSet),
    Elem(Value),
}

/// The value of one parameter: a table from its extension tuples to a set
/// (type parameters) or an element (term parameters). Parameters without an
/// extension have exactly one row, keyed by the empty tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParamVal {
    pub rows: Vec<(Vec<Value>, ParamSem)>,
}

impl ParamVal {
    pub fn constant(s: ParamSem) -> Self {
        ParamVal {
            rows: vec![(vec![], s)],
        }
    }

    pub fn get(&self, key: &[Value]) -> Option<&ParamSem> {
        self.rows
            .binary_search_by(|(k, _)| k.as_slice().cmp(key))
            .ok()
            .map(|i| &self.rows[i].1)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, xs: &[Literal]| -> fmt::Result {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        };
        match self {
            Literal::Atom(s) => write!(f, "{s}"),
            Literal::Tuple(xs) => {
                write!(f, "(")?;
                list(f, xs)?;
                write!(f, ")")
            }
            Literal::Set(xs) => {
                write!(f, "finset {{")?;
                list(f, xs)?;
                write!(f, "}}")
            }
            Literal::Map(rows) | Literal::Family(rows) => {
                let kw = if matches!(self, Literal::Map(_)) {
                    "finmap"
                } else {
                    "family"
                };
                write!(f, "{kw} {{")?;
                for (i, (k, v)) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k} |-> {v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// The element of a fresh literal set denoted by a literal.
pub fn literal_element(l: &Literal) -> Option<Value> {
    match l {
        Literal::Atom(s) => Some(Value::Atom(s.clone())),
        Literal::Tuple(xs) => {
            let mut vs: Vec<Value> = xs.iter().map(literal_element).collect::<Option<_>>()?;
            let mut acc = vs.pop()?;
            while let Some(v) = vs.pop() {
                acc = Value::pair(v, acc);
            }
            Some(acc)
        }
        _ => None,
    }
}

/// Finds the element of `set` that a literal names, comparing printed forms.
pub fn match_literal(l: &Literal, set: &FinSet) -> Option<Value> {
    let want = l.to_string();
    set.iter().find(|v| v.to_string() == want).cloned()
}
