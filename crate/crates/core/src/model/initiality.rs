use std::collections::BTreeMap;

use serde::Serialize;

use super::eval::{Algebra, Model, Scope};
use super::saturate::{Carrier, Status};
use super::value::{FinSet, Value};
use super::{MResult, ModelError, ModelErrorKind};
use crate::schema::Boundary;

/// Upper bound on the number of candidate structures tried per size.
pub const MAX_CANDIDATES: u64 = 5_000_000;

/// An algebra on `{0, .., size-1}` given by explicit operation tables.
#[derive(Clone, Debug)]
pub struct FinAlgebra {
    pub size: usize,
    pub ops: Vec<BTreeMap<Vec<Value>, Value>>,
    point: Vec<bool>,
}

impl Algebra for FinAlgebra {
    fn elements(&self) -> FinSet {
        (0..self.size as u64).map(Value::Nat).collect()
    }

    fn apply(&self, cell: usize, args: &[Value]) -> Option<Value> {
        if !self.point[cell] {
            return Some(Value::Refl);
        }
        self.ops[cell].get(args).cloned()
    }

    fn canon(&self, v: &Value) -> Value {
        v.clone()
    }
}

impl FinAlgebra {
    fn describe(&self, c: &Carrier) -> String {
        let mut parts = vec![format!("size {}", self.size)];
        for (k, table) in self.ops.iter().enumerate() {
            if !self.point[k] {
                continue;
            }
            let rows: Vec<String> = table
                .iter()
                .map(|(a, v)| {
                    let a: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                    format!("({}) |-> {v}", a.join(", "))
                })
                .collect();
            parts.push(format!(
                "{} = {{{}}}",
                c.schema.cells[k].name,
                rows.join(", ")
            ));
        }
        parts.join("; ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InitialityReport {
    pub bound: usize,
    pub algebras: usize,
    pub unique: bool,
    /// An algebra admitting zero or several morphisms, if any.
    #[serde(skip)]
    pub witness: Option<String>,
}

impl InitialityReport {
    pub fn into_result(self) -> MResult<Self> {
        match &self.witness {
            Some(w) => Err(ModelError::new(
                ModelErrorKind::NotInitial,
                format!("not initial: {w}"),
            )),
            None => Ok(self),
        }
    }
}

impl Model<'_> {
    /// Enumerates every algebra of the schema instance on sets of size at most
    /// `bound` and counts the morphisms from `c` into each one by brute force.
    pub fn check_universal_property(&self, c: &Carrier, bound: usize) -> MResult<InitialityReport> {
        if c.status != Status::Converged {
            return Err(ModelError::new(
                ModelErrorKind::InfiniteType,
                "initiality can only be checked on a converged carrier",
            ));
        }
        let point: Vec<bool> = c
            .schema
            .cells
            .iter()
            .map(|x| x.boundary == Boundary::None)
            .collect();
        let classes = c.class_reps();
        let mut report = InitialityReport {
            bound,
            algebras: 0,
            unique: true,
            witness: None,
        };
        for size in 0..=bound {
            let skeleton = FinAlgebra {
                size,
                ops: vec![BTreeMap::new(); point.len()],
                point: point.clone(),
            };
            // Input tuples of every operation, and instances of every path cell.
            let mut slots: Vec<(usize, Vec<Value>)> = Vec::new();
            let mut paths = Vec::new();
            {
                let sc = Scope::of_schema(&c.schema, &c.params, &skeleton);
                for (k, cell) in c.schema.cells.iter().enumerate() {
                    let tele: Vec<_> = cell.args.iter().map(|a| a.ty.clone()).collect();
                    match &cell.boundary {
                        Boundary::None => {
                            for t in self.enumerate(&sc, &tele)? {
                                slots.push((k, t));
                            }
                        }
                        Boundary::Path { source, target } => {
                            for t in self.enumerate(&sc, &tele)? {
                                paths.push((t, source.clone(), target.clone()));
                            }
                        }
                        _ => {}
                    }
                }
            }
            let total = (size as u64).checked_pow(slots.len() as u32);
            match total {
                Some(n) if n <= MAX_CANDIDATES => {}
                _ => {
                    return Err(ModelError::new(
                        ModelErrorKind::TooLarge,
                        format!("too many candidate algebras of size {size}"),
                    ))
                }
            }
            if size == 0 && !slots.is_empty() {
                continue;
            }
            let mut digits = vec![0usize; slots.len()];
            loop {
                let mut alg = skeleton.clone();
                for ((k, args), &d) in slots.iter().zip(&digits) {
                    alg.ops[*k].insert(args.clone(), Value::Nat(d as u64));
                }
                if self.satisfies(c, &alg, &paths)? {
                    report.algebras += 1;
                    let homs = count_morphisms(c, &classes, &alg);
                    if homs != 1 && report.witness.is_none() {
                        report.unique = false;
                        report.witness = Some(format!("{} ({homs} morphisms)", alg.describe(c)));
                    }
                }
                if !advance(&mut digits, size) {
                    break;
                }
            }
        }
        Ok(report)
    }

    fn satisfies(
        &self,
        c: &Carrier,
        alg: &FinAlgebra,
        paths: &[(Vec<Value>, crate::syntax::Term, crate::syntax::Term)],
    ) -> MResult<bool> {
        let sc = Scope::of_schema(&c.schema, &c.params, alg);
        for (args, s, t) in paths {
            let isc = sc.with_values(args);
            if self.value(&isc, s)? != self.value(&isc, t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Number of maps from the classes of `c` to `alg` commuting with every operation.
fn count_morphisms(c: &Carrier, classes: &[usize], alg: &FinAlgebra) -> usize {
    let pos: BTreeMap<usize, usize> = classes.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut h = vec![0usize; classes.len()];
    let mut count = 0;
    if alg.size == 0 && !classes.is_empty() {
        return 0;
    }
    loop {
        let ok = c.ops.iter().enumerate().all(|(k, table)| {
            table.iter().all(|(args, &t)| {
                let mapped: Vec<Value> = args
                    .iter()
                    .map(|a| {
                        a.map_classes(&mut |cid, i| {
                            if cid == c.id {
                                Value::Nat(h[pos[&c.find(i)]] as u64)
                            } else {
                                Value::Class(cid, i)
                            }
                        })
                    })
                    .collect();
                alg.ops[k].get(&mapped) == Some(&Value::Nat(h[pos[&c.find(t)]] as u64))
            })
        });
        if ok {
            count += 1;
        }
        if !advance(&mut h, alg.size) {
            break;
        }
    }
    count
}
