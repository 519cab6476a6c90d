use std::collections::BTreeMap;

use super::eval::{Algebra, Model, Scope};
use super::value::{FinSet, ParamVal, Value};
use super::{MResult, ModelError, ModelErrorKind};
use crate::schema::{Boundary, Schema};
use crate::syntax::Term;

/// Rounds of saturation allowed when a request does not say otherwise.
pub const DEFAULT_ROUNDS: usize = 8;

/// Hard limit on the number of trees in one carrier.
pub const MAX_TREES: usize = 200_000;

/// Union-find with union by rank and path compression. Each root also
/// remembers the least member of its class, which is the canonical
/// representative.
#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    least: Vec<usize>,
}

impl UnionFind {
    pub fn add(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i);
        self.rank.push(0);
        self.least.push(i);
        i
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    fn root(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    /// Least member of the class of `i`.
    pub fn find(&self, i: usize) -> usize {
        self.least[self.root(i)]
    }

    fn compress(&mut self, i: usize) -> usize {
        let r = self.root(i);
        let mut j = i;
        while self.parent[j] != r {
            let next = self.parent[j];
            self.parent[j] = r;
            j = next;
        }
        r
    }

    /// Merges two classes; returns false if they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.compress(a), self.compress(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo] = hi;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        self.least[hi] = self.least[hi].min(self.least[lo]);
        true
    }

    /// Canonical representatives of all classes, in increasing order.
    pub fn classes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.find(i) == i).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    pub cell: usize,
    pub args: Vec<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    FuelExhausted,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RoundStats {
    pub trees_before: usize,
    pub trees_after: usize,
    pub classes_after_application: usize,
    pub classes_after_quotient: usize,
    pub classes_after_congruence: usize,
}

/// The (partial) initial algebra of a schema instance.
#[derive(Clone, Debug)]
pub struct Carrier {
    pub id: usize,
    pub schema: Schema,
    pub params: Vec<ParamVal>,
    pub trees: Vec<Tree>,
    uf: UnionFind,
    /// Per cell, the operation table from canonical argument tuples to trees.
    /// Only point cells have entries.
    pub ops: Vec<BTreeMap<Vec<Value>, usize>>,
    pub status: Status,
    /// Rounds run after the initial one.
    pub fuel_used: usize,
    pub rounds: Vec<RoundStats>,
    /// Every identification made by a path cell, as pairs of trees.
    pub unions: Vec<(usize, usize)>,
}

impl Algebra for Carrier {
    fn elements(&self) -> FinSet {
        self.classes()
    }

    fn apply(&self, cell: usize, args: &[Value]) -> Option<Value> {
        let key: Vec<Value> = args.iter().map(|a| self.canon(a)).collect();
        self.ops[cell]
            .get(&key)
            .map(|&t| Value::Class(self.id, self.uf.find(t)))
    }

    fn canon(&self, v: &Value) -> Value {
        v.map_classes(&mut |c, i| {
            if c == self.id {
                Value::Class(c, self.uf.find(i))
            } else {
                Value::Class(c, i)
            }
        })
    }
}

impl Carrier {
    fn new(id: usize, schema: &Schema, params: Vec<ParamVal>) -> Self {
        Carrier {
            id,
            schema: schema.clone(),
            params,
            trees: vec![],
            uf: UnionFind::default(),
            ops: vec![BTreeMap::new(); schema.cells.len()],
            status: Status::FuelExhausted,
            fuel_used: 0,
            rounds: vec![],
            unions: vec![],
        }
    }

    pub fn find(&self, tree: usize) -> usize {
        self.uf.find(tree)
    }

    pub fn class_reps(&self) -> Vec<usize> {
        self.uf.classes()
    }

    pub fn class_count(&self) -> usize {
        self.class_reps().len()
    }

    pub fn classes(&self) -> FinSet {
        self.class_reps()
            .into_iter()
            .map(|i| Value::Class(self.id, i))
            .collect()
    }

    fn point_cells(&self) -> Vec<usize> {
        (0..self.schema.cells.len())
            .filter(|&k| self.schema.cells[k].boundary == Boundary::None)
            .collect()
    }

    fn path_cells(&self) -> Vec<(usize, Term, Term)> {
        self.schema
            .cells
            .iter()
            .enumerate()
            .filter_map(|(k, c)| match &c.boundary {
                Boundary::Path { source, target } => Some((k, source.clone(), target.clone())),
                _ => None,
            })
            .collect()
    }

    fn arg_types(&self, cell: usize) -> Vec<Term> {
        self.schema.cells[cell]
            .args
            .iter()
            .map(|a| a.ty.clone())
            .collect()
    }

    /// Application phase: builds every missing point-cell tuple over the
    /// classes present at the start of the phase.
    fn application(&mut self, m: &Model<'_>) -> MResult<bool> {
        let mut fresh = Vec::new();
        {
            let sc = Scope::of_schema(&self.schema, &self.params, self);
            for k in self.point_cells() {
                for tup in m.enumerate(&sc, &self.arg_types(k))? {
                    let key: Vec<Value> = tup.iter().map(|v| self.canon(v)).collect();
                    if !self.ops[k].contains_key(&key) {
                        fresh.push((k, key));
                    }
                }
            }
        }
        let mut changed = false;
        for (k, key) in fresh {
            if self.ops[k].contains_key(&key) {
                continue;
            }
            if self.trees.len() >= MAX_TREES {
                return Err(ModelError::new(
                    ModelErrorKind::TooLarge,
                    format!("{} grew past {MAX_TREES} trees", self.schema.name),
                ));
            }
            let t = self.uf.add();
            self.trees.push(Tree {
                cell: k,
                args: key.clone(),
            });
            self.ops[k].insert(key, t);
            changed = true;
        }
        Ok(changed)
    }

    /// Source and target classes of every path-cell instance whose boundary
    /// can already be evaluated.
    fn path_instances(&self, m: &Model<'_>, strict: bool) -> MResult<Vec<(String, Value, Value)>> {
        let sc = Scope::of_schema(&self.schema, &self.params, self);
        let mut out = Vec::new();
        for (k, src, tgt) in self.path_cells() {
            for tup in m.enumerate(&sc, &self.arg_types(k))? {
                let isc = sc.with_values(&tup);
                let ends = m
                    .value(&isc, &src)
                    .and_then(|s| Ok((s, m.value(&isc, &tgt)?)));
                match ends {
                    Ok((s, t)) => out.push((
                        self.schema.cells[k].name.clone(),
                        self.canon(&s),
                        self.canon(&t),
                    )),
                    Err(e) if e.kind == ModelErrorKind::Missing && !strict => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(out)
    }

    /// Quotient phase: identifies the two sides of every path-cell instance.
    fn quotient(&mut self, m: &Model<'_>) -> MResult<bool> {
        let pairs = self.path_instances(m, false)?;
        let mut changed = false;
        for (name, s, t) in pairs {
            match (&s, &t) {
                (Value::Class(c1, i), Value::Class(c2, j)) if *c1 == self.id && *c2 == self.id => {
                    if self.uf.union(*i, *j) {
                        self.unions.push((*i, *j));
                        changed = true;
                    }
                }
                _ if s == t => {}
                _ => {
                    return Err(ModelError::new(
                        ModelErrorKind::NonCanonical,
                        format!(
                            "boundary of {name} does not evaluate to elements of {}",
                            self.schema.name
                        ),
                    ))
                }
            }
        }
        Ok(changed)
    }

    /// Congruence closure: re-keys every operation table and merges results
    /// whose canonical arguments coincide, until nothing changes.
    fn congruence(&mut self) -> bool {
        let mut changed = false;
        loop {
            let mut merged = false;
            for k in 0..self.ops.len() {
                let old = std::mem::take(&mut self.ops[k]);
                let mut new: BTreeMap<Vec<Value>, usize> = BTreeMap::new();
                for (key, t) in old {
                    let key: Vec<Value> = key.iter().map(|v| self.canon(v)).collect();
                    match new.get(&key) {
                        Some(&u) => {
                            if self.uf.union(t, u) {
                                merged = true;
                            }
                            // Keep the older tree as the table entry.
                            if t < u {
                                new.insert(key, t);
                            }
                        }
                        None => {
                            new.insert(key, t);
                        }
                    }
                }
                self.ops[k] = new;
            }
            if !merged {
                break;
            }
            changed = true;
        }
        changed
    }

    fn round(&mut self, m: &Model<'_>) -> MResult<bool> {
        let mut st = RoundStats {
            trees_before: self.trees.len(),
            ..Default::default()
        };
        let a = self.application(m)?;
        st.trees_after = self.trees.len();
        st.classes_after_application = self.class_count();
        let q = self.quotient(m)?;
        st.classes_after_quotient = self.class_count();
        let c = self.congruence();
        st.classes_after_congruence = self.class_count();
        self.rounds.push(st);
        Ok(a || q || c)
    }

    /// Re-checks every path-cell equation on the finished carrier.
    pub fn verify_paths(&self, m: &Model<'_>) -> MResult<bool> {
        Ok(self.path_instances(m, true)?.iter().all(|(_, s, t)| s == t))
    }

    /// Re-checks that equal argument tuples give equal results.
    pub fn verify_congruence(&self) -> bool {
        self.ops.iter().all(|table| {
            let mut seen: BTreeMap<Vec<Value>, usize> = BTreeMap::new();
            table.iter().all(|(key, &t)| {
                let key: Vec<Value> = key.iter().map(|v| self.canon(v)).collect();
                match seen.insert(key, self.find(t)) {
                    Some(u) => u == self.find(t),
                    None => true,
                }
            })
        })
    }

    /// A readable term for the representative tree of a class.
    pub fn render(&self, tree: usize) -> String {
        let t = &self.trees[self.find(tree)];
        let name = &self.schema.cells[t.cell].name;
        if t.args.is_empty() {
            return name.clone();
        }
        let args: Vec<String> = t.args.iter().map(|a| self.render_value(a)).collect();
        format!("{name}({})", args.join(", "))
    }

    pub fn render_value(&self, v: &Value) -> String {
        match v {
            Value::Class(c, i) if *c == self.id => self.render(*i),
            Value::Table(rows) => {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|(k, v)| format!("{k} |-> {}", self.render_value(v)))
                    .collect();
                format!("{{{}}}", rows.join(", "))
            }
            Value::Pair(a, b) => format!("({}, {})", self.render_value(a), self.render_value(b)),
            other => other.to_string(),
        }
    }
}

impl Model<'_> {
    /// Builds the carrier of a schema instance by alternating application,
    /// quotient and congruence rounds. The first round is free; `fuel` bounds
    /// the rounds after it.
    pub fn saturate(
        &self,
        schema: &Schema,
        params: Vec<ParamVal>,
        fuel: usize,
    ) -> MResult<Carrier> {
        let mut c = Carrier::new(self.fresh_id(), schema, params);
        let mut first = true;
        loop {
            let changed = c.round(self)?;
            if !first {
                c.fuel_used += 1;
            }
            first = false;
            if !changed {
                c.status = Status::Converged;
                break;
            }
            if c.fuel_used >= fuel {
                c.status = Status::FuelExhausted;
                break;
            }
        }
        Ok(c)
    }
}
