use std::collections::BTreeMap;

use super::eval::Model;
use super::saturate::{Carrier, Status};
use super::value::{FinSet, Value};
use super::{MResult, ModelError, ModelErrorKind};
use crate::schema::Recursion;

/// Semantic method data: cell index, argument values and induction
/// hypotheses in, method value out.
pub type Methods<'m> = dyn FnMut(usize, &[Value], &[Value]) -> MResult<Value> + 'm;

/// Gives, for a class value, the set of motive values over it.
pub type Motive<'m> = dyn Fn(&Value) -> MResult<FinSet> + 'm;

impl Model<'_> {
    /// The algebra section determined by `methods`, as a value per class
    /// (keyed by representative tree). Each class is computed from its
    /// representative tree and then checked against every other tree of the
    /// class, so incoherent method data is reported rather than hidden.
    pub fn eliminate(
        &self,
        c: &Carrier,
        methods: &mut Methods<'_>,
        motive: Option<&Motive<'_>>,
    ) -> MResult<BTreeMap<usize, Value>> {
        if c.status != Status::Converged {
            return Err(ModelError::new(
                ModelErrorKind::InfiniteType,
                format!(
                    "{} did not converge; its eliminator cannot be computed",
                    c.schema.name
                ),
            ));
        }
        let mut class_val: BTreeMap<usize, Value> = BTreeMap::new();
        let mut tree_val: Vec<Value> = Vec::with_capacity(c.trees.len());
        for (t, tree) in c.trees.iter().enumerate() {
            let cell = &c.schema.cells[tree.cell];
            let mut ihs = Vec::new();
            for (a, rec) in cell.recursive_args(&c.schema.name) {
                let ih = match rec {
                    Recursion::Direct => self.ih(c, &class_val, &tree.args[a])?,
                    Recursion::Func(_) => match &tree.args[a] {
                        Value::Table(rows) => Value::Table(
                            rows.iter()
                                .map(|(s, x)| Ok((s.clone(), self.ih(c, &class_val, x)?)))
                                .collect::<MResult<_>>()?,
                        ),
                        other => {
                            return Err(ModelError::new(
                                ModelErrorKind::NonCanonical,
                                format!("expected a function argument, found {other}"),
                            ))
                        }
                    },
                };
                ihs.push(ih);
            }
            let v = methods(tree.cell, &tree.args, &ihs)?;
            if c.find(t) == t {
                if let Some(mot) = motive {
                    let allowed = mot(&Value::Class(c.id, t))?;
                    if !allowed.contains(&v) {
                        return Err(ModelError::new(
                            ModelErrorKind::Coherence,
                            format!("method for {} returns {v}, outside the motive", c.render(t)),
                        ));
                    }
                }
                class_val.insert(t, v.clone());
            }
            tree_val.push(v);
        }
        for (t, v) in tree_val.iter().enumerate() {
            let rep = c.find(t);
            if class_val[&rep] != *v {
                return Err(ModelError::new(
                    ModelErrorKind::Coherence,
                    format!(
                        "methods disagree on identified elements: {} gives {v} but its class {} gives {}",
                        c.render_tree(t),
                        c.render(rep),
                        class_val[&rep]
                    ),
                ));
            }
        }
        Ok(class_val)
    }

    fn ih(&self, c: &Carrier, vals: &BTreeMap<usize, Value>, x: &Value) -> MResult<Value> {
        match x {
            Value::Class(id, i) if *id == c.id => Ok(vals[&c.find(*i)].clone()),
            other => Err(ModelError::new(
                ModelErrorKind::NonCanonical,
                format!("expected an element of {}, found {other}", c.schema.name),
            )),
        }
    }
}

impl Carrier {
    /// Like [`Carrier::render`] but for the tree itself, not its class.
    pub fn render_tree(&self, t: usize) -> String {
        let tree = &self.trees[t];
        let name = &self.schema.cells[tree.cell].name;
        if tree.args.is_empty() {
            return name.clone();
        }
        let args: Vec<String> = tree.args.iter().map(|a| self.render_value(a)).collect();
        format!("{name}({})", args.join(", "))
    }
}
