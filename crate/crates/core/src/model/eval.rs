use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::rc::Rc;

use super::saturate::{Carrier, Status, DEFAULT_ROUNDS};
use super::value::{finset, FinSet, ParamSem, ParamVal, Value};
use super::{MResult, ModelError, ModelErrorKind};
use crate::schema::{Boundary, ParamKind, Schema};
use crate::syntax::{Abs, Term};
use crate::typeck::reduce::{whnf, DEFAULT_FUEL};
use crate::typeck::{Globals, Signature};

/// Largest finite set the evaluator is willing to materialize.
pub const MAX_SET: usize = 1 << 20;

/// Something that interprets the constructors of a schema: a carrier being
/// saturated, or a candidate algebra during the initiality check.
pub trait Algebra {
    fn elements(&self) -> FinSet;
    /// Result of a point constructor, or `None` if that tuple is not built yet.
    fn apply(&self, cell: usize, args: &[Value]) -> Option<Value>;
    fn canon(&self, v: &Value) -> Value;
}

#[derive(Clone, Copy)]
pub struct This<'s> {
    pub schema: &'s Schema,
    pub alg: &'s dyn Algebra,
}

pub struct Closure<'s> {
    scope: Scope<'s>,
    body: Term,
}

/// Result of evaluation: a canonical value, or data that still contains a
/// function whose domain is not known yet.
#[derive(Clone)]
pub enum Sem<'s> {
    V(Value),
    Lam(Rc<Closure<'s>>),
    Pair(Rc<Sem<'s>>, Rc<Sem<'s>>),
    Inl(Rc<Sem<'s>>),
    Inr(Rc<Sem<'s>>),
}

impl<'s> Sem<'s> {
    fn pair(a: Sem<'s>, b: Sem<'s>) -> Self {
        match (a, b) {
            (Sem::V(a), Sem::V(b)) => Sem::V(Value::pair(a, b)),
            (a, b) => Sem::Pair(Rc::new(a), Rc::new(b)),
        }
    }

    fn inj(left: bool, a: Sem<'s>) -> Self {
        match (left, a) {
            (true, Sem::V(a)) => Sem::V(Value::Inl(Box::new(a))),
            (false, Sem::V(a)) => Sem::V(Value::Inr(Box::new(a))),
            (true, a) => Sem::Inl(Rc::new(a)),
            (false, a) => Sem::Inr(Rc::new(a)),
        }
    }
}

#[derive(Clone)]
pub struct Scope<'s> {
    pub params: &'s [ParamVal],
    /// Values of the bound variables, outermost first.
    pub vars: Vec<Sem<'s>>,
    pub this: Option<This<'s>>,
}

impl<'s> Scope<'s> {
    pub fn empty() -> Self {
        Scope {
            params: &[],
            vars: vec![],
            this: None,
        }
    }

    pub fn of_schema(schema: &'s Schema, params: &'s [ParamVal], alg: &'s dyn Algebra) -> Self {
        Scope {
            params,
            vars: vec![],
            this: Some(This { schema, alg }),
        }
    }

    pub fn with(&self, vals: impl IntoIterator<Item = Sem<'s>>) -> Self {
        let mut s = self.clone();
        s.vars.extend(vals);
        s
    }

    pub fn with_values(&self, vals: &[Value]) -> Self {
        self.with(vals.iter().cloned().map(Sem::V))
    }
}

fn err<T>(kind: ModelErrorKind, msg: impl Into<String>) -> MResult<T> {
    Err(ModelError::new(kind, msg))
}

pub fn to_value(s: Sem<'_>) -> MResult<Value> {
    match s {
        Sem::V(v) => Ok(v),
        Sem::Lam(_) => err(
            ModelErrorKind::NonCanonical,
            "a function appears where its domain is unknown",
        ),
        Sem::Pair(a, b) => Ok(Value::pair(
            to_value((*a).clone())?,
            to_value((*b).clone())?,
        )),
        Sem::Inl(a) => Ok(Value::Inl(Box::new(to_value((*a).clone())?))),
        Sem::Inr(a) => Ok(Value::Inr(Box::new(to_value((*a).clone())?))),
    }
}

/// Evaluates closed types and terms in the finite-set model, and owns every
/// carrier computed along the way.
pub struct Model<'a> {
    pub sig: &'a Signature,
    pub fuel: usize,
    carriers: RefCell<BTreeMap<usize, Rc<Carrier>>>,
    index: RefCell<BTreeMap<(String, Vec<ParamVal>), usize>>,
    next_id: Cell<usize>,
}

impl<'a> Model<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Model {
            sig,
            fuel: DEFAULT_ROUNDS,
            carriers: RefCell::new(BTreeMap::new()),
            index: RefCell::new(BTreeMap::new()),
            next_id: Cell::new(0),
        }
    }

    pub fn with_fuel(mut self, fuel: usize) -> Self {
        self.fuel = fuel;
        self
    }

    pub(crate) fn fresh_id(&self) -> usize {
        let id = self.next_id.get();
        self.next_id.set(id + 1);
        id
    }

    pub fn carrier(&self, id: usize) -> Option<Rc<Carrier>> {
        self.carriers.borrow().get(&id).cloned()
    }

    /// Registers a finished carrier so that its classes can be evaluated against.
    pub fn register(&self, c: Carrier) -> Rc<Carrier> {
        let c = Rc::new(c);
        self.index
            .borrow_mut()
            .insert((c.schema.name.clone(), c.params.clone()), c.id);
        self.carriers.borrow_mut().insert(c.id, c.clone());
        c
    }

    /// The carrier of a schema instance, saturating it on first use.
    pub fn instance(&self, name: &str, params: Vec<ParamVal>) -> MResult<Rc<Carrier>> {
        let key = (name.to_string(), params);
        if let Some(id) = self.index.borrow().get(&key) {
            return Ok(self.carriers.borrow()[id].clone());
        }
        let schema = self.schema(name)?.clone();
        let c = self.saturate(&schema, key.1, self.fuel)?;
        Ok(self.register(c))
    }

    fn schema(&self, name: &str) -> MResult<&'a Schema> {
        match self.sig.schema(name) {
            Some(s) => Ok(s),
            None => err(ModelErrorKind::Unbound, format!("unknown schema {name}")),
        }
    }

    fn globals(&self) -> Globals<'a> {
        self.sig.globals()
    }

    /// All tuples inhabiting a telescope of types.
    pub fn enumerate(&self, sc: &Scope<'_>, tele: &[Term]) -> MResult<Vec<Vec<Value>>> {
        let mut out: Vec<Vec<Value>> = vec![vec![]];
        for ty in tele {
            let mut next = Vec::new();
            for prefix in out {
                let set = self.eval_type(&sc.with_values(&prefix), ty)?;
                for v in set {
                    let mut t = prefix.clone();
                    t.push(v);
                    next.push(t);
                }
                if next.len() > MAX_SET {
                    return err(
                        ModelErrorKind::TooLarge,
                        "telescope has too many inhabitants",
                    );
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Parameter values of a schema instance written with explicit abstractions.
    pub fn params_of(
        &self,
        sc: &Scope<'_>,
        schema: &Schema,
        abs: &[Abs],
    ) -> MResult<Vec<ParamVal>> {
        let mut vals: Vec<ParamVal> = Vec::new();
        for (e, a) in schema.params.entries.iter().zip(abs) {
            let prior = vals.clone();
            let psc = Scope {
                params: &prior,
                vars: vec![],
                this: None,
            };
            let ext: Vec<Term> = e.ext.iter().map(|(_, t)| t.clone()).collect();
            let mut rows = Vec::new();
            for tup in self.enumerate(&psc, &ext)? {
                let bsc = sc.with_values(&tup);
                let sem = match &e.kind {
                    ParamKind::Type => ParamSem::Set(self.eval_type(&bsc, &a.body)?),
                    ParamKind::Term(ty) => {
                        let s = self.eval(&bsc, &a.body)?;
                        ParamSem::Elem(self.canon_at(&psc.with_values(&tup), s, ty)?)
                    }
                };
                rows.push((tup, sem));
            }
            rows.sort();
            vals.push(ParamVal { rows });
        }
        Ok(vals)
    }

    /// Evaluates a type to the finite set of its elements.
    pub fn eval_type(&self, sc: &Scope<'_>, t: &Term) -> MResult<FinSet> {
        use Term::*;
        match t {
            Unit => Ok(vec![Value::Star]),
            Nat => err(ModelErrorKind::InfiniteType, "Nat is infinite"),
            Pi(a, b) => {
                let dom = self.eval_type(sc, a)?;
                let mut funs: Vec<Vec<(Value, Value)>> = vec![vec![]];
                for x in dom {
                    let cod = self.eval_type(&sc.with_values(std::slice::from_ref(&x)), b)?;
                    if funs.len().saturating_mul(cod.len()) > MAX_SET {
                        return err(ModelErrorKind::TooLarge, "function type is too large");
                    }
                    let mut next = Vec::with_capacity(funs.len() * cod.len());
                    for f in &funs {
                        for y in &cod {
                            let mut g = f.clone();
                            g.push((x.clone(), y.clone()));
                            next.push(g);
                        }
                    }
                    funs = next;
                }
                Ok(finset(funs.into_iter().map(Value::Table).collect()))
            }
            Sigma(a, b) => {
                let mut out = Vec::new();
                for x in self.eval_type(sc, a)? {
                    for y in self.eval_type(&sc.with_values(std::slice::from_ref(&x)), b)? {
                        out.push(Value::pair(x.clone(), y));
                    }
                }
                Ok(finset(out))
            }
            Sum(a, b) => {
                let mut out: Vec<Value> = self
                    .eval_type(sc, a)?
                    .into_iter()
                    .map(|v| Value::Inl(Box::new(v)))
                    .collect();
                out.extend(
                    self.eval_type(sc, b)?
                        .into_iter()
                        .map(|v| Value::Inr(Box::new(v))),
                );
                Ok(finset(out))
            }
            Id(ty, a, b) => {
                let x = self.eval(sc, a)?;
                let y = self.eval(sc, b)?;
                let x = self.canon_at(sc, x, ty)?;
                let y = self.canon_at(sc, y, ty)?;
                Ok(if self.same(sc, &x, &y) {
                    vec![Value::Refl]
                } else {
                    vec![]
                })
            }
            IdOver { path, lhs, rhs, .. } => {
                // Over an inhabited base path both fibers coincide.
                let p = self.value(sc, path)?;
                let x = self.value(sc, lhs)?;
                let y = self.value(sc, rhs)?;
                Ok(if p == Value::Refl && self.same(sc, &x, &y) {
                    vec![Value::Refl]
                } else {
                    vec![]
                })
            }
            Square { .. } | SquareOver { .. } => Ok(vec![Value::Refl]),
            Schema { name, params } => {
                if let Some(th) = sc.this {
                    if th.schema.name == *name {
                        return Ok(th.alg.elements());
                    }
                }
                let s = self.schema(name)?;
                let pv = self.params_of(sc, s, params)?;
                let c = self.instance(name, pv)?;
                if c.status != Status::Converged {
                    return err(
                        ModelErrorKind::InfiniteType,
                        format!("{name} did not converge within {} rounds", c.fuel_used),
                    );
                }
                Ok(c.classes())
            }
            Param(i, args) => match self.param(sc, *i, args)? {
                ParamSem::Set(s) => Ok(s),
                ParamSem::Elem(_) => err(
                    ModelErrorKind::NotAType,
                    format!("parameter {i} is not a type"),
                ),
            },
            Const(n) => match self.sig.def(n) {
                Some(d) => self.eval_type(&Scope::empty(), &d.body),
                None => err(ModelErrorKind::Unbound, format!("unknown constant {n}")),
            },
            _ => {
                let mut fuel = DEFAULT_FUEL;
                match whnf(self.globals(), t, &mut fuel, DEFAULT_FUEL) {
                    Ok(u) if u != *t => self.eval_type(sc, &u),
                    _ => err(
                        ModelErrorKind::NotAType,
                        format!("cannot evaluate {t} as a type"),
                    ),
                }
            }
        }
    }

    fn same(&self, sc: &Scope<'_>, x: &Value, y: &Value) -> bool {
        match sc.this {
            Some(th) => th.alg.canon(x) == th.alg.canon(y),
            None => x == y,
        }
    }

    fn param(&self, sc: &Scope<'_>, i: usize, args: &[Term]) -> MResult<ParamSem> {
        let key = args
            .iter()
            .map(|a| self.value(sc, a))
            .collect::<MResult<Vec<_>>>()?;
        let pv = match sc.params.get(i) {
            Some(p) => p,
            None => return err(ModelErrorKind::Unbound, format!("parameter {i} is unbound")),
        };
        match pv.get(&key) {
            Some(s) => Ok(s.clone()),
            None => err(
                ModelErrorKind::NonCanonical,
                format!("parameter {i} is undefined at the given arguments"),
            ),
        }
    }

    /// The element denoted by `t : ty`, with functions tabulated.
    pub fn eval_term(&self, sc: &Scope<'_>, t: &Term, ty: &Term) -> MResult<Value> {
        let s = self.eval(sc, t)?;
        self.canon_at(sc, s, ty)
    }

    pub fn value(&self, sc: &Scope<'_>, t: &Term) -> MResult<Value> {
        to_value(self.eval(sc, t)?)
    }

    pub fn apply<'s>(&self, f: Sem<'s>, x: Sem<'s>) -> MResult<Sem<'s>> {
        match f {
            Sem::Lam(c) => self.eval(&c.scope.with([x]), &c.body),
            Sem::Pair(..) | Sem::Inl(_) | Sem::Inr(_) => {
                err(ModelErrorKind::NonCanonical, "a non-function was applied")
            }
            Sem::V(table) => {
                let x = to_value(x)?;
                match table.lookup(&x) {
                    Some(v) => Ok(Sem::V(v.clone())),
                    None => err(
                        ModelErrorKind::NonCanonical,
                        format!("{table} is not defined at {x}"),
                    ),
                }
            }
        }
    }

    /// Turns a possibly functional result into a value, tabulating functions
    /// over the domains read off `ty` (evaluated in `tsc`).
    pub fn canon_at<'s>(&self, tsc: &Scope<'_>, s: Sem<'s>, ty: &Term) -> MResult<Value> {
        if let Sem::V(v) = s {
            return Ok(v);
        }
        let ty = match ty {
            Term::Pi(..) | Term::Sigma(..) | Term::Sum(..) => ty.clone(),
            _ => {
                let mut fuel = DEFAULT_FUEL;
                whnf(self.globals(), ty, &mut fuel, DEFAULT_FUEL)
                    .map_err(|e| ModelError::new(ModelErrorKind::NonCanonical, e.to_string()))?
            }
        };
        match (s, &ty) {
            (s @ Sem::Lam(_), Term::Pi(d, b)) => {
                let mut rows = Vec::new();
                for x in self.eval_type(tsc, d)? {
                    let r = self.apply(s.clone(), Sem::V(x.clone()))?;
                    let v = self.canon_at(&tsc.with_values(std::slice::from_ref(&x)), r, b)?;
                    rows.push((x, v));
                }
                Ok(Value::Table(rows))
            }
            (Sem::Pair(a, b), Term::Sigma(ta, tb)) => {
                let x = self.canon_at(tsc, (*a).clone(), ta)?;
                let y =
                    self.canon_at(&tsc.with_values(std::slice::from_ref(&x)), (*b).clone(), tb)?;
                Ok(Value::pair(x, y))
            }
            (Sem::Inl(a), Term::Sum(l, _)) => {
                Ok(Value::Inl(Box::new(self.canon_at(tsc, (*a).clone(), l)?)))
            }
            (Sem::Inr(a), Term::Sum(_, r)) => {
                Ok(Value::Inr(Box::new(self.canon_at(tsc, (*a).clone(), r)?)))
            }
            _ => err(
                ModelErrorKind::NonCanonical,
                format!("a value does not have the shape of its type {ty}"),
            ),
        }
    }

    pub fn eval<'s>(&self, sc: &Scope<'s>, t: &Term) -> MResult<Sem<'s>> {
        use Term::*;
        let v = |x: Value| Ok(Sem::V(x));
        match t {
            Var(i) => match sc.vars.len().checked_sub(i + 1) {
                Some(k) => Ok(sc.vars[k].clone()),
                None => err(ModelErrorKind::Unbound, format!("variable #{i} is unbound")),
            },
            Const(n) => match self.sig.def(n) {
                Some(d) => {
                    let s = self.eval(&Scope::empty(), &d.body)?;
                    // A definition's closures never refer to the caller's scope.
                    v(self.canon_at(&Scope::empty(), s, &d.ty)?)
                }
                None => err(ModelErrorKind::Unbound, format!("unknown constant {n}")),
            },
            Param(i, args) => match self.param(sc, *i, args)? {
                ParamSem::Elem(e) => v(e),
                ParamSem::Set(_) => {
                    err(ModelErrorKind::NotATerm, format!("parameter {i} is a type"))
                }
            },
            Lam(b) => Ok(Sem::Lam(Rc::new(Closure {
                scope: sc.clone(),
                body: (**b).clone(),
            }))),
            App(f, a) => {
                let f = self.eval(sc, f)?;
                let a = self.eval(sc, a)?;
                self.apply(f, a)
            }
            Pair(a, b) => Ok(Sem::pair(self.eval(sc, a)?, self.eval(sc, b)?)),
            Fst(p) => match self.eval(sc, p)? {
                Sem::Pair(a, _) => Ok((*a).clone()),
                Sem::V(Value::Pair(a, _)) => v(*a),
                _ => err(
                    ModelErrorKind::NonCanonical,
                    format!("fst of a non-pair in {t}"),
                ),
            },
            Snd(p) => match self.eval(sc, p)? {
                Sem::Pair(_, b) => Ok((*b).clone()),
                Sem::V(Value::Pair(_, b)) => v(*b),
                _ => err(
                    ModelErrorKind::NonCanonical,
                    format!("snd of a non-pair in {t}"),
                ),
            },
            Star => v(Value::Star),
            Inl(a) => Ok(Sem::inj(true, self.eval(sc, a)?)),
            Inr(a) => Ok(Sem::inj(false, self.eval(sc, a)?)),
            SumElim {
                left, right, scrut, ..
            } => match self.eval(sc, scrut)? {
                Sem::Inl(x) => self.eval(&sc.with([(*x).clone()]), left),
                Sem::Inr(x) => self.eval(&sc.with([(*x).clone()]), right),
                Sem::V(Value::Inl(x)) => self.eval(&sc.with_values(&[*x]), left),
                Sem::V(Value::Inr(x)) => self.eval(&sc.with_values(&[*x]), right),
                _ => err(
                    ModelErrorKind::NonCanonical,
                    format!("case on a non-injection in {t}"),
                ),
            },
            Refl(_) | ReflOver(_) | Ap { .. } | SchemaPathComp { .. } => v(Value::Refl),
            J { base, lhs, .. } => {
                let a = self.eval(sc, lhs)?;
                self.eval(&sc.with([a]), base)
            }
            JOver { base, args, .. } => {
                let a = self.eval(sc, &args[0])?;
                let b = self.eval(sc, &args[3])?;
                self.eval(&sc.with([a, b]), base)
            }
            Zero => v(Value::Nat(0)),
            Succ(n) => match self.value(sc, n)? {
                Value::Nat(k) => v(Value::Nat(k + 1)),
                other => err(ModelErrorKind::NonCanonical, format!("succ of {other}")),
            },
            NatElim {
                zero, succ, scrut, ..
            } => {
                let n = match self.value(sc, scrut)? {
                    Value::Nat(k) => k,
                    other => {
                        return err(ModelErrorKind::NonCanonical, format!("natrec on {other}"))
                    }
                };
                let mut acc = self.eval(sc, zero)?;
                for k in 0..n {
                    acc = self.eval(&sc.with([Sem::V(Value::Nat(k)), acc]), succ)?;
                }
                Ok(acc)
            }
            SchemaCtor {
                schema,
                params,
                cell,
                args,
            } => {
                if let Some(th) = sc.this {
                    if th.schema.name == *schema {
                        return self
                            .ctor(sc, th.schema, sc.params, th.alg, None, *cell, args)
                            .map(Sem::V);
                    }
                }
                let s = self.schema(schema)?;
                let pv = self.params_of(sc, s, params)?;
                let c = self.instance(schema, pv)?;
                self.ctor(sc, s, &c.params, &*c, Some(params), *cell, args)
                    .map(Sem::V)
            }
            SchemaElim { methods, scrut, .. } => {
                let (cid, cls) = match self.value(sc, scrut)? {
                    Value::Class(c, i) => (c, i),
                    other => {
                        return err(
                            ModelErrorKind::NonCanonical,
                            format!("eliminator applied to {other}"),
                        )
                    }
                };
                let Some(c) = self.carrier(cid) else {
                    return err(
                        ModelErrorKind::NonCanonical,
                        "eliminator applied to a carrier that is still being built",
                    );
                };
                let vals = self.eliminate(
                    &c,
                    &mut |k, args, ihs| {
                        let m = &methods[k];
                        let msc = sc.with_values(args).with_values(ihs);
                        self.value(&msc, &m.body)
                    },
                    None,
                )?;
                v(vals[&c.find(cls)].clone())
            }
            Pi(..)
            | Sigma(..)
            | Unit
            | Sum(..)
            | Id(..)
            | IdOver { .. }
            | Square { .. }
            | SquareOver { .. }
            | Nat
            | Schema { .. } => err(
                ModelErrorKind::NotATerm,
                format!("{t} is a type, not an element"),
            ),
        }
    }

    /// Evaluates a constructor application against an algebra. When the
    /// actual parameter terms are known, functional arguments are tabulated
    /// at the instantiated argument types.
    #[allow(clippy::too_many_arguments)]
    fn ctor(
        &self,
        sc: &Scope<'_>,
        schema: &Schema,
        params: &[ParamVal],
        alg: &dyn Algebra,
        actual: Option<&[Abs]>,
        cell: usize,
        args: &[Term],
    ) -> MResult<Value> {
        let spec = &schema.cells[cell];
        let isc = Scope::of_schema(schema, params, alg);
        let mut vals = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            let s = self.eval(sc, a)?;
            let v = match (s, actual) {
                (s @ Sem::V(_), _) | (s, None) => {
                    self.canon_at(&isc.with_values(&vals), s, &spec.args[i].ty)?
                }
                (s, Some(ps)) => {
                    let ty = spec.args[i].ty.instantiate_params_at(ps, i);
                    self.canon_at(&sc.with_values(&vals), s, &ty)?
                }
            };
            vals.push(alg.canon(&v));
        }
        if spec.boundary != Boundary::None {
            return Ok(Value::Refl);
        }
        match alg.apply(cell, &vals) {
            Some(v) => Ok(v),
            None => err(
                ModelErrorKind::Missing,
                format!("{} has not been built for these arguments yet", spec.name),
            ),
        }
    }
}
