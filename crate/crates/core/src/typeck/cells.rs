//! Types of constructors and eliminator methods derived from a schema.
//!
//! Everything here is shared by the checker, the reducer and rule generation,
//! so the three can never disagree about what a method has to look like.

use super::reduce::reduce_step;
use super::Globals;
use crate::schema::{Boundary, CellSpec, Recursion, Schema};
use crate::syntax::{bx, Abs, Term};

pub fn shift_abs(a: &Abs, by: usize) -> Abs {
    Abs::new(a.binds, a.body.shifted(a.binds, by))
}

pub fn shift_abss(v: &[Abs], by: usize) -> Vec<Abs> {
    v.iter().map(|a| shift_abs(a, by)).collect()
}

/// Applies an abstraction living in the ambient context at `depth` extra binders.
pub fn apply_abs(a: &Abs, depth: usize, args: &[Term]) -> Term {
    debug_assert_eq!(a.binds, args.len());
    a.body.shifted(a.binds, depth).instantiate(args)
}

/// Instantiates a motive (one binder, ambient context) at `depth` with `x`.
pub fn motive_at(motive: &Term, depth: usize, x: Term) -> Term {
    motive.shifted(1, depth).instantiate(&[x])
}

/// Type of argument `i`, in the ambient context extended by the previous arguments.
pub fn arg_type(cell: &CellSpec, params: &[Abs], i: usize) -> Term {
    cell.args[i].ty.instantiate_params_at(params, i)
}

pub fn carrier(schema: &Schema, params: &[Abs]) -> Term {
    Term::Schema {
        name: schema.name.clone(),
        params: params.to_vec(),
    }
}

/// Type of a constructor application; `args` are in the ambient context.
pub fn ctor_type(schema: &Schema, params: &[Abs], cell: usize, args: &[Term]) -> Term {
    let c = &schema.cells[cell];
    let n = c.args.len();
    let h = carrier(schema, params);
    let at = |t: &Term| t.instantiate_params_at(params, n).instantiate(args);
    match &c.boundary {
        Boundary::None => h,
        Boundary::Path { source, target } => Term::id(h, at(source), at(target)),
        Boundary::Globe { lhs, rhs } => {
            let (a, b) = path_endpoints(schema, &at(lhs)).unwrap_or((Term::Star, Term::Star));
            Term::id(Term::id(h, a, b), at(lhs), at(rhs))
        }
        Boundary::Square {
            top,
            bottom,
            left,
            right,
        } => Term::Square {
            ty: bx(h),
            top: bx(at(top)),
            bottom: bx(at(bottom)),
            left: bx(at(left)),
            right: bx(at(right)),
        },
    }
}

/// Endpoints of a path built from `refl` and path constructors.
pub fn path_endpoints(schema: &Schema, p: &Term) -> Option<(Term, Term)> {
    match p {
        Term::Refl(x) => Some(((**x).clone(), (**x).clone())),
        Term::SchemaCtor {
            schema: s,
            params,
            cell,
            args,
        } if *s == schema.name => match ctor_type(schema, params, *cell, args) {
            Term::Id(_, a, b) => Some((*a, *b)),
            _ => None,
        },
        _ => None,
    }
}

/// The data an eliminator is built from, all in one ambient context.
pub struct ElimData<'a> {
    pub schema: &'a Schema,
    pub params: &'a [Abs],
    pub motive: &'a Term,
    pub methods: &'a [Abs],
}

impl<'a> ElimData<'a> {
    pub fn elim_at(&self, depth: usize, scrut: Term) -> Term {
        Term::SchemaElim {
            schema: self.schema.name.clone(),
            params: shift_abss(self.params, depth),
            motive: bx(self.motive.shifted(1, depth)),
            methods: shift_abss(self.methods, depth),
            scrut: bx(scrut),
        }
    }

    /// Induction hypotheses for the recursive arguments of `cell`, where the
    /// eliminator itself stands in for each hypothesis.
    pub fn ihs_from_elim(&self, cell: usize, args: &[Term], depth: usize) -> Vec<Term> {
        let c = &self.schema.cells[cell];
        c.recursive_args(&self.schema.name)
            .into_iter()
            .map(|(a, rec)| match rec {
                Recursion::Direct => self.elim_at(depth, args[a].clone()),
                Recursion::Func(_) => Term::lam(
                    self.elim_at(depth + 1, Term::app(args[a].shifted(0, 1), Term::Var(0))),
                ),
            })
            .collect()
    }

    /// Telescope and result type of the method for `cell`.
    pub fn method_signature(
        &self,
        g: Globals<'_>,
        cell: usize,
    ) -> Result<(Vec<Term>, Term), String> {
        let c = &self.schema.cells[cell];
        let n = c.args.len();
        let mut tele: Vec<Term> = (0..n).map(|i| arg_type(c, self.params, i)).collect();
        let recs = c.recursive_args(&self.schema.name);
        let r = recs.len();
        for (q, (a, rec)) in recs.iter().enumerate() {
            let depth = n + q;
            let argvar = Term::Var(n - 1 - a + q);
            let ih = match rec {
                Recursion::Direct => motive_at(self.motive, depth, argvar),
                Recursion::Func(_) => {
                    let s = match &tele[*a] {
                        Term::Pi(s, _) => s.shifted(0, depth - a),
                        other => return Err(format!("argument has unexpected type {other:?}")),
                    };
                    Term::pi(
                        s,
                        motive_at(
                            self.motive,
                            depth + 1,
                            Term::app(argvar.shifted(0, 1), Term::Var(0)),
                        ),
                    )
                }
            };
            tele.push(ih);
        }
        let d = n + r;
        let ctor = Term::SchemaCtor {
            schema: self.schema.name.clone(),
            params: shift_abss(self.params, d),
            cell,
            args: (0..n).map(|a| Term::Var(n - 1 - a + r)).collect(),
        };
        let interp = Interp {
            g,
            data: self,
            n,
            r,
            d,
            recs: (0..n)
                .map(|a| {
                    recs.iter()
                        .position(|(b, _)| *b == a)
                        .map(|q| (q, recs[q].1.clone()))
                })
                .collect(),
            steps: std::cell::Cell::new(0),
        };
        let inst = |t: &Term| t.instantiate_params_at(self.params, n).shifted(0, r);
        let result = match &c.boundary {
            Boundary::None => motive_at(self.motive, d, ctor),
            Boundary::Path { source, target } => Term::id_over(
                self.motive.shifted(1, d),
                ctor,
                interp.point(&inst(source), 0)?,
                interp.point(&inst(target), 0)?,
            ),
            Boundary::Globe { lhs, rhs } => {
                let (l, rr) = (inst(lhs), inst(rhs));
                let (a, b) = path_endpoints(self.schema, &l).ok_or_else(|| {
                    "globe boundary must be built from refl and path constructors".to_string()
                })?;
                let fam = Term::id_over(
                    self.motive.shifted(1, d + 1),
                    Term::Var(0),
                    interp.point(&a, 0)?.shifted(0, 1),
                    interp.point(&b, 0)?.shifted(0, 1),
                );
                Term::id_over(fam, ctor, interp.path(&l, 0)?, interp.path(&rr, 0)?)
            }
            Boundary::Square {
                top,
                bottom,
                left,
                right,
            } => Term::SquareOver {
                family: bx(self.motive.shifted(1, d)),
                square: bx(ctor),
                top: bx(interp.path(&inst(top), 0)?),
                bottom: bx(interp.path(&inst(bottom), 0)?),
                left: bx(interp.path(&inst(left), 0)?),
                right: bx(interp.path(&inst(right), 0)?),
            },
        };
        Ok((tele, result))
    }

    /// Type of the computation witness for a path cell.
    pub fn path_comp_type(&self, cell: usize, args: &[Term]) -> Term {
        let c = &self.schema.cells[cell];
        let n = c.args.len();
        let (src, tgt) = match &c.boundary {
            Boundary::Path { source, target } => (
                source
                    .instantiate_params_at(self.params, n)
                    .instantiate(args),
                target
                    .instantiate_params_at(self.params, n)
                    .instantiate(args),
            ),
            _ => (Term::Star, Term::Star),
        };
        let ctor = Term::SchemaCtor {
            schema: self.schema.name.clone(),
            params: self.params.to_vec(),
            cell,
            args: args.to_vec(),
        };
        let lhs_ty = Term::id_over(
            self.motive.clone(),
            ctor.clone(),
            self.elim_at(0, src.clone()),
            self.elim_at(0, tgt.clone()),
        );
        let ap = Term::ap(self.elim_at(1, Term::Var(0)), src, tgt, ctor);
        let mut all = args.to_vec();
        all.extend(self.ihs_from_elim(cell, args, 0));
        let rhs = apply_abs(&self.methods[cell], 0, &all);
        Term::id(lhs_ty, ap, rhs)
    }
}

/// One reduction step of the eliminator on a point constructor.
pub fn beta(
    schema: &Schema,
    params: &[Abs],
    motive: &Term,
    methods: &[Abs],
    cell: usize,
    args: &[Term],
) -> Term {
    let data = ElimData {
        schema,
        params,
        motive,
        methods,
    };
    let mut all = args.to_vec();
    all.extend(data.ihs_from_elim(cell, args, 0));
    apply_abs(&methods[cell], 0, &all)
}

/// Interprets boundary terms in the motive, replacing recursive occurrences by
/// induction hypotheses and constructors by the corresponding methods.
struct Interp<'a, 'b> {
    g: Globals<'a>,
    data: &'b ElimData<'b>,
    n: usize,
    r: usize,
    d: usize,
    recs: Vec<Option<(usize, Recursion)>>,
    steps: std::cell::Cell<usize>,
}

impl Interp<'_, '_> {
    fn rec_of_var(&self, i: usize, local: usize) -> Option<(usize, &Recursion)> {
        if i < local {
            return None;
        }
        let j = i - local;
        if j < self.r || j >= self.r + self.n {
            return None;
        }
        let a = self.n - 1 - (j - self.r);
        self.recs[a].as_ref().map(|(q, rec)| (*q, rec))
    }

    fn ih_var(&self, q: usize, local: usize) -> Term {
        Term::Var(self.r - 1 - q + local)
    }

    fn method_app(&self, cell: usize, args: &[Term], local: usize) -> Result<Term, String> {
        let c = &self.data.schema.cells[cell];
        let mut all = args.to_vec();
        for (a, rec) in c.recursive_args(&self.data.schema.name) {
            let v = &args[a];
            let ih = match rec {
                Recursion::Direct => self.point(v, local)?,
                Recursion::Func(_) => match v {
                    Term::Lam(b) => Term::lam(self.point(b, local + 1)?),
                    Term::Var(i) => match self.rec_of_var(*i, local) {
                        Some((q, Recursion::Func(_))) => self.ih_var(q, local),
                        _ => return Err("function argument is not recursive".into()),
                    },
                    other => Term::lam(
                        self.point(&Term::app(other.shifted(0, 1), Term::Var(0)), local + 1)?,
                    ),
                },
            };
            all.push(ih);
        }
        let m = self
            .data
            .methods
            .get(cell)
            .ok_or_else(|| format!("no method for cell {}", c.name))?;
        if m.binds != all.len() {
            return Err(format!(
                "method for {} has the wrong number of binders",
                c.name
            ));
        }
        Ok(apply_abs(m, self.d + local, &all))
    }

    fn point(&self, t: &Term, local: usize) -> Result<Term, String> {
        match t {
            Term::Var(i) => match self.rec_of_var(*i, local) {
                Some((q, Recursion::Direct)) => Ok(self.ih_var(q, local)),
                _ => Err(
                    "boundary refers to a variable that is not an element of the carrier".into(),
                ),
            },
            Term::App(f, s) => match &**f {
                Term::Var(i) => match self.rec_of_var(*i, local) {
                    Some((q, Recursion::Func(_))) => {
                        Ok(Term::app(self.ih_var(q, local), (**s).clone()))
                    }
                    _ => self.retry(t, local, false),
                },
                _ => self.retry(t, local, false),
            },
            Term::SchemaCtor {
                schema, cell, args, ..
            } if *schema == self.data.schema.name
                && self
                    .data
                    .schema
                    .cells
                    .get(*cell)
                    .map(|c| c.boundary == Boundary::None)
                    == Some(true) =>
            {
                self.method_app(*cell, args, local)
            }
            Term::SumElim {
                motive,
                left,
                right,
                scrut,
            } => {
                let inner = Term::SumElim {
                    motive: bx(motive.shifted(1, 1)),
                    left: bx(left.shifted(1, 1)),
                    right: bx(right.shifted(1, 1)),
                    scrut: bx(Term::Var(0)),
                };
                Ok(Term::SumElim {
                    motive: bx(motive_at(self.data.motive, self.d + local + 1, inner)),
                    left: bx(self.point(left, local + 1)?),
                    right: bx(self.point(right, local + 1)?),
                    scrut: scrut.clone(),
                })
            }
            _ => self.retry(t, local, false),
        }
    }

    fn path(&self, t: &Term, local: usize) -> Result<Term, String> {
        match t {
            Term::Refl(x) => Ok(Term::ReflOver(bx(self.point(x, local)?))),
            Term::SchemaCtor {
                schema, cell, args, ..
            } if *schema == self.data.schema.name
                && matches!(
                    self.data.schema.cells.get(*cell).map(|c| &c.boundary),
                    Some(Boundary::Path { .. })
                ) =>
            {
                self.method_app(*cell, args, local)
            }
            _ => self.retry(t, local, true),
        }
    }

    fn retry(&self, t: &Term, local: usize, path: bool) -> Result<Term, String> {
        self.steps.set(self.steps.get() + 1);
        if self.steps.get() > super::reduce::DEFAULT_FUEL {
            return Err("boundary term does not reach a constructor form".into());
        }
        match reduce_step(self.g, t) {
            Some(t2) if path => self.path(&t2, local),
            Some(t2) => self.point(&t2, local),
            None => Err(format!(
                "cannot interpret boundary term {}",
                crate::surface::pretty::pretty_print(t, &[])
            )),
        }
    }
}
