//! Bidirectional type checking, reduction and definitional equality.

pub mod cells;
pub mod reduce;

use std::collections::HashMap;
use std::fmt;

use crate::schema::{ParamEntry, ParamKind, Schema};
use crate::surface::pretty::pretty_print;
use crate::surface::Span;
use crate::syntax::{bx, Abs, Context, Term};
use cells::{motive_at, ElimData};
pub use reduce::{reduce_step, DEFAULT_FUEL};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Def {
    pub name: String,
    pub ty: Term,
    pub body: Term,
}

/// The global environment: registered schemas and checked definitions.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    schemas: Vec<Schema>,
    schema_index: HashMap<String, usize>,
    defs: Vec<Def>,
    def_index: HashMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_schema(&mut self, s: Schema) {
        match self.schema_index.get(&s.name) {
            Some(&i) => self.schemas[i] = s,
            None => {
                self.schema_index.insert(s.name.clone(), self.schemas.len());
                self.schemas.push(s);
            }
        }
    }

    pub fn add_def(&mut self, d: Def) {
        match self.def_index.get(&d.name) {
            Some(&i) => self.defs[i] = d,
            None => {
                self.def_index.insert(d.name.clone(), self.defs.len());
                self.defs.push(d);
            }
        }
    }

    pub fn schema(&self, name: &str) -> Option<&Schema> {
        self.schema_index.get(name).map(|&i| &self.schemas[i])
    }

    pub fn def(&self, name: &str) -> Option<&Def> {
        self.def_index.get(name).map(|&i| &self.defs[i])
    }

    pub fn schemas(&self) -> &[Schema] {
        &self.schemas
    }

    pub fn defs(&self) -> &[Def] {
        &self.defs
    }

    pub fn globals(&self) -> Globals<'_> {
        Globals {
            sig: self,
            local: None,
        }
    }
}

/// Read access to the signature, optionally with a schema that is still being
/// validated and therefore not registered yet.
#[derive(Clone, Copy)]
pub struct Globals<'a> {
    pub sig: &'a Signature,
    pub local: Option<&'a Schema>,
}

impl<'a> Globals<'a> {
    pub fn schema(&self, name: &str) -> Option<&'a Schema> {
        match self.local {
            Some(s) if s.name == name => Some(s),
            _ => self.sig.schema(name),
        }
    }

    pub fn def(&self, name: &str) -> Option<&'a Def> {
        self.sig.def(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeErrorKind {
    Mismatch,
    NotAFunction,
    NotAPair,
    NotASum,
    NotAnIdentity,
    NotAType,
    NotATerm,
    CannotInfer,
    UnboundVariable,
    UnboundConstant,
    UnboundSchema,
    UnboundParam,
    ArityMismatch,
    IllTypedMotive,
    BadBoundary,
    FuelExhausted,
}

impl TypeErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            TypeErrorKind::Mismatch => "Mismatch",
            TypeErrorKind::NotAFunction => "NotAFunction",
            TypeErrorKind::NotAPair => "NotAPair",
            TypeErrorKind::NotASum => "NotASum",
            TypeErrorKind::NotAnIdentity => "NotAnIdentity",
            TypeErrorKind::NotAType => "NotAType",
            TypeErrorKind::NotATerm => "NotATerm",
            TypeErrorKind::CannotInfer => "CannotInfer",
            TypeErrorKind::UnboundVariable => "UnboundVariable",
            TypeErrorKind::UnboundConstant => "UnboundConstant",
            TypeErrorKind::UnboundSchema => "UnboundSchema",
            TypeErrorKind::UnboundParam => "UnboundParam",
            TypeErrorKind::ArityMismatch => "ArityMismatch",
            TypeErrorKind::IllTypedMotive => "IllTypedMotive",
            TypeErrorKind::BadBoundary => "BadBoundary",
            TypeErrorKind::FuelExhausted => "FuelExhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub message: String,
    pub expected: Option<Term>,
    pub actual: Option<Term>,
    pub span: Option<Span>,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind, message: impl Into<String>) -> Self {
        TypeError {
            kind,
            message: message.into(),
            expected: None,
            actual: None,
            span: None,
        }
    }

    pub fn with_span(mut self, span: Span) -> Self {
        if self.span.is_none() {
            self.span = Some(span);
        }
        self
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for TypeError {}

fn names_for(ctx: &Context) -> Vec<String> {
    (0..ctx.len()).map(|i| format!("x{i}")).collect()
}

fn show(ctx: &Context, t: &Term) -> String {
    pretty_print(t, &names_for(ctx))
}

pub struct Checker<'a> {
    pub globals: Globals<'a>,
    pub params: &'a [ParamEntry],
    pub fuel: usize,
}

type TResult<T> = Result<T, TypeError>;

impl<'a> Checker<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Checker {
            globals: sig.globals(),
            params: &[],
            fuel: DEFAULT_FUEL,
        }
    }

    pub fn with_params(mut self, params: &'a [ParamEntry]) -> Self {
        self.params = params;
        self
    }

    pub fn with_local(mut self, schema: &'a Schema) -> Self {
        self.globals.local = Some(schema);
        self
    }

    pub fn with_fuel(mut self, fuel: usize) -> Self {
        self.fuel = fuel;
        self
    }

    fn fuel_err(&self) -> TypeError {
        TypeError::new(
            TypeErrorKind::FuelExhausted,
            format!("normalization did not finish within {} steps", self.fuel),
        )
    }

    pub fn whnf(&self, t: &Term) -> TResult<Term> {
        let mut fuel = self.fuel;
        reduce::whnf(self.globals, t, &mut fuel, self.fuel).map_err(|_| self.fuel_err())
    }

    pub fn normalize(&self, t: &Term) -> TResult<Term> {
        reduce::normalize(self.globals, t, self.fuel).map_err(|_| self.fuel_err())
    }

    pub fn def_equal(&self, t: &Term, u: &Term) -> TResult<bool> {
        reduce::def_equal(self.globals, t, u, self.fuel).map_err(|_| self.fuel_err())
    }

    fn expect_equal(
        &self,
        ctx: &Context,
        expected: &Term,
        actual: &Term,
        what: &str,
    ) -> TResult<()> {
        if self.def_equal(expected, actual)? {
            Ok(())
        } else {
            Err(TypeError {
                kind: TypeErrorKind::Mismatch,
                message: format!(
                    "{what}: expected {}, found {}",
                    show(ctx, expected),
                    show(ctx, actual)
                ),
                expected: Some(expected.clone()),
                actual: Some(actual.clone()),
                span: None,
            })
        }
    }

    fn schema(&self, name: &str) -> TResult<&'a Schema> {
        self.globals.schema(name).ok_or_else(|| {
            TypeError::new(
                TypeErrorKind::UnboundSchema,
                format!("unknown schema {name}"),
            )
        })
    }

    /// Checks actual parameters against a schema's parameter scheme.
    pub fn check_params(&self, ctx: &Context, schema: &Schema, params: &[Abs]) -> TResult<()> {
        let entries = &schema.params.entries;
        if params.len() != entries.len() {
            return Err(TypeError::new(
                TypeErrorKind::ArityMismatch,
                format!(
                    "schema {} expects {} parameters, got {}",
                    schema.name,
                    entries.len(),
                    params.len()
                ),
            ));
        }
        for (i, (e, p)) in entries.iter().zip(params).enumerate() {
            if p.binds != e.ext.len() {
                return Err(TypeError::new(
                    TypeErrorKind::ArityMismatch,
                    format!(
                        "parameter {} of {} binds {} variables, expected {}",
                        e.name,
                        schema.name,
                        p.binds,
                        e.ext.len()
                    ),
                ));
            }
            let mut inner = ctx.clone();
            for (k, (_, ty)) in e.ext.iter().enumerate() {
                inner.push(ty.instantiate_params_at(&params[..i], k));
            }
            match &e.kind {
                ParamKind::Type => self.check_type(&inner, &p.body)?,
                ParamKind::Term(ty) => {
                    let ty = ty.instantiate_params_at(&params[..i], e.ext.len());
                    self.check(&inner, &p.body, &ty)?
                }
            }
        }
        Ok(())
    }

    fn check_param_args(&self, ctx: &Context, i: usize, args: &[Term]) -> TResult<&'a ParamEntry> {
        let e = self.params.get(i).ok_or_else(|| {
            TypeError::new(
                TypeErrorKind::UnboundParam,
                format!("unknown parameter #{i}"),
            )
        })?;
        if args.len() != e.ext.len() {
            return Err(TypeError::new(
                TypeErrorKind::ArityMismatch,
                format!(
                    "parameter {} expects {} arguments, got {}",
                    e.name,
                    e.ext.len(),
                    args.len()
                ),
            ));
        }
        for (k, a) in args.iter().enumerate() {
            let ty = e.ext[k].1.instantiate(&args[..k]);
            self.check(ctx, a, &ty)?;
        }
        Ok(e)
    }

    pub fn check_type(&self, ctx: &Context, a: &Term) -> TResult<()> {
        use Term::*;
        match a {
            Unit | Nat => Ok(()),
            Pi(x, y) | Sigma(x, y) => {
                self.check_type(ctx, x)?;
                self.check_type(&ctx.extend((**x).clone()), y)
            }
            Sum(x, y) => {
                self.check_type(ctx, x)?;
                self.check_type(ctx, y)
            }
            Id(ty, x, y) => {
                self.check_type(ctx, ty)?;
                self.check(ctx, x, ty)?;
                self.check(ctx, y, ty)
            }
            IdOver {
                family,
                path,
                lhs,
                rhs,
            } => {
                let (base, a1, a2) = self.infer_id(ctx, path)?;
                self.check_type(&ctx.extend(base), family)
                    .map_err(|e| self.motive_err(e))?;
                self.check(ctx, lhs, &family.substitute(0, &a1))?;
                self.check(ctx, rhs, &family.substitute(0, &a2))
            }
            Square {
                ty,
                top,
                bottom,
                left,
                right,
            } => {
                self.check_type(ctx, ty)?;
                let mut ends = Vec::new();
                for side in [top, bottom, left, right] {
                    let (b, x, y) = self.infer_id(ctx, side)?;
                    self.expect_equal(ctx, ty, &b, "side of square")?;
                    ends.push((x, y));
                }
                self.square_corners(ctx, &ends)
            }
            SquareOver {
                family,
                square,
                top,
                bottom,
                left,
                right,
            } => {
                let sq = self.infer(ctx, square)?;
                let sq = self.whnf(&sq)?;
                let Square {
                    ty,
                    top: t0,
                    bottom: b0,
                    left: l0,
                    right: r0,
                } = sq
                else {
                    return Err(TypeError::new(
                        TypeErrorKind::Mismatch,
                        format!("{} is not a square", show(ctx, square)),
                    ));
                };
                self.check_type(&ctx.extend((*ty).clone()), family)
                    .map_err(|e| self.motive_err(e))?;
                let mut ends = Vec::new();
                for (side, base) in [(top, t0), (bottom, b0), (left, l0), (right, r0)] {
                    ends.push(self.side_over(ctx, family, &base, side)?);
                }
                self.square_corners(ctx, &ends)
            }
            Schema { name, params } => {
                let s = self.schema(name)?;
                self.check_params(ctx, s, params)
            }
            Param(i, args) => {
                let e = self.check_param_args(ctx, *i, args)?;
                match e.kind {
                    ParamKind::Type => Ok(()),
                    ParamKind::Term(_) => Err(TypeError::new(
                        TypeErrorKind::NotAType,
                        format!("parameter {} is a term, not a type", e.name),
                    )),
                }
            }
            _ => Err(TypeError::new(
                TypeErrorKind::NotAType,
                format!("{} is not a type", show(ctx, a)),
            )),
        }
    }

    fn motive_err(&self, mut e: TypeError) -> TypeError {
        if e.kind == TypeErrorKind::NotAType {
            e.kind = TypeErrorKind::IllTypedMotive;
        }
        e
    }

    fn square_corners(&self, ctx: &Context, ends: &[(Term, Term)]) -> TResult<()> {
        let (t, b, l, r) = (&ends[0], &ends[1], &ends[2], &ends[3]);
        let pairs = [
            (&t.0, &l.0, "top-left corner"),
            (&t.1, &r.0, "top-right corner"),
            (&b.0, &l.1, "bottom-left corner"),
            (&b.1, &r.1, "bottom-right corner"),
        ];
        for (x, y, what) in pairs {
            self.expect_equal(ctx, x, y, what)?;
        }
        Ok(())
    }

    /// Endpoints of a side of a square over `base`.
    fn side_over(
        &self,
        ctx: &Context,
        family: &Term,
        base: &Term,
        side: &Term,
    ) -> TResult<(Term, Term)> {
        if let Term::ReflOver(b) = side {
            let expected =
                Term::id_over(family.clone(), base.clone(), (**b).clone(), (**b).clone());
            self.check(ctx, side, &expected)?;
            return Ok(((**b).clone(), (**b).clone()));
        }
        let ty = self.infer(ctx, side)?;
        match self.whnf(&ty)? {
            Term::IdOver {
                family: f2,
                path,
                lhs,
                rhs,
            } => {
                self.expect_equal(&ctx.extend(Term::Unit), family, &f2, "family of side")?;
                self.expect_equal(ctx, base, &path, "base of side")?;
                Ok((*lhs, *rhs))
            }
            other => Err(TypeError::new(
                TypeErrorKind::NotAnIdentity,
                format!("side {} has type {}", show(ctx, side), show(ctx, &other)),
            )),
        }
    }

    /// Infers the type of `p` and splits it as `Id(A, a1, a2)`.
    /// Like [`Self::infer_id`] for a path whose endpoints are also written
    /// out: a path that only checks (such as `refl` of a pair) is checked
    /// against the identity type read off an endpoint instead.
    fn infer_path(
        &self,
        ctx: &Context,
        p: &Term,
        lhs: &Term,
        rhs: &Term,
    ) -> TResult<(Term, Term, Term)> {
        match self.infer_id(ctx, p) {
            Err(e) if e.kind == TypeErrorKind::CannotInfer => {
                let a = match self.infer(ctx, lhs) {
                    Ok(a) => a,
                    Err(_) => self.infer(ctx, rhs).map_err(|_| e.clone())?,
                };
                self.check(ctx, lhs, &a)?;
                self.check(ctx, rhs, &a)?;
                self.check(ctx, p, &Term::id(a.clone(), lhs.clone(), rhs.clone()))?;
                Ok((a, lhs.clone(), rhs.clone()))
            }
            r => r,
        }
    }

    fn infer_id(&self, ctx: &Context, p: &Term) -> TResult<(Term, Term, Term)> {
        let ty = self.infer(ctx, p)?;
        match self.whnf(&ty)? {
            Term::Id(a, x, y) => Ok((*a, *x, *y)),
            other => Err(TypeError {
                kind: TypeErrorKind::NotAnIdentity,
                message: format!(
                    "{} has type {}, which is not an identity type",
                    show(ctx, p),
                    show(ctx, &other)
                ),
                expected: None,
                actual: Some(other),
                span: None,
            }),
        }
    }

    pub fn infer(&self, ctx: &Context, t: &Term) -> TResult<Term> {
        use Term::*;
        match t {
            Var(i) => ctx.lookup(*i).ok_or_else(|| {
                TypeError::new(TypeErrorKind::UnboundVariable, format!("unbound variable #{i}"))
            }),
            Const(name) => self.globals.def(name).map(|d| d.ty.clone()).ok_or_else(|| {
                TypeError::new(TypeErrorKind::UnboundConstant, format!("unknown definition {name}"))
            }),
            Param(i, args) => {
                let e = self.check_param_args(ctx, *i, args)?;
                match &e.kind {
                    ParamKind::Term(ty) => Ok(ty.instantiate(args)),
                    ParamKind::Type => Err(TypeError::new(
                        TypeErrorKind::NotATerm,
                        format!("parameter {} is a type", e.name),
                    )),
                }
            }
            Star => Ok(Unit),
            Zero => Ok(Nat),
            Succ(n) => {
                self.check(ctx, n, &Nat)?;
                Ok(Nat)
            }
            App(f, a) => {
                if let Lam(body) = &**f {
                    let ta = self.infer(ctx, a)?;
                    let tb = self.infer(&ctx.extend(ta), body)?;
                    return Ok(tb.substitute(0, a));
                }
                let tf = self.infer(ctx, f)?;
                match self.whnf(&tf)? {
                    Pi(dom, cod) => {
                        self.check(ctx, a, &dom)?;
                        Ok(cod.substitute(0, a))
                    }
                    other => Err(TypeError {
                        kind: TypeErrorKind::NotAFunction,
                        message: format!(
                            "{} has type {} and cannot be applied",
                            show(ctx, f),
                            show(ctx, &other)
                        ),
                        expected: None,
                        actual: Some(other),
                        span: None,
                    }),
                }
            }
            Pair(a, b) => {
                let ta = self.infer(ctx, a)?;
                let tb = self.infer(ctx, b)?;
                Ok(Term::product(ta, tb))
            }
            Fst(p) | Snd(p) => {
                let tp = self.infer(ctx, p)?;
                match self.whnf(&tp)? {
                    Sigma(a, b) => {
                        if matches!(t, Fst(_)) {
                            Ok(*a)
                        } else {
                            Ok(b.substitute(0, &Fst(p.clone())))
                        }
                    }
                    other => Err(TypeError::new(
                        TypeErrorKind::NotAPair,
                        format!("{} has type {}, not a pair type", show(ctx, p), show(ctx, &other)),
                    )),
                }
            }
            SumElim {
                motive,
                left,
                right,
                scrut,
            } => {
                let ts = self.infer(ctx, scrut)?;
                let ts = self.whnf(&ts)?;
                let Sum(l, r) = &ts else {
                    return Err(TypeError::new(
                        TypeErrorKind::NotASum,
                        format!("{} has type {}, not a sum", show(ctx, scrut), show(ctx, &ts)),
                    ));
                };
                self.check_type(&ctx.extend(ts.clone()), motive)
                    .map_err(|e| self.motive_err(e))?;
                let lt = motive_at(motive, 1, Inl(bx(Var(0))));
                self.check(&ctx.extend((**l).clone()), left, &lt)?;
                let rt = motive_at(motive, 1, Inr(bx(Var(0))));
                self.check(&ctx.extend((**r).clone()), right, &rt)?;
                Ok(motive.substitute(0, scrut))
            }
            Refl(a) => {
                let ta = self.infer(ctx, a)?;
                Ok(Term::id(ta, (**a).clone(), (**a).clone()))
            }
            J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => {
                let (a, a1, a2) = self.infer_path(ctx, path, lhs, rhs)?;
                self.expect_equal(ctx, &a1, lhs, "left endpoint of J")?;
                self.expect_equal(ctx, &a2, rhs, "right endpoint of J")?;
                let mctx = ctx.extend_many([
                    a.clone(),
                    a.shifted(0, 1),
                    Term::id(a.shifted(0, 2), Var(1), Var(0)),
                ]);
                self.check_type(&mctx, motive).map_err(|e| self.motive_err(e))?;
                let bt = motive
                    .shifted(3, 1)
                    .instantiate(&[Var(0), Var(0), Term::refl(Var(0))]);
                self.check(&ctx.extend(a), base, &bt)?;
                Ok(motive.instantiate(&[(**lhs).clone(), (**rhs).clone(), (**path).clone()]))
            }
            JOver { motive, base, args } => {
                if args.len() != 6 {
                    return Err(TypeError::new(
                        TypeErrorKind::ArityMismatch,
                        "J' takes six arguments",
                    ));
                }
                let (a, a1, a2) = self.infer_path(ctx, &args[2], &args[0], &args[1])?;
                self.expect_equal(ctx, &a1, &args[0], "first base point of J'")?;
                self.expect_equal(ctx, &a2, &args[1], "second base point of J'")?;
                let tq = match self.infer(ctx, &args[5]) {
                    Ok(t) => t,
                    // A bare `refl'` does not determine its family, so read one
                    // off the type of the first fibre point and check against it.
                    Err(e) if e.kind == TypeErrorKind::CannotInfer => {
                        let tu = self.whnf(&self.infer(ctx, &args[3])?)?;
                        let family = tu.abstract_over(&args[0]);
                        let tq = Term::id_over(family, args[2].clone(), args[3].clone(), args[4].clone());
                        self.check(ctx, &args[5], &tq)?;
                        tq
                    }
                    Err(e) => return Err(e),
                };
                let IdOver {
                    family,
                    path,
                    lhs,
                    rhs,
                } = self.whnf(&tq)?
                else {
                    return Err(TypeError::new(
                        TypeErrorKind::NotAnIdentity,
                        format!("{} is not a dependent identification", show(ctx, &args[5])),
                    ));
                };
                self.expect_equal(ctx, &path, &args[2], "base path of J'")?;
                self.expect_equal(ctx, &lhs, &args[3], "first fibre point of J'")?;
                self.expect_equal(ctx, &rhs, &args[4], "second fibre point of J'")?;
                let b = *family;
                let mctx = ctx.extend_many([
                    a.clone(),
                    a.shifted(0, 1),
                    Term::id(a.shifted(0, 2), Var(1), Var(0)),
                    b.shifted(1, 3).instantiate(&[Var(2)]),
                    b.shifted(1, 4).instantiate(&[Var(2)]),
                    Term::id_over(b.shifted(1, 5), Var(2), Var(1), Var(0)),
                ]);
                self.check_type(&mctx, motive).map_err(|e| self.motive_err(e))?;
                let bt = motive.shifted(6, 2).instantiate(&[
                    Var(1),
                    Var(1),
                    Term::refl(Var(1)),
                    Var(0),
                    Var(0),
                    ReflOver(bx(Var(0))),
                ]);
                self.check(&ctx.extend_many([a, b]), base, &bt)?;
                Ok(motive.instantiate(args))
            }
            Ap {
                body,
                lhs,
                rhs,
                path,
            } => {
                let (a, a1, a2) = self.infer_path(ctx, path, lhs, rhs)?;
                self.expect_equal(ctx, &a1, lhs, "left endpoint of ap")?;
                self.expect_equal(ctx, &a2, rhs, "right endpoint of ap")?;
                let b = self.infer(&ctx.extend(a), body)?;
                Ok(Term::id_over(
                    b,
                    (**path).clone(),
                    body.substitute(0, lhs),
                    body.substitute(0, rhs),
                ))
            }
            NatElim {
                motive,
                zero,
                succ,
                scrut,
            } => {
                self.check_type(&ctx.extend(Nat), motive)
                    .map_err(|e| self.motive_err(e))?;
                self.check(ctx, zero, &motive.substitute(0, &Zero))?;
                let sctx = ctx.extend_many([Nat, (**motive).clone()]);
                let st = motive_at(motive, 2, Term::succ(Var(1)));
                self.check(&sctx, succ, &st)?;
                self.check(ctx, scrut, &Nat)?;
                Ok(motive.substitute(0, scrut))
            }
            SchemaCtor {
                schema,
                params,
                cell,
                args,
            } => {
                let s = self.schema(schema)?;
                self.check_params(ctx, s, params)?;
                let c = s.cells.get(*cell).ok_or_else(|| {
                    TypeError::new(TypeErrorKind::ArityMismatch, format!("{schema} has no cell #{cell}"))
                })?;
                if c.args.len() != args.len() {
                    return Err(TypeError::new(
                        TypeErrorKind::ArityMismatch,
                        format!(
                            "constructor {} expects {} arguments, got {}",
                            c.name,
                            c.args.len(),
                            args.len()
                        ),
                    ));
                }
                for i in 0..args.len() {
                    let ty = cells::arg_type(c, params, i).instantiate(&args[..i]);
                    self.check(ctx, &args[i], &ty)?;
                }
                Ok(cells::ctor_type(s, params, *cell, args))
            }
            SchemaElim {
                schema,
                params,
                motive,
                methods,
                scrut,
            } => {
                let s = self.schema(schema)?;
                self.check_elim_data(ctx, s, params, motive, methods)?;
                self.check(ctx, scrut, &cells::carrier(s, params))?;
                Ok(motive.substitute(0, scrut))
            }
            SchemaPathComp {
                schema,
                params,
                cell,
                motive,
                methods,
                args,
            } => {
                let s = self.schema(schema)?;
                let data = self.check_elim_data(ctx, s, params, motive, methods)?;
                let c = s.cells.get(*cell).ok_or_else(|| {
                    TypeError::new(TypeErrorKind::ArityMismatch, format!("{schema} has no cell #{cell}"))
                })?;
                if !matches!(c.boundary, crate::schema::Boundary::Path { .. }) {
                    return Err(TypeError::new(
                        TypeErrorKind::ArityMismatch,
                        format!("{} is not a path constructor", c.name),
                    ));
                }
                if c.args.len() != args.len() {
                    return Err(TypeError::new(
                        TypeErrorKind::ArityMismatch,
                        format!("constructor {} expects {} arguments", c.name, c.args.len()),
                    ));
                }
                for i in 0..args.len() {
                    let ty = cells::arg_type(c, params, i).instantiate(&args[..i]);
                    self.check(ctx, &args[i], &ty)?;
                }
                Ok(data.path_comp_type(*cell, args))
            }
            Lam(_) | Inl(_) | Inr(_) | ReflOver(_) => Err(TypeError::new(
                TypeErrorKind::CannotInfer,
                format!("cannot infer a type for {}; add a type annotation by checking it against a type", show(ctx, t)),
            )),
            Pi(..) | Sigma(..) | Sum(..) | Unit | Nat | Id(..) | IdOver { .. } | Square { .. }
            | SquareOver { .. } | Schema { .. } => Err(TypeError::new(
                TypeErrorKind::NotATerm,
                format!("{} is a type, not a term", show(ctx, t)),
            )),
        }
    }

    /// Checks motive and methods of an eliminator.
    fn check_elim_data<'b>(
        &self,
        ctx: &Context,
        s: &'b Schema,
        params: &'b [Abs],
        motive: &'b Term,
        methods: &'b [Abs],
    ) -> TResult<ElimData<'b>> {
        self.check_params(ctx, s, params)?;
        let h = cells::carrier(s, params);
        self.check_type(&ctx.extend(h), motive)
            .map_err(|e| self.motive_err(e))?;
        if methods.len() != s.cells.len() {
            return Err(TypeError::new(
                TypeErrorKind::ArityMismatch,
                format!(
                    "eliminator of {} expects {} methods, got {}",
                    s.name,
                    s.cells.len(),
                    methods.len()
                ),
            ));
        }
        let data = ElimData {
            schema: s,
            params,
            motive,
            methods,
        };
        for (k, m) in methods.iter().enumerate() {
            let (tele, result) = data
                .method_signature(self.globals, k)
                .map_err(|msg| TypeError::new(TypeErrorKind::BadBoundary, msg))?;
            if m.binds != tele.len() {
                return Err(TypeError::new(
                    TypeErrorKind::ArityMismatch,
                    format!(
                        "method for {} binds {} variables, expected {}",
                        s.cells[k].name,
                        m.binds,
                        tele.len()
                    ),
                ));
            }
            self.check(&ctx.extend_many(tele), &m.body, &result)?;
        }
        Ok(data)
    }

    pub fn check(&self, ctx: &Context, t: &Term, a: &Term) -> TResult<()> {
        use Term::*;
        match t {
            Lam(body) => match self.whnf(a)? {
                Pi(dom, cod) => self.check(&ctx.extend(*dom), body, &cod),
                other => Err(TypeError {
                    kind: TypeErrorKind::Mismatch,
                    message: format!(
                        "a function was given where {} was expected",
                        show(ctx, &other)
                    ),
                    expected: Some(other),
                    actual: None,
                    span: None,
                }),
            },
            Pair(x, y) => match self.whnf(a)? {
                Sigma(fa, fb) => {
                    self.check(ctx, x, &fa)?;
                    self.check(ctx, y, &fb.substitute(0, x))
                }
                other => Err(TypeError {
                    kind: TypeErrorKind::Mismatch,
                    message: format!("a pair was given where {} was expected", show(ctx, &other)),
                    expected: Some(other),
                    actual: None,
                    span: None,
                }),
            },
            Inl(x) | Inr(x) => match self.whnf(a)? {
                Sum(l, r) => {
                    let side = if matches!(t, Inl(_)) { l } else { r };
                    self.check(ctx, x, &side)
                }
                other => Err(TypeError {
                    kind: TypeErrorKind::Mismatch,
                    message: format!(
                        "an injection was given where {} was expected",
                        show(ctx, &other)
                    ),
                    expected: Some(other),
                    actual: None,
                    span: None,
                }),
            },
            Refl(x) => match self.whnf(a)? {
                Id(ty, l, r) => {
                    self.check(ctx, x, &ty)?;
                    self.expect_equal(ctx, &l, x, "left side of refl")?;
                    self.expect_equal(ctx, &r, x, "right side of refl")
                }
                other => Err(TypeError {
                    kind: TypeErrorKind::Mismatch,
                    message: format!("refl was given where {} was expected", show(ctx, &other)),
                    expected: Some(other),
                    actual: None,
                    span: None,
                }),
            },
            ReflOver(b) => match self.whnf(a)? {
                IdOver {
                    family,
                    path,
                    lhs,
                    rhs,
                } => {
                    let p = self.normalize(&path)?;
                    let Refl(base) = p else {
                        return Err(TypeError::new(
                            TypeErrorKind::Mismatch,
                            format!(
                                "refl' lies over refl, but the base path is {}",
                                show(ctx, &p)
                            ),
                        ));
                    };
                    self.check(ctx, b, &family.substitute(0, &base))?;
                    self.expect_equal(ctx, &lhs, b, "left side of refl'")?;
                    self.expect_equal(ctx, &rhs, b, "right side of refl'")
                }
                other => Err(TypeError {
                    kind: TypeErrorKind::Mismatch,
                    message: format!("refl' was given where {} was expected", show(ctx, &other)),
                    expected: Some(other),
                    actual: None,
                    span: None,
                }),
            },
            _ => {
                let got = self.infer(ctx, t)?;
                self.expect_equal(ctx, a, &got, &format!("type of {}", show(ctx, t)))
            }
        }
    }
}

#[cfg(test)]
mod tests;
