//! Core abstract syntax: de Bruijn indexed terms, contexts and substitutions.
//!
//! Types and terms share one sort. Every binder position is listed in
//! [`Term::children`], which is the single source of truth for how many
//! variables each child binds; shifting, substitution and the scope checks
//! are all written against it.

use std::fmt;

use thiserror::Error;

/// A term body under `binds` fresh variables (the innermost is `Var(0)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Abs {
    pub binds: usize,
    pub body: Term,
}

impl Abs {
    pub fn new(binds: usize, body: Term) -> Self {
        Abs { binds, body }
    }

    pub fn closed(body: Term) -> Self {
        Abs { binds: 0, body }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    /// Reference to a top-level definition.
    Const(String),
    /// A parameter of the enclosing schema or rule, applied to its context extension.
    Param(usize, Vec<Term>),

    Pi(Box<Term>, Box<Term>),
    Lam(Box<Term>),
    App(Box<Term>, Box<Term>),

    Sigma(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),

    Unit,
    Star,

    Sum(Box<Term>, Box<Term>),
    Inl(Box<Term>),
    Inr(Box<Term>),
    SumElim {
        motive: Box<Term>,
        left: Box<Term>,
        right: Box<Term>,
        scrut: Box<Term>,
    },

    Id(Box<Term>, Box<Term>, Box<Term>),
    Refl(Box<Term>),
    /// `J(x y e. C, x. c, a1, a2, p)`
    J {
        motive: Box<Term>,
        base: Box<Term>,
        lhs: Box<Term>,
        rhs: Box<Term>,
        path: Box<Term>,
    },

    /// `IdOver[x. B] p u v`
    IdOver {
        family: Box<Term>,
        path: Box<Term>,
        lhs: Box<Term>,
        rhs: Box<Term>,
    },
    ReflOver(Box<Term>),
    /// `J'(x y e u v d. C, x u. c, a1, a2, p, b1, b2, q)`; `args` always has six entries.
    JOver {
        motive: Box<Term>,
        base: Box<Term>,
        args: Vec<Term>,
    },
    /// `ap(x. f, a1, a2, p)`
    Ap {
        body: Box<Term>,
        lhs: Box<Term>,
        rhs: Box<Term>,
        path: Box<Term>,
    },

    /// Type of squares with the given four sides in `ty`.
    Square {
        ty: Box<Term>,
        top: Box<Term>,
        bottom: Box<Term>,
        left: Box<Term>,
        right: Box<Term>,
    },
    /// Squares in a family lying over a square of the base.
    SquareOver {
        family: Box<Term>,
        square: Box<Term>,
        top: Box<Term>,
        bottom: Box<Term>,
        left: Box<Term>,
        right: Box<Term>,
    },

    Nat,
    Zero,
    Succ(Box<Term>),
    /// `natrec(x. C, z, x y. s, n)`
    NatElim {
        motive: Box<Term>,
        zero: Box<Term>,
        succ: Box<Term>,
        scrut: Box<Term>,
    },

    /// Formation: a schema applied to its parameters.
    Schema {
        name: String,
        params: Vec<Abs>,
    },
    SchemaCtor {
        schema: String,
        params: Vec<Abs>,
        cell: usize,
        args: Vec<Term>,
    },
    SchemaElim {
        schema: String,
        params: Vec<Abs>,
        motive: Box<Term>,
        methods: Vec<Abs>,
        scrut: Box<Term>,
    },
    /// Propositional computation witness for a path cell.
    SchemaPathComp {
        schema: String,
        params: Vec<Abs>,
        cell: usize,
        motive: Box<Term>,
        methods: Vec<Abs>,
        args: Vec<Term>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("shifting would make variable index {index} negative")]
    NegativeIndex { index: usize },
}

pub fn bx(t: Term) -> Box<Term> {
    Box::new(t)
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(bx(f), bx(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lam(body: Term) -> Term {
        Term::Lam(bx(body))
    }

    pub fn pi(dom: Term, cod: Term) -> Term {
        Term::Pi(bx(dom), bx(cod))
    }

    /// Non-dependent function type; `cod` lives in the same context as `dom`.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::Pi(bx(dom), bx(cod.shifted(0, 1)))
    }

    pub fn sigma(fst: Term, snd: Term) -> Term {
        Term::Sigma(bx(fst), bx(snd))
    }

    pub fn product(a: Term, b: Term) -> Term {
        Term::Sigma(bx(a), bx(b.shifted(0, 1)))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(bx(a), bx(b))
    }

    pub fn sum(l: Term, r: Term) -> Term {
        Term::Sum(bx(l), bx(r))
    }

    pub fn id(ty: Term, lhs: Term, rhs: Term) -> Term {
        Term::Id(bx(ty), bx(lhs), bx(rhs))
    }

    pub fn refl(a: Term) -> Term {
        Term::Refl(bx(a))
    }

    pub fn succ(n: Term) -> Term {
        Term::Succ(bx(n))
    }

    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    pub fn id_over(family: Term, path: Term, lhs: Term, rhs: Term) -> Term {
        Term::IdOver {
            family: bx(family),
            path: bx(path),
            lhs: bx(lhs),
            rhs: bx(rhs),
        }
    }

    pub fn nat_elim(motive: Term, zero: Term, succ: Term, scrut: Term) -> Term {
        Term::NatElim {
            motive: bx(motive),
            zero: bx(zero),
            succ: bx(succ),
            scrut: bx(scrut),
        }
    }

    pub fn j(motive: Term, base: Term, lhs: Term, rhs: Term, path: Term) -> Term {
        Term::J {
            motive: bx(motive),
            base: bx(base),
            lhs: bx(lhs),
            rhs: bx(rhs),
            path: bx(path),
        }
    }

    pub fn ap(body: Term, lhs: Term, rhs: Term, path: Term) -> Term {
        Term::Ap {
            body: bx(body),
            lhs: bx(lhs),
            rhs: bx(rhs),
            path: bx(path),
        }
    }

    /// Every immediate subterm together with the number of variables it binds.
    pub fn children(&self) -> Vec<(&Term, usize)> {
        use Term::*;
        match self {
            Var(_) | Const(_) | Unit | Star | Nat | Zero => vec![],
            Param(_, args) => args.iter().map(|a| (a, 0)).collect(),
            Pi(a, b) | Sigma(a, b) => vec![(a, 0), (b, 1)],
            Lam(b) => vec![(b, 1)],
            App(f, a) | Pair(f, a) | Sum(f, a) => vec![(f, 0), (a, 0)],
            Fst(t) | Snd(t) | Inl(t) | Inr(t) | Refl(t) | ReflOver(t) | Succ(t) => vec![(t, 0)],
            SumElim {
                motive,
                left,
                right,
                scrut,
            } => vec![(motive, 1), (left, 1), (right, 1), (scrut, 0)],
            Id(a, x, y) => vec![(a, 0), (x, 0), (y, 0)],
            J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => vec![(motive, 3), (base, 1), (lhs, 0), (rhs, 0), (path, 0)],
            IdOver {
                family,
                path,
                lhs,
                rhs,
            } => vec![(family, 1), (path, 0), (lhs, 0), (rhs, 0)],
            JOver { motive, base, args } => {
                let mut v = vec![(&**motive, 6), (&**base, 2)];
                v.extend(args.iter().map(|a| (a, 0)));
                v
            }
            Ap {
                body,
                lhs,
                rhs,
                path,
            } => vec![(body, 1), (lhs, 0), (rhs, 0), (path, 0)],
            Square {
                ty,
                top,
                bottom,
                left,
                right,
            } => vec![(ty, 0), (top, 0), (bottom, 0), (left, 0), (right, 0)],
            SquareOver {
                family,
                square,
                top,
                bottom,
                left,
                right,
            } => vec![
                (family, 1),
                (square, 0),
                (top, 0),
                (bottom, 0),
                (left, 0),
                (right, 0),
            ],
            NatElim {
                motive,
                zero,
                succ,
                scrut,
            } => vec![(motive, 1), (zero, 0), (succ, 2), (scrut, 0)],
            Schema { params, .. } => params.iter().map(|p| (&p.body, p.binds)).collect(),
            SchemaCtor { params, args, .. } => params
                .iter()
                .map(|p| (&p.body, p.binds))
                .chain(args.iter().map(|a| (a, 0)))
                .collect(),
            SchemaElim {
                params,
                motive,
                methods,
                scrut,
                ..
            } => params
                .iter()
                .map(|p| (&p.body, p.binds))
                .chain(std::iter::once((&**motive, 1)))
                .chain(methods.iter().map(|m| (&m.body, m.binds)))
                .chain(std::iter::once((&**scrut, 0)))
                .collect(),
            SchemaPathComp {
                params,
                motive,
                methods,
                args,
                ..
            } => params
                .iter()
                .map(|p| (&p.body, p.binds))
                .chain(std::iter::once((&**motive, 1)))
                .chain(methods.iter().map(|m| (&m.body, m.binds)))
                .chain(args.iter().map(|a| (a, 0)))
                .collect(),
        }
    }

    /// Rebuilds the node with every child replaced by `f(child, binders)`.
    /// Children are visited in the order of [`Term::children`].
    pub fn try_map<E>(
        &self,
        f: &mut impl FnMut(&Term, usize) -> Result<Term, E>,
    ) -> Result<Term, E> {
        use Term::*;
        let mut g = |t: &Term, k: usize| f(t, k).map(bx);
        let abs = |a: &Abs, f: &mut dyn FnMut(&Term, usize) -> Result<Term, E>| -> Result<Abs, E> {
            Ok(Abs::new(a.binds, f(&a.body, a.binds)?))
        };
        Ok(match self {
            Var(_) | Const(_) | Unit | Star | Nat | Zero => self.clone(),
            Param(i, args) => Param(*i, args.iter().map(|a| f(a, 0)).collect::<Result<_, _>>()?),
            Pi(a, b) => Pi(g(a, 0)?, g(b, 1)?),
            Sigma(a, b) => Sigma(g(a, 0)?, g(b, 1)?),
            Lam(b) => Lam(g(b, 1)?),
            App(x, y) => App(g(x, 0)?, g(y, 0)?),
            Pair(x, y) => Pair(g(x, 0)?, g(y, 0)?),
            Sum(x, y) => Sum(g(x, 0)?, g(y, 0)?),
            Fst(t) => Fst(g(t, 0)?),
            Snd(t) => Snd(g(t, 0)?),
            Inl(t) => Inl(g(t, 0)?),
            Inr(t) => Inr(g(t, 0)?),
            Refl(t) => Refl(g(t, 0)?),
            ReflOver(t) => ReflOver(g(t, 0)?),
            Succ(t) => Succ(g(t, 0)?),
            SumElim {
                motive,
                left,
                right,
                scrut,
            } => SumElim {
                motive: g(motive, 1)?,
                left: g(left, 1)?,
                right: g(right, 1)?,
                scrut: g(scrut, 0)?,
            },
            Id(a, x, y) => Id(g(a, 0)?, g(x, 0)?, g(y, 0)?),
            J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => J {
                motive: g(motive, 3)?,
                base: g(base, 1)?,
                lhs: g(lhs, 0)?,
                rhs: g(rhs, 0)?,
                path: g(path, 0)?,
            },
            IdOver {
                family,
                path,
                lhs,
                rhs,
            } => IdOver {
                family: g(family, 1)?,
                path: g(path, 0)?,
                lhs: g(lhs, 0)?,
                rhs: g(rhs, 0)?,
            },
            JOver { motive, base, args } => JOver {
                motive: g(motive, 6)?,
                base: g(base, 2)?,
                args: args.iter().map(|a| f(a, 0)).collect::<Result<_, _>>()?,
            },
            Ap {
                body,
                lhs,
                rhs,
                path,
            } => Ap {
                body: g(body, 1)?,
                lhs: g(lhs, 0)?,
                rhs: g(rhs, 0)?,
                path: g(path, 0)?,
            },
            Square {
                ty,
                top,
                bottom,
                left,
                right,
            } => Square {
                ty: g(ty, 0)?,
                top: g(top, 0)?,
                bottom: g(bottom, 0)?,
                left: g(left, 0)?,
                right: g(right, 0)?,
            },
            SquareOver {
                family,
                square,
                top,
                bottom,
                left,
                right,
            } => SquareOver {
                family: g(family, 1)?,
                square: g(square, 0)?,
                top: g(top, 0)?,
                bottom: g(bottom, 0)?,
                left: g(left, 0)?,
                right: g(right, 0)?,
            },
            NatElim {
                motive,
                zero,
                succ,
                scrut,
            } => NatElim {
                motive: g(motive, 1)?,
                zero: g(zero, 0)?,
                succ: g(succ, 2)?,
                scrut: g(scrut, 0)?,
            },
            Schema { name, params } => Schema {
                name: name.clone(),
                params: params.iter().map(|p| abs(p, f)).collect::<Result<_, _>>()?,
            },
            SchemaCtor {
                schema,
                params,
                cell,
                args,
            } => SchemaCtor {
                schema: schema.clone(),
                params: params.iter().map(|p| abs(p, f)).collect::<Result<_, _>>()?,
                cell: *cell,
                args: args.iter().map(|a| f(a, 0)).collect::<Result<_, _>>()?,
            },
            SchemaElim {
                schema,
                params,
                motive,
                methods,
                scrut,
            } => SchemaElim {
                schema: schema.clone(),
                params: params.iter().map(|p| abs(p, f)).collect::<Result<_, _>>()?,
                motive: bx(f(motive, 1)?),
                methods: methods
                    .iter()
                    .map(|m| abs(m, f))
                    .collect::<Result<_, _>>()?,
                scrut: bx(f(scrut, 0)?),
            },
            SchemaPathComp {
                schema,
                params,
                cell,
                motive,
                methods,
                args,
            } => SchemaPathComp {
                schema: schema.clone(),
                params: params.iter().map(|p| abs(p, f)).collect::<Result<_, _>>()?,
                cell: *cell,
                motive: bx(f(motive, 1)?),
                methods: methods
                    .iter()
                    .map(|m| abs(m, f))
                    .collect::<Result<_, _>>()?,
                args: args.iter().map(|a| f(a, 0)).collect::<Result<_, _>>()?,
            },
        })
    }

    pub fn map(&self, f: &mut impl FnMut(&Term, usize) -> Term) -> Term {
        let r: Result<Term, std::convert::Infallible> = self.try_map(&mut |t, k| Ok(f(t, k)));
        match r {
            Ok(t) => t,
            Err(e) => match e {},
        }
    }

    /// Adds `amount` to every free index `>= cutoff`.
    pub fn shift(&self, cutoff: usize, amount: isize) -> Result<Term, SyntaxError> {
        if amount == 0 {
            return Ok(self.clone());
        }
        match self {
            Term::Var(i) if *i >= cutoff => {
                let j = *i as isize + amount;
                if j < 0 {
                    Err(SyntaxError::NegativeIndex { index: *i })
                } else {
                    Ok(Term::Var(j as usize))
                }
            }
            Term::Var(_) => Ok(self.clone()),
            _ => self.try_map(&mut |t, k| t.shift(cutoff + k, amount)),
        }
    }

    /// The body of a one-binder abstraction whose instance at `target` is
    /// `self`: occurrences of `target` become the new variable.
    pub fn abstract_over(&self, target: &Term) -> Term {
        fn go(t: &Term, target: &Term, k: usize) -> Term {
            if alpha_equal(t, &target.shifted(0, k)) {
                return Term::Var(k);
            }
            match t {
                Term::Var(i) if *i >= k => Term::Var(i + 1),
                Term::Var(_) => t.clone(),
                _ => t.map(&mut |c, b| go(c, target, k + b)),
            }
        }
        go(self, target, 0)
    }

    /// Upward shift, which can never fail.
    pub fn shifted(&self, cutoff: usize, amount: usize) -> Term {
        self.shift(cutoff, amount as isize)
            .expect("upward shifts cannot underflow")
    }

    /// Replaces `Var(idx)` by `value` and decrements the indices above it.
    /// `value` is scoped in the context with `idx` removed.
    pub fn substitute(&self, idx: usize, value: &Term) -> Term {
        let mut terms: Vec<Term> = (0..idx).map(Term::Var).collect();
        terms.push(value.clone());
        Substitution::new(terms, idx).apply(self)
    }

    /// Instantiates the `args.len()` innermost binders; `args[0]` is the outermost.
    pub fn instantiate(&self, args: &[Term]) -> Term {
        if args.is_empty() {
            return self.clone();
        }
        Substitution::new(args.iter().rev().cloned().collect(), 0).apply(self)
    }

    pub fn has_free_var(&self, idx: usize) -> bool {
        match self {
            Term::Var(i) => *i == idx,
            _ => self
                .children()
                .into_iter()
                .any(|(c, k)| c.has_free_var(idx + k)),
        }
    }

    /// Number of enclosing variables the term needs (one more than its largest free index).
    pub fn scope_depth(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            _ => self
                .children()
                .into_iter()
                .map(|(c, k)| c.scope_depth().saturating_sub(k))
                .max()
                .unwrap_or(0),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.scope_depth() == 0
    }

    /// Pre-order search over all subterms (binders are not tracked).
    pub fn any(&self, pred: &mut impl FnMut(&Term) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|(c, _)| c.any(pred))
    }

    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(|(c, _)| c.size())
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(|(c, _)| c.depth())
            .max()
            .unwrap_or(0)
    }

    /// Replaces every `Param(i, args)` by the `i`th actual parameter applied to `args`.
    pub fn instantiate_params(&self, params: &[Abs]) -> Term {
        self.instantiate_params_at(params, 0)
    }

    /// Like [`Term::instantiate_params`] for a term that sits `base` binders below
    /// the context the actual parameters live in.
    pub fn instantiate_params_at(&self, params: &[Abs], base: usize) -> Term {
        fn go(t: &Term, params: &[Abs], depth: usize) -> Term {
            match t {
                Term::Param(i, args) if *i < params.len() => {
                    let args: Vec<Term> = args.iter().map(|a| go(a, params, depth)).collect();
                    let p = &params[*i];
                    p.body.shifted(p.binds, depth).instantiate(&args)
                }
                _ => t.map(&mut |c, k| go(c, params, depth + k)),
            }
        }
        go(self, params, base)
    }

    /// Shifts parameter references: `Param(i)` with `i >= from` becomes `Param(i + by)`.
    pub fn shift_params(&self, from: usize, by: usize) -> Term {
        match self {
            Term::Param(i, args) => Term::Param(
                if *i >= from { i + by } else { *i },
                args.iter().map(|a| a.shift_params(from, by)).collect(),
            ),
            _ => self.map(&mut |c, _| c.shift_params(from, by)),
        }
    }

    pub fn mentions_param(&self, pred: &mut impl FnMut(usize) -> bool) -> bool {
        self.any(&mut |t| matches!(t, Term::Param(i, _) if pred(*i)))
    }
}

/// Alpha-equivalence is structural equality of the de Bruijn representation.
pub fn alpha_equal(t: &Term, u: &Term) -> bool {
    t == u
}

/// A parallel substitution: `Var(i)` maps to `terms[i]` for `i < terms.len()`,
/// and to `Var(i - terms.len() + shift)` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub terms: Vec<Term>,
    pub shift: usize,
}

impl Substitution {
    pub fn new(terms: Vec<Term>, shift: usize) -> Self {
        Substitution { terms, shift }
    }

    pub fn identity() -> Self {
        Substitution {
            terms: vec![],
            shift: 0,
        }
    }

    pub fn apply(&self, t: &Term) -> Term {
        self.apply_at(t, 0)
    }

    fn apply_at(&self, t: &Term, depth: usize) -> Term {
        match t {
            Term::Var(i) if *i < depth => t.clone(),
            Term::Var(i) => {
                let j = i - depth;
                match self.terms.get(j) {
                    Some(s) => s.shifted(0, depth),
                    None => Term::Var(j - self.terms.len() + self.shift + depth),
                }
            }
            _ => t.map(&mut |c, k| self.apply_at(c, depth + k)),
        }
    }
}

/// A telescope of types, each well-formed in the prefix before it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<Term>,
}

impl Context {
    pub fn new() -> Self {
        Context { entries: vec![] }
    }

    pub fn from_entries(entries: Vec<Term>) -> Self {
        Context { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Term] {
        &self.entries
    }

    /// Type of `Var(i)`, weakened into the full context.
    pub fn lookup(&self, i: usize) -> Option<Term> {
        let n = self.entries.len();
        if i >= n {
            return None;
        }
        Some(self.entries[n - 1 - i].shifted(0, i + 1))
    }

    pub fn extend(&self, ty: Term) -> Context {
        let mut entries = self.entries.clone();
        entries.push(ty);
        Context { entries }
    }

    pub fn extend_many(&self, tys: impl IntoIterator<Item = Term>) -> Context {
        let mut entries = self.entries.clone();
        entries.extend(tys);
        Context { entries }
    }

    pub fn push(&mut self, ty: Term) {
        self.entries.push(ty);
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::surface::pretty::pretty_print(self, &[]))
    }
}
