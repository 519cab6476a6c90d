//! Random well-typed terms, built type-first so every output is known to
//! check (`chk`) or to infer (`inf`) at the requested type.

use hitcell::syntax::{alpha_equal, Abs, Term};
use proptest::prelude::RngExt;
use proptest::test_runner::{RngAlgorithm, TestRng};

pub struct Gen {
    rng: TestRng,
    /// Keep every generated type finite (no `Nat`), so that the finite-set
    /// model can evaluate at it.
    pub finite: bool,
}

impl Gen {
    pub fn new(seed: [u8; 32], finite: bool) -> Self {
        Gen {
            rng: TestRng::from_seed(RngAlgorithm::ChaCha, &seed),
            finite,
        }
    }

    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.pick(2) == 0
    }

    /// A type well-formed in `ctx` (types of the variables, outermost first).
    pub fn ty(&mut self, ctx: &[Term], depth: usize) -> Term {
        let base = if self.finite { 1 } else { 2 };
        let n = if depth == 0 { base } else { base + 5 };
        let k = self.pick(n);
        let k = if self.finite && k >= 1 { k + 1 } else { k };
        match k {
            0 => Term::Unit,
            1 => Term::Nat,
            2 => {
                let (a, b) = (self.ty(ctx, depth - 1), self.ty(ctx, depth - 1));
                Term::sum(a, b)
            }
            3 => {
                let (a, b) = (self.ty(ctx, depth - 1), self.ty(ctx, depth - 1));
                Term::product(a, b)
            }
            4 => {
                let (a, b) = (self.ty(ctx, depth - 1), self.ty(ctx, depth - 1));
                Term::arrow(a, b)
            }
            5 => {
                let a = self.ty(ctx, depth - 1);
                let x = self.inf(ctx, &a, depth - 1);
                Term::id(a, x.clone(), x)
            }
            _ => trunc(self.ty(ctx, depth - 1)),
        }
    }

    /// A context of up to `max` variables.
    pub fn ctx(&mut self, max: usize) -> Vec<Term> {
        let n = self.pick(max + 1);
        let mut ctx = Vec::new();
        for _ in 0..n {
            let t = self.ty(&ctx, 2);
            ctx.push(t);
        }
        ctx
    }

    fn vars_of(&self, ctx: &[Term], ty: &Term) -> Vec<usize> {
        (0..ctx.len())
            .filter(|&i| alpha_equal(&ctx[ctx.len() - 1 - i].shifted(0, i + 1), ty))
            .collect()
    }

    fn numeral(&mut self) -> Term {
        let n = self.pick(3) as u64;
        Term::numeral(n)
    }

    /// An introduction form that infers, if the type has one.
    fn intro_inf(&mut self, ctx: &[Term], ty: &Term, depth: usize) -> Option<Term> {
        match ty {
            Term::Unit => Some(Term::Star),
            Term::Nat => Some(self.numeral()),
            Term::Sigma(a, b) if !b.has_free_var(0) => {
                let b = b.substitute(0, &Term::Star);
                let x = self.inf(ctx, a, depth.saturating_sub(1));
                let y = self.inf(ctx, &b, depth.saturating_sub(1));
                Some(Term::pair(x, y))
            }
            Term::Id(_, x, y) if alpha_equal(x, y) => Some(Term::refl((**x).clone())),
            Term::Schema { name, params } if name == "Trunc" => {
                let a = params[0].body.clone();
                let x = self.inf(ctx, &a, depth.saturating_sub(1));
                Some(Term::SchemaCtor {
                    schema: "Trunc".into(),
                    params: params.clone(),
                    cell: 0,
                    args: vec![x],
                })
            }
            _ => None,
        }
    }

    /// A term that checks against `ty` in `ctx`.
    pub fn chk(&mut self, ctx: &[Term], ty: &Term, depth: usize) -> Term {
        if depth > 0 && self.coin() {
            return self.inf(ctx, ty, depth);
        }
        let d = depth.saturating_sub(1);
        match ty {
            Term::Unit => Term::Star,
            Term::Nat => {
                if depth > 0 && self.coin() {
                    Term::succ(self.chk(ctx, &Term::Nat, d))
                } else {
                    self.numeral()
                }
            }
            Term::Sum(l, r) => {
                if self.coin() {
                    Term::Inl(Box::new(self.chk(ctx, l, d)))
                } else {
                    Term::Inr(Box::new(self.chk(ctx, r, d)))
                }
            }
            Term::Sigma(a, b) => {
                let x = self.chk(ctx, a, d);
                let bx = b.substitute(0, &x);
                let y = self.chk(ctx, &bx, d);
                Term::pair(x, y)
            }
            Term::Pi(a, b) => {
                let mut inner = ctx.to_vec();
                inner.push((**a).clone());
                Term::lam(self.chk(&inner, b, d))
            }
            _ => self.inf(ctx, ty, depth),
        }
    }

    /// A term whose inferred type is `ty` in `ctx`.
    pub fn inf(&mut self, ctx: &[Term], ty: &Term, depth: usize) -> Term {
        let vars = self.vars_of(ctx, ty);
        if depth == 0 {
            if !vars.is_empty() && self.coin() {
                let i = vars[self.pick(vars.len())];
                return Term::Var(i);
            }
            if let Some(t) = self.intro_inf(ctx, ty, 0) {
                return t;
            }
            if let Some(&i) = vars.first() {
                return Term::Var(i);
            }
            // A recursor on a numeral infers whatever its motive says.
            let z = self.chk(ctx, ty, 0);
            let s = Term::Var(0);
            return Term::nat_elim(ty.shifted(0, 1), z, s, Term::Zero);
        }
        let d = depth - 1;
        loop {
            match self.pick(9) {
                0 if !vars.is_empty() => {
                    let i = vars[self.pick(vars.len())];
                    return Term::Var(i);
                }
                1 => {
                    if let Some(t) = self.intro_inf(ctx, ty, depth) {
                        return t;
                    }
                }
                2 => {
                    // (fun x => body) arg
                    let a = self.ty(ctx, 1);
                    let arg = self.inf(ctx, &a, d);
                    let mut inner = ctx.to_vec();
                    inner.push(a);
                    let body = self.inf(&inner, &ty.shifted(0, 1), d);
                    return Term::app(Term::lam(body), arg);
                }
                3 => {
                    let z = self.chk(ctx, ty, d);
                    let mut inner = ctx.to_vec();
                    inner.push(Term::Nat);
                    inner.push(ty.shifted(0, 1));
                    let s = self.chk(&inner, &ty.shifted(0, 2), d);
                    let n = self.chk(ctx, &Term::Nat, d.min(1));
                    return Term::nat_elim(ty.shifted(0, 1), z, s, n);
                }
                4 => {
                    let a = self.ty(ctx, 1);
                    let x = self.inf(ctx, &a, d.min(1));
                    let mut inner = ctx.to_vec();
                    inner.push(a);
                    let base = self.chk(&inner, &ty.shifted(0, 1), d);
                    return Term::j(ty.shifted(0, 3), base, x.clone(), x.clone(), Term::refl(x));
                }
                5 => {
                    let (l, r) = (self.ty(ctx, 1), self.ty(ctx, 1));
                    let scrut = self.inf(ctx, &Term::sum(l.clone(), r.clone()), d);
                    let mut left_ctx = ctx.to_vec();
                    left_ctx.push(l);
                    let mut right_ctx = ctx.to_vec();
                    right_ctx.push(r);
                    let left = self.chk(&left_ctx, &ty.shifted(0, 1), d);
                    let right = self.chk(&right_ctx, &ty.shifted(0, 1), d);
                    return Term::SumElim {
                        motive: Box::new(ty.shifted(0, 1)),
                        left: Box::new(left),
                        right: Box::new(right),
                        scrut: Box::new(scrut),
                    };
                }
                6 => {
                    let b = self.ty(ctx, 1);
                    let p = self.inf(ctx, &Term::product(ty.clone(), b), d);
                    return Term::Fst(Box::new(p));
                }
                7 => {
                    let a = self.ty(ctx, 1);
                    let p = self.inf(ctx, &Term::product(a, ty.clone()), d);
                    return Term::Snd(Box::new(p));
                }
                8 => {
                    let a = self.ty(ctx, 1);
                    let f = self.inf(ctx, &Term::arrow(a.clone(), ty.clone()), d);
                    let x = self.chk(ctx, &a, d);
                    return Term::app(f, x);
                }
                _ => {}
            }
        }
    }
}

pub fn trunc(a: Term) -> Term {
    Term::Schema {
        name: "Trunc".into(),
        params: vec![Abs::closed(a)],
    }
}
