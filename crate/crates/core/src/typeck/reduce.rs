use super::cells;
use super::Globals;
use crate::syntax::{bx, Term};

pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuelExhausted {
    pub limit: usize,
}

impl std::fmt::Display for FuelExhausted {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "reduction did not finish within {} steps", self.limit)
    }
}

/// One weak-head step, leftmost-outermost. `None` means the term is head-normal.
pub fn reduce_step(g: Globals<'_>, t: &Term) -> Option<Term> {
    use Term::*;
    match t {
        Const(name) => g.def(name).map(|d| d.body.clone()),
        App(f, a) => match &**f {
            Lam(body) => Some(body.substitute(0, a)),
            _ => reduce_step(g, f).map(|f2| App(bx(f2), a.clone())),
        },
        Fst(p) => match &**p {
            Pair(a, _) => Some((**a).clone()),
            _ => reduce_step(g, p).map(|p2| Fst(bx(p2))),
        },
        Snd(p) => match &**p {
            Pair(_, b) => Some((**b).clone()),
            _ => reduce_step(g, p).map(|p2| Snd(bx(p2))),
        },
        SumElim {
            motive,
            left,
            right,
            scrut,
        } => match &**scrut {
            Inl(x) => Some(left.substitute(0, x)),
            Inr(y) => Some(right.substitute(0, y)),
            _ => reduce_step(g, scrut).map(|s| SumElim {
                motive: motive.clone(),
                left: left.clone(),
                right: right.clone(),
                scrut: bx(s),
            }),
        },
        J {
            motive,
            base,
            lhs,
            rhs,
            path,
        } => match &**path {
            Refl(a) => Some(base.substitute(0, a)),
            _ => reduce_step(g, path).map(|p| J {
                motive: motive.clone(),
                base: base.clone(),
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                path: bx(p),
            }),
        },
        JOver { motive, base, args } => match &args[5] {
            ReflOver(b) => Some(base.instantiate(&[args[0].clone(), (**b).clone()])),
            q => reduce_step(g, q).map(|q2| {
                let mut args = args.clone();
                args[5] = q2;
                JOver {
                    motive: motive.clone(),
                    base: base.clone(),
                    args,
                }
            }),
        },
        Ap {
            body,
            lhs,
            rhs,
            path,
        } => match &**path {
            Refl(a) => Some(ReflOver(bx(body.substitute(0, a)))),
            _ => reduce_step(g, path).map(|p| Ap {
                body: body.clone(),
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                path: bx(p),
            }),
        },
        NatElim {
            motive,
            zero,
            succ,
            scrut,
        } => match &**scrut {
            Zero => Some((**zero).clone()),
            Succ(n) => {
                let rec = NatElim {
                    motive: motive.clone(),
                    zero: zero.clone(),
                    succ: succ.clone(),
                    scrut: n.clone(),
                };
                Some(succ.instantiate(&[(**n).clone(), rec]))
            }
            _ => reduce_step(g, scrut).map(|s| NatElim {
                motive: motive.clone(),
                zero: zero.clone(),
                succ: succ.clone(),
                scrut: bx(s),
            }),
        },
        SchemaElim {
            schema,
            params,
            motive,
            methods,
            scrut,
        } => {
            if let SchemaCtor {
                schema: s2,
                cell,
                args,
                ..
            } = &**scrut
            {
                if s2 == schema {
                    let sch = g.schema(schema)?;
                    let c = sch.cells.get(*cell)?;
                    if c.boundary == crate::schema::Boundary::None
                        && methods.len() == sch.cells.len()
                    {
                        return Some(cells::beta(sch, params, motive, methods, *cell, args));
                    }
                }
                return None;
            }
            reduce_step(g, scrut).map(|s| SchemaElim {
                schema: schema.clone(),
                params: params.clone(),
                motive: motive.clone(),
                methods: methods.clone(),
                scrut: bx(s),
            })
        }
        _ => None,
    }
}

pub fn whnf(
    g: Globals<'_>,
    t: &Term,
    fuel: &mut usize,
    limit: usize,
) -> Result<Term, FuelExhausted> {
    let mut cur = t.clone();
    while let Some(next) = reduce_step(g, &cur) {
        if *fuel == 0 {
            return Err(FuelExhausted { limit });
        }
        *fuel -= 1;
        cur = next;
    }
    Ok(cur)
}

/// Full normal form: weak-head normalize, then normalize every child.
pub fn normalize_with(
    g: Globals<'_>,
    t: &Term,
    fuel: &mut usize,
    limit: usize,
) -> Result<Term, FuelExhausted> {
    let h = whnf(g, t, fuel, limit)?;
    h.try_map(&mut |c, _| normalize_with(g, c, fuel, limit))
}

pub fn normalize(g: Globals<'_>, t: &Term, limit: usize) -> Result<Term, FuelExhausted> {
    let mut fuel = limit;
    normalize_with(g, t, &mut fuel, limit)
}

pub fn def_equal(g: Globals<'_>, t: &Term, u: &Term, limit: usize) -> Result<bool, FuelExhausted> {
    if t == u {
        return Ok(true);
    }
    Ok(normalize(g, t, limit)? == normalize(g, u, limit)?)
}
