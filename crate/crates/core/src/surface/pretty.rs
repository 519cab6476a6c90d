use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::schema::Schema;
use crate::syntax::{Abs, Term};

const RESERVED: &[&str] = &[
    "def",
    "schema",
    "eval",
    "fuel",
    "point",
    "path",
    "cell",
    "fun",
    "square",
    "Type",
    "finset",
    "finmap",
    "family",
    "star",
    "zero",
    "Unit",
    "Nat",
    "succ",
    "refl",
    "refl'",
    "inl",
    "inr",
    "fst",
    "snd",
    "Id",
    "IdOver",
    "Square",
    "SquareOver",
    "J",
    "J'",
    "ap",
    "natrec",
    "case",
    "elim",
    "comp",
];

const BASE_NAMES: &[&str] = &["x", "y", "z", "u", "v", "w", "a", "b", "c", "d"];

fn builtin_table() -> &'static [Schema] {
    static TABLE: OnceLock<Vec<Schema>> = OnceLock::new();
    TABLE.get_or_init(crate::schema::builtin_schemas)
}

/// Printing configuration: schemas used to name constructors, parameter names,
/// and optionally the schema whose body is being printed.
pub struct Printer<'a> {
    pub schemas: &'a [Schema],
    pub params: &'a [String],
    pub inside: Option<&'a Schema>,
}

/// Prints `t` with the given variable names in scope (outermost first).
pub fn pretty_print(t: &Term, ctx: &[String]) -> String {
    Printer {
        schemas: builtin_table(),
        params: &[],
        inside: None,
    }
    .print(t, ctx)
}

impl<'a> Printer<'a> {
    pub fn print(&self, t: &Term, ctx: &[String]) -> String {
        let mut avoid: BTreeSet<String> = RESERVED.iter().map(|s| s.to_string()).collect();
        t.any(&mut |s| {
            match s {
                Term::Const(n) => {
                    avoid.insert(n.clone());
                }
                Term::Schema { name, .. }
                | Term::SchemaCtor { schema: name, .. }
                | Term::SchemaElim { schema: name, .. }
                | Term::SchemaPathComp { schema: name, .. } => {
                    avoid.insert(name.clone());
                }
                _ => {}
            }
            false
        });
        for s in self.schemas {
            avoid.insert(s.name.clone());
        }
        avoid.extend(self.params.iter().cloned());
        if let Some(s) = self.inside {
            avoid.insert(s.name.clone());
            avoid.extend(s.cells.iter().map(|c| c.name.clone()));
        }
        let mut st = State {
            p: self,
            scope: ctx.to_vec(),
            avoid,
        };
        st.go(t, 0)
    }

    fn schema(&self, name: &str) -> Option<&Schema> {
        match self.inside {
            Some(s) if s.name == name => Some(s),
            _ => self.schemas.iter().rev().find(|s| s.name == name),
        }
    }
}

struct State<'p, 'a> {
    p: &'p Printer<'a>,
    scope: Vec<String>,
    avoid: BTreeSet<String>,
}

fn paren(s: String, need: bool) -> String {
    if need {
        format!("({s})")
    } else {
        s
    }
}

const EXPR: u8 = 0;
const SUM: u8 = 1;
const PROD: u8 = 2;
const APP: u8 = 3;
const ATOM: u8 = 4;

impl State<'_, '_> {
    fn fresh(&self, base: &str) -> String {
        let ok = |n: &str| !self.avoid.contains(n) && !self.scope.iter().any(|s| s == n);
        if !base.is_empty() && ok(base) {
            return base.to_string();
        }
        for b in BASE_NAMES {
            if ok(b) {
                return b.to_string();
            }
        }
        (1..).map(|i| format!("x{i}")).find(|n| ok(n)).unwrap()
    }

    fn bind(&mut self, n: usize) -> Vec<String> {
        let mut names = Vec::new();
        for _ in 0..n {
            let f = self.fresh("");
            self.scope.push(f.clone());
            names.push(f);
        }
        names
    }

    fn unbind(&mut self, n: usize) {
        let l = self.scope.len();
        self.scope.truncate(l - n);
    }

    /// `x y. body`, or just `body` when nothing is bound.
    fn under(&mut self, n: usize, body: &Term) -> String {
        let names = self.bind(n);
        let b = self.go(body, EXPR);
        self.unbind(n);
        if n == 0 {
            b
        } else {
            format!("{}. {b}", names.join(" "))
        }
    }

    fn abs(&mut self, a: &Abs) -> String {
        self.under(a.binds, &a.body)
    }

    fn params(&mut self, name: &str, params: &[Abs]) -> String {
        let identity = self.p.inside.map(|s| s.name == name).unwrap_or(false)
            && params
                .iter()
                .enumerate()
                .all(|(i, a)| *a == self.p.inside.unwrap().params.entries[i].identity(i));
        if params.is_empty() || identity {
            return String::new();
        }
        let parts: Vec<String> = params.iter().map(|a| self.abs(a)).collect();
        format!("[{}]", parts.join(", "))
    }

    fn qual(&self, schema: &str) -> String {
        match self.p.inside {
            Some(s) if s.name == schema => String::new(),
            _ => format!("{schema}."),
        }
    }

    fn cell_name(&self, schema: &str, cell: usize) -> String {
        self.p
            .schema(schema)
            .and_then(|s| s.cells.get(cell))
            .map(|c| c.name.clone())
            .unwrap_or_else(|| format!("#{cell}"))
    }

    fn args(&mut self, args: &[Term]) -> String {
        args.iter()
            .map(|a| format!(" {}", self.go(a, ATOM)))
            .collect()
    }

    fn go(&mut self, t: &Term, prec: u8) -> String {
        use Term::*;
        match t {
            Var(i) => {
                let n = self.scope.len();
                if *i < n {
                    let name = &self.scope[n - 1 - i];
                    if name.is_empty() {
                        format!("#{i}")
                    } else {
                        name.clone()
                    }
                } else {
                    format!("#{i}")
                }
            }
            Const(n) => n.clone(),
            Param(i, args) => {
                let name = self
                    .p
                    .params
                    .get(*i)
                    .cloned()
                    .unwrap_or_else(|| format!("?{i}"));
                if args.is_empty() {
                    name
                } else {
                    paren(format!("{name}{}", self.args(args)), prec > APP)
                }
            }
            Unit => "Unit".into(),
            Star => "star".into(),
            Nat => "Nat".into(),
            Zero => "zero".into(),
            Succ(n) => paren(format!("succ {}", self.go(n, ATOM)), prec > APP),
            Refl(a) => paren(format!("refl {}", self.go(a, ATOM)), prec > APP),
            ReflOver(a) => paren(format!("refl' {}", self.go(a, ATOM)), prec > APP),
            Inl(a) => paren(format!("inl {}", self.go(a, ATOM)), prec > APP),
            Inr(a) => paren(format!("inr {}", self.go(a, ATOM)), prec > APP),
            Fst(a) => paren(format!("fst {}", self.go(a, ATOM)), prec > APP),
            Snd(a) => paren(format!("snd {}", self.go(a, ATOM)), prec > APP),
            Lam(_) => {
                let mut body = t;
                let mut n = 0;
                while let Lam(b) = body {
                    body = b;
                    n += 1;
                }
                let names = self.bind(n);
                let b = self.go(body, EXPR);
                self.unbind(n);
                paren(format!("fun {} => {b}", names.join(" ")), prec > EXPR)
            }
            App(f, a) => {
                let fs = self.go(f, APP);
                let a = self.go(a, ATOM);
                paren(format!("{fs} {a}"), prec > APP)
            }
            Pi(a, b) | Sigma(a, b) => {
                let op = if matches!(t, Pi(..)) { "->" } else { "*" };
                if b.has_free_var(0) {
                    let dom = self.go(a, EXPR);
                    let names = self.bind(1);
                    let cod = self.go(b, EXPR);
                    self.unbind(1);
                    paren(format!("({} : {dom}) {op} {cod}", names[0]), prec > EXPR)
                } else if op == "->" {
                    let dom = self.go(a, SUM);
                    self.scope.push(String::new());
                    let cod = self.go(b, EXPR);
                    self.unbind(1);
                    paren(format!("{dom} -> {cod}"), prec > EXPR)
                } else {
                    let l = self.go(a, APP);
                    self.scope.push(String::new());
                    let r = self.go(b, PROD);
                    self.unbind(1);
                    paren(format!("{l} * {r}"), prec > PROD)
                }
            }
            Pair(a, b) => format!("({}, {})", self.go(a, EXPR), self.go(b, EXPR)),
            Sum(a, b) => {
                let l = self.go(a, PROD);
                let r = self.go(b, SUM);
                paren(format!("{l} + {r}"), prec > SUM)
            }
            SumElim {
                motive,
                left,
                right,
                scrut,
            } => format!(
                "case({}, {}, {}, {})",
                self.under(1, motive),
                self.under(1, left),
                self.under(1, right),
                self.go(scrut, EXPR)
            ),
            Id(a, x, y) => paren(
                format!(
                    "Id[{}] {} {}",
                    self.go(a, EXPR),
                    self.go(x, ATOM),
                    self.go(y, ATOM)
                ),
                prec > APP,
            ),
            J {
                motive,
                base,
                lhs,
                rhs,
                path,
            } => format!(
                "J({}, {}, {}, {}, {})",
                self.under(3, motive),
                self.under(1, base),
                self.go(lhs, EXPR),
                self.go(rhs, EXPR),
                self.go(path, EXPR)
            ),
            IdOver {
                family,
                path,
                lhs,
                rhs,
            } => paren(
                format!(
                    "IdOver[{}] {} {} {}",
                    self.under(1, family),
                    self.go(path, ATOM),
                    self.go(lhs, ATOM),
                    self.go(rhs, ATOM)
                ),
                prec > APP,
            ),
            JOver { motive, base, args } => {
                let m = self.under(6, motive);
                let b = self.under(2, base);
                let rest: Vec<String> = args.iter().map(|a| self.go(a, EXPR)).collect();
                format!("J'({m}, {b}, {})", rest.join(", "))
            }
            Ap {
                body,
                lhs,
                rhs,
                path,
            } => format!(
                "ap({}, {}, {}, {})",
                self.under(1, body),
                self.go(lhs, EXPR),
                self.go(rhs, EXPR),
                self.go(path, EXPR)
            ),
            Square {
                ty,
                top,
                bottom,
                left,
                right,
            } => paren(
                format!(
                    "Square[{}] {} {} {} {}",
                    self.go(ty, EXPR),
                    self.go(top, ATOM),
                    self.go(bottom, ATOM),
                    self.go(left, ATOM),
                    self.go(right, ATOM)
                ),
                prec > APP,
            ),
            SquareOver {
                family,
                square,
                top,
                bottom,
                left,
                right,
            } => paren(
                format!(
                    "SquareOver[{}] {} {} {} {} {}",
                    self.under(1, family),
                    self.go(square, ATOM),
                    self.go(top, ATOM),
                    self.go(bottom, ATOM),
                    self.go(left, ATOM),
                    self.go(right, ATOM)
                ),
                prec > APP,
            ),
            NatElim {
                motive,
                zero,
                succ,
                scrut,
            } => format!(
                "natrec({}, {}, {}, {})",
                self.under(1, motive),
                self.go(zero, EXPR),
                self.under(2, succ),
                self.go(scrut, EXPR)
            ),
            Schema { name, params } => format!("{name}{}", self.params(name, params)),
            SchemaCtor {
                schema,
                params,
                cell,
                args,
            } => {
                let s = format!(
                    "{}{}{}{}",
                    self.qual(schema),
                    self.cell_name(schema, *cell),
                    self.params(schema, params),
                    self.args(args)
                );
                paren(s, !args.is_empty() && prec > APP)
            }
            SchemaElim {
                schema,
                params,
                motive,
                methods,
                scrut,
            } => {
                let ps = self.params(schema, params);
                let m = self.under(1, motive);
                let ms: Vec<String> = methods.iter().map(|a| self.abs(a)).collect();
                format!(
                    "{schema}.elim{ps}({m}, {}, {})",
                    ms.join(", "),
                    self.go(scrut, EXPR)
                )
            }
            SchemaPathComp {
                schema,
                params,
                cell,
                motive,
                methods,
                args,
            } => {
                let ps = self.params(schema, params);
                let m = self.under(1, motive);
                let mut parts: Vec<String> = methods.iter().map(|a| self.abs(a)).collect();
                parts.extend(args.iter().map(|a| self.go(a, EXPR)));
                format!(
                    "{schema}.{}.comp{ps}({m}, {})",
                    self.cell_name(schema, *cell),
                    parts.join(", ")
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{parse_term, ParseEnv};

    #[test]
    fn simple_examples() {
        assert_eq!(pretty_print(&Term::succ(Term::Zero), &[]), "succ zero");
        assert_eq!(pretty_print(&Term::lam(Term::Var(0)), &[]), "fun x => x");
    }

    #[test]
    fn fresh_names_avoid_the_context() {
        let t = Term::lam(Term::app(Term::Var(0), Term::Var(1)));
        assert_eq!(pretty_print(&t, &["x".into()]), "fun y => y x");
    }

    fn round_trip(t: &Term) {
        let s = pretty_print(t, &[]);
        let back = parse_term(&s, &[], &ParseEnv::prelude()).unwrap_or_else(|e| panic!("{s}: {e}"));
        assert_eq!(&back, t, "{s}");
    }

    #[test]
    fn round_trips() {
        round_trip(&Term::pi(
            Term::Nat,
            Term::id(Term::Nat, Term::Var(0), Term::Zero),
        ));
        round_trip(&Term::arrow(Term::sum(Term::Nat, Term::Unit), Term::Nat));
        round_trip(&Term::product(
            Term::arrow(Term::Nat, Term::Nat),
            Term::sum(Term::Unit, Term::Unit),
        ));
        round_trip(&Term::app(
            Term::lam(Term::succ(Term::Var(0))),
            Term::succ(Term::Zero),
        ));
        round_trip(&Term::nat_elim(
            Term::Nat,
            Term::Zero,
            Term::succ(Term::Var(0)),
            Term::numeral(2),
        ));
        round_trip(&Term::j(
            Term::id(Term::Nat, Term::Var(2), Term::Var(1)),
            Term::refl(Term::Var(0)),
            Term::Zero,
            Term::Zero,
            Term::refl(Term::Zero),
        ));
    }
}
