#![allow(dead_code)]

pub mod gen;
pub mod props;

use hitcell::schema::{BetaRule, Clause, ParamEntry, ParamKind, RuleSet};
use hitcell::surface::{parse_term_with_params, ParseEnv};
use hitcell::syntax::{Context, Term};
use hitcell::{builtin_schemas, Checker, Signature};

pub fn prelude_sig() -> Signature {
    let mut sig = Signature::new();
    for s in builtin_schemas() {
        sig.add_schema(s);
    }
    sig
}

/// Parses `text` with the premises in scope and `vars` bound, outermost first.
pub fn term(ps: &[ParamEntry], vars: &[&str], text: &str) -> Term {
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    parse_term_with_params(text, &vars, ps, &ParseEnv::prelude())
        .unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Builds a premise list from `(name, [(binder, type)], Some(type) | None)`.
/// A premise: its name, its extension telescope and, for a term
/// premise, its type.
pub type Premise<'a> = (&'a str, &'a [(&'a str, &'a str)], Option<&'a str>);

pub fn premises(spec: &[Premise]) -> Vec<ParamEntry> {
    let mut ps: Vec<ParamEntry> = Vec::new();
    for (name, ext, ty) in spec {
        let mut vars = Vec::new();
        let mut tele = Vec::new();
        for (x, t) in ext.iter() {
            tele.push((x.to_string(), term(&ps, &vars, t)));
            vars.push(*x);
        }
        let e = match ty {
            None => ParamEntry::ty(name, tele),
            Some(t) => ParamEntry::term(name, tele, term(&ps, &vars, t)),
        };
        ps.push(e);
    }
    ps
}

/// A telescope of context entries parsed left to right.
pub fn context(ps: &[ParamEntry], spec: &[(&str, &str)]) -> (Vec<&'static str>, Vec<Term>) {
    let mut names: Vec<&'static str> = Vec::new();
    let mut tys = Vec::new();
    for (x, t) in spec {
        tys.push(term(ps, &names, t));
        names.push(Box::leak(x.to_string().into_boxed_str()));
    }
    (names, tys)
}

/// One definitional equality from the rule figures, on a symbolic instance.
pub struct Fidelity {
    pub name: &'static str,
    pub premises: Vec<ParamEntry>,
    pub ctx: Vec<Term>,
    /// Typing judgments that must hold for the equation to make sense.
    pub typings: Vec<(Term, Term)>,
    pub lhs: Term,
    pub rhs: Term,
}

fn fid(
    name: &'static str,
    ps: &[Premise],
    ctx: &[(&str, &str)],
    ty: &str,
    lhs: &str,
    rhs: &str,
) -> Fidelity {
    let premises = premises(ps);
    let (vars, ctx) = context(&premises, ctx);
    let ty = term(&premises, &vars, ty);
    let lhs = term(&premises, &vars, lhs);
    let rhs = term(&premises, &vars, rhs);
    Fidelity {
        name,
        typings: vec![(lhs.clone(), ty.clone()), (rhs.clone(), ty)],
        lhs,
        rhs,
        premises,
        ctx,
    }
}

/// A projection case: the pair is checked against the sigma type instead of
/// the projection being inferred.
fn proj(name: &'static str, fst: bool) -> Fidelity {
    let premises = premises(&[
        ("A", &[], None),
        ("B", &[("x", "A")], None),
        ("b", &[("x", "A")], Some("B x")),
    ]);
    let (vars, ctx) = context(&premises, &[("a", "A")]);
    let t = |s: &str| term(&premises, &vars, s);
    let pair = t("(a, b a)");
    let (lhs, rhs, ty) = if fst {
        (t("fst (a, b a)"), t("a"), t("A"))
    } else {
        (t("snd (a, b a)"), t("b a"), t("B a"))
    };
    Fidelity {
        name,
        typings: vec![(pair, t("(x : A) * B x")), (rhs.clone(), ty)],
        lhs,
        rhs,
        premises,
        ctx,
    }
}

const PUSH: &str = "Push[A, B1, B2, x. f1 x, x. f2 x]";

pub fn fidelity_cases() -> Vec<Fidelity> {
    let push_ps: &[Premise] = &[
        ("A", &[], None),
        ("B1", &[], None),
        ("B2", &[], None),
        ("f1", &[("x", "A")], Some("B1")),
        ("f2", &[("x", "A")], Some("B2")),
        ("C", &[("u", PUSH)], None),
        (
            "t1",
            &[("y", "B1")],
            Some("C (Push.inl[A, B1, B2, x. f1 x, x. f2 x] y)"),
        ),
        (
            "t2",
            &[("y", "B2")],
            Some("C (Push.inr[A, B1, B2, x. f1 x, x. f2 x] y)"),
        ),
        (
            "m",
            &[("x", "A")],
            Some(
                "IdOver[u. C u] (Push.glue[A, B1, B2, x. f1 x, x. f2 x] x) (t1 (f1 x)) (t2 (f2 x))",
            ),
        ),
    ];
    let pe = |s: &str| {
        format!("Push.elim[A, B1, B2, x. f1 x, x. f2 x](u. C u, y. t1 y, y. t2 y, x. m x, {s})")
    };
    let nat_ps: &[Premise] = &[
        ("C", &[("x", "Nat")], None),
        ("z", &[], Some("C zero")),
        ("s", &[("x", "Nat"), ("y", "C x")], Some("C (succ x)")),
    ];
    let w = "W[A, x. B x]";
    let welim = |s: &str| format!("W.elim[A, x. B x](w. C w, a f ih. h a f ih, {s})");
    vec![
        fid(
            "J on refl",
            &[
                ("A", &[], None),
                ("C", &[("x", "A"), ("y", "A"), ("e", "Id[A] x y")], None),
                ("c", &[("x", "A")], Some("C x x (refl x)")),
            ],
            &[("a", "A")],
            "C a a (refl a)",
            "J(x y e. C x y e, x. c x, a, a, refl a)",
            "c a",
        ),
        fid(
            "J' on refl'",
            &[
                ("A", &[], None),
                ("B", &[("x", "A")], None),
                (
                    "C",
                    &[
                        ("x", "A"),
                        ("y", "A"),
                        ("e", "Id[A] x y"),
                        ("u", "B x"),
                        ("v", "B y"),
                        ("d", "IdOver[z. B z] e u v"),
                    ],
                    None,
                ),
                (
                    "c",
                    &[("x", "A"), ("u", "B x")],
                    Some("C x x (refl x) u u (refl' u)"),
                ),
            ],
            &[("a", "A"), ("b", "B a")],
            "C a a (refl a) b b (refl' b)",
            "J'(x y e u v d. C x y e u v d, x u. c x u, a, a, refl a, b, b, refl' b)",
            "c a b",
        ),
        fid(
            "ap on refl",
            &[
                ("A", &[], None),
                ("B", &[("x", "A")], None),
                ("f", &[("x", "A")], Some("B x")),
            ],
            &[("a", "A")],
            "IdOver[x. B x] (refl a) (f a) (f a)",
            "ap(x. f x, a, a, refl a)",
            "refl' (f a)",
        ),
        fid(
            "pushout eliminator on left image",
            push_ps,
            &[("b", "B1")],
            "C (Push.inl[A, B1, B2, x. f1 x, x. f2 x] b)",
            &pe("Push.inl[A, B1, B2, x. f1 x, x. f2 x] b"),
            "t1 b",
        ),
        fid(
            "pushout eliminator on right image",
            push_ps,
            &[("b", "B2")],
            "C (Push.inr[A, B1, B2, x. f1 x, x. f2 x] b)",
            &pe("Push.inr[A, B1, B2, x. f1 x, x. f2 x] b"),
            "t2 b",
        ),
        fid(
            "truncation eliminator on tr",
            &[
                ("A", &[], None),
                ("C", &[("w", "Trunc[A]")], None),
                ("c", &[("x", "A")], Some("C (Trunc.tr[A] x)")),
                (
                    "d",
                    &[
                        ("x", "Trunc[A]"),
                        ("y", "Trunc[A]"),
                        ("u", "C x"),
                        ("v", "C y"),
                    ],
                    Some("IdOver[w. C w] (Trunc.treq[A] x y) u v"),
                ),
            ],
            &[("a", "A")],
            "C (Trunc.tr[A] a)",
            "Trunc.elim[A](w. C w, x. c x, x y u v. d x y u v, Trunc.tr[A] a)",
            "c a",
        ),
        fid(
            "natrec on zero",
            nat_ps,
            &[],
            "C zero",
            "natrec(x. C x, z, x y. s x y, zero)",
            "z",
        ),
        fid(
            "natrec on succ",
            nat_ps,
            &[("n", "Nat")],
            "C (succ n)",
            "natrec(x. C x, z, x y. s x y, succ n)",
            "s n (natrec(x. C x, z, x y. s x y, n))",
        ),
        fid(
            "function beta",
            &[
                ("A", &[], None),
                ("B", &[("x", "A")], None),
                ("b", &[("x", "A")], Some("B x")),
            ],
            &[("a", "A")],
            "B a",
            "(fun x => b x) a",
            "b a",
        ),
        proj("first projection", true),
        proj("second projection", false),
        fid(
            "W eliminator on fold",
            &[
                ("A", &[], None),
                ("B", &[("x", "A")], None),
                ("C", &[("w", w)], None),
                (
                    "h",
                    &[
                        ("a", "A"),
                        ("f", "(b : B a) -> W[A, x. B x]"),
                        ("ih", "(b : B a) -> C (f b)"),
                    ],
                    Some("C (W.fold[A, x. B x] a f)"),
                ),
            ],
            &[("a", "A"), ("f", "(b : B a) -> W[A, x. B x]")],
            "C (W.fold[A, x. B x] a f)",
            &welim("W.fold[A, x. B x] a f"),
            &format!("h a f (fun b => {})", welim("f b")),
        ),
    ]
}

/// Checks both sides at the stated type and compares them.
pub fn check_fidelity(sig: &Signature, f: &Fidelity) -> Result<bool, String> {
    let ch = Checker::new(sig).with_params(&f.premises);
    let ctx = Context::from_entries(f.ctx.clone());
    for (t, ty) in &f.typings {
        ch.check_type(&ctx, ty).map_err(|e| format!("type: {e}"))?;
        ch.check(&ctx, t, ty).map_err(|e| format!("term: {e}"))?;
    }
    ch.def_equal(&f.lhs, &f.rhs)
        .map_err(|e| format!("equality: {e}"))
}

// ---- hand-written rule sets, read off the figures ----

fn clause(ps: &[ParamEntry], ctx: &[(&str, &str)], subject: &str, ty: Option<&str>) -> Clause {
    let (vars, tys) = context(ps, ctx);
    Clause {
        name: String::new(),
        premises: ps.to_vec(),
        context: tys,
        subject: term(ps, &vars, subject),
        ty: ty.map(|t| term(ps, &vars, t)),
    }
}

fn beta(ps: &[ParamEntry], ctx: &[(&str, &str)], lhs: &str, rhs: &str) -> BetaRule {
    let (vars, tys) = context(ps, ctx);
    BetaRule {
        name: String::new(),
        premises: ps.to_vec(),
        context: tys,
        lhs: term(ps, &vars, lhs),
        rhs: term(ps, &vars, rhs),
    }
}

pub fn fixture_nat() -> RuleSet {
    let none: &[Premise] = &[];
    let params = premises(none);
    let elim = premises(&[
        ("C", &[("x", "Nat")], None),
        ("z", &[], Some("C zero")),
        ("s", &[("x", "Nat"), ("y", "C x")], Some("C (succ x)")),
    ]);
    let nrec = |s: &str| format!("natrec(x. C x, z, x y. s x y, {s})");
    RuleSet {
        formation: clause(&params, &[], "Nat", None),
        intros: vec![
            clause(&params, &[], "zero", Some("Nat")),
            clause(&params, &[("n", "Nat")], "succ n", Some("Nat")),
        ],
        elim: clause(&elim, &[("n", "Nat")], &nrec("n"), Some("C n")),
        betas: vec![
            beta(&elim, &[], &nrec("zero"), "z"),
            beta(
                &elim,
                &[("n", "Nat")],
                &nrec("succ n"),
                &format!("s n ({})", nrec("n")),
            ),
        ],
        path_comps: vec![],
    }
}

pub fn fixture_push() -> RuleSet {
    let base: &[Premise] = &[
        ("A", &[], None),
        ("B1", &[], None),
        ("B2", &[], None),
        ("f1", &[("x", "A")], Some("B1")),
        ("f2", &[("x", "A")], Some("B2")),
    ];
    let params = premises(base);
    let inl = "Push.inl[A, B1, B2, x. f1 x, x. f2 x]";
    let inr = "Push.inr[A, B1, B2, x. f1 x, x. f2 x]";
    let glue = "Push.glue[A, B1, B2, x. f1 x, x. f2 x]";
    let mut all = base.to_vec();
    let c_ext: &[(&str, &str)] = &[("u", PUSH)];
    let t1_ty = format!("C ({inl} y)");
    let t2_ty = format!("C ({inr} y)");
    let m_ty = format!("IdOver[u. C u] ({glue} x) (t1 (f1 x)) (t2 (f2 x))");
    all.push(("C", c_ext, None));
    all.push(("t1", &[("y", "B1")], Some(&t1_ty)));
    all.push(("t2", &[("y", "B2")], Some(&t2_ty)));
    all.push(("m", &[("x", "A")], Some(&m_ty)));
    let elim = premises(&all);
    let pe = |s: &str| {
        format!("Push.elim[A, B1, B2, x. f1 x, x. f2 x](u. C u, y. t1 y, y. t2 y, x. m x, {s})")
    };
    let comp_ty = format!(
        "Id[IdOver[u. C u] ({glue} a) ({}) ({})] (ap(u. {}, {inl} (f1 a), {inr} (f2 a), {glue} a)) (m a)",
        pe(&format!("{inl} (f1 a)")),
        pe(&format!("{inr} (f2 a)")),
        pe("u"),
    );
    RuleSet {
        formation: clause(&params, &[], PUSH, None),
        intros: vec![
            clause(&params, &[("y", "B1")], &format!("{inl} y"), Some(PUSH)),
            clause(&params, &[("y", "B2")], &format!("{inr} y"), Some(PUSH)),
            clause(
                &params,
                &[("x", "A")],
                &format!("{glue} x"),
                Some(&format!("Id[{PUSH}] ({inl} (f1 x)) ({inr} (f2 x))")),
            ),
        ],
        elim: clause(&elim, &[("p", PUSH)], &pe("p"), Some("C p")),
        betas: vec![
            beta(&elim, &[("b", "B1")], &pe(&format!("{inl} b")), "t1 b"),
            beta(&elim, &[("b", "B2")], &pe(&format!("{inr} b")), "t2 b"),
        ],
        path_comps: vec![clause(
            &elim,
            &[("a", "A")],
            "Push.glue.comp[A, B1, B2, x. f1 x, x. f2 x](u. C u, y. t1 y, y. t2 y, x. m x, a)",
            Some(&comp_ty),
        )],
    }
}

pub fn fixture_trunc() -> RuleSet {
    let params = premises(&[("A", &[], None)]);
    let elim = premises(&[
        ("A", &[], None),
        ("C", &[("w", "Trunc[A]")], None),
        ("c", &[("x", "A")], Some("C (Trunc.tr[A] x)")),
        (
            "d",
            &[
                ("x", "Trunc[A]"),
                ("y", "Trunc[A]"),
                ("u", "C x"),
                ("v", "C y"),
            ],
            Some("IdOver[w. C w] (Trunc.treq[A] x y) u v"),
        ),
    ]);
    let tr = |s: &str| format!("Trunc.elim[A](w. C w, x. c x, x y u v. d x y u v, {s})");
    let comp_ty = format!(
        "Id[IdOver[w. C w] (Trunc.treq[A] x y) ({}) ({})] (ap(w. {}, x, y, Trunc.treq[A] x y)) (d x y ({}) ({}))",
        tr("x"),
        tr("y"),
        tr("w"),
        tr("x"),
        tr("y")
    );
    RuleSet {
        formation: clause(&params, &[], "Trunc[A]", None),
        intros: vec![
            clause(&params, &[("a", "A")], "Trunc.tr[A] a", Some("Trunc[A]")),
            clause(
                &params,
                &[("x", "Trunc[A]"), ("y", "Trunc[A]")],
                "Trunc.treq[A] x y",
                Some("Id[Trunc[A]] x y"),
            ),
        ],
        elim: clause(&elim, &[("w", "Trunc[A]")], &tr("w"), Some("C w")),
        betas: vec![beta(&elim, &[("a", "A")], &tr("Trunc.tr[A] a"), "c a")],
        path_comps: vec![clause(
            &elim,
            &[("x", "Trunc[A]"), ("y", "Trunc[A]")],
            "Trunc.treq.comp[A](w. C w, x. c x, x y u v. d x y u v, x, y)",
            Some(&comp_ty),
        )],
    }
}

/// Forgets every name, leaving only the de Bruijn structure.
pub fn erase_names(r: &RuleSet) -> RuleSet {
    let ps = |v: &[ParamEntry]| -> Vec<ParamEntry> {
        v.iter()
            .map(|e| ParamEntry {
                name: String::new(),
                ext: e
                    .ext
                    .iter()
                    .map(|(_, t)| (String::new(), t.clone()))
                    .collect(),
                kind: e.kind.clone(),
            })
            .collect()
    };
    let cl = |c: &Clause| Clause {
        name: String::new(),
        premises: ps(&c.premises),
        context: c.context.clone(),
        subject: c.subject.clone(),
        ty: c.ty.clone(),
    };
    RuleSet {
        formation: cl(&r.formation),
        intros: r.intros.iter().map(cl).collect(),
        elim: cl(&r.elim),
        betas: r
            .betas
            .iter()
            .map(|b| BetaRule {
                name: String::new(),
                premises: ps(&b.premises),
                context: b.context.clone(),
                lhs: b.lhs.clone(),
                rhs: b.rhs.clone(),
            })
            .collect(),
        path_comps: r.path_comps.iter().map(cl).collect(),
    }
}

/// Reads the schema presentation of the natural numbers as the builtin formers.
pub fn nat_to_builtin(t: &Term) -> Term {
    match t {
        Term::Schema { name, .. } if name == "N" => Term::Nat,
        Term::SchemaCtor {
            schema, cell, args, ..
        } if schema == "N" => match cell {
            0 => Term::Zero,
            _ => Term::Succ(Box::new(nat_to_builtin(&args[0]))),
        },
        Term::SchemaElim {
            schema,
            motive,
            methods,
            scrut,
            ..
        } if schema == "N" => Term::NatElim {
            motive: Box::new(nat_to_builtin(motive)),
            zero: Box::new(nat_to_builtin(&methods[0].body)),
            succ: Box::new(nat_to_builtin(&methods[1].body)),
            scrut: Box::new(nat_to_builtin(scrut)),
        },
        other => other.map(&mut |c, _| nat_to_builtin(c)),
    }
}

pub fn map_rules(r: &RuleSet, f: &impl Fn(&Term) -> Term) -> RuleSet {
    let ps = |v: &[ParamEntry]| -> Vec<ParamEntry> {
        v.iter()
            .map(|e| ParamEntry {
                name: e.name.clone(),
                ext: e.ext.iter().map(|(n, t)| (n.clone(), f(t))).collect(),
                kind: match &e.kind {
                    ParamKind::Type => ParamKind::Type,
                    ParamKind::Term(t) => ParamKind::Term(f(t)),
                },
            })
            .collect()
    };
    let cl = |c: &Clause| Clause {
        name: c.name.clone(),
        premises: ps(&c.premises),
        context: c.context.iter().map(f).collect(),
        subject: f(&c.subject),
        ty: c.ty.as_ref().map(f),
    };
    RuleSet {
        formation: cl(&r.formation),
        intros: r.intros.iter().map(cl).collect(),
        elim: cl(&r.elim),
        betas: r
            .betas
            .iter()
            .map(|b| BetaRule {
                name: b.name.clone(),
                premises: ps(&b.premises),
                context: b.context.iter().map(f).collect(),
                lhs: f(&b.lhs),
                rhs: f(&b.rhs),
            })
            .collect(),
        path_comps: r.path_comps.iter().map(cl).collect(),
    }
}

// ---- independent oracles for the model ----

/// Number of classes of the set pushout of `f1 : A -> B1` and `f2 : A -> B2`,
/// computed with a plain quick-union over `B1 + B2`.
pub fn set_pushout_classes(b1: usize, b2: usize, f1: &[usize], f2: &[usize]) -> usize {
    let mut parent: Vec<usize> = (0..b1 + b2).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            i = p[i];
        }
        i
    }
    for (x, y) in f1.iter().zip(f2) {
        let (a, b) = (root(&mut parent, *x), root(&mut parent, b1 + *y));
        if a != b {
            parent[a] = b;
        }
    }
    (0..b1 + b2).filter(|&i| parent[i] == i).count()
}

/// Binary trees of depth at most `k`.
pub fn binary_trees(k: usize) -> usize {
    (0..k).fold(1usize, |t, _| 1 + t * t)
}

/// Words of length at most `k` over `n` letters.
pub fn words(n: usize, k: usize) -> usize {
    (0..=k).map(|l| n.pow(l as u32)).sum()
}

/// Every function from an `n`-element set to an `m`-element set.
fn functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..m).map(move |y| {
                    let mut g = f.clone();
                    g.push(y);
                    g
                })
            })
            .collect();
    }
    out
}

/// Whether precomposition along `g` sends maps `cod -> x` bijectively onto maps `dom -> x`.
fn precompose_bijective(g: &[usize], cod: usize, dom: usize, x: usize) -> bool {
    let images: std::collections::BTreeSet<Vec<usize>> = functions(cod, x)
        .into_iter()
        .map(|h| g.iter().map(|&i| h[i]).collect())
        .collect();
    images.len() == functions(cod, x).len() && images.len() == functions(dom, x).len()
}

/// Size of the reflection of an `a`-element set into the sets local for the
/// map `2 -> 1`, found by searching local sets and unit maps exhaustively.
pub fn local_reflection_size(a: usize) -> usize {
    let bound = a.max(1) + 1;
    let collapse = [0usize, 0];
    let locals: Vec<usize> = (0..=bound)
        .filter(|&x| precompose_bijective(&collapse, 1, 2, x))
        .collect();
    for &l in &locals {
        for eta in functions(a, l) {
            if locals.iter().all(|&x| precompose_bijective(&eta, l, a, x)) {
                return l;
            }
        }
    }
    unreachable!("reflections into local sets exist")
}
