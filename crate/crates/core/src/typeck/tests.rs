use super::*;
use crate::schema::builtin_schemas;
use crate::surface::{parse_term, ParseEnv};
use crate::syntax::alpha_equal;

fn prelude() -> Signature {
    let mut sig = Signature::new();
    for s in builtin_schemas() {
        sig.add_schema(s);
    }
    sig
}

fn parse(vars: &[&str], text: &str) -> Term {
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    parse_term(text, &vars, &ParseEnv::prelude()).unwrap()
}

fn plus(a: Term, b: Term) -> Term {
    Term::nat_elim(Term::Nat, b, Term::succ(Term::Var(0)), a)
}

#[test]
fn formation_examples() {
    let sig = Signature::new();
    let ch = Checker::new(&sig);
    let e = Context::new();
    assert!(ch.check_type(&e, &Term::Nat).is_ok());
    assert!(ch
        .check_type(&e, &Term::id(Term::Nat, Term::Zero, Term::Zero))
        .is_ok());
    let err = ch
        .check_type(&e, &Term::id(Term::Nat, Term::Zero, Term::Star))
        .unwrap_err();
    assert_eq!(err.kind, TypeErrorKind::Mismatch);
}

#[test]
fn inference_examples() {
    let sig = Signature::new();
    let ch = Checker::new(&sig);
    let e = Context::new();
    let t = ch.infer(&e, &Term::refl(Term::Zero)).unwrap();
    assert!(alpha_equal(
        &t,
        &Term::id(Term::Nat, Term::Zero, Term::Zero)
    ));
    let ap = Term::ap(
        Term::succ(Term::Var(0)),
        Term::Zero,
        Term::Zero,
        Term::refl(Term::Zero),
    );
    let t = ch.infer(&e, &ap).unwrap();
    let one = Term::succ(Term::Zero);
    assert!(alpha_equal(
        &t,
        &Term::id_over(Term::Nat, Term::refl(Term::Zero), one.clone(), one)
    ));
    let err = ch
        .infer(&e, &Term::app(Term::Zero, Term::Zero))
        .unwrap_err();
    assert_eq!(err.kind, TypeErrorKind::NotAFunction);
}

#[test]
fn checking_examples() {
    let sig = Signature::new();
    let ch = Checker::new(&sig);
    let e = Context::new();
    assert!(ch.check(&e, &Term::Zero, &Term::Nat).is_ok());
    let rec = Term::nat_elim(Term::Nat, Term::Zero, Term::Var(0), Term::Zero);
    assert!(ch.check(&e, &rec, &Term::Nat).is_ok());
    assert_eq!(ch.def_equal(&rec, &Term::Zero), Ok(true));
    let err = ch.check(&e, &Term::Star, &Term::Nat).unwrap_err();
    assert_eq!(err.kind, TypeErrorKind::Mismatch);
}

#[test]
fn reduction_examples() {
    let sig = prelude();
    let g = sig.globals();
    let j = parse(&[], "J(x y e. Nat, x. succ x, zero, zero, refl zero)");
    assert_eq!(reduce_step(g, &j), Some(Term::succ(Term::Zero)));
    let s = Term::succ(Term::Var(1));
    let rec = |n: Term| Term::nat_elim(Term::Nat, Term::Zero, s.clone(), n);
    let step = reduce_step(g, &rec(Term::succ(Term::Zero))).unwrap();
    assert!(alpha_equal(&step, &Term::succ(Term::Zero)));
    assert_eq!(reduce_step(g, &Term::Zero), None);
}

#[test]
fn normalization_examples() {
    let sig = prelude();
    let ch = Checker::new(&sig);
    let four = ch
        .normalize(&plus(Term::numeral(2), Term::numeral(2)))
        .unwrap();
    assert_eq!(four, Term::numeral(4));
    assert_eq!(ch.normalize(&four).unwrap(), four);
    let pe = parse(
        &[],
        "Push.elim[Unit, Nat, Unit, x. zero, x. x](u. Nat, y. zero, y. zero, x. refl' zero, Push.inl[Unit, Nat, Unit, x. zero, x. x] (succ zero))",
    );
    assert_eq!(ch.normalize(&pe).unwrap(), Term::Zero);
}

#[test]
fn equality_examples() {
    let sig = prelude();
    let ch = Checker::new(&sig);
    let tr = parse(
        &[],
        "Trunc.elim[Nat](w. Nat, x. succ x, x y u v. refl' zero, Trunc.tr[Nat] zero)",
    );
    assert_eq!(ch.def_equal(&tr, &Term::succ(Term::Zero)), Ok(true));
    assert_eq!(
        ch.def_equal(&Term::Zero, &Term::succ(Term::Zero)),
        Ok(false)
    );
    let other = Term::nat_elim(
        Term::Nat,
        Term::numeral(2),
        Term::succ(Term::Var(0)),
        Term::numeral(2),
    );
    assert_eq!(
        ch.def_equal(&plus(Term::numeral(2), Term::numeral(2)), &other),
        Ok(true)
    );
}

#[test]
fn j_over_infers_family_from_fibre_point() {
    let sig = prelude();
    let ch = Checker::new(&sig);
    let t = parse(
        &[],
        "J'(x y e u v d. Nat, x u. u, zero, zero, refl zero, zero, zero, refl' zero)",
    );
    assert_eq!(ch.infer(&Context::new(), &t), Ok(Term::Nat));
    assert_eq!(ch.normalize(&t), Ok(Term::Zero));
}
