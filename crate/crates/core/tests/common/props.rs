//! The six property suites, as plain functions of a seed.

use hitcell::model::{Model, Scope};
use hitcell::surface::{parse_term, ParseEnv};
use hitcell::syntax::{alpha_equal, Context, Term};
use hitcell::typeck::reduce_step;
use hitcell::{pretty_print, Checker, Signature};
use proptest::prelude::any;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::gen::Gen;

pub type Prop = fn(&Signature, [u8; 32]) -> Result<(), TestCaseError>;

pub const PROPERTIES: [(&str, Prop); 6] = [
    ("shift/subst cancellation", shift_subst_cancel),
    ("parse/pretty round trip", parse_pretty_round_trip),
    ("subject reduction", subject_reduction),
    ("substitution lemma", substitution_lemma),
    ("def_equal congruence", def_equal_congruence),
    ("def_equal sound under eval_term", def_equal_sound),
];

/// Runs one property on `cases` seeds with a fixed-seed runner.
pub fn run_property(sig: &Signature, prop: Prop, cases: u32) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ),
    );
    runner
        .run(&any::<[u8; 32]>(), |seed| prop(sig, seed))
        .map_err(|e| e.to_string())
}

fn fail<T>(msg: String) -> Result<T, TestCaseError> {
    Err(TestCaseError::fail(msg))
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn show(t: &Term, n: usize) -> String {
    pretty_print(t, &names(n))
}

pub fn shift_subst_cancel(_: &Signature, seed: [u8; 32]) -> Result<(), TestCaseError> {
    let mut g = Gen::new(seed, false);
    let ctx = g.ctx(3);
    let ty = g.ty(&ctx, 2);
    let t = g.chk(&ctx, &ty, 3);
    let c = g.pick(ctx.len() + 1);
    let u = g.chk(&ctx, &Term::Nat, 1);
    let back = t.shifted(c, 1).substitute(c, &u);
    if back != t {
        return fail(format!(
            "substituting into a fresh index changed {}",
            show(&t, ctx.len())
        ));
    }
    let k = 1 + g.pick(3) as isize;
    let round = t.shift(c, k).and_then(|s| s.shift(c, -k));
    if round.as_ref() != Ok(&t) {
        return fail(format!(
            "shifting up and down changed {}",
            show(&t, ctx.len())
        ));
    }
    Ok(())
}

pub fn parse_pretty_round_trip(_: &Signature, seed: [u8; 32]) -> Result<(), TestCaseError> {
    let mut g = Gen::new(seed, false);
    let ctx = g.ctx(3);
    let ty = g.ty(&ctx, 2);
    let t = g.chk(&ctx, &ty, 3);
    let ns = names(ctx.len());
    for term in [&t, &ty] {
        let text = pretty_print(term, &ns);
        match parse_term(&text, &ns, &ParseEnv::prelude()) {
            Ok(back) if alpha_equal(&back, term) => {}
            Ok(back) => return fail(format!("{text} reparsed as {}", pretty_print(&back, &ns))),
            Err(e) => return fail(format!("{text} does not reparse: {e}")),
        }
    }
    Ok(())
}

pub fn subject_reduction(sig: &Signature, seed: [u8; 32]) -> Result<(), TestCaseError> {
    let mut g = Gen::new(seed, false);
    let ctx = g.ctx(2);
    let ty = g.ty(&ctx, 2);
    let t = g.inf(&ctx, &ty, 3);
    let ch = Checker::new(sig);
    let cx = Context::from_entries(ctx.clone());
    let n = ctx.len();
    let a = match ch.infer(&cx, &t) {
        Ok(a) => a,
        Err(e) => return fail(format!("generated {} does not infer: {e}", show(&t, n))),
    };
    let mut cur = t.clone();
    for _ in 0..8 {
        let Some(next) = reduce_step(sig.globals(), &cur) else {
            break;
        };
        if let Err(e) = ch.check(&cx, &next, &a) {
            return fail(format!(
                "{} reduced to ill-typed {}: {e}",
                show(&cur, n),
                show(&next, n)
            ));
        }
        cur = next;
    }
    let nf = ch
        .normalize(&t)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    if let Err(e) = ch.check(&cx, &nf, &a) {
        return fail(format!("normal form {} is ill-typed: {e}", show(&nf, n)));
    }
    Ok(())
}

pub fn substitution_lemma(sig: &Signature, seed: [u8; 32]) -> Result<(), TestCaseError> {
    let mut g = Gen::new(seed, false);
    let ctx = g.ctx(2);
    let a_ty = g.ty(&ctx, 2);
    let a = g.chk(&ctx, &a_ty, 2);
    let b = if g.coin() {
        Term::id(a_ty.shifted(0, 1), Term::Var(0), Term::Var(0))
    } else {
        g.ty(&ctx, 2).shifted(0, 1)
    };
    let mut ext = ctx.clone();
    ext.push(a_ty.clone());
    let t = g.inf(&ext, &b, 3);
    let ch = Checker::new(sig);
    let n = ctx.len();
    if let Err(e) = ch.check(&Context::from_entries(ext.clone()), &t, &b) {
        return fail(format!("generated {} is ill-typed: {e}", show(&t, n + 1)));
    }
    let cx = Context::from_entries(ctx);
    if let Err(e) = ch.check(&cx, &a, &a_ty) {
        return fail(format!(
            "generated argument {} is ill-typed: {e}",
            show(&a, n)
        ));
    }
    let ta = t.substitute(0, &a);
    let ba = b.substitute(0, &a);
    if let Err(e) = ch.check(&cx, &ta, &ba) {
        return fail(format!(
            "{} is not of type {}: {e}",
            show(&ta, n),
            show(&ba, n)
        ));
    }
    Ok(())
}

/// Plugs a term of type `hole` into a random one-hole context.
fn plug(g: &mut Gen, ctx: &[Term], hole: &Term, x: &Term, filler: &Term) -> Term {
    match g.pick(4) {
        0 => Term::refl(x.clone()),
        1 => Term::pair(x.clone(), filler.clone()),
        2 => Term::Inl(Box::new(x.clone())),
        _ => {
            let mut inner = ctx.to_vec();
            inner.push(hole.clone());
            let out = g.ty(ctx, 1).shifted(0, 1);
            let body = g.chk(&inner, &out, 2);
            Term::app(Term::lam(body), x.clone())
        }
    }
}

pub fn def_equal_congruence(sig: &Signature, seed: [u8; 32]) -> Result<(), TestCaseError> {
    let mut g = Gen::new(seed, false);
    let ctx = g.ctx(2);
    let ty = g.ty(&ctx, 2);
    let t = g.inf(&ctx, &ty, 3);
    let ch = Checker::new(sig);
    let n = ctx.len();
    let u = match reduce_step(sig.globals(), &t) {
        Some(u) if g.coin() => u,
        _ => ch
            .normalize(&t)
            .map_err(|e| TestCaseError::fail(e.to_string()))?,
    };
    if ch.def_equal(&t, &u) != Ok(true) {
        return fail(format!(
            "{} is not equal to its reduct {}",
            show(&t, n),
            show(&u, n)
        ));
    }
    let filler = g.chk(&ctx, &Term::Unit, 1);
    let seed_state = g.pick(1 << 20);
    let mut g1 = Gen::new(derive(seed, seed_state), false);
    let mut g2 = Gen::new(derive(seed, seed_state), false);
    let ct = plug(&mut g1, &ctx, &ty, &t, &filler);
    let cu = plug(&mut g2, &ctx, &ty, &u, &filler);
    match ch.def_equal(&ct, &cu) {
        Ok(true) => Ok(()),
        Ok(false) => fail(format!("{} and {} differ", show(&ct, n), show(&cu, n))),
        Err(e) => fail(e.to_string()),
    }
}

fn derive(seed: [u8; 32], k: usize) -> [u8; 32] {
    let mut s = seed;
    for (i, b) in k.to_le_bytes().iter().enumerate() {
        s[i] ^= b;
    }
    s[31] ^= 0x5a;
    s
}

pub fn def_equal_sound(sig: &Signature, seed: [u8; 32]) -> Result<(), TestCaseError> {
    let mut g = Gen::new(seed, true);
    let ty = g.ty(&[], 2);
    let t = g.inf(&[], &ty, 3);
    let ch = Checker::new(sig);
    let u = match reduce_step(sig.globals(), &t) {
        Some(u) if g.coin() => u,
        _ => ch
            .normalize(&t)
            .map_err(|e| TestCaseError::fail(e.to_string()))?,
    };
    if ch.def_equal(&t, &u) != Ok(true) {
        return fail(format!(
            "{} is not equal to its reduct {}",
            show(&t, 0),
            show(&u, 0)
        ));
    }
    let m = Model::new(sig);
    let sc = Scope::empty();
    let vt = m.eval_term(&sc, &t, &ty);
    let vu = m.eval_term(&sc, &u, &ty);
    match (vt, vu) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        (Ok(a), Ok(b)) => fail(format!(
            "{} evaluates to {a} but {} to {b}",
            show(&t, 0),
            show(&u, 0)
        )),
        (Err(e), _) | (_, Err(e)) => fail(format!("evaluation failed on {}: {e}", show(&t, 0))),
    }
}
