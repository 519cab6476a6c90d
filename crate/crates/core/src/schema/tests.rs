use super::*;
use crate::typeck::Signature;

fn prelude_sig() -> Signature {
    let mut sig = Signature::new();
    for s in builtin_schemas() {
        sig.add_schema(s);
    }
    sig
}

#[test]
fn builtin_schemas_validate() {
    let sig = prelude_sig();
    for s in builtin_schemas() {
        if let Err(es) = validate_schema(&sig, &s) {
            panic!("{}: {:?}", s.name, es);
        }
    }
}

#[test]
fn builtin_rules_generate() {
    let sig = prelude_sig();
    for s in builtin_schemas() {
        let r = generate_rules(&sig, &s).unwrap();
        assert_eq!(r.intros.len(), s.cells.len());
    }
}
