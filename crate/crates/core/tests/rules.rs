mod common;

use common::*;
use hitcell::schema::generate_rules;

#[test]
fn figure_equalities_hold_definitionally() {
    let sig = prelude_sig();
    let cases = fidelity_cases();
    assert_eq!(cases.len(), 12);
    for f in &cases {
        assert_eq!(check_fidelity(&sig, f), Ok(true), "{}", f.name);
    }
}

#[test]
fn generated_rules_match_hand_written_figures() {
    let sig = prelude_sig();
    let gen = |name: &str| generate_rules(&sig, sig.schema(name).unwrap()).unwrap();
    let nat = map_rules(&gen("N"), &nat_to_builtin);
    assert_eq!(erase_names(&nat), erase_names(&fixture_nat()));
    assert_eq!(erase_names(&gen("Push")), erase_names(&fixture_push()));
    assert_eq!(erase_names(&gen("Trunc")), erase_names(&fixture_trunc()));
}
