#![no_main]

use libfuzzer_sys::fuzz_target;
use maxoid::format::parse_ci_statement;

fuzz_target!(|data: &str| {
    let Ok(s) = parse_ci_statement(data, None) else { return };
    // the comma form is canonical and always reparses to the same statement
    let again = parse_ci_statement(&s.to_string(), None).expect("displayed statement reparses");
    assert_eq!(s, again);
    assert!(!s.cond().contains(s.i()) && !s.cond().contains(s.j()) && s.i() != s.j());
});
