#![no_main]

use libfuzzer_sys::fuzz_target;
use maxoid::format::{maxoid_from_value, maxoid_to_value, parse_maxoid_json};

fuzz_target!(|data: &str| {
    let Ok(m) = parse_maxoid_json(data, None) else { return };
    let again = maxoid_from_value(&maxoid_to_value(&m), Some(m.n())).expect("serialized maxoid reparses");
    assert_eq!(m.statements(), again.statements());
});
