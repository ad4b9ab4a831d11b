#![no_main]

use libfuzzer_sys::fuzz_target;
use maxoid::format::parse_query;

fuzz_target!(|data: &str| {
    let Ok((premises, conclusions)) = parse_query(data, None) else { return };
    let side = |v: &[maxoid::CiStatement]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("; ");
    let text = format!("{} => {}", side(&premises), side(&conclusions));
    let (p, c) = parse_query(&text, None).expect("rendered query reparses");
    assert_eq!((p, c), (premises, conclusions));
});
