#![no_main]

use libfuzzer_sys::fuzz_target;
use maxoid::format::{parse_weights_json, weights_from_value, weights_to_value};

// Input: a DAG JSON document, a NUL byte, then a weights document. With no
// NUL the weights must be a full matrix.
fuzz_target!(|data: &str| {
    let (dag, weights) = match data.split_once('\0') {
        Some((d, w)) => (maxoid::format::parse_dag_json(d).ok(), w),
        None => (None, data),
    };
    let Ok(wd) = parse_weights_json(weights, dag.as_ref()) else { return };
    let again = weights_from_value(&weights_to_value(&wd), Some(wd.graph())).expect("serialized weights reparse");
    assert_eq!(wd, again);
});
