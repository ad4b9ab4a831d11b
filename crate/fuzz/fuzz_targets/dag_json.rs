#![no_main]

use libfuzzer_sys::fuzz_target;
use maxoid::format::{dag_from_value, dag_to_value, parse_dag_json};

fuzz_target!(|data: &str| {
    let Ok(g) = parse_dag_json(data) else { return };
    let again = dag_from_value(&dag_to_value(&g)).expect("serialized DAG reparses");
    assert_eq!(g, again);
    assert!(g.topological_order().len() == g.n());
});
