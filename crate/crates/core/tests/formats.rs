use std::fs;
use std::path::PathBuf;

use maxoid::format::{
    dag_from_value, dag_to_value, maxoid_from_value, maxoid_to_value, parse_ci_statement, parse_dag_json,
    parse_maxoid_json, parse_query, parse_weights_json, weights_from_value, weights_to_value,
};
use maxoid::separation::all_statements;
use maxoid::{CiStatement, NodeSet};
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|f| {
            let p = f.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

/// The seed corpora double as parser fixtures: every seed parses except
/// the ones named as deliberate rejects.
#[test]
fn fuzz_seeds_parse_as_expected() {
    for (name, text) in corpus("dag_json") {
        let r = parse_dag_json(&text);
        assert_eq!(r.is_ok(), name != "cycle", "{name}: {r:?}");
        if let Ok(g) = r {
            assert_eq!(dag_from_value(&dag_to_value(&g)).unwrap(), g);
        }
    }
    for (name, text) in corpus("weights_json") {
        let (dag, w) = match text.split_once('\0') {
            Some((d, w)) => (Some(parse_dag_json(d).unwrap()), w.to_string()),
            None => (None, text.clone()),
        };
        let wd = parse_weights_json(&w, dag.as_ref()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(weights_from_value(&weights_to_value(&wd), Some(wd.graph())).unwrap(), wd);
    }
    for (name, text) in corpus("maxoid_json") {
        let m = parse_maxoid_json(&text, None).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(maxoid_from_value(&maxoid_to_value(&m), Some(m.n())).unwrap().statements(), m.statements());
    }
    for (name, text) in corpus("ci_statement") {
        parse_ci_statement(&text, None).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    for (name, text) in corpus("query") {
        parse_query(&text, None).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn compact_and_comma_forms_agree() {
    let a = parse_ci_statement("14|23", None).unwrap();
    let b = parse_ci_statement("1,4|2,3", None).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_string(), "1,4|2,3");
    assert_eq!(parse_ci_statement("4,1|3,2", None).unwrap(), a);
    for bad in ["1,1|2", "12|1", "1|2", "", "1,2|x", "0,2|", "12|3|4"] {
        assert!(parse_ci_statement(bad, None).is_err(), "{bad:?}");
    }
    assert!(parse_ci_statement("1,5|", Some(4)).is_err());
}

fn statement(max_n: usize) -> impl Strategy<Value = CiStatement> {
    (2..=max_n).prop_flat_map(|n| {
        let all = all_statements(n);
        (0..all.len()).prop_map(move |k| all[k])
    })
}

proptest! {
    #[test]
    fn statements_round_trip_through_text(s in statement(12)) {
        prop_assert_eq!(parse_ci_statement(&s.to_string(), None).unwrap(), s);
        if s.max_node() <= 9 {
            let compact = format!(
                "{}{}|{}",
                s.i(),
                s.j(),
                s.cond().iter().map(|v| v.to_string()).collect::<String>()
            );
            prop_assert_eq!(parse_ci_statement(&compact, None).unwrap(), s);
        }
    }

    #[test]
    fn queries_round_trip(ps in proptest::collection::vec(statement(6), 0..4), cs in proptest::collection::vec(statement(6), 1..3)) {
        let side = |v: &[CiStatement]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("; ");
        let (p, c) = parse_query(&format!("{} => {}", side(&ps), side(&cs)), None).unwrap();
        prop_assert_eq!(p, ps.clone());
        prop_assert_eq!(c, cs.clone());
        let spaced = |v: &[CiStatement]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");
        let (p, c) = parse_query(&format!("{} => {}", spaced(&ps), spaced(&cs)), None).unwrap();
        prop_assert_eq!(p, ps);
        prop_assert_eq!(c, cs);
    }

    #[test]
    fn node_sets_display_as_sorted_commas(bits in 0u64..1 << 12) {
        let set = NodeSet::from_bits(bits << 1);
        let shown = set.to_string();
        let parsed: Vec<usize> = shown.split(',').filter(|t| !t.is_empty()).map(|t| t.parse().unwrap()).collect();
        prop_assert_eq!(parsed, set.to_vec());
    }
}
