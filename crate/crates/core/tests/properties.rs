mod common;

use std::collections::BTreeSet;

use maxoid::axioms::{check_amalgamation, check_compositional_graphoid, check_strong_spohn, CheckOptions, Rule};
use maxoid::implication::polyci_formula;
use maxoid::linarith::{feasible, Constraint, LinExpr, Relation};
use maxoid::rational::{int, ratio};
use maxoid::separation::{
    all_statements, c_star_separated, closure_weights, critical_dag, maxoid, weighted_transitive_reduction,
};
use maxoid::tropical::{critical_paths, genericity_witness, is_generic, kleene_star, path_weight, proper_kleene_star};
use maxoid::{CiStatement, Dag, ExtRational, NodeSet, Rational, WeightedDag};
use proptest::prelude::*;

use common::{critical_dag_by_paths, d_separated, max_path_weight};

/// Weighted DAG on up to `max_n` nodes with edges `i < j`. Half of the cases
/// get small integer weights (plenty of ties), the rest generic weights.
fn weighted(max_n: usize) -> impl Strategy<Value = WeightedDag> {
    (1..=max_n).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        (
            Just(n),
            proptest::collection::vec(any::<bool>(), m),
            proptest::collection::vec(-3i64..=3, m),
            any::<bool>(),
        )
            .prop_map(|(n, mask, ws, generic)| {
                let pairs = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
                let edges: Vec<_> = pairs.zip(&mask).filter(|(_, &b)| b).map(|(e, _)| e).collect();
                let g = Dag::from_edges(n, &edges).unwrap();
                let w = (0..edges.len())
                    .map(|k| {
                        let base = int(ws[k]);
                        if generic {
                            base + ratio(1, 1 << (k + 1))
                        } else {
                            base
                        }
                    })
                    .collect();
                WeightedDag::new(g, w).unwrap()
            })
    })
}

fn generic_weighted(max_n: usize) -> impl Strategy<Value = WeightedDag> {
    weighted(max_n).prop_filter("generic", is_generic)
}

fn statement_of(n: usize, pick: usize) -> Option<CiStatement> {
    let all = all_statements(n);
    (!all.is_empty()).then(|| all[pick % all.len()])
}

fn fin(x: &ExtRational) -> Option<Rational> {
    x.finite().cloned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kleene_star_matches_longest_paths(wd in weighted(7)) {
        let star = kleene_star(&wd);
        let n = wd.graph().n();
        for i in 1..=n {
            for j in 1..=n {
                let expect = if i == j { Some(int(0)) } else { max_path_weight(&wd, i, j) };
                prop_assert_eq!(fin(star.get(i, j)), expect, "entry ({}, {})", i, j);
            }
        }
    }

    #[test]
    fn kleene_star_is_idempotent(wd in weighted(6)) {
        let star = kleene_star(&wd);
        prop_assert_eq!(star.tropical_mul(&star), star);
    }

    #[test]
    fn critical_paths_share_the_proper_star_weight(wd in weighted(6)) {
        let proper = proper_kleene_star(&wd);
        let n = wd.graph().n();
        for i in 1..=n {
            for j in 1..=n {
                let ps = critical_paths(&wd, i, j);
                let entry = fin(proper.get(i, j));
                prop_assert_eq!(ps.is_empty(), entry.is_none());
                for p in &ps {
                    prop_assert_eq!(Some(path_weight(&wd, p).unwrap()), entry.clone());
                }
            }
        }
    }

    #[test]
    fn genericity_witness_is_a_tie(wd in weighted(6)) {
        match genericity_witness(&wd) {
            None => prop_assert!(is_generic(&wd)),
            Some((a, b)) => {
                prop_assert!(a != b);
                prop_assert_eq!(a.source(), b.source());
                prop_assert_eq!(a.target(), b.target());
                prop_assert_eq!(path_weight(&wd, &a).unwrap(), path_weight(&wd, &b).unwrap());
            }
        }
    }

    #[test]
    fn critical_dag_matches_path_definition(wd in weighted(6)) {
        for cond in NodeSet::full(wd.graph().n()).subsets() {
            let fast: BTreeSet<_> = critical_dag(&wd, cond).unwrap().edges().iter().copied().collect();
            prop_assert_eq!(fast, critical_dag_by_paths(&wd, cond), "conditioning set {}", cond);
        }
    }

    #[test]
    fn critical_dag_shrinks_as_conditioning_grows(wd in weighted(6)) {
        let n = wd.graph().n();
        for big in NodeSet::full(n).subsets() {
            let big_edges = critical_dag(&wd, big).unwrap();
            for small in big.subsets() {
                let small_edges = critical_dag(&wd, small).unwrap();
                for &(u, v) in big_edges.edges() {
                    prop_assert!(small_edges.has_edge(u, v), "{}->{} in D({}) but not D({})", u, v, big, small);
                }
            }
        }
    }

    #[test]
    fn separation_is_symmetric(wd in weighted(5)) {
        let n = wd.graph().n();
        for i in 1..=n {
            for j in i + 1..=n {
                for cond in common::cond_sets(n, i, j) {
                    let a = c_star_separated(&wd, &CiStatement::new(i, j, cond).unwrap()).unwrap();
                    let b = c_star_separated(&wd, &CiStatement::new(j, i, cond).unwrap()).unwrap();
                    prop_assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn reduction_and_closure_keep_the_maxoid(wd in generic_weighted(6)) {
        let m = maxoid(&wd);
        prop_assert_eq!(&maxoid(&weighted_transitive_reduction(&wd)), &m);
        let closed = closure_weights(&wd);
        prop_assert!(closed.graph().is_transitively_closed());
        prop_assert_eq!(&maxoid(&closed), &m);
    }

    #[test]
    fn maxoid_contains_every_d_separation(wd in weighted(5)) {
        let m = maxoid(&wd);
        let g = wd.graph();
        for s in all_statements(g.n()) {
            if d_separated(g, s.i(), s.j(), s.cond()) {
                prop_assert!(m.contains(&s), "d-separation ({}) missing", s);
            }
        }
    }

    #[test]
    fn maxoids_are_compositional_graphoids_with_amalgamation(wd in weighted(5)) {
        let m = maxoid(&wd);
        let opts = CheckOptions::default();
        prop_assert_eq!(check_compositional_graphoid(&m, &opts).unwrap(), vec![]);
        prop_assert_eq!(check_amalgamation(&m, &opts).unwrap(), vec![]);
    }

    #[test]
    fn first_spohn_rule_holds(wd in weighted(5)) {
        let m = maxoid(&wd);
        let bad: Vec<_> = check_strong_spohn(&m, &CheckOptions::default())
            .unwrap()
            .into_iter()
            .filter(|r| r.rule == Rule::StrongSpohn1)
            .collect();
        prop_assert_eq!(bad, vec![]);
    }

    /// The second Spohn implication with the extra premise `(kl|ijM)` of the
    /// original (non-strong) Spohn property.
    #[test]
    fn second_spohn_rule_holds_with_the_fourth_premise(wd in weighted(5)) {
        let m = maxoid(&wd);
        for r in check_strong_spohn(&m, &CheckOptions::default()).unwrap() {
            if r.rule != Rule::StrongSpohn2 {
                continue;
            }
            let (i, j, k, l, rest) = (r.slots[0], r.slots[1], r.slots[2], r.slots[3], r.slots[4]);
            let kl = |cond: NodeSet| CiStatement::new(k.first().unwrap(), l.first().unwrap(), cond).unwrap();
            prop_assert!(!m.contains(&kl(rest.union(i).union(j))), "violation survives (kl|ijM): {:?}", r);
        }
    }

    #[test]
    fn polyci_formula_agrees_with_separation(wd in weighted(5), pick in any::<usize>()) {
        let g = wd.graph();
        let Some(s) = statement_of(g.n(), pick) else { return Ok(()) };
        let f = polyci_formula(g, &s).unwrap();
        prop_assert_eq!(f.evaluate(wd.weights()), c_star_separated(&wd, &s).unwrap(), "statement {}", s);
    }
}

// ---------------------------------------------------------------------------
// linear feasibility against Fourier–Motzkin elimination

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Rational>,
    constant: Rational,
    strict: bool,
}

/// Feasibility of `{ a·x + c (> | >=) 0 }` by eliminating every variable.
/// Rows are scaled so their leading coefficient is ±1 and deduplicated after
/// each step; constant rows are decided as soon as they appear.
fn fourier_motzkin(rows: Vec<Row>, nvars: usize) -> bool {
    let Some(mut rows) = tidy(rows) else { return false };
    for k in 0..nvars {
        let (pos, rest): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| r.coeffs[k] > int(0));
        let (neg, mut next): (Vec<Row>, Vec<Row>) = rest.into_iter().partition(|r| r.coeffs[k] < int(0));
        for p in &pos {
            for q in &neg {
                let (a, b) = (p.coeffs[k].clone(), -q.coeffs[k].clone());
                next.push(Row {
                    coeffs: (0..nvars).map(|t| &b * &p.coeffs[t] + &a * &q.coeffs[t]).collect(),
                    constant: &b * &p.constant + &a * &q.constant,
                    strict: p.strict || q.strict,
                });
            }
        }
        let Some(t) = tidy(next) else { return false };
        rows = t;
    }
    true
}

fn tidy(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut out = BTreeSet::new();
    for r in rows {
        let Some(lead) = r.coeffs.iter().find(|c| **c != int(0)).map(|c| if *c > int(0) { c.clone() } else { -c.clone() }) else {
            let ok = if r.strict { r.constant > int(0) } else { r.constant >= int(0) };
            if !ok {
                return None;
            }
            continue;
        };
        let coeffs: Vec<Rational> = r.coeffs.iter().map(|c| c / &lead).collect();
        out.insert((coeffs, r.constant / &lead, r.strict));
    }
    Some(out.into_iter().map(|(coeffs, constant, strict)| Row { coeffs, constant, strict }).collect())
}

fn rows_of(system: &[Constraint], nvars: usize) -> Vec<Row> {
    let mut out = Vec::new();
    for c in system {
        let coeffs: Vec<Rational> = (0..nvars).map(|k| c.expr().coeff(k)).collect();
        let constant = c.expr().constant_term().clone();
        match c.relation() {
            Relation::Eq => {
                out.push(Row { coeffs: coeffs.clone(), constant: constant.clone(), strict: false });
                out.push(Row { coeffs: coeffs.iter().map(|x| -x).collect(), constant: -constant, strict: false });
            }
            rel => out.push(Row { coeffs, constant, strict: rel == Relation::Gt }),
        }
    }
    out
}

fn system(max_vars: usize) -> impl Strategy<Value = (Vec<Constraint>, usize)> {
    (1..=max_vars).prop_flat_map(|nvars| {
        let row = (proptest::collection::vec(-3i64..=3, nvars), -3i64..=3, 0u8..3);
        (proptest::collection::vec(row, 1..=6), Just(nvars)).prop_map(|(rows, nvars)| {
            let cs = rows
                .into_iter()
                .map(|(a, c, rel)| {
                    let mut e = LinExpr::from_dense(&a);
                    e = e.sub(&LinExpr::constant(int(-c)));
                    let rel = [Relation::Gt, Relation::Ge, Relation::Eq][rel as usize];
                    Constraint::new(e, rel)
                })
                .collect();
            (cs, nvars)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn feasible_agrees_with_fourier_motzkin((cs, nvars) in system(4)) {
        let got = feasible(&cs, nvars);
        prop_assert_eq!(got.is_some(), fourier_motzkin(rows_of(&cs, nvars), nvars), "system {:?}", cs);
        if let Some(w) = got {
            for c in &cs {
                prop_assert!(c.satisfied_by(w.point()));
            }
        }
    }

    #[test]
    fn feasible_is_deterministic((cs, nvars) in system(4)) {
        let a = feasible(&cs, nvars).map(|w| w.into_point());
        let b = feasible(&cs, nvars).map(|w| w.into_point());
        prop_assert_eq!(a, b);
    }
}

// ---------------------------------------------------------------------------
// graph basics

proptest! {
    #[test]
    fn closure_is_idempotent_and_paths_are_not_reversible(wd in weighted(7)) {
        let g = wd.graph();
        let c = g.transitive_closure();
        prop_assert_eq!(c.transitive_closure(), c.clone());
        for (i, j) in g.connected_pairs() {
            for p in g.paths(i, j) {
                let rev: Vec<_> = p.nodes().iter().rev().copied().collect();
                prop_assert!(maxoid::Path::new(g, rev).is_err());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// the second Strong Spohn implication as usually stated is not valid

#[test]
fn second_strong_spohn_rule_fails_on_a_collider() {
    // k -> j <- l with i isolated: (ij|kl), (kl|i), (kl|) hold, (kl|j) fails
    let g = Dag::from_edges(4, &[(1, 3), (2, 3)]).unwrap();
    let m = maxoid(&WeightedDag::new(g, vec![int(0), int(0)]).unwrap());
    let st = |i, j, cond: &[usize]| CiStatement::new(i, j, cond.iter().copied().collect()).unwrap();
    for s in [st(3, 4, &[1, 2]), st(1, 2, &[4]), st(1, 2, &[])] {
        assert!(m.contains(&s), "{s}");
    }
    assert!(!m.contains(&st(1, 2, &[3])));
    let reports = check_strong_spohn(&m, &CheckOptions::default()).unwrap();
    assert!(reports.iter().all(|r| r.rule == Rule::StrongSpohn2 && r.replay(&m)));
    assert!(reports.iter().any(|r| r.missing == vec![st(1, 2, &[3])]));
}
