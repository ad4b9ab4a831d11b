mod common;

use std::collections::BTreeSet;

use maxoid::axioms::{check_amalgamation, check_compositional_graphoid, CheckOptions};
use maxoid::fan::enumerate_maximal_cones;
use maxoid::implication::{decide_implication, Scope};
use maxoid::polytope::{face_maxoid, vertices_of, Polytope};
use maxoid::separation::{all_statements, maxoid};
use maxoid::tropical::is_generic;
use maxoid::{CiStatement, Dag, Maxoid};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};

use common::{all_ordered_dags, random_weighted};

/// Every maxoid `g` can carry: one per face of the polytope (equivalently
/// per cone of the fan). With `generic`, only the vertices.
fn maxoid_pool(g: &Dag, generic: bool) -> BTreeSet<Maxoid> {
    let cones = enumerate_maximal_cones(g);
    if generic {
        return cones.into_iter().map(|c| c.maxoid).collect();
    }
    let p = Polytope::new(vertices_of(g, &cones).into_iter().map(|(_, v)| v).collect()).unwrap();
    p.face_lattice().faces.iter().map(|f| face_maxoid(g, &p, f).unwrap()).collect()
}

fn brute_force_holds(pool: &BTreeSet<Maxoid>, premises: &[CiStatement], conclusions: &[CiStatement]) -> bool {
    pool.iter()
        .filter(|m| premises.iter().all(|p| m.contains(p)))
        .all(|m| conclusions.iter().any(|q| m.contains(q)))
}

#[test]
fn local_implication_agrees_with_the_maxoid_pool() {
    let mut rng = StdRng::seed_from_u64(21);
    let mut graphs: Vec<Dag> = (3..=4).flat_map(all_ordered_dags).collect();
    graphs.retain(|g| g.num_edges() > 0);
    let (mut holds, mut fails) = (0, 0);
    for g in &graphs {
        let stmts = all_statements(g.n());
        for generic in [false, true] {
            let pool = maxoid_pool(g, generic);
            for _ in 0..3 {
                // premises drawn from a pool maxoid keep the query non-vacuous
                let host: Vec<&CiStatement> = pool.iter().nth(rng.random_range(0..pool.len())).unwrap().iter().collect();
                let k = rng.random_range(0..=2.min(host.len()));
                let premises: Vec<CiStatement> = host.choose_multiple(&mut rng, k).map(|s| *(*s)).collect();
                let conclusions = vec![*stmts.choose(&mut rng).unwrap()];
                let v = decide_implication(&Scope::Graph(g.clone()), &premises, &conclusions, generic).unwrap();
                assert_eq!(
                    v.holds,
                    brute_force_holds(&pool, &premises, &conclusions),
                    "graph {g:?}, {premises:?} => {conclusions:?}, generic {generic}"
                );
                match v.counterexample {
                    Some(wd) => {
                        fails += 1;
                        let m = maxoid(&wd);
                        assert!(premises.iter().all(|p| m.contains(p)));
                        assert!(!conclusions.iter().any(|q| m.contains(q)));
                        assert!(pool.contains(&m), "counterexample maxoid outside the face pool");
                        assert!(!generic || is_generic(&wd));
                    }
                    None => holds += 1,
                }
            }
        }
    }
    assert!(holds > 20 && fails > 20, "unbalanced sample: {holds} hold, {fails} fail");
}

#[test]
fn set_level_rules_agree_with_the_pairwise_reduction() {
    // Intersections of maxoids are closed under the (Horn) compositional
    // graphoid rules without being maxoids themselves.
    let mut rng = StdRng::seed_from_u64(22);
    let set_level = CheckOptions { set_level: true, ..CheckOptions::default() };
    for _ in 0..40 {
        let a = maxoid(&random_weighted(&mut rng, 4));
        let b = maxoid(&random_weighted(&mut rng, 4));
        let meet = Maxoid::new(4, a.iter().filter(|s| b.contains(s)).cloned()).unwrap();
        for m in [&a, &meet] {
            assert_eq!(check_compositional_graphoid(m, &set_level).unwrap(), vec![], "{m:?}");
        }
    }
    // A set that breaks a pairwise rule also breaks a set-level one.
    for _ in 0..40 {
        let all = all_statements(4);
        let pick: Vec<CiStatement> = all.choose_multiple(&mut rng, 6).cloned().collect();
        let m = Maxoid::new(4, pick).unwrap();
        let reports = check_compositional_graphoid(&m, &set_level).unwrap();
        let pairwise = reports.iter().any(|r| !r.rule.name().starts_with("set_"));
        let set = reports.iter().any(|r| r.rule.name().starts_with("set_"));
        assert_eq!(pairwise, set, "{m:?}");
        assert!(reports.iter().all(|r| r.replay(&m)));
    }
}

#[test]
fn amalgamation_holds_on_random_maxoids_up_to_six_nodes() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..30 {
        let n = rng.random_range(5..=6);
        let m = maxoid(&random_weighted(&mut rng, n));
        assert_eq!(check_amalgamation(&m, &CheckOptions::default()).unwrap(), vec![]);
    }
}
