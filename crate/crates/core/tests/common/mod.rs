//! Independent oracles and random instances shared by the integration tests.
//! Nothing here calls into the separation or tropical algorithms; the
//! oracles work from the edge list alone.
#![allow(dead_code)]

use std::collections::BTreeSet;

use maxoid::rational::int;
use maxoid::{Dag, Node, NodeSet, Rational, WeightedDag};
use rand::Rng;

/// Every directed path from `i` to `j` as a node list, by plain DFS.
pub fn all_paths(g: &Dag, i: Node, j: Node) -> Vec<Vec<Node>> {
    fn go(g: &Dag, at: Node, j: Node, cur: &mut Vec<Node>, out: &mut Vec<Vec<Node>>) {
        if at == j {
            out.push(cur.clone());
            return;
        }
        for &(u, v) in g.edges() {
            if u == at {
                cur.push(v);
                go(g, v, j, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if i != j {
        go(g, i, j, &mut vec![i], &mut out);
    }
    out
}

pub fn path_weight(wd: &WeightedDag, p: &[Node]) -> Rational {
    p.windows(2)
        .map(|e| wd.weight(e[0], e[1]).expect("path edge").clone())
        .fold(int(0), |a, b| a + b)
}

/// Longest path weight by enumeration; `None` when `j` is unreachable.
pub fn max_path_weight(wd: &WeightedDag, i: Node, j: Node) -> Option<Rational> {
    all_paths(wd.graph(), i, j).iter().map(|p| path_weight(wd, p)).max()
}

/// The defining description of the critical DAG: `i -> j` iff some path
/// exists and no critical `i -> j` path has an interior node in `cond`.
pub fn critical_dag_by_paths(wd: &WeightedDag, cond: NodeSet) -> BTreeSet<(Node, Node)> {
    let n = wd.graph().n();
    let mut out = BTreeSet::new();
    for i in 1..=n {
        for j in 1..=n {
            let paths = all_paths(wd.graph(), i, j);
            let Some(best) = paths.iter().map(|p| path_weight(wd, p)).max() else {
                continue;
            };
            let blocked = paths
                .iter()
                .filter(|p| path_weight(wd, p) == best)
                .any(|p| p[1..p.len() - 1].iter().any(|&v| cond.contains(v)));
            if !blocked {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Textbook d-separation: moralize the ancestral graph of `{i, j} ∪ cond`,
/// delete `cond`, test connectivity.
pub fn d_separated(g: &Dag, i: Node, j: Node, cond: NodeSet) -> bool {
    let n = g.n();
    let mut anc = vec![false; n + 1];
    let mut stack: Vec<Node> = vec![i, j];
    stack.extend(cond.iter());
    while let Some(v) = stack.pop() {
        if !anc[v] {
            anc[v] = true;
            stack.extend(g.edges().iter().filter(|e| e.1 == v).map(|e| e.0));
        }
    }
    let mut adj = vec![vec![false; n + 1]; n + 1];
    for &(u, v) in g.edges() {
        if anc[u] && anc[v] {
            adj[u][v] = true;
            adj[v][u] = true;
        }
    }
    for c in 1..=n {
        let parents: Vec<Node> = g.edges().iter().filter(|e| e.1 == c && anc[c]).map(|e| e.0).collect();
        for &a in &parents {
            for &b in &parents {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![i];
    seen[i] = true;
    while let Some(v) = stack.pop() {
        if v == j {
            return false;
        }
        for w in 1..=n {
            if adj[v][w] && !seen[w] && !cond.contains(w) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    true
}

/// Random DAG with edges `i < j`, each present with probability `p`.
pub fn random_dag(rng: &mut impl Rng, n: usize, p: f64) -> Dag {
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Dag::from_edges(n, &edges).unwrap()
}

/// Integer weights in `-range..=range`; small ranges produce ties often.
pub fn random_weights(rng: &mut impl Rng, g: Dag, range: i64) -> WeightedDag {
    let w = (0..g.num_edges()).map(|_| int(rng.random_range(-range..=range))).collect();
    WeightedDag::new(g, w).unwrap()
}

/// Weights with distinct powers-of-two fractional parts: paths with
/// different edge sets never tie, so the result is generic.
pub fn random_generic_weights(rng: &mut impl Rng, g: Dag) -> WeightedDag {
    let m = g.num_edges();
    let w = (0..m)
        .map(|k| int(rng.random_range(-6..=6)) + Rational::new(1.into(), (1i64 << (k + 1)).into()))
        .collect();
    WeightedDag::new(g, w).unwrap()
}

pub fn random_weighted(rng: &mut impl Rng, n: usize) -> WeightedDag {
    let p = rng.random_range(0.3..0.9);
    let g = random_dag(rng, n, p);
    if rng.random_bool(0.5) {
        random_weights(rng, g, 3)
    } else {
        random_generic_weights(rng, g)
    }
}

/// All subsets of `1..=n` avoiding `i` and `j`.
pub fn cond_sets(n: usize, i: Node, j: Node) -> impl Iterator<Item = NodeSet> {
    NodeSet::full(n).without(i).without(j).subsets()
}

/// Every DAG on `1..=n` whose edges go from smaller to larger label.
pub fn all_ordered_dags(n: usize) -> Vec<Dag> {
    let pairs: Vec<(Node, Node)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            Dag::from_edges(n, &edges).unwrap()
        })
        .collect()
}

pub fn diamond() -> Dag {
    Dag::from_edges(4, &[(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap()
}
