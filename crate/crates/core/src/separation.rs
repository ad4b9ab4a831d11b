//! Critical DAGs, C*-separation and maxoids.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Dag, Node, Path};
use crate::nodeset::NodeSet;
use crate::rational::{ratio, ExtRational, Rational};
use crate::tropical::{critical_paths, path_weight, proper_kleene_star, TropicalMatrix, WeightedDag};

/// A pairwise statement `(i, j | L)`, stored with `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CiStatement {
    i: Node,
    j: Node,
    cond: NodeSet,
}

impl CiStatement {
    /// Canonicalizes the order of `i` and `j`.
    pub fn new(i: Node, j: Node, cond: NodeSet) -> Result<CiStatement> {
        if i == 0 || j == 0 || cond.contains(0) {
            return Err(Error::InvalidStatement("node ids start at 1".into()));
        }
        if i == j {
            return Err(Error::InvalidStatement(format!("i = j = {i}")));
        }
        if cond.contains(i) || cond.contains(j) {
            return Err(Error::InvalidStatement(format!(
                "conditioning set {{{cond}}} meets {{{i},{j}}}"
            )));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Ok(CiStatement { i, j, cond })
    }

    pub fn i(&self) -> Node {
        self.i
    }

    pub fn j(&self) -> Node {
        self.j
    }

    pub fn cond(&self) -> NodeSet {
        self.cond
    }

    /// Largest node mentioned.
    pub fn max_node(&self) -> Node {
        self.cond.iter().last().unwrap_or(0).max(self.j)
    }

    pub fn nodes(&self) -> NodeSet {
        self.cond.with(self.i).with(self.j)
    }
}

impl fmt::Display for CiStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}|{}", self.i, self.j, self.cond)
    }
}

impl fmt::Debug for CiStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self)
    }
}

/// A set of pairwise CI statements over the ground set `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Maxoid {
    n: usize,
    stmts: BTreeSet<CiStatement>,
}

impl Maxoid {
    pub fn new(n: usize, stmts: impl IntoIterator<Item = CiStatement>) -> Result<Maxoid> {
        let stmts: BTreeSet<CiStatement> = stmts.into_iter().collect();
        if let Some(s) = stmts.iter().find(|s| s.max_node() > n) {
            return Err(Error::NodeOutOfRange {
                node: s.max_node(),
                n,
            });
        }
        Ok(Maxoid { n, stmts })
    }

    pub fn empty(n: usize) -> Maxoid {
        Maxoid {
            n,
            stmts: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, s: &CiStatement) -> bool {
        self.stmts.contains(s)
    }

    /// Membership of `(i, j | cond)`; false for malformed triples.
    pub fn holds(&self, i: Node, j: Node, cond: NodeSet) -> bool {
        CiStatement::new(i, j, cond).is_ok_and(|s| self.stmts.contains(&s))
    }

    pub fn len(&self) -> usize {
        self.stmts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stmts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CiStatement> {
        self.stmts.iter()
    }

    pub fn statements(&self) -> &BTreeSet<CiStatement> {
        &self.stmts
    }

    pub fn is_subset(&self, other: &Maxoid) -> bool {
        self.stmts.is_subset(&other.stmts)
    }

    pub fn union(&self, other: &Maxoid) -> Maxoid {
        Maxoid {
            n: self.n.max(other.n),
            stmts: self.stmts.union(&other.stmts).copied().collect(),
        }
    }
}

impl fmt::Debug for Maxoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.stmts.iter()).finish()
    }
}

/// Every canonical statement over `1..=n`.
pub fn all_statements(n: usize) -> Vec<CiStatement> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let rest = NodeSet::full(n).without(i).without(j);
            for cond in rest.subsets() {
                out.push(CiStatement { i, j, cond });
            }
        }
    }
    out.sort();
    out
}

/// Adjacency of a critical DAG as child/parent masks.
struct CriticalAdjacency {
    children: Vec<NodeSet>,
    parents: Vec<NodeSet>,
}

impl CriticalAdjacency {
    /// Edge `u -> v` iff `v` is reachable from `u` and
    /// `A_ul + A_lv < A_uv` for every `l` in `cond`, where `A` is the proper
    /// Kleene star. Only interior nodes of a critical path can block it.
    fn build(g: &Dag, star: &TropicalMatrix, cond: NodeSet) -> Self {
        let n = g.n();
        let mut children = vec![NodeSet::EMPTY; n + 1];
        let mut parents = vec![NodeSet::EMPTY; n + 1];
        for u in 1..=n {
            for v in g.descendants(u).iter() {
                let best = star.get(u, v);
                let blocked = cond
                    .without(u)
                    .without(v)
                    .iter()
                    .any(|l| &(star.get(u, l) + star.get(l, v)) >= best);
                if !blocked {
                    children[u].insert(v);
                    parents[v].insert(u);
                }
            }
        }
        CriticalAdjacency { children, parents }
    }

    fn has(&self, u: Node, v: Node) -> bool {
        self.children[u].contains(v)
    }

    /// Whether one of the five connecting shapes joins `i` and `j`:
    /// (a) `i -> j` or `j -> i`; (b) `i <- p -> j`; (c) `i -> l <- j`;
    /// (d) `i <- p -> l <- j` or its mirror; (e) `i <- p -> l <- q -> j`,
    /// with colliders `l` in `cond`, non-colliders `p, q` outside `cond`,
    /// and all nodes of a shape distinct.
    fn connects(&self, n: usize, i: Node, j: Node, cond: NodeSet) -> bool {
        if self.has(i, j) || self.has(j, i) {
            return true;
        }
        let free = NodeSet::full(n).difference(cond).without(i).without(j);
        let (pi, pj) = (self.parents[i], self.parents[j]);
        if !pi.intersection(pj).intersection(free).is_empty() {
            return true;
        }
        if !self.children[i]
            .intersection(self.children[j])
            .intersection(cond)
            .is_empty()
        {
            return true;
        }
        for l in cond.iter() {
            let pl = self.parents[l].intersection(free);
            let from_i = pi.intersection(pl);
            let from_j = pj.intersection(pl);
            if (!from_i.is_empty() && self.has(j, l)) || (!from_j.is_empty() && self.has(i, l)) {
                return true;
            }
            if !from_i.is_empty() && !from_j.is_empty() && from_i.union(from_j).len() >= 2 {
                return true;
            }
        }
        false
    }

    fn into_dag(self, n: usize) -> Dag {
        let edges: Vec<_> = (1..=n)
            .flat_map(|u| self.children[u].iter().map(move |v| (u, v)))
            .collect();
        Dag::from_edges(n, &edges).expect("critical DAG is a subgraph of the closure")
    }
}

/// The critical DAG `D(C, L)`.
pub fn critical_dag(wd: &WeightedDag, cond: NodeSet) -> Result<Dag> {
    wd.graph().check_nodes(cond)?;
    let star = proper_kleene_star(wd);
    Ok(CriticalAdjacency::build(wd.graph(), &star, cond).into_dag(wd.graph().n()))
}

/// `i` and `j` are C*-separated given `L`.
pub fn c_star_separated(wd: &WeightedDag, s: &CiStatement) -> Result<bool> {
    let g = wd.graph();
    g.check_nodes(s.nodes())?;
    let star = proper_kleene_star(wd);
    let adj = CriticalAdjacency::build(g, &star, s.cond());
    Ok(!adj.connects(g.n(), s.i(), s.j(), s.cond()))
}

/// All C*-separation statements of `(G, C)`. One critical DAG is built per
/// conditioning set and shared by the pairs outside it.
pub fn maxoid(wd: &WeightedDag) -> Maxoid {
    let g = wd.graph();
    let n = g.n();
    let star = proper_kleene_star(wd);
    let mut stmts = BTreeSet::new();
    for cond in NodeSet::full(n).subsets() {
        if cond.len() + 2 > n {
            continue;
        }
        let adj = CriticalAdjacency::build(g, &star, cond);
        let rest = NodeSet::full(n).difference(cond);
        for i in rest.iter() {
            for j in rest.iter().filter(|&j| j > i) {
                if !adj.connects(n, i, j, cond) {
                    stmts.insert(CiStatement { i, j, cond });
                }
            }
        }
    }
    Maxoid { n, stmts }
}

/// `(I, J | L)` holds iff every `(i, j | L)` with `i` in `I`, `j` in `J` does.
pub fn derive_set_statement(m: &Maxoid, is: NodeSet, js: NodeSet, cond: NodeSet) -> Result<bool> {
    if is.is_empty() || js.is_empty() {
        return Err(Error::Precondition("I and J must be nonempty".into()));
    }
    if !is.is_disjoint(js) || !is.is_disjoint(cond) || !js.is_disjoint(cond) {
        return Err(Error::NotDisjoint);
    }
    Ok(is
        .iter()
        .all(|i| js.iter().all(|j| m.holds(i, j, cond))))
}

/// Keeps exactly the edges `u -> v` that are the unique critical `u -> v`
/// path.
pub fn weighted_transitive_reduction(wd: &WeightedDag) -> WeightedDag {
    let g = wd.graph();
    let star = proper_kleene_star(wd);
    let keep: Vec<bool> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let direct = ExtRational::Finite(wd.weight(u, v).expect("edge").clone());
            g.children(u).without(v).iter().all(|c| {
                let w = ExtRational::Finite(wd.weight(u, c).expect("edge").clone());
                &w + star.get(c, v) < direct
            })
        })
        .collect();
    let reduced = g.filter_edges(|u, v| keep[g.edge_index(u, v).expect("edge")]);
    let w = wd
        .weights()
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(w, _)| w.clone())
        .collect();
    WeightedDag::new(reduced, w).expect("weights restricted to kept edges")
}

/// Weights on the transitive closure with the same maxoid: original edges
/// keep their weight, added edges get `delta = min_ij eps_ij - 1` where
/// `eps_ij` is the critical `i -> j` weight.
pub fn closure_weights(wd: &WeightedDag) -> WeightedDag {
    let g = wd.graph();
    let closure = g.transitive_closure();
    let star = proper_kleene_star(wd);
    let delta = g
        .connected_pairs()
        .iter()
        .filter_map(|&(i, j)| star.get(i, j).finite().cloned())
        .min()
        .map(|m| m - Rational::one())
        .unwrap_or_else(Rational::zero);
    let w = closure
        .edges()
        .iter()
        .map(|&(u, v)| wd.weight(u, v).cloned().unwrap_or_else(|| delta.clone()))
        .collect();
    WeightedDag::new(closure, w).expect("one weight per closure edge")
}

/// Breaks a tie among critical paths in favour of `target` by adding
/// `eps` to one of its edges that no other tied path uses. `eps` is half the
/// smallest nonzero weight difference between parallel paths (or `1/2` when
/// all parallel paths tie), so every strict comparison elsewhere survives.
pub fn perturb_across_facet(wd: &WeightedDag, target: &Path) -> Result<WeightedDag> {
    let g = wd.graph();
    let (i, j) = (target.source(), target.target());
    let crit = critical_paths(wd, i, j);
    if crit.len() < 2 || !crit.contains(target) {
        return Err(Error::NotTiedCritical(target.to_string()));
    }
    let others: Vec<&Path> = crit.iter().filter(|p| *p != target).collect();
    let (u, v) = target
        .edges()
        .find(|&(a, b)| others.iter().all(|p| !p.edges().any(|e| e == (a, b))))
        .ok_or_else(|| Error::NoPrivateEdge(target.to_string()))?;

    let mut min_gap: Option<Rational> = None;
    for (a, b) in g.connected_pairs() {
        let ws: Vec<Rational> = g
            .paths(a, b)
            .iter()
            .map(|p| path_weight(wd, p).expect("path of host graph"))
            .collect();
        for x in 0..ws.len() {
            for y in x + 1..ws.len() {
                let gap = (&ws[x] - &ws[y]).abs();
                if !gap.is_zero() && min_gap.as_ref().is_none_or(|m| gap < *m) {
                    min_gap = Some(gap);
                }
            }
        }
    }
    let eps = min_gap.unwrap_or_else(Rational::one) * ratio(1, 2);
    let k = g.edge_index(u, v).expect("edge of target");
    let mut w = wd.weights().to_vec();
    w[k] += eps;
    WeightedDag::new(g.clone(), w)
}
