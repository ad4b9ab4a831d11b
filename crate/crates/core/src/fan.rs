//! Cones of constant critical paths and the maximal cones of the maxoid fan.
//!
//! Coordinates of weight space are the edges of the graph in sorted order.
//! A cone is labeled by a [`CriticalSystem`]: one path per connected pair,
//! closed under taking subpaths. Its open cone is cut out by strict
//! inequalities `ω(chosen) > ω(other)`; comparing only against paths that
//! are internally disjoint from the chosen one gives the same open set.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::graph::{Dag, Node, Path};
use crate::linarith::{feasible, rank, Constraint, LinExpr};
use crate::rational::Rational;
use crate::separation::{maxoid, Maxoid};
use crate::tropical::{critical_paths, is_generic, WeightedDag};
use crate::{Error, Result};

/// `ω(π)` as a linear form in the edge coordinates.
pub fn path_expr(g: &Dag, p: &Path) -> LinExpr {
    let mut e = LinExpr::zero();
    for (u, v) in p.edges() {
        e.add_term(g.edge_index(u, v).expect("edge of host graph"), Rational::from_integer(1.into()));
    }
    e
}

/// Name of edge coordinate `k`, e.g. `c24`; nodes above 9 are comma separated.
pub fn edge_var_name(g: &Dag, k: usize) -> String {
    let (u, v) = g.edges()[k];
    if u < 10 && v < 10 {
        format!("c{u}{v}")
    } else {
        format!("c{u},{v}")
    }
}

fn internally_disjoint(a: &Path, b: &Path) -> bool {
    a.interior().is_disjoint(b.interior())
}

/// Two paths agree on every common subpath: their shared nodes form one
/// contiguous, identical stretch of both.
fn segments_agree(a: &Path, b: &Path) -> bool {
    let common = a.node_set().intersection(b.node_set());
    if common.len() < 2 {
        return true;
    }
    let stretch = |p: &Path| -> Option<Vec<Node>> {
        let nodes = p.nodes();
        let first = nodes.iter().position(|&v| common.contains(v))?;
        let run: Vec<Node> = nodes[first..]
            .iter()
            .copied()
            .take_while(|&v| common.contains(v))
            .collect();
        (run.len() == common.len()).then_some(run)
    };
    match (stretch(a), stretch(b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

/// One path per connected ordered pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CriticalSystem {
    choice: BTreeMap<(Node, Node), Path>,
}

impl CriticalSystem {
    /// The critical paths of a weight matrix with a unique critical path
    /// between every connected pair.
    pub fn of(wd: &WeightedDag) -> Result<CriticalSystem> {
        let mut choice = BTreeMap::new();
        for (i, j) in wd.graph().connected_pairs() {
            let mut crit = critical_paths(wd, i, j);
            if crit.len() != 1 {
                return Err(Error::NonGeneric(format!(
                    "{} critical paths from {i} to {j}",
                    crit.len()
                )));
            }
            choice.insert((i, j), crit.pop().expect("one path"));
        }
        Ok(CriticalSystem { choice })
    }

    pub fn path(&self, i: Node, j: Node) -> Option<&Path> {
        self.choice.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Node, Node), &Path)> {
        self.choice.iter()
    }

    pub fn len(&self) -> usize {
        self.choice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choice.is_empty()
    }

    /// Every chosen path's subpaths are the chosen paths of their endpoints.
    pub fn is_subpath_closed(&self) -> bool {
        self.choice.values().all(|p| {
            let nodes = p.nodes();
            (0..nodes.len()).all(|a| {
                (a + 1..nodes.len()).all(|b| {
                    self.path(nodes[a], nodes[b]).map(|q| q.nodes()) == Some(&nodes[a..=b])
                })
            })
        })
    }

    /// Sum of the chosen paths' edge indicators.
    pub fn indicator_sum(&self, g: &Dag) -> Vec<i64> {
        let mut v = vec![0; g.num_edges()];
        for p in self.choice.values() {
            for (a, b) in p.edges() {
                v[g.edge_index(a, b).expect("edge of host graph")] += 1;
            }
        }
        v
    }

    /// Strict rows `ω(chosen) > ω(other)`; with `minimal`, only against
    /// paths internally disjoint from the chosen one. Duplicates removed.
    pub fn cone(&self, g: &Dag, minimal: bool) -> ConeDescription {
        let mut strict = Vec::new();
        for (&(i, j), chosen) in &self.choice {
            let ce = path_expr(g, chosen);
            for other in g.paths(i, j) {
                if &other == chosen || (minimal && !internally_disjoint(chosen, &other)) {
                    continue;
                }
                let row = Constraint::greater(&ce, &path_expr(g, &other));
                if !strict.contains(&row) {
                    strict.push(row);
                }
            }
        }
        ConeDescription { strict }
    }
}

/// An open polyhedral cone given by homogeneous strict inequalities.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ConeDescription {
    pub strict: Vec<Constraint>,
}

impl ConeDescription {
    pub fn contains(&self, point: &[Rational]) -> bool {
        self.strict.iter().all(|c| c.satisfied_by(point))
    }

    pub fn is_empty_set(&self, nvars: usize) -> bool {
        feasible(&self.strict, nvars).is_none()
    }
}

/// Inequalities of the open cone of constant critical paths around `wd`.
pub fn cone_of(wd: &WeightedDag, minimal: bool) -> Result<ConeDescription> {
    if !is_generic(wd) {
        return Err(Error::NonGeneric(format!("{wd:?}")));
    }
    Ok(CriticalSystem::of(wd)?.cone(wd.graph(), minimal))
}

/// One maximal cone of the fan.
#[derive(Clone, Debug)]
pub struct ConeEntry {
    pub system: CriticalSystem,
    /// Minimal strict description.
    pub cone: ConeDescription,
    /// A point of the open cone.
    pub witness: Vec<Rational>,
    pub maxoid: Maxoid,
}

impl ConeEntry {
    pub fn weights(&self, g: &Dag) -> WeightedDag {
        WeightedDag::new(g.clone(), self.witness.clone()).expect("witness has one weight per edge")
    }
}

struct Search<'a> {
    g: &'a Dag,
    pairs: Vec<(Node, Node)>,
    paths: Vec<Vec<Path>>,
}

impl Search<'_> {
    fn run(
        &self,
        depth: usize,
        chosen: &[Path],
        rows: &[Constraint],
        witness: &[Rational],
    ) -> Vec<ConeEntry> {
        if depth == self.pairs.len() {
            let system = CriticalSystem {
                choice: self.pairs.iter().copied().zip(chosen.iter().cloned()).collect(),
            };
            debug_assert!(system.is_subpath_closed());
            let cone = system.cone(self.g, true);
            let wd = WeightedDag::new(self.g.clone(), witness.to_vec()).expect("one weight per edge");
            let maxoid = maxoid(&wd);
            return vec![ConeEntry {
                system,
                cone,
                witness: witness.to_vec(),
                maxoid,
            }];
        }
        let candidates = &self.paths[depth];
        let branches: Vec<(usize, Vec<Constraint>, Vec<Rational>)> = candidates
            .par_iter()
            .enumerate()
            .filter_map(|(k, p)| {
                if !chosen.iter().all(|c| segments_agree(p, c)) {
                    return None;
                }
                let pe = path_expr(self.g, p);
                let mut next = rows.to_vec();
                let before = next.len();
                for other in candidates {
                    if other != p && internally_disjoint(p, other) {
                        let row = Constraint::greater(&pe, &path_expr(self.g, other));
                        if !next.contains(&row) {
                            next.push(row);
                        }
                    }
                }
                if next.len() == before {
                    return Some((k, next, witness.to_vec()));
                }
                let w = feasible(&next, self.g.num_edges())?;
                Some((k, next, w.into_point()))
            })
            .collect();
        branches
            .into_par_iter()
            .map(|(k, next, w)| {
                let mut chosen = chosen.to_vec();
                chosen.push(candidates[k].clone());
                self.run(depth + 1, &chosen, &next, &w)
            })
            .flatten()
            .collect()
    }
}

/// Pairs ordered by the number of edges on a shortest connecting path,
/// then lexicographically.
fn pair_order(g: &Dag) -> Vec<(Node, Node)> {
    let mut pairs: Vec<(usize, Node, Node)> = g
        .connected_pairs()
        .into_iter()
        .map(|(i, j)| {
            let shortest = g.paths(i, j).iter().map(Path::len).min().unwrap_or(0);
            (shortest, i, j)
        })
        .collect();
    pairs.sort();
    pairs.into_iter().map(|(_, i, j)| (i, j)).collect()
}

/// All nonempty open cones of constant critical paths, i.e. the maximal
/// cones of the maxoid fan, in depth-first order of path choices.
pub fn enumerate_maximal_cones(g: &Dag) -> Vec<ConeEntry> {
    let pairs = pair_order(g);
    let paths = pairs.iter().map(|&(i, j)| g.paths(i, j)).collect();
    let search = Search { g, pairs, paths };
    let zero = vec![Rational::zero(); g.num_edges()];
    search.run(0, &[], &[], &zero)
}

/// Pairs of cone indices whose closures meet in a common facet.
///
/// Facet rows of every cone are found first (one LP per row); only cones
/// with facets on opposite sides of the same hyperplane are then tested
/// jointly.
pub fn cone_adjacency(entries: &[ConeEntry], nvars: usize) -> Vec<(usize, usize)> {
    let facets: Vec<Vec<LinExpr>> = entries.par_iter().map(|e| facet_rows(&e.cone, nvars)).collect();
    let mut by_hyperplane: HashMap<&LinExpr, Vec<usize>> = HashMap::new();
    for (k, fs) in facets.iter().enumerate() {
        for h in fs {
            by_hyperplane.entry(h).or_default().push(k);
        }
    }
    let mut candidates = BTreeSet::new();
    for (a, fs) in facets.iter().enumerate() {
        for h in fs {
            for &b in by_hyperplane.get(&h.neg()).into_iter().flatten() {
                if a < b {
                    candidates.insert((a, b, h.clone()));
                }
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = candidates
        .into_par_iter()
        .filter(|(a, b, h)| meet_on(h, &entries[*a].cone, &entries[*b].cone, nvars))
        .map(|(a, b, _)| (a, b))
        .collect();
    pairs.dedup();
    pairs
}

/// Rows of `c` whose hyperplane meets the closure in a facet.
fn facet_rows(c: &ConeDescription, nvars: usize) -> Vec<LinExpr> {
    let mut out: Vec<LinExpr> = Vec::new();
    for h in &c.strict {
        if !out.contains(h.expr()) && meet_on(h.expr(), c, &ConeDescription::default(), nvars) {
            out.push(h.expr().clone());
        }
    }
    out
}

/// Is `{h = 0}` together with the rows of `a` and `b` not parallel to `h`
/// feasible? With `b` empty this says `h` supports a facet of `a`.
fn meet_on(h: &LinExpr, a: &ConeDescription, b: &ConeDescription, nvars: usize) -> bool {
    let flipped = h.neg();
    let parallel = |r: &Constraint| r.expr() == h || r.expr() == &flipped;
    let mut sys = vec![Constraint::eq(h.clone())];
    sys.extend(a.strict.iter().chain(&b.strict).filter(|r| !parallel(r)).cloned());
    feasible(&sys, nvars).is_some()
}

/// Normals `e_π − e_π'` of all internally disjoint parallel path pairs.
pub fn hyperplane_normals(g: &Dag) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for (i, j) in g.connected_pairs() {
        let paths = g.paths(i, j);
        for (a, p) in paths.iter().enumerate() {
            for q in &paths[a + 1..] {
                if !internally_disjoint(p, q) {
                    continue;
                }
                let v: Vec<Rational> = p
                    .indicator(g)
                    .iter()
                    .zip(q.indicator(g))
                    .map(|(x, y)| Rational::from_integer((x - y).into()))
                    .collect();
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Dimension of the largest linear space contained in every cone.
pub fn lineality_dimension(g: &Dag) -> usize {
    g.num_edges() - rank(&hyperplane_normals(g))
}
