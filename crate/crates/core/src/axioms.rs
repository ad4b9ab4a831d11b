//! Closure-rule checkers for sets of pairwise CI statements.
//!
//! Set-valued statements `(I, J | L)` are read pairwise: they hold iff
//! every `(i, j | L)` with `i` in `I` and `j` in `J` does. With that reading
//! the compositional graphoid rules reduce to three pairwise rules over
//! distinct `i, j, k` and `L` disjoint from them:
//!
//! - semigraphoid: `(ij|L) ∧ (ik|jL) ⟺ (ik|L) ∧ (ij|kL)`
//! - intersection: `(ij|kL) ∧ (ik|jL) ⟹ (ij|L) ∧ (ik|L)`
//! - composition: `(ij|L) ∧ (ik|L) ⟹ (ij|kL) ∧ (ik|jL)`
//!
//! Checks are exhaustive; the instantiation count grows like `5^n`, so
//! ground sets above [`DEFAULT_MAX_NODES`] need an explicit override.

use std::fmt;

use rayon::prelude::*;

use crate::graph::Node;
use crate::nodeset::NodeSet;
use crate::separation::{CiStatement, Maxoid};
use crate::{Error, Result};

pub const DEFAULT_MAX_NODES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Semigraphoid,
    SemigraphoidReverse,
    Intersection,
    Composition,
    SetSemigraphoid,
    SetSemigraphoidReverse,
    SetIntersection,
    SetComposition,
    Amalgamation,
    StrongSpohn1,
    StrongSpohn2,
    WeakTransitivity,
    WeakTransitivityConverse,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Semigraphoid => "semigraphoid",
            Rule::SemigraphoidReverse => "semigraphoid_reverse",
            Rule::Intersection => "intersection",
            Rule::Composition => "composition",
            Rule::SetSemigraphoid => "set_semigraphoid",
            Rule::SetSemigraphoidReverse => "set_semigraphoid_reverse",
            Rule::SetIntersection => "set_intersection",
            Rule::SetComposition => "set_composition",
            Rule::Amalgamation => "amalgamation",
            Rule::StrongSpohn1 => "strong_spohn_1",
            Rule::StrongSpohn2 => "strong_spohn_2",
            Rule::WeakTransitivity => "weak_transitivity",
            Rule::WeakTransitivityConverse => "weak_transitivity_converse",
        }
    }

    /// Slot names, in the order stored in a report.
    pub fn slots(self) -> &'static [&'static str] {
        match self {
            Rule::Semigraphoid
            | Rule::SemigraphoidReverse
            | Rule::Intersection
            | Rule::Composition
            | Rule::WeakTransitivity
            | Rule::WeakTransitivityConverse => &["i", "j", "k", "L"],
            Rule::SetSemigraphoid
            | Rule::SetSemigraphoidReverse
            | Rule::SetIntersection
            | Rule::SetComposition => &["I", "J", "K", "L"],
            Rule::Amalgamation => &["i", "j", "K", "L", "M"],
            Rule::StrongSpohn1 | Rule::StrongSpohn2 => &["i", "j", "k", "l", "M"],
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One failing instantiation of a rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ViolationReport {
    pub rule: Rule,
    /// Slot values in [`Rule::slots`] order; node slots are singletons.
    pub slots: Vec<NodeSet>,
    /// Premise statements present in the checked set.
    pub premises: Vec<CiStatement>,
    /// Conclusion statements absent from it.
    pub missing: Vec<CiStatement>,
}

impl ViolationReport {
    /// Re-evaluates the instantiation against `m`; true iff it still fails
    /// in exactly the recorded way.
    pub fn replay(&self, m: &Maxoid) -> bool {
        instance(self.rule, &self.slots)
            .and_then(|inst| inst.violation(self.rule, &self.slots, m))
            .is_some_and(|r| &r == self)
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub max_nodes: usize,
    /// Check the set-level compositional graphoid rules directly as well.
    pub set_level: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_nodes: DEFAULT_MAX_NODES,
            set_level: false,
        }
    }
}

/// Premises and conclusions of one instantiation, each read as a
/// conjunction or (with the `any_` flag) a disjunction.
struct Instance {
    premises: Vec<CiStatement>,
    any_premise: bool,
    conclusions: Vec<CiStatement>,
    any_conclusion: bool,
}

impl Instance {
    fn all(premises: Vec<CiStatement>, conclusions: Vec<CiStatement>) -> Instance {
        Instance {
            premises,
            any_premise: false,
            conclusions,
            any_conclusion: false,
        }
    }

    fn violation(&self, rule: Rule, slots: &[NodeSet], m: &Maxoid) -> Option<ViolationReport> {
        let holds = |s: &CiStatement| m.contains(s);
        let premise_ok = if self.any_premise {
            self.premises.iter().any(holds)
        } else {
            self.premises.iter().all(holds)
        };
        let conclusion_ok = if self.any_conclusion {
            self.conclusions.iter().any(holds)
        } else {
            self.conclusions.iter().all(holds)
        };
        (premise_ok && !conclusion_ok).then(|| ViolationReport {
            rule,
            slots: slots.to_vec(),
            premises: self.premises.iter().copied().filter(holds).collect(),
            missing: self.conclusions.iter().copied().filter(|s| !holds(s)).collect(),
        })
    }
}

fn st(i: Node, j: Node, cond: NodeSet) -> CiStatement {
    CiStatement::new(i, j, cond).expect("instantiation keeps slots disjoint")
}

/// Pairwise expansion of `(I, J | L)`.
fn expand(is: NodeSet, js: NodeSet, cond: NodeSet) -> Vec<CiStatement> {
    let mut out: Vec<CiStatement> = is
        .iter()
        .flat_map(|i| js.iter().map(move |j| st(i, j, cond)))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn single(s: NodeSet) -> Option<Node> {
    (s.len() == 1).then(|| s.first().expect("nonempty"))
}

/// The statements a rule relates at the given slots, or `None` if the slots
/// do not form a valid instantiation.
fn instance(rule: Rule, slots: &[NodeSet]) -> Option<Instance> {
    if slots.len() != rule.slots().len() {
        return None;
    }
    let mut seen = NodeSet::EMPTY;
    for s in slots {
        if !seen.is_disjoint(*s) {
            return None;
        }
        seen = seen.union(*s);
    }
    let node = |k: usize| single(slots[k]);
    Some(match rule {
        Rule::Semigraphoid
        | Rule::SemigraphoidReverse
        | Rule::Intersection
        | Rule::Composition
        | Rule::WeakTransitivity
        | Rule::WeakTransitivityConverse => {
            let (i, j, k, l) = (node(0)?, node(1)?, node(2)?, slots[3]);
            match rule {
                Rule::Semigraphoid => Instance::all(
                    vec![st(i, j, l), st(i, k, l.with(j))],
                    vec![st(i, k, l), st(i, j, l.with(k))],
                ),
                Rule::SemigraphoidReverse => Instance::all(
                    vec![st(i, k, l), st(i, j, l.with(k))],
                    vec![st(i, j, l), st(i, k, l.with(j))],
                ),
                Rule::Intersection => Instance::all(
                    vec![st(i, j, l.with(k)), st(i, k, l.with(j))],
                    vec![st(i, j, l), st(i, k, l)],
                ),
                Rule::Composition => Instance::all(
                    vec![st(i, j, l), st(i, k, l)],
                    vec![st(i, j, l.with(k)), st(i, k, l.with(j))],
                ),
                Rule::WeakTransitivity => Instance {
                    premises: vec![st(i, j, l), st(i, j, l.with(k))],
                    any_premise: false,
                    conclusions: vec![st(i, k, l), st(j, k, l)],
                    any_conclusion: true,
                },
                _ => Instance {
                    premises: vec![st(i, k, l), st(j, k, l)],
                    any_premise: true,
                    conclusions: vec![st(i, j, l), st(i, j, l.with(k))],
                    any_conclusion: false,
                },
            }
        }
        Rule::SetSemigraphoid | Rule::SetSemigraphoidReverse | Rule::SetIntersection | Rule::SetComposition => {
            let (is, js, ks, l) = (slots[0], slots[1], slots[2], slots[3]);
            if is.is_empty() || js.is_empty() || ks.is_empty() {
                return None;
            }
            let jk = js.union(ks);
            let joint = expand(is, jk, l);
            let parts = |a: Vec<CiStatement>, b: Vec<CiStatement>| {
                let mut v = a;
                v.extend(b);
                v.sort();
                v.dedup();
                v
            };
            match rule {
                Rule::SetSemigraphoid => {
                    Instance::all(parts(expand(is, js, l), expand(is, ks, l.union(js))), joint)
                }
                Rule::SetSemigraphoidReverse => {
                    Instance::all(joint, parts(expand(is, js, l), expand(is, ks, l.union(js))))
                }
                Rule::SetIntersection => Instance::all(
                    parts(expand(is, js, l.union(ks)), expand(is, ks, l.union(js))),
                    joint,
                ),
                _ => Instance::all(parts(expand(is, js, l), expand(is, ks, l)), joint),
            }
        }
        Rule::Amalgamation => {
            let (i, j, k, l, m) = (node(0)?, node(1)?, slots[2], slots[3], slots[4]);
            Instance::all(
                vec![st(i, j, k.union(m)), st(i, j, l.union(m))],
                vec![st(i, j, k.union(l).union(m))],
            )
        }
        Rule::StrongSpohn1 | Rule::StrongSpohn2 => {
            let (i, j, k, l, m) = (node(0)?, node(1)?, node(2)?, node(3)?, slots[4]);
            let klm = m.with(k).with(l);
            if rule == Rule::StrongSpohn1 {
                Instance::all(
                    vec![st(i, j, klm), st(k, l, m.with(i)), st(k, l, m.with(j))],
                    vec![st(k, l, m)],
                )
            } else {
                Instance::all(
                    vec![st(i, j, klm), st(k, l, m.with(i)), st(k, l, m)],
                    vec![st(k, l, m.with(j))],
                )
            }
        }
    })
}

fn check_bound(m: &Maxoid, opts: &CheckOptions) -> Result<()> {
    if m.n() > opts.max_nodes {
        return Err(Error::Precondition(format!(
            "exhaustive checks are bounded to {} nodes (got {}); raise the bound explicitly",
            opts.max_nodes,
            m.n()
        )));
    }
    Ok(())
}

fn singletons(n: usize) -> impl Iterator<Item = NodeSet> {
    (1..=n).map(NodeSet::singleton)
}

/// Every assignment of the ground set to `k` labeled blocks or to none,
/// as block tuples.
fn partitions(n: usize, k: usize) -> Vec<Vec<NodeSet>> {
    let mut out = vec![vec![NodeSet::EMPTY; k]];
    for v in 1..=n {
        let mut next = Vec::with_capacity(out.len() * (k + 1));
        for blocks in &out {
            next.push(blocks.clone());
            for b in 0..k {
                let mut nb = blocks.clone();
                nb[b].insert(v);
                next.push(nb);
            }
        }
        out = next;
    }
    out
}

fn run(m: &Maxoid, rules: &[Rule], candidates: Vec<Vec<NodeSet>>, keep: impl Fn(Rule, &[NodeSet]) -> bool + Sync) -> Vec<ViolationReport> {
    let mut reports: Vec<ViolationReport> = candidates
        .par_iter()
        .flat_map_iter(|slots| {
            rules.iter().filter_map(|&rule| {
                if !keep(rule, slots) {
                    return None;
                }
                instance(rule, slots)?.violation(rule, slots, m)
            })
        })
        .collect();
    reports.sort();
    reports
}

/// Node triples `(i, j, k)` distinct and conditioning sets `L` outside.
fn triples_with_set(n: usize) -> Vec<Vec<NodeSet>> {
    let mut out = Vec::new();
    for i in singletons(n) {
        for j in singletons(n).filter(|&j| j != i) {
            for k in singletons(n).filter(|&k| k != i && k != j) {
                let rest = NodeSet::full(n).difference(i.union(j).union(k));
                for l in rest.subsets() {
                    out.push(vec![i, j, k, l]);
                }
            }
        }
    }
    out
}

/// Semigraphoid, intersection and composition, pairwise and optionally at
/// set level.
pub fn check_compositional_graphoid(m: &Maxoid, opts: &CheckOptions) -> Result<Vec<ViolationReport>> {
    check_bound(m, opts)?;
    let n = m.n();
    let pairwise = [Rule::Semigraphoid, Rule::SemigraphoidReverse, Rule::Intersection, Rule::Composition];
    // The last two rules are symmetric in j and k.
    let mut reports = run(m, &pairwise, triples_with_set(n), |rule, s| {
        !matches!(rule, Rule::Intersection | Rule::Composition) || s[1] < s[2]
    });
    if opts.set_level {
        let set_rules = [
            Rule::SetSemigraphoid,
            Rule::SetSemigraphoidReverse,
            Rule::SetIntersection,
            Rule::SetComposition,
        ];
        reports.extend(run(m, &set_rules, partitions(n, 4), |rule, s| {
            !matches!(rule, Rule::SetIntersection | Rule::SetComposition) || s[1] < s[2]
        }));
    }
    Ok(reports)
}

/// `(ij|KM) ∧ (ij|LM) ⟹ (ij|KLM)` for nonempty `K`, `L` (other cases are
/// trivial); each unordered `{K, L}` is reported once.
pub fn check_amalgamation(m: &Maxoid, opts: &CheckOptions) -> Result<Vec<ViolationReport>> {
    check_bound(m, opts)?;
    let n = m.n();
    let mut candidates = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let rest = NodeSet::full(n).without(i).without(j);
            for blocks in partitions(n, 3) {
                if !blocks.iter().all(|b| b.is_subset(rest)) {
                    continue;
                }
                let (k, l, mm) = (blocks[0], blocks[1], blocks[2]);
                if k.is_empty() || l.is_empty() || l < k {
                    continue;
                }
                candidates.push(vec![NodeSet::singleton(i), NodeSet::singleton(j), k, l, mm]);
            }
        }
    }
    Ok(run(m, &[Rule::Amalgamation], candidates, |_, _| true))
}

/// Both Strong Spohn implications over distinct `i, j, k, l` and `M`
/// outside them.
pub fn check_strong_spohn(m: &Maxoid, opts: &CheckOptions) -> Result<Vec<ViolationReport>> {
    check_bound(m, opts)?;
    let n = m.n();
    let mut candidates = Vec::new();
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            for k in (1..=n).filter(|&k| k != i && k != j) {
                for l in (k + 1..=n).filter(|&l| l != i && l != j) {
                    let rest = NodeSet::full(n).without(i).without(j).without(k).without(l);
                    for mm in rest.subsets() {
                        candidates.push(vec![
                            NodeSet::singleton(i),
                            NodeSet::singleton(j),
                            NodeSet::singleton(k),
                            NodeSet::singleton(l),
                            mm,
                        ]);
                    }
                }
            }
        }
    }
    // The first rule is symmetric in i and j.
    Ok(run(m, &[Rule::StrongSpohn1, Rule::StrongSpohn2], candidates, |rule, s| {
        rule != Rule::StrongSpohn1 || s[0] < s[1]
    }))
}

/// Weak transitivity `(ij|L) ∧ (ij|kL) ⟹ (ik|L) ∨ (jk|L)`, and its
/// converse reported under [`Rule::WeakTransitivityConverse`].
pub fn check_weak_transitivity(m: &Maxoid, opts: &CheckOptions) -> Result<Vec<ViolationReport>> {
    check_bound(m, opts)?;
    Ok(run(
        m,
        &[Rule::WeakTransitivity, Rule::WeakTransitivityConverse],
        triples_with_set(m.n()),
        |_, s| s[0] < s[1],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Dag;
    use crate::rational::int;
    use crate::separation::maxoid;
    use crate::tropical::WeightedDag;

    fn s(i: Node, j: Node, l: &[Node]) -> CiStatement {
        CiStatement::new(i, j, l.iter().copied().collect()).unwrap()
    }

    fn diamond(w: [i64; 4]) -> Maxoid {
        let g = Dag::from_edges(4, &[(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        maxoid(&WeightedDag::new(g, w.iter().map(|&x| int(x)).collect()).unwrap())
    }

    fn all_rules(m: &Maxoid) -> Vec<ViolationReport> {
        let opts = CheckOptions { set_level: true, ..CheckOptions::default() };
        let mut v = check_compositional_graphoid(m, &opts).unwrap();
        v.extend(check_amalgamation(m, &opts).unwrap());
        v.extend(check_strong_spohn(m, &opts).unwrap());
        v
    }

    #[test]
    fn diamond_maxoids_are_closed() {
        for w in [[2, 0, 1, 0], [0, 2, 0, 1], [1, 1, 1, 1]] {
            assert!(all_rules(&diamond(w)).is_empty());
        }
        assert!(all_rules(&Maxoid::empty(4)).is_empty());
    }

    #[test]
    fn lone_statement_fires_nothing() {
        let m = Maxoid::new(3, [s(1, 2, &[3])]).unwrap();
        assert!(all_rules(&m).is_empty());
    }

    #[test]
    fn semigraphoid_flags_missing_marginal() {
        let m = Maxoid::new(3, [s(1, 2, &[]), s(1, 3, &[2])]).unwrap();
        let v = check_compositional_graphoid(&m, &CheckOptions::default()).unwrap();
        let hit = v.iter().find(|r| r.rule == Rule::Semigraphoid).unwrap();
        assert_eq!(hit.missing, vec![s(1, 3, &[]), s(1, 2, &[3])]);
        assert!(hit.replay(&m));
        assert!(!hit.replay(&Maxoid::new(3, [s(1, 2, &[]), s(1, 3, &[2]), s(1, 3, &[]), s(1, 2, &[3])]).unwrap()));
    }

    #[test]
    fn cassiopeia_pattern_breaks_amalgamation() {
        let m = Maxoid::new(5, [s(1, 5, &[2]), s(1, 5, &[4])]).unwrap();
        let v = check_amalgamation(&m, &CheckOptions::default()).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].missing, vec![s(1, 5, &[2, 4])]);
        assert!(v[0].replay(&m));
    }

    #[test]
    fn weak_transitivity_fails_on_diamond() {
        let m2 = diamond([0, 2, 0, 1]);
        assert!(m2.contains(&s(1, 4, &[3])));
        let v = check_weak_transitivity(&m2, &CheckOptions::default()).unwrap();
        let at: Vec<NodeSet> = [&[1][..], &[4], &[2], &[3]]
            .iter()
            .map(|x| x.iter().copied().collect())
            .collect();
        assert!(v.iter().any(|r| r.rule == Rule::WeakTransitivity && r.slots == at));
        assert!(v.iter().all(|r| r.replay(&m2)));
    }

    #[test]
    fn bound_is_enforced() {
        let m = Maxoid::empty(7);
        assert!(check_strong_spohn(&m, &CheckOptions::default()).is_err());
        let opts = CheckOptions { max_nodes: 7, ..CheckOptions::default() };
        assert!(check_strong_spohn(&m, &opts).unwrap().is_empty());
    }
}
