//! Weight matrices whose maxoid contains a statement form a finite union
//! of polyhedra in edge-weight space. This module builds that set as a
//! Boolean formula over linear atoms and decides CI implication by a lazy
//! disjunctive search with exact feasibility pruning.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::fan::path_expr;
use crate::graph::{Dag, Node};
use crate::linarith::{feasible, Constraint, Witness};
use crate::nodeset::NodeSet;
use crate::rational::Rational;
use crate::separation::{maxoid, CiStatement};
use crate::tropical::{is_generic, WeightedDag};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LinFormula {
    True,
    False,
    Atom(Constraint),
    And(Vec<LinFormula>),
    Or(Vec<LinFormula>),
    Not(Box<LinFormula>),
}

impl LinFormula {
    /// Conjunction with constants folded and nested conjunctions flattened.
    pub fn and(parts: impl IntoIterator<Item = LinFormula>) -> LinFormula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                LinFormula::True => {}
                LinFormula::False => return LinFormula::False,
                LinFormula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => LinFormula::True,
            1 => out.pop().expect("one part"),
            _ => LinFormula::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = LinFormula>) -> LinFormula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                LinFormula::False => {}
                LinFormula::True => return LinFormula::True,
                LinFormula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => LinFormula::False,
            1 => out.pop().expect("one part"),
            _ => LinFormula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: LinFormula) -> LinFormula {
        match f {
            LinFormula::True => LinFormula::False,
            LinFormula::False => LinFormula::True,
            LinFormula::Not(inner) => *inner,
            other => LinFormula::Not(Box::new(other)),
        }
    }

    pub fn evaluate(&self, point: &[Rational]) -> bool {
        match self {
            LinFormula::True => true,
            LinFormula::False => false,
            LinFormula::Atom(c) => c.satisfied_by(point),
            LinFormula::And(fs) => fs.iter().all(|f| f.evaluate(point)),
            LinFormula::Or(fs) => fs.iter().any(|f| f.evaluate(point)),
            LinFormula::Not(f) => !f.evaluate(point),
        }
    }

    /// Negation normal form: no `Not` nodes remain. The complement of a
    /// strict atom is the reversed non-strict atom and vice versa; an
    /// equality becomes a disjunction of two strict atoms.
    pub fn nnf(&self) -> LinFormula {
        self.nnf_signed(false)
    }

    fn nnf_signed(&self, negate: bool) -> LinFormula {
        match (self, negate) {
            (LinFormula::True, false) | (LinFormula::False, true) => LinFormula::True,
            (LinFormula::True, true) | (LinFormula::False, false) => LinFormula::False,
            (LinFormula::Atom(c), false) => LinFormula::Atom(c.clone()),
            (LinFormula::Atom(c), true) => match c.negate() {
                Some(n) => LinFormula::Atom(n),
                None => LinFormula::or([
                    LinFormula::Atom(Constraint::gt(c.expr().clone())),
                    LinFormula::Atom(Constraint::gt(c.expr().neg())),
                ]),
            },
            (LinFormula::And(fs), false) | (LinFormula::Or(fs), true) => {
                LinFormula::and(fs.iter().map(|f| f.nnf_signed(negate)))
            }
            (LinFormula::Or(fs), false) | (LinFormula::And(fs), true) => {
                LinFormula::or(fs.iter().map(|f| f.nnf_signed(negate)))
            }
            (LinFormula::Not(f), _) => f.nnf_signed(!negate),
        }
    }

    /// Number of atoms, counted with multiplicity.
    pub fn size(&self) -> usize {
        match self {
            LinFormula::True | LinFormula::False => 0,
            LinFormula::Atom(_) => 1,
            LinFormula::And(fs) | LinFormula::Or(fs) => fs.iter().map(LinFormula::size).sum(),
            LinFormula::Not(f) => f.size(),
        }
    }

    pub fn display_with(&self, name: &dyn Fn(usize) -> String) -> String {
        let join = |fs: &[LinFormula], op: &str| -> String {
            let parts: Vec<String> = fs.iter().map(|f| f.display_with(name)).collect();
            format!("({})", parts.join(op))
        };
        match self {
            LinFormula::True => "TRUE".into(),
            LinFormula::False => "FALSE".into(),
            LinFormula::Atom(c) => c.display_with(name),
            LinFormula::And(fs) => join(fs, " AND "),
            LinFormula::Or(fs) => join(fs, " OR "),
            LinFormula::Not(f) => format!("NOT {}", f.display_with(name)),
        }
    }
}

/// `k -> l` is an edge of the critical DAG given `cond`: no path through
/// `cond` is critical, i.e. each is beaten by a path avoiding `cond`.
pub fn edge_formula(g: &Dag, k: Node, l: Node, cond: NodeSet) -> LinFormula {
    if k == l || !g.reaches(k, l) {
        return LinFormula::False;
    }
    let (through, avoiding): (Vec<_>, Vec<_>) = g
        .paths(k, l)
        .into_iter()
        .partition(|p| !p.interior().is_disjoint(cond));
    let avoiding: Vec<_> = avoiding.iter().map(|p| path_expr(g, p)).collect();
    LinFormula::and(through.iter().map(|p| {
        let pe = path_expr(g, p);
        LinFormula::or(
            avoiding
                .iter()
                .map(|q| LinFormula::Atom(Constraint::greater(q, &pe))),
        )
    }))
}

/// The set of weight matrices on `g` whose maxoid contains `s`.
pub fn polyci_formula(g: &Dag, s: &CiStatement) -> Result<LinFormula> {
    g.check_nodes(s.nodes())?;
    let (i, j, cond) = (s.i(), s.j(), s.cond());
    let mut cache: HashMap<(Node, Node), LinFormula> = HashMap::new();
    let mut e = |u: Node, v: Node| -> LinFormula {
        cache
            .entry((u, v))
            .or_insert_with(|| edge_formula(g, u, v, cond))
            .clone()
    };
    let free = g.nodes().difference(cond).without(i).without(j);
    let mut shapes = vec![e(i, j), e(j, i)];
    for p in free.iter() {
        shapes.push(LinFormula::and([e(p, i), e(p, j)]));
    }
    for l in cond.iter() {
        shapes.push(LinFormula::and([e(i, l), e(j, l)]));
        for p in free.iter() {
            shapes.push(LinFormula::and([e(p, i), e(p, l), e(j, l)]));
            shapes.push(LinFormula::and([e(p, j), e(p, l), e(i, l)]));
            for q in free.iter().filter(|&q| q != p) {
                shapes.push(LinFormula::and([e(p, i), e(p, l), e(q, l), e(q, j)]));
            }
        }
    }
    Ok(LinFormula::not(LinFormula::or(shapes)))
}

/// No two distinct parallel paths have equal weight.
pub fn genericity_formula(g: &Dag) -> LinFormula {
    let mut parts = Vec::new();
    for (i, j) in g.connected_pairs() {
        let exprs: Vec<_> = g.paths(i, j).iter().map(|p| path_expr(g, p)).collect();
        for (a, x) in exprs.iter().enumerate() {
            for y in &exprs[a + 1..] {
                parts.push(LinFormula::or([
                    LinFormula::Atom(Constraint::greater(x, y)),
                    LinFormula::Atom(Constraint::greater(y, x)),
                ]));
            }
        }
    }
    LinFormula::and(parts)
}

/// A point satisfying `f` over variables `0..nvars`, if one exists.
///
/// Atoms and conjunctions are absorbed into the current constraint set
/// first; disjunctions are then branched in order, each branch pruned by an
/// exact feasibility check.
pub fn satisfiable(f: &LinFormula, nvars: usize) -> Option<Witness> {
    let f = f.nnf();
    let w = search(vec![&f], Vec::new(), nvars)?;
    assert!(f.evaluate(w.point()), "witness does not satisfy the formula");
    Some(w)
}

fn search<'a>(mut agenda: Vec<&'a LinFormula>, mut conj: Vec<Constraint>, nvars: usize) -> Option<Witness> {
    let mut pending: Vec<&'a LinFormula> = Vec::new();
    while let Some(f) = agenda.pop() {
        match f {
            LinFormula::True => {}
            LinFormula::False => return None,
            LinFormula::Atom(c) => {
                if !conj.contains(c) {
                    conj.push(c.clone());
                }
            }
            LinFormula::And(fs) => agenda.extend(fs.iter().rev()),
            LinFormula::Or(_) => pending.push(f),
            LinFormula::Not(_) => unreachable!("formula is in negation normal form"),
        }
    }
    let witness = feasible(&conj, nvars)?;
    // Disjunctions already met by an atom of the conjunction need no branch.
    pending.retain(|f| match f {
        LinFormula::Or(fs) => !fs
            .iter()
            .any(|c| matches!(c, LinFormula::Atom(a) if conj.contains(a))),
        _ => true,
    });
    let Some((first, rest)) = pending.split_first() else {
        return Some(witness);
    };
    let LinFormula::Or(children) = first else {
        unreachable!("only disjunctions are pending")
    };
    for child in children {
        let mut next: Vec<&LinFormula> = rest.iter().rev().copied().collect();
        next.push(child);
        if let Some(w) = search(next, conj.clone(), nvars) {
            return Some(w);
        }
    }
    None
}

/// Which graphs a global query ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GraphClass {
    /// All DAGs for up to 4 nodes, transitively closed ones beyond.
    #[default]
    Default,
    AllDags,
    /// Transitively closed DAGs only; sufficient because every maxoid is
    /// the maxoid of some weighting of the closure of its graph.
    Posets,
}

#[derive(Clone, Debug)]
pub enum Scope {
    /// Local query on one graph.
    Graph(Dag),
    /// Global query over labeled graphs on `1..=n`.
    Nodes { n: usize, class: GraphClass },
}

impl Scope {
    fn n(&self) -> usize {
        match self {
            Scope::Graph(g) => g.n(),
            Scope::Nodes { n, .. } => *n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// Weights realizing a maxoid with every premise and no conclusion.
    pub counterexample: Option<WeightedDag>,
}

/// Formula for "all premises hold and no conclusion holds" on `g`.
pub fn counterexample_formula(
    g: &Dag,
    premises: &[CiStatement],
    conclusions: &[CiStatement],
    generic: bool,
) -> Result<LinFormula> {
    let mut parts = Vec::new();
    for p in premises {
        parts.push(polyci_formula(g, p)?);
    }
    for q in conclusions {
        parts.push(LinFormula::not(polyci_formula(g, q)?));
    }
    if generic {
        parts.push(genericity_formula(g));
    }
    Ok(LinFormula::and(parts))
}

fn local_counterexample(
    g: &Dag,
    premises: &[CiStatement],
    conclusions: &[CiStatement],
    generic: bool,
) -> Result<Option<WeightedDag>> {
    let f = counterexample_formula(g, premises, conclusions, generic)?;
    let Some(w) = satisfiable(&f, g.num_edges()) else {
        return Ok(None);
    };
    let wd = WeightedDag::new(g.clone(), w.into_point())?;
    let m = maxoid(&wd);
    assert!(
        premises.iter().all(|p| m.contains(p)) && !conclusions.iter().any(|q| m.contains(q)),
        "counterexample fails re-verification: {wd:?}"
    );
    assert!(!generic || is_generic(&wd), "generic counterexample has ties: {wd:?}");
    Ok(Some(wd))
}

/// Does every maxoid in scope containing all `premises` contain at least
/// one of the `conclusions`? Global scopes are searched in the order of
/// [`Dag::all_labeled`]; the first counterexample graph is reported.
pub fn decide_implication(
    scope: &Scope,
    premises: &[CiStatement],
    conclusions: &[CiStatement],
    generic: bool,
) -> Result<Verdict> {
    let n = scope.n();
    if let Some(s) = premises.iter().chain(conclusions).find(|s| s.max_node() > n) {
        return Err(Error::NodeOutOfRange { node: s.max_node(), n });
    }
    let counterexample = match scope {
        Scope::Graph(g) => local_counterexample(g, premises, conclusions, generic)?,
        Scope::Nodes { n, class } => {
            let posets = match class {
                GraphClass::Default => *n > 4,
                GraphClass::AllDags => false,
                GraphClass::Posets => true,
            };
            let graphs = Dag::all_labeled(*n, posets)?;
            graphs
                .par_iter()
                .map(|g| local_counterexample(g, premises, conclusions, generic))
                .find_map_first(|r| match r {
                    Ok(None) => None,
                    other => Some(other),
                })
                .transpose()?
                .flatten()
        }
    };
    Ok(Verdict {
        holds: counterexample.is_none(),
        counterexample,
    })
}
