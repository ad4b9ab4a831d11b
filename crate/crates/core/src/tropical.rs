//! Max-plus arithmetic on weight matrices supported on a DAG.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Dag, Node, Path};
use crate::rational::{ExtRational, Rational};

/// A DAG together with a finite rational weight on every edge. The weight
/// vector is indexed like [`Dag::edges`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightedDag {
    g: Dag,
    w: Vec<Rational>,
}

impl WeightedDag {
    pub fn new(g: Dag, w: Vec<Rational>) -> Result<WeightedDag> {
        if w.len() != g.num_edges() {
            return Err(Error::WeightSupport(format!(
                "{} weights for {} edges",
                w.len(),
                g.num_edges()
            )));
        }
        Ok(WeightedDag { g, w })
    }

    /// Weights read off an `n x n` matrix whose finite entries must be
    /// exactly the edges of `g`.
    pub fn from_matrix(g: Dag, m: &[Vec<ExtRational>]) -> Result<WeightedDag> {
        let n = g.n();
        check_square(m, n)?;
        let mut w = Vec::with_capacity(g.num_edges());
        for i in 1..=n {
            for j in 1..=n {
                match (&m[i - 1][j - 1], g.has_edge(i, j)) {
                    (ExtRational::Finite(r), true) => w.push(r.clone()),
                    (ExtRational::NegInf, false) => {}
                    (ExtRational::NegInf, true) => {
                        return Err(Error::WeightSupport(format!("edge {i}->{j} has weight -inf")))
                    }
                    (ExtRational::Finite(_), false) => {
                        return Err(Error::WeightSupport(format!(
                            "entry ({i},{j}) is finite but {i}->{j} is not an edge"
                        )))
                    }
                }
            }
        }
        WeightedDag::new(g, w)
    }

    /// Infers the graph from the finite entries of the matrix.
    pub fn from_support(m: &[Vec<ExtRational>]) -> Result<WeightedDag> {
        let n = m.len();
        check_square(m, n)?;
        let mut edges = Vec::new();
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_neg_inf() {
                    edges.push((i + 1, j + 1));
                }
            }
        }
        let g = Dag::from_edges(n, &edges)?;
        WeightedDag::from_matrix(g, m)
    }

    pub fn graph(&self) -> &Dag {
        &self.g
    }

    pub fn weights(&self) -> &[Rational] {
        &self.w
    }

    pub fn weight(&self, u: Node, v: Node) -> Option<&Rational> {
        self.g.edge_index(u, v).map(|k| &self.w[k])
    }

    /// The weight matrix `C` with `NEG_INF` off the edge set.
    pub fn matrix(&self) -> Vec<Vec<ExtRational>> {
        let n = self.g.n();
        let mut m = vec![vec![ExtRational::NegInf; n]; n];
        for (k, &(u, v)) in self.g.edges().iter().enumerate() {
            m[u - 1][v - 1] = ExtRational::Finite(self.w[k].clone());
        }
        m
    }
}

fn check_square(m: &[Vec<ExtRational>], n: usize) -> Result<()> {
    if m.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(Error::WeightSupport(format!("expected a {n}x{n} matrix")));
    }
    Ok(())
}

impl fmt::Debug for WeightedDag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedDag(n={}, [", self.g.n())?;
        for (k, &(u, v)) in self.g.edges().iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}->{v}: {}", crate::rational::format_rational(&self.w[k]))?;
        }
        f.write_str("])")
    }
}

/// An `n x n` matrix over the max-plus semiring, 1-based access.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TropicalMatrix {
    n: usize,
    entries: Vec<ExtRational>,
}

impl TropicalMatrix {
    pub fn filled(n: usize, value: ExtRational) -> Self {
        TropicalMatrix {
            n,
            entries: vec![value; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: Node, j: Node) -> &ExtRational {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: Node, j: Node, value: ExtRational) {
        self.entries[(i - 1) * self.n + (j - 1)] = value;
    }

    pub fn rows(&self) -> Vec<Vec<ExtRational>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    /// Max-plus product `(A ⊙ B)_ij = max_k A_ik + B_kj`.
    pub fn tropical_mul(&self, other: &TropicalMatrix) -> TropicalMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = TropicalMatrix::filled(n, ExtRational::NegInf);
        for i in 1..=n {
            for j in 1..=n {
                let mut best = ExtRational::NegInf;
                for k in 1..=n {
                    best = best.max(self.get(i, k) + other.get(k, j));
                }
                out.set(i, j, best);
            }
        }
        out
    }
}

/// Sum of the edge weights along `p`.
pub fn path_weight(wd: &WeightedDag, p: &Path) -> Result<Rational> {
    let mut total = Rational::zero();
    for (u, v) in p.edges() {
        total += wd.weight(u, v).ok_or(Error::MissingEdge(u, v))?;
    }
    Ok(total)
}

/// Kleene star `C*` with zero diagonal: entry `(i, j)` is the maximum path
/// weight over all `i -> j` paths.
pub fn kleene_star(wd: &WeightedDag) -> TropicalMatrix {
    let mut m = proper_kleene_star(wd);
    for v in 1..=wd.g.n() {
        m.set(v, v, ExtRational::zero());
    }
    m
}

/// Maximum weight over paths with at least one edge. On a DAG the diagonal
/// is entirely `NEG_INF`.
///
/// Longest-path dynamic programming in topological order, one pass per
/// source; no paths are enumerated.
pub fn proper_kleene_star(wd: &WeightedDag) -> TropicalMatrix {
    let g = &wd.g;
    let n = g.n();
    let mut m = TropicalMatrix::filled(n, ExtRational::NegInf);
    let topo = g.topological_order();
    for i in 1..=n {
        let mut best: Vec<ExtRational> = vec![ExtRational::NegInf; n + 1];
        let start = topo.iter().position(|&v| v == i).expect("node in order");
        for &v in &topo[start..] {
            let base = if v == i {
                ExtRational::zero()
            } else {
                best[v].clone()
            };
            if base.is_neg_inf() {
                continue;
            }
            for c in g.children(v).iter() {
                let w = ExtRational::Finite(wd.weight(v, c).expect("edge").clone());
                let cand = &base + &w;
                if cand > best[c] {
                    best[c] = cand;
                }
            }
        }
        for j in 1..=n {
            if j != i {
                m.set(i, j, best[j].clone());
            }
        }
    }
    m
}

/// All maximum-weight `i -> j` paths, in lexicographic order.
pub fn critical_paths(wd: &WeightedDag, i: Node, j: Node) -> Vec<Path> {
    let paths = wd.g.paths(i, j);
    let weights: Vec<Rational> = paths
        .iter()
        .map(|p| path_weight(wd, p).expect("path of host graph"))
        .collect();
    let Some(best) = weights.iter().max().cloned() else {
        return Vec::new();
    };
    paths
        .into_iter()
        .zip(weights)
        .filter(|(_, w)| *w == best)
        .map(|(p, _)| p)
        .collect()
}

/// Two distinct parallel paths of equal weight, if any exist. Such a pair
/// places the weights on the hyperplane arrangement `H_G`.
pub fn genericity_witness(wd: &WeightedDag) -> Option<(Path, Path)> {
    for (i, j) in wd.g.connected_pairs() {
        let mut weighted: Vec<(Rational, Path)> = wd
            .g
            .paths(i, j)
            .into_iter()
            .map(|p| (path_weight(wd, &p).expect("path of host graph"), p))
            .collect();
        weighted.sort();
        for w in weighted.windows(2) {
            if w[0].0 == w[1].0 {
                return Some((w[0].1.clone(), w[1].1.clone()));
            }
        }
    }
    None
}

/// True iff no two distinct parallel paths have the same weight.
pub fn is_generic(wd: &WeightedDag) -> bool {
    genericity_witness(wd).is_none()
}
