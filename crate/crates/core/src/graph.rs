//! Directed acyclic graphs on the labeled node set `1..=n`.

use std::fmt;

use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};

/// Node ids are dense and 1-based.
pub type Node = usize;

/// An immutable DAG. Edges are kept in lexicographic order, which fixes the
/// coordinate order of the weight space `R^E` throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dag {
    n: usize,
    edges: Vec<(Node, Node)>,
    children: Vec<NodeSet>,
    parents: Vec<NodeSet>,
    /// `descendants[v]`: nodes reachable from `v` by a nonempty path.
    descendants: Vec<NodeSet>,
    topo: Vec<Node>,
}

impl Dag {
    /// Builds a DAG, rejecting self-loops, duplicate edges and cycles.
    pub fn from_edges(n: usize, edges: &[(Node, Node)]) -> Result<Dag> {
        if n > MAX_NODES {
            return Err(Error::TooManyNodes(n));
        }
        let mut children = vec![NodeSet::EMPTY; n + 1];
        let mut parents = vec![NodeSet::EMPTY; n + 1];
        for &(u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::NodeOutOfRange { node: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if children[u].contains(v) {
                return Err(Error::DuplicateEdge(u, v));
            }
            children[u].insert(v);
            parents[v].insert(u);
        }

        // Kahn's algorithm, smallest available node first.
        let mut indeg: Vec<usize> = parents.iter().map(|p| p.len()).collect();
        let mut ready: NodeSet = (1..=n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.first() {
            ready.remove(v);
            topo.push(v);
            for c in children[v].iter() {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if topo.len() < n {
            let stuck = (1..=n).find(|&v| indeg[v] > 0).unwrap_or(1);
            return Err(Error::Cycle(stuck));
        }

        let mut descendants = vec![NodeSet::EMPTY; n + 1];
        for &v in topo.iter().rev() {
            let mut d = children[v];
            for c in children[v].iter() {
                d = d.union(descendants[c]);
            }
            descendants[v] = d;
        }

        let mut sorted: Vec<(Node, Node)> = edges.to_vec();
        sorted.sort_unstable();
        Ok(Dag {
            n,
            edges: sorted,
            children,
            parents,
            descendants,
            topo,
        })
    }

    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Result<Dag> {
        Dag::from_edges(n, &[])
    }

    /// The complete DAG with edges `i -> j` for all `i < j`.
    pub fn complete(n: usize) -> Result<Dag> {
        let edges: Vec<_> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect();
        Dag::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[(Node, Node)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        u <= self.n && self.children[u].contains(v)
    }

    /// Position of `u -> v` in [`Dag::edges`].
    pub fn edge_index(&self, u: Node, v: Node) -> Option<usize> {
        self.edges.binary_search(&(u, v)).ok()
    }

    pub fn children(&self, v: Node) -> NodeSet {
        self.children[v]
    }

    pub fn parents(&self, v: Node) -> NodeSet {
        self.parents[v]
    }

    pub fn descendants(&self, v: Node) -> NodeSet {
        self.descendants[v]
    }

    /// Whether a directed path of length at least one leads from `u` to `v`.
    pub fn reaches(&self, u: Node, v: Node) -> bool {
        self.descendants[u].contains(v)
    }

    /// A topological order, computed once at construction.
    pub fn topological_order(&self) -> &[Node] {
        &self.topo
    }

    pub fn check_node(&self, v: Node) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::NodeOutOfRange { node: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn check_nodes(&self, s: NodeSet) -> Result<()> {
        match s.difference(self.nodes()).first() {
            Some(v) => Err(Error::NodeOutOfRange { node: v, n: self.n }),
            None => Ok(()),
        }
    }

    /// All directed `i -> j` paths in lexicographic order of their node lists.
    ///
    /// Depth-first search restricted to nodes from which `j` is reachable, so
    /// every explored branch yields at least one path. The running time is
    /// proportional to the size of the output, which can be exponential in
    /// the number of edges (`2^(n-2)` paths between the ends of a complete
    /// DAG on `n` nodes).
    pub fn paths(&self, i: Node, j: Node) -> Vec<Path> {
        let mut out = Vec::new();
        if i == j || i > self.n || j > self.n || !self.reaches(i, j) {
            return out;
        }
        let mut stack = vec![i];
        self.extend_paths(j, &mut stack, &mut out);
        out
    }

    fn extend_paths(&self, target: Node, stack: &mut Vec<Node>, out: &mut Vec<Path>) {
        let last = *stack.last().expect("nonempty");
        for c in self.children[last].iter() {
            if c == target {
                stack.push(c);
                out.push(Path(stack.clone()));
                stack.pop();
            } else if self.reaches(c, target) {
                stack.push(c);
                self.extend_paths(target, stack, out);
                stack.pop();
            }
        }
    }

    /// Ordered pairs `(i, j)` joined by at least one directed path, sorted.
    pub fn connected_pairs(&self) -> Vec<(Node, Node)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in self.descendants[i].iter() {
                out.push((i, j));
            }
        }
        out
    }

    /// Edge `(i, j)` present iff `j` is reachable from `i`.
    pub fn transitive_closure(&self) -> Dag {
        let edges = self.connected_pairs();
        Dag::from_edges(self.n, &edges).expect("closure of a DAG is a DAG")
    }

    pub fn is_transitively_closed(&self) -> bool {
        (1..=self.n).all(|v| self.children[v] == self.descendants[v])
    }

    /// Subgraph on the same nodes keeping the edges selected by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(Node, Node) -> bool) -> Dag {
        let edges: Vec<_> = self.edges.iter().copied().filter(|&(u, v)| keep(u, v)).collect();
        Dag::from_edges(self.n, &edges).expect("subgraph of a DAG is a DAG")
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for v in 1..=self.n {
            s.push_str(&format!("  {v};\n"));
        }
        for &(u, v) in &self.edges {
            s.push_str(&format!("  {u} -> {v};\n"));
        }
        s.push_str("}\n");
        s
    }

    /// Every DAG on the labeled node set `1..=n`, ordered by number of edges
    /// and then lexicographically by sorted edge list. With
    /// `transitively_closed`, only the DAGs that are transitive closures
    /// (labeled posets) are produced.
    pub fn all_labeled(n: usize, transitively_closed: bool) -> Result<Vec<Dag>> {
        let pairs: Vec<(Node, Node)> = (1..=n)
            .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        if pairs.len() > 24 {
            return Err(Error::Precondition(format!(
                "enumerating all labeled DAGs on {n} nodes is not supported"
            )));
        }
        let mut graphs: Vec<(usize, Vec<(Node, Node)>, Dag)> = Vec::new();
        for mask in 0u32..(1u32 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            if edges.iter().any(|&(u, v)| u > v && edges.contains(&(v, u))) {
                continue;
            }
            if let Ok(g) = Dag::from_edges(n, &edges) {
                if !transitively_closed || g.is_transitively_closed() {
                    graphs.push((g.num_edges(), g.edges().to_vec(), g));
                }
            }
        }
        graphs.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        Ok(graphs.into_iter().map(|(_, _, g)| g).collect())
    }
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dag(n={}, edges=[", self.n)?;
        for (k, (u, v)) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}->{v}")?;
        }
        f.write_str("])")
    }
}

/// A directed path, stored as its node sequence (at least two nodes).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<Node>);

impl Path {
    /// Validates `nodes` against `g`.
    pub fn new(g: &Dag, nodes: Vec<Node>) -> Result<Path> {
        if nodes.len() < 2 {
            return Err(Error::InvalidPath(format!("{nodes:?} has fewer than two nodes")));
        }
        for w in nodes.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::MissingEdge(w[0], w[1]));
            }
        }
        Ok(Path(nodes))
    }

    pub fn nodes(&self) -> &[Node] {
        &self.0
    }

    pub fn source(&self) -> Node {
        self.0[0]
    }

    pub fn target(&self) -> Node {
        *self.0.last().expect("nonempty")
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn interior(&self) -> NodeSet {
        self.0[1..self.0.len() - 1].iter().copied().collect()
    }

    pub fn node_set(&self) -> NodeSet {
        self.0.iter().copied().collect()
    }

    /// The portion from `a` to `b`, if both lie on the path in that order.
    pub fn segment(&self, a: Node, b: Node) -> Option<Path> {
        let s = self.0.iter().position(|&v| v == a)?;
        let t = self.0.iter().position(|&v| v == b)?;
        (s < t).then(|| Path(self.0[s..=t].to_vec()))
    }

    /// Concatenation of `self` (ending at `k`) and `other` (starting at `k`).
    pub fn join(&self, other: &Path) -> Path {
        debug_assert_eq!(self.target(), other.source());
        let mut nodes = self.0.clone();
        nodes.extend_from_slice(&other.0[1..]);
        Path(nodes)
    }

    /// 0/1 indicator over the edges of `g`.
    pub fn indicator(&self, g: &Dag) -> Vec<i64> {
        let mut v = vec![0; g.num_edges()];
        for (a, b) in self.edges() {
            v[g.edge_index(a, b).expect("edge of host graph")] = 1;
        }
        v
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("->")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Dag {
        Dag::from_edges(4, &[(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap()
    }

    fn nodes(ps: &[Path]) -> Vec<Vec<Node>> {
        ps.iter().map(|p| p.nodes().to_vec()).collect()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Dag::from_edges(3, &[(1, 2), (2, 3), (3, 1)]).unwrap_err(),
            Error::Cycle(1)
        );
        assert_eq!(Dag::from_edges(2, &[(1, 1)]).unwrap_err(), Error::SelfLoop(1));
        assert_eq!(
            Dag::from_edges(2, &[(1, 2), (1, 2)]).unwrap_err(),
            Error::DuplicateEdge(1, 2)
        );
        assert!(matches!(
            Dag::from_edges(2, &[(1, 3)]).unwrap_err(),
            Error::NodeOutOfRange { node: 3, n: 2 }
        ));
        let g = Dag::from_edges(2, &[]).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn diamond_paths() {
        let g = diamond();
        assert_eq!(nodes(&g.paths(1, 4)), vec![vec![1, 2, 4], vec![1, 3, 4]]);
        assert!(g.paths(4, 1).is_empty());
        assert_eq!(Dag::complete(4).unwrap().paths(1, 4).len(), 4);
    }

    #[test]
    fn complete_dag_path_count_matches_brute_force() {
        // Brute force: every subset of the interior nodes 2..n-1 in increasing
        // order is exactly one 1 -> n path of the complete DAG.
        for n in 2..=8 {
            let g = Dag::complete(n).unwrap();
            let brute = 1usize << (n - 2);
            assert_eq!(g.paths(1, n).len(), brute, "n = {n}");
        }
    }

    #[test]
    fn closure_examples() {
        let chain = Dag::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(chain.transitive_closure().edges(), &[(1, 2), (1, 3), (2, 3)]);

        let chord = Dag::from_edges(4, &[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]).unwrap();
        let closed = chord.transitive_closure();
        assert_eq!(closed.num_edges(), 6);
        assert!(closed.has_edge(1, 4));

        let complete = Dag::complete(4).unwrap();
        assert_eq!(complete.transitive_closure(), complete);
    }

    #[test]
    fn labeled_dag_counts() {
        // OEIS A003024 and A001035.
        assert_eq!(Dag::all_labeled(3, false).unwrap().len(), 25);
        assert_eq!(Dag::all_labeled(4, false).unwrap().len(), 543);
        assert_eq!(Dag::all_labeled(3, true).unwrap().len(), 19);
        assert_eq!(Dag::all_labeled(4, true).unwrap().len(), 219);
    }

    #[test]
    fn path_helpers() {
        let g = Dag::complete(4).unwrap();
        let p = Path::new(&g, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(p.interior().to_vec(), vec![2, 3]);
        assert_eq!(p.segment(2, 4).unwrap().nodes(), &[2, 3, 4]);
        assert!(p.segment(3, 2).is_none());
        assert_eq!(p.indicator(&g), vec![1, 0, 0, 1, 0, 1]);
        assert!(Path::new(&g, vec![4, 1]).is_err());
        assert!(Path::new(&g, vec![1]).is_err());
    }
}
