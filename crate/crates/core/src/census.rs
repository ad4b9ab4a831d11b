//! Census of maxoids over topologically ordered, transitively closed DAGs
//! (TDAGs).
//!
//! A TDAG here is also weakly connected. Disconnected graphs contribute
//! nothing new up to relabeling: their maxoids are products of maxoids on
//! fewer nodes. With this filter the family sizes are 3, 18 and 181 for
//! `n` = 3, 4, 5.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::fan::enumerate_maximal_cones;
use crate::format::{dag_to_value, maxoid_from_value, maxoid_to_value};
use crate::graph::{Dag, Node};
use crate::nodeset::NodeSet;
use crate::polytope::{face_maxoid, vertices_of, Polytope};
use crate::separation::Maxoid;
use crate::{Error, Result};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "MAXOID_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct TdagFamily {
    pub n: usize,
    pub graphs: Vec<Dag>,
}

/// All weakly connected TDAGs on `1..=n`, ordered by edge count and then
/// edge list.
/// The count grows like the number of labeled posets; `n` above 7 is
/// rejected.
pub fn all_top_ordered_tdags(n: usize) -> Result<TdagFamily> {
    if n == 0 || n > 7 {
        return Err(Error::Precondition(format!("TDAG enumeration supports 1..=7 nodes, got {n}")));
    }
    let pairs: Vec<(Node, Node)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    let mut graphs: Vec<Dag> = (0u32..1 << pairs.len())
        .into_par_iter()
        .filter_map(|mask| {
            let edges: Vec<(Node, Node)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Dag::from_edges(n, &edges).expect("forward edges are acyclic");
            (g.is_transitively_closed() && weakly_connected(&g)).then_some(g)
        })
        .collect();
    graphs.sort_by(|a, b| (a.num_edges(), a.edges()).cmp(&(b.num_edges(), b.edges())));
    Ok(TdagFamily { n, graphs })
}

fn weakly_connected(g: &Dag) -> bool {
    let mut seen = NodeSet::singleton(1);
    let mut stack = vec![1];
    while let Some(v) = stack.pop() {
        for w in g.children(v).union(g.parents(v)).difference(seen).iter() {
            seen.insert(w);
            stack.push(w);
        }
    }
    seen == g.nodes()
}

/// Generic maxoids of one graph, and with `!generic_only` also the maxoids
/// of every face of its polytope.
pub fn graph_maxoids(g: &Dag, generic_only: bool) -> Result<BTreeSet<Maxoid>> {
    let cones = enumerate_maximal_cones(g);
    let mut out: BTreeSet<Maxoid> = cones.iter().map(|c| c.maxoid.clone()).collect();
    if generic_only {
        return Ok(out);
    }
    let points = vertices_of(g, &cones).into_iter().map(|(_, v)| v).collect();
    let polytope = Polytope::new(points)?;
    let faces = polytope.face_lattice().faces;
    let more = faces
        .par_iter()
        .filter(|f| f.dim > 0)
        .map(|f| face_maxoid(g, &polytope, f))
        .collect::<Result<Vec<_>>>()?;
    out.extend(more);
    Ok(out)
}

/// Per-graph results stored as JSON files named by a hash of the graph.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// The directory named by [`CACHE_ENV`], if set and nonempty.
    pub fn from_env() -> Option<Cache> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(Cache::new)
    }

    fn key(g: &Dag, generic_only: bool) -> String {
        let text = json!({ "graph": dag_to_value(g), "generic_only": generic_only, "version": 1 });
        hex::encode(Sha256::digest(text.to_string().as_bytes()))
    }

    fn file(&self, g: &Dag, generic_only: bool) -> PathBuf {
        self.dir.join(format!("{}.json", Cache::key(g, generic_only)))
    }

    /// A stored result; unreadable or mismatching entries count as misses.
    pub fn load(&self, g: &Dag, generic_only: bool) -> Option<BTreeSet<Maxoid>> {
        let text = fs::read_to_string(self.file(g, generic_only)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v.get("graph")? != &dag_to_value(g) {
            return None;
        }
        v.get("maxoids")?
            .as_array()?
            .iter()
            .map(|m| maxoid_from_value(m, Some(g.n())).ok())
            .collect()
    }

    pub fn store(&self, g: &Dag, generic_only: bool, maxoids: &BTreeSet<Maxoid>) -> Result<()> {
        let io = |e: std::io::Error| Error::Precondition(format!("cache write failed: {e}"));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let v = json!({
            "graph": dag_to_value(g),
            "generic_only": generic_only,
            "maxoids": maxoids.iter().map(maxoid_to_value).collect::<Vec<_>>(),
        });
        // Write then rename so an interrupted run leaves no partial entry.
        let path = self.file(g, generic_only);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, v.to_string()).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }
}

/// Distinct maxoids over all graphs of the family.
pub fn all_maxoids(family: &TdagFamily, generic_only: bool, cache: Option<&Cache>) -> Result<BTreeSet<Maxoid>> {
    let per_graph = family
        .graphs
        .par_iter()
        .map(|g| {
            if let Some(hit) = cache.and_then(|c| c.load(g, generic_only)) {
                return Ok(hit);
            }
            let ms = graph_maxoids(g, generic_only)?;
            if let Some(c) = cache {
                c.store(g, generic_only, &ms)?;
            }
            Ok(ms)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_graph.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusCounts {
    pub tdags: usize,
    pub maxoids: usize,
    pub generic: usize,
}

/// Counts for one row of the census.
pub fn census(n: usize, cache: Option<&Cache>) -> Result<(CensusCounts, BTreeSet<Maxoid>)> {
    let family = all_top_ordered_tdags(n)?;
    let generic = all_maxoids(&family, true, cache)?;
    let all = all_maxoids(&family, false, cache)?;
    let counts = CensusCounts {
        tdags: family.graphs.len(),
        maxoids: all.len(),
        generic: generic.len(),
    };
    Ok((counts, all))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tdag_counts() {
        assert_eq!(all_top_ordered_tdags(3).unwrap().graphs.len(), 3);
        assert_eq!(all_top_ordered_tdags(4).unwrap().graphs.len(), 18);
        assert_eq!(all_top_ordered_tdags(5).unwrap().graphs.len(), 181);
        assert!(all_top_ordered_tdags(0).is_err());
        for g in all_top_ordered_tdags(4).unwrap().graphs {
            assert!(g.is_transitively_closed());
            assert!(g.edges().iter().all(|&(u, v)| u < v));
            assert!(weakly_connected(&g));
        }
    }

    #[test]
    fn small_census() {
        let (c3, _) = census(3, None).unwrap();
        assert_eq!(c3, CensusCounts { tdags: 3, maxoids: 4, generic: 4 });
        let (c4, _) = census(4, None).unwrap();
        assert_eq!(c4, CensusCounts { tdags: 18, maxoids: 41, generic: 40 });
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let family = all_top_ordered_tdags(3).unwrap();
        let first = all_maxoids(&family, false, Some(&cache)).unwrap();
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 3);
        let again = all_maxoids(&family, false, Some(&cache)).unwrap();
        assert_eq!(first, again);
        let g = &family.graphs[0];
        fs::write(cache.file(g, false), "garbage").unwrap();
        assert!(cache.load(g, false).is_none());
    }
}
