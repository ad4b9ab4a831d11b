//! The maxoid polytope: one vertex per maximal cone (the summed indicator
//! vectors of its chosen paths), its facets, face lattice, and the maxoids
//! attached to faces.
//!
//! The hull is computed in affine-hull coordinates by the double
//! description method on the homogenized points `(1, v)`: the extreme rays
//! of `{y : (1, v) · y >= 0 for all v}` are exactly the facet inequalities.

use std::collections::{BTreeSet, HashSet};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fan::{enumerate_maximal_cones, ConeEntry, CriticalSystem};
use crate::graph::Dag;
use crate::linarith::{clear_denominators, echelon, feasible, rank, rref, Constraint, LinExpr};
use crate::rational::Rational;
use crate::separation::{maxoid, Maxoid};
use crate::tropical::WeightedDag;
use crate::{Error, Result};

/// Vertices of the polytope of `g`, one per maximal cone, in cone order.
pub fn polytope_vertices(g: &Dag) -> Vec<(CriticalSystem, Vec<i64>)> {
    vertices_of(g, &enumerate_maximal_cones(g))
}

pub fn vertices_of(g: &Dag, cones: &[ConeEntry]) -> Vec<(CriticalSystem, Vec<i64>)> {
    cones
        .iter()
        .map(|c| (c.system.clone(), c.system.indicator_sum(g)))
        .collect()
}

/// A facet `constant + normal · x >= 0`, tight exactly on `vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Integer coefficients in affine-hull coordinates, constant first.
    pub inequality: Vec<BigInt>,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    /// Indices into the point list, increasing.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    /// Sorted by dimension, then vertex list; the whole polytope is last.
    pub faces: Vec<Face>,
    /// `(lower, upper)` index pairs with `lower` a facet of `upper`.
    pub covers: Vec<(usize, usize)>,
}

impl FaceLattice {
    pub fn top(&self) -> &Face {
        self.faces.last().expect("top face")
    }

    /// Graphviz rendering of the Hasse diagram, bottom to top.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph faces {\n  rankdir=BT;\n");
        for (k, f) in self.faces.iter().enumerate() {
            let label: Vec<String> = f.vertices.iter().map(|v| v.to_string()).collect();
            s.push_str(&format!("  f{k} [label=\"{{{}}}\"];\n", label.join(",")));
        }
        for &(a, b) in &self.covers {
            s.push_str(&format!("  f{a} -> f{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Convex hull of a finite point set.
#[derive(Clone, Debug)]
pub struct Polytope {
    points: Vec<Vec<i64>>,
    /// Points restricted to `pivots`, an injective affine chart of the hull.
    local: Vec<Vec<BigInt>>,
    dim: usize,
    facets: Vec<Facet>,
}

impl Polytope {
    pub fn new(points: Vec<Vec<i64>>) -> Result<Polytope> {
        let Some(p0) = points.first() else {
            return Err(Error::Precondition("polytope needs at least one point".into()));
        };
        let width = p0.len();
        if points.iter().any(|p| p.len() != width) {
            return Err(Error::Precondition("points have different lengths".into()));
        }
        let diffs: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.iter().zip(p0).map(|(a, b)| BigInt::from(a - b)).collect())
            .collect();
        let pivots = echelon(&diffs).pivots;
        let local: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| pivots.iter().map(|&k| BigInt::from(p[k])).collect())
            .collect();
        let dim = pivots.len();
        let facets = if dim == 0 { Vec::new() } else { facets(&local) };
        Ok(Polytope {
            points,
            local,
            dim,
            facets,
        })
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    fn affine_rank(&self, vertices: &[usize]) -> usize {
        let Some((&first, rest)) = vertices.split_first() else {
            return 0;
        };
        let rows: Vec<Vec<Rational>> = rest
            .iter()
            .map(|&v| {
                self.local[v]
                    .iter()
                    .zip(&self.local[first])
                    .map(|(a, b)| Rational::from_integer(a - b))
                    .collect()
            })
            .collect();
        rank(&rows)
    }

    /// All nonempty faces, including the polytope itself.
    pub fn face_lattice(&self) -> FaceLattice {
        let all: Vec<usize> = (0..self.points.len()).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(all.clone());
        let mut queue: Vec<Vec<usize>> = Vec::new();
        for f in &self.facets {
            if seen.insert(f.vertices.clone()) {
                queue.push(f.vertices.clone());
            }
        }
        while let Some(face) = queue.pop() {
            for f in &self.facets {
                let meet: Vec<usize> = face
                    .iter()
                    .copied()
                    .filter(|v| f.vertices.binary_search(v).is_ok())
                    .collect();
                if !meet.is_empty() && seen.insert(meet.clone()) {
                    queue.push(meet);
                }
            }
        }
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|vertices| Face {
                dim: self.affine_rank(&vertices),
                vertices,
            })
            .collect();
        faces.sort();
        let mut covers = Vec::new();
        for (a, lo) in faces.iter().enumerate() {
            for (b, hi) in faces.iter().enumerate() {
                if hi.dim == lo.dim + 1 && lo.vertices.iter().all(|v| hi.vertices.binary_search(v).is_ok()) {
                    covers.push((a, b));
                }
            }
        }
        FaceLattice { faces, covers }
    }

    /// Number of proper faces of each dimension `0..dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim];
        for face in self.face_lattice().faces {
            if face.dim < self.dim {
                f[face.dim] += 1;
            }
        }
        f
    }

    /// A functional in the relative interior of the normal cone of the
    /// face with the given vertex set: constant on it, strictly smaller on
    /// every other point.
    pub fn face_normal(&self, vertices: &[usize]) -> Result<Vec<Rational>> {
        let Some(&anchor) = vertices.first() else {
            return Err(Error::NotAFace);
        };
        let width = self.points[0].len();
        let diff = |a: usize, b: usize| -> LinExpr {
            let d: Vec<i64> = self.points[a].iter().zip(&self.points[b]).map(|(x, y)| x - y).collect();
            LinExpr::from_dense(&d)
        };
        let mut sys = Vec::new();
        for v in 0..self.points.len() {
            if v == anchor {
                continue;
            }
            if vertices.contains(&v) {
                sys.push(Constraint::eq(diff(v, anchor)));
            } else {
                sys.push(Constraint::gt(diff(anchor, v)));
            }
        }
        feasible(&sys, width)
            .map(|w| w.into_point())
            .ok_or(Error::NotAFace)
    }
}

/// The maxoid of weights in the relative interior of the normal cone of
/// `face`. Coordinates of the polytope must be the edges of `g`.
pub fn face_maxoid(g: &Dag, polytope: &Polytope, face: &Face) -> Result<Maxoid> {
    if polytope.points[0].len() != g.num_edges() {
        return Err(Error::Precondition("polytope coordinates do not match the edge set".into()));
    }
    let w = polytope.face_normal(&face.vertices)?;
    Ok(maxoid(&WeightedDag::new(g.clone(), w)?))
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

struct Ray {
    coords: Vec<BigInt>,
    zeros: FixedBitSet,
}

/// Double description on the rows `(1, p)` of a full-dimensional point set.
fn facets(local: &[Vec<BigInt>]) -> Vec<Facet> {
    let m = local.len();
    let rows: Vec<Vec<BigInt>> = local
        .iter()
        .map(|p| std::iter::once(BigInt::one()).chain(p.iter().cloned()).collect())
        .collect();
    let dim = rows[0].len();

    // Initial simplicial cone from `dim` independent rows.
    let mut basis: Vec<usize> = Vec::new();
    for r in 0..m {
        let trial: Vec<Vec<Rational>> = basis
            .iter()
            .chain(std::iter::once(&r))
            .map(|&k| rows[k].iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        if rank(&trial) == trial.len() {
            basis.push(r);
            if basis.len() == dim {
                break;
            }
        }
    }
    debug_assert_eq!(basis.len(), dim);
    let augmented: Vec<Vec<Rational>> = basis
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let mut row: Vec<Rational> = rows[r].iter().map(|x| Rational::from_integer(x.clone())).collect();
            row.extend((0..dim).map(|c| if c == k { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let (reduced, _) = rref(&augmented, 2 * dim);
    let mut processed = FixedBitSet::with_capacity(m);
    for &r in &basis {
        processed.insert(r);
    }
    let mut rays: Vec<Ray> = (0..dim)
        .map(|k| {
            let col: Vec<Rational> = reduced.iter().map(|row| row[dim + k].clone()).collect();
            let coords = primitive(clear_denominators(&col));
            let mut zeros = FixedBitSet::with_capacity(m);
            for (c, &r) in basis.iter().enumerate() {
                if c != k {
                    zeros.insert(r);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    for r in 0..m {
        if processed.contains(r) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|ray| dot(&rows[r], &ray.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            let pv = &vals[p];
            for &q in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|k| k == p || k == q || !common.is_subset(&rays[k].zeros));
                if !adjacent {
                    continue;
                }
                let qv = -&vals[q];
                let coords: Vec<BigInt> = rays[p]
                    .coords
                    .iter()
                    .zip(&rays[q].coords)
                    .map(|(a, b)| &qv * a + pv * b)
                    .collect();
                common.insert(r);
                next.push(Ray {
                    coords: primitive(coords),
                    zeros: common,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
        for (k, mut ray) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                ray.zeros.insert(r);
            }
            kept.push(ray);
        }
        kept.extend(next);
        rays = kept;
        processed.insert(r);
    }

    let mut out: BTreeSet<(Vec<usize>, Vec<BigInt>)> = BTreeSet::new();
    for ray in rays {
        let vertices: Vec<usize> = ray.zeros.ones().collect();
        out.insert((vertices, ray.coords));
    }
    out.into_iter()
        .map(|(vertices, inequality)| Facet { inequality, vertices })
        .collect()
}
