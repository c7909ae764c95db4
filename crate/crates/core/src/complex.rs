//! Simplicial complexes built from binary relations.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Bound;

use serde::Serialize;

pub type VertexId = u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("relation ({0}, {1}) references a vertex outside the vertex set")]
    UnknownVertex(VertexId, VertexId),
    #[error("relation ({0}, {0}) is reflexive")]
    Reflexive(VertexId),
}

/// A downward-closed set of simplices over a vertex set.
///
/// Vertices are the 0-simplices; `simplices` holds every higher simplex as a
/// sorted vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    vertices: BTreeSet<VertexId>,
    simplices: BTreeSet<Vec<VertexId>>,
}

impl SimplicialComplex {
    /// Closure of the given simplices under taking faces.
    pub fn from_simplices<I, S>(vertices: impl IntoIterator<Item = VertexId>, simplices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = VertexId>,
    {
        let mut vertices: BTreeSet<_> = vertices.into_iter().collect();
        let mut closed = BTreeSet::new();
        for s in simplices {
            let mut s: Vec<_> = s.into_iter().collect();
            s.sort_unstable();
            s.dedup();
            vertices.extend(s.iter().copied());
            add_faces(&s, &mut closed);
        }
        Self {
            vertices,
            simplices: closed,
        }
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    /// Simplices of dimension ≥ 1.
    pub fn simplices(&self) -> &BTreeSet<Vec<VertexId>> {
        &self.simplices
    }

    pub fn dimension(&self) -> Option<usize> {
        let top = self.simplices.iter().map(|s| s.len() - 1).max();
        top.or_else(|| (!self.vertices.is_empty()).then_some(0))
    }

    /// `f[k]` is the number of `k`-simplices.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![self.vertices.len()];
        for s in &self.simplices {
            let k = s.len() - 1;
            if f.len() <= k {
                f.resize(k + 1, 0);
            }
            f[k] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn is_downward_closed(&self) -> bool {
        self.simplices.iter().all(|s| {
            s.iter().all(|v| self.vertices.contains(v))
                && (s.len() < 3
                    || (0..s.len()).all(|skip| {
                        let face: Vec<_> = s
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        self.simplices.contains(&face)
                    }))
        })
    }
}

fn add_faces(s: &[VertexId], out: &mut BTreeSet<Vec<VertexId>>) {
    if s.len() < 2 || out.contains(s) {
        return;
    }
    out.insert(s.to_vec());
    for skip in 0..s.len() {
        let face: Vec<_> = s
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect();
        add_faces(&face, out);
    }
}

/// The clique complex of a relation graph, truncated at `max_dim`.
///
/// With `exclude_top_cell`, a clique spanning the whole vertex set is dropped
/// so that, for example, the complete graph on four points yields the hollow
/// tetrahedron rather than the solid one.
pub fn clique_complex(
    vertices: impl IntoIterator<Item = VertexId>,
    relations: impl IntoIterator<Item = (VertexId, VertexId)>,
    max_dim: usize,
    exclude_top_cell: bool,
) -> Result<SimplicialComplex, ComplexError> {
    let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> =
        vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
    for (a, b) in relations {
        if a == b {
            return Err(ComplexError::Reflexive(a));
        }
        if !vertices.contains(&a) || !vertices.contains(&b) {
            return Err(ComplexError::UnknownVertex(a, b));
        }
        adj.get_mut(&a).expect("checked").insert(b);
        adj.get_mut(&b).expect("checked").insert(a);
    }

    let mut simplices = BTreeSet::new();
    let max_size = max_dim.saturating_add(1);
    for &v in &vertices {
        let higher: Vec<_> = adj[&v]
            .range((Bound::Excluded(v), Bound::Unbounded))
            .copied()
            .collect();
        extend_cliques(&adj, vec![v], &higher, max_size, &mut simplices);
    }

    if exclude_top_cell && vertices.len() >= 2 {
        let whole: Vec<_> = vertices.iter().copied().collect();
        simplices.remove(&whole);
    }

    Ok(SimplicialComplex {
        vertices,
        simplices,
    })
}

// Grows `clique` by candidates larger than its last vertex, so each clique is
// produced once, in sorted order.
fn extend_cliques(
    adj: &BTreeMap<VertexId, BTreeSet<VertexId>>,
    clique: Vec<VertexId>,
    candidates: &[VertexId],
    max_size: usize,
    out: &mut BTreeSet<Vec<VertexId>>,
) {
    if clique.len() >= 2 {
        out.insert(clique.clone());
    }
    if clique.len() == max_size {
        return;
    }
    for (i, &c) in candidates.iter().enumerate() {
        let next: Vec<_> = candidates[i + 1..]
            .iter()
            .copied()
            .filter(|u| adj[&c].contains(u))
            .collect();
        let mut grown = clique.clone();
        grown.push(c);
        extend_cliques(adj, grown, &next, max_size, out);
    }
}

/// Named constructions of low-dimensional spheres.
pub mod presets {
    use super::*;

    /// Three points, pairwise related: a triangle boundary, χ = 0.
    pub fn circle() -> SimplicialComplex {
        clique_complex([0, 1, 2], [(0, 1), (1, 2), (2, 0)], 1, false).expect("valid preset")
    }

    /// Four points, all six relations, top cell removed: χ = 2.
    pub fn sphere() -> SimplicialComplex {
        let rel = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        clique_complex([0, 1, 2, 3], rel, 3, true).expect("valid preset")
    }
}
