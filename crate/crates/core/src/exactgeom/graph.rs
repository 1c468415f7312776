use std::collections::BTreeSet;

use super::RaySet;
use crate::scalar::ExactInt;

/// Orthogonality relation over a ray set.
///
/// Edges are sorted index pairs `(i, j)` with `i < j`; triples are sorted
/// `[i, j, k]`. A lone pair is an edge that lies in no triple. Triples can
/// also be supplied explicitly ([`OrthGraph::from_constraints`]), which is how
/// the coloring code builds restricted constraint systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    triples: Vec<[usize; 3]>,
    lone_pairs: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    node_triples: Vec<Vec<usize>>,
}

impl OrthGraph {
    pub fn from_rays<T: ExactInt>(s: &RaySet<T>) -> Self {
        let rays = s.rays();
        let n = rays.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rays[i].is_orthogonal(&rays[j]) {
                    edges.push((i, j));
                }
            }
        }
        let edge_set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
        let mut triples = Vec::new();
        for &(i, j) in &edges {
            for k in j + 1..n {
                if edge_set.contains(&(i, k)) && edge_set.contains(&(j, k)) {
                    triples.push([i, j, k]);
                }
            }
        }
        Self::assemble(n, edge_set, triples)
    }

    /// Graph over `n` nodes with the given pairs and triples as constraints.
    ///
    /// The three pairs of every triple are added as edges. Panics on an index
    /// out of range or a triple with repeated nodes.
    pub fn from_constraints(n: usize, edges: &[(usize, usize)], triples: &[[usize; 3]]) -> Self {
        let mut edge_set = BTreeSet::new();
        let norm = |a: usize, b: usize| {
            assert!(a < n && b < n && a != b, "bad edge ({a}, {b})");
            (a.min(b), a.max(b))
        };
        for &(a, b) in edges {
            edge_set.insert(norm(a, b));
        }
        let mut ts = BTreeSet::new();
        for t in triples {
            let mut t = *t;
            t.sort_unstable();
            assert!(t[0] != t[1] && t[1] != t[2], "degenerate triple {t:?}");
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                edge_set.insert(norm(a, b));
            }
            ts.insert(t);
        }
        Self::assemble(n, edge_set, ts.into_iter().collect())
    }

    fn assemble(
        n: usize,
        edge_set: BTreeSet<(usize, usize)>,
        mut triples: Vec<[usize; 3]>,
    ) -> Self {
        triples.sort_unstable();
        let mut covered = BTreeSet::new();
        for t in &triples {
            covered.insert((t[0], t[1]));
            covered.insert((t[0], t[2]));
            covered.insert((t[1], t[2]));
        }
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let lone_pairs = edges
            .iter()
            .copied()
            .filter(|e| !covered.contains(e))
            .collect();
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b) in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for adj in neighbors.iter_mut() {
            adj.sort_unstable();
        }
        let mut node_triples = vec![Vec::new(); n];
        for (ti, t) in triples.iter().enumerate() {
            for &v in t {
                node_triples[v].push(ti);
            }
        }
        OrthGraph {
            n,
            edges,
            triples,
            lone_pairs,
            neighbors,
            node_triples,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn lone_pairs(&self) -> &[(usize, usize)] {
        &self.lone_pairs
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Indices into [`OrthGraph::triples`] of the triples containing `v`.
    pub fn triples_of(&self, v: usize) -> &[usize] {
        &self.node_triples[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.neighbors[v].is_empty()
    }

    /// Induced sub-graph on `keep` (re-indexed in the order given).
    pub fn induced(&self, keep: &[usize]) -> OrthGraph {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|(a, b)| map[*a] != usize::MAX && map[*b] != usize::MAX)
            .map(|&(a, b)| (map[a], map[b]))
            .collect();
        let triples: Vec<[usize; 3]> = self
            .triples
            .iter()
            .filter(|t| t.iter().all(|&v| map[v] != usize::MAX))
            .map(|t| t.map(|v| map[v]))
            .collect();
        OrthGraph::from_constraints(keep.len(), &edges, &triples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{Ray, RaySet};

    fn basis() -> RaySet<i64> {
        let r = |p| Ray::from_pairs(p).unwrap();
        RaySet::new(
            "basis",
            vec![
                r([(1, 0), (0, 0), (0, 0)]),
                r([(0, 0), (1, 0), (0, 0)]),
                r([(0, 0), (0, 0), (1, 0)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_basis_census() {
        let g = OrthGraph::from_rays(&basis());
        assert_eq!(g.triples(), &[[0, 1, 2]]);
        assert_eq!(g.edges().len(), 3);
        assert!(g.lone_pairs().is_empty());
    }

    #[test]
    fn constraints_add_triple_edges() {
        let g = OrthGraph::from_constraints(5, &[(3, 4)], &[[2, 0, 1]]);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2), (3, 4)]);
        assert_eq!(g.lone_pairs(), &[(3, 4)]);
        assert_eq!(g.triples_of(1), &[0]);
        assert!(g.has_edge(4, 3));
    }

    #[test]
    fn induced_keeps_internal_structure() {
        let g = OrthGraph::from_rays(&basis());
        let h = g.induced(&[2, 0]);
        assert_eq!(h.edges(), &[(0, 1)]);
        assert!(h.triples().is_empty());
        assert_eq!(h.lone_pairs(), &[(0, 1)]);
    }
}
