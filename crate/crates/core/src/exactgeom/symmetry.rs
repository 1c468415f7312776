//! Cube symmetries acting on ray configurations.

use std::collections::BTreeSet;

use super::{OrthGraph, Ray, RaySet};
use crate::scalar::ExactInt;

/// Signed permutation matrix: `(Mv)[i] = signs[i] * v[perm[i]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    pub perm: [usize; 3],
    pub signs: [i8; 3],
}

impl SignedPerm {
    /// All 48 elements of the full cube group.
    pub fn all() -> Vec<SignedPerm> {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(48);
        for perm in PERMS {
            for bits in 0..8u8 {
                let s = |k: u8| if bits >> k & 1 == 1 { -1 } else { 1 };
                out.push(SignedPerm {
                    perm,
                    signs: [s(0), s(1), s(2)],
                });
            }
        }
        out
    }

    pub fn identity() -> SignedPerm {
        SignedPerm {
            perm: [0, 1, 2],
            signs: [1, 1, 1],
        }
    }

    pub fn apply<T: ExactInt>(&self, r: &Ray<T>) -> Ray<T> {
        let c = r.coords();
        let pick = |i: usize| {
            let v = c[self.perm[i]].clone();
            if self.signs[i] < 0 { -v } else { v }
        };
        Ray::canonicalize(pick(0), pick(1), pick(2)).expect("signed permutations are invertible")
    }
}

/// Permutation of graph nodes: node `i` maps to `self.0[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePerm(pub Vec<usize>);

impl NodePerm {
    pub fn identity(n: usize) -> NodePerm {
        NodePerm((0..n).collect())
    }

    pub fn image(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Checks bijectivity and that edges and triples map onto edges and triples.
    pub fn is_automorphism(&self, g: &OrthGraph) -> bool {
        let n = g.node_count();
        if self.0.len() != n {
            return false;
        }
        let targets: BTreeSet<usize> = self.0.iter().copied().collect();
        if targets.len() != n || targets.iter().any(|&v| v >= n) {
            return false;
        }
        let edges: BTreeSet<(usize, usize)> = g.edges().iter().copied().collect();
        let triples: BTreeSet<[usize; 3]> = g.triples().iter().copied().collect();
        let edges_ok = g.edges().iter().all(|&(a, b)| {
            let (x, y) = (self.image(a), self.image(b));
            edges.contains(&(x.min(y), x.max(y)))
        });
        let triples_ok = g.triples().iter().all(|t| {
            let mut m = t.map(|v| self.image(v));
            m.sort_unstable();
            triples.contains(&m)
        });
        edges_ok && triples_ok
    }
}

/// Node permutations of `g` induced by the 48 signed permutations that map
/// the ray set onto itself.
///
/// `-I` acts trivially on rays, so distinct group elements can induce the
/// same permutation; duplicates are removed. The identity comes first and the
/// rest are sorted. Every returned permutation is checked against `g`.
pub fn automorphisms<T: ExactInt>(s: &RaySet<T>, g: &OrthGraph) -> Vec<NodePerm> {
    let mut found = BTreeSet::new();
    'outer: for m in SignedPerm::all() {
        let mut image = Vec::with_capacity(s.len());
        for r in s.rays() {
            match s.index_of(&m.apply(r)) {
                Some(j) => image.push(j),
                None => continue 'outer,
            }
        }
        let p = NodePerm(image);
        assert!(
            p.is_automorphism(g),
            "cube symmetry failed to preserve orthogonality"
        );
        found.insert(p);
    }
    let id = NodePerm::identity(s.len());
    let mut out = vec![id.clone()];
    out.extend(found.into_iter().filter(|p| *p != id));
    out
}

/// Orbits of the group generated by `perms` on `0..n`, each sorted, ordered
/// by smallest element.
pub fn orbits(perms: &[NodePerm], n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            let v = orbit[i];
            for p in perms {
                let w = p.image(v);
                if !seen[w] {
                    seen[w] = true;
                    orbit.push(w);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::build_peres33;

    #[test]
    fn peres_symmetry_group() {
        let s = build_peres33::<i64>();
        let g = OrthGraph::from_rays(&s);
        let auts = automorphisms(&s, &g);
        assert!(auts[0].is_identity());
        // 48 signed permutations, ±I identified
        assert_eq!(auts.len(), 24);
        let edges: BTreeSet<(usize, usize)> = g.lone_pairs().iter().copied().collect();
        for p in &auts {
            assert!(p.is_automorphism(&g));
            for &(a, b) in g.lone_pairs() {
                let (x, y) = (p.image(a), p.image(b));
                assert!(edges.contains(&(x.min(y), x.max(y))));
            }
        }
    }

    #[test]
    fn swapping_x_and_y_preserves_peres() {
        let s = build_peres33::<i64>();
        let swap = SignedPerm {
            perm: [1, 0, 2],
            signs: [1, 1, 1],
        };
        for r in s.rays() {
            assert!(s.contains(&swap.apply(r)));
        }
    }

    #[test]
    fn peres_orbits() {
        let s = build_peres33::<i64>();
        let g = OrthGraph::from_rays(&s);
        let orbs = orbits(&automorphisms(&s, &g), s.len());
        let mut sizes: Vec<usize> = orbs.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        // axes, edge midpoints, (0,1,√2)-type, (1,1,√2)-type
        assert_eq!(sizes, vec![3, 6, 12, 12]);
    }

    #[test]
    fn bad_permutation_rejected() {
        let s = build_peres33::<i64>();
        let g = OrthGraph::from_rays(&s);
        let axis = s
            .index_of(&Ray::from_pairs([(0, 0), (0, 0), (1, 0)]).unwrap())
            .unwrap();
        let mid = s
            .index_of(&Ray::from_pairs([(1, 0), (1, 0), (0, 0)]).unwrap())
            .unwrap();
        // an axis has a different number of orthogonal partners than an edge midpoint
        assert_ne!(g.neighbors(axis).len(), g.neighbors(mid).len());
        let mut p = NodePerm::identity(33);
        p.0.swap(axis, mid);
        assert!(!p.is_automorphism(&g));
        assert!(!NodePerm(vec![0; 33]).is_automorphism(&g));
    }
}
