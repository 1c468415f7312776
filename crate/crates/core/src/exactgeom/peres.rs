use super::{OrthGraph, Quad2, Ray, RaySet, complete_pair};
use crate::scalar::ExactInt;

/// Peres' 33 directions, sorted coefficient-lexicographically.
///
/// Lines from the centre of the cube `[-1, 1]³` to
/// * the midpoints of its 12 edges (6 rays, permutations of `(1, ±1, 0)`), and
/// * the 3×3 grids inscribed in the incircles of its 6 faces, whose in-face
///   coordinates are `{-1/√2, 0, 1/√2}`.
///
/// Scaling everything by `√2` puts the grid points at `(±√2, u, v)` with
/// `u, v ∈ {-1, 0, 1}` (and permutations), which lie in `Z[√2]³`.
pub fn build_peres33<T: ExactInt>() -> RaySet<T> {
    let int = |k: i64| Quad2::<T>::from_int(T::from_i64(k).expect("small constant"));
    let root = |k: i64| Quad2::<T>::new(T::zero(), T::from_i64(k).expect("small constant"));
    let mut points: Vec<[Quad2<T>; 3]> = Vec::new();

    for axis in 0..3 {
        for s1 in [-1, 1] {
            for s2 in [-1, 1] {
                let mut p = [int(0), int(0), int(0)];
                p[(axis + 1) % 3] = int(s1);
                p[(axis + 2) % 3] = int(s2);
                points.push(p);
            }
        }
    }
    for axis in 0..3 {
        for face in [-1, 1] {
            for u in -1..=1 {
                for v in -1..=1 {
                    let mut p = [int(0), int(0), int(0)];
                    p[axis] = root(face);
                    p[(axis + 1) % 3] = int(u);
                    p[(axis + 2) % 3] = int(v);
                    points.push(p);
                }
            }
        }
    }

    let rays = points
        .into_iter()
        .map(|[x, y, z]| Ray::canonicalize(x, y, z).expect("construction points are nonzero"));
    RaySet::dedup("peres33", rays).sorted()
}

/// The 33 rays together with the completions of their lone pairs, plus the
/// 40 orthogonal triples built on them.
#[derive(Clone, Debug)]
pub struct ExtendedConfig<T = i64> {
    /// Peres rays first (indices `0..base_len`), completion rays after.
    pub rays: RaySet<T>,
    pub base_len: usize,
    /// Triples of the base configuration followed by one completed triple per
    /// lone pair, each written `[i, j, completion]`.
    pub triples: Vec<[usize; 3]>,
    /// Number of triples that were already present in the base configuration.
    pub base_triples: usize,
}

/// Extends `base` by completing every lone pair of its orthogonality graph.
pub fn extended_configuration<T: ExactInt>(base: &RaySet<T>) -> ExtendedConfig<T> {
    let g = OrthGraph::from_rays(base);
    let mut rays: Vec<Ray<T>> = base.rays().to_vec();
    let mut triples: Vec<[usize; 3]> = g.triples().to_vec();
    for &(i, j) in g.lone_pairs() {
        let c = complete_pair(&rays[i], &rays[j]).expect("lone pairs are orthogonal");
        let k = match rays.iter().position(|r| r == &c) {
            Some(k) => k,
            None => {
                rays.push(c);
                rays.len() - 1
            }
        };
        triples.push([i, j, k]);
    }
    let label = format!("{}+completions", base.label());
    ExtendedConfig {
        rays: RaySet::new(label, rays).expect("completions are canonical and distinct"),
        base_len: base.len(),
        base_triples: g.triples().len(),
        triples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(a: i64, b: i64) -> Quad2<i64> {
        Quad2::new(a, b)
    }

    #[test]
    fn peres_has_33_distinct_rays() {
        let s = build_peres33::<i64>();
        assert_eq!(s.len(), 33);
        let again = RaySet::new("check", s.rays().to_vec());
        assert!(again.is_ok());
        assert!(s.rays().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn peres_contains_construction_witnesses() {
        let s = build_peres33::<i64>();
        for c in [
            [q(0, 0), q(0, 0), q(1, 0)],
            [q(1, 0), q(1, 0), q(0, 0)],
            [q(0, 0), q(1, 0), q(0, 1)],
            [q(1, 0), q(1, 0), q(0, 1)],
        ] {
            let r = Ray::from_canonical(c).unwrap();
            assert!(s.contains(&r), "missing {r}");
        }
    }

    #[test]
    fn census_16_24_72() {
        let g = OrthGraph::from_rays(&build_peres33::<i64>());
        assert_eq!(g.triples().len(), 16);
        assert_eq!(g.lone_pairs().len(), 24);
        assert_eq!(g.edges().len(), 72);
        assert_eq!(
            g.edges().len(),
            3 * g.triples().len() + g.lone_pairs().len()
        );
    }

    #[test]
    fn bigint_construction_matches_i64() {
        let small = build_peres33::<i64>();
        let big = build_peres33::<BigInt>();
        let converted: Vec<Ray<i64>> = big.rays().iter().map(|r| r.convert().unwrap()).collect();
        assert_eq!(converted, small.rays());
    }

    #[test]
    fn extension_has_40_triples_on_57_rays() {
        let base = build_peres33::<i64>();
        let ext = extended_configuration(&base);
        assert_eq!(ext.base_len, 33);
        assert_eq!(ext.triples.len(), 40);
        assert_eq!(ext.base_triples, 16);
        // every lone pair completes to a ray outside the 33, all different
        assert_eq!(ext.rays.len(), 57);
        for t in &ext.triples {
            let [a, b, c] = t.map(|i| &ext.rays.rays()[i]);
            assert!(a.is_orthogonal(b) && a.is_orthogonal(c) && b.is_orthogonal(c));
        }
    }
}
