use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use super::{GeomError, Quad2};
use crate::scalar::ExactInt;

/// Projective direction in `Z[√2]³`, stored in canonical form.
///
/// Canonical form: the coordinates have no common factor among the rational
/// integers or `√2`, and the first non-zero coordinate is positive. `v` and
/// `-v` therefore give the same `Ray`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ray<T = i64> {
    coords: [Quad2<T>; 3],
}

impl<T: ExactInt> Ray<T> {
    /// Reduces `(x, y, z)` to its canonical representative.
    pub fn canonicalize(x: Quad2<T>, y: Quad2<T>, z: Quad2<T>) -> Result<Self, GeomError> {
        let mut c = [x, y, z];
        if c.iter().all(Quad2::is_zero) {
            return Err(GeomError::ZeroVector);
        }
        loop {
            let g = c.iter().fold(T::zero(), |g, q| g.gcd(&q.a).gcd(&q.b));
            if !g.is_one() {
                for q in c.iter_mut() {
                    *q = q.div_int(&g);
                }
            }
            if c.iter().all(Quad2::divisible_by_sqrt2) {
                for q in c.iter_mut() {
                    *q = q.div_sqrt2();
                }
                continue;
            }
            break;
        }
        let leading = c.iter().find(|q| !q.is_zero()).expect("nonzero vector");
        if leading.is_negative() {
            for q in c.iter_mut() {
                *q = -q.clone();
            }
        }
        Ok(Ray { coords: c })
    }

    /// Builds a ray from integer coordinate triples `[a, b]` meaning `a + b√2`.
    pub fn from_pairs(pairs: [(T, T); 3]) -> Result<Self, GeomError> {
        let [(xa, xb), (ya, yb), (za, zb)] = pairs;
        Self::canonicalize(Quad2::new(xa, xb), Quad2::new(ya, yb), Quad2::new(za, zb))
    }

    /// Accepts coordinates only if they are already canonical.
    pub fn from_canonical(coords: [Quad2<T>; 3]) -> Result<Self, GeomError> {
        let [x, y, z] = coords.clone();
        let r = Self::canonicalize(x, y, z)?;
        if r.coords != coords {
            return Err(GeomError::NotCanonical(r.to_string()));
        }
        Ok(r)
    }

    pub fn coords(&self) -> &[Quad2<T>; 3] {
        &self.coords
    }

    pub fn x(&self) -> &Quad2<T> {
        &self.coords[0]
    }

    pub fn y(&self) -> &Quad2<T> {
        &self.coords[1]
    }

    pub fn z(&self) -> &Quad2<T> {
        &self.coords[2]
    }

    /// Exact inner product of the canonical representatives.
    pub fn dot(&self, other: &Self) -> Quad2<T> {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .fold(Quad2::zero(), |acc, (u, v)| &acc + &(u * v))
    }

    pub fn is_orthogonal(&self, other: &Self) -> bool {
        self.dot(other).is_zero()
    }

    /// Cross product of the representatives (not canonicalized).
    pub fn cross(&self, other: &Self) -> [Quad2<T>; 3] {
        let [a1, a2, a3] = &self.coords;
        let [b1, b2, b3] = &other.coords;
        [
            &(a2 * b3) - &(a3 * b2),
            &(a3 * b1) - &(a1 * b3),
            &(a1 * b2) - &(a2 * b1),
        ]
    }

    /// Same projective point, tested by a vanishing cross product.
    pub fn is_parallel(&self, other: &Self) -> bool {
        self.cross(other).iter().all(Quad2::is_zero)
    }

    /// Unit vector in `f64`, for handing directions to the numeric code.
    pub fn to_unit_f64(&self) -> [f64; 3] {
        let v = self.coords.each_ref().map(Quad2::to_f64);
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|c| c / n)
    }

    /// Coordinates as `[a, b]` pairs in `i64`, if they fit.
    pub fn to_pairs_i64(&self) -> Option<[[i64; 2]; 3]> {
        let mut out = [[0i64; 2]; 3];
        for (slot, q) in out.iter_mut().zip(self.coords.iter()) {
            *slot = [q.a.to_i64()?, q.b.to_i64()?];
        }
        Some(out)
    }

    pub fn convert<U: ExactInt>(&self) -> Option<Ray<U>> {
        let [x, y, z] = &self.coords;
        Some(Ray {
            coords: [x.convert()?, y.convert()?, z.convert()?],
        })
    }
}

/// Returns the canonical ray orthogonal to both inputs.
pub fn complete_pair<T: ExactInt>(r1: &Ray<T>, r2: &Ray<T>) -> Result<Ray<T>, GeomError> {
    if !r1.is_orthogonal(r2) {
        return Err(GeomError::NotOrthogonal(r1.to_string(), r2.to_string()));
    }
    let [x, y, z] = r1.cross(r2);
    Ray::canonicalize(x, y, z)
}

impl<T: ExactInt> Ord for Ray<T> {
    /// Lexicographic on the `(a, b)` coefficient pairs of `x`, `y`, `z`.
    fn cmp(&self, other: &Self) -> Ordering {
        for (u, v) in self.coords.iter().zip(other.coords.iter()) {
            let o = u.a.cmp(&v.a).then_with(|| u.b.cmp(&v.b));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

impl<T: ExactInt> PartialOrd for Ray<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: ExactInt> fmt::Display for Ray<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.coords;
        write!(f, "({x}, {y}, {z})")
    }
}
