//! Exact ray configurations over `Z[√2]` and their orthogonality structure.
//!
//! Nothing in this module touches floating point: orthogonality, parallelism
//! and signs are decided with integer arithmetic only.

mod graph;
mod io;
mod peres;
mod quad2;
mod ray;
mod symmetry;

pub use graph::OrthGraph;
pub use io::{GraphJson, graph_to_dot, graph_to_json, rayset_from_json, rayset_to_json};
pub use peres::{ExtendedConfig, build_peres33, extended_configuration};
pub use quad2::Quad2;
pub use ray::{Ray, complete_pair};
pub use symmetry::{NodePerm, SignedPerm, automorphisms, orbits};

use thiserror::Error;

use crate::scalar::ExactInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("rays {0} and {1} are not orthogonal")]
    NotOrthogonal(String, String),
    #[error("ray coordinates are not in canonical form (canonical: {0})")]
    NotCanonical(String),
    #[error("duplicate ray {0}")]
    Duplicate(String),
    #[error("malformed ray set: {0}")]
    Malformed(String),
}

/// Ordered list of distinct canonical rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySet<T = i64> {
    rays: Vec<Ray<T>>,
    label: String,
}

impl<T: ExactInt> RaySet<T> {
    /// Fails on duplicates, including rays that are mere unit multiples of
    /// each other (checked by parallelism, not by canonical coordinates).
    pub fn new(label: impl Into<String>, rays: Vec<Ray<T>>) -> Result<Self, GeomError> {
        for (i, r) in rays.iter().enumerate() {
            if rays[..i].iter().any(|s| s.is_parallel(r)) {
                return Err(GeomError::Duplicate(r.to_string()));
            }
        }
        Ok(RaySet {
            rays,
            label: label.into(),
        })
    }

    /// Like [`RaySet::new`] but silently drops repeats, keeping first occurrences.
    pub fn dedup(label: impl Into<String>, rays: impl IntoIterator<Item = Ray<T>>) -> Self {
        let mut out: Vec<Ray<T>> = Vec::new();
        for r in rays {
            if !out.iter().any(|s| s.is_parallel(&r)) {
                out.push(r);
            }
        }
        RaySet {
            rays: out,
            label: label.into(),
        }
    }

    pub fn rays(&self) -> &[Ray<T>] {
        &self.rays
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Ray<T>> {
        self.rays.get(i)
    }

    pub fn index_of(&self, r: &Ray<T>) -> Option<usize> {
        self.rays.iter().position(|s| s == r)
    }

    pub fn contains(&self, r: &Ray<T>) -> bool {
        self.index_of(r).is_some()
    }

    /// Same rays sorted in the coefficient-lexicographic order.
    pub fn sorted(mut self) -> Self {
        self.rays.sort();
        self
    }

    /// Sub-configuration keeping the listed indices, in the given order.
    pub fn subset(&self, keep: &[usize], label: impl Into<String>) -> Self {
        RaySet {
            rays: keep.iter().map(|&i| self.rays[i].clone()).collect(),
            label: label.into(),
        }
    }

    pub fn orthogonality_graph(&self) -> OrthGraph {
        OrthGraph::from_rays(self)
    }
}

/// Orthogonality structure of `s`.
pub fn orthogonality_graph<T: ExactInt>(s: &RaySet<T>) -> OrthGraph {
    OrthGraph::from_rays(s)
}
