//! JSON and DOT renderings of ray sets and orthogonality graphs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{GeomError, OrthGraph, Quad2, Ray, RaySet};
use crate::scalar::ExactInt;

/// Serializes as a JSON array of rays, each `[[a, b], [a, b], [a, b]]`
/// meaning `(a + b√2, …)`.
pub fn rayset_to_json<T: ExactInt>(s: &RaySet<T>) -> Result<String, GeomError> {
    let rays: Vec<[[i64; 2]; 3]> = s
        .rays()
        .iter()
        .map(|r| {
            r.to_pairs_i64()
                .ok_or_else(|| GeomError::Malformed(format!("coefficients of {r} exceed i64")))
        })
        .collect::<Result<_, _>>()?;
    serde_json::to_string(&rays).map_err(|e| GeomError::Malformed(e.to_string()))
}

/// Parses the array form written by [`rayset_to_json`]. Every ray must
/// already be canonical and the set must not repeat a direction.
pub fn rayset_from_json<T: ExactInt>(label: &str, json: &str) -> Result<RaySet<T>, GeomError> {
    let raw: Vec<[[i64; 2]; 3]> =
        serde_json::from_str(json).map_err(|e| GeomError::Malformed(e.to_string()))?;
    let conv =
        |k: i64| T::from_i64(k).ok_or_else(|| GeomError::Malformed(format!("coefficient {k}")));
    let mut rays = Vec::with_capacity(raw.len());
    for coords in raw {
        let mut q = Vec::with_capacity(3);
        for [a, b] in coords {
            q.push(Quad2::new(conv(a)?, conv(b)?));
        }
        let [x, y, z]: [Quad2<T>; 3] = q.try_into().expect("three coordinates");
        rays.push(Ray::from_canonical([x, y, z])?);
    }
    RaySet::new(label, rays)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GraphNode {
    pub index: usize,
    pub ray: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct GraphJson {
    pub label: String,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<(usize, usize)>,
    pub triples: Vec<[usize; 3]>,
    pub lone_pairs: Vec<(usize, usize)>,
}

pub fn graph_to_json<T: ExactInt>(s: &RaySet<T>, g: &OrthGraph) -> GraphJson {
    GraphJson {
        label: s.label().to_string(),
        nodes: s
            .rays()
            .iter()
            .enumerate()
            .map(|(index, r)| GraphNode {
                index,
                ray: r.to_string(),
            })
            .collect(),
        edges: g.edges().to_vec(),
        triples: g.triples().to_vec(),
        lone_pairs: g.lone_pairs().to_vec(),
    }
}

/// Undirected DOT graph; one statement per node and per edge. Edges that lie
/// in a triple are solid, lone pairs are dashed.
pub fn graph_to_dot<T: ExactInt>(s: &RaySet<T>, g: &OrthGraph) -> String {
    let mut out = String::new();
    let name: String = s
        .label()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    let _ = writeln!(out, "graph {name} {{");
    for (i, r) in s.rays().iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{i}: {r}\"];");
    }
    let lone: std::collections::BTreeSet<_> = g.lone_pairs().iter().collect();
    for e in g.edges() {
        let style = if lone.contains(e) {
            " [style=dashed]"
        } else {
            ""
        };
        let _ = writeln!(out, "  n{} -- n{}{style};", e.0, e.1);
    }
    out.push_str("}\n");
    out
}
