//! Structural match and replay of the short hand proof that the 33-ray
//! configuration has no 101-function.
//!
//! The proof uses nineteen labelled rays:
//!
//! ```text
//! triple X,Y,Z      X → 0, Y → 1, Z → 1      (wlog)
//! pairs  X,A  X,A'  A → 1, A' → 1
//! triple A,B,C      B → 1, C → 0             (wlog; same for A',B',C')
//! pairs  C,D  C',D' D → 1, D' → 1
//! triple Z,D,E      E → 0                    (same for Z,D',E')
//! pairs  E,F  E,G   F → 1, G → 1             (same for E',F',G')
//! triple F,F',U     U → 0
//! triple G,G',V     V → 0
//! pair   U,V        contradiction
//! ```
//!
//! The three "wlog" choices are closed off separately: each alternative case
//! is handed to the exhaustive search and must come back refuted.

use std::fmt::Write as _;

use serde::Serialize;

use super::{Coloring101, ColoringError, Verdict, propagate, search_101_from};
use crate::exactgeom::{OrthGraph, RaySet};
use crate::scalar::ExactInt;

const LABELS: [&str; 19] = [
    "X", "Y", "Z", "A", "A'", "B", "C", "B'", "C'", "D", "D'", "E", "E'", "F", "G", "F'", "G'",
    "U", "V",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum L {
    X,
    Y,
    Z,
    A,
    A1,
    B,
    C,
    B1,
    C1,
    D,
    D1,
    E,
    E1,
    F,
    G,
    F1,
    G1,
    U,
    V,
}

/// One line of the replayed table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub label: String,
    pub node: usize,
    pub value: u8,
    /// `"assumed"` or `"forced"`.
    pub kind: String,
    /// The constraint used, e.g. `"orthogonality of A,B,C"`.
    pub rule: String,
}

/// A case excluded by a "wlog" step, and the search verdict on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Alternative {
    pub description: String,
    pub premises: Vec<(usize, u8)>,
    pub refuted: bool,
    pub leaves: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefutationReport {
    /// `(label, node)` for the nineteen skeleton rays.
    pub labels: Vec<(String, usize)>,
    pub steps: Vec<TraceStep>,
    /// The orthogonal pair that ends up with two zeros.
    pub contradiction: (usize, usize),
    pub alternatives: Vec<Alternative>,
}

/// Finds the skeleton in `g`, replays the table and closes the wlog cases.
///
/// Returns the first match in node order.
pub fn verify_lemma_trace(g: &OrthGraph) -> Result<RefutationReport, ColoringError> {
    let nodes = find_skeleton(g).ok_or(ColoringError::SkeletonNotFound)?;
    let at = |l: L| nodes[l as usize];
    let mut values: Vec<Option<u8>> = vec![None; g.node_count()];
    let mut steps = Vec::new();

    let mut record = |values: &mut Vec<Option<u8>>, l: L, value: u8, kind: &str, rule: String| {
        values[at(l)] = Some(value);
        steps.push(TraceStep {
            label: LABELS[l as usize].to_string(),
            node: at(l),
            value,
            kind: kind.to_string(),
            rule,
        });
    };
    let ortho = |ls: &[L]| {
        let names: Vec<&str> = ls.iter().map(|&l| LABELS[l as usize]).collect();
        format!("orthogonality of {}", names.join(","))
    };

    record(
        &mut values,
        L::X,
        0,
        "assumed",
        ortho(&[L::X, L::Y, L::Z]) + " (wlog)",
    );
    record(&mut values, L::Y, 1, "forced", ortho(&[L::X, L::Y, L::Z]));
    record(&mut values, L::Z, 1, "forced", ortho(&[L::X, L::Y, L::Z]));
    record(&mut values, L::A, 1, "forced", ortho(&[L::X, L::A]));
    record(&mut values, L::A1, 1, "forced", ortho(&[L::X, L::A1]));
    for (a, b, c) in [(L::A, L::B, L::C), (L::A1, L::B1, L::C1)] {
        record(&mut values, b, 1, "assumed", ortho(&[a, b, c]) + " (wlog)");
        record(&mut values, c, 0, "forced", ortho(&[a, b, c]));
    }
    for (c, d) in [(L::C, L::D), (L::C1, L::D1)] {
        record(&mut values, d, 1, "forced", ortho(&[c, d]));
    }
    for (d, e) in [(L::D, L::E), (L::D1, L::E1)] {
        record(&mut values, e, 0, "forced", ortho(&[L::Z, d, e]));
    }
    for (e, f, gg) in [(L::E, L::F, L::G), (L::E1, L::F1, L::G1)] {
        record(&mut values, f, 1, "forced", ortho(&[e, f]));
        record(&mut values, gg, 1, "forced", ortho(&[e, gg]));
    }
    record(&mut values, L::U, 0, "forced", ortho(&[L::F, L::F1, L::U]));
    record(&mut values, L::V, 0, "forced", ortho(&[L::G, L::G1, L::V]));

    // Independent replay: the same constraints, minus the final pair, run
    // through the propagation engine from the three assumptions alone.
    let sub = skeleton_graph(g.node_count(), &nodes, false);
    let premises = [(at(L::X), 0), (at(L::B), 1), (at(L::B1), 1)];
    let seeded = Coloring101::with_assumptions(g.node_count(), &premises)
        .map_err(|c| ColoringError::ReplayMismatch(format!("{c:?}")))?;
    let closed = propagate(seeded, &sub)
        .map_err(|c| ColoringError::ReplayMismatch(format!("premature clash {:?}", c.clash)))?;
    for s in &steps {
        if closed.get(s.node) != Some(s.value) {
            return Err(ColoringError::ReplayMismatch(format!(
                "{} is {:?} under propagation, table says {}",
                s.label,
                closed.get(s.node),
                s.value
            )));
        }
    }
    if closed.assigned_count() != LABELS.len() {
        return Err(ColoringError::ReplayMismatch(
            "propagation reached extra nodes".into(),
        ));
    }
    let (u, v) = (at(L::U), at(L::V));
    if !g.has_edge(u, v) || closed.get(u) != Some(0) || closed.get(v) != Some(0) {
        return Err(ColoringError::ReplayMismatch(
            "final pair is not a 0,0 edge".into(),
        ));
    }

    let cases = [
        ("Y carries the zero of X,Y,Z", vec![(at(L::Y), 0)]),
        ("Z carries the zero of X,Y,Z", vec![(at(L::Z), 0)]),
        ("X → 0 and B → 0", vec![(at(L::X), 0), (at(L::B), 0)]),
        (
            "X → 0, B → 1 and B' → 0",
            vec![(at(L::X), 0), (at(L::B), 1), (at(L::B1), 0)],
        ),
    ];
    let alternatives = cases
        .into_iter()
        .map(|(description, premises)| {
            let r = search_101_from(g, &premises);
            let refuted = r.verdict == Verdict::Unsat
                && r.refutation.as_ref().is_some_and(|rf| rf.replay(g).is_ok());
            Alternative {
                description: description.to_string(),
                leaves: r.refutation.as_ref().map_or(0, |rf| rf.leaves()),
                premises,
                refuted,
            }
        })
        .collect();

    Ok(RefutationReport {
        labels: LABELS
            .iter()
            .zip(nodes.iter())
            .map(|(l, &n)| (l.to_string(), n))
            .collect(),
        steps,
        contradiction: (u.min(v), u.max(v)),
        alternatives,
    })
}

impl RefutationReport {
    /// True when the table closes and every wlog alternative is refuted.
    pub fn is_complete(&self) -> bool {
        self.alternatives.iter().all(|a| a.refuted)
    }

    pub fn label_of(&self, node: usize) -> Option<&str> {
        self.labels
            .iter()
            .find(|(_, n)| *n == node)
            .map(|(l, _)| l.as_str())
    }

    /// Human-readable table; with `rays` the labels are annotated with
    /// coordinates.
    pub fn to_text<T: ExactInt>(&self, rays: Option<&RaySet<T>>) -> String {
        let mut out = String::new();
        out.push_str("labels:\n");
        for (l, n) in &self.labels {
            match rays.and_then(|s| s.get(*n)) {
                Some(r) => {
                    let _ = writeln!(out, "  {l:<2} = node {n:>2} {r}");
                }
                None => {
                    let _ = writeln!(out, "  {l:<2} = node {n:>2}");
                }
            }
        }
        out.push_str("chain:\n");
        for s in &self.steps {
            let _ = writeln!(out, "  {} → {}  [{}] {}", s.label, s.value, s.kind, s.rule);
        }
        let (u, v) = self.contradiction;
        let _ = writeln!(
            out,
            "  {} and {} are orthogonal and both 0: contradiction",
            self.label_of(u).unwrap_or("?"),
            self.label_of(v).unwrap_or("?")
        );
        out.push_str("excluded cases:\n");
        for a in &self.alternatives {
            let status = if a.refuted { "refuted" } else { "NOT refuted" };
            let _ = writeln!(out, "  {}: {status} ({} leaves)", a.description, a.leaves);
        }
        out
    }
}

/// The triples and pairs used by the table, as a stand-alone constraint graph.
fn skeleton_graph(n: usize, nodes: &[usize; 19], with_final_pair: bool) -> OrthGraph {
    let at = |l: L| nodes[l as usize];
    let triples = [
        [at(L::X), at(L::Y), at(L::Z)],
        [at(L::A), at(L::B), at(L::C)],
        [at(L::A1), at(L::B1), at(L::C1)],
        [at(L::Z), at(L::D), at(L::E)],
        [at(L::Z), at(L::D1), at(L::E1)],
        [at(L::F), at(L::F1), at(L::U)],
        [at(L::G), at(L::G1), at(L::V)],
    ];
    let mut pairs = vec![
        (at(L::X), at(L::A)),
        (at(L::X), at(L::A1)),
        (at(L::C), at(L::D)),
        (at(L::C1), at(L::D1)),
        (at(L::E), at(L::F)),
        (at(L::E), at(L::G)),
        (at(L::E1), at(L::F1)),
        (at(L::E1), at(L::G1)),
    ];
    if with_final_pair {
        pairs.push((at(L::U), at(L::V)));
    }
    OrthGraph::from_constraints(n, &pairs, &triples)
}

/// The unique third member of a triple through `a` and `b`, if any.
fn third(g: &OrthGraph, a: usize, b: usize) -> Option<usize> {
    g.triples_of(a).iter().find_map(|&ti| {
        let t = g.triples()[ti];
        if t.contains(&b) {
            t.iter().copied().find(|&v| v != a && v != b)
        } else {
            None
        }
    })
}

fn find_skeleton(g: &OrthGraph) -> Option<[usize; 19]> {
    let mut used: Vec<usize> = Vec::with_capacity(19);
    let fresh = |used: &[usize], v: usize| !used.contains(&v);

    for t in g.triples() {
        for i in 0..3 {
            let x = t[i];
            for (y, z) in [
                (t[(i + 1) % 3], t[(i + 2) % 3]),
                (t[(i + 2) % 3], t[(i + 1) % 3]),
            ] {
                used.clear();
                used.extend([x, y, z]);
                if let Some(found) = extend_from_triple(g, &mut used, &fresh) {
                    return Some(found);
                }
            }
        }
    }
    None
}

/// `used` holds `[X, Y, Z]` on entry; tries every way to complete the labels
/// in the order of [`LABELS`].
fn extend_from_triple(
    g: &OrthGraph,
    used: &mut Vec<usize>,
    fresh: &dyn Fn(&[usize], usize) -> bool,
) -> Option<[usize; 19]> {
    let (x, z) = (used[0], used[2]);
    let base = used.len();
    for &a in g.neighbors(x) {
        if !fresh(used, a) {
            continue;
        }
        for &a1 in g.neighbors(x) {
            if a1 == a || !fresh(used, a1) {
                continue;
            }
            used.truncate(base);
            used.extend([a, a1]);
            for (b, c) in ordered_partners(g, a) {
                if !fresh(used, b) || !fresh(used, c) {
                    continue;
                }
                used.truncate(base + 2);
                used.extend([b, c]);
                for (b1, c1) in ordered_partners(g, a1) {
                    if !fresh(used, b1) || !fresh(used, c1) || b1 == c1 {
                        continue;
                    }
                    used.truncate(base + 4);
                    used.extend([b1, c1]);
                    if let Some(done) = extend_d(g, used, z, c, c1, fresh) {
                        return Some(done);
                    }
                }
            }
        }
    }
    used.truncate(base);
    None
}

fn extend_d(
    g: &OrthGraph,
    used: &mut Vec<usize>,
    z: usize,
    c: usize,
    c1: usize,
    fresh: &dyn Fn(&[usize], usize) -> bool,
) -> Option<[usize; 19]> {
    let base = used.len();
    for &d in g.neighbors(c) {
        if !fresh(used, d) {
            continue;
        }
        for &d1 in g.neighbors(c1) {
            if d1 == d || !fresh(used, d1) {
                continue;
            }
            let (Some(e), Some(e1)) = (third(g, z, d), third(g, z, d1)) else {
                continue;
            };
            if e == e1
                || [d, d1].contains(&e)
                || [d, d1].contains(&e1)
                || !fresh(used, e)
                || !fresh(used, e1)
            {
                continue;
            }
            used.truncate(base);
            used.extend([d, d1, e, e1]);
            if let Some(done) = extend_fg(g, used, e, e1, fresh) {
                return Some(done);
            }
        }
    }
    used.truncate(base);
    None
}

fn extend_fg(
    g: &OrthGraph,
    used: &mut Vec<usize>,
    e: usize,
    e1: usize,
    fresh: &dyn Fn(&[usize], usize) -> bool,
) -> Option<[usize; 19]> {
    let base = used.len();
    let ne: Vec<usize> = g
        .neighbors(e)
        .iter()
        .copied()
        .filter(|&v| fresh(used, v))
        .collect();
    let ne1: Vec<usize> = g
        .neighbors(e1)
        .iter()
        .copied()
        .filter(|&v| fresh(used, v))
        .collect();
    for &f in &ne {
        for &gg in &ne {
            if gg == f {
                continue;
            }
            for &f1 in &ne1 {
                if f1 == f || f1 == gg {
                    continue;
                }
                let Some(u) = third(g, f, f1) else { continue };
                for &g1 in &ne1 {
                    if [f, gg, f1].contains(&g1) {
                        continue;
                    }
                    let Some(v) = third(g, gg, g1) else { continue };
                    let labels = [f, gg, f1, g1, u, v];
                    if u == v
                        || !fresh(used, u)
                        || !fresh(used, v)
                        || [f, gg, f1, g1].contains(&u)
                        || [f, gg, f1, g1].contains(&v)
                    {
                        continue;
                    }
                    if !g.has_edge(u, v) {
                        continue;
                    }
                    used.truncate(base);
                    used.extend(labels);
                    let mut out = [0usize; 19];
                    out.copy_from_slice(used);
                    return Some(out);
                }
            }
        }
    }
    used.truncate(base);
    None
}

/// `(B, C)` for every triple through `a`, in both orders.
fn ordered_partners(g: &OrthGraph, a: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &ti in g.triples_of(a) {
        let t = g.triples()[ti];
        let others: Vec<usize> = t.iter().copied().filter(|&v| v != a).collect();
        out.push((others[0], others[1]));
        out.push((others[1], others[0]));
    }
    out
}
