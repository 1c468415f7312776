use std::fmt::Write as _;

use crate::exactgeom::OrthGraph;

/// DIMACS encoding of 101-colorability.
///
/// Variable `i + 1` stands for node `i`; a positive literal means the node
/// takes the value 0. Per triple: at least one zero plus pairwise at most one
/// zero. Per lone pair: not both zero. Edges inside triples are already
/// covered by the pairwise clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfDocument {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
    /// Optional per-node annotation written into the header.
    pub labels: Vec<String>,
}

pub fn export_cnf(g: &OrthGraph) -> CnfDocument {
    let var = |v: usize| v as i64 + 1;
    let mut clauses = Vec::with_capacity(4 * g.triples().len() + g.lone_pairs().len());
    for &[a, b, c] in g.triples() {
        clauses.push(vec![var(a), var(b), var(c)]);
        clauses.push(vec![-var(a), -var(b)]);
        clauses.push(vec![-var(a), -var(c)]);
        clauses.push(vec![-var(b), -var(c)]);
    }
    for &(a, b) in g.lone_pairs() {
        clauses.push(vec![-var(a), -var(b)]);
    }
    CnfDocument {
        num_vars: g.node_count(),
        clauses,
        labels: Vec::new(),
    }
}

impl CnfDocument {
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.num_vars);
        self.labels = labels;
        self
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        out.push_str(
            "c 101-colorability; positive literal = value 0, negative literal = value 1\n",
        );
        for v in 0..self.num_vars {
            match self.labels.get(v) {
                Some(l) => {
                    let _ = writeln!(out, "c var {} = node {v} {l}", v + 1);
                }
                None => {
                    let _ = writeln!(out, "c var {} = node {v}", v + 1);
                }
            }
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for lit in c {
                let _ = write!(out, "{lit} ");
            }
            out.push_str("0\n");
        }
        out
    }

    /// Evaluates the formula on a node assignment (values 0/1).
    pub fn satisfied_by(&self, values: &[u8]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&lit| {
                let zero = values[(lit.unsigned_abs() - 1) as usize] == 0;
                if lit > 0 { zero } else { !zero }
            })
        })
    }
}
