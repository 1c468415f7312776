//! 101-colorings of orthogonality graphs.
//!
//! A 101-function gives every orthogonal triple the values `1, 0, 1` in some
//! order and never gives both ends of an orthogonal pair the value 0. The
//! identification of `w` with `-w` is structural: nodes are rays.

mod cnf;
mod lemma;
mod propagate;
mod search;
mod violations;

pub use cnf::{CnfDocument, export_cnf};
pub use lemma::{Alternative, RefutationReport, TraceStep, verify_lemma_trace};
pub use propagate::{PickOrder, propagate, propagate_with};
pub use search::{
    Branch, BranchOutcome, OrbitCase, Refutation, SearchResult, SearchStats, Verdict, search_101,
    search_101_from, validate_101,
};
pub use violations::{ViolationCount, count_violations, min_violations};

use serde::Serialize;
use thiserror::Error;

/// Why a value was written into a [`Coloring101`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Reason {
    Assumed,
    /// Index into [`crate::OrthGraph::triples`].
    ForcedByTriple {
        triple: usize,
    },
    ForcedByPair {
        a: usize,
        b: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LogEntry {
    pub node: usize,
    pub value: u8,
    pub reason: Reason,
}

/// The constraint that could not be satisfied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Clash {
    /// Two zeros or three ones on a triple.
    Triple { triple: usize },
    /// Both ends of an edge are 0.
    Pair { a: usize, b: usize },
    /// An assumption contradicts a value already present.
    Node { node: usize },
}

/// Partial assignment `node → {0, 1}` with the log of how it was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring101 {
    assignment: Vec<Option<u8>>,
    log: Vec<LogEntry>,
}

impl Coloring101 {
    pub fn empty(n: usize) -> Self {
        Coloring101 {
            assignment: vec![None; n],
            log: Vec::new(),
        }
    }

    /// Assignment seeded with the given assumptions (not yet propagated).
    pub fn with_assumptions(n: usize, assumptions: &[(usize, u8)]) -> Result<Self, Clash> {
        let mut c = Self::empty(n);
        for &(v, val) in assumptions {
            c.assume(v, val)?;
        }
        Ok(c)
    }

    /// Records an assumption. Re-assuming the same value is a no-op.
    pub fn assume(&mut self, node: usize, value: u8) -> Result<(), Clash> {
        assert!(value <= 1, "values are 0 or 1");
        match self.assignment[node] {
            Some(v) if v == value => Ok(()),
            Some(_) => Err(Clash::Node { node }),
            None => {
                self.set(node, value, Reason::Assumed);
                Ok(())
            }
        }
    }

    pub(crate) fn set(&mut self, node: usize, value: u8, reason: Reason) {
        debug_assert!(self.assignment[node].is_none());
        self.assignment[node] = Some(value);
        self.log.push(LogEntry {
            node,
            value,
            reason,
        });
    }

    pub fn get(&self, node: usize) -> Option<u8> {
        self.assignment[node]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assigned_count(&self) -> usize {
        self.assignment.iter().filter(|v| v.is_some()).count()
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn assignment(&self) -> &[Option<u8>] {
        &self.assignment
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    /// Total assignment, filling gaps with `fill`.
    pub fn to_total(&self, fill: u8) -> Vec<u8> {
        self.assignment.iter().map(|v| v.unwrap_or(fill)).collect()
    }
}

/// Propagation reached a clash; the branch is refuted.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("contradiction at {clash:?}")]
pub struct Contradiction {
    pub clash: Clash,
    /// Log up to and including the entry that triggered the clash.
    pub log: Vec<LogEntry>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("graph does not contain the refutation skeleton")]
    SkeletonNotFound,
    #[error("skeleton replay did not reach the expected contradiction: {0}")]
    ReplayMismatch(String),
}
