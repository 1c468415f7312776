use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{Clash, Coloring101, LogEntry, Reason, propagate};
use crate::exactgeom::{NodePerm, OrthGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Sat,
    Unsat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Search-tree nodes visited, root included.
    pub branches: u64,
    /// Values written by propagation (assumptions excluded).
    pub propagations: u64,
    pub max_depth: u32,
}

/// One case of a symmetry-reduced split: the zero of the chosen triple sits at
/// `member`, and `perm` (an automorphism) carries it to `representative`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCase {
    pub member: usize,
    pub representative: usize,
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BranchOutcome {
    Conflict {
        clash: Clash,
    },
    /// `children[0]` assumes `node → 0`, `children[1]` assumes `node → 1`.
    Split {
        node: usize,
        children: Vec<Branch>,
    },
    /// Root-only split on which member of `triple` is 0, reduced to one child
    /// per distinct representative (child `i` assumes `representatives[i] → 0`).
    Orbit {
        triple: usize,
        cases: Vec<OrbitCase>,
        representatives: Vec<usize>,
        children: Vec<Branch>,
    },
}

/// Node of the refutation tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub assumption: Option<(usize, u8)>,
    /// Values forced by propagation right after the assumption.
    pub forced: Vec<LogEntry>,
    pub outcome: BranchOutcome,
}

/// Decision tree in which every leaf propagates to a clash.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    /// Assumptions in force at the root (empty for a plain search).
    pub premises: Vec<(usize, u8)>,
    pub root: Branch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub verdict: Verdict,
    pub witness: Option<Vec<u8>>,
    pub refutation: Option<Refutation>,
    pub stats: SearchStats,
}

/// Complete backtracking search for a 101-function on `g`.
///
/// Branches on the unassigned node with the most assigned neighbours (ties to
/// the lowest index), trying 0 before 1, and propagates after every decision.
/// With `symmetries`, the first decision is replaced by a split on which
/// member of a triple carries the 0, keeping one case per image under the
/// listed automorphisms. Isolated nodes take the value 1.
pub fn search_101(g: &OrthGraph, symmetries: Option<&[NodePerm]>) -> SearchResult {
    run(g, &[], symmetries)
}

/// Search restricted to colorings extending `premises`.
pub fn search_101_from(g: &OrthGraph, premises: &[(usize, u8)]) -> SearchResult {
    run(g, premises, None)
}

fn run(g: &OrthGraph, premises: &[(usize, u8)], symmetries: Option<&[NodePerm]>) -> SearchResult {
    let mut stats = SearchStats::default();
    let mut solver = Solver {
        g,
        stats: &mut stats,
    };
    let outcome = match Coloring101::with_assumptions(g.node_count(), premises) {
        Err(clash) => Err(Branch {
            assumption: None,
            forced: Vec::new(),
            outcome: BranchOutcome::Conflict { clash },
        }),
        Ok(start) => match symmetries {
            Some(perms) if premises.is_empty() && !g.triples().is_empty() => {
                solver.orbit_root(start, perms)
            }
            _ => solver.dfs(start, None, 0),
        },
    };
    match outcome {
        Ok(witness) => {
            debug_assert!(validate_101(g, &witness).is_ok());
            SearchResult {
                verdict: Verdict::Sat,
                witness: Some(witness),
                refutation: None,
                stats,
            }
        }
        Err(root) => SearchResult {
            verdict: Verdict::Unsat,
            witness: None,
            refutation: Some(Refutation {
                premises: premises.to_vec(),
                root,
            }),
            stats,
        },
    }
}

struct Solver<'a> {
    g: &'a OrthGraph,
    stats: &'a mut SearchStats,
}

impl Solver<'_> {
    fn dfs(
        &mut self,
        state: Coloring101,
        assumption: Option<(usize, u8)>,
        depth: u32,
    ) -> Result<Vec<u8>, Branch> {
        self.stats.branches += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let before = state.log().len();
        let state = match propagate(state, self.g) {
            Ok(s) => s,
            Err(c) => {
                self.stats.propagations += (c.log.len() - before) as u64;
                return Err(Branch {
                    assumption,
                    forced: c.log[before..].to_vec(),
                    outcome: BranchOutcome::Conflict { clash: c.clash },
                });
            }
        };
        self.stats.propagations += (state.log().len() - before) as u64;
        let forced = state.log()[before..].to_vec();

        let Some(node) = self.pick(&state) else {
            return Ok(state.to_total(1));
        };
        let mut children = Vec::with_capacity(2);
        for value in [0u8, 1] {
            let mut next = state.clone();
            next.assume(node, value).expect("branch node is unassigned");
            match self.dfs(next, Some((node, value)), depth + 1) {
                Ok(w) => return Ok(w),
                Err(b) => children.push(b),
            }
        }
        Err(Branch {
            assumption,
            forced,
            outcome: BranchOutcome::Split { node, children },
        })
    }

    fn orbit_root(&mut self, state: Coloring101, perms: &[NodePerm]) -> Result<Vec<u8>, Branch> {
        self.stats.branches += 1;
        let g = self.g;
        // per triple: for each member, its smallest image under the listed perms
        let plan = |t: &[usize; 3]| -> Vec<OrbitCase> {
            t.iter()
                .map(|&m| {
                    let p = perms
                        .iter()
                        .filter(|p| p.is_automorphism(g))
                        .min_by_key(|p| p.image(m))
                        .cloned()
                        .unwrap_or_else(|| NodePerm::identity(g.node_count()));
                    OrbitCase {
                        member: m,
                        representative: p.image(m),
                        perm: p.0,
                    }
                })
                .collect()
        };
        let distinct = |cases: &[OrbitCase]| -> Vec<usize> {
            let set: BTreeSet<usize> = cases.iter().map(|c| c.representative).collect();
            set.into_iter().collect()
        };
        let (triple, cases) = g
            .triples()
            .iter()
            .enumerate()
            .map(|(i, t)| (i, plan(t)))
            .min_by_key(|(i, cases)| (distinct(cases).len(), *i))
            .expect("graph has a triple");
        let representatives = distinct(&cases);

        let mut children = Vec::new();
        for &r in &representatives {
            let mut next = state.clone();
            next.assume(r, 0).expect("root is empty");
            match self.dfs(next, Some((r, 0)), 1) {
                Ok(w) => return Ok(w),
                Err(b) => children.push(b),
            }
        }
        Err(Branch {
            assumption: None,
            forced: Vec::new(),
            outcome: BranchOutcome::Orbit {
                triple,
                cases,
                representatives,
                children,
            },
        })
    }

    fn pick(&self, state: &Coloring101) -> Option<usize> {
        let g = self.g;
        (0..g.node_count())
            .filter(|&v| state.get(v).is_none() && !g.is_isolated(v))
            .map(|v| {
                let assigned = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| state.get(u).is_some())
                    .count();
                (v, assigned)
            })
            // max by count, ties to the lowest index
            .fold(None, |best: Option<(usize, usize)>, cur| match best {
                Some(b) if b.1 >= cur.1 => Some(b),
                _ => Some(cur),
            })
            .map(|(v, _)| v)
    }
}

/// Checks a total assignment against every triple and edge of `g`.
///
/// Deliberately independent of the propagation code.
pub fn validate_101(g: &OrthGraph, values: &[u8]) -> Result<(), Clash> {
    assert_eq!(values.len(), g.node_count());
    for (ti, t) in g.triples().iter().enumerate() {
        let sum: u32 = t.iter().map(|&v| values[v] as u32).sum();
        if sum != 2 {
            return Err(Clash::Triple { triple: ti });
        }
    }
    for &(a, b) in g.edges() {
        if values[a] == 0 && values[b] == 0 {
            return Err(Clash::Pair { a, b });
        }
    }
    if let Some(node) = values.iter().position(|&v| v > 1) {
        return Err(Clash::Node { node });
    }
    Ok(())
}

impl Refutation {
    /// Re-derives every branch with a fresh propagation run and checks that
    /// the recorded forced values, split coverage and leaf clashes all hold.
    pub fn replay(&self, g: &OrthGraph) -> Result<(), String> {
        let start = Coloring101::with_assumptions(g.node_count(), &self.premises)
            .map_err(|c| format!("premises clash: {c:?}"))?;
        replay_branch(g, start, &self.root, true)
    }

    /// Number of leaves (refuted cases).
    pub fn leaves(&self) -> usize {
        fn count(b: &Branch) -> usize {
            match &b.outcome {
                BranchOutcome::Conflict { .. } => 1,
                BranchOutcome::Split { children, .. } | BranchOutcome::Orbit { children, .. } => {
                    children.iter().map(count).sum()
                }
            }
        }
        count(&self.root)
    }
}

fn replay_branch(
    g: &OrthGraph,
    mut state: Coloring101,
    b: &Branch,
    at_root: bool,
) -> Result<(), String> {
    if let Some((v, val)) = b.assumption {
        state
            .assume(v, val)
            .map_err(|_| format!("assumption {v}→{val} conflicts with its parent"))?;
    }
    let before = state.log().len();
    let as_set = |entries: &[LogEntry]| -> BTreeMap<usize, u8> {
        entries
            .iter()
            .filter(|e| e.reason != Reason::Assumed)
            .map(|e| (e.node, e.value))
            .collect()
    };
    let recorded = as_set(&b.forced);
    match (&b.outcome, propagate(state, g)) {
        (BranchOutcome::Conflict { .. }, Err(_)) => Ok(()),
        (BranchOutcome::Conflict { clash }, Ok(_)) => Err(format!(
            "leaf {:?} claims {clash:?} but propagation is consistent",
            b.assumption
        )),
        (_, Err(c)) => Err(format!("inner branch {:?} hit {:?}", b.assumption, c.clash)),
        (BranchOutcome::Split { node, children }, Ok(s)) => {
            if as_set(&s.log()[before..]) != recorded {
                return Err(format!("forced values differ below {:?}", b.assumption));
            }
            if s.get(*node).is_some() {
                return Err(format!("split on already assigned node {node}"));
            }
            let values: Vec<Option<(usize, u8)>> = children.iter().map(|c| c.assumption).collect();
            if values != [Some((*node, 0)), Some((*node, 1))] {
                return Err(format!("split on {node} does not cover both values"));
            }
            children
                .iter()
                .try_for_each(|c| replay_branch(g, s.clone(), c, false))
        }
        (
            BranchOutcome::Orbit {
                triple,
                cases,
                representatives,
                children,
            },
            Ok(s),
        ) => {
            if !at_root || s.assigned_count() != 0 {
                return Err("symmetry split away from an empty root".into());
            }
            let t = g
                .triples()
                .get(*triple)
                .ok_or_else(|| format!("unknown triple {triple}"))?;
            for m in t {
                let case = cases
                    .iter()
                    .find(|c| c.member == *m)
                    .ok_or_else(|| format!("member {m} of triple {triple} has no case"))?;
                let p = NodePerm(case.perm.clone());
                if !p.is_automorphism(g) || p.image(*m) != case.representative {
                    return Err(format!(
                        "case for member {m} is not justified by an automorphism"
                    ));
                }
                if !representatives.contains(&case.representative) {
                    return Err(format!(
                        "representative {} has no branch",
                        case.representative
                    ));
                }
            }
            let assumed: Vec<Option<(usize, u8)>> = children.iter().map(|c| c.assumption).collect();
            let expected: Vec<Option<(usize, u8)>> =
                representatives.iter().map(|&r| Some((r, 0))).collect();
            if assumed != expected {
                return Err("orbit children do not match representatives".into());
            }
            children
                .iter()
                .try_for_each(|c| replay_branch(g, s.clone(), c, false))
        }
    }
}
