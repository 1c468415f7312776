//! The twinned spin-1 experiment filled in event by event.
//!
//! Free bits are drawn from the [`ChoiceSource`] one per free outcome, in
//! event order: A's three directions in the order given, B's direction before
//! or after them according to [`FrameOrder`]. A transcript records the bits
//! actually drawn, so a scripted source with those bits replays it exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ChoiceSource, JanusError};
use crate::exactgeom::Ray;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Site {
    A,
    B,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Site::A => "A",
            Site::B => "B",
        })
    }
}

/// Which of the two spacelike measurement events comes first in the frame
/// the filler works in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameOrder {
    AFirst,
    BFirst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionPlan {
    a: [Ray; 3],
    b: Ray,
    order: FrameOrder,
}

impl SessionPlan {
    pub fn new(a: [Ray; 3], b: Ray, order: FrameOrder) -> Result<Self, JanusError> {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if !a[i].is_orthogonal(&a[j]) {
                return Err(JanusError::NotOrthogonal(
                    a[i].to_string(),
                    a[j].to_string(),
                ));
            }
        }
        Ok(Self { a, b, order })
    }

    pub fn a_triple(&self) -> &[Ray; 3] {
        &self.a
    }

    pub fn b_direction(&self) -> &Ray {
        &self.b
    }

    pub fn order(&self) -> FrameOrder {
        self.order
    }

    pub fn with_order(&self, order: FrameOrder) -> Self {
        Self {
            order,
            ..self.clone()
        }
    }

    /// Position of B's direction in A's triple, if it is one of them.
    pub fn shared_slot(&self) -> Option<usize> {
        self.a.iter().position(|r| r.is_parallel(&self.b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    Free,
    Forced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Event {
    pub site: Site,
    /// Position within A's triple; 0 for B.
    pub slot: usize,
    pub direction: [[i64; 2]; 3],
    pub outcome: u8,
    pub flag: Flag,
    /// `"twin"`, `"spin-zero"` or `"spin-two-ones"` for forced bits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub events: Vec<Event>,
    /// The bits drawn from the choice source, in order.
    pub free_bits: Vec<u8>,
    shared: Option<usize>,
}

impl Transcript {
    pub fn a_outcomes(&self) -> [u8; 3] {
        let mut out = [0u8; 3];
        for e in self.events.iter().filter(|e| e.site == Site::A) {
            out[e.slot] = e.outcome;
        }
        out
    }

    pub fn b_outcome(&self) -> u8 {
        self.events
            .iter()
            .find(|e| e.site == Site::B)
            .expect("B event")
            .outcome
    }

    /// `(j, k, l, m)`.
    pub fn outcome_tuple(&self) -> [u8; 4] {
        let [j, k, l] = self.a_outcomes();
        [j, k, l, self.b_outcome()]
    }

    pub fn satisfies_spin(&self) -> bool {
        self.a_outcomes().iter().sum::<u8>() == 2
    }

    pub fn satisfies_twin(&self) -> bool {
        self.shared
            .is_none_or(|s| self.a_outcomes()[s] == self.b_outcome())
    }

    /// One JSON object per event.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("event serializes"));
            out.push('\n');
        }
        out
    }
}

fn pairs(r: &Ray) -> [[i64; 2]; 3] {
    r.to_pairs_i64().expect("i64 ray")
}

pub fn run_session(plan: &SessionPlan, src: &mut ChoiceSource) -> Result<Transcript, JanusError> {
    let shared = plan.shared_slot();
    let mut a_vals: [Option<u8>; 3] = [None; 3];
    let mut b_val: Option<u8> = None;
    let mut events = Vec::with_capacity(4);
    let mut free_bits = Vec::new();

    let mut draw = |free_bits: &mut Vec<u8>| -> Result<u8, JanusError> {
        let b = src.next_bit()?;
        free_bits.push(b);
        Ok(b)
    };

    let sequence: [Site; 4] = match plan.order {
        FrameOrder::AFirst => [Site::A, Site::A, Site::A, Site::B],
        FrameOrder::BFirst => [Site::B, Site::A, Site::A, Site::A],
    };
    let mut next_slot = 0;
    for site in sequence {
        let (slot, forced): (usize, Option<(u8, &'static str)>) = match site {
            Site::A => {
                let i = next_slot;
                next_slot += 1;
                let twin = (shared == Some(i)).then_some(b_val).flatten();
                let forced = match twin {
                    Some(v) => Some((v, "twin")),
                    None => {
                        // what is already fixed about the rest of the triple,
                        // directly or through B's equal direction
                        let others: Vec<u8> = (0..3)
                            .filter(|&s| s != i)
                            .filter_map(|s| {
                                a_vals[s].or(if shared == Some(s) { b_val } else { None })
                            })
                            .collect();
                        if others.contains(&0) {
                            Some((1, "spin-zero"))
                        } else if others.iter().filter(|&&v| v == 1).count() == 2 {
                            Some((0, "spin-two-ones"))
                        } else {
                            None
                        }
                    }
                };
                (i, forced)
            }
            Site::B => (0, shared.and_then(|s| a_vals[s]).map(|v| (v, "twin"))),
        };
        let (outcome, flag, rule) = match forced {
            Some((v, rule)) => (v, Flag::Forced, Some(rule)),
            None => (draw(&mut free_bits)?, Flag::Free, None),
        };
        let direction = match site {
            Site::A => {
                a_vals[slot] = Some(outcome);
                pairs(&plan.a[slot])
            }
            Site::B => {
                b_val = Some(outcome);
                pairs(&plan.b)
            }
        };
        events.push(Event {
            site,
            slot,
            direction,
            outcome,
            flag,
            rule,
        });
    }
    Ok(Transcript {
        events,
        free_bits,
        shared,
    })
}

/// Outcome tuples over every assignment of free bits, with multiplicities out
/// of 8 (three bits always suffice; unused bits just repeat a transcript).
fn outcome_counts(plan: &SessionPlan) -> BTreeMap<[u8; 4], u32> {
    let mut counts = BTreeMap::new();
    for script in 0..8u8 {
        let bits = [script & 1, script >> 1 & 1, script >> 2 & 1];
        let t = run_session(plan, &mut ChoiceSource::scripted(bits)).expect("three bits suffice");
        *counts.entry(t.outcome_tuple()).or_insert(0) += 1;
    }
    counts
}

/// Every `(j, k, l, m)` the filler can produce for `plan`.
pub fn possible_outcomes(plan: &SessionPlan) -> BTreeSet<[u8; 4]> {
    outcome_counts(plan).into_keys().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoSignallingReport {
    /// Per plan, `[#(m = 0), #(m = 1)]` out of `denominator` equally likely
    /// free-bit assignments.
    pub b_counts: Vec<[u32; 2]>,
    pub denominator: u32,
    /// Largest total-variation distance between two plans, as a numerator
    /// over `denominator`.
    pub max_tv_numerator: u32,
    pub max_tv: f64,
    pub passes: bool,
}

/// Exact comparison of B's outcome distribution across plans that differ
/// only in A's triple.
pub fn no_signalling_check(plans: &[SessionPlan]) -> Result<NoSignallingReport, JanusError> {
    let Some(first) = plans.first() else {
        return Err(JanusError::MixedPlans("nothing: no plans given"));
    };
    if plans.iter().any(|p| !p.b.is_parallel(&first.b)) {
        return Err(JanusError::MixedPlans("B's direction"));
    }
    if plans.iter().any(|p| p.order != first.order) {
        return Err(JanusError::MixedPlans("frame order"));
    }
    let b_counts: Vec<[u32; 2]> = plans
        .iter()
        .map(|p| {
            let mut c = [0u32; 2];
            for (t, n) in outcome_counts(p) {
                c[t[3] as usize] += n;
            }
            c
        })
        .collect();
    // for two outcomes the TV distance is |p0 - q0|
    let max_tv_numerator = b_counts
        .iter()
        .flat_map(|a| b_counts.iter().map(move |b| a[0].abs_diff(b[0])))
        .max()
        .unwrap_or(0);
    Ok(NoSignallingReport {
        b_counts,
        denominator: 8,
        max_tv_numerator,
        max_tv: max_tv_numerator as f64 / 8.0,
        passes: max_tv_numerator == 0,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanJson {
    a: [[[i64; 2]; 3]; 3],
    b: [[i64; 2]; 3],
    order: FrameOrder,
}

/// Reads a JSON array of `{"a": [ray, ray, ray], "b": ray, "order":
/// "a-first" | "b-first"}` with rays as `[[a, b], [a, b], [a, b]]`.
pub fn load_plans(json: &str) -> Result<Vec<SessionPlan>, JanusError> {
    let raw: Vec<PlanJson> =
        serde_json::from_str(json).map_err(|e| JanusError::Malformed(e.to_string()))?;
    let ray = |p: [[i64; 2]; 3]| {
        Ray::from_pairs(p.map(|[a, b]| (a, b))).map_err(|e| JanusError::Malformed(e.to_string()))
    };
    raw.into_iter()
        .map(|p| {
            let a = [ray(p.a[0])?, ray(p.a[1])?, ray(p.a[2])?];
            SessionPlan::new(a, ray(p.b)?, p.order)
        })
        .collect()
}
