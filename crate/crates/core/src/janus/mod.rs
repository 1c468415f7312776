//! Consistency models in which an outside agent fills in measurement outcomes
//! in the order events happen in one chosen frame.
//!
//! [`session`] handles the twinned spin-1 experiment: A measures an
//! orthogonal triple, B a single direction. [`hex`] is the toy universe of
//! hexagonal cells whose spins obey a local parity law.

pub mod hex;
pub mod session;

pub use hex::{Face, FaceRun, FaceTestReport, HexWorld, Move, left_right_face_test};
pub use session::{
    Event, Flag, FrameOrder, NoSignallingReport, SessionPlan, Site, Transcript, load_plans,
    no_signalling_check, possible_outcomes, run_session,
};

use rand::Rng;
use thiserror::Error;

use crate::rng::{SimRng, rng_from_seed};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JanusError {
    #[error("A's directions {0} and {1} are not orthogonal")]
    NotOrthogonal(String, String),
    #[error("scripted choice source exhausted after {0} bits")]
    ScriptExhausted(usize),
    #[error("spins of day {requested} are not readable on day {day}")]
    NotYetReadable { day: usize, requested: usize },
    #[error("experimenter {site} is at cell {actual:?}, not {requested:?}")]
    NotAtHexagon {
        site: Site,
        actual: (usize, i64),
        requested: (usize, i64),
    },
    #[error("experimenter {site} already measured on day {day}")]
    AlreadyMeasured { site: Site, day: usize },
    #[error("{site} cannot move from {from:?} to {to:?}")]
    InvalidMove {
        site: Site,
        from: (usize, i64),
        to: (usize, i64),
    },
    #[error("plans disagree on {0}")]
    MixedPlans(&'static str),
    #[error("malformed plan file: {0}")]
    Malformed(String),
}

/// Where free bits come from.
#[derive(Clone, Debug)]
pub enum ChoiceSource {
    Seeded { seed: u64, rng: SimRng },
    Scripted { bits: Vec<u8>, pos: usize },
}

impl ChoiceSource {
    pub fn seeded(seed: u64) -> Self {
        ChoiceSource::Seeded {
            seed,
            rng: rng_from_seed(seed),
        }
    }

    pub fn scripted(bits: impl Into<Vec<u8>>) -> Self {
        ChoiceSource::Scripted {
            bits: bits.into(),
            pos: 0,
        }
    }

    pub fn next_bit(&mut self) -> Result<u8, JanusError> {
        match self {
            ChoiceSource::Seeded { rng, .. } => Ok(rng.random_range(0..2u8)),
            ChoiceSource::Scripted { bits, pos } => {
                let b = *bits.get(*pos).ok_or(JanusError::ScriptExhausted(*pos))?;
                *pos += 1;
                Ok(b & 1)
            }
        }
    }

    /// A fresh source with the same seed or script, rewound.
    pub fn rewound(&self) -> Self {
        match self {
            ChoiceSource::Seeded { seed, .. } => Self::seeded(*seed),
            ChoiceSource::Scripted { bits, .. } => Self::scripted(bits.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scripted_source_replays_and_exhausts() {
        let mut s = ChoiceSource::scripted(vec![1, 0]);
        assert_eq!(s.next_bit(), Ok(1));
        assert_eq!(s.next_bit(), Ok(0));
        assert_eq!(s.next_bit(), Err(JanusError::ScriptExhausted(2)));
        let mut r = s.rewound();
        assert_eq!(r.next_bit(), Ok(1));
    }

    #[test]
    fn seeded_source_is_deterministic() {
        let mut a = ChoiceSource::seeded(5);
        let mut b = ChoiceSource::seeded(5);
        let xs: Vec<u8> = (0..64).map(|_| a.next_bit().unwrap()).collect();
        let ys: Vec<u8> = (0..64).map(|_| b.next_bit().unwrap()).collect();
        assert_eq!(xs, ys);
        assert!(xs.contains(&0) && xs.contains(&1));
    }
}
