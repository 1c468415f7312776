//! A universe of hexagonal cells, one row per day, whose spins obey a local
//! parity law: a cell and the two cells abutting it from above have an even
//! spin sum.
//!
//! Cells are addressed two ways. Offset coordinates `(row, col)` use odd-row
//! offset: row `r` sits half a cell to the right when `r` is odd, and the two
//! cells above `(r, c)` are `(r+1, c-1), (r+1, c)` for even `r` and
//! `(r+1, c), (r+1, c+1)` for odd `r`. Internally a cell of day `t` reachable
//! from the origin is indexed by `k ∈ 0..=t`, the number of up-right moves,
//! so `col = k - ceil(t/2)`.
//!
//! Rows are filled lazily. The first measurement of a day fills every row up
//! to that day: an earlier row nobody measured gets a free bit at `k = 0`, the
//! current row gets a free bit at the measuring experimenter's cell. Each
//! free bit determines the rest of its row through the parity law.

use bitvec::vec::BitVec;
use serde::Serialize;

use super::{ChoiceSource, JanusError, Site};
use crate::rng::{derive_seed, stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    UpperLeft,
    UpperRight,
}

#[derive(Clone, Debug)]
pub struct HexWorld {
    day: usize,
    rows: Vec<Option<BitVec>>,
    /// Light-cone index of A and B.
    pos: [usize; 2],
    measured: [bool; 2],
    src: ChoiceSource,
}

fn site_index(s: Site) -> usize {
    match s {
        Site::A => 0,
        Site::B => 1,
    }
}

/// Offset column of light-cone cell `k` on day `t`.
pub fn offset_col(t: usize, k: usize) -> i64 {
    k as i64 - t.div_ceil(2) as i64
}

/// Horizontal position in cell widths.
pub fn horizontal(t: usize, k: usize) -> f64 {
    offset_col(t, k) as f64 + if t % 2 == 1 { 0.5 } else { 0.0 }
}

/// The two cells abutting `(row, col)` from above, left first.
pub fn abutting_above(row: usize, col: i64) -> [(usize, i64); 2] {
    if row.is_multiple_of(2) {
        [(row + 1, col - 1), (row + 1, col)]
    } else {
        [(row + 1, col), (row + 1, col + 1)]
    }
}

impl HexWorld {
    /// Both experimenters start at the single cell of day 0.
    pub fn new(src: ChoiceSource) -> Self {
        Self {
            day: 0,
            rows: vec![None],
            pos: [0, 0],
            measured: [false, false],
            src,
        }
    }

    pub fn day(&self) -> usize {
        self.day
    }

    /// `(row, col)` of an experimenter.
    pub fn position(&self, site: Site) -> (usize, i64) {
        (self.day, offset_col(self.day, self.pos[site_index(site)]))
    }

    pub fn light_cone_index(&self, site: Site) -> usize {
        self.pos[site_index(site)]
    }

    /// Advances one day moving both experimenters.
    pub fn step(&mut self, moves: [Move; 2]) {
        for (p, m) in self.pos.iter_mut().zip(moves) {
            if m == Move::UpperRight {
                *p += 1;
            }
        }
        self.day += 1;
        self.rows.push(None);
        self.measured = [false, false];
    }

    /// Advances one day to explicit offset-coordinate targets.
    pub fn step_to(&mut self, targets: [(usize, i64); 2]) -> Result<(), JanusError> {
        let mut moves = [Move::UpperLeft; 2];
        for (i, (site, to)) in [Site::A, Site::B].into_iter().zip(targets).enumerate() {
            let from = self.position(site);
            let [left, right] = abutting_above(from.0, from.1);
            moves[i] = if to == left {
                Move::UpperLeft
            } else if to == right {
                Move::UpperRight
            } else {
                return Err(JanusError::InvalidMove { site, from, to });
            };
        }
        self.step(moves);
        Ok(())
    }

    fn fill_row(&mut self, t: usize, anchor: usize) -> Result<(), JanusError> {
        let free = self.src.next_bit()? == 1;
        let mut row = BitVec::repeat(false, t + 1);
        row.set(anchor, free);
        if t > 0 {
            let prev = self.rows[t - 1].as_ref().expect("rows fill in order");
            for k in anchor + 1..=t {
                let v = prev[k - 1] ^ row[k - 1];
                row.set(k, v);
            }
            for k in (0..anchor).rev() {
                let v = prev[k] ^ row[k + 1];
                row.set(k, v);
            }
        }
        self.rows[t] = Some(row);
        Ok(())
    }

    /// The spin at the experimenter's current cell. The first measurement of
    /// a day draws the free bit; later ones read the filled row.
    pub fn measure(&mut self, site: Site) -> Result<u8, JanusError> {
        let i = site_index(site);
        if self.measured[i] {
            return Err(JanusError::AlreadyMeasured {
                site,
                day: self.day,
            });
        }
        for t in 0..=self.day {
            if self.rows[t].is_none() {
                let anchor = if t == self.day { self.pos[i] } else { 0 };
                self.fill_row(t, anchor)?;
            }
        }
        self.measured[i] = true;
        Ok(self.rows[self.day].as_ref().expect("filled")[self.pos[i]] as u8)
    }

    /// Like [`HexWorld::measure`], but checks that the experimenter is at
    /// `cell` first.
    pub fn measure_at(&mut self, site: Site, cell: (usize, i64)) -> Result<u8, JanusError> {
        let actual = self.position(site);
        if actual != cell {
            return Err(JanusError::NotAtHexagon {
                site,
                actual,
                requested: cell,
            });
        }
        self.measure(site)
    }

    /// Reads a filled cell. Later days are never readable.
    pub fn read(&self, t: usize, k: usize) -> Result<u8, JanusError> {
        let not_yet = JanusError::NotYetReadable {
            day: self.day,
            requested: t,
        };
        if t > self.day || k > t {
            return Err(not_yet);
        }
        self.rows[t].as_ref().map(|r| r[k] as u8).ok_or(not_yet)
    }

    pub fn row(&self, t: usize) -> Option<&BitVec> {
        self.rows.get(t).and_then(Option::as_ref)
    }

    /// Number of (cell, two cells above) configurations with odd sum among
    /// consecutive filled rows.
    pub fn parity_violations(&self) -> usize {
        let mut bad = 0;
        for t in 0..self.rows.len().saturating_sub(1) {
            let (Some(lo), Some(hi)) = (&self.rows[t], &self.rows[t + 1]) else {
                continue;
            };
            for k in 0..=t {
                if lo[k] ^ hi[k] ^ hi[k + 1] {
                    bad += 1;
                }
            }
        }
        bad
    }
}

/// Which experimenter's outcome the filler chooses freely when both measure
/// at the same time of day.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Face {
    /// A's outcome is free, B's follows.
    Left,
    /// B's outcome is free, A's follows.
    Right,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceRun {
    pub face: Face,
    pub parity_violations: usize,
    pub a_ones: u64,
    pub b_ones: u64,
    /// `joint[a][b]`: days on which A saw `a` and B saw `b`.
    pub joint: [[u64; 2]; 2],
    #[serde(skip)]
    pub a_stream: Vec<u8>,
    #[serde(skip)]
    pub b_stream: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceTestReport {
    pub days: usize,
    pub seed: u64,
    pub left: FaceRun,
    pub right: FaceRun,
    /// Whether the two faces produced different outcome streams.
    pub transcripts_differ: bool,
}

fn run_face(face: Face, days: usize, seed: u64) -> Result<FaceRun, JanusError> {
    use rand::Rng;
    let mut moves = stream(seed, 0);
    let mut world = HexWorld::new(ChoiceSource::seeded(derive_seed(seed, 1)));
    let order = match face {
        Face::Left => [Site::A, Site::B],
        Face::Right => [Site::B, Site::A],
    };
    let mut run = FaceRun {
        face,
        parity_violations: 0,
        a_ones: 0,
        b_ones: 0,
        joint: [[0; 2]; 2],
        a_stream: Vec::with_capacity(days),
        b_stream: Vec::with_capacity(days),
    };
    for _ in 0..days {
        let pick = |r: &mut crate::rng::SimRng| {
            if r.random_bool(0.5) {
                Move::UpperRight
            } else {
                Move::UpperLeft
            }
        };
        world.step([pick(&mut moves), pick(&mut moves)]);
        let mut seen = [0u8; 2];
        for site in order {
            seen[site_index(site)] = world.measure(site)?;
        }
        run.a_ones += seen[0] as u64;
        run.b_ones += seen[1] as u64;
        run.joint[seen[0] as usize][seen[1] as usize] += 1;
        run.a_stream.push(seen[0]);
        run.b_stream.push(seen[1]);
    }
    run.parity_violations = world.parity_violations();
    Ok(run)
}

/// Runs `days` days under each face with the same seed for paths and free
/// bits.
pub fn left_right_face_test(days: usize, seed: u64) -> Result<FaceTestReport, JanusError> {
    let left = run_face(Face::Left, days, seed)?;
    let right = run_face(Face::Right, days, seed)?;
    let transcripts_differ = left.a_stream != right.a_stream || left.b_stream != right.b_stream;
    Ok(FaceTestReport {
        days,
        seed,
        left,
        right,
        transcripts_differ,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opposite_walkers_separate_by_five() {
        let mut w = HexWorld::new(ChoiceSource::seeded(0));
        for _ in 0..5 {
            w.step([Move::UpperLeft, Move::UpperRight]);
        }
        assert_eq!(w.position(Site::A), (5, -3));
        assert_eq!(w.position(Site::B), (5, 2));
        let sep =
            horizontal(5, w.light_cone_index(Site::B)) - horizontal(5, w.light_cone_index(Site::A));
        assert_eq!(sep, 5.0);
    }

    #[test]
    fn moves_follow_offset_convention() {
        assert_eq!(abutting_above(0, 0), [(1, -1), (1, 0)]);
        assert_eq!(abutting_above(1, 0), [(2, 0), (2, 1)]);
        let mut w = HexWorld::new(ChoiceSource::seeded(0));
        w.step_to([(1, -1), (1, 0)]).unwrap();
        assert_eq!(w.position(Site::A), (1, -1));
        w.step_to([(2, -1), (2, 1)]).unwrap();
        assert_eq!(w.position(Site::B), (2, 1));
        let err = w.step_to([(3, 5), (3, 1)]).unwrap_err();
        assert!(matches!(err, JanusError::InvalidMove { site: Site::A, .. }));
        assert_eq!(w.day(), 2, "failed move leaves the world alone");
    }

    #[test]
    fn zero_days_is_identity() {
        let w = HexWorld::new(ChoiceSource::seeded(4));
        assert_eq!(w.day(), 0);
        assert_eq!(w.position(Site::A), (0, 0));
        assert_eq!(w.parity_violations(), 0);
    }

    #[test]
    fn first_measurement_is_free_and_row_is_forced() {
        let mut w = HexWorld::new(ChoiceSource::scripted(vec![0, 0, 0, 0, 0, 1]));
        for _ in 0..5 {
            w.step([Move::UpperRight, Move::UpperLeft]);
        }
        // rows 0..=4 are lazy fills, the sixth bit is A's free outcome
        assert_eq!(w.measure(Site::A), Ok(1));
        let row = w.row(5).unwrap().clone();
        assert_eq!(row[5] as u8, 1);
        // all earlier rows are zero, so the parity law makes row 5 constant
        assert!(row.iter().all(|b| *b));
        assert_eq!(w.measure(Site::B), Ok(1));
        assert_eq!(w.parity_violations(), 0);
    }

    #[test]
    fn second_measurement_follows_parity() {
        let mut w = HexWorld::new(ChoiceSource::seeded(8));
        for d in 0..20 {
            let m = if d % 3 == 0 {
                Move::UpperRight
            } else {
                Move::UpperLeft
            };
            w.step([m, Move::UpperRight]);
        }
        let a = w.measure(Site::A).unwrap();
        let b = w.measure(Site::B).unwrap();
        let (ka, kb) = (w.light_cone_index(Site::A), w.light_cone_index(Site::B));
        // walk the even-sum rule from A's cell to B's cell along the row
        let prev = w.row(19).unwrap();
        let mut v = a;
        for k in ka + 1..=kb {
            v ^= prev[k - 1] as u8;
        }
        assert_eq!(v, b);
    }

    #[test]
    fn reading_ahead_and_double_measurement_rejected() {
        let mut w = HexWorld::new(ChoiceSource::seeded(1));
        w.step([Move::UpperLeft, Move::UpperLeft]);
        assert!(matches!(
            w.read(2, 0),
            Err(JanusError::NotYetReadable { .. })
        ));
        assert!(matches!(
            w.read(1, 0),
            Err(JanusError::NotYetReadable { .. })
        ));
        assert!(matches!(
            w.measure_at(Site::A, (2, -1)),
            Err(JanusError::NotAtHexagon { .. })
        ));
        w.measure_at(Site::A, (1, -1)).unwrap();
        assert!(w.read(1, 0).is_ok());
        assert!(matches!(
            w.measure(Site::A),
            Err(JanusError::AlreadyMeasured { .. })
        ));
    }

    #[test]
    fn one_day_marginals_are_uniform_under_both_faces() {
        for order in [[Site::A, Site::B], [Site::B, Site::A]] {
            let mut ones = [0u32; 2];
            for script in 0..4u8 {
                let mut w = HexWorld::new(ChoiceSource::scripted(vec![script & 1, script >> 1]));
                w.step([Move::UpperLeft, Move::UpperRight]);
                for s in order {
                    ones[site_index(s)] += w.measure(s).unwrap() as u32;
                }
            }
            assert_eq!(ones, [2, 2]);
        }
    }

    #[test]
    fn faces_keep_the_law() {
        let r = left_right_face_test(500, 3).unwrap();
        assert_eq!(r.left.parity_violations, 0);
        assert_eq!(r.right.parity_violations, 0);
        assert!(r.transcripts_differ);
        for run in [&r.left, &r.right] {
            let p = run.a_ones as f64 / 500.0;
            assert!((p - 0.5).abs() < 0.1);
        }
    }
}
