use nalgebra::{Rotation3, Unit, UnitQuaternion, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{QuantumError, UnitVec, singlet_joint, threshold_bound, twin_mismatch_prob};
use crate::rng::{SimRng, stream};

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

/// Trials per independently seeded block. Fixed so that the result does not
/// depend on the number of worker threads.
const BLOCK: u64 = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseModel {
    /// Largest rotation applied to any nominal direction, in radians.
    pub delta: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(delta: f64, seed: u64) -> Result<Self, QuantumError> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(QuantumError::NegativeDelta(delta));
        }
        Ok(Self { delta, seed })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rates {
    pub spin_noncanonical: f64,
    pub twin_mismatch: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Intervals {
    pub confidence: f64,
    pub spin_noncanonical: [f64; 2],
    pub twin_mismatch: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub delta: f64,
    pub eps_s_bound: f64,
    pub eps_t_bound: f64,
    pub combined: f64,
    pub threshold: f64,
    pub n_trials: u64,
    pub noncanonical_count: u64,
    pub mismatch_count: u64,
    pub rates: Rates,
    pub intervals: Intervals,
    pub seed: u64,
}

/// Wilson score interval for `k` successes out of `n` at normal quantile `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> [f64; 2] {
    assert!(n > 0 && k <= n);
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    [(centre - half).max(0.0), (centre + half).min(1.0)]
}

fn gaussian_vector(rng: &mut SimRng) -> Vector3<f64> {
    Vector3::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    )
}

/// Uniformly random orthonormal frame (Haar rotation applied to the axes).
pub fn random_frame(rng: &mut impl Rng) -> [UnitVec<f64>; 3] {
    let q = loop {
        let v = nalgebra::Vector4::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        if v.norm() > 1e-9 {
            break UnitQuaternion::from_quaternion(nalgebra::Quaternion::from(v));
        }
    };
    let rot = q.to_rotation_matrix();
    [0, 1, 2]
        .map(|i| UnitVec::normalize(rot.matrix().column(i).into_owned()).expect("rotation column"))
}

/// Rotates `v` about a uniformly random axis by an angle uniform in `[0, delta]`.
pub fn perturb(v: &UnitVec<f64>, delta: f64, rng: &mut SimRng) -> UnitVec<f64> {
    if delta == 0.0 {
        return *v;
    }
    let axis = loop {
        let g = gaussian_vector(rng);
        if g.norm() > 1e-9 {
            break Unit::new_normalize(g);
        }
    };
    let angle = rng.random_range(0.0..=delta);
    let rotated = Rotation3::from_axis_angle(&axis, angle) * v.as_vector();
    UnitVec::normalize(rotated).expect("rotation preserves length")
}

/// One noisy run: A measures a perturbed random frame, B a perturbed copy of
/// one of its axes chosen at random. Returns (non-canonical, mismatch).
fn trial(rng: &mut SimRng, delta: f64) -> (bool, bool) {
    let nominal = random_frame(rng);
    let shared = rng.random_range(0..3usize);
    let xyz = nominal.each_ref().map(|v| perturb(v, delta, rng));
    let w = perturb(&nominal[shared], delta, rng);
    let d = singlet_joint(&xyz, &w);
    let bits = d.sample(rng.random::<f64>());
    (bits[0] + bits[1] + bits[2] != 2, bits[shared] != bits[3])
}

fn tally<T: Fn(&mut SimRng) -> (bool, bool) + Sync>(n: u64, seed: u64, run: T) -> (u64, u64) {
    let blocks = n.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, b);
            let len = BLOCK.min(n - b * BLOCK);
            let mut counts = (0u64, 0u64);
            for _ in 0..len {
                let (x, y) = run(&mut rng);
                counts.0 += x as u64;
                counts.1 += y as u64;
            }
            counts
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Simulated noisy SPIN′/TWIN′ experiments with outcomes drawn from the
/// singlet distribution.
pub fn monte_carlo_spin(n: u64, noise: NoiseModel) -> MonteCarloReport {
    assert!(n >= 1, "at least one trial");
    let (nc, mm) = tally(n, noise.seed, |rng| trial(rng, noise.delta));
    let bound = threshold_bound(noise.delta).expect("validated delta");
    MonteCarloReport {
        delta: noise.delta,
        eps_s_bound: bound.eps_s_bound,
        eps_t_bound: bound.eps_t_bound,
        combined: bound.combined,
        threshold: bound.threshold,
        n_trials: n,
        noncanonical_count: nc,
        mismatch_count: mm,
        rates: Rates {
            spin_noncanonical: nc as f64 / n as f64,
            twin_mismatch: mm as f64 / n as f64,
        },
        intervals: Intervals {
            confidence: 0.99,
            spin_noncanonical: wilson_interval(nc, n, Z99),
            twin_mismatch: wilson_interval(mm, n, Z99),
        },
        seed: noise.seed,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwinAtReport {
    pub phi: f64,
    pub n_trials: u64,
    pub seed: u64,
    pub mismatches: u64,
    pub rate: f64,
    pub expected: f64,
    /// Binomial standard deviation of the rate at the expected value.
    pub sigma: f64,
    /// Wilson interval at three standard deviations.
    pub interval_3sigma: [f64; 2],
    pub within_3_sigma: bool,
}

/// TWIN mismatch rate when B's direction sits at exactly `phi` from A's first
/// axis, for an exactly orthogonal random frame at A.
pub fn monte_carlo_twin_at(phi: f64, n: u64, seed: u64) -> TwinAtReport {
    assert!(n >= 1, "at least one trial");
    let (_, mm) = tally(n, seed, |rng| {
        let frame = random_frame(rng);
        // rotate x by phi about a random axis orthogonal to it
        let t = rng.random_range(0.0..std::f64::consts::TAU);
        let axis = frame[1].as_vector() * t.cos() + frame[2].as_vector() * t.sin();
        let w = Rotation3::from_axis_angle(&Unit::new_normalize(axis), phi) * frame[0].as_vector();
        let w = UnitVec::normalize(w).expect("rotation preserves length");
        let bits = singlet_joint(&frame, &w).sample(rng.random::<f64>());
        (false, bits[0] != bits[3])
    });
    let expected = twin_mismatch_prob(phi);
    let interval_3sigma = wilson_interval(mm, n, 3.0);
    TwinAtReport {
        phi,
        n_trials: n,
        seed,
        mismatches: mm,
        rate: mm as f64 / n as f64,
        expected,
        sigma: (expected * (1.0 - expected) / n as f64).sqrt(),
        interval_3sigma,
        within_3_sigma: interval_3sigma[0] <= expected && expected <= interval_3sigma[1],
    }
}
