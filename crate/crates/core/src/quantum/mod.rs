//! Spin-1 squared-spin measurements.
//!
//! In the Cartesian representation of spin 1 the state with squared spin 0
//! along `w` is `w` itself, so the corresponding property is the rank-one
//! projector `w wᵀ`. Measuring "squared spin along w" yields 0 with that
//! projector and 1 with its complement.

mod montecarlo;
mod singlet;

pub use montecarlo::{
    Intervals, MonteCarloReport, NoiseModel, Rates, TwinAtReport, Z99, monte_carlo_spin,
    monte_carlo_twin_at, perturb, random_frame, wilson_interval,
};
pub use singlet::{TwinJointDist, singlet_joint, singlet_state, spin_matrices};

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{Real, lit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("angles ({alpha}, {beta}, {gamma}) are not realised by any three directions")]
    InfeasibleAngles { alpha: f64, beta: f64, gamma: f64 },
    #[error("negative misalignment bound {0}")]
    NegativeDelta(f64),
}

/// Norm tolerance: 1e-12, or a few ulps for types coarser than `f64`.
fn unit_tol<F: Real>() -> F {
    let ulp = F::default_epsilon() * lit(16.0);
    if ulp > lit(1e-12) { ulp } else { lit(1e-12) }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVec<F: Real = f64>(Vector3<F>);

impl<F: Real> UnitVec<F> {
    pub fn new(x: F, y: F, z: F) -> Result<Self, QuantumError> {
        Self::from_vector(Vector3::new(x, y, z))
    }

    pub fn from_vector(v: Vector3<F>) -> Result<Self, QuantumError> {
        let n = v.norm();
        if (n - F::one()).abs() > unit_tol::<F>() {
            return Err(QuantumError::NotUnit(n.to_subset().unwrap_or(f64::NAN)));
        }
        Ok(Self(v))
    }

    /// Scales `v` to unit length.
    pub fn normalize(v: Vector3<F>) -> Result<Self, QuantumError> {
        let n = v.norm();
        if n == F::zero() || !n.is_finite() {
            return Err(QuantumError::NotUnit(0.0));
        }
        Ok(Self(v / n))
    }

    pub fn x(&self) -> F {
        self.0.x
    }

    pub fn y(&self) -> F {
        self.0.y
    }

    pub fn z(&self) -> F {
        self.0.z
    }

    pub fn as_vector(&self) -> &Vector3<F> {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> F {
        self.0.dot(&other.0)
    }

    /// Angle in `[0, π]`.
    pub fn angle(&self, other: &Self) -> F {
        let c = self.dot(other);
        c.max(-F::one()).min(F::one()).acos()
    }
}

impl UnitVec<f64> {
    pub fn axis(i: usize) -> Self {
        let mut v = Vector3::zeros();
        v[i] = 1.0;
        Self(v)
    }
}

/// Rank-one projector `w wᵀ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projector3<F: Real = f64> {
    dir: UnitVec<F>,
    m: Matrix3<F>,
}

pub fn projector<F: Real>(w: &UnitVec<F>) -> Projector3<F> {
    Projector3::along(w)
}

impl<F: Real> Projector3<F> {
    pub fn along(w: &UnitVec<F>) -> Self {
        Self {
            dir: *w,
            m: w.0 * w.0.transpose(),
        }
    }

    pub fn direction(&self) -> &UnitVec<F> {
        &self.dir
    }

    pub fn matrix(&self) -> &Matrix3<F> {
        &self.m
    }

    /// `I - P`, the "squared spin 1" property.
    pub fn complement(&self) -> Matrix3<F> {
        Matrix3::identity() - self.m
    }

    /// The effect for outcome `bit`: `P` for 0, `I - P` for 1.
    pub fn effect(&self, bit: u8) -> Matrix3<F> {
        if bit == 0 { self.m } else { self.complement() }
    }
}

/// State of the measured system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Density<F: Real = f64> {
    /// `ρ = I/3`.
    Mixed,
    /// `ρ = φ φᵀ`.
    Pure(UnitVec<F>),
}

impl<F: Real> Density<F> {
    pub fn matrix(&self) -> Matrix3<F> {
        match self {
            Density::Mixed => Matrix3::identity() / lit::<F>(3.0),
            Density::Pure(phi) => phi.0 * phi.0.transpose(),
        }
    }
}

/// `tr(E₁ ⋯ Eₙ ⋯ E₁ ρ)`: the probability that a sequence of projective
/// properties all hold, measured in the order given.
pub fn seq_prob<F: Real>(effects: &[Matrix3<F>], rho: Density<F>) -> F {
    let mut chain = Matrix3::identity();
    for e in effects {
        chain = e * chain;
    }
    // tr(Aᵀ A ρ) with A = Eₙ ⋯ E₁
    (chain.transpose() * chain * rho.matrix()).trace()
}

/// Probability of the outcome pattern `bits` for the projectors measured in
/// order.
pub fn pattern_prob<F: Real>(projs: &[Projector3<F>], bits: &[u8], rho: Density<F>) -> F {
    assert_eq!(projs.len(), bits.len());
    let effects: Vec<Matrix3<F>> = projs.iter().zip(bits).map(|(p, &b)| p.effect(b)).collect();
    seq_prob(&effects, rho)
}

/// The outcome patterns of a triple that violate the 1,0,1 rule.
pub const NONCANONICAL: [[u8; 3]; 5] = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];

/// Probability of a non-canonical result when `x, y, z` are measured in that
/// order on `ρ = I/3`. `alpha` is the angle between x and y, `gamma` between
/// y and z, `beta` between z and x.
pub fn spin_noncanonical_prob<F: Real>(alpha: F, beta: F, gamma: F) -> Result<F, QuantumError> {
    let (ca, cb, cg) = (alpha.cos(), beta.cos(), gamma.cos());
    // Gram determinant of the three unit vectors with these cosines.
    let gram = F::one() + lit::<F>(2.0) * ca * cb * cg - ca * ca - cb * cb - cg * cg;
    let tol = unit_tol::<F>() * lit(10.0);
    if gram < -tol {
        let f = |v: F| v.to_subset().unwrap_or(f64::NAN);
        return Err(QuantumError::InfeasibleAngles {
            alpha: f(alpha),
            beta: f(beta),
            gamma: f(gamma),
        });
    }
    let two = lit::<F>(2.0);
    let p = two * ca * ca + two * cb * cb + two * cg * cg - lit::<F>(4.0) * ca * cb * cg
        + ca * ca * cg * cg;
    Ok(p / lit(3.0))
}

/// Probability that two twinned measurements at angle `phi` disagree.
pub fn twin_mismatch_prob<F: Real>(phi: F) -> F {
    let s = phi.sin();
    lit::<F>(2.0) * s * s / lit(3.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdBound<F: Real = f64> {
    pub delta: F,
    pub eps_s_bound: F,
    pub eps_t_bound: F,
    /// Upper bound for `3 ε_t + ε_s`.
    pub combined: F,
    pub threshold: F,
    pub below_threshold: bool,
}

/// Error bounds for angular misalignment at most `delta` radians.
pub fn threshold_bound<F: Real>(delta: F) -> Result<ThresholdBound<F>, QuantumError> {
    if delta < F::zero() || !delta.is_finite() {
        return Err(QuantumError::NegativeDelta(
            delta.to_subset().unwrap_or(f64::NAN),
        ));
    }
    let d2 = delta * delta;
    let d3 = d2 * delta;
    let d4 = d2 * d2;
    let three = lit::<F>(3.0);
    let four = lit::<F>(4.0);
    let eps_s_bound = (lit::<F>(6.0) * d2 + four * d3 + d4) / three;
    let eps_t_bound = lit::<F>(2.0) * d2 / three;
    let combined = four * d2 + (four * d3 + d4) / three;
    let threshold = F::one() / lit(40.0);
    Ok(ThresholdBound {
        delta,
        eps_s_bound,
        eps_t_bound,
        combined,
        threshold,
        below_threshold: combined < threshold,
    })
}
