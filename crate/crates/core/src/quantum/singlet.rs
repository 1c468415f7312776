use nalgebra::{Matrix3, Vector3};
use num_complex::Complex;
use serde::{Serialize, Serializer};

use super::{UnitVec, projector};
use crate::scalar::{Real, lit};

/// Spin-1 operators in the Cartesian basis: `(S_k)_{ij} = -i ε_{kij}`.
pub fn spin_matrices<F: Real>() -> [Matrix3<Complex<F>>; 3] {
    let mut out = [Matrix3::zeros(); 3];
    for (k, s) in out.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                let e = levi_civita(k, i, j);
                s[(i, j)] = Complex::new(F::zero(), -lit::<F>(e));
            }
        }
    }
    out
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn complexify<F: Real>(v: &Vector3<F>) -> Vector3<Complex<F>> {
    v.map(|x| Complex::new(x, F::zero()))
}

/// Two-particle state with total spin 0, written in the `S_w` eigenbasis
/// `|1⟩|−1⟩ + |−1⟩|1⟩ − |0⟩|0⟩` (normalised) and returned as the 3×3
/// coefficient matrix `ψ_{ab}` of the 9-dimensional vector.
///
/// The result does not depend on `w`.
pub fn singlet_state<F: Real>(w: &UnitVec<F>) -> Matrix3<Complex<F>> {
    let wv = *w.as_vector();
    let k = (0..3)
        .min_by(|&a, &b| wv[a].abs().partial_cmp(&wv[b].abs()).expect("finite"))
        .expect("three axes");
    let mut helper = Vector3::zeros();
    helper[k] = F::one();
    let u = (helper - wv * helper.dot(&wv)).normalize();
    let v = wv.cross(&u);

    // Condon-Shortley phases: |±1⟩ = ∓(u ± i v)/√2, |0⟩ = w
    let inv_sqrt2 = lit::<F>(std::f64::consts::FRAC_1_SQRT_2);
    let i = Complex::new(F::zero(), F::one());
    let (cu, cv) = (complexify(&u), complexify(&v));
    let plus = -(cu + cv * i) * Complex::new(inv_sqrt2, F::zero());
    let minus = (cu - cv * i) * Complex::new(inv_sqrt2, F::zero());
    let zero = complexify(&wv);

    let psi = plus * minus.transpose() + minus * plus.transpose() - zero * zero.transpose();
    psi / Complex::new(lit::<F>(3.0).sqrt(), F::zero())
}

/// Joint outcome table for A measuring squared spin along `x, y, z` in that
/// order and B measuring along `w`, on the twinned pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwinJointDist<F: Real = f64> {
    /// Indexed by `j·8 + k·4 + l·2 + m`.
    probs: [F; 16],
}

impl<F: Real> TwinJointDist<F> {
    pub fn get(&self, j: u8, k: u8, l: u8, m: u8) -> F {
        self.probs[Self::index(j, k, l, m)]
    }

    fn index(j: u8, k: u8, l: u8, m: u8) -> usize {
        assert!(j < 2 && k < 2 && l < 2 && m < 2, "outcomes are bits");
        (j as usize) << 3 | (k as usize) << 2 | (l as usize) << 1 | m as usize
    }

    /// `((j, k, l, m), p)` in index order.
    pub fn entries(&self) -> impl Iterator<Item = ([u8; 4], F)> + '_ {
        self.probs.iter().enumerate().map(|(i, &p)| {
            let bits = [
                (i >> 3) as u8 & 1,
                (i >> 2) as u8 & 1,
                (i >> 1) as u8 & 1,
                i as u8 & 1,
            ];
            (bits, p)
        })
    }

    pub fn total(&self) -> F {
        self.probs.iter().fold(F::zero(), |a, &b| a + b)
    }

    /// `[P(m = 0), P(m = 1)]`.
    pub fn b_marginal(&self) -> [F; 2] {
        let mut out = [F::zero(); 2];
        for ([_, _, _, m], p) in self.entries() {
            out[m as usize] += p;
        }
        out
    }

    /// `P(j, k, l)` indexed by `j·4 + k·2 + l`.
    pub fn a_marginal(&self) -> [F; 8] {
        let mut out = [F::zero(); 8];
        for ([j, k, l, _], p) in self.entries() {
            out[(j as usize) << 2 | (k as usize) << 1 | l as usize] += p;
        }
        out
    }

    /// Probability that A's triple does not come out as a permutation of 1,0,1.
    pub fn noncanonical_prob(&self) -> F {
        self.entries()
            .filter(|(b, _)| b[0] + b[1] + b[2] != 2)
            .fold(F::zero(), |a, (_, p)| a + p)
    }

    /// Probability that B's outcome differs from A's outcome on `axis`.
    pub fn mismatch_prob(&self, axis: usize) -> F {
        self.entries()
            .filter(|(b, _)| b[axis] != b[3])
            .fold(F::zero(), |a, (_, p)| a + p)
    }

    /// Inverse-CDF draw for `u ∈ [0, 1)`.
    pub fn sample(&self, u: F) -> [u8; 4] {
        let mut acc = F::zero();
        let mut last = [0u8; 4];
        for (bits, p) in self.entries() {
            if p > F::zero() {
                last = bits;
            }
            acc += p;
            if u < acc {
                return bits;
            }
        }
        last
    }
}

impl<F: Real + Serialize> Serialize for TwinJointDist<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(16))?;
        for (bits, p) in self.entries() {
            seq.serialize_element(&(bits, p))?;
        }
        seq.end()
    }
}

/// Joint distribution of `(j, k, l; m)` from the explicit singlet.
///
/// A's effects are applied sequentially, `Q_l(z) Q_k(y) Q_j(x)`, and B's
/// `Q_m(w)` acts on the other factor, so for non-orthogonal triples the
/// table depends on A's measurement order.
pub fn singlet_joint<F: Real>(xyz: &[UnitVec<F>; 3], w: &UnitVec<F>) -> TwinJointDist<F> {
    let psi = singlet_state(w);
    let [px, py, pz] = xyz.each_ref().map(projector);
    let pw = projector(w);
    let to_c = |m: Matrix3<F>| m.map(|x| Complex::new(x, F::zero()));
    let b_side = [0u8, 1].map(|m| to_c(pw.effect(m)).transpose());

    let mut probs = [F::zero(); 16];
    for j in 0..2u8 {
        let aj = px.effect(j);
        for k in 0..2u8 {
            let akj = py.effect(k) * aj;
            for l in 0..2u8 {
                let a = to_c(pz.effect(l) * akj) * psi;
                for m in 0..2u8 {
                    // (A ⊗ B) ψ is A Ψ Bᵀ in matrix form
                    let out = a * b_side[m as usize];
                    probs[TwinJointDist::<F>::index(j, k, l, m)] = out.norm_squared();
                }
            }
        }
    }
    TwinJointDist { probs }
}
