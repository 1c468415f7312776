use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::ExactInt;

/// Exact element `a + b√2` of the ring `Z[√2]`.
///
/// Equality is coefficient-wise. Ring operators panic on coefficient
/// overflow; the `checked_*` methods report it instead.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Quad2<T = i64> {
    pub a: T,
    pub b: T,
}

impl<T: ExactInt> Quad2<T> {
    pub fn new(a: T, b: T) -> Self {
        Quad2 { a, b }
    }

    pub fn from_int(a: T) -> Self {
        Quad2 { a, b: T::zero() }
    }

    /// The element `√2`.
    pub fn sqrt2() -> Self {
        Quad2 {
            a: T::zero(),
            b: T::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of the real number `a + b√2`.
    ///
    /// Mixed-sign cases compare `a²` against `2b²` in integer arithmetic.
    pub fn signum(&self) -> Ordering {
        let zero = T::zero();
        let sa = self.a.cmp(&zero);
        let sb = self.b.cmp(&zero);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            _ => {
                let a2 = self
                    .a
                    .checked_mul(&self.a)
                    .expect("Quad2 coefficient overflow");
                let b2 = self
                    .b
                    .checked_mul(&self.b)
                    .expect("Quad2 coefficient overflow");
                let two_b2 = b2.checked_add(&b2).expect("Quad2 coefficient overflow");
                // a dominates iff a² > 2b²; the two can never be equal since √2 is irrational
                match a2.cmp(&two_b2) {
                    Ordering::Greater => sa,
                    _ => sb,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Numeric comparison of the represented reals.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }

    pub fn checked_add(&self, rhs: &Self) -> Option<Self> {
        Some(Quad2 {
            a: self.a.checked_add(&rhs.a)?,
            b: self.b.checked_add(&rhs.b)?,
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        Some(Quad2 {
            a: self.a.checked_sub(&rhs.a)?,
            b: self.b.checked_sub(&rhs.b)?,
        })
    }

    /// `(a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2`
    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        let ac = self.a.checked_mul(&rhs.a)?;
        let bd = self.b.checked_mul(&rhs.b)?;
        let ad = self.a.checked_mul(&rhs.b)?;
        let bc = self.b.checked_mul(&rhs.a)?;
        Some(Quad2 {
            a: ac.checked_add(&bd)?.checked_add(&bd)?,
            b: ad.checked_add(&bc)?,
        })
    }

    /// Algebraic conjugate `a - b√2`.
    pub fn conj(&self) -> Self {
        Quad2 {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> T {
        let a2 = self
            .a
            .checked_mul(&self.a)
            .expect("Quad2 coefficient overflow");
        let b2 = self
            .b
            .checked_mul(&self.b)
            .expect("Quad2 coefficient overflow");
        a2.checked_sub(&b2)
            .and_then(|x| x.checked_sub(&b2))
            .expect("Quad2 coefficient overflow")
    }

    /// Gcd of the two coefficients (the rational-integer content).
    pub fn content(&self) -> T {
        self.a.gcd(&self.b)
    }

    /// True iff `√2` divides this element in `Z[√2]`, i.e. `a` is even.
    pub fn divisible_by_sqrt2(&self) -> bool {
        self.a.is_even()
    }

    /// `(a + b√2) / √2 = b + (a/2)√2`. Requires [`Self::divisible_by_sqrt2`].
    pub fn div_sqrt2(&self) -> Self {
        debug_assert!(self.divisible_by_sqrt2());
        let two = T::one() + T::one();
        Quad2 {
            a: self.b.clone(),
            b: self.a.clone() / two,
        }
    }

    /// Exact division by a rational integer dividing both coefficients.
    pub fn div_int(&self, d: &T) -> Self {
        debug_assert!(self.a.is_multiple_of(d) && self.b.is_multiple_of(d));
        Quad2 {
            a: self.a.clone() / d.clone(),
            b: self.b.clone() / d.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * std::f64::consts::SQRT_2
    }

    /// Converts the coefficients into another backing integer type.
    pub fn convert<U: ExactInt>(&self) -> Option<Quad2<U>> {
        Some(Quad2 {
            a: U::from_i128(self.a.to_i128()?)?,
            b: U::from_i128(self.b.to_i128()?)?,
        })
    }
}

impl<T: ExactInt> Zero for Quad2<T> {
    fn zero() -> Self {
        Quad2 {
            a: T::zero(),
            b: T::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        Quad2::is_zero(self)
    }
}

impl<T: ExactInt> One for Quad2<T> {
    fn one() -> Self {
        Quad2::from_int(T::one())
    }
}

impl<T: ExactInt> Add for Quad2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("Quad2 coefficient overflow")
    }
}

impl<T: ExactInt> Sub for Quad2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("Quad2 coefficient overflow")
    }
}

impl<T: ExactInt> Mul for Quad2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("Quad2 coefficient overflow")
    }
}

impl<T: ExactInt> Neg for Quad2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Quad2 {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl<T: ExactInt> Add for &Quad2<T> {
    type Output = Quad2<T>;
    fn add(self, rhs: Self) -> Quad2<T> {
        self.checked_add(rhs).expect("Quad2 coefficient overflow")
    }
}

impl<T: ExactInt> Sub for &Quad2<T> {
    type Output = Quad2<T>;
    fn sub(self, rhs: Self) -> Quad2<T> {
        self.checked_sub(rhs).expect("Quad2 coefficient overflow")
    }
}

impl<T: ExactInt> Mul for &Quad2<T> {
    type Output = Quad2<T>;
    fn mul(self, rhs: Self) -> Quad2<T> {
        self.checked_mul(rhs).expect("Quad2 coefficient overflow")
    }
}

impl<T: ExactInt> From<T> for Quad2<T> {
    fn from(a: T) -> Self {
        Quad2::from_int(a)
    }
}

impl<T: ExactInt> fmt::Display for Quad2<T> {
    /// Formats as `3`, `√2`, `-2√2`, `1+√2`, `1-2√2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = T::one();
        let root = |f: &mut fmt::Formatter<'_>, b: &T| -> fmt::Result {
            if *b == one {
                write!(f, "√2")
            } else if *b == -one.clone() {
                write!(f, "-√2")
            } else {
                write!(f, "{b}√2")
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => root(f, &self.b),
            (false, false) => {
                write!(f, "{}", self.a)?;
                if self.b.is_positive() {
                    write!(f, "+")?;
                }
                root(f, &self.b)
            }
        }
    }
}
