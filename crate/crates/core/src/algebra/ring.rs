//! Ring abstractions used by the matrix and normal-form code.
//!
//! The traits take references everywhere so that big-number types are not
//! cloned on every operation.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A commutative ring with identity.
pub trait Ring: Clone + PartialEq + Debug + Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.add(&one);
        }
        if n < 0 {
            acc.neg()
        } else {
            acc
        }
    }
}

/// An integral domain in which exact division (when the quotient exists)
/// is computable. Used by fraction-free elimination.
pub trait IntegralDomain: Ring {
    /// Returns `self / other` when `other` divides `self`, `None` otherwise.
    fn exact_div(&self, other: &Self) -> Option<Self>;

    /// Multiplicative inverse, if `self` is a unit.
    fn unit_inverse(&self) -> Option<Self>;

    fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }
}

/// A Euclidean domain with a distinguished normal form modulo units.
pub trait EuclideanDomain: IntegralDomain {
    type Norm: Ord + Clone + Debug;

    /// Euclidean size; `None` for zero.
    fn norm(&self) -> Option<Self::Norm>;

    /// `(q, r)` with `self = q * divisor + r` and `r == 0` or `norm(r) < norm(divisor)`.
    fn div_rem(&self, divisor: &Self) -> (Self, Self);

    /// A unit `u` such that `u * self` is the normal representative of the
    /// associate class of `self`.
    fn normalizing_unit(&self) -> Self;

    fn normalized(&self) -> Self {
        self.normalizing_unit().mul(self)
    }

    /// Size of the representation, used to break pivot ties.
    fn height(&self) -> u64 {
        0
    }

    /// Canonical representative of `self` modulo the ideal generated by `modulus`.
    fn canonical_rem(&self, modulus: &Self) -> Self {
        self.div_rem(modulus).1
    }
}

pub trait Field: IntegralDomain {
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

/// Orders two optional norms with `None` (zero) last.
pub fn cmp_norm<N: Ord>(a: &Option<N>, b: &Option<N>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.cmp(y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl IntegralDomain for BigInt {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = Integer::div_rem(self, other);
        Zero::is_zero(&r).then_some(q)
    }

    fn unit_inverse(&self) -> Option<Self> {
        (self.magnitude() == &BigUint::one()).then(|| self.clone())
    }
}

impl EuclideanDomain for BigInt {
    type Norm = BigUint;

    fn norm(&self) -> Option<BigUint> {
        (!Zero::is_zero(self)).then(|| self.magnitude().clone())
    }

    fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        // floor division keeps the remainder in [0, |d|) for positive d
        let (q, r) = self.div_mod_floor(divisor);
        if Signed::is_negative(&r) {
            // divisor negative: shift into [0, |d|)
            (q + 1, r - divisor)
        } else {
            (q, r)
        }
    }

    fn normalizing_unit(&self) -> Self {
        if self.sign() == Sign::Minus {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        }
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl IntegralDomain for BigRational {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        Field::div(self, other)
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.inv()
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// Coefficient rings usable inside Laurent polynomials.
pub trait Coefficient: IntegralDomain + Ord {
    fn to_rational(&self) -> BigRational;
    fn is_negative(&self) -> bool;
}

impl Coefficient for BigInt {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Coefficient for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_div_rem_keeps_nonnegative_remainder() {
        for a in -20i64..20 {
            for b in [-7i64, -3, -1, 1, 2, 5] {
                let (q, r) = EuclideanDomain::div_rem(&BigInt::from(a), &BigInt::from(b));
                assert_eq!(q * BigInt::from(b) + &r, BigInt::from(a));
                assert!(!Signed::is_negative(&r));
                assert!(r.magnitude() < BigInt::from(b).magnitude());
            }
        }
    }

    #[test]
    fn integer_units_are_plus_minus_one() {
        assert!(BigInt::from(-1).is_unit());
        assert!(BigInt::from(1).is_unit());
        assert!(!BigInt::from(2).is_unit());
        assert!(!BigInt::from(0).is_unit());
    }
}
