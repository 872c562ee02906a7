//! Exact integer scalar: 64-bit fast path with overflow detection,
//! promoting to arbitrary precision on demand.

use num_bigint::BigInt;
use std::fmt;
use std::ops::{Add, Mul, Neg};

/// An exact signed integer. Values that fit stay in the `Small` variant;
/// any overflowing operation promotes transparently. Equality is
/// value-based because every constructor demotes big values that fit back
/// into `Small`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntScalar {
    Small(i64),
    Big(BigInt),
}

impl IntScalar {
    pub const ZERO: IntScalar = IntScalar::Small(0);
    pub const ONE: IntScalar = IntScalar::Small(1);

    pub fn from_big(b: BigInt) -> Self {
        match i64::try_from(&b) {
            Ok(v) => IntScalar::Small(v),
            Err(_) => IntScalar::Big(b),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            IntScalar::Small(v) => *v == 0,
            IntScalar::Big(b) => b.sign() == num_bigint::Sign::NoSign,
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            IntScalar::Small(v) => BigInt::from(*v),
            IntScalar::Big(b) => b.clone(),
        }
    }

    /// The value as `i64` when it fits.
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            IntScalar::Small(v) => Some(*v),
            IntScalar::Big(_) => None,
        }
    }
}

impl From<i64> for IntScalar {
    fn from(v: i64) -> Self {
        IntScalar::Small(v)
    }
}

impl Add for &IntScalar {
    type Output = IntScalar;
    fn add(self, rhs: &IntScalar) -> IntScalar {
        if let (IntScalar::Small(a), IntScalar::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                return IntScalar::Small(s);
            }
        }
        IntScalar::from_big(self.to_big() + rhs.to_big())
    }
}

impl Mul for &IntScalar {
    type Output = IntScalar;
    fn mul(self, rhs: &IntScalar) -> IntScalar {
        if let (IntScalar::Small(a), IntScalar::Small(b)) = (self, rhs) {
            if let Some(p) = a.checked_mul(*b) {
                return IntScalar::Small(p);
            }
        }
        IntScalar::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for &IntScalar {
    type Output = IntScalar;
    fn neg(self) -> IntScalar {
        match self {
            IntScalar::Small(v) => match v.checked_neg() {
                Some(n) => IntScalar::Small(n),
                None => IntScalar::from_big(-self.to_big()),
            },
            IntScalar::Big(b) => IntScalar::from_big(-b.clone()),
        }
    }
}

impl fmt::Display for IntScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntScalar::Small(v) => write!(f, "{v}"),
            IntScalar::Big(b) => write!(f, "{b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic_stays_small() {
        let a = IntScalar::from(7);
        let b = IntScalar::from(-3);
        assert_eq!(&a + &b, IntScalar::Small(4));
        assert_eq!(&a * &b, IntScalar::Small(-21));
    }

    #[test]
    fn overflow_promotes_and_equality_is_value_based() {
        let a = IntScalar::from(i64::MAX);
        let two = IntScalar::from(2);
        let big = &a * &two;
        assert!(matches!(big, IntScalar::Big(_)));
        // dividing back down demotes: (big + big) vs explicit BigInt route
        let direct = IntScalar::from_big(BigInt::from(i64::MAX) * 2);
        assert_eq!(big, direct);
        // a promoted value that fits is represented Small
        let back = IntScalar::from_big(BigInt::from(42));
        assert_eq!(back, IntScalar::Small(42));
    }

    #[test]
    fn neg_min_promotes() {
        let v = IntScalar::from(i64::MIN);
        let n = -&v;
        assert!(matches!(n, IntScalar::Big(_)));
        assert_eq!(-&n, v);
    }
}
