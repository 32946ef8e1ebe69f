//! Arbitrary precision integers with an inline machine-word fast path.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An integer that stays in an `i64` until an operation overflows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    pub fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(b),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else if b.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn add(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(c) = a.checked_add(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(c) = a.checked_sub(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() - o.to_big())
    }

    pub fn mul(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(c) = a.checked_mul(*b) {
                return Int::Small(c);
            }
        }
        Int::from_big(self.to_big() * o.to_big())
    }

    /// `self += a * b` without an intermediate allocation in the common case.
    pub fn add_mul(&mut self, a: &Int, b: &Int) {
        if let (Int::Small(s), Int::Small(x), Int::Small(y)) = (&*self, a, b) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(c) = s.checked_add(p) {
                    *self = Int::Small(c);
                    return;
                }
            }
        }
        *self = Int::from_big(self.to_big() + a.to_big() * b.to_big());
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn div_exact(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(c) = a.checked_div(*b) {
                debug_assert_eq!(a % b, 0);
                return Int::Small(c);
            }
        }
        let (q, r) = self.to_big().div_rem(&o.to_big());
        debug_assert!(r.is_zero());
        Int::from_big(q)
    }

    /// Quotient and remainder when `o` divides `self`, otherwise `None`.
    pub fn try_div(&self, o: &Int) -> Option<Int> {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if *b != 0 && !(*a == i64::MIN && *b == -1) {
                return if a % b == 0 { Some(Int::Small(a / b)) } else { None };
            }
        }
        let (q, r) = self.to_big().div_rem(&o.to_big());
        if r.is_zero() {
            Some(Int::from_big(q))
        } else {
            None
        }
    }

    pub fn gcd(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if *a != i64::MIN && *b != i64::MIN {
                return Int::Small(a.abs().gcd(&b.abs()));
            }
        }
        Int::from_big(self.to_big().gcd(&o.to_big()))
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Residue in `[0, p)` for a prime `p < 2^62`.
    pub fn mod_u64(&self, p: u64) -> u64 {
        match self {
            Int::Small(v) => (*v as i128).rem_euclid(p as i128) as u64,
            Int::Big(b) => {
                let r = b.mod_floor(&BigInt::from(p));
                r.to_u64().unwrap_or(0)
            }
        }
    }

    /// Number of bits of the magnitude, used as a size heuristic.
    pub fn bits(&self) -> u64 {
        match self {
            Int::Small(v) => 64 - v.unsigned_abs().leading_zeros() as u64,
            Int::Big(b) => b.bits(),
        }
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Int {
        Int::Small(v)
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Int {
        Int::from_big(v)
    }
}

impl std::ops::Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(c) => Int::Small(c),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-b),
        }
    }
}

impl std::ops::Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, o: &Int) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Int {
    fn cmp(&self, o: &Int) -> Ordering {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl Zero for Int {
    fn zero() -> Int {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl std::ops::Add for Int {
    type Output = Int;
    fn add(self, o: Int) -> Int {
        Int::add(&self, &o)
    }
}

impl One for Int {
    fn one() -> Int {
        Int::ONE
    }
}

impl std::ops::Mul for Int {
    type Output = Int;
    fn mul(self, o: Int) -> Int {
        Int::mul(&self, &o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_to_big() {
        let a = Int::Small(i64::MAX);
        let b = a.add(&Int::ONE);
        assert!(matches!(b, Int::Big(_)));
        assert_eq!(b.sub(&Int::ONE), a);
        let m = a.mul(&a);
        assert_eq!(m.div_exact(&a), a);
    }

    #[test]
    fn gcd_and_division() {
        assert_eq!(Int::Small(12).gcd(&Int::Small(-18)), Int::Small(6));
        assert_eq!(Int::Small(7).try_div(&Int::Small(2)), None);
        assert_eq!(Int::Small(-8).try_div(&Int::Small(2)), Some(Int::Small(-4)));
        assert_eq!(Int::Small(-3).mod_u64(7), 4);
    }
}
