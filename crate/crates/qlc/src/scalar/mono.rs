//! Packed monomials under graded lexicographic order.

use std::cmp::Ordering;

/// Maximum number of variables in one context.
pub const MAX_VARS: usize = 8;
const BITS: u32 = 16;
const FIELD: u128 = 0xFFFF;

/// Exponent vector of up to eight variables packed into one word.
///
/// Variable 0 sits in the most significant field, so comparing the packed
/// words compares exponent vectors lexicographically. Prefixing the total
/// degree gives the graded lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    deg: u32,
    packed: u128,
}

impl Ord for Mono {
    fn cmp(&self, o: &Mono) -> Ordering {
        (self.deg, self.packed).cmp(&(o.deg, o.packed))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Mono) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn shift(var: usize) -> u32 {
    BITS * (MAX_VARS as u32 - 1 - var as u32)
}

impl Mono {
    pub const ONE: Mono = Mono { deg: 0, packed: 0 };

    pub fn var(v: usize, e: u32) -> Mono {
        assert!(v < MAX_VARS && e <= FIELD as u32, "monomial exponent out of range");
        Mono { deg: e, packed: (e as u128) << shift(v) }
    }

    pub fn from_exps(exps: &[u32]) -> Mono {
        let mut m = Mono::ONE;
        for (v, &e) in exps.iter().enumerate() {
            if e > 0 {
                m = m.mul(&Mono::var(v, e));
            }
        }
        m
    }

    pub fn exp(&self, v: usize) -> u32 {
        ((self.packed >> shift(v)) & FIELD) as u32
    }

    pub fn exps(&self) -> [u32; MAX_VARS] {
        let mut out = [0; MAX_VARS];
        for (v, slot) in out.iter_mut().enumerate() {
            *slot = self.exp(v);
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        debug_assert!((0..MAX_VARS).all(|v| self.exp(v) + o.exp(v) <= FIELD as u32));
        Mono { deg: self.deg + o.deg, packed: self.packed + o.packed }
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.deg <= o.deg && (0..MAX_VARS).all(|v| self.exp(v) <= o.exp(v))
    }

    /// `self / o`; the caller guarantees `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Mono {
        debug_assert!(o.divides(self));
        Mono { deg: self.deg - o.deg, packed: self.packed - o.packed }
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        let mut e = [0u32; MAX_VARS];
        for (v, slot) in e.iter_mut().enumerate() {
            *slot = self.exp(v).min(o.exp(v));
        }
        Mono::from_exps(&e)
    }

    /// Same monomial with variable `v` removed.
    pub fn without(&self, v: usize) -> Mono {
        let e = self.exp(v);
        Mono { deg: self.deg - e, packed: self.packed & !(FIELD << shift(v)) }
    }

    pub fn pow(&self, k: u32) -> Mono {
        let mut m = Mono::ONE;
        for _ in 0..k {
            m = m.mul(self);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let s2 = Mono::var(0, 2);
        let sa = Mono::var(0, 1).mul(&Mono::var(1, 1));
        let a2 = Mono::var(1, 2);
        let s3 = Mono::var(0, 3);
        assert!(s3 > s2 && s2 > sa && sa > a2);
        assert!(Mono::var(1, 1) > Mono::ONE);
    }

    #[test]
    fn divide_and_strip() {
        let m = Mono::from_exps(&[3, 1, 2]);
        let d = Mono::from_exps(&[1, 0, 2]);
        assert!(d.divides(&m));
        assert_eq!(m.div(&d), Mono::from_exps(&[2, 1]));
        assert_eq!(m.without(2), Mono::from_exps(&[3, 1]));
        assert_eq!(m.gcd(&Mono::from_exps(&[1, 4])), Mono::from_exps(&[1, 1]));
    }
}
