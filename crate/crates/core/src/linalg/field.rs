//! Prime field arithmetic.
//!
//! Elements are plain `u64` residues kept fully reduced in `[0, p)`. The
//! modulus lives in a [`Field`] context that every matrix and vector carries,
//! so two values can only be combined when their contexts agree.

use std::fmt;

use crate::error::{Error, Result};

/// Default modulus for desk-scale experiments.
pub const DEFAULT_MODULUS: u64 = 1009;

/// The prime field GF(p) for an odd prime `p < 2^32`.
///
/// Products of two reduced residues fit in a `u64`, so no widening is needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Field { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    /// Maps any signed integer to its residue.
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.from_i64(t0))
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn element(&self, v: u64) -> FieldElement {
        FieldElement(self.reduce(v))
    }
}

impl Default for Field {
    fn default() -> Self {
        Field { p: DEFAULT_MODULUS }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A reduced residue, used where scalars surface in the public API
/// (span coordinates, operator coefficients).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub(crate) u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_primes() {
        for p in [0, 1, 2, 4, 9, 1001, 1 << 33] {
            assert!(Field::new(p).is_err(), "{p}");
        }
        for p in [3, 5, 7, 1009, 65_537, 4_294_967_291] {
            assert!(Field::new(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn inverse_small_cases() {
        let f = Field::new(5).unwrap();
        assert_eq!(f.inv(2), Some(3));
        assert_eq!(f.inv(4), Some(4));
        assert_eq!(f.inv(0), None);
        assert_eq!(f.from_i64(-1), 4);
    }

    #[test]
    fn large_modulus_does_not_overflow() {
        let f = Field::new(4_294_967_291).unwrap();
        let a = f.modulus() - 1;
        assert_eq!(f.mul(a, a), 1);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u64..1009, b in 0u64..1009, c in 0u64..1009) {
            let f = Field::new(1009).unwrap();
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                prop_assert_eq!(f.inv(a).unwrap(), f.pow(a, 1007));
            }
        }
    }
}
