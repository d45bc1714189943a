use serde::{Deserialize, Serialize};
use std::fmt;

use super::LinAlgError;

/// The prime field `F_p` for a word-sized prime `p < 2^32`.
///
/// Elements are plain `u64` residues in `[0, p)`; the bound on `p` keeps every
/// product inside a `u64` without widening.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Field {
    p: u64,
}

impl Field {
    pub const MAX_MODULUS: u64 = 1 << 32;

    pub fn new(p: u64) -> Result<Self, LinAlgError> {
        if p >= Self::MAX_MODULUS || !is_prime(p) {
            return Err(LinAlgError::NotPrime(p));
        }
        Ok(Field { p })
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
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

    /// Reduce a signed integer into `[0, p)`.
    pub fn from_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in `(-p/2, p/2]`, used only for display.
    pub fn to_signed(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Default for Field {
    fn default() -> Self {
        Field { p: 101 }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl TryFrom<u64> for Field {
    type Error = LinAlgError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        Field::new(p)
    }
}

impl From<Field> for u64 {
    fn from(f: Field) -> u64 {
        f.p
    }
}

/// Deterministic primality test; trial division is plenty below 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_small_values() {
        for n in [0, 1, 4, 9, 91, 100, 4_294_967_297] {
            assert!(Field::new(n).is_err(), "{n}");
        }
        for p in [2, 3, 5, 101, 65_521, 4_294_967_291] {
            assert!(Field::new(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn inverses() {
        let f = Field::new(101).unwrap();
        for a in 1..101 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.from_i64(-1), 100);
        assert_eq!(f.to_signed(100), -1);
    }
}
