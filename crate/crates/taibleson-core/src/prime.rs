use crate::{Error, Result};
use num_bigint::BigInt;

/// A prime number, checked at construction.
///
/// Every value in the crate carries the prime it lives over; mixing primes
/// is a usage error surfaced as [`Error::PrimeMismatch`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^k` for `k >= 0` as a big integer.
    pub fn pow(self, k: u32) -> BigInt {
        self.to_bigint().pow(k)
    }

    /// Euler phi of `p^k`: 1 for `k = 0`, else `(p-1) p^{k-1}`.
    pub fn phi_pk(self, k: u32) -> u64 {
        if k == 0 {
            1
        } else {
            (self.0 - 1) * self.0.pow(k - 1)
        }
    }

    pub fn same(self, other: Prime) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::PrimeMismatch {
                left: self.0,
                right: other.0,
            })
        }
    }
}

impl core::fmt::Display for Prime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Trial division is plenty: the primes in play are desk-scale.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
