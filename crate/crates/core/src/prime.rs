//! Validated prime numbers.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A prime number, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_primes_rejects_composites() {
        for p in [2u64, 3, 5, 7, 11, 13, 97] {
            assert!(Prime::new(p).is_ok(), "{p} should be prime");
        }
        for n in [0u64, 1, 4, 6, 9, 15, 91, 100] {
            assert!(Prime::new(n).is_err(), "{n} should be rejected");
        }
    }
}
