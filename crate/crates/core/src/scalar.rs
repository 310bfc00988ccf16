//! Exact rational scalars and p-adic valuation helpers.
//!
//! The whole engine works over the local ring Z_(p): rationals whose reduced
//! denominator is coprime to p. `Scalar` is a plain `BigRational`, always kept
//! reduced by the `num` crate; p-locality is an invariant enforced where
//! matrices and polynomial tables are built, not by the type itself, because
//! the formal-group logarithm genuinely needs denominators divisible by p
//! before the final integrality check.

use crate::Prime;
use num::{BigInt, BigRational, One, Signed, Zero};
use num_integer::Integer;

pub type Scalar = BigRational;

/// Scalar from an integer.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Scalar from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exponent of p in a nonzero integer.
fn int_valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0u32;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation; `None` for zero. Negative for denominators divisible by p.
pub fn valuation(x: &Scalar, p: Prime) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let vn = int_valuation(x.numer(), p.get()) as i64;
    let vd = int_valuation(x.denom(), p.get()) as i64;
    Some(vn - vd)
}

/// Whether x lies in Z_(p): zero, or valuation >= 0.
pub fn is_p_local(x: &Scalar, p: Prime) -> bool {
    valuation(x, p).map_or(true, |v| v >= 0)
}

/// Splits a nonzero p-local scalar as p^e * u with u a unit of Z_(p).
pub fn unit_and_exponent(x: &Scalar, p: Prime) -> (Scalar, u32) {
    let v = valuation(x, p).expect("zero scalar has no unit decomposition");
    assert!(v >= 0, "scalar is not p-local");
    let pow = BigRational::from_integer(BigInt::from(p.get()).pow(v as u32));
    (x / pow, v as u32)
}

/// Canonical representative in [0, p^e) of a p-local scalar modulo p^e.
pub fn residue(x: &Scalar, p: Prime, e: u32) -> BigInt {
    let m = BigInt::from(p.get()).pow(e);
    if x.is_zero() {
        return BigInt::zero();
    }
    assert!(is_p_local(x, p), "scalar is not p-local");
    let inv = mod_inverse(x.denom(), &m).expect("denominator invertible mod p^e");
    ((x.numer() * inv) % &m + &m) % &m
}

/// Reduction of a p-local scalar mod p, as an element of [0, p).
pub fn mod_p(x: &Scalar, p: Prime) -> u64 {
    let r = residue(x, p, 1);
    let (_, digits) = r.to_u64_digits();
    *digits.first().unwrap_or(&0)
}

/// Inverse of a mod m, when gcd(a, m) = 1.
fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(((e.x % m) + m) % m)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&int(0), p3()), None);
        assert_eq!(valuation(&int(1), p3()), Some(0));
        assert_eq!(valuation(&int(9), p3()), Some(2));
        assert_eq!(valuation(&int(-18), p3()), Some(2));
        assert_eq!(valuation(&ratio(1, 3), p3()), Some(-1));
        assert_eq!(valuation(&ratio(5, 7), p3()), Some(0));
    }

    #[test]
    fn locality() {
        assert!(is_p_local(&int(0), p3()));
        assert!(is_p_local(&ratio(5, 7), p3()));
        assert!(!is_p_local(&ratio(1, 3), p3()));
    }

    #[test]
    fn unit_decomposition() {
        let (u, e) = unit_and_exponent(&int(18), p3());
        assert_eq!(e, 2);
        assert_eq!(u, int(2));
        let (u, e) = unit_and_exponent(&ratio(5, 7), p3());
        assert_eq!(e, 0);
        assert_eq!(u, ratio(5, 7));
    }

    #[test]
    fn residues() {
        // 5/7 mod 3: 7^{-1} = 1 mod 3, so 5*1 = 2 mod 3.
        assert_eq!(mod_p(&ratio(5, 7), p3()), 2);
        // -8 mod 3 = 1: the p-series coefficient congruence relies on this.
        assert_eq!(mod_p(&int(-8), p3()), 1);
        assert_eq!(residue(&int(-8), p3(), 2), BigInt::from(1));
        assert_eq!(residue(&int(12), p3(), 2), BigInt::from(3));
    }
}
