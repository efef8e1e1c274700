//! Exact scalar arithmetic over prime fields `GF(p)` and the rationals.
//!
//! Every algorithm in the crate is generic over [`Field`], so the same code
//! runs over `GF(p)` (residues stored as `u32`) and over `Q` (reduced
//! big-integer fractions).

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot enumerate an infinite field")]
    EnumerationUnsupported,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^31")]
    ModulusTooLarge(u64),
    #[error("invalid field spec `{0}` (expected `gf:p` or `q`)")]
    BadSpec(String),
}

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    PrimeField(u32),
    Rationals,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p > (1 << 31) {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::PrimeField(p) => *p as u64,
            FieldSpec::Rationals => 0,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::PrimeField(p) => write!(f, "gf:{p}"),
            FieldSpec::Rationals => write!(f, "q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix("gf:")
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| FieldError::BadSpec(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

/// Trial division; fields here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic suite of an exact field.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Number of elements, `None` for infinite fields.
    fn size(&self) -> Option<u64>;
    fn elements(&self) -> Result<Vec<Self::Elem>, FieldError>;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn to_json(&self, a: &Self::Elem) -> Value;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn characteristic(&self) -> u64 {
        self.spec().characteristic()
    }
}

/// `GF(p)` with canonical residues `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        match FieldSpec::prime(p)? {
            FieldSpec::PrimeField(p) => Ok(PrimeField { p }),
            FieldSpec::Rationals => unreachable!(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: &u32) -> Result<u32, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    fn size(&self) -> Option<u64> {
        Some(self.p as u64)
    }

    fn elements(&self) -> Result<Vec<u32>, FieldError> {
        Ok((0..self.p).collect())
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    fn to_json(&self, a: &u32) -> Value {
        Value::from(*a)
    }
}

/// The rationals, as reduced big-integer fractions with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn size(&self) -> Option<u64> {
        None
    }

    fn elements(&self) -> Result<Vec<BigRational>, FieldError> {
        Err(FieldError::EnumerationUnsupported)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let num: i64 = rng.gen_range(-6..=6);
        let den: i64 = rng.gen_range(1..=4);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            if let Some(n) = a.numer().to_i64() {
                return Value::from(n);
            }
        }
        let sign = if a.is_negative() { "-" } else { "" };
        Value::from(format!("{sign}{}/{}", a.numer().abs(), a.denom()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_examples() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.add(&2, &2), 1);
        let f11 = PrimeField::new(11).unwrap();
        assert_eq!(f11.inv(&2).unwrap(), 6);
        let r = Rationals;
        assert_eq!(r.add(&q(1, 2), &q(1, 2)), r.one());
    }

    #[test]
    fn errors() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.inv(&0), Err(FieldError::DivisionByZero));
        assert_eq!(Rationals.inv(&Rationals.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(Rationals.elements(), Err(FieldError::EnumerationUnsupported));
        assert_eq!(PrimeField::new(9), Err(FieldError::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(f5.elements().unwrap().len(), 5);
    }

    #[test]
    fn spec_strings() {
        assert_eq!("gf:3".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField(3));
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert!("gf:4".parse::<FieldSpec>().is_err());
        assert!("gf3".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::PrimeField(11).to_string(), "gf:11");
        assert_eq!(FieldSpec::Rationals.to_string(), "q");
    }

    #[test]
    fn axioms_exhaustive_small_primes() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            let all = f.elements().unwrap();
            for a in &all {
                if *a != 0 {
                    assert_eq!(f.mul(a, &f.inv(a).unwrap()), 1, "p={p} a={a}");
                }
                assert_eq!(f.add(a, &f.neg(a)), 0);
                for b in &all {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.sub(&f.add(a, b), b), *a);
                    for c in &all {
                        assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
                        assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn rational_canonical_form() {
        let a = q(2, 4);
        let b = q(-3, -6);
        assert_eq!(a, b);
        assert_eq!(Rationals.to_json(&q(-2, 4)), Value::from("-1/2"));
        assert_eq!(Rationals.to_json(&q(6, 3)), Value::from(2));
    }
}
