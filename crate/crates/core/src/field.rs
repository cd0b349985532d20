//! Exact scalar fields.
//!
//! Two families are supported: prime fields `F_p` with `p < 2^32` and the
//! rationals backed by arbitrary-precision fractions. Both are exact, so every
//! rank, kernel and residual computed downstream is reproducible bit for bit.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^32)")]
    ModulusTooLarge(u64),
    #[error("cannot parse scalar {text:?}: {reason}")]
    BadScalar { text: String, reason: String },
    #[error("unknown field specification {0:?}")]
    BadSpec(String),
}

/// An exact field. Implementations are small value types carried by every
/// matrix and complex so that fields can be compared at run time.
pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `(-1)^e` as a field element.
    fn sign(&self, e: i64) -> Self::Elem {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.neg(&self.one())
        }
    }

    /// Canonical text form: decimal residue for `F_p`, `n` or `p/q` for `Q`.
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;

    /// Short identifier, `"q"` or `"fp:<p>"`.
    fn spec(&self) -> String;

    /// A small random element (uniform over `F_p`; small fractions over `Q`).
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// A random nonzero element.
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;

    /// Enumerates elements by index; used by exhaustive searches over small fields.
    fn nth_element(&self, i: u64) -> Self::Elem;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 32 {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = *a;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        let t = s.trim();
        let v: i64 = t.parse().map_err(|e: std::num::ParseIntError| FieldError::BadScalar {
            text: s.to_string(),
            reason: e.to_string(),
        })?;
        Ok(self.from_i64(v))
    }
    fn spec(&self) -> String {
        format!("fp:{}", self.p)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn order(&self) -> Option<u64> {
        Some(self.p)
    }
    fn nth_element(&self, i: u64) -> u64 {
        i % self.p
    }
}

/// The rational numbers with arbitrary precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        let t = s.trim();
        let bad = |reason: &str| FieldError::BadScalar {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad("numerator is not an integer"))?;
        let den: BigInt = den.parse().map_err(|_| bad("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        if den.is_negative() {
            return Err(bad("denominator must be positive"));
        }
        Ok(BigRational::new(num, den))
    }
    fn spec(&self) -> String {
        "q".to_string()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let num: i64 = rng.gen_range(-5..=5);
        let den: i64 = if rng.gen_bool(0.25) { rng.gen_range(1..=3) } else { 1 };
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn nth_element(&self, i: u64) -> BigRational {
        // 0, 1, -1, 2, -2, ...
        let k = i.div_ceil(2) as i64;
        self.from_i64(if i % 2 == 1 { k } else { -k })
    }
}

/// Parses a field specification `q` or `fp:<p>`.
pub fn parse_field_spec(spec: &str) -> Result<FieldSpec, FieldError> {
    match spec.trim() {
        "q" | "Q" => Ok(FieldSpec::Rationals),
        s => {
            let p = s
                .strip_prefix("fp:")
                .ok_or_else(|| FieldError::BadSpec(spec.to_string()))?;
            let p: u64 = p.parse().map_err(|_| FieldError::BadSpec(spec.to_string()))?;
            Ok(FieldSpec::Prime(PrimeField::new(p)?))
        }
    }
}

/// Run-time choice of field, dispatched once at program boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(PrimeField),
    Rationals,
}

impl FieldSpec {
    pub fn spec(&self) -> String {
        match self {
            FieldSpec::Prime(f) => f.spec(),
            FieldSpec::Rationals => Rationals.spec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_inverses() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
            assert_eq!(f.add(&a, &f.neg(&a)), 0);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(PrimeField::new(9), Err(FieldError::NotPrime(9)));
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn rational_text_round_trip() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = q.random(&mut rng);
            assert_eq!(q.parse(&q.format(&x)).unwrap(), x);
        }
        assert_eq!(q.format(&q.parse("6/4").unwrap()), "3/2");
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn field_specs() {
        assert_eq!(parse_field_spec("q").unwrap(), FieldSpec::Rationals);
        assert_eq!(parse_field_spec("fp:5").unwrap().spec(), "fp:5");
        assert!(parse_field_spec("fp:6").is_err());
        assert!(parse_field_spec("zz").is_err());
    }
}
