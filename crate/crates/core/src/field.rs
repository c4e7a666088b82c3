//! Prime-field arithmetic over `F_q` and the exponent ring `Z_{q-1}`.
//!
//! Residues are plain `u64`s. The modulus is capped at `u32::MAX` so that a
//! product of two residues always fits in a `u64` before reduction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported maximum {max}", max = PrimeField::MAX_MODULUS)]
    ModulusTooLarge(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("no primitive element requested for q = {0} (need q >= 3)")]
    NoPrimitiveElement(u64),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
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

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The prime field `F_q`. Cheap to copy; every arithmetic helper works on
/// reduced residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub const MAX_MODULUS: u64 = u32::MAX as u64;

    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q > Self::MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(q));
        }
        if !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        Ok(PrimeField { q })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.q
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u64 {
        v % self.q
    }

    pub fn elem(self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.q,
            modulus: self.q,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(self) -> FieldElement {
        self.elem(1)
    }

    /// All residues `0..q` in increasing order.
    pub fn elements(self) -> std::ops::Range<u64> {
        0..self.q
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let c = a + b;
        if c >= self.q {
            c - self.q
        } else {
            c
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64, FieldError> {
        let a = a % self.q;
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let (mut old_r, mut r) = (a as i64, self.q as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let quot = old_r / r;
            (old_r, r) = (r, old_r - quot * r);
            (old_s, s) = (s, old_s - quot * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(old_s.rem_euclid(self.q as i64) as u64)
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order(self, a: u64) -> Option<u64> {
        let a = a % self.q;
        if a == 0 {
            return None;
        }
        let group = self.q - 1;
        let mut ord = group;
        for p in prime_factors(group) {
            while ord % p == 0 && self.pow(a, ord / p) == 1 {
                ord /= p;
            }
        }
        Some(ord)
    }

    /// Smallest generator of `F_q^*`, searching upward from 2.
    pub fn primitive_element(self) -> Result<FieldElement, FieldError> {
        if self.q < 3 {
            return Err(FieldError::NoPrimitiveElement(self.q));
        }
        let group = self.q - 1;
        let factors = prime_factors(group);
        (2..self.q)
            .find(|&b| factors.iter().all(|&p| self.pow(b, group / p) != 1))
            .map(|b| self.elem(b))
            .ok_or(FieldError::NoPrimitiveElement(self.q))
    }

    /// Discrete logarithm base `beta` by table walk. Only meant for the
    /// small fields the exhaustive oracles operate on.
    pub fn discrete_log(self, beta: u64, a: u64) -> Option<u64> {
        let a = a % self.q;
        if a == 0 {
            return None;
        }
        let mut cur = 1;
        for e in 0..self.q - 1 {
            if cur == a {
                return Some(e);
            }
            cur = self.mul(cur, beta);
        }
        None
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

/// An element of `F_q` carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    pub fn new(value: u64, field: PrimeField) -> Self {
        field.elem(value)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn field(self) -> PrimeField {
        PrimeField { q: self.modulus }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: Self) -> Result<PrimeField, FieldError> {
        if self.modulus != other.modulus {
            return Err(FieldError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(self.field())
    }

    pub fn checked_add(self, other: Self) -> Result<Self, FieldError> {
        let f = self.check(other)?;
        Ok(f.elem(f.add(self.value, other.value)))
    }

    pub fn checked_sub(self, other: Self) -> Result<Self, FieldError> {
        let f = self.check(other)?;
        Ok(f.elem(f.sub(self.value, other.value)))
    }

    pub fn checked_mul(self, other: Self) -> Result<Self, FieldError> {
        let f = self.check(other)?;
        Ok(f.elem(f.mul(self.value, other.value)))
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        let f = self.field();
        Ok(f.elem(f.inv(self.value)?))
    }

    pub fn pow(self, e: u64) -> Self {
        let f = self.field();
        f.elem(f.pow(self.value, e))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `(a * b) mod q`.
pub fn fmul(a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
    a.checked_mul(b)
}

pub fn finv(a: FieldElement) -> Result<FieldElement, FieldError> {
    a.inv()
}

pub fn fpow(a: FieldElement, e: u64) -> FieldElement {
    a.pow(e)
}

pub fn primitive_element(q: u64) -> Result<FieldElement, FieldError> {
    PrimeField::new(q)?.primitive_element()
}

// The operator impls panic on mixed moduli; use the checked_* methods when
// the operands come from untrusted input.
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("field element modulus mismatch")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("field element modulus mismatch")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("field element modulus mismatch")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        let f = self.field();
        f.elem(f.neg(self.value))
    }
}

/// A residue modulo `q - 1`, used for exponent matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentElement {
    value: u64,
    modulus: u64,
}

impl ExponentElement {
    /// Residue of `value` in `Z_{q-1}` for the field `F_q`.
    pub fn for_field(value: u64, field: PrimeField) -> Self {
        Self::new(value, field.modulus() - 1)
    }

    /// Residue in `Z_modulus`; the modulus may be composite.
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus > 0, "exponent modulus must be positive");
        ExponentElement {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value, self.modulus) == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn fmul_examples() {
        let f7 = f(7);
        for a in f7.elements() {
            assert_eq!(fmul(f7.elem(a), f7.one()).unwrap(), f7.elem(a));
        }
        assert_eq!(fmul(f7.elem(3), f7.elem(5)).unwrap().value(), 1);
        assert_eq!(fmul(f7.elem(0), f7.elem(6)).unwrap().value(), 0);
        assert_eq!(
            fmul(f7.elem(3), f(11).elem(3)),
            Err(FieldError::ModulusMismatch(7, 11))
        );
    }

    #[test]
    fn finv_examples() {
        let f7 = f(7);
        assert_eq!(finv(f7.elem(1)).unwrap().value(), 1);
        assert_eq!(finv(f7.elem(3)).unwrap().value(), 5);
        assert_eq!(finv(f7.elem(0)), Err(FieldError::ZeroInverse));
    }

    #[test]
    fn fpow_examples() {
        assert_eq!(fpow(f(7).elem(5), 0).value(), 1);
        assert_eq!(fpow(f(7).elem(3), 3).value(), 6);
        assert_eq!(fpow(f(11).elem(2), 10).value(), 1);
    }

    #[test]
    fn primitive_element_examples() {
        assert_eq!(primitive_element(7).unwrap().value(), 3);
        assert_eq!(primitive_element(11).unwrap().value(), 2);
        assert_eq!(primitive_element(3).unwrap().value(), 2);
        assert_eq!(primitive_element(9), Err(FieldError::NotPrime(9)));
        assert!(primitive_element(2).is_err());
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(PrimeField::new(15), Err(FieldError::NotPrime(15)));
        assert!(matches!(
            PrimeField::new(1 << 33),
            Err(FieldError::ModulusTooLarge(_))
        ));
        assert!(PrimeField::new(4_294_967_291).is_ok());
    }

    #[test]
    fn inverse_and_fermat_exhaustive() {
        for q in (2..=101).filter(|&q| is_prime(q)) {
            let fq = f(q);
            for a in 1..q {
                let inv = fq.inv(a).unwrap();
                assert_eq!(fq.mul(a, inv), 1, "q={q} a={a}");
                assert_eq!(fq.pow(a, q - 1), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn primitive_element_generates_group() {
        for q in (3..=101).filter(|&q| is_prime(q)) {
            let fq = f(q);
            let beta = fq.primitive_element().unwrap().value();
            let mut seen = vec![false; q as usize];
            let mut cur = 1;
            for _ in 0..q - 1 {
                seen[cur as usize] = true;
                cur = fq.mul(cur, beta);
            }
            assert!(seen[1..].iter().all(|&s| s), "q={q} beta={beta}");
            // smallest such generator
            for b in 2..beta {
                assert!(fq.order(b).unwrap() < q - 1);
            }
        }
    }

    #[test]
    fn discrete_log_inverts_pow() {
        let f11 = f(11);
        let beta = f11.primitive_element().unwrap().value();
        for a in 1..11 {
            let e = f11.discrete_log(beta, a).unwrap();
            assert_eq!(f11.pow(beta, e), a);
        }
        assert_eq!(f11.discrete_log(beta, 0), None);
    }

    #[test]
    fn exponent_units() {
        assert!(ExponentElement::new(9, 10).is_unit());
        assert!(!ExponentElement::new(5, 10).is_unit());
        assert!(ExponentElement::new(1, 6).is_unit());
        assert_eq!(ExponentElement::for_field(13, f(11)).value(), 3);
    }
}
