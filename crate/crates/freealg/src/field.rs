//! Exact coefficient fields: the rationals and prime fields F_p.
//!
//! The field is a runtime value (the prime p is data, not a type parameter),
//! so arithmetic goes through a field object rather than bare operator
//! overloads. Elements of different prime fields never mix: binary operations
//! on carriers compare field objects and report `MixedFields`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgError;

/// A field of scalars, held as a runtime object.
///
/// All operations are total on canonical representatives except `inv`,
/// which rejects zero.
pub trait Field: Clone + PartialEq + Eq + std::fmt::Debug {
    type Elem: Clone + PartialEq + Eq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, AlgError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, AlgError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// 0 for the rationals, p for F_p.
    fn characteristic(&self) -> u64;

    /// Canonical image of a signed integer.
    #[allow(clippy::wrong_self_convention)]
    fn from_integer(&self, n: i64) -> Self::Elem;

    /// Element from a fraction of big integers. `den` is `None` for plain
    /// integers; prime fields reject explicit fractions.
    #[allow(clippy::wrong_self_convention)]
    fn from_fraction(&self, num: BigInt, den: Option<BigInt>) -> Result<Self::Elem, AlgError>;

    /// Exact n-th root, if one exists in the field.
    fn nth_root(&self, a: &Self::Elem, n: u32) -> Option<Self::Elem>;

    /// Selector string: `"q"` or `"fp:<p>"`. Embedded in structured output.
    fn descriptor(&self) -> String;

    /// Render an element the way the polynomial grammar accepts it.
    fn format_elem(&self, a: &Self::Elem) -> String;
}

/// The field of rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, AlgError> {
        if a.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn from_integer(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_fraction(&self, num: BigInt, den: Option<BigInt>) -> Result<BigRational, AlgError> {
        match den {
            None => Ok(BigRational::from_integer(num)),
            Some(d) if d.is_zero() => Err(AlgError::DivisionByZero),
            Some(d) => Ok(BigRational::new(num, d)),
        }
    }
    fn nth_root(&self, a: &BigRational, n: u32) -> Option<BigRational> {
        if n == 0 {
            return None;
        }
        if a.is_zero() {
            return Some(BigRational::zero());
        }
        if a.is_negative() && n.is_multiple_of(2) {
            return None;
        }
        let num = a.numer().nth_root(n);
        let den = a.denom().nth_root(n);
        let cand = BigRational::new(num, den);
        let mut acc = BigRational::one();
        for _ in 0..n {
            acc *= &cand;
        }
        if acc == *a {
            Some(cand)
        } else {
            None
        }
    }
    fn descriptor(&self) -> String {
        "q".to_string()
    }
    fn format_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// The prime field F_p for a runtime prime p.
///
/// Elements are canonical representatives in `[0, p)`. Products go through
/// 128-bit intermediates, so arithmetic is exact for every `u64` prime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds F_p, rejecting composite or unit moduli by trial division.
    pub fn new(p: u64) -> Result<Self, AlgError> {
        if !is_prime(p) {
            return Err(AlgError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc: u64 = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base, self.p);
            }
            base = mulmod(base, base, self.p);
            exp >>= 1;
        }
        acc
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
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
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Result<u64, AlgError> {
        if *a == 0 {
            return Err(AlgError::DivisionByZero);
        }
        // Fermat: a^(p-2) mod p.
        Ok(self.pow(*a, self.p - 2))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn from_integer(&self, n: i64) -> u64 {
        let p = self.p as i128;
        let mut r = (n as i128) % p;
        if r < 0 {
            r += p;
        }
        r as u64
    }
    fn from_fraction(&self, num: BigInt, den: Option<BigInt>) -> Result<u64, AlgError> {
        match den {
            None => Ok(self.reduce_bigint(&num)),
            Some(_) => Err(AlgError::BadCoefficient {
                pos: 0,
                msg: format!("fractional coefficients are not allowed over F_{}", self.p),
            }),
        }
    }
    fn nth_root(&self, a: &u64, n: u32) -> Option<u64> {
        if n == 0 {
            return None;
        }
        if *a == 0 {
            return Some(0);
        }
        let group = self.p - 1;
        let n64 = n as u64;
        let g = num_integer::gcd(n64, group);
        if g == 1 {
            // x^n is a bijection on the multiplicative group.
            let e = modinv(n64 % group, group)?;
            return Some(self.pow(*a, e));
        }
        // Small-field fallback: scan for a root.
        if self.p <= 1 << 20 {
            return (0..self.p).find(|c| self.pow(*c, n as u64) == *a);
        }
        None
    }
    fn descriptor(&self) -> String {
        format!("fp:{}", self.p)
    }
    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

fn modinv(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    if t < 0 {
        t += m as i128;
    }
    Some(t as u64)
}

/// Parsed form of the `--field` selector.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldSel {
    Q,
    Fp(u64),
}

/// Parses `"q"` or `"fp:<prime>"`. Primality is checked by the
/// `PrimeField` constructor, not here.
pub fn parse_field_selector(s: &str) -> Result<FieldSel, AlgError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldSel::Q);
    }
    if let Some(rest) = s.strip_prefix("fp:") {
        let p: u64 = rest.parse().map_err(|_| AlgError::BadCoefficient {
            pos: 0,
            msg: format!("cannot parse prime in field selector `{s}`"),
        })?;
        return Ok(FieldSel::Fp(p));
    }
    Err(AlgError::BadCoefficient {
        pos: 0,
        msg: format!("unknown field selector `{s}` (expected `q` or `fp:<prime>`)"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_has_characteristic_two() {
        let f = PrimeField::new(2).unwrap();
        assert_eq!(f.add(&1, &1), 0);
    }

    #[test]
    fn rational_product_reduces() {
        let q = Rationals;
        let half = q
            .from_fraction(BigInt::from(1), Some(BigInt::from(2)))
            .unwrap();
        let two_thirds = q
            .from_fraction(BigInt::from(2), Some(BigInt::from(3)))
            .unwrap();
        let third = q
            .from_fraction(BigInt::from(1), Some(BigInt::from(3)))
            .unwrap();
        assert_eq!(q.mul(&half, &two_thirds), third);
    }

    #[test]
    fn f5_inverse_of_two_is_three() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.inv(&2).unwrap(), 3);
    }

    #[test]
    fn p_fold_sum_of_one_vanishes() {
        for p in [2u64, 3, 5, 7, 11] {
            let f = PrimeField::new(p).unwrap();
            let mut acc = f.zero();
            for _ in 0..p {
                acc = f.add(&acc, &f.one());
            }
            assert_eq!(acc, 0, "characteristic check failed for p={p}");
        }
    }

    #[test]
    fn composite_moduli_rejected() {
        assert_eq!(PrimeField::new(4), Err(AlgError::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(AlgError::NotPrime(1)));
        assert_eq!(PrimeField::new(0), Err(AlgError::NotPrime(0)));
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn inverse_of_zero_rejected() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(&0), Err(AlgError::DivisionByZero));
        assert_eq!(
            Rationals.inv(&Rationals.zero()),
            Err(AlgError::DivisionByZero)
        );
    }

    #[test]
    fn nth_roots() {
        let q = Rationals;
        let eight = q.from_integer(8);
        assert_eq!(q.nth_root(&eight, 3), Some(q.from_integer(2)));
        assert_eq!(q.nth_root(&q.from_integer(2), 2), None);

        let f7 = PrimeField::new(7).unwrap();
        // 2 = 4^2 mod 7, and cube roots are a bijection since gcd(3,6)=3... scan path.
        let r = f7.nth_root(&2, 2).unwrap();
        assert_eq!(f7.mul(&r, &r), 2);
    }

    #[test]
    fn selector_round_trip() {
        assert_eq!(parse_field_selector("q").unwrap(), FieldSel::Q);
        assert_eq!(parse_field_selector("fp:5").unwrap(), FieldSel::Fp(5));
        assert!(parse_field_selector("float").is_err());
    }

    #[test]
    fn field_axioms_on_sampled_triples() {
        let f = PrimeField::new(11).unwrap();
        for a in 0..11u64 {
            for b in 0..11u64 {
                for c in 0..11u64 {
                    assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                    assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                    assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                    assert_eq!(
                        f.mul(&a, &f.add(&b, &c)),
                        f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                    );
                }
            }
        }
        for a in 1..11u64 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }
}
