use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::arith::{is_prime, mul_mod, pow_mod};
use super::{is_irreducible, FiniteField, Poly, PolyRing};
use crate::error::{Error, Result};

const MAX_DIGITS: usize = 32;

/// An element of `F_{p^k}`, encoded as the integer `sum c_i p^i` of its
/// coefficient vector over `F_p` in the basis `1, y, .., y^{k-1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElement(pub u64);

/// The finite field `F_q`, `q = p^k`, realised as `F_p[y]/(modulus)`.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

struct Inner {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus over `F_p`, lowest coefficient first. `[0, 1]` for `k = 1`.
    modulus: Vec<u64>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)?;
        if self.inner.k > 1 {
            write!(f, " = F_{}[y]/({:?})", self.inner.p, self.inner.modulus)?;
        }
        Ok(())
    }
}

impl FieldSpec {
    /// Prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// Build `F_{p^k}`. Without an explicit modulus the lexicographically least
    /// monic irreducible of degree `k` is used.
    pub fn new(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 5 {
            return Err(Error::SmallCharacteristic(p));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        if p >= 1 << 32 || k as usize > MAX_DIGITS {
            return Err(Error::FieldTooLarge(p, k));
        }
        let q = p.checked_pow(k).filter(|&q| q < 1 << 62).ok_or(Error::FieldTooLarge(p, k))?;
        let prime = FieldSpec {
            inner: Arc::new(Inner { p, k: 1, q: p, modulus: vec![0, 1] }),
        };
        if k == 1 {
            if let Some(m) = modulus {
                let m: Vec<u64> = m.iter().map(|c| c % p).collect();
                if m.len() != 2 || m[1] != 1 {
                    return Err(Error::ReducibleModulus);
                }
            }
            return Ok(prime);
        }
        let ring = PolyRing::new(prime.clone());
        let modulus = match modulus {
            Some(m) => {
                let poly = Poly::from_coeffs(m.iter().map(|&c| FieldElement(c % p)).collect());
                if poly.degree() != Some(k as usize)
                    || !ring.is_monic(&poly)
                    || !is_irreducible(&ring, &poly)?
                {
                    return Err(Error::ReducibleModulus);
                }
                poly
            }
            None => super::irreducible::least_monic_irreducible(&ring, k as usize),
        };
        let modulus = modulus.coeffs().iter().map(|c| c.0).collect();
        Ok(FieldSpec { inner: Arc::new(Inner { p, k, q, modulus }) })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    /// Defining polynomial over `F_p`, lowest coefficient first.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// The prime subfield.
    pub fn prime_field(&self) -> FieldSpec {
        FieldSpec::prime(self.inner.p).expect("characteristic already validated")
    }

    /// Generator `y` of `F_q` over `F_p` (equals 0 for a prime field, where the
    /// modulus is `y`).
    pub fn generator(&self) -> FieldElement {
        if self.inner.k == 1 {
            FieldElement(0)
        } else {
            FieldElement(self.inner.p)
        }
    }

    pub fn elem(&self, n: i64) -> FieldElement {
        let p = self.inner.p as i64;
        FieldElement(n.rem_euclid(p) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let p = self.inner.p;
        let k = self.inner.k as usize;
        let mut digits = [0u64; 2 * MAX_DIGITS];
        for (i, &c) in coeffs.iter().enumerate() {
            digits[i] = c % p;
        }
        let len = coeffs.len().max(1);
        self.reduce_digits(&mut digits, len);
        self.encode(&digits[..k])
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut out = vec![0; self.inner.k as usize];
        self.decode(a, &mut out);
        out
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.k == 1
    }

    fn decode(&self, a: FieldElement, out: &mut [u64]) {
        let p = self.inner.p;
        let mut v = a.0;
        for d in out.iter_mut() {
            *d = v % p;
            v /= p;
        }
    }

    fn encode(&self, digits: &[u64]) -> FieldElement {
        let p = self.inner.p;
        FieldElement(digits.iter().rev().fold(0u64, |acc, &d| acc * p + d))
    }

    /// Reduce a digit vector of length `len` modulo the defining polynomial.
    fn reduce_digits(&self, digits: &mut [u64], len: usize) {
        let p = self.inner.p;
        let k = self.inner.k as usize;
        let m = &self.inner.modulus;
        for top in (k..len).rev() {
            let c = digits[top] % p;
            if c == 0 {
                continue;
            }
            digits[top] = 0;
            for (j, &mj) in m[..k].iter().enumerate() {
                let idx = top - k + j;
                digits[idx] = (digits[idx] + (p - mj) * c % p) % p;
            }
        }
    }

    /// Human readable rendering: an integer for prime fields, a polynomial in
    /// `y` otherwise.
    pub fn render(&self, a: FieldElement) -> String {
        if self.inner.k == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let t = match (i, ci) {
                (0, c) => c.to_string(),
                (1, 1) => "y".to_string(),
                (1, c) => format!("{c}*y"),
                (i, 1) => format!("y^{i}"),
                (i, c) => format!("{c}*y^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            format!("({})", terms.join("+"))
        }
    }
}

impl FiniteField for FieldSpec {
    type Elem = FieldElement;

    fn characteristic(&self) -> u64 {
        self.inner.p
    }

    fn order(&self) -> u64 {
        self.inner.q
    }

    fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    fn from_int(&self, n: i64) -> FieldElement {
        self.elem(n)
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0 == 0
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut scale = 1u64;
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        FieldElement(out)
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.k == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u64;
        let mut scale = 1u64;
        while x > 0 {
            let d = (p - x % p) % p;
            out += d * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
        }
        FieldElement(out)
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.inner.p;
        if self.inner.k == 1 {
            return FieldElement(mul_mod(a.0, b.0, p));
        }
        let k = self.inner.k as usize;
        let mut da = [0u64; MAX_DIGITS];
        let mut db = [0u64; MAX_DIGITS];
        self.decode(*a, &mut da[..k]);
        self.decode(*b, &mut db[..k]);
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + mul_mod(da[i], db[j], p)) % p;
            }
        }
        self.reduce_digits(&mut prod, 2 * k - 1);
        self.encode(&prod[..k])
    }

    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        if self.inner.k == 1 {
            return Some(FieldElement(pow_mod(a.0, self.inner.p - 2, self.inner.p)));
        }
        Some(self.pow(a, self.inner.q - 2))
    }

    fn element(&self, index: u64) -> FieldElement {
        FieldElement(index)
    }

    fn index_of(&self, a: &FieldElement) -> u64 {
        a.0
    }

    fn is_square(&self, a: &FieldElement) -> bool {
        if self.inner.k == 1 {
            a.0 == 0 || pow_mod(a.0, (self.inner.p - 1) / 2, self.inner.p) == 1
        } else {
            a.0 == 0 || self.pow(a, (self.inner.q - 1) / 2) == FieldElement(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.mul(&FieldElement(3), &FieldElement(4)), FieldElement(2));
        assert_eq!(f.inv(&FieldElement(2)), Some(FieldElement(3)));
        assert_eq!(f.neg(&FieldElement(0)), FieldElement(0));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldSpec::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldSpec::new(3, 1, None).unwrap_err(), Error::SmallCharacteristic(3));
        assert_eq!(FieldSpec::new(2, 3, None).unwrap_err(), Error::SmallCharacteristic(2));
        // y^2 + 1 = (y - 2)(y - 3) over F_5
        assert_eq!(FieldSpec::new(5, 2, Some(&[1, 0, 1])).unwrap_err(), Error::ReducibleModulus);
    }

    #[test]
    fn f25_default_modulus() {
        let f = FieldSpec::new(5, 2, None).unwrap();
        assert_eq!(f.q(), 25);
        assert_eq!(f.modulus(), &[2, 0, 1]);
        let y = f.generator();
        // y^2 = -2 = 3
        assert_eq!(f.mul(&y, &y), FieldElement(3));
    }

    #[test]
    fn fermat_and_inverse_exhaustive() {
        for (p, k) in [(5u64, 1u32), (7, 1), (5, 2), (7, 2), (5, 3), (5, 4)] {
            let f = FieldSpec::new(p, k, None).unwrap();
            let q = f.q();
            for i in 0..q {
                let a = FieldElement(i);
                assert_eq!(f.pow(&a, q), a, "Fermat fails in F_{q}");
                if i != 0 {
                    let ai = f.inv(&a).unwrap();
                    assert_eq!(f.mul(&a, &ai), f.one());
                }
            }
        }
    }

    #[test]
    fn sqrt_matches_squares() {
        let f = FieldSpec::new(7, 2, None).unwrap();
        for i in 0..f.q() {
            let a = FieldElement(i);
            match f.sqrt(&a) {
                Some(r) => assert_eq!(f.square(&r), a),
                None => assert!(!f.is_square(&a)),
            }
        }
    }
}
