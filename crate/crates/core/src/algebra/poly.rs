use std::cmp::Ordering;

use super::{FieldElement, FieldSpec, FiniteField};
use crate::error::{Error, Result};

/// Dense univariate polynomial over `F_q`, lowest coefficient first, with no
/// trailing zero coefficients. The zero polynomial has no coefficients and
/// degree `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.0 == 0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Key for the place ordering: degree first, then coefficients from the
    /// top down.
    pub fn lex_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// `F_q[T]` with the usual ring operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: FieldSpec,
}

impl PolyRing {
    pub fn new(field: FieldSpec) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn one(&self) -> Poly {
        Poly::constant(FieldElement(1))
    }

    /// The variable `T`.
    pub fn var(&self) -> Poly {
        Poly::from_coeffs(vec![FieldElement(0), FieldElement(1)])
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| self.field.elem(c)).collect())
    }

    pub fn monomial(&self, c: FieldElement, n: usize) -> Poly {
        let mut coeffs = vec![FieldElement(0); n + 1];
        coeffs[n] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn is_monic(&self, a: &Poly) -> bool {
        a.leading() == FieldElement(1)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.field.add(&a.coeff(i), &b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly, c: FieldElement) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|x| self.field.mul(x, &c)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = &self.field;
        let mut out = vec![FieldElement(0); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.0 == 0 {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::ZeroPolynomial)?;
        let f = &self.field;
        let lead_inv = f.inv(&b.leading()).expect("nonzero leading coefficient");
        let mut rem = a.coeffs.clone();
        if rem.len() < b.coeffs.len() {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut quot = vec![FieldElement(0); rem.len() - db];
        for top in (db..rem.len()).rev() {
            let c = f.mul(&rem[top], &lead_inv);
            if c.0 == 0 {
                continue;
            }
            quot[top - db] = c;
            for (j, bj) in b.coeffs.iter().enumerate() {
                let idx = top - db + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, bj));
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divrem(a, b)?.1)
    }

    pub fn make_monic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let inv = self.field.inv(&a.leading()).expect("nonzero");
        self.scale(a, inv)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.make_monic(&x)
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m).expect("nonzero modulus")
    }

    pub fn powmod(&self, a: &Poly, mut e: u64, m: &Poly) -> Poly {
        let mut acc = self.rem(&self.one(), m).expect("nonzero modulus");
        let mut base = self.rem(a, m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(&base, &base, m);
            }
        }
        acc
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        Poly::from_coeffs(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.field.mul(c, &self.field.elem(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, a: &Poly, x: FieldElement) -> FieldElement {
        a.coeffs
            .iter()
            .rev()
            .fold(FieldElement(0), |acc, c| self.field.add(&self.field.mul(&acc, &x), c))
    }

    /// Largest `e` with `pi^e | a`; `None` for the zero polynomial.
    pub fn valuation(&self, a: &Poly, pi: &Poly) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut e = 0;
        let mut cur = a.clone();
        loop {
            let (qt, r) = self.divrem(&cur, pi).expect("nonzero place");
            if !r.is_zero() {
                return Some(e);
            }
            cur = qt;
            e += 1;
        }
    }

    /// Exact quotient by `pi^e`.
    pub fn div_exact_pow(&self, a: &Poly, pi: &Poly, e: u32) -> Poly {
        let mut cur = a.clone();
        for _ in 0..e {
            let (qt, r) = self.divrem(&cur, pi).expect("nonzero place");
            debug_assert!(r.is_zero());
            cur = qt;
        }
        cur
    }

    /// `S^n * a(1/S)` for `n >= deg a`.
    pub fn reverse_to(&self, a: &Poly, n: usize) -> Poly {
        let mut coeffs = vec![FieldElement(0); n + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            coeffs[n - i] = *c;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn render(&self, a: &Poly) -> String {
        render_with(&self.field, a, "T")
    }

    pub fn parse(&self, s: &str) -> Result<Poly> {
        parse_poly(self, s)
    }
}

pub(crate) fn render_with(field: &FieldSpec, a: &Poly, var: &str) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in a.coeffs.iter().enumerate().rev() {
        if c.0 == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        let cs = field.render(*c);
        match (i, c.0) {
            (0, _) => out.push_str(&cs),
            (1, 1) => out.push_str(var),
            (1, _) => out.push_str(&format!("{cs}*{var}")),
            (_, 1) => out.push_str(&format!("{var}^{i}")),
            _ => out.push_str(&format!("{cs}*{var}^{i}")),
        }
    }
    out
}

/// Parse the polynomial text grammar: integer coefficients, the variable `T`,
/// the field generator `y` (extension fields only), `+ - * ^` and
/// parentheses. Integer coefficients are reduced mod p.
pub fn parse_poly(ring: &PolyRing, s: &str) -> Result<Poly> {
    let mut p = Parser { ring, src: s.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let t = self.term()?;
                self.ring.neg(&t)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = self.ring.mul(&acc, &f);
                }
                // implicit multiplication such as `4T` or `2(T+1)`
                Some(c) if c == b'T' || c == b'y' || c == b'(' => {
                    let f = self.power()?;
                    acc = self.ring.mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u64::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'T') => {
                self.pos += 1;
                Ok(self.ring.var())
            }
            Some(b'y') => {
                self.pos += 1;
                let f = self.ring.field();
                if f.is_prime_field() {
                    return Err(self.err("generator y is only available for extension fields"));
                }
                Ok(Poly::constant(f.generator()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let p = self.ring.field().p() as u128;
                Ok(self.ring.from_ints(&[(n % p) as i64]))
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn integer(&mut self) -> Result<u128> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u128>()
            .map_err(|_| self.err("integer too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PolyRing {
        PolyRing::new(FieldSpec::prime(5).unwrap())
    }

    #[test]
    fn parse_and_render() {
        let r = f5();
        let p = r.parse("T^3+4*T+2").unwrap();
        assert_eq!(p.coeffs(), &[FieldElement(2), FieldElement(4), FieldElement(0), FieldElement(1)]);
        assert_eq!(r.render(&p), "T^3+4*T+2");
        // coefficients reduced mod 5, unary minus
        let q = r.parse("-T + 7").unwrap();
        assert_eq!(r.render(&q), "4*T+2");
        let z = r.parse("(T+1)^2 - T^2 - 2*T - 1").unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn parse_errors() {
        let r = f5();
        assert!(matches!(r.parse("T^"), Err(Error::Parse(_))));
        assert!(matches!(r.parse("x+1"), Err(Error::Parse(_))));
        assert!(matches!(r.parse("y"), Err(Error::Parse(_))));
    }

    #[test]
    fn generator_in_extension() {
        let f = FieldSpec::new(5, 2, None).unwrap();
        let r = PolyRing::new(f.clone());
        let p = r.parse("y*T + y^2").unwrap();
        assert_eq!(p.coeff(1), f.generator());
        assert_eq!(p.coeff(0), FieldElement(3));
    }

    #[test]
    fn divrem_identity() {
        let r = f5();
        let a = r.parse("T^5+3*T^2+1").unwrap();
        let b = r.parse("2*T^2+T+4").unwrap();
        let (qt, rm) = r.divrem(&a, &b).unwrap();
        assert_eq!(r.add(&r.mul(&qt, &b), &rm), a);
        assert!(rm.degree().unwrap() < 2);
    }

    #[test]
    fn valuation_counts() {
        let r = f5();
        let t = r.var();
        let a = r.mul(&r.pow(&t, 3), &r.parse("T+1").unwrap());
        assert_eq!(r.valuation(&a, &t), Some(3));
        assert_eq!(r.valuation(&Poly::zero(), &t), None);
    }
}
