//! Table-driven fields for bulk work over `F_{q^d}`: Zech logarithms for
//! fields up to [`ZECH_LIMIT`] elements and quadratic and cubic towers on top of them.

use std::sync::{Arc, Mutex};

use super::arith::factorize;
use super::{FieldElement, FieldSpec, FiniteField, Poly, PolyRing};
use crate::error::{Error, Result};

/// Largest field built directly from log tables (three `u32` tables of this size).
pub const ZECH_LIMIT: u64 = 1 << 22;

/// `F_{p^n}` with every nonzero element stored as its discrete log to a fixed
/// primitive root. The value `order - 1` encodes zero.
#[derive(Clone, Debug)]
pub struct ZechField {
    p: u64,
    n: u32,
    order: u64,
    /// `order - 1`, also the zero sentinel
    m: u32,
    zech: Arc<[u32]>,
    /// log of the constants `0..p`
    const_log: Arc<[u32]>,
    modulus: Vec<u64>,
}

static CACHE: Mutex<Vec<ZechField>> = Mutex::new(Vec::new());

impl ZechField {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        let order = p
            .checked_pow(n)
            .filter(|&q| q <= ZECH_LIMIT)
            .ok_or(Error::FieldTooLarge(p, n))?;
        let m = (order - 1) as u32;
        let prime = FieldSpec::prime(p)?;
        let modulus = primitive_modulus(&prime, n as usize);

        let n_us = n as usize;
        let mut log = vec![m; order as usize];
        let mut exp = vec![0u32; m as usize];
        let mut digits = vec![0u64; n_us];
        digits[0] = 1;
        let pw: Vec<u64> = (0..n).map(|i| p.pow(i)).collect();
        for i in 0..m as usize {
            let code: u64 = digits.iter().zip(&pw).map(|(d, w)| d * w).sum();
            exp[i] = code as u32;
            log[code as usize] = i as u32;
            // multiply by the generator y
            let top = digits[n_us - 1];
            for j in (1..n_us).rev() {
                digits[j] = digits[j - 1];
            }
            digits[0] = 0;
            if top != 0 {
                for j in 0..n_us {
                    digits[j] = (digits[j] + (p - modulus[j]) * top) % p;
                }
            }
        }
        let zech: Arc<[u32]> = exp
            .iter()
            .map(|&code| {
                let code = code as u64;
                let bumped = if code % p == p - 1 { code + 1 - p } else { code + 1 };
                log[bumped as usize]
            })
            .collect();
        let const_log: Arc<[u32]> = (0..p as usize).map(|c| log[c]).collect();
        Ok(ZechField { p, n, order, m, zech, const_log, modulus })
    }

    /// Shared instance; tables are built once per `(p, n)` and process.
    pub fn cached(p: u64, n: u32) -> Result<Self> {
        let mut cache = CACHE.lock().expect("zech cache poisoned");
        if let Some(f) = cache.iter().find(|f| f.p == p && f.n == n) {
            return Ok(f.clone());
        }
        let f = ZechField::new(p, n)?;
        cache.push(f.clone());
        Ok(f)
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Primitive polynomial over `F_p` defining this field, lowest coefficient first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    fn modn(&self, x: u64) -> u32 {
        (x % self.m as u64) as u32
    }

    /// `g^e` for the fixed primitive root `g`.
    pub fn from_log(&self, e: u64) -> u32 {
        self.modn(e)
    }
}

/// Least monic polynomial of degree `n` over `F_p` whose root generates the
/// multiplicative group.
fn primitive_modulus(prime: &FieldSpec, n: usize) -> Vec<u64> {
    let p = prime.q();
    if n == 1 {
        // y - g for the least primitive root g
        let order = p - 1;
        let fac = factorize(order);
        let g = (2..p)
            .find(|&g| fac.iter().all(|&(r, _)| super::arith::pow_mod(g, order / r, p) != 1))
            .expect("primitive root exists");
        return vec![p - g, 1];
    }
    let ring = PolyRing::new(prime.clone());
    let order = p.pow(n as u32) - 1;
    let fac = factorize(order);
    let y = ring.var();
    let total = p.pow(n as u32);
    for idx in 0..total {
        let mut coeffs: Vec<FieldElement> = Vec::with_capacity(n + 1);
        let mut v = idx;
        for _ in 0..n {
            coeffs.push(FieldElement(v % p));
            v /= p;
        }
        coeffs.push(FieldElement(1));
        if coeffs[0].0 == 0 {
            continue;
        }
        let f = Poly::from_coeffs(coeffs);
        if ring.powmod(&y, order, &f) != ring.one() {
            continue;
        }
        // order of y is exactly p^n - 1, which forces f irreducible
        if fac.iter().all(|&(r, _)| ring.powmod(&y, order / r, &f) != ring.one()) {
            return f.coeffs().iter().map(|c| c.0).collect();
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

impl FiniteField for ZechField {
    type Elem = u32;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn order(&self) -> u64 {
        self.order
    }

    #[inline]
    fn zero(&self) -> u32 {
        self.m
    }

    #[inline]
    fn one(&self) -> u32 {
        0
    }

    fn from_int(&self, n: i64) -> u32 {
        self.const_log[n.rem_euclid(self.p as i64) as usize]
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == self.m
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let (a, b) = (*a, *b);
        if a == self.m {
            return b;
        }
        if b == self.m {
            return a;
        }
        let d = if b >= a { b - a } else { b + self.m - a };
        let z = self.zech[d as usize];
        if z == self.m {
            return self.m;
        }
        let s = a as u64 + z as u64;
        if s >= self.m as u64 {
            (s - self.m as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == self.m {
            return self.m;
        }
        let h = self.m / 2;
        if *a >= self.m - h {
            *a - (self.m - h)
        } else {
            *a + h
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == self.m || *b == self.m {
            return self.m;
        }
        let s = *a as u64 + *b as u64;
        if s >= self.m as u64 {
            (s - self.m as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == self.m {
            None
        } else if *a == 0 {
            Some(0)
        } else {
            Some(self.m - *a)
        }
    }

    fn pow(&self, a: &u32, e: u64) -> u32 {
        if e == 0 {
            return 0;
        }
        if *a == self.m {
            return self.m;
        }
        ((*a as u128 * e as u128) % self.m as u128) as u32
    }

    fn frobenius(&self, a: &u32) -> u32 {
        self.pow(a, self.p)
    }

    fn fast_character(&self) -> bool {
        true
    }

    #[inline]
    fn is_square(&self, a: &u32) -> bool {
        *a == self.m || *a % 2 == 0
    }

    fn nonsquare(&self) -> u32 {
        1
    }

    fn sqrt(&self, a: &u32) -> Option<u32> {
        if *a == self.m {
            Some(self.m)
        } else if *a % 2 == 0 {
            Some(*a / 2)
        } else {
            None
        }
    }

    #[inline]
    fn element(&self, index: u64) -> u32 {
        index as u32
    }

    #[inline]
    fn index_of(&self, a: &u32) -> u64 {
        *a as u64
    }
}

/// `F_{Q^2} = F_Q[w]/(w^2 - g)` over a Zech field `F_Q`, `g` its primitive root.
#[derive(Clone, Debug)]
pub struct QuadExt {
    base: ZechField,
    /// log of `g^{(p-1)/2}`, the factor picked up by `w` under `x -> x^p`
    frob_twist: u32,
    nonsq: (u32, u32),
}

impl QuadExt {
    pub fn new(base: ZechField) -> Self {
        let frob_twist = base.from_log((base.p - 1) / 2);
        let mut ext = QuadExt { base, frob_twist, nonsq: (0, 0) };
        let q2 = ext.order();
        ext.nonsq = (0..q2)
            .map(|i| ext.element(i))
            .find(|x| !ext.is_square(x))
            .expect("non-square exists");
        ext
    }

    pub fn base(&self) -> &ZechField {
        &self.base
    }

    fn norm(&self, a: &(u32, u32)) -> u32 {
        let f = &self.base;
        let b2g = f.mul(&f.square(&a.1), &1);
        f.sub(&f.square(&a.0), &b2g)
    }
}

impl FiniteField for QuadExt {
    type Elem = (u32, u32);

    fn characteristic(&self) -> u64 {
        self.base.p
    }

    fn order(&self) -> u64 {
        self.base.order * self.base.order
    }

    fn zero(&self) -> (u32, u32) {
        (self.base.m, self.base.m)
    }

    fn one(&self) -> (u32, u32) {
        (0, self.base.m)
    }

    fn from_int(&self, n: i64) -> (u32, u32) {
        (self.base.from_int(n), self.base.m)
    }

    #[inline]
    fn is_zero(&self, a: &(u32, u32)) -> bool {
        a.0 == self.base.m && a.1 == self.base.m
    }

    #[inline]
    fn add(&self, a: &(u32, u32), b: &(u32, u32)) -> (u32, u32) {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }

    #[inline]
    fn neg(&self, a: &(u32, u32)) -> (u32, u32) {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }

    #[inline]
    fn mul(&self, a: &(u32, u32), b: &(u32, u32)) -> (u32, u32) {
        let f = &self.base;
        let re = f.add(&f.mul(&a.0, &b.0), &f.mul(&f.mul(&a.1, &b.1), &1));
        let im = f.add(&f.mul(&a.0, &b.1), &f.mul(&a.1, &b.0));
        (re, im)
    }

    fn inv(&self, a: &(u32, u32)) -> Option<(u32, u32)> {
        let f = &self.base;
        let ni = f.inv(&self.norm(a))?;
        Some((f.mul(&a.0, &ni), f.neg(&f.mul(&a.1, &ni))))
    }

    fn frobenius(&self, a: &(u32, u32)) -> (u32, u32) {
        let f = &self.base;
        (f.frobenius(&a.0), f.mul(&f.frobenius(&a.1), &self.frob_twist))
    }

    fn fast_character(&self) -> bool {
        true
    }

    fn is_square(&self, a: &(u32, u32)) -> bool {
        self.base.is_square(&self.norm(a))
    }

    fn nonsquare(&self) -> (u32, u32) {
        self.nonsq
    }

    #[inline]
    fn element(&self, index: u64) -> (u32, u32) {
        let q = self.base.order;
        (self.base.element(index % q), self.base.element(index / q))
    }

    #[inline]
    fn index_of(&self, a: &(u32, u32)) -> u64 {
        a.0 as u64 + self.base.order * a.1 as u64
    }
}

/// Addition, negation and multiplication of a small Zech field as flat
/// tables, which avoids the branches of Zech addition.
#[derive(Clone, Debug)]
struct Flat {
    n: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
}

/// Base fields up to this order get flat tables.
const FLAT_LIMIT: u64 = 512;

impl Flat {
    fn new(f: &ZechField) -> Option<Self> {
        if f.order() > FLAT_LIMIT {
            return None;
        }
        let n = f.order() as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                add[a as usize * n + b as usize] = f.add(&a, &b) as u16;
                mul[a as usize * n + b as usize] = f.mul(&a, &b) as u16;
            }
        }
        let neg = (0..n as u32).map(|a| f.neg(&a) as u16).collect();
        Some(Flat { n, add, mul, neg })
    }
}

/// `F_{Q^3} = F_Q[w]/(w^3 - c1 w - c0)` over a Zech field `F_Q`. Keeps the
/// tables small when `F_{Q^3}` itself would not fit in cache.
#[derive(Clone, Debug)]
pub struct CubicExt {
    base: ZechField,
    flat: Option<Flat>,
    c0: u32,
    c1: u32,
    /// `w^p` and `w^{2p}`
    wp: [[u32; 3]; 2],
    nonsq: [u32; 3],
}

impl CubicExt {
    pub fn new(base: ZechField) -> Self {
        let f = &base;
        let q = f.order();
        let has_root = |c0: u32, c1: u32| {
            (0..q).map(|i| f.element(i)).any(|x| {
                let x3 = f.mul(&f.square(&x), &x);
                f.is_zero(&f.sub(&f.sub(&x3, &f.mul(&c1, &x)), &c0))
            })
        };
        let (c0, c1) = (0..q)
            .flat_map(|j| (0..q).map(move |i| (i, j)))
            .map(|(i, j)| (f.element(i), f.element(j)))
            .find(|&(c0, c1)| !f.is_zero(&c0) && !has_root(c0, c1))
            .expect("irreducible cubic exists");
        let z = f.zero();
        let flat = Flat::new(f);
        let mut ext = CubicExt { base, flat, c0, c1, wp: [[z; 3]; 2], nonsq: [z; 3] };
        let w = [z, 0, z];
        let wp = ext.pow(&w, ext.base.p);
        ext.wp = [wp, ext.square(&wp)];
        ext.nonsq = (0..ext.order())
            .map(|i| ext.element(i))
            .find(|x| !ext.is_square(x))
            .expect("non-square exists");
        ext
    }

    pub fn base(&self) -> &ZechField {
        &self.base
    }

    #[inline]
    fn ad(&self, a: u32, b: u32) -> u32 {
        match &self.flat {
            Some(t) => t.add[a as usize * t.n + b as usize] as u32,
            None => self.base.add(&a, &b),
        }
    }

    #[inline]
    fn ml(&self, a: u32, b: u32) -> u32 {
        match &self.flat {
            Some(t) => t.mul[a as usize * t.n + b as usize] as u32,
            None => self.base.mul(&a, &b),
        }
    }

    #[inline]
    fn ng(&self, a: u32) -> u32 {
        match &self.flat {
            Some(t) => t.neg[a as usize] as u32,
            None => self.base.neg(&a),
        }
    }

    /// `a * w`, reduced.
    #[inline]
    fn times_w(&self, a: &[u32; 3]) -> [u32; 3] {
        [self.ml(a[2], self.c0), self.ad(a[0], self.ml(a[2], self.c1)), a[1]]
    }

    fn det3(&self, m: [[u32; 3]; 3]) -> u32 {
        // columns m[0], m[1], m[2]
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
            self.ad(self.ml(m[c1][r1], m[c2][r2]), self.ng(self.ml(m[c2][r1], m[c1][r2])))
        };
        let t0 = self.ml(m[0][0], minor(1, 2, 1, 2));
        let t1 = self.ml(m[1][0], minor(1, 2, 0, 2));
        let t2 = self.ml(m[2][0], minor(1, 2, 0, 1));
        self.ad(self.ad(t0, self.ng(t1)), t2)
    }

    fn norm(&self, a: &[u32; 3]) -> u32 {
        let aw = self.times_w(a);
        self.det3([*a, aw, self.times_w(&aw)])
    }
}

impl FiniteField for CubicExt {
    type Elem = [u32; 3];

    fn characteristic(&self) -> u64 {
        self.base.p
    }

    fn order(&self) -> u64 {
        self.base.order.pow(3)
    }

    fn zero(&self) -> [u32; 3] {
        [self.base.m; 3]
    }

    fn one(&self) -> [u32; 3] {
        [0, self.base.m, self.base.m]
    }

    fn from_int(&self, n: i64) -> [u32; 3] {
        [self.base.from_int(n), self.base.m, self.base.m]
    }

    #[inline]
    fn is_zero(&self, a: &[u32; 3]) -> bool {
        a.iter().all(|&x| x == self.base.m)
    }

    #[inline]
    fn add(&self, a: &[u32; 3], b: &[u32; 3]) -> [u32; 3] {
        [self.ad(a[0], b[0]), self.ad(a[1], b[1]), self.ad(a[2], b[2])]
    }

    #[inline]
    fn neg(&self, a: &[u32; 3]) -> [u32; 3] {
        [self.ng(a[0]), self.ng(a[1]), self.ng(a[2])]
    }

    #[inline]
    fn sub(&self, a: &[u32; 3], b: &[u32; 3]) -> [u32; 3] {
        [self.ad(a[0], self.ng(b[0])), self.ad(a[1], self.ng(b[1])), self.ad(a[2], self.ng(b[2]))]
    }

    #[inline]
    fn mul(&self, a: &[u32; 3], b: &[u32; 3]) -> [u32; 3] {
        let m = |x: u32, y: u32| self.ml(x, y);
        let r0 = m(a[0], b[0]);
        let r1 = self.ad(m(a[0], b[1]), m(a[1], b[0]));
        let r2 = self.ad(self.ad(m(a[0], b[2]), m(a[1], b[1])), m(a[2], b[0]));
        let r3 = self.ad(m(a[1], b[2]), m(a[2], b[1]));
        let r4 = m(a[2], b[2]);
        // w^3 = c1 w + c0, w^4 = c1 w^2 + c0 w
        [
            self.ad(r0, m(r3, self.c0)),
            self.ad(self.ad(r1, m(r3, self.c1)), m(r4, self.c0)),
            self.ad(r2, m(r4, self.c1)),
        ]
    }

    fn inv(&self, a: &[u32; 3]) -> Option<[u32; 3]> {
        // first column of the adjugate of the multiplication matrix over its determinant
        let aw = self.times_w(a);
        let aw2 = self.times_w(&aw);
        let m = |r: usize, c: usize| [a, &aw, &aw2][c][r];
        let minor = |c1: usize, c2: usize| {
            self.ad(self.ml(m(1, c1), m(2, c2)), self.ng(self.ml(m(1, c2), m(2, c1))))
        };
        let x = [minor(1, 2), self.ng(minor(0, 2)), minor(0, 1)];
        let det = self.ad(self.ad(self.ml(m(0, 0), x[0]), self.ml(m(0, 1), x[1])), self.ml(m(0, 2), x[2]));
        let d = self.base.inv(&det)?;
        Some([self.ml(x[0], d), self.ml(x[1], d), self.ml(x[2], d)])
    }

    fn frobenius(&self, a: &[u32; 3]) -> [u32; 3] {
        let f = &self.base;
        let m = f.m;
        let b = [f.frobenius(&a[0]), f.frobenius(&a[1]), f.frobenius(&a[2])];
        let t1 = self.mul(&[b[1], m, m], &self.wp[0]);
        let t2 = self.mul(&[b[2], m, m], &self.wp[1]);
        self.add(&self.add(&[b[0], m, m], &t1), &t2)
    }

    fn fast_character(&self) -> bool {
        true
    }

    fn is_square(&self, a: &[u32; 3]) -> bool {
        // the norm to F_Q preserves the quadratic character in odd degree
        self.base.is_square(&self.norm(a))
    }

    fn nonsquare(&self) -> [u32; 3] {
        self.nonsq
    }

    #[inline]
    fn element(&self, index: u64) -> [u32; 3] {
        let q = self.base.order;
        [self.base.element(index % q), self.base.element(index / q % q), self.base.element(index / q / q)]
    }

    #[inline]
    fn index_of(&self, a: &[u32; 3]) -> u64 {
        let q = self.base.order;
        a[0] as u64 + q * (a[1] as u64 + q * a[2] as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms<F: FiniteField>(f: &F, samples: u64) {
        let q = f.order();
        let step = (q / samples).max(1);
        let elems: Vec<F::Elem> = (0..q).step_by(step as usize).map(|i| f.element(i)).collect();
        for a in &elems {
            assert_eq!(f.element(f.index_of(a)), *a);
            assert_eq!(f.add(a, &f.neg(a)), f.zero());
            if !f.is_zero(a) {
                assert_eq!(f.mul(a, &f.inv(a).unwrap()), f.one());
            }
            assert_eq!(f.pow(a, q), *a);
            assert_eq!(f.frobenius(a), f.pow(a, f.characteristic()));
            if let Some(r) = f.sqrt(a) {
                assert_eq!(f.square(&r), *a);
            } else {
                assert!(!f.is_square(a));
            }
            for b in elems.iter().take(7) {
                let lhs = f.mul(&f.add(a, b), b);
                let rhs = f.add(&f.mul(a, b), &f.square(b));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn zech_small_fields() {
        for (p, n) in [(5u64, 1u32), (5, 2), (7, 3), (5, 6), (11, 2)] {
            let f = ZechField::new(p, n).unwrap();
            check_axioms(&f, 400);
            assert_eq!(f.from_int(p as i64 - 1), f.neg(&f.one()));
        }
    }

    #[test]
    fn zech_counts_squares() {
        let f = ZechField::new(5, 4).unwrap();
        let squares = (0..f.order()).filter(|&i| f.is_square(&f.element(i))).count() as u64;
        assert_eq!(squares, (f.order() - 1) / 2 + 1);
    }

    #[test]
    fn quadratic_tower() {
        let f = QuadExt::new(ZechField::new(5, 2).unwrap());
        assert_eq!(f.order(), 625);
        check_axioms(&f, 625);
        let g = QuadExt::new(ZechField::new(7, 3).unwrap());
        check_axioms(&g, 2000);
    }

    #[test]
    fn cubic_tower() {
        let f = CubicExt::new(ZechField::new(5, 1).unwrap());
        assert_eq!(f.order(), 125);
        check_axioms(&f, 125);
        let squares = (0..125).filter(|&i| f.is_square(&f.element(i))).count();
        assert_eq!(squares, 63);
        let g = CubicExt::new(ZechField::new(5, 3).unwrap());
        check_axioms(&g, 3000);
        // base too large for flat tables
        let h = CubicExt::new(ZechField::new(23, 2).unwrap());
        assert!(h.flat.is_none());
        check_axioms(&h, 3000);
    }

    #[test]
    fn too_large_rejected() {
        assert!(matches!(ZechField::new(5, 11), Err(Error::FieldTooLarge(5, 11))));
    }
}
