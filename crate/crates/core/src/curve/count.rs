//! Counting points of `y^2 = x^3 + A x + B` over a finite field.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{arith::isqrt, FiniteField};
use crate::error::{Error, Result};

/// Fields at most this large are counted by a full character sum.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

/// Ambiguous baby-step/giant-step runs fall back to a character sum below
/// this size instead of failing.
const FALLBACK_LIMIT: u64 = 1 << 22;

/// Points tried before giving up on pinning the order.
const MAX_POINTS: usize = 48;

/// Knobs for point counting. The result never depends on `seed`; only the
/// random points visited by baby-step/giant-step do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountConfig {
    pub threshold: u64,
    pub seed: u64,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { threshold: EXHAUSTIVE_LIMIT, seed: 0 }
    }
}

impl CountConfig {
    /// Generator for one unit of work, keyed so that results do not depend on
    /// scheduling.
    pub fn rng(&self, key: u64) -> ChaCha8Rng {
        use rand::SeedableRng;
        ChaCha8Rng::seed_from_u64(splitmix(self.seed ^ splitmix(key)))
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    Exhaustive,
    Bsgs,
    /// Baby-step/giant-step left several candidates; a character sum decided.
    BsgsFallback,
}

fn check_nonsingular<F: FiniteField>(f: &F, a: &F::Elem, b: &F::Elem) -> Result<()> {
    let a3 = f.mul(&f.square(a), a);
    let d = f.add(&f.mul(&f.from_int(4), &a3), &f.mul(&f.from_int(27), &f.square(b)));
    if f.is_zero(&d) {
        Err(Error::SingularReduction)
    } else {
        Ok(())
    }
}

#[inline]
fn rhs<F: FiniteField>(f: &F, a: &F::Elem, b: &F::Elem, x: &F::Elem) -> F::Elem {
    // x^3 + a x + b = x (x^2 + a) + b
    f.add(&f.mul(x, &f.add(&f.square(x), a)), b)
}

/// `#E(F)` including the point at infinity, by summing the quadratic
/// character over all abscissae.
pub fn count_exhaustive<F: FiniteField>(f: &F, a: &F::Elem, b: &F::Elem) -> Result<u64> {
    check_nonsingular(f, a, b)?;
    let q = f.order();
    let mut n: u64 = 1;
    if f.fast_character() {
        for i in 0..q {
            let y2 = rhs(f, a, b, &f.element(i));
            if f.is_zero(&y2) {
                n += 1;
            } else if f.is_square(&y2) {
                n += 2;
            }
        }
        return Ok(n);
    }
    let mut square = vec![false; q as usize];
    for i in 0..q {
        let x = f.element(i);
        square[f.index_of(&f.square(&x)) as usize] = true;
    }
    for i in 0..q {
        let y2 = rhs(f, a, b, &f.element(i));
        if f.is_zero(&y2) {
            n += 1;
        } else if square[f.index_of(&y2) as usize] {
            n += 2;
        }
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Pt<E> {
    Inf,
    Aff(E, E),
}

struct Group<'a, F: FiniteField> {
    f: &'a F,
    a: F::Elem,
}

impl<F: FiniteField> Group<'_, F> {
    fn neg(&self, p: &Pt<F::Elem>) -> Pt<F::Elem> {
        match p {
            Pt::Inf => Pt::Inf,
            Pt::Aff(x, y) => Pt::Aff(x.clone(), self.f.neg(y)),
        }
    }

    fn add(&self, p: &Pt<F::Elem>, q: &Pt<F::Elem>) -> Pt<F::Elem> {
        let f = self.f;
        let (x1, y1, x2, y2) = match (p, q) {
            (Pt::Inf, _) => return q.clone(),
            (_, Pt::Inf) => return p.clone(),
            (Pt::Aff(x1, y1), Pt::Aff(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if f.is_zero(&f.add(y1, y2)) {
                return Pt::Inf;
            }
            // tangent slope (3 x^2 + a) / 2y
            let num = f.add(&f.mul(&f.from_int(3), &f.square(x1)), &self.a);
            let den = f.add(y1, y1);
            f.mul(&num, &f.inv(&den).expect("nonzero"))
        } else {
            let den = f.sub(x2, x1);
            f.mul(&f.sub(y2, y1), &f.inv(&den).expect("nonzero"))
        };
        let x3 = f.sub(&f.sub(&f.square(&lambda), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        Pt::Aff(x3, y3)
    }

    fn mul(&self, p: &Pt<F::Elem>, mut n: u64) -> Pt<F::Elem> {
        let mut acc = Pt::Inf;
        let mut base = p.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    /// All `t` in `[-w, w]` with `[t] P = R`.
    fn solve_in_window(&self, p: &Pt<F::Elem>, r: &Pt<F::Elem>, w: u64) -> Vec<i64> {
        let m = (isqrt(w as u128) as u64).max(1);
        let mut baby: Vec<(u64, u64, F::Elem)> = Vec::with_capacity(m as usize);
        // multiples of the order of P among the baby steps
        let mut trivial = vec![0i64];
        let mut cur = Pt::Inf;
        for j in 1..=m {
            cur = self.add(&cur, p);
            match &cur {
                Pt::Aff(x, y) => baby.push((self.f.index_of(x), j, y.clone())),
                Pt::Inf => trivial.push(j as i64),
            }
        }
        baby.sort_by_key(|e| (e.0, e.1));
        let span = 2 * m + 1;
        let giant = self.mul(p, span);
        let steps = w.div_ceil(span) as i64;
        // s = R - i * giant, starting at i = -steps
        let mut s = self.add(r, &self.mul(&giant, steps as u64));
        let neg_giant = self.neg(&giant);
        let mut out = Vec::new();
        for i in -steps..=steps {
            let base = i * span as i64;
            match &s {
                Pt::Inf => {
                    for &j in &trivial {
                        out.push(base + j);
                        out.push(base - j);
                    }
                }
                Pt::Aff(x, y) => {
                    let key = self.f.index_of(x);
                    let start = baby.partition_point(|e| e.0 < key);
                    for (_, j, yj) in baby[start..].iter().take_while(|e| e.0 == key) {
                        let j = *j as i64;
                        if yj == y {
                            out.push(base + j);
                        }
                        if self.f.is_zero(&self.f.add(yj, y)) {
                            out.push(base - j);
                        }
                    }
                }
            }
            s = self.add(&s, &neg_giant);
        }
        out.retain(|t| t.unsigned_abs() <= w);
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Baby-step/giant-step determination of `#E(F)`.
///
/// Each random abscissa `x` with `u = x^3 + A x + B != 0` gives the point
/// `(u x, u^2)` on `y^2 = x^3 + A u^2 x + B u^3`, which is `E` when `u` is a
/// square and its quadratic twist otherwise, so both groups constrain the
/// trace without any square roots. Returns `Ok(None)` when the candidates in
/// the Hasse interval could not be narrowed to one.
pub fn count_bsgs<F: FiniteField>(
    f: &F,
    a: &F::Elem,
    b: &F::Elem,
    rng: &mut ChaCha8Rng,
) -> Result<Option<u64>> {
    check_nonsingular(f, a, b)?;
    let q = f.order();
    let w = isqrt(4 * q as u128) as u64;
    let mut cands: Option<Vec<i64>> = None;
    for _ in 0..MAX_POINTS {
        let x = f.element(rng.gen_range(0..q));
        let u = rhs(f, a, b, &x);
        if f.is_zero(&u) {
            continue;
        }
        let u2 = f.square(&u);
        let g = Group { f, a: f.mul(a, &u2) };
        let p = Pt::Aff(f.mul(&u, &x), u2);
        let r = g.mul(&p, q + 1);
        let sign = if f.is_square(&u) { 1 } else { -1 };
        let found: Vec<i64> = g.solve_in_window(&p, &r, w).into_iter().map(|t| sign * t).collect();
        let next = match cands.take() {
            None => found,
            Some(prev) => prev.into_iter().filter(|t| found.contains(t)).collect(),
        };
        if next.len() == 1 {
            return Ok(Some((q as i64 + 1 - next[0]) as u64));
        }
        if next.is_empty() {
            // the true trace always survives, so this means broken arithmetic
            return Err(Error::AmbiguousOrder(q));
        }
        cands = Some(next);
    }
    Ok(None)
}

/// `#E(F)` with the strategy picked by field size.
pub fn count_points<F: FiniteField>(
    f: &F,
    a: &F::Elem,
    b: &F::Elem,
    threshold: u64,
    rng: &mut ChaCha8Rng,
) -> Result<(u64, CountMethod)> {
    if f.order() <= threshold {
        return Ok((count_exhaustive(f, a, b)?, CountMethod::Exhaustive));
    }
    match count_bsgs(f, a, b, rng)? {
        Some(n) => Ok((n, CountMethod::Bsgs)),
        None if f.order() <= FALLBACK_LIMIT => {
            Ok((count_exhaustive(f, a, b)?, CountMethod::BsgsFallback))
        }
        None => Err(Error::AmbiguousOrder(f.order())),
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::algebra::{FieldSpec, QuadExt, ZechField};

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn small_prime_field_examples() {
        let f = FieldSpec::prime(5).unwrap();
        let e = |n| f.elem(n);
        assert_eq!(count_exhaustive(&f, &e(1), &e(0)).unwrap(), 4);
        assert_eq!(count_exhaustive(&f, &e(0), &e(1)).unwrap(), 6);
        assert_eq!(count_exhaustive(&f, &e(0), &e(0)), Err(Error::SingularReduction));
    }

    fn brute_points(p: i64, a: i64, b: i64) -> u64 {
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                if (y * y - (x * x * x + a * x + b)).rem_euclid(p) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn bsgs_agrees_on_prime_fields() {
        let mut resolved = 0;
        let mut total = 0;
        for p in [101i64, 503, 1009] {
            let f = FieldSpec::prime(p as u64).unwrap();
            for (a, b) in [(1, 1), (2, 3), (0, 7), (5, 0), (13, 17)] {
                let want = brute_points(p, a, b);
                let mut r = rng();
                total += 1;
                if let Some(n) = count_bsgs(&f, &f.elem(a), &f.elem(b), &mut r).unwrap() {
                    assert_eq!(n, want, "p={p} a={a} b={b}");
                    resolved += 1;
                }
            }
        }
        assert!(resolved * 10 >= total * 9);
    }

    #[test]
    fn bsgs_agrees_on_table_fields() {
        let z = ZechField::cached(7, 4).unwrap();
        let quad = QuadExt::new(ZechField::cached(5, 3).unwrap());
        let mut r = rng();
        for i in 0..40u64 {
            let (a, b) = (z.element(i * 37 % 2401), z.element(i * 91 % 2401));
            if let Ok(n) = count_exhaustive(&z, &a, &b) {
                let (m, _) = count_points(&z, &a, &b, 0, &mut r).unwrap();
                assert_eq!(n, m);
            }
            let (a, b) = (quad.element(i * 1013 % 15625), quad.element(i * 7919 % 15625));
            if let Ok(n) = count_exhaustive(&quad, &a, &b) {
                let (m, _) = count_points(&quad, &a, &b, 0, &mut r).unwrap();
                assert_eq!(n, m);
            }
        }
    }

    #[test]
    fn counts_respect_hasse() {
        let z = ZechField::cached(5, 8).unwrap();
        let mut r = rng();
        let q = z.order() as i64;
        for i in 1..30u64 {
            let (a, b) = (z.element(i * 4099 % 390625), z.element(i * 65537 % 390625));
            let (n, method) = count_points(&z, &a, &b, EXHAUSTIVE_LIMIT, &mut r).unwrap();
            assert_eq!(method, CountMethod::Bsgs);
            let t = q + 1 - n as i64;
            assert!(t * t <= 4 * q);
        }
    }
}
