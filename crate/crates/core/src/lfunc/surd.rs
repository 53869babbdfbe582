use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Elements `x + y sqrt(q)` of `Z[sqrt q]`. When `q` is a perfect square the
/// surd part is folded into `x`, so equality is always componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub x: BigInt,
    pub y: BigInt,
}

#[derive(Clone, Debug)]
pub struct SurdRing {
    q: BigInt,
    root: Option<BigInt>,
}

impl SurdRing {
    pub fn new(q: u64) -> Self {
        let r = num_integer_sqrt(q);
        let root = (r * r == q).then(|| BigInt::from(r));
        SurdRing { q: BigInt::from(q), root }
    }

    pub fn is_rational(&self) -> bool {
        self.root.is_some()
    }

    fn norm(&self, x: BigInt, y: BigInt) -> Surd {
        match &self.root {
            Some(r) => Surd { x: x + y * r, y: BigInt::zero() },
            None => Surd { x, y },
        }
    }

    pub fn int(&self, x: impl Into<BigInt>) -> Surd {
        Surd { x: x.into(), y: BigInt::zero() }
    }

    /// `q^(e/2)`.
    pub fn half_power(&self, e: u32) -> Surd {
        let base = num_traits::pow(self.q.clone(), (e / 2) as usize);
        if e % 2 == 0 {
            self.int(base)
        } else {
            self.norm(BigInt::zero(), base)
        }
    }

    pub fn add(&self, a: &Surd, b: &Surd) -> Surd {
        self.norm(&a.x + &b.x, &a.y + &b.y)
    }

    pub fn neg(&self, a: &Surd) -> Surd {
        Surd { x: -&a.x, y: -&a.y }
    }

    pub fn mul(&self, a: &Surd, b: &Surd) -> Surd {
        let x = &a.x * &b.x + &self.q * &a.y * &b.y;
        let y = &a.x * &b.y + &a.y * &b.x;
        self.norm(x, y)
    }

    pub fn is_zero(&self, a: &Surd) -> bool {
        a.x.is_zero() && a.y.is_zero()
    }

    /// Exact sign of `x + y sqrt q`.
    pub fn signum(&self, a: &Surd) -> i32 {
        let sx = sign(&a.x);
        let sy = sign(&a.y);
        if sx == 0 || sx == sy {
            return if sx == 0 { sy } else { sx };
        }
        if sy == 0 {
            return sx;
        }
        // opposite signs: compare x^2 with q y^2
        let lhs = &a.x * &a.x;
        let rhs = &self.q * &a.y * &a.y;
        if lhs > rhs {
            sx
        } else if lhs < rhs {
            sy
        } else {
            0
        }
    }

    pub fn to_f64(&self, a: &Surd) -> f64 {
        let q: f64 = to_f64(&self.q);
        to_f64(&a.x) + to_f64(&a.y) * q.sqrt()
    }

    pub fn one(&self) -> Surd {
        self.int(BigInt::one())
    }
}

fn sign(a: &BigInt) -> i32 {
    if a.is_zero() {
        0
    } else if a.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn to_f64(a: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(a).unwrap_or(f64::NAN)
}

fn num_integer_sqrt(n: u64) -> u64 {
    crate::algebra::arith::isqrt(n as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_signs() {
        let r = SurdRing::new(5);
        let s = r.half_power(1);
        assert_eq!(r.mul(&s, &s), r.int(5));
        assert_eq!(r.half_power(3), Surd { x: 0.into(), y: 5.into() });
        // 2 - sqrt5 < 0, 3 - sqrt5 > 0
        assert_eq!(r.signum(&Surd { x: 2.into(), y: (-1).into() }), -1);
        assert_eq!(r.signum(&Surd { x: 3.into(), y: (-1).into() }), 1);
        let r = SurdRing::new(25);
        assert!(r.is_rational());
        assert_eq!(r.half_power(3), r.int(125));
    }
}
