use super::{is_irreducible, FieldElement, FieldSpec, FiniteField, Poly, PolyRing};
use crate::error::{Error, Result};

/// Residue field `k_v = F_q[T]/(pi)` of a finite place, kept as a single tower
/// level over `F_q`. Elements are coefficient vectors of length `deg pi`.
#[derive(Clone, Debug)]
pub struct ResidueField {
    ring: PolyRing,
    modulus: Poly,
    degree: usize,
    order: u64,
}

pub type ResElem = Vec<FieldElement>;

/// Build the residue field of the place `pi` (monic irreducible over `base`).
pub fn residue_field(pi: &Poly, base: &FieldSpec) -> Result<ResidueField> {
    let ring = PolyRing::new(base.clone());
    let degree = pi.degree().ok_or(Error::ZeroPolynomial)?;
    if degree == 0 || !ring.is_monic(pi) || !is_irreducible(&ring, pi)? {
        return Err(Error::ReducibleModulus);
    }
    let order = base
        .q()
        .checked_pow(degree as u32)
        .filter(|&n| n < 1 << 62)
        .ok_or(Error::FieldTooLarge(base.q(), degree as u32))?;
    Ok(ResidueField { ring, modulus: pi.clone(), degree, order })
}

impl ResidueField {
    pub fn base(&self) -> &FieldSpec {
        self.ring.field()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Reduction map `F_q[T] -> k_v`.
    pub fn reduce(&self, a: &Poly) -> ResElem {
        let r = self.ring.rem(a, &self.modulus).expect("nonzero modulus");
        self.pad(&r)
    }

    /// Image of `T`, a generator of `k_v` over `F_q`.
    pub fn generator(&self) -> ResElem {
        self.reduce(&self.ring.var())
    }

    pub fn embed(&self, c: FieldElement) -> ResElem {
        let mut v = vec![FieldElement(0); self.degree];
        v[0] = c;
        v
    }

    fn pad(&self, a: &Poly) -> ResElem {
        let mut v = a.coeffs().to_vec();
        v.resize(self.degree, FieldElement(0));
        v
    }

    fn to_poly(&self, a: &ResElem) -> Poly {
        Poly::from_coeffs(a.clone())
    }
}

impl FiniteField for ResidueField {
    type Elem = ResElem;

    fn characteristic(&self) -> u64 {
        self.base().p()
    }

    fn order(&self) -> u64 {
        self.order
    }

    fn zero(&self) -> ResElem {
        vec![FieldElement(0); self.degree]
    }

    fn one(&self) -> ResElem {
        self.embed(FieldElement(1))
    }

    fn from_int(&self, n: i64) -> ResElem {
        self.embed(self.base().elem(n))
    }

    fn is_zero(&self, a: &ResElem) -> bool {
        a.iter().all(|c| c.0 == 0)
    }

    fn add(&self, a: &ResElem, b: &ResElem) -> ResElem {
        let f = self.base();
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }

    fn neg(&self, a: &ResElem) -> ResElem {
        let f = self.base();
        a.iter().map(|x| f.neg(x)).collect()
    }

    fn mul(&self, a: &ResElem, b: &ResElem) -> ResElem {
        let f = self.base();
        let d = self.degree;
        let mut prod = vec![FieldElement(0); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.0 == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = f.add(&prod[i + j], &f.mul(x, y));
            }
        }
        let m = self.modulus.coeffs();
        for top in (d..prod.len()).rev() {
            let c = prod[top];
            if c.0 == 0 {
                continue;
            }
            prod[top] = FieldElement(0);
            for (j, mj) in m[..d].iter().enumerate() {
                let idx = top - d + j;
                prod[idx] = f.sub(&prod[idx], &f.mul(&c, mj));
            }
        }
        prod.truncate(d);
        prod
    }

    fn inv(&self, a: &ResElem) -> Option<ResElem> {
        if self.is_zero(a) {
            return None;
        }
        // extended Euclid: track s with s * a = r (mod modulus)
        let ring = &self.ring;
        let (mut r0, mut r1) = (self.modulus.clone(), self.to_poly(a));
        let (mut s0, mut s1) = (Poly::zero(), ring.one());
        while !r1.is_zero() {
            let (qt, r) = ring.divrem(&r0, &r1).ok()?;
            let s = ring.sub(&s0, &ring.mul(&qt, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let c = self.base().inv(&r0.coeff(0))?;
        Some(self.reduce(&ring.scale(&s0, c)))
    }

    fn element(&self, mut index: u64) -> ResElem {
        let q = self.base().q();
        (0..self.degree)
            .map(|_| {
                let c = FieldElement(index % q);
                index /= q;
                c
            })
            .collect()
    }

    fn index_of(&self, a: &ResElem) -> u64 {
        let q = self.base().q();
        a.iter().rev().fold(0, |acc, c| acc * q + c.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_place_is_evaluation() {
        let f = FieldSpec::prime(5).unwrap();
        let r = PolyRing::new(f.clone());
        let k = residue_field(&r.parse("T+3").unwrap(), &f).unwrap();
        assert_eq!(k.order(), 5);
        let a = r.parse("T^2+1").unwrap();
        // T = 2: 4 + 1 = 0
        assert_eq!(k.reduce(&a), vec![FieldElement(0)]);
        assert_eq!(k.reduce(&a), vec![r.eval(&a, FieldElement(2))]);
    }

    #[test]
    fn quadratic_place_is_field_of_25() {
        let f = FieldSpec::prime(5).unwrap();
        let r = PolyRing::new(f.clone());
        let k = residue_field(&r.parse("T^2+2").unwrap(), &f).unwrap();
        assert_eq!(k.order(), 25);
        let mut seen = std::collections::HashSet::new();
        for i in 0..25 {
            let a = k.element(i);
            assert_eq!(k.index_of(&a), i);
            seen.insert(a.clone());
            if i > 0 {
                let ai = k.inv(&a).unwrap();
                assert_eq!(k.mul(&a, &ai), k.one());
            }
            assert_eq!(k.pow(&a, 25), a);
        }
        assert_eq!(seen.len(), 25);
    }

    #[test]
    fn reducible_place_rejected() {
        let f = FieldSpec::prime(5).unwrap();
        let r = PolyRing::new(f.clone());
        assert_eq!(
            residue_field(&r.parse("T^2+1").unwrap(), &f).unwrap_err(),
            Error::ReducibleModulus
        );
    }

    #[test]
    fn tower_over_f25() {
        let f = FieldSpec::new(5, 2, None).unwrap();
        let r = PolyRing::new(f.clone());
        let pi = crate::algebra::enumerate_monic_irreducibles(&f, 2).unwrap()[0].clone();
        let k = residue_field(&pi, &f).unwrap();
        assert_eq!(k.order(), 625);
        let g = k.generator();
        assert!(k.is_zero(&k.reduce(&pi)));
        assert_eq!(k.pow(&g, 625), g);
        let _ = r;
    }
}
