//! `F_{q^d}` as a concrete field together with the embedding of `F_q`, used to
//! walk all places of degree `d` through their Frobenius orbits of roots.

use std::collections::HashMap;

use super::irreducible::least_monic_irreducible;
use super::{
    residue_field, PolyRing, FieldElement, FieldSpec, FiniteField, Poly,
    CubicExt, QuadExt, ResidueField, ZechField, ZECH_LIMIT,
};
use crate::error::{Error, Result};

type EmbedFn<E> = Box<dyn Fn(FieldElement) -> E + Send + Sync>;
type BackFn<E> = Box<dyn Fn(&E) -> Option<FieldElement> + Send + Sync>;

/// A degree-`d` extension of the constant field with explicit maps in and
/// out of the base.
pub struct Extension<F: FiniteField> {
    field: F,
    base: FieldSpec,
    degree: usize,
    embed: EmbedFn<F::Elem>,
    back: BackFn<F::Elem>,
}

/// Callback that is generic over the concrete backend chosen for `F_{q^d}`.
pub trait ExtensionVisitor {
    type Output;
    fn visit<F: FiniteField>(self, ext: &Extension<F>) -> Self::Output;
}

/// Which representation [`with_extension`] picks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Zech,
    Quad,
    Cubic,
    Residue,
}

/// Above this many elements a flat Zech table stops fitting in cache and a
/// cubic tower over a small Zech field is faster.
pub const TOWER_PREFERRED: u64 = 1 << 20;

pub fn backend_for(base: &FieldSpec, d: usize) -> Backend {
    let p = base.p();
    let n = base.k() as usize * d;
    let fits = |e: usize| p.checked_pow(e as u32).is_some_and(|v| v <= ZECH_LIMIT);
    let k = base.k() as usize;
    let cubic = n % 3 == 0 && (n / 3) % k == 0 && fits(n / 3);
    if cubic && p.checked_pow(n as u32).is_none_or(|v| v > TOWER_PREFERRED) {
        Backend::Cubic
    } else if fits(n) {
        Backend::Zech
    } else if n % 2 == 0 && (n / 2) % k == 0 && fits(n / 2) {
        Backend::Quad
    } else {
        Backend::Residue
    }
}

/// Build `F_{q^d}` with the fastest available backend and hand it to `v`.
pub fn with_extension<V: ExtensionVisitor>(base: &FieldSpec, d: usize, v: V) -> Result<V::Output> {
    if d == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    let p = base.p();
    let n = base.k() * d as u32;
    match backend_for(base, d) {
        Backend::Zech => {
            let f = ZechField::cached(p, n)?;
            let ext = Extension::over_subfield(f, base.clone(), d, None)?;
            Ok(v.visit(&ext))
        }
        Backend::Quad => {
            let sub = ZechField::cached(p, n / 2)?;
            let f = QuadExt::new(sub.clone());
            let ext = Extension::over_subfield(f, base.clone(), d, Some(sub))?;
            Ok(v.visit(&ext))
        }
        Backend::Cubic => {
            let sub = ZechField::cached(p, n / 3)?;
            let f = CubicExt::new(sub.clone());
            let ext = Extension::over_subfield(f, base.clone(), d, Some(sub))?;
            Ok(v.visit(&ext))
        }
        Backend::Residue => {
            let pi = least_monic_irreducible(&PolyRing::new(base.clone()), d);
            let k = residue_field(&pi, base)?;
            Ok(v.visit(&Extension::residue(k)))
        }
    }
}

impl Extension<ResidueField> {
    fn residue(field: ResidueField) -> Self {
        let base = field.base().clone();
        let degree = field.degree();
        let f2 = field.clone();
        Extension {
            embed: Box::new(move |c| f2.embed(c)),
            back: Box::new(|x: &Vec<FieldElement>| {
                x[1..].iter().all(|c| c.0 == 0).then_some(x[0])
            }),
            field,
            base,
            degree,
        }
    }
}

impl<F: FiniteField + Clone + 'static> Extension<F> {
    /// `field` is `F_{p^{kd}}`; `sub`, when given, is a Zech subfield that
    /// contains `F_q` and embeds as `x -> (x, 0, ..)` (the tower cases).
    fn over_subfield(
        field: F,
        base: FieldSpec,
        degree: usize,
        sub: Option<ZechField>,
    ) -> Result<Self>
    where
        F::Elem: 'static,
    {
        let q = base.q();
        let big = field.order();
        // F_q^* inside F_{q^d}^* is generated by g^((Q-1)/(q-1)); walk it via
        // a root of unity search on elements of the subfield.
        let subfield_elems: Vec<F::Elem> = {
            let gen_power = |e: u64| -> F::Elem {
                match &sub {
                    None => field.element(e % (big - 1)),
                    Some(z) => {
                        // element of the Zech subfield, lifted to the tower
                        let x = z.from_log(e);
                        lift_from_sub(&field, z, x)
                    }
                }
            };
            let sub_order = sub.as_ref().map(|z| z.order()).unwrap_or(big);
            let step = (sub_order - 1) / (q - 1);
            let mut v = vec![field.zero()];
            v.extend((0..q - 1).map(|j| gen_power(j * step)));
            v
        };
        // image of the generator y of F_q over F_p
        let gamma = if base.k() == 1 {
            field.zero()
        } else {
            let m = base.modulus();
            subfield_elems
                .iter()
                .find(|x| {
                    let val = m.iter().rev().fold(field.zero(), |acc, &c| {
                        field.add(&field.mul(&acc, x), &field.from_int(c as i64))
                    });
                    field.is_zero(&val)
                })
                .cloned()
                .ok_or(Error::ReducibleModulus)?
        };
        let k = base.k() as usize;
        let mut gpow = vec![field.one()];
        for i in 1..k {
            gpow.push(field.mul(&gpow[i - 1], &gamma));
        }
        let base2 = base.clone();
        let field2 = field.clone();
        let embed: EmbedFn<F::Elem> = Box::new(move |c: FieldElement| {
            if base2.k() == 1 {
                return field2.from_int(c.0 as i64);
            }
            base2.coeffs(c).iter().zip(&gpow).fold(field2.zero(), |acc, (&ci, gp)| {
                field2.add(&acc, &field2.mul(&field2.from_int(ci as i64), gp))
            })
        });
        let table: HashMap<F::Elem, FieldElement> =
            (0..q).map(|i| (embed(FieldElement(i)), FieldElement(i))).collect();
        debug_assert_eq!(table.len() as u64, q);
        let back: BackFn<F::Elem> = Box::new(move |x| table.get(x).copied());
        Ok(Extension { field, base, degree, embed, back })
    }
}

fn lift_from_sub<F: FiniteField>(field: &F, sub: &ZechField, x: u32) -> F::Elem {
    // Tower elements are indexed as a0 + Q*a1 + Q^2*a2 + ..
    let q = sub.order();
    let z = sub.index_of(&sub.zero());
    let mut idx = sub.index_of(&x);
    let mut scale = q;
    while scale < field.order() {
        idx += scale * z;
        scale *= q;
    }
    field.element(idx)
}

impl<F: FiniteField> Extension<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn embed(&self, c: FieldElement) -> F::Elem {
        (self.embed)(c)
    }

    pub fn embed_poly(&self, a: &Poly) -> Vec<F::Elem> {
        a.coeffs().iter().map(|&c| self.embed(c)).collect()
    }

    pub fn to_base(&self, x: &F::Elem) -> Option<FieldElement> {
        (self.back)(x)
    }

    /// Horner evaluation of embedded coefficients.
    pub fn eval(&self, coeffs: &[F::Elem], t: &F::Elem) -> F::Elem {
        let f = &self.field;
        coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, t), c))
    }

    /// `x -> x^q`.
    pub fn frob_q(&self, x: &F::Elem) -> F::Elem {
        let mut y = x.clone();
        for _ in 0..self.base.k() {
            y = self.field.frobenius(&y);
        }
        y
    }

    /// The Frobenius orbit of the element with this index, provided the
    /// element has degree exactly `d` over `F_q` and has the smallest index in
    /// its orbit.
    pub fn canonical_orbit(&self, index: u64) -> Option<Vec<F::Elem>> {
        let t = self.field.element(index);
        let mut orbit = Vec::with_capacity(self.degree);
        orbit.push(t.clone());
        let mut cur = t.clone();
        for _ in 1..self.degree {
            cur = self.frob_q(&cur);
            if cur == t || self.field.index_of(&cur) < index {
                return None;
            }
            orbit.push(cur.clone());
        }
        Some(orbit)
    }

    /// Monic minimal polynomial over `F_q` of an orbit.
    pub fn min_poly(&self, orbit: &[F::Elem]) -> Poly {
        let f = &self.field;
        let mut acc = vec![f.one()];
        for r in orbit {
            let nr = f.neg(r);
            let mut next = vec![f.zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] = f.add(&next[i + 1], c);
                next[i] = f.add(&next[i], &f.mul(c, &nr));
            }
            acc = next;
        }
        Poly::from_coeffs(
            acc.iter()
                .map(|c| self.to_base(c).expect("orbit polynomial has coefficients in F_q"))
                .collect(),
        )
    }

    /// Minimal polynomials of all places of degree `d`, in index order of
    /// their canonical roots.
    pub fn minimal_polynomials(&self) -> Vec<Poly> {
        (0..self.field.order())
            .filter_map(|i| self.canonical_orbit(i))
            .map(|o| self.min_poly(&o))
            .collect()
    }
}
