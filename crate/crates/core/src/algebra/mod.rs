//! Exact arithmetic in finite fields, polynomial rings over them, and the
//! places of the rational function field `F_q(T)`.

pub mod arith;
mod ext;
mod field;
mod irreducible;
mod poly;
mod residue;
mod table;

pub use ext::{backend_for, with_extension, Backend, Extension, ExtensionVisitor};
pub use field::{FieldElement, FieldSpec};
pub use irreducible::{
    enumerate_monic_irreducibles, factor_squarefree_parts, factorize_poly, is_irreducible,
};
pub use poly::{parse_poly, Poly, PolyRing};
pub use residue::{residue_field, ResidueField};
pub use table::{CubicExt, QuadExt, ZechField, ZECH_LIMIT};

use std::fmt::Debug;
use std::hash::Hash;

/// Operations shared by every finite field backend.
///
/// Elements are plain values; all arithmetic goes through the field object,
/// which owns the modulus and any lookup tables.
pub trait FiniteField: Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    fn order(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Bijection `0..order()` -> elements. Index 0 need not be zero.
    fn element(&self, index: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    /// `a -> a^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic())
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        self.is_zero(a) || self.pow(a, (self.order() - 1) / 2) == self.one()
    }

    /// Whether [`FiniteField::is_square`] is a table lookup rather than an
    /// exponentiation.
    fn fast_character(&self) -> bool {
        false
    }

    /// A fixed non-square of the field.
    fn nonsquare(&self) -> Self::Elem {
        (0..self.order())
            .map(|i| self.element(i))
            .find(|x| !self.is_square(x))
            .expect("odd-order field has non-squares")
    }

    /// Tonelli-Shanks square root; `None` for non-squares.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if !self.is_square(a) {
            return None;
        }
        let q = self.order();
        let mut s = 0;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self.nonsquare();
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut x = self.pow(a, (t + 1) / 2);
        let mut b = self.pow(a, t);
        let one = self.one();
        while b != one {
            let mut i = 0;
            let mut b2 = b.clone();
            while b2 != one {
                b2 = self.square(&b2);
                i += 1;
            }
            let mut f = c.clone();
            for _ in 0..(m - i - 1) {
                f = self.square(&f);
            }
            x = self.mul(&x, &f);
            c = self.square(&f);
            b = self.mul(&b, &c);
            m = i;
        }
        Some(x)
    }

    /// Visit every element once, in index order.
    fn for_each_element(&self, range: std::ops::Range<u64>, f: &mut dyn FnMut(u64, Self::Elem)) {
        for i in range {
            f(i, self.element(i));
        }
    }
}
