//! Irreducibility, enumeration of monic irreducibles (the finite places of
//! `F_q(T)`), and factorisation over `F_q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ext::{with_extension, Extension, ExtensionVisitor};
use super::{FieldElement, FieldSpec, FiniteField, Poly, PolyRing};
use crate::error::{Error, Result};

/// `f` is irreducible iff `gcd(f, T^{q^i} - T) = 1` for every `i <= deg f / 2`.
pub fn is_irreducible(ring: &PolyRing, f: &Poly) -> Result<bool> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    let q = ring.field().q();
    let t = ring.var();
    let mut h = ring.rem(&t, f)?;
    for _ in 1..=d / 2 {
        h = ring.powmod(&h, q, f);
        let g = ring.gcd(&ring.sub(&h, &t), f);
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-q
/// digits of `index`; increasing `index` walks the lexicographic order.
fn monic_from_index(field: &FieldSpec, d: usize, mut index: u64) -> Poly {
    let q = field.q();
    let mut coeffs = Vec::with_capacity(d + 1);
    for _ in 0..d {
        coeffs.push(FieldElement(index % q));
        index /= q;
    }
    coeffs.push(FieldElement(1));
    Poly::from_coeffs(coeffs)
}

pub(crate) fn least_monic_irreducible(ring: &PolyRing, d: usize) -> Poly {
    let q = ring.field().q();
    let total = q.checked_pow(d as u32).expect("degree small enough to scan");
    (0..total)
        .map(|i| monic_from_index(ring.field(), d, i))
        .find(|f| is_irreducible(ring, f).unwrap_or(false))
        .expect("irreducibles exist in every degree")
}

/// Brute-force scan; the reference route for small `q^d`.
pub(crate) fn enumerate_by_scan(field: &FieldSpec, d: usize) -> Vec<Poly> {
    let ring = PolyRing::new(field.clone());
    let total = field.q().checked_pow(d as u32).expect("scan range fits in u64");
    (0..total)
        .map(|i| monic_from_index(field, d, i))
        .filter(|f| is_irreducible(&ring, f).unwrap_or(false))
        .collect()
}

/// Threshold on `q^d` above which irreducibles are found as minimal
/// polynomials of Frobenius orbits instead of by scanning.
const SCAN_LIMIT: u64 = 1 << 16;

/// All monic irreducible polynomials of degree exactly `d` over `base`, in
/// lexicographic order of their coefficient sequences (top coefficient first).
pub fn enumerate_monic_irreducibles(base: &FieldSpec, d: usize) -> Result<Vec<Poly>> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    match base.q().checked_pow(d as u32) {
        Some(n) if n <= SCAN_LIMIT => Ok(enumerate_by_scan(base, d)),
        _ => {
            struct Collect;
            impl ExtensionVisitor for Collect {
                type Output = Vec<Poly>;
                fn visit<F: FiniteField>(self, ext: &Extension<F>) -> Vec<Poly> {
                    ext.minimal_polynomials()
                }
            }
            let mut places = with_extension(base, d, Collect)?;
            places.sort_by(|a, b| a.lex_cmp(b));
            Ok(places)
        }
    }
}

/// Square-free decomposition: pairs `(g, e)` with `f = lead * prod g^e`, each
/// `g` monic and square-free (not necessarily irreducible).
pub fn factor_squarefree_parts(ring: &PolyRing, f: &Poly) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    squarefree_rec(ring, &ring.make_monic(f), 1, &mut out);
    Ok(out)
}

fn squarefree_rec(ring: &PolyRing, f: &Poly, mult: u32, out: &mut Vec<(Poly, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let field = ring.field();
    let p = field.p();
    let df = ring.derivative(f);
    if df.is_zero() {
        // f = g(T^p): take p-th roots of the coefficients
        let root_exp = field.q() / p;
        let g = Poly::from_coeffs(
            f.coeffs()
                .iter()
                .step_by(p as usize)
                .map(|c| field.pow(c, root_exp))
                .collect(),
        );
        squarefree_rec(ring, &g, mult * p as u32, out);
        return;
    }
    // Yun-style split: c = gcd(f, f'), w = f / c
    let mut c = ring.gcd(f, &df);
    let mut w = ring.divrem(f, &c).unwrap().0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = ring.gcd(&w, &c);
        let z = ring.divrem(&w, &y).unwrap().0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((ring.make_monic(&z), i * mult));
        }
        c = ring.divrem(&c, &y).unwrap().0;
        w = y;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        // remaining part is a p-th power
        squarefree_rec(ring, &c, mult, out);
    }
}

/// Complete factorisation into monic irreducibles with multiplicities,
/// sorted by the place ordering. Equal-degree splitting uses a fixed-seed
/// generator so the output is deterministic.
pub fn factorize_poly(ring: &PolyRing, f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (g, e) in factor_squarefree_parts(ring, f)? {
        for (d, part) in distinct_degree(ring, &g) {
            for h in equal_degree(ring, &part, d) {
                match out.iter_mut().find(|(x, _)| *x == h) {
                    Some(entry) => entry.1 += e,
                    None => out.push((h, e)),
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.lex_cmp(&b.0));
    Ok(out)
}

fn distinct_degree(ring: &PolyRing, f: &Poly) -> Vec<(usize, Poly)> {
    let q = ring.field().q();
    let t = ring.var();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = ring.rem(&t, &rest).unwrap();
    let mut d = 0;
    while rest.degree().unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > rest.degree().unwrap() {
            out.push((rest.degree().unwrap(), rest.clone()));
            break;
        }
        h = ring.powmod(&h, q, &rest);
        let g = ring.gcd(&ring.sub(&h, &t), &rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = ring.divrem(&rest, &g).unwrap().0;
            h = ring.rem(&h, &rest).unwrap();
            out.push((d, g));
        }
    }
    out
}

fn equal_degree(ring: &PolyRing, f: &Poly, d: usize) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![ring.make_monic(f)];
    }
    let field = ring.field();
    let q = field.q();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    loop {
        let a = Poly::from_coeffs((0..n).map(|_| FieldElement(rng.gen_range(0..q))).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        // a^{(q^d - 1)/2} = (a * a^q * ... * a^{q^{d-1}})^{(q-1)/2}
        let mut prod = ring.one();
        let mut conj = ring.rem(&a, f).unwrap();
        for _ in 0..d {
            prod = ring.mulmod(&prod, &conj, f);
            conj = ring.powmod(&conj, q, f);
        }
        let b = ring.powmod(&prod, (q - 1) / 2, f);
        let g = ring.gcd(&ring.sub(&b, &ring.one()), f);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = ring.divrem(f, &g).unwrap().0;
            let mut out = equal_degree(ring, &g, d);
            out.extend(equal_degree(ring, &h, d));
            return out;
        }
    }
}
