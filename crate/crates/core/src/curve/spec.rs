use std::fmt;

use crate::algebra::{arith, FieldSpec, FiniteField, Poly, PolyRing};
use crate::error::{Error, Result};

/// Standard Weierstrass invariants of a curve over `F_q[T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: Poly,
    pub b4: Poly,
    pub b6: Poly,
    pub b8: Poly,
    pub c4: Poly,
    pub c6: Poly,
    pub disc: Poly,
    /// `j = j_num / j_den` in lowest terms with `j_den` monic.
    pub j_num: Poly,
    pub j_den: Poly,
}

/// Elliptic curve `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `F_q(T)`
/// with polynomial coefficients.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    ring: PolyRing,
    a: [Poly; 5],
    inv: Invariants,
}

impl PartialEq for CurveSpec {
    fn eq(&self, other: &Self) -> bool {
        self.ring.field() == other.ring.field() && self.a == other.a
    }
}

pub fn derive_invariants(ring: &PolyRing, a: &[Poly; 5]) -> Result<Invariants> {
    let r = ring;
    let k = |n: i64| r.from_ints(&[n]);
    let [a1, a2, a3, a4, a6] = a;
    let b2 = r.add(&r.mul(a1, a1), &r.mul(&k(4), a2));
    let b4 = r.add(&r.mul(&k(2), a4), &r.mul(a1, a3));
    let b6 = r.add(&r.mul(a3, a3), &r.mul(&k(4), a6));
    let b8 = {
        let t1 = r.mul(&r.mul(a1, a1), a6);
        let t2 = r.mul(&k(4), &r.mul(a2, a6));
        let t3 = r.mul(&r.mul(a1, a3), a4);
        let t4 = r.mul(a2, &r.mul(a3, a3));
        let t5 = r.mul(a4, a4);
        r.sub(&r.sub(&r.add(&r.add(&t1, &t2), &t4), &t3), &t5)
    };
    let c4 = r.sub(&r.mul(&b2, &b2), &r.mul(&k(24), &b4));
    let c6 = {
        let t1 = r.neg(&r.pow(&b2, 3));
        let t2 = r.mul(&k(36), &r.mul(&b2, &b4));
        let t3 = r.mul(&k(216), &b6);
        r.sub(&r.add(&t1, &t2), &t3)
    };
    let disc = {
        let t1 = r.neg(&r.mul(&r.mul(&b2, &b2), &b8));
        let t2 = r.mul(&k(8), &r.pow(&b4, 3));
        let t3 = r.mul(&k(27), &r.mul(&b6, &b6));
        let t4 = r.mul(&k(9), &r.mul(&b2, &r.mul(&b4, &b6)));
        r.add(&r.sub(&r.sub(&t1, &t2), &t3), &t4)
    };
    if disc.is_zero() {
        return Err(Error::SingularCurve);
    }
    let num = r.pow(&c4, 3);
    let g = r.gcd(&num, &disc);
    let mut j_num = r.divrem(&num, &g)?.0;
    let mut j_den = r.divrem(&disc, &g)?.0;
    let lead = r.field().inv(&j_den.leading()).expect("nonzero");
    j_num = r.scale(&j_num, lead);
    j_den = r.scale(&j_den, lead);
    Ok(Invariants { b2, b4, b6, b8, c4, c6, disc, j_num, j_den })
}

impl CurveSpec {
    pub fn new(base: FieldSpec, a: [Poly; 5]) -> Result<Self> {
        if base.p() < 5 {
            return Err(Error::SmallCharacteristic(base.p()));
        }
        let ring = PolyRing::new(base);
        let inv = derive_invariants(&ring, &a)?;
        Ok(CurveSpec { ring, a, inv })
    }

    /// Parse the five coefficients with the polynomial grammar.
    pub fn from_strs(base: FieldSpec, a: [&str; 5]) -> Result<Self> {
        let ring = PolyRing::new(base.clone());
        let mut polys: [Poly; 5] = Default::default();
        for (dst, s) in polys.iter_mut().zip(a) {
            *dst = ring.parse(s)?;
        }
        CurveSpec::new(base, polys)
    }

    /// Short model `y^2 = x^3 + A x + B` over `F_q(T)`.
    pub fn short(base: FieldSpec, a4: Poly, a6: Poly) -> Result<Self> {
        CurveSpec::new(base, [Poly::zero(), Poly::zero(), Poly::zero(), a4, a6])
    }

    pub fn field(&self) -> &FieldSpec {
        self.ring.field()
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Poly; 5] {
        &self.a
    }

    pub fn invariants(&self) -> &Invariants {
        &self.inv
    }

    pub fn disc(&self) -> &Poly {
        &self.inv.disc
    }

    /// Coefficients `(A, B)` of the isomorphic short model, `A = -c4/48`,
    /// `B = -c6/864`. The discriminant is unchanged.
    pub fn short_model(&self) -> (Poly, Poly) {
        let f = self.field();
        let r = &self.ring;
        let s48 = f.neg(&f.inv(&f.from_int(48)).expect("p >= 5"));
        let s864 = f.neg(&f.inv(&f.from_int(864)).expect("p >= 5"));
        (r.scale(&self.inv.c4, s48), r.scale(&self.inv.c6, s864))
    }

    pub fn j_is_constant(&self) -> bool {
        self.inv.j_num.is_constant() && self.inv.j_den.is_constant()
    }

    /// Largest degree among the Weierstrass coefficients.
    pub fn coefficient_degree(&self) -> usize {
        self.a.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.a.iter().map(|p| self.ring.render(p)).collect();
        format!("[{}]", parts.join(", "))
    }

    /// Text form accepted by [`parse_curve`].
    pub fn to_curve_file(&self) -> String {
        let f = self.field();
        let mut s = format!("q = {}\n", f.q());
        if !f.is_prime_field() {
            s += &format!("p = {}\nk = {}\n", f.p(), f.k());
            let prime = PolyRing::new(f.prime_field());
            let m = Poly::from_coeffs(
                f.modulus().iter().map(|&c| crate::algebra::FieldElement(c)).collect(),
            );
            s += &format!("modulus = {}\n", prime.render(&m));
        }
        s += &format!("a = {}\n", self.render());
        s
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E: a = {} over F_{}", self.render(), self.field().q())
    }
}

/// Reject curves with constant `j`.
pub fn check_nonconstant(c: &CurveSpec) -> Result<()> {
    if c.j_is_constant() {
        Err(Error::IsotrivialOrConstant)
    } else {
        Ok(())
    }
}

/// Parse the curve file format:
///
/// ```text
/// # Legendre curve
/// q = 5
/// a = [0, 4*T+4, 0, T, 0]
/// ```
///
/// Extension fields take `q = 25` alone (default modulus) or with `p`, `k`
/// and `modulus = T^2+2` (a polynomial over `F_p`).
pub fn parse_curve(text: &str) -> Result<CurveSpec> {
    let mut q = None;
    let mut p = None;
    let mut k = None;
    let mut modulus = None;
    let mut a = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
        let value = value.trim().to_string();
        let int = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| Error::Parse(format!("line {}: bad integer {v:?}", lineno + 1)))
        };
        match key.trim() {
            "q" => q = Some(int(&value)?),
            "p" => p = Some(int(&value)?),
            "k" => k = Some(int(&value)? as u32),
            "modulus" => modulus = Some(value),
            "a" => a = Some(value),
            other => {
                return Err(Error::Parse(format!("line {}: unknown key {other:?}", lineno + 1)))
            }
        }
    }
    let base = field_from_parts(q, p, k, modulus.as_deref())?;
    let a = a.ok_or_else(|| Error::Parse("missing `a = [...]`".into()))?;
    let inner = a
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse("coefficients must be written as [a1, a2, a3, a4, a6]".into()))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    let parts: [&str; 5] = parts
        .try_into()
        .map_err(|_| Error::Parse("expected exactly five coefficients".into()))?;
    CurveSpec::from_strs(base, parts)
}

/// Field from the `q`/`p`/`k`/`modulus` keys; `q` alone is split as `p^k`.
pub fn field_from_parts(
    q: Option<u64>,
    p: Option<u64>,
    k: Option<u32>,
    modulus: Option<&str>,
) -> Result<FieldSpec> {
    let (p, k) = match (q, p, k) {
        (_, Some(p), Some(k)) => (p, k),
        (Some(q), Some(p), None) => (p, prime_power_exponent(q, p)?),
        (Some(q), None, _) => {
            let fac = arith::factorize(q);
            match fac.as_slice() {
                [(p, e)] => (*p, *e),
                _ => return Err(Error::NotPrime(q)),
            }
        }
        _ => return Err(Error::Parse("missing field size `q = ...`".into())),
    };
    if let Some(q) = q {
        if p.checked_pow(k) != Some(q) {
            return Err(Error::Parse(format!("q = {q} does not equal {p}^{k}")));
        }
    }
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = match modulus {
        Some(s) => {
            let prime = PolyRing::new(FieldSpec::prime(p)?);
            let poly = prime.parse(s)?;
            Some(poly.coeffs().iter().map(|c| c.0).collect::<Vec<u64>>())
        }
        None => None,
    };
    FieldSpec::new(p, k, m.as_deref())
}

fn prime_power_exponent(q: u64, p: u64) -> Result<u32> {
    let mut e = 0;
    let mut v = q;
    while v > 1 && v % p == 0 {
        v /= p;
        e += 1;
    }
    if v == 1 && e > 0 {
        Ok(e)
    } else {
        Err(Error::Parse(format!("q = {q} is not a power of {p}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> CurveSpec {
        parse_curve("q = 5\na = [0, 4*T+4, 0, T, 0]\n").unwrap()
    }

    #[test]
    fn legendre_discriminant() {
        let c = e1();
        let r = c.ring();
        // 16 * T^2 (T-1)^2 = T^2 (T-1)^2 mod 5
        let expect = r.parse("16*T^2*(T-1)^2").unwrap();
        assert_eq!(c.disc(), &expect);
        let inv = c.invariants();
        let lhs = r.sub(&r.pow(&inv.c4, 3), &r.mul(&inv.c6, &inv.c6));
        assert_eq!(lhs, r.scale(&inv.disc, c.field().elem(1728)));
        assert!(check_nonconstant(&c).is_ok());
        assert_eq!(inv.j_den, r.parse("T^2*(T-1)^2").unwrap());
    }

    #[test]
    fn constant_curves_rejected() {
        let f = FieldSpec::prime(5).unwrap();
        let c = CurveSpec::from_strs(f.clone(), ["0", "0", "0", "0", "1"]).unwrap();
        // -432 = 3 mod 5
        assert_eq!(c.disc(), &Poly::constant(f.elem(-432)));
        assert_eq!(check_nonconstant(&c), Err(Error::IsotrivialOrConstant));
        let c = CurveSpec::from_strs(f.clone(), ["0", "0", "0", "T", "0"]).unwrap();
        assert_eq!(check_nonconstant(&c), Err(Error::IsotrivialOrConstant));
        let err = CurveSpec::from_strs(f, ["0", "0", "0", "0", "0"]).unwrap_err();
        assert_eq!(err, Error::SingularCurve);
    }

    #[test]
    fn short_model_keeps_discriminant() {
        let c = e1();
        let (a, b) = c.short_model();
        let s = CurveSpec::short(c.field().clone(), a, b).unwrap();
        assert_eq!(s.disc(), c.disc());
        assert_eq!(s.invariants().j_num, c.invariants().j_num);
    }

    #[test]
    fn curve_file_errors_and_roundtrip() {
        assert!(matches!(parse_curve("a = [0,0,0,T,1]"), Err(Error::Parse(_))));
        assert!(matches!(parse_curve("q = 6\na = [0,0,0,T,1]"), Err(Error::NotPrime(6))));
        assert_eq!(
            parse_curve("q = 3\na = [0,0,0,T,1]").unwrap_err(),
            Error::SmallCharacteristic(3)
        );
        assert!(matches!(parse_curve("q = 5\na = [0,0,T,1]"), Err(Error::Parse(_))));
        let c = parse_curve("q = 25\na = [0, 0, 0, y*T, T^2+1]").unwrap();
        assert_eq!(c.field().q(), 25);
        let again = parse_curve(&c.to_curve_file()).unwrap();
        assert_eq!(again, c);
    }
}
