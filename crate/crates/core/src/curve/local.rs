use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use super::count::{count_points, CountConfig};
use super::spec::CurveSpec;
use crate::algebra::{
    arith::gcd, factorize_poly, residue_field, FieldSpec, FiniteField, Poly, PolyRing,
};
use crate::error::{Error, Result};

/// A place of `F_q(T)`: a monic irreducible polynomial or the place at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinite,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree().unwrap_or(0),
            Place::Infinite => 1,
        }
    }

    /// `q_v = q^deg v`.
    pub fn norm(&self, q: u64) -> u64 {
        q.pow(self.degree() as u32)
    }

    pub fn render(&self, ring: &PolyRing) -> String {
        match self {
            Place::Finite(pi) => ring.render(pi),
            Place::Infinite => "inf".into(),
        }
    }

    /// Degree first, then lexicographic; infinity sorts with the degree-one
    /// places, after them.
    pub fn cmp_order(&self, other: &Place) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => a.lex_cmp(b),
            (Place::Finite(_), Place::Infinite) => Ordering::Less,
            (Place::Infinite, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinite, Place::Infinite) => Ordering::Equal,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reduction {
    Good,
    SplitMult,
    NonsplitMult,
    Additive,
}

impl Reduction {
    pub fn name(self) -> &'static str {
        match self {
            Reduction::Good => "good",
            Reduction::SplitMult => "split_mult",
            Reduction::NonsplitMult => "nonsplit_mult",
            Reduction::Additive => "additive",
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Finer data at an additive place, needed for the symmetric square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdditiveKind {
    /// `v(j) < 0`: a ramified quadratic twist of multiplicative reduction.
    PotentiallyMultiplicative,
    /// `v(j) >= 0`: good reduction over a tame extension of degree `e`. For
    /// `e = 2` the trace of the good quadratic twist is recorded.
    PotentiallyGood { e: u32, twist_trace: Option<i64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalData {
    pub place: Place,
    pub q_v: u64,
    pub red: Reduction,
    pub a_v: i64,
    pub f_v: u32,
    pub theta: Option<f64>,
    pub additive: Option<AdditiveKind>,
}

impl LocalData {
    pub fn degree(&self) -> usize {
        self.place.degree()
    }

    pub fn good(place: Place, q_v: u64, a_v: i64) -> Result<Self> {
        let theta = satake_angle(a_v, q_v)?;
        Ok(LocalData {
            place,
            q_v,
            red: Reduction::Good,
            a_v,
            f_v: 0,
            theta: Some(theta),
            additive: None,
        })
    }
}

/// `theta = arccos(a / (2 sqrt q))` in `[0, pi]`.
pub fn satake_angle(a: i64, q_v: u64) -> Result<f64> {
    if (a as i128) * (a as i128) > 4 * q_v as i128 {
        return Err(Error::HasseViolation { a, q: q_v });
    }
    let c = (a as f64 / (2.0 * (q_v as f64).sqrt())).clamp(-1.0, 1.0);
    let theta = c.acos();
    Ok(theta.clamp(0.0, PI))
}

/// Short-model coefficients made minimal at `pi`, with the valuations
/// `(v(A), v(B), v(disc))` after scaling (`u32::MAX` for a zero coefficient).
pub fn minimalize_at(c: &CurveSpec, pi: &Poly) -> (Poly, Poly, [u32; 3]) {
    let r = c.ring();
    let (mut a, mut b) = c.short_model();
    let val = |p: &Poly| r.valuation(p, pi).unwrap_or(u32::MAX);
    let (mut va, mut vb) = (val(&a), val(&b));
    let mut vd = val(c.disc());
    while vd >= 12 && va >= 4 && vb >= 6 {
        if va != u32::MAX {
            a = r.div_exact_pow(&a, pi, 4);
            va -= 4;
        }
        if vb != u32::MAX {
            b = r.div_exact_pow(&b, pi, 6);
            vb -= 6;
        }
        vd -= 12;
    }
    (a, b, [va, vb, vd])
}

/// Model used at infinity: `T = 1/S` and `a_i -> S^{i m} a_i(1/S)` with the
/// least `m` making every coefficient polynomial. Returned in the same ring,
/// the variable now standing for `S`.
pub fn infinite_place_model(c: &CurveSpec) -> Result<(CurveSpec, u32)> {
    let weights = [1usize, 2, 3, 4, 6];
    let m = c
        .coeffs()
        .iter()
        .zip(weights)
        .filter_map(|(p, w)| p.degree().map(|d| d.div_ceil(w)))
        .max()
        .unwrap_or(0);
    let r = c.ring();
    let mut out: [Poly; 5] = Default::default();
    for ((dst, p), w) in out.iter_mut().zip(c.coeffs()).zip(weights) {
        *dst = match p.degree() {
            None => Poly::zero(),
            Some(_) => r.reverse_to(p, w * m),
        };
    }
    Ok((CurveSpec::new(c.field().clone(), out)?, m as u32))
}

fn place_key(pi: &Poly) -> u64 {
    pi.coeffs().iter().fold(pi.coeffs().len() as u64, |acc, c| {
        acc.wrapping_mul(0x100_0000_01b3).wrapping_add(c.0)
    })
}

/// Local data at a finite place from the model `c`, labelled as `label`.
fn local_data_at(
    c: &CurveSpec,
    pi: &Poly,
    label: Place,
    cfg: &CountConfig,
) -> Result<LocalData> {
    let base = c.field();
    let d = pi.degree().ok_or(Error::ZeroPolynomial)?;
    let q_v = base.q().checked_pow(d as u32).ok_or(Error::FieldTooLarge(base.q(), d as u32))?;
    let k = residue_field(pi, base)?;
    let (a, b, [va, _, vd]) = minimalize_at(c, pi);
    let mut rng = cfg.rng(place_key(pi));
    let trace = |a: &Poly, b: &Poly, rng: &mut _| -> Result<i64> {
        let (n, _) = count_points(&k, &k.reduce(a), &k.reduce(b), cfg.threshold, rng)?;
        Ok(q_v as i64 + 1 - n as i64)
    };
    if vd == 0 {
        let a_v = trace(&a, &b, &mut rng)?;
        return LocalData::good(label, q_v, a_v);
    }
    let mk = |red, a_v, f_v, additive| LocalData {
        place: label.clone(),
        q_v,
        red,
        a_v,
        f_v,
        theta: None,
        additive,
    };
    if va == 0 {
        // node at x0 = -3B/(2A); tangent cone y^2 = 3 x0 (x - x0)^2, and
        // 3 x0 = -9B/(2A) is a square iff -2AB is
        let f = &k;
        let t = f.mul(&f.from_int(-2), &f.mul(&k.reduce(&a), &k.reduce(&b)));
        let split = f.is_square(&t);
        return Ok(if split {
            mk(Reduction::SplitMult, 1, 1, None)
        } else {
            mk(Reduction::NonsplitMult, -1, 1, None)
        });
    }
    let kind = if va == u32::MAX || 3 * va >= vd {
        let e = 12 / gcd(12, vd as u64) as u32;
        let twist_trace = if e == 2 {
            let r = c.ring();
            let a2 = if a.is_zero() { a.clone() } else { r.div_exact_pow(&a, pi, 2) };
            let b3 = if b.is_zero() { b.clone() } else { r.div_exact_pow(&b, pi, 3) };
            Some(trace(&a2, &b3, &mut rng)?)
        } else {
            None
        };
        AdditiveKind::PotentiallyGood { e, twist_trace }
    } else {
        AdditiveKind::PotentiallyMultiplicative
    };
    Ok(mk(Reduction::Additive, 0, 2, Some(kind)))
}

/// Reduction type, trace and conductor exponent of `c` at `v`.
pub fn local_data(c: &CurveSpec, v: &Place, cfg: &CountConfig) -> Result<LocalData> {
    match v {
        Place::Finite(pi) => local_data_at(c, pi, v.clone(), cfg),
        Place::Infinite => {
            let (model, _) = infinite_place_model(c)?;
            let s = model.ring().var();
            local_data_at(&model, &s, Place::Infinite, cfg)
        }
    }
}

/// Local data at every finite place dividing the discriminant and at
/// infinity (some may turn out good after minimalization), in place order.
pub fn special_places(c: &CurveSpec, cfg: &CountConfig) -> Result<Vec<LocalData>> {
    let mut out = Vec::new();
    for (pi, _) in factorize_poly(c.ring(), c.disc())? {
        out.push(local_data(c, &Place::Finite(pi), cfg)?);
    }
    out.push(local_data(c, &Place::Infinite, cfg)?);
    out.sort_by(|a, b| a.place.cmp_order(&b.place));
    Ok(out)
}

/// `sum f_v deg v` over the given local data.
pub fn conductor_degree(special: &[LocalData], include_infinite: bool) -> usize {
    special
        .iter()
        .filter(|ld| include_infinite || ld.place != Place::Infinite)
        .map(|ld| ld.f_v as usize * ld.degree())
        .sum()
}

/// Convenience for tests and the CLI: the field of a curve and its place.
pub fn parse_place(base: &FieldSpec, s: &str) -> Result<Place> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(Place::Infinite);
    }
    let ring = PolyRing::new(base.clone());
    let pi = ring.parse(t)?;
    if !ring.is_monic(&pi) || !crate::algebra::is_irreducible(&ring, &pi)? {
        return Err(Error::ReducibleModulus);
    }
    Ok(Place::Finite(pi))
}

#[cfg(test)]
mod tests {
    use super::super::spec::parse_curve;
    use super::*;

    fn e1() -> CurveSpec {
        parse_curve("q = 5\na = [0, 4*T+4, 0, T, 0]").unwrap()
    }

    fn ld(c: &CurveSpec, s: &str) -> LocalData {
        let v = parse_place(c.field(), s).unwrap();
        local_data(c, &v, &CountConfig::default()).unwrap()
    }

    #[test]
    fn legendre_degree_one() {
        let c = e1();
        let x = ld(&c, "T+3");
        assert_eq!((x.red, x.a_v, x.q_v), (Reduction::Good, -2, 5));
        assert!((x.theta.unwrap() - 2.034443935795703).abs() < 1e-12);
        let x = ld(&c, "T");
        assert_eq!((x.red, x.a_v, x.f_v), (Reduction::SplitMult, 1, 1));
        let x = ld(&c, "T+4");
        assert_eq!((x.red, x.a_v, x.f_v), (Reduction::SplitMult, 1, 1));
        let x = ld(&c, "inf");
        assert_eq!((x.red, x.a_v, x.f_v), (Reduction::Additive, 0, 2));
        assert_eq!(x.additive, Some(AdditiveKind::PotentiallyMultiplicative));
        let all = special_places(&c, &CountConfig::default()).unwrap();
        assert_eq!(conductor_degree(&all, true), 4);
        assert_eq!(conductor_degree(&all, false), 2);
    }

    #[test]
    fn legendre_infinite_model() {
        let c = e1();
        let (m, k) = infinite_place_model(&c).unwrap();
        assert_eq!(k, 1);
        let r = m.ring();
        assert_eq!(m.coeffs()[1], r.parse("-(T^2+T)").unwrap());
        assert_eq!(m.coeffs()[3], r.parse("T^3").unwrap());
        let s = r.var();
        assert_eq!(r.valuation(m.disc(), &s), Some(8));
        assert_eq!(r.valuation(&m.invariants().c4, &s), Some(2));
    }

    #[test]
    fn minimalization_strips_scaling() {
        let f = FieldSpec::prime(7).unwrap();
        let c = CurveSpec::from_strs(f, ["0", "0", "0", "T^4*(T+1)", "T^6*(T+3)"]).unwrap();
        let r = c.ring();
        let (a, b, v) = minimalize_at(&c, &r.var());
        let (a0, b0) = c.short_model();
        assert_eq!(r.mul(&a, &r.pow(&r.var(), 4)), a0);
        assert_eq!(r.mul(&b, &r.pow(&r.var(), 6)), b0);
        assert_eq!(v[2], 0);
        assert_eq!(ld(&c, "T").red, Reduction::Good);
    }

    #[test]
    fn satake_examples() {
        assert!((satake_angle(0, 7).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((satake_angle(-2, 5).unwrap() - 2.034443936).abs() < 1e-9);
        assert_eq!(satake_angle(6, 5), Err(Error::HasseViolation { a: 6, q: 5 }));
    }

    #[test]
    fn good_places_obey_hasse_and_formula() {
        let c = e1();
        let r = c.ring();
        for d in 1..=3 {
            for pi in crate::algebra::enumerate_monic_irreducibles(c.field(), d).unwrap() {
                if r.valuation(c.disc(), &pi) != Some(0) {
                    continue;
                }
                let x = local_data(&c, &Place::Finite(pi), &CountConfig::default()).unwrap();
                let q = x.q_v as f64;
                let back = 2.0 * q.sqrt() * x.theta.unwrap().cos();
                assert!((back - x.a_v as f64).abs() < 1e-12);
            }
        }
    }
}
