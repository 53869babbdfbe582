use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::surd::{Surd, SurdRing};
use crate::curve::{
    conductor_degree, AdditiveKind, CountConfig, CurveSpec, LocalData, LocalTable, PlaceClass,
    Reduction,
};
use crate::error::{Error, Result};

/// `L(s, Sym^n rho_E)` as an integer polynomial in `T = q^{-s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub n: u32,
    pub q: u64,
    pub coeffs: Vec<BigInt>,
    pub degree: usize,
    pub epsilon: i32,
    pub rank: u32,
    pub trunc: usize,
}

#[derive(Serialize)]
struct LPolyJson<'a> {
    n: u32,
    q: u64,
    coeffs: Vec<String>,
    degree: usize,
    epsilon: i32,
    rank: u32,
    trunc: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve: Option<&'a str>,
}

impl LPolynomial {
    /// Build from explicit coefficients (used for constructed examples);
    /// trailing zeros are dropped and `trunc` is set to the degree plus two.
    pub fn from_coeffs(n: u32, q: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        let degree = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
        let mut coeffs = coeffs;
        coeffs.truncate(degree + 1);
        let mut l = LPolynomial { n, q, coeffs, degree, epsilon: 1, rank: 0, trunc: degree + 2 };
        l.epsilon = functional_equation_check(&l)?;
        l.rank = analytic_rank(&l);
        Ok(l)
    }

    pub fn to_json(&self, curve: Option<&str>) -> serde_json::Value {
        serde_json::to_value(LPolyJson {
            n: self.n,
            q: self.q,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            degree: self.degree,
            epsilon: self.epsilon,
            rank: self.rank,
            trunc: self.trunc,
            curve,
        })
        .expect("plain data serializes")
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0 && self.coeffs[0].is_one()
    }
}

/// Reciprocal Euler factor `P_v(U)` in `U = T^{deg v}`, from reduction data.
fn factor_in_u(red: Reduction, a_v: i64, additive: Option<AdditiveKind>, q_v: u64, n: u32) -> Vec<BigInt> {
    let q = BigInt::from(q_v);
    let good = |a: i64| -> Vec<BigInt> {
        let a = BigInt::from(a);
        match n {
            1 => vec![BigInt::one(), -a, q.clone()],
            _ => {
                // (1 - qU)(1 - (a^2 - 2q)U + q^2 U^2)
                let t = &a * &a - BigInt::from(2) * &q;
                let q2 = &q * &q;
                vec![BigInt::one(), -&t - &q, &q * &t + &q2, -(&q2 * &q)]
            }
        }
    };
    match (red, n) {
        (Reduction::Good, _) => good(a_v),
        (_, 1) => vec![BigInt::one(), BigInt::from(-a_v)],
        (Reduction::SplitMult | Reduction::NonsplitMult, _) => vec![BigInt::one(), -BigInt::one()],
        (Reduction::Additive, _) => match additive {
            Some(AdditiveKind::PotentiallyMultiplicative) => vec![BigInt::one(), -BigInt::one()],
            Some(AdditiveKind::PotentiallyGood { e: 2, twist_trace: Some(t) }) => good(t),
            Some(AdditiveKind::PotentiallyGood { e, .. }) => {
                // inertia acts on Sym^2 through psi^2 + 1 + psi^-2; the
                // invariant line carries q_v or -q_v as Frobenius swaps lines
                let s = if q_v % e as u64 == 1 { -q.clone() } else { q.clone() };
                vec![BigInt::one(), s]
            }
            None => vec![BigInt::one()],
        },
    }
}

/// Reciprocal local Euler factor as a polynomial in `T`.
pub fn local_factor(ld: &LocalData, n: u32) -> Vec<BigInt> {
    let u = factor_in_u(ld.red, ld.a_v, ld.additive, ld.q_v, n);
    spread(&u, ld.degree())
}

fn spread(u: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); (u.len() - 1) * d + 1];
    for (i, c) in u.iter().enumerate() {
        out[i * d] = c.clone();
    }
    out
}

/// Power sums `s_1..s_k` of the inverse roots of `P(U) = sum c_i U^i`.
fn power_sums(c: &[BigInt], k: usize) -> Vec<BigInt> {
    let mut s: Vec<BigInt> = Vec::with_capacity(k + 1);
    s.push(BigInt::zero());
    for j in 1..=k {
        let mut v = if j < c.len() { -BigInt::from(j) * &c[j] } else { BigInt::zero() };
        for i in 1..j.min(c.len()) {
            v -= &c[i] * &s[j - i];
        }
        s.push(v);
    }
    s
}

/// `exp(sum p_k T^k / k)` truncated at degree `trunc`.
fn exp_from_power_sums(p: &[BigInt], trunc: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for k in 1..=trunc {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            acc += &p[i] * &c[k - i];
        }
        let (qt, r) = (&acc / BigInt::from(k), &acc % BigInt::from(k));
        debug_assert!(r.is_zero(), "Newton identity must divide exactly");
        c.push(qt);
    }
    c
}

/// Degree predicted from conductor exponents: `sum f_v deg v - 4` for
/// `n = 1`, and the analogous count for the symmetric square.
pub fn expected_degree(special: &[LocalData], n: u32, include_infinite: bool) -> Option<usize> {
    let cond = match n {
        1 => conductor_degree(special, include_infinite),
        _ => special
            .iter()
            .filter(|ld| include_infinite || ld.place != crate::curve::Place::Infinite)
            .map(|ld| sym2_conductor_exponent(ld) * ld.degree())
            .sum(),
    };
    let shift = 2 * (n as usize + 1);
    cond.checked_sub(shift)
}

fn sym2_conductor_exponent(ld: &LocalData) -> usize {
    match (ld.red, ld.additive) {
        (Reduction::Good, _) => 0,
        (Reduction::Additive, Some(AdditiveKind::PotentiallyGood { e: 2, .. })) => 0,
        _ => 2,
    }
}

/// Default truncation: predicted degree plus four.
pub fn default_trunc(special: &[LocalData], n: u32, include_infinite: bool) -> usize {
    expected_degree(special, n, include_infinite).unwrap_or(0) + 4
}

/// Euler product of the local factors of all places of degree `<= trunc`,
/// as a power series truncated at `trunc`.
pub fn euler_product_series(
    table: &mut LocalTable,
    n: u32,
    trunc: usize,
    include_infinite: bool,
) -> Result<Vec<BigInt>> {
    if n == 0 || n > 2 {
        return Err(Error::InvalidArgument(format!("symmetric power {n} is not supported")));
    }
    table.extend_to(trunc)?;
    let mut p = vec![BigInt::zero(); trunc + 1];
    for d in 1..=trunc {
        let st = table.stratum(d);
        for PlaceClass { red, a_v, count, additive } in st.classes(include_infinite) {
            let u = factor_in_u(red, a_v, additive, st.q_v, n);
            let s = power_sums(&u, trunc / d);
            let w = BigInt::from(count) * BigInt::from(d);
            for (j, sj) in s.iter().enumerate().skip(1) {
                p[d * j] += &w * sj;
            }
        }
    }
    Ok(exp_from_power_sums(&p, trunc))
}

/// Exact `L`-polynomial of `Sym^n` from the local data in `table`.
pub fn l_polynomial_from_table(
    table: &mut LocalTable,
    n: u32,
    trunc: usize,
    include_infinite: bool,
) -> Result<LPolynomial> {
    let series = euler_product_series(table, n, trunc, include_infinite)?;
    let degree = series.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    if degree + 2 > trunc {
        return Err(Error::TruncationTooSmall { trunc });
    }
    let q = table.curve().field().q();
    let mut l = LPolynomial {
        n,
        q,
        coeffs: series[..=degree].to_vec(),
        degree,
        epsilon: 1,
        rank: 0,
        trunc,
    };
    l.epsilon = functional_equation_check(&l)?;
    l.rank = analytic_rank(&l);
    Ok(l)
}

/// Convenience wrapper building a fresh local table.
pub fn l_polynomial(c: &CurveSpec, n: u32, trunc: usize, cfg: CountConfig) -> Result<LPolynomial> {
    crate::curve::check_nonconstant(c)?;
    let mut table = LocalTable::new(c, cfg)?;
    l_polynomial_from_table(&mut table, n, trunc, true)
}

/// Verify `c_{N-j} = eps q^{(n+1)(N-2j)/2} c_j` and return `eps`.
pub fn functional_equation_check(l: &LPolynomial) -> Result<i32> {
    let ring = SurdRing::new(l.q);
    let n1 = l.n + 1;
    let big_n = l.degree;
    let c = |j: usize| ring.int(l.coeffs[j].clone());
    let lead = ring.half_power(n1 * big_n as u32);
    let eps = if c(big_n) == lead {
        1
    } else if c(big_n) == ring.neg(&lead) {
        -1
    } else {
        return Err(Error::FunctionalEquationViolation { index: big_n });
    };
    for j in 0..=big_n / 2 {
        let scale = ring.half_power(n1 * (big_n - 2 * j) as u32);
        let mut rhs = ring.mul(&scale, &c(j));
        if eps < 0 {
            rhs = ring.neg(&rhs);
        }
        if c(big_n - j) != rhs {
            return Err(Error::FunctionalEquationViolation { index: big_n - j });
        }
    }
    Ok(eps)
}

/// Synthetic division by `1 - r T`; `None` unless exact.
pub(crate) fn divide_linear(ring: &SurdRing, c: &[Surd], r: &Surd) -> Option<Vec<Surd>> {
    if c.len() < 2 {
        return None;
    }
    let mut out = Vec::with_capacity(c.len() - 1);
    let mut prev = ring.int(0);
    for ck in &c[..c.len() - 1] {
        let qk = ring.add(ck, &ring.mul(r, &prev));
        out.push(qk.clone());
        prev = qk;
    }
    let rem = ring.add(&c[c.len() - 1], &ring.mul(r, &prev));
    ring.is_zero(&rem).then_some(out)
}

/// Multiplicity of the centre `T = q^{-(n+1)/2}` as a root.
pub fn analytic_rank(l: &LPolynomial) -> u32 {
    let ring = SurdRing::new(l.q);
    let r = ring.half_power(l.n + 1);
    let mut cur: Vec<Surd> = l.coeffs.iter().map(|c| ring.int(c.clone())).collect();
    let mut m = 0;
    while let Some(next) = divide_linear(&ring, &cur, &r) {
        cur = next;
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{parse_curve, Place};

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn ld(red: Reduction, a_v: i64, q_v: u64) -> LocalData {
        LocalData { place: Place::Infinite, q_v, red, a_v, f_v: 0, theta: None, additive: None }
    }

    #[test]
    fn local_factor_examples() {
        assert_eq!(local_factor(&ld(Reduction::Good, -2, 5), 1), b(&[1, 2, 5]));
        assert_eq!(local_factor(&ld(Reduction::SplitMult, 1, 5), 1), b(&[1, -1]));
        // (1 - 5T)(1 + 6T + 25T^2)
        assert_eq!(local_factor(&ld(Reduction::Good, -2, 5), 2), b(&[1, 1, -5, -125]));
    }

    #[test]
    fn power_sums_of_quadratic() {
        // roots of 1 + 2U + 5U^2: alpha + beta = -2, alpha beta = 5
        let s = power_sums(&b(&[1, 2, 5]), 3);
        assert_eq!(s[1..], b(&[-2, -6, 22])[..]);
    }

    #[test]
    fn constructed_functional_equations() {
        let l = LPolynomial::from_coeffs(1, 5, b(&[1])).unwrap();
        assert_eq!((l.epsilon, l.rank), (1, 0));
        let l = LPolynomial::from_coeffs(1, 5, b(&[1, -5])).unwrap();
        assert_eq!((l.epsilon, l.rank), (-1, 1));
        let l = LPolynomial::from_coeffs(1, 5, b(&[1, 1, 25])).unwrap();
        assert_eq!(l.epsilon, 1);
        let l = LPolynomial::from_coeffs(1, 5, b(&[1, -10, 25])).unwrap();
        assert_eq!((l.epsilon, l.rank), (1, 2));
        // (1 - 5T)(1 + 5T): only one centre root
        let l = LPolynomial::from_coeffs(1, 5, b(&[1, 0, -25])).unwrap();
        assert_eq!((l.epsilon, l.rank), (-1, 1));
        let err = LPolynomial::from_coeffs(1, 5, b(&[1, 3, 5, 7])).unwrap_err();
        assert!(matches!(err, Error::FunctionalEquationViolation { .. }));
        // Sym^2 with q non-square: 1 - 5^{3/2} T cannot be integral
        assert!(LPolynomial::from_coeffs(2, 5, b(&[1, 2])).is_err());
        let l = LPolynomial::from_coeffs(2, 5, b(&[1, 0, -125])).unwrap();
        assert_eq!((l.epsilon, l.rank), (-1, 1));
    }

    #[test]
    fn legendre_is_trivial() {
        let c = parse_curve("q = 5\na = [0, 4*T+4, 0, T, 0]").unwrap();
        let mut table = LocalTable::new(&c, CountConfig::default()).unwrap();
        let l = l_polynomial_from_table(&mut table, 1, 6, true).unwrap();
        assert!(l.is_one());
        assert_eq!(expected_degree(table.special(), 1, true), Some(0));
        assert_eq!(expected_degree(table.special(), 2, true), Some(0));
        let l2 = l_polynomial_from_table(&mut table, 2, 6, true).unwrap();
        assert!(l2.is_one());
        // the additive place at infinity has trivial factor for n = 1 but
        // contributes 1 - T to the symmetric square
        assert!(l_polynomial_from_table(&mut table, 1, 6, false).unwrap().is_one());
        assert!(matches!(
            l_polynomial_from_table(&mut table, 2, 6, false),
            Err(Error::FunctionalEquationViolation { .. })
        ));
    }
}
