use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::lpoly::{divide_linear, LPolynomial};
use super::surd::{Surd, SurdRing};
use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Data at the centre used by the Euler-product limit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenterReport {
    pub m: u32,
    pub value: f64,
    pub gamma: f64,
    pub delta: i32,
}

/// `delta(M) = -1`, after checking that `P_2` does not vanish at `T = q^{-2}`.
pub fn delta(l2: &LPolynomial) -> Result<i32> {
    if l2.n != 2 {
        return Err(Error::InvalidArgument("delta needs the symmetric-square L-polynomial".into()));
    }
    // q^{2N} P_2(q^{-2}) = sum c_j q^{2(N - j)}
    let q2 = BigInt::from(l2.q) * BigInt::from(l2.q);
    let mut acc = BigInt::zero();
    for c in &l2.coeffs {
        acc = acc * &q2 + c;
    }
    // Horner above runs from c_0, so it computed sum c_j q^{2(N-j)}
    if acc.is_zero() {
        Err(Error::DeltaCrossCheckFailed)
    } else {
        Ok(-1)
    }
}

/// `P_1 = (1 - qT)^m Q(T)`; returns the coefficients of `Q` or `OrderMismatch`.
fn strip_center(l: &LPolynomial, m: u32) -> Result<Vec<Surd>> {
    let ring = SurdRing::new(l.q);
    let r = ring.half_power(l.n + 1);
    let mut cur: Vec<Surd> = l.coeffs.iter().map(|c| ring.int(c.clone())).collect();
    for _ in 0..m {
        cur = divide_linear(&ring, &cur, &r).ok_or(Error::OrderMismatch(m))?;
    }
    Ok(cur)
}

/// `L^{(m)}(1/2, M) = m! (log q)^m Q(1/q)` for `P_1 = (1 - qT)^m Q(T)`.
pub fn center_derivative(l: &LPolynomial, m: u32) -> Result<f64> {
    if l.n != 1 {
        return Err(Error::InvalidArgument("centre derivative is defined for n = 1".into()));
    }
    let ring = SurdRing::new(l.q);
    let qcoef = strip_center(l, m)?;
    // exact test Q(1/q) != 0 via q^{deg Q} Q(1/q)
    let qb = BigInt::from(l.q);
    let mut acc = BigInt::zero();
    for c in &qcoef {
        acc = acc * &qb + &c.x;
    }
    if acc.is_zero() {
        return Err(Error::OrderMismatch(m));
    }
    let qf = l.q as f64;
    let value: f64 = qcoef
        .iter()
        .enumerate()
        .map(|(j, c)| ring.to_f64(c) * qf.powi(-(j as i32)))
        .sum();
    let fact: f64 = (1..=m).map(|k| k as f64).product();
    Ok(fact * qf.ln().powi(m as i32) * value)
}

pub fn center_report(l1: &LPolynomial, l2: &LPolynomial) -> Result<CenterReport> {
    let m = l1.rank;
    Ok(CenterReport { m, value: center_derivative(l1, m)?, gamma: EULER_GAMMA, delta: delta(l2)? })
}

/// `|root| * q^{(n+1)/2}` for every complex root, which the Riemann
/// hypothesis puts at 1. Centre roots are divided out exactly first.
pub fn normalized_root_moduli(l: &LPolynomial) -> Vec<f64> {
    let stripped = strip_center(l, l.rank).expect("rank divides exactly");
    let ring = SurdRing::new(l.q);
    let scale = (l.q as f64).powf((l.n + 1) as f64 / 2.0);
    // b_j = c_j / scale^j has its roots on the unit circle
    let b: Vec<f64> = stripped
        .iter()
        .enumerate()
        .map(|(j, c)| ring.to_f64(c) / scale.powi(j as i32))
        .collect();
    let mut out = vec![1.0; l.rank as usize];
    out.extend(poly_roots(&b).into_iter().map(|z| z.norm()));
    out
}

/// Roots of `sum b_j z^j` by Durand-Kerner iteration.
fn poly_roots(b: &[f64]) -> Vec<Complex64> {
    let n = b.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = b[n];
    let monic: Vec<f64> = b.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let mut den = Complex64::new(1.0, 0.0);
            for (j, zj) in roots.iter().enumerate() {
                if i != j {
                    den *= zi - zj;
                }
            }
            let step = eval(zi) / den;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}
