//! Partial Euler products at the centre and the BSD-shaped product.
//!
//! The local determinant at a good place is `1 - a_v/q_v + 1/q_v = #E(k_v)/q_v`.
//! At a multiplicative place it is `1 - a_v/q_v`, the value of the reciprocal
//! local factor `1 - a_v T^d` at `T = 1/q`, so that the infinite product is the
//! L-polynomial evaluated at the centre.

use serde::Serialize;

use crate::bias::{central_orders, fit_loglog, BiasKind, BiasSeries, CompSum};
use crate::curve::{check_nonconstant, CountConfig, CurveSpec, LocalTable, Reduction, Stratum};
use crate::error::{Error, Result};
use crate::lfunc::{center_derivative, expected_degree, l_polynomial_from_table, EULER_GAMMA};

/// `-log det(1 - M(v) q_v^{-1/2})` summed over one stratum.
fn stratum_log_inverse(st: &Stratum, include_infinite: bool, good_only: bool) -> Result<f64> {
    let q = st.q_v as f64;
    let mut acc = CompSum::default();
    for c in st.classes(include_infinite) {
        let det = match c.red {
            Reduction::Good => (q + 1.0 - c.a_v as f64) / q,
            _ if good_only => continue,
            _ => 1.0 - c.a_v as f64 / q,
        };
        if det <= 0.0 {
            return Err(Error::ZeroLocalFactor);
        }
        acc.add(-(c.count as f64) * det.ln());
    }
    Ok(acc.value())
}

/// Logarithms of the cumulative products through each degree `1..=d_max`.
pub fn log_partial_products(
    table: &mut LocalTable,
    d_max: usize,
    include_infinite: bool,
    good_only: bool,
) -> Result<Vec<f64>> {
    table.extend_to(d_max)?;
    let mut run = CompSum::default();
    let mut out = Vec::with_capacity(d_max);
    for d in 1..=d_max {
        run.add(stratum_log_inverse(table.stratum(d), include_infinite, good_only)?);
        out.push(run.value());
    }
    Ok(out)
}

/// `prod_{deg v <= d} det(1 - M(v) q_v^{-1/2})^{-1}` for `d = 1..=d_max`.
pub fn partial_euler_product(table: &mut LocalTable, d_max: usize, include_infinite: bool) -> Result<Vec<f64>> {
    Ok(log_partial_products(table, d_max, include_infinite, false)?.into_iter().map(f64::exp).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DrhReport {
    pub q: u64,
    pub m: u32,
    pub delta: i32,
    pub gamma: f64,
    pub rhs: f64,
    pub degrees: Vec<usize>,
    pub lhs: Vec<f64>,
    pub ratio: Vec<f64>,
    pub final_ratio: f64,
}

impl DrhReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,x,lhs (d log q)^m prod det(1-M(v)q_v^{-1/2})^{-1},rhs,ratio\n");
        for i in 0..self.lhs.len() {
            out.push_str(&format!(
                "{},{},{:.15e},{:.15e},{:.15e}\n",
                self.degrees[i],
                (self.q as f64).powi(self.degrees[i] as i32),
                self.lhs[i],
                self.rhs,
                self.ratio[i]
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "delta": self.delta,
            "gamma": self.gamma,
            "rhs": self.rhs,
            "final_ratio": self.final_ratio,
        })
    }
}

/// `(log x)^m` times the partial product against
/// `sqrt(2)^delta L^{(m)}(1/2) / (e^{m gamma} m!)`, with `delta = -1`.
/// `m` overrides the computed centre order (a wrong value surfaces as `OrderMismatch`).
pub fn drh_check_from_table(
    table: &mut LocalTable,
    d_max: usize,
    include_infinite: bool,
    m: Option<u32>,
) -> Result<DrhReport> {
    let q = table.curve().field().q();
    let trunc = (expected_degree(table.special(), 1, include_infinite).unwrap_or(0) + 2).max(d_max);
    let l1 = l_polynomial_from_table(table, 1, trunc, include_infinite)?;
    let m = m.unwrap_or(l1.rank);
    let deriv = center_derivative(&l1, m)?;
    let delta = -1;
    let fact: f64 = (1..=m).map(|k| k as f64).product();
    let rhs = 2f64.sqrt().powi(delta) * deriv / ((m as f64 * EULER_GAMMA).exp() * fact);
    let logs = log_partial_products(table, d_max, include_infinite, false)?;
    let lq = (q as f64).ln();
    let lhs: Vec<f64> = logs
        .iter()
        .enumerate()
        .map(|(i, lp)| ((i + 1) as f64 * lq).powi(m as i32) * lp.exp())
        .collect();
    let ratio: Vec<f64> = lhs.iter().map(|l| l / rhs).collect();
    Ok(DrhReport {
        q,
        m,
        delta,
        gamma: EULER_GAMMA,
        rhs,
        degrees: (1..=d_max).collect(),
        final_ratio: ratio.last().copied().unwrap_or(f64::NAN),
        lhs,
        ratio,
    })
}

pub fn drh_check(c: &CurveSpec, d_max: usize, cfg: CountConfig) -> Result<DrhReport> {
    check_nonconstant(c)?;
    let mut table = LocalTable::new(c, cfg)?;
    drh_check_from_table(&mut table, d_max, true, None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BsdSeries {
    pub q: u64,
    pub degrees: Vec<usize>,
    pub values: Vec<f64>,
    /// fitted exponent of `log x`; absent when the grid is too short
    pub r: Option<f64>,
    pub m1: u32,
}

impl BsdSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,x,prod_good #E(k_v)/q_v\n");
        for (i, v) in self.values.iter().enumerate() {
            let d = self.degrees[i];
            out.push_str(&format!("{},{},{:.15e}\n", d, (self.q as f64).powi(d as i32), v));
        }
        out
    }
}

/// `prod_{good, deg v <= d} #E(k_v)/q_v`, and `r` from a fit of its log.
pub fn bsd_series_from_table(table: &mut LocalTable, d_max: usize, include_infinite: bool) -> Result<BsdSeries> {
    let q = table.curve().field().q();
    let logs = log_partial_products(table, d_max, include_infinite, true)?;
    let (m1, _) = central_orders(table, include_infinite, false, d_max)?;
    let values: Vec<f64> = logs.iter().map(|l| (-l).exp()).collect();
    let as_series = BiasSeries {
        kind: BiasKind::LogEuler,
        q,
        degrees: (1..=d_max).collect(),
        x: (1..=d_max).map(|d| (q as f64).powi(d as i32)).collect(),
        values: logs.iter().map(|l| -l).collect(),
        predicted_slope: m1 as f64,
        good_only: true,
    };
    let r = fit_loglog(&as_series).ok().map(|f| f.slope);
    Ok(BsdSeries { q, degrees: as_series.degrees, values, r, m1 })
}

pub fn bsd_series(c: &CurveSpec, d_max: usize, cfg: CountConfig) -> Result<BsdSeries> {
    check_nonconstant(c)?;
    let mut table = LocalTable::new(c, cfg)?;
    bsd_series_from_table(&mut table, d_max, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bias::bias_series_with_slope;
    use crate::curve::parse_curve;

    fn e1() -> LocalTable {
        let c = parse_curve("q = 5\na = [0, 4*T+4, 0, T, 0]").unwrap();
        LocalTable::new(&c, CountConfig::default()).unwrap()
    }

    #[test]
    fn degree_one_product() {
        let mut t = e1();
        let p = partial_euler_product(&mut t, 1, true).unwrap();
        // good: (5/8)(5/4)(5/8); split at T and T - 1: (1 - 1/5)^{-2}; additive: 1
        let want = (5.0 / 8.0) * (5.0 / 4.0) * (5.0 / 8.0) / 0.64;
        assert!((p[0] - want).abs() < 1e-12);
        assert!(partial_euler_product(&mut t, 0, true).unwrap().is_empty());
    }

    #[test]
    fn log_euler_matches_product() {
        let mut t = e1();
        let logs = log_partial_products(&mut t, 6, true, false).unwrap();
        let s = bias_series_with_slope(&mut t, BiasKind::LogEuler, 6, true, 0.0).unwrap();
        for (a, b) in logs.iter().zip(&s.values) {
            assert!((a - b).abs() < 1e-9);
        }
        let bsd = bsd_series_from_table(&mut t, 6, true).unwrap();
        let good = log_partial_products(&mut t, 6, true, true).unwrap();
        for (v, g) in bsd.values.iter().zip(&good) {
            assert!((v * g.exp() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn report_shape_and_order_mismatch() {
        let mut t = e1();
        let r = drh_check_from_table(&mut t, 4, true, None).unwrap();
        assert_eq!((r.m, r.delta), (0, -1));
        assert!((r.rhs - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.ratio.len(), 4);
        assert_eq!(drh_check_from_table(&mut t, 4, true, Some(1)), Err(Error::OrderMismatch(1)));
    }

    #[test]
    fn infinite_place_toggle() {
        // the place at infinity of this curve has a_v = 0, so it contributes
        // nothing; a curve with split reduction there shifts the product
        let c = parse_curve("q = 5\na = [0, 0, 0, T^2 + 1, T^3 + 2]").unwrap();
        let mut t = LocalTable::new(&c, CountConfig::default()).unwrap();
        let with = log_partial_products(&mut t, 3, true, false).unwrap();
        let without = log_partial_products(&mut t, 3, false, false).unwrap();
        let inf = t.special().iter().find(|ld| ld.place == crate::curve::Place::Infinite).unwrap();
        let shift = if inf.red == Reduction::Good {
            -((6.0 - inf.a_v as f64) / 5.0).ln()
        } else {
            -(1.0 - inf.a_v as f64 / 5.0).ln()
        };
        for (a, b) in with.iter().zip(&without) {
            assert!((a - b - shift).abs() < 1e-12);
        }
    }
}
