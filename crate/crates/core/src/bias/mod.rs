//! Cumulative per-degree sums over places, log log fits and classification.
//!
//! For a place `v` write `M(v)` for the unitarily normalised Frobenius: at a
//! good place its eigenvalues are `exp(+-i theta_v)`, at a multiplicative place
//! it is the scalar `a_v / sqrt(q_v)`. With `u_k(v) = tr M(v)^k / q_v^{k/2}` the
//! logarithm of the local factor at the centre is `sum_k u_k / k`, and the
//! kinds below are pieces of that expansion or its symmetric-square variants.

mod fit;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::curve::{CountConfig, CurveSpec, LocalTable, PlaceClass, Reduction, Stratum};
use crate::error::{Error, Result};
use crate::lfunc::{expected_degree, l_polynomial_from_table};

pub use fit::{classify_bias, fit_loglog, BiasClass, Fit, UNBIASED_THRESHOLD};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasKind {
    AWeighted,
    Sym2Plus,
    Sym2Minus,
    #[serde(rename = "mertens_II")]
    MertensII,
    #[serde(rename = "tail_III")]
    TailIII,
    LogEuler,
    TE,
}

impl BiasKind {
    pub const ALL: [BiasKind; 7] = [
        BiasKind::AWeighted,
        BiasKind::Sym2Plus,
        BiasKind::Sym2Minus,
        BiasKind::MertensII,
        BiasKind::TailIII,
        BiasKind::LogEuler,
        BiasKind::TE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BiasKind::AWeighted => "a_weighted",
            BiasKind::Sym2Plus => "sym2_plus",
            BiasKind::Sym2Minus => "sym2_minus",
            BiasKind::MertensII => "mertens_II",
            BiasKind::TailIII => "tail_III",
            BiasKind::LogEuler => "log_euler",
            BiasKind::TE => "t_e",
        }
    }

    /// Column header naming the summed quantity.
    pub fn quantity(self) -> &'static str {
        match self {
            BiasKind::AWeighted => "sum a_v/q_v",
            BiasKind::Sym2Plus => "sum_good 2(cos t_v + cos 2t_v)/sqrt q_v",
            BiasKind::Sym2Minus => "sum_good 2(cos 2t_v - cos t_v)/sqrt q_v",
            BiasKind::MertensII => "(1/2) sum tr M(v)^2/q_v",
            BiasKind::TailIII => "sum_{k>=3} sum tr M(v)^k/(k q_v^{k/2})",
            BiasKind::LogEuler => "log prod det(1 - M(v) q_v^{-1/2})^{-1}",
            BiasKind::TE => "T_E(d) = -(d/q^{d/2}) sum_good a_v/sqrt q_v",
        }
    }

    pub fn good_only(self) -> bool {
        matches!(self, BiasKind::Sym2Plus | BiasKind::Sym2Minus | BiasKind::TE)
    }

    fn needs_sym2(self) -> bool {
        matches!(self, BiasKind::Sym2Plus | BiasKind::Sym2Minus)
    }
}

impl fmt::Display for BiasKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BiasKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BiasKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s) || k.name().replace('_', "-") == s)
            .ok_or_else(|| Error::Parse(format!("unknown bias kind '{s}'")))
    }
}

/// Coefficient `C` in `S(x) ~ C log log x`.
pub fn predicted_slope(kind: BiasKind, m1: u32, m2: u32) -> f64 {
    let (m1, m2) = (m1 as f64, m2 as f64);
    match kind {
        BiasKind::AWeighted => 0.5 - m1,
        BiasKind::Sym2Plus => 1.0 - m1 - m2,
        BiasKind::Sym2Minus => m1 - m2,
        BiasKind::MertensII => -0.5,
        BiasKind::TailIII | BiasKind::TE => 0.0,
        BiasKind::LogEuler => -m1,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasSeries {
    pub kind: BiasKind,
    pub q: u64,
    pub degrees: Vec<usize>,
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    pub predicted_slope: f64,
    pub good_only: bool,
}

impl BiasSeries {
    pub fn loglog(&self, i: usize) -> f64 {
        (self.degrees[i] as f64 * (self.q as f64).ln()).ln()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Columns `d, x, value, predicted, residual`.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "d,x,{},predicted_slope*loglog(x),residual\n",
            csv_field(self.kind.quantity())
        );
        for i in 0..self.values.len() {
            let pred = self.predicted_slope * self.loglog(i);
            out.push_str(&format!(
                "{},{},{:.15e},{:.15e},{:.15e}\n",
                self.degrees[i],
                self.x[i],
                self.values[i],
                pred,
                self.values[i] - pred
            ));
        }
        out
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Neumaier compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompSum {
    sum: f64,
    c: f64,
}

impl CompSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Number of terms kept in the `k >= 3` tail at norm `q_v`.
pub fn tail_terms(q_v: u64) -> usize {
    let k = (2.0 * 12.0 * 10f64.ln() / (q_v as f64).ln()).ceil() as usize;
    k.max(3)
}

/// `u_k = tr M(v)^k / q_v^{k/2}` for `k = 1..=k_max`.
fn normalized_power_traces(c: &PlaceClass, q_v: u64, k_max: usize) -> Vec<f64> {
    let q = q_v as f64;
    let mut u = vec![0.0; k_max + 1];
    match c.red {
        Reduction::Good => {
            // power sums of the roots of 1 - (a/q) X + X^2/q
            let s1 = c.a_v as f64 / q;
            let mut prev = 2.0;
            let mut cur = s1;
            for slot in u.iter_mut().skip(1) {
                *slot = cur;
                let next = s1 * cur - prev / q;
                prev = cur;
                cur = next;
            }
        }
        _ => {
            let lam = c.a_v as f64 / q;
            let mut p = 1.0;
            for slot in u.iter_mut().skip(1) {
                p *= lam;
                *slot = p;
            }
        }
    }
    u
}

/// Contribution of one degree stratum to the kind's running sum. For `t_e`
/// this is the plain `sum_good a_v / sqrt q_v`, rescaled by the caller.
pub fn stratum_sum(kind: BiasKind, st: &Stratum, include_infinite: bool) -> f64 {
    let q = st.q_v as f64;
    let sq = q.sqrt();
    let mut acc = CompSum::default();
    for c in st.classes(include_infinite) {
        let n = c.count as f64;
        let good = c.red == Reduction::Good;
        if kind.good_only() && !good {
            continue;
        }
        let a = c.a_v as f64;
        let term = match kind {
            BiasKind::AWeighted => a / q,
            BiasKind::Sym2Plus | BiasKind::Sym2Minus => {
                let cos1 = (a / (2.0 * sq)).clamp(-1.0, 1.0);
                let cos2 = 2.0 * cos1 * cos1 - 1.0;
                let s = if kind == BiasKind::Sym2Plus { cos1 + cos2 } else { cos2 - cos1 };
                2.0 * s / sq
            }
            BiasKind::TE => a / sq,
            BiasKind::MertensII => normalized_power_traces(&c, st.q_v, 2)[2] / 2.0,
            BiasKind::TailIII | BiasKind::LogEuler => {
                let k_max = tail_terms(st.q_v);
                let u = normalized_power_traces(&c, st.q_v, k_max);
                let start = if kind == BiasKind::TailIII { 3 } else { 1 };
                let mut t = CompSum::default();
                for (k, uk) in u.iter().enumerate().skip(start) {
                    t.add(uk / k as f64);
                }
                t.value()
            }
        };
        acc.add(n * term);
    }
    acc.value()
}

/// Cumulative series through degree `d_max` with an explicit predicted slope.
pub fn bias_series_with_slope(
    table: &mut LocalTable,
    kind: BiasKind,
    d_max: usize,
    include_infinite: bool,
    predicted: f64,
) -> Result<BiasSeries> {
    table.extend_to(d_max)?;
    let q = table.curve().field().q();
    let qf = q as f64;
    let mut values = Vec::with_capacity(d_max);
    let mut run = CompSum::default();
    for d in 1..=d_max {
        run.add(stratum_sum(kind, table.stratum(d), include_infinite));
        let v = match kind {
            BiasKind::TE => -(d as f64) / qf.powf(d as f64 / 2.0) * run.value(),
            _ => run.value(),
        };
        values.push(v);
    }
    Ok(BiasSeries {
        kind,
        q,
        degrees: (1..=d_max).collect(),
        x: (1..=d_max).map(|d| qf.powi(d as i32)).collect(),
        values,
        predicted_slope: predicted,
        good_only: kind.good_only(),
    })
}

/// Centre orders `m_1` and (when asked) `m_2`, read off the L-polynomials.
/// The truncation is at least `d_min`, since those strata are needed anyway.
pub fn central_orders(
    table: &mut LocalTable,
    include_infinite: bool,
    with_sym2: bool,
    d_min: usize,
) -> Result<(u32, Option<u32>)> {
    let trunc = |n: u32, table: &LocalTable| {
        let want = expected_degree(table.special(), n, include_infinite).unwrap_or(0) + 2;
        want.max(d_min)
    };
    let t1 = trunc(1, table);
    let m1 = l_polynomial_from_table(table, 1, t1, include_infinite)?.rank;
    let m2 = if with_sym2 {
        let t2 = trunc(2, table);
        Some(l_polynomial_from_table(table, 2, t2, include_infinite)?.rank)
    } else {
        None
    };
    Ok((m1, m2))
}

/// Series for `kind`, with the predicted slope taken from the central orders.
pub fn bias_series_from_table(
    table: &mut LocalTable,
    kind: BiasKind,
    d_max: usize,
    include_infinite: bool,
) -> Result<BiasSeries> {
    if d_max < 1 {
        return Err(Error::InvalidArgument("d_max must be at least 1".into()));
    }
    let predicted = match kind {
        BiasKind::MertensII | BiasKind::TailIII | BiasKind::TE => predicted_slope(kind, 0, 0),
        _ => {
            let (m1, m2) = central_orders(table, include_infinite, kind.needs_sym2(), d_max)?;
            predicted_slope(kind, m1, m2.unwrap_or(0))
        }
    };
    bias_series_with_slope(table, kind, d_max, include_infinite, predicted)
}

pub fn bias_series(c: &CurveSpec, kind: BiasKind, d_max: usize, cfg: CountConfig) -> Result<BiasSeries> {
    crate::curve::check_nonconstant(c)?;
    let mut table = LocalTable::new(c, cfg)?;
    bias_series_from_table(&mut table, kind, d_max, true)
}

/// `T_E` together with the running fraction of `d <= D` where it is positive.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TeSeries {
    pub series: BiasSeries,
    pub positive_density: Vec<f64>,
}

impl TeSeries {
    pub fn to_csv(&self) -> String {
        let mut out = format!("d,x,{},positive_density\n", csv_field(BiasKind::TE.quantity()));
        for i in 0..self.series.values.len() {
            out.push_str(&format!(
                "{},{},{:.15e},{:.15e}\n",
                self.series.degrees[i], self.series.x[i], self.series.values[i], self.positive_density[i]
            ));
        }
        out
    }
}

pub fn t_e_series_from_table(table: &mut LocalTable, d_max: usize, include_infinite: bool) -> Result<TeSeries> {
    let series = bias_series_with_slope(table, BiasKind::TE, d_max, include_infinite, 0.0)?;
    let mut pos = 0usize;
    let positive_density = series
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v > 0.0 {
                pos += 1;
            }
            pos as f64 / (i + 1) as f64
        })
        .collect();
    Ok(TeSeries { series, positive_density })
}

pub fn t_e_series(c: &CurveSpec, d_max: usize, cfg: CountConfig) -> Result<TeSeries> {
    crate::curve::check_nonconstant(c)?;
    let mut table = LocalTable::new(c, cfg)?;
    t_e_series_from_table(&mut table, d_max, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::parse_curve;

    fn e1() -> LocalTable {
        let c = parse_curve("q = 5\na = [0, 4*T+4, 0, T, 0]").unwrap();
        LocalTable::new(&c, CountConfig::default()).unwrap()
    }

    #[test]
    fn degree_one_values() {
        let mut t = e1();
        let s = bias_series_with_slope(&mut t, BiasKind::AWeighted, 1, true, 0.5).unwrap();
        // (-2 + 2 - 2)/5 + (1 + 1)/5 + 0
        assert!(s.values[0].abs() < 1e-15);
        let s = bias_series_with_slope(&mut t, BiasKind::MertensII, 1, true, -0.5).unwrap();
        // three good terms (4/25 - 2/5)/2 and two split terms (1/5)^2/2
        let want = 3.0 * (4.0 / 25.0 - 0.4) / 2.0 + 2.0 * 0.02;
        assert!((s.values[0] - want).abs() < 1e-15);
        let te = t_e_series_from_table(&mut t, 1, true).unwrap();
        assert!((te.series.values[0] - 0.4).abs() < 1e-12);
        assert_eq!(te.positive_density, vec![1.0]);
    }

    #[test]
    fn kinds_parse_and_slopes() {
        for k in BiasKind::ALL {
            assert_eq!(k.name().parse::<BiasKind>().unwrap(), k);
        }
        assert!("nope".parse::<BiasKind>().is_err());
        assert_eq!(predicted_slope(BiasKind::AWeighted, 0, 0), 0.5);
        assert_eq!(predicted_slope(BiasKind::Sym2Minus, 0, 0), 0.0);
        assert_eq!(predicted_slope(BiasKind::AWeighted, 1, 0), -0.5);
        assert_eq!(predicted_slope(BiasKind::MertensII, 3, 2), -0.5);
    }

    #[test]
    fn log_euler_splits_into_three_parts() {
        let mut t = e1();
        let d = 5;
        let get = |t: &mut LocalTable, k| bias_series_with_slope(t, k, d, true, 0.0).unwrap().values;
        let (i, ii, iii, all) = (
            get(&mut t, BiasKind::AWeighted),
            get(&mut t, BiasKind::MertensII),
            get(&mut t, BiasKind::TailIII),
            get(&mut t, BiasKind::LogEuler),
        );
        for j in 0..d {
            assert!((i[j] + ii[j] + iii[j] - all[j]).abs() < 1e-12);
        }
        // sym2_plus - sym2_minus = sum_good 4 cos t_v / sqrt q_v = 2 sum_good a_v / q_v
        let plus = get(&mut t, BiasKind::Sym2Plus);
        let minus = get(&mut t, BiasKind::Sym2Minus);
        let mut good = 0.0;
        for dd in 1..=d {
            let st = t.stratum(dd);
            good += st.good.iter().map(|(&a, &n)| 2.0 * n as f64 * a as f64 / st.q_v as f64).sum::<f64>();
            assert!((plus[dd - 1] - minus[dd - 1] - good).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_is_small_and_shrinking() {
        let mut t = e1();
        let s = bias_series_with_slope(&mut t, BiasKind::TailIII, 6, true, 0.0).unwrap();
        let steps: Vec<f64> = s.values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for w in steps.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert_eq!(tail_terms(5), 35);
        assert_eq!(tail_terms(5u64.pow(10)), 4);
    }

    #[test]
    fn csv_has_header() {
        let mut t = e1();
        let s = bias_series_with_slope(&mut t, BiasKind::AWeighted, 2, true, 0.5).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "d,x,sum a_v/q_v,predicted_slope*loglog(x),residual");
        assert_eq!(lines.count(), 2);
    }
}
