use serde::Serialize;

use super::BiasSeries;
use crate::error::{Error, Result};

/// `|slope|` at or below this counts as unbiased.
pub const UNBIASED_THRESHOLD: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_range: f64,
    /// first and last degree of the fit window
    pub window: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasClass {
    Positive,
    Negative,
    Unbiased,
}

/// Least squares of value against `log log x` over the upper half of the degrees.
pub fn fit_loglog(s: &BiasSeries) -> Result<Fit> {
    let n = s.values.len();
    let start = n / 2;
    if n - start < 2 {
        return Err(Error::DegenerateGrid);
    }
    let xs: Vec<f64> = (start..n).map(|i| s.loglog(i)).collect();
    let ys = &s.values[start..];
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateGrid);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let res: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - slope * x).collect();
    let hi = res.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = res.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(Fit { slope, intercept, residual_range: hi - lo, window: (s.degrees[start], s.degrees[n - 1]) })
}

/// Sign of the fitted slope with a dead zone of `UNBIASED_THRESHOLD`.
pub fn classify_bias(s: &BiasSeries) -> Result<(BiasClass, Fit)> {
    let fit = fit_loglog(s)?;
    let class = if fit.slope > UNBIASED_THRESHOLD {
        BiasClass::Positive
    } else if fit.slope < -UNBIASED_THRESHOLD {
        BiasClass::Negative
    } else {
        BiasClass::Unbiased
    };
    Ok((class, fit))
}

#[cfg(test)]
mod tests {
    use super::super::BiasKind;
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64) -> BiasSeries {
        let q = 5u64;
        let degrees: Vec<usize> = (1..=10).collect();
        let values = degrees.iter().map(|&d| f((d as f64 * 5f64.ln()).ln())).collect();
        BiasSeries {
            kind: BiasKind::AWeighted,
            q,
            x: degrees.iter().map(|&d| 5f64.powi(d as i32)).collect(),
            degrees,
            values,
            predicted_slope: 0.5,
            good_only: false,
        }
    }

    #[test]
    fn constant_and_linear() {
        let f = fit_loglog(&synthetic(|_| 3.0)).unwrap();
        assert!(f.slope.abs() < 1e-12 && f.residual_range < 1e-12);
        assert_eq!(f.window, (6, 10));
        let f = fit_loglog(&synthetic(|l| 0.5 * l)).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-9);
        assert_eq!(classify_bias(&synthetic(|l| 0.5 * l)).unwrap().0, BiasClass::Positive);
        assert_eq!(classify_bias(&synthetic(|l| -0.3 * l)).unwrap().0, BiasClass::Negative);
        assert_eq!(classify_bias(&synthetic(|l| 0.1 * l)).unwrap().0, BiasClass::Unbiased);
    }

    #[test]
    fn short_grid_is_degenerate() {
        let mut s = synthetic(|l| l);
        s.values.truncate(2);
        s.degrees.truncate(2);
        s.x.truncate(2);
        assert_eq!(fit_loglog(&s), Err(Error::DegenerateGrid));
    }
}
