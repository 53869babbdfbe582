//! Prime races over the rationals: weighted prime counts in residue classes,
//! the mod 4 race and the race of Ramanujan's tau. These are empirical
//! illustrations; nothing here is a proof of anything.

mod sieve;
mod tau;

use serde::Serialize;

pub use sieve::{sieve_primes, PrimeTable, SIEVE_LIMIT};
pub use tau::{tau_table, TauTable, TAU_LIMIT};

use crate::algebra::arith::gcd;
use crate::bias::csv_field;
use crate::error::{Error, Result};

/// Upper limit for the tau race (the table is built up to `x`).
pub const TAU_RACE_LIMIT: u64 = 100_000;

/// `sum_{p <= x, p = a mod q} p^{-s}`.
pub fn pi_weighted(x: u64, q: u64, a: u64, s: f64) -> Result<f64> {
    if q == 0 || gcd(a % q, q) != 1 {
        return Err(Error::NotCoprime);
    }
    if s < 0.0 || s.is_nan() {
        return Err(Error::NegativeExponent);
    }
    let t = sieve_primes(x)?;
    Ok(t.primes.iter().filter(|&&p| p as u64 % q == a % q).map(|&p| (p as f64).powf(-s)).sum())
}

/// Grid `start, ..., x_max` with successive points at ratio `>= r` (and step `>= 1`).
pub fn geometric_grid(start: u64, x_max: u64, r: f64) -> Result<Vec<u64>> {
    if r.is_nan() || r <= 1.0 {
        return Err(Error::InvalidArgument(format!("grid ratio {r} must exceed 1")));
    }
    if start > x_max {
        return Err(Error::DegenerateGrid);
    }
    let mut out = vec![start];
    let mut x = start;
    while x < x_max {
        x = ((x as f64 * r).floor() as u64).max(x + 1).min(x_max);
        out.push(x);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicSeries {
    pub name: String,
    pub quantity: String,
    pub x: Vec<u64>,
    pub values: Vec<f64>,
    pub empirical: bool,
}

/// Least-squares slope against `log log x` over grid points in `[lo, hi]`,
/// and the spread of `value - (1/2) log log x` over the same points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_width: f64,
    pub points: usize,
}

impl ClassicSeries {
    pub fn loglog(x: u64) -> f64 {
        (x as f64).ln().ln()
    }

    pub fn fit_window(&self, lo: u64, hi: u64) -> Result<WindowFit> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .x
            .iter()
            .zip(&self.values)
            .filter(|(&x, _)| x >= lo && x <= hi && x >= 3)
            .map(|(&x, &v)| (Self::loglog(x), v))
            .unzip();
        if xs.len() < 2 {
            return Err(Error::DegenerateGrid);
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        if sxx <= 0.0 {
            return Err(Error::DegenerateGrid);
        }
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
        let res: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - 0.5 * x).collect();
        let width = res.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - res.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(WindowFit { slope, intercept: my - slope * mx, residual_width: width, points: xs.len() })
    }

    /// Columns `x, value, (1/2) log log x, residual`.
    pub fn to_csv(&self) -> String {
        let mut out = format!("x,{},half_loglog_x,residual\n", csv_field(&self.quantity));
        for (&x, &v) in self.x.iter().zip(&self.values) {
            let h = if x >= 3 { 0.5 * Self::loglog(x) } else { f64::NAN };
            out.push_str(&format!("{},{:.15e},{:.15e},{:.15e}\n", x, v, h, v - h));
        }
        out
    }
}

/// Running sums of `w(p)` over primes `p <= x` sampled at the grid points.
fn running_on_grid(primes: &[u32], grid: &[u64], w: impl Fn(u32) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = crate::bias::CompSum::default();
    let mut i = 0;
    for &x in grid {
        while i < primes.len() && primes[i] as u64 <= x {
            acc.add(w(primes[i]));
            i += 1;
        }
        out.push(acc.value());
    }
    out
}

/// `pi_{1/2}(x; 4, 3) - pi_{1/2}(x; 4, 1)` on a geometric grid from 5.
pub fn chi4_bias_series(x_max: u64, ratio: f64) -> Result<ClassicSeries> {
    let grid = geometric_grid(5.min(x_max), x_max, ratio)?;
    let t = sieve_primes(x_max)?;
    let values = running_on_grid(&t.primes, &grid, |p| match p % 4 {
        3 => 1.0 / (p as f64).sqrt(),
        1 => -1.0 / (p as f64).sqrt(),
        _ => 0.0,
    });
    Ok(ClassicSeries {
        name: "chi4".into(),
        quantity: "pi_{1/2}(x;4,3) - pi_{1/2}(x;4,1)".into(),
        x: grid,
        values,
        empirical: true,
    })
}

/// `sum_{p <= x} tau(p) / p^6` on a geometric grid from 2.
pub fn tau_bias_series(x_max: u64, ratio: f64) -> Result<ClassicSeries> {
    if x_max > TAU_RACE_LIMIT {
        return Err(Error::LimitTooLarge(x_max));
    }
    let grid = geometric_grid(2.min(x_max), x_max, ratio)?;
    let table = tau_table(x_max as usize)?;
    let t = sieve_primes(x_max)?;
    let values = running_on_grid(&t.primes, &grid, |p| table.tau(p as usize) as f64 / (p as f64).powi(6));
    Ok(ClassicSeries {
        name: "tau".into(),
        quantity: "sum_{p<=x} tau(p)/p^6".into(),
        x: grid,
        values,
        empirical: true,
    })
}

/// `pi_s(x; q, a)` on a geometric grid from 2.
pub fn pi_weighted_series(x_max: u64, q: u64, a: u64, s: f64, ratio: f64) -> Result<ClassicSeries> {
    pi_weighted(2, q, a, s)?;
    let grid = geometric_grid(2.min(x_max), x_max, ratio)?;
    let t = sieve_primes(x_max)?;
    let values = running_on_grid(&t.primes, &grid, |p| {
        if p as u64 % q == a % q {
            (p as f64).powf(-s)
        } else {
            0.0
        }
    });
    Ok(ClassicSeries {
        name: "pis".into(),
        quantity: format!("pi_{s}(x;{q},{a})"),
        x: grid,
        values,
        empirical: true,
    })
}
