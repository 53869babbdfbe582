//! Ramanujan's tau from `Delta = q prod (1 - q^k)^24 = q (prod (1 - q^k)^3)^8`.
//!
//! The cube of the Euler product is Jacobi's sparse series
//! `sum (-1)^n (2n+1) q^{n(n+1)/2}`, and its eighth power follows from the
//! power recurrence `n f_n = sum_j (9j - n) g_j f_{n-j}`. The recurrence runs
//! modulo two primes near `2^61`; `|tau(n)| < 2^118` for `n <= 10^6`, so the
//! CRT lift into the symmetric range is exact.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use super::sieve::sieve_primes;
use crate::algebra::arith::{gcd, is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

pub const TAU_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTable {
    /// `values[n]` is `tau(n)`; `values[0]` is unused and zero
    values: Vec<i128>,
}

fn moduli() -> [u64; 2] {
    let mut out = [0u64; 2];
    let mut p = (1u64 << 61) - 1;
    for slot in out.iter_mut() {
        while !is_prime(p) {
            p -= 2;
        }
        *slot = p;
        p -= 2;
    }
    out
}

/// Coefficients `f_0..f_{len-1}` of the eighth power of Jacobi's series mod `p`.
fn eighth_power_mod(len: usize, p: u64) -> Vec<u64> {
    let mut g: Vec<(usize, i64)> = Vec::new();
    let mut n = 0usize;
    while n * (n + 1) / 2 < len {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        g.push((n * (n + 1) / 2, sign * (2 * n as i64 + 1)));
        n += 1;
    }
    let mut inv = vec![0u64; len.max(2)];
    inv[1] = 1;
    for i in 2..len {
        inv[i] = mul_mod(p - p / i as u64, inv[(p % i as u64) as usize], p);
    }
    let mut f = vec![0u64; len];
    f[0] = 1;
    for n in 1..len {
        let (mut pos, mut neg) = (0u128, 0u128);
        for &(j, gj) in &g[1..] {
            if j > n {
                break;
            }
            let c = (9 * j as i64 - n as i64) * gj;
            let t = c.unsigned_abs() as u128 * f[n - j] as u128;
            if c >= 0 {
                pos += t;
            } else {
                neg += t;
            }
        }
        let p128 = p as u128;
        let s = ((pos % p128) + p128 - (neg % p128)) % p128;
        f[n] = ((s * inv[n] as u128) % p128) as u64;
    }
    f
}

/// `tau(1..=n_max)` exactly.
pub fn tau_table(n_max: usize) -> Result<TauTable> {
    if n_max > TAU_LIMIT {
        return Err(Error::LimitTooLarge(n_max as u64));
    }
    let [p1, p2] = moduli();
    let rs: Vec<Vec<u64>> = [p1, p2].par_iter().map(|&p| eighth_power_mod(n_max, p)).collect();
    let inv_p1 = pow_mod(p1 % p2, p2 - 2, p2);
    let big = p1 as u128 * p2 as u128;
    let mut values = vec![0i128; n_max + 1];
    for n in 1..=n_max {
        let (r1, r2) = (rs[0][n - 1], rs[1][n - 1]);
        let diff = (r2 as u128 + p2 as u128 - (r1 % p2) as u128) % p2 as u128;
        let t = (diff * inv_p1 as u128) % p2 as u128;
        let x = r1 as u128 + p1 as u128 * t;
        values[n] = if x > big / 2 { x as i128 - big as i128 } else { x as i128 };
    }
    Ok(TauTable { values })
}

impl TauTable {
    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    pub fn tau(&self, n: usize) -> i128 {
        self.values[n]
    }

    /// Primes `p` in the table with `tau(p)^2 > 4 p^11`.
    pub fn deligne_violations(&self) -> Result<Vec<u64>> {
        let primes = sieve_primes(self.limit() as u64)?;
        Ok(primes
            .primes
            .iter()
            .filter(|&&p| {
                let t = BigInt::from(self.tau(p as usize));
                &t * &t > BigInt::from(4) * num_traits::pow(BigInt::from(p), 11)
            })
            .map(|&p| p as u64)
            .collect())
    }

    /// Primes with `p^2 <= N` where `tau(p^2) != tau(p)^2 - p^11`.
    pub fn hecke_violations(&self) -> Result<Vec<u64>> {
        let n = self.limit();
        let primes = sieve_primes(crate::algebra::arith::isqrt(n as u128) as u64)?;
        Ok(primes
            .primes
            .iter()
            .map(|&p| p as usize)
            .filter(|&p| p * p <= n)
            .filter(|&p| {
                let t = BigInt::from(self.tau(p));
                BigInt::from(self.tau(p * p)) != &t * &t - num_traits::pow(BigInt::from(p), 11)
            })
            .map(|p| p as u64)
            .collect())
    }

    /// Coprime pairs `(m, n)`, `1 < m < n`, `mn <= N` and `m <= bound`, that break multiplicativity.
    pub fn multiplicativity_violations(&self, bound: usize) -> Vec<(usize, usize)> {
        let limit = self.limit();
        let mut bad = Vec::new();
        for m in 2..=bound.min(limit) {
            for n in m + 1..=limit / m {
                if gcd(m as u64, n as u64) != 1 {
                    continue;
                }
                let prod = BigInt::from(self.tau(m)) * BigInt::from(self.tau(n));
                if prod != BigInt::from(self.tau(m * n)) {
                    bad.push((m, n));
                }
            }
        }
        bad
    }

    /// Largest `|tau(n)|` in the table.
    pub fn max_abs(&self) -> BigInt {
        self.values.iter().map(|&v| BigInt::from(v).abs()).max().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct expansion of `q prod (1 - q^k)^24` with big integers.
    fn oracle(n: usize) -> Vec<BigInt> {
        let mut s = vec![BigInt::from(0); n];
        s[0] = BigInt::from(1);
        for k in 1..n {
            for _ in 0..24 {
                for i in (k..n).rev() {
                    let t = s[i - k].clone();
                    s[i] -= t;
                }
            }
        }
        s
    }

    #[test]
    fn first_values_and_oracle() {
        let t = tau_table(300).unwrap();
        assert_eq!((t.tau(1), t.tau(2), t.tau(3)), (1, -24, 252));
        assert_eq!(t.tau(4), -1472);
        let want = oracle(300);
        for n in 1..=300 {
            assert_eq!(BigInt::from(t.tau(n)), want[n - 1], "tau({n})");
        }
    }

    #[test]
    fn identities() {
        let t = tau_table(20_000).unwrap();
        assert!(t.deligne_violations().unwrap().is_empty());
        assert!(t.hecke_violations().unwrap().is_empty());
        assert!(t.multiplicativity_violations(30).is_empty());
        assert_eq!(tau_table(TAU_LIMIT + 1), Err(Error::LimitTooLarge(TAU_LIMIT as u64 + 1)));
    }
}
