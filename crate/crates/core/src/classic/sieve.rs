use crate::algebra::arith::isqrt;
use crate::error::{Error, Result};

pub const SIEVE_LIMIT: u64 = 1_000_000_000;

const SEGMENT: usize = 1 << 18;

/// All primes up to a limit, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    pub limit: u64,
    pub primes: Vec<u32>,
}

impl PrimeTable {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Number of primes `<= x` for `x <= limit`.
    pub fn count_upto(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p as u64 <= x)
    }
}

fn small_primes(n: usize) -> Vec<u32> {
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Segmented sieve of Eratosthenes.
pub fn sieve_primes(x: u64) -> Result<PrimeTable> {
    if x > SIEVE_LIMIT {
        return Err(Error::LimitTooLarge(x));
    }
    if x < 2 {
        return Ok(PrimeTable { limit: x, primes: Vec::new() });
    }
    let root = isqrt(x as u128) as usize;
    let base = small_primes(root.max(2));
    let mut primes = Vec::with_capacity((x as f64 / (x as f64).ln() * 1.2) as usize + 16);
    let mut seg = vec![true; SEGMENT];
    let mut lo = 2u64;
    while lo <= x {
        let hi = (lo + SEGMENT as u64 - 1).min(x);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            let p = p as u64;
            if p * p > hi {
                break;
            }
            let mut start = (p * p).max(lo.div_ceil(p) * p);
            while start <= hi {
                seg[(start - lo) as usize] = false;
                start += p;
            }
        }
        primes.extend((0..len).filter(|&i| seg[i]).map(|i| (lo + i as u64) as u32));
        lo = hi + 1;
    }
    Ok(PrimeTable { limit: x, primes })
}
