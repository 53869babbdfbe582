//! Local data for all places of a given degree at once.
//!
//! Places of degree `d` correspond to Frobenius orbits in `F_{q^d}`; the root
//! with the smallest index stands for its orbit, so every good place is
//! counted exactly once by evaluating the short model at that root. Places
//! dividing the discriminant (and infinity) go through the exact per-place
//! path instead. Good places are kept as a histogram of traces, which is all
//! any downstream sum needs and makes the aggregation order-free.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::count::{count_points, CountConfig};
use super::local::{special_places, AdditiveKind, LocalData, Place, Reduction};
use super::spec::CurveSpec;
use crate::algebra::{with_extension, Extension, ExtensionVisitor, FiniteField, Poly};
use crate::error::{Error, Result};

/// Places of one degree grouped by local behaviour.
#[derive(Clone, Debug, PartialEq)]
pub struct Stratum {
    pub degree: usize,
    pub q_v: u64,
    /// trace -> number of good places with that trace
    pub good: BTreeMap<i64, u64>,
    /// places of this degree dividing the discriminant, plus infinity in degree 1
    pub special: Vec<LocalData>,
}

/// One summand shape of a stratum, with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaceClass {
    pub red: Reduction,
    pub a_v: i64,
    pub count: u64,
    pub additive: Option<AdditiveKind>,
}

impl Stratum {
    pub fn classes(&self, include_infinite: bool) -> Vec<PlaceClass> {
        let mut out: Vec<PlaceClass> = self
            .good
            .iter()
            .map(|(&a_v, &count)| PlaceClass { red: Reduction::Good, a_v, count, additive: None })
            .collect();
        for ld in &self.special {
            if !include_infinite && ld.place == Place::Infinite {
                continue;
            }
            if ld.red == Reduction::Good {
                // a non-minimal model at this place; fold it into the histogram shape
                out.push(PlaceClass { red: Reduction::Good, a_v: ld.a_v, count: 1, additive: None });
            } else {
                out.push(PlaceClass { red: ld.red, a_v: ld.a_v, count: 1, additive: ld.additive });
            }
        }
        out
    }

    pub fn place_count(&self, include_infinite: bool) -> u64 {
        self.classes(include_infinite).iter().map(|c| c.count).sum()
    }
}

/// Lazily extended per-degree local data for one curve.
#[derive(Clone, Debug)]
pub struct LocalTable {
    curve: CurveSpec,
    cfg: CountConfig,
    special: Vec<LocalData>,
    strata: Vec<Stratum>,
}

impl LocalTable {
    pub fn new(curve: &CurveSpec, cfg: CountConfig) -> Result<Self> {
        let special = special_places(curve, &cfg)?;
        Ok(LocalTable { curve: curve.clone(), cfg, special, strata: Vec::new() })
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    pub fn config(&self) -> &CountConfig {
        &self.cfg
    }

    /// Places dividing the discriminant and the infinite place.
    pub fn special(&self) -> &[LocalData] {
        &self.special
    }

    pub fn computed_degree(&self) -> usize {
        self.strata.len()
    }

    /// Make strata `1..=d_max` available.
    pub fn extend_to(&mut self, d_max: usize) -> Result<()> {
        while self.strata.len() < d_max {
            let d = self.strata.len() + 1;
            let s = compute_stratum(&self.curve, &self.special, d, &self.cfg)?;
            self.strata.push(s);
        }
        Ok(())
    }

    pub fn stratum(&self, d: usize) -> &Stratum {
        &self.strata[d - 1]
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }
}

struct Bulk<'a> {
    a: &'a Poly,
    b: &'a Poly,
    disc: &'a Poly,
    cfg: &'a CountConfig,
}

const CHUNK: u64 = 1 << 12;

impl ExtensionVisitor for Bulk<'_> {
    type Output = Result<BTreeMap<i64, u64>>;

    fn visit<F: FiniteField>(self, ext: &Extension<F>) -> Self::Output {
        let f = ext.field();
        let q = f.order();
        let (a, b, disc) = (ext.embed_poly(self.a), ext.embed_poly(self.b), ext.embed_poly(self.disc));
        let d = ext.degree() as u64;
        let chunks = q.div_ceil(CHUNK);
        let hist = (0..chunks)
            .into_par_iter()
            .map(|ci| -> Result<BTreeMap<i64, u64>> {
                let mut h = BTreeMap::new();
                let mut rng = self.cfg.rng((d << 48) ^ ci);
                for i in ci * CHUNK..((ci + 1) * CHUNK).min(q) {
                    let Some(orbit) = ext.canonical_orbit(i) else { continue };
                    let t = &orbit[0];
                    if f.is_zero(&ext.eval(&disc, t)) {
                        continue;
                    }
                    let (at, bt) = (ext.eval(&a, t), ext.eval(&b, t));
                    let (n, _) = count_points(f, &at, &bt, self.cfg.threshold, &mut rng)?;
                    let tr = q as i64 + 1 - n as i64;
                    if (tr as i128) * (tr as i128) > 4 * q as i128 {
                        return Err(Error::HasseViolation { a: tr, q });
                    }
                    *h.entry(tr).or_insert(0) += 1;
                }
                Ok(h)
            })
            .try_reduce(BTreeMap::new, |mut x, y| {
                for (k, v) in y {
                    *x.entry(k).or_insert(0) += v;
                }
                Ok(x)
            })?;
        Ok(hist)
    }
}

fn compute_stratum(
    c: &CurveSpec,
    special: &[LocalData],
    d: usize,
    cfg: &CountConfig,
) -> Result<Stratum> {
    let (a, b) = c.short_model();
    let good = with_extension(c.field(), d, Bulk { a: &a, b: &b, disc: c.disc(), cfg })??;
    let q_v = c
        .field()
        .q()
        .checked_pow(d as u32)
        .ok_or(Error::FieldTooLarge(c.field().q(), d as u32))?;
    let special = special.iter().filter(|ld| ld.degree() == d).cloned().collect();
    Ok(Stratum { degree: d, q_v, good, special })
}

#[cfg(test)]
mod tests {
    use super::super::local::local_data;
    use super::super::spec::parse_curve;
    use super::*;
    use crate::algebra::{arith::necklace_count, enumerate_monic_irreducibles};

    #[test]
    fn bulk_matches_per_place() {
        let c = parse_curve("q = 5\na = [0, 4*T+4, 0, T, 0]").unwrap();
        let cfg = CountConfig::default();
        let mut table = LocalTable::new(&c, cfg).unwrap();
        table.extend_to(4).unwrap();
        for d in 1..=4 {
            let mut want: BTreeMap<i64, u64> = BTreeMap::new();
            let mut bad = 0;
            for pi in enumerate_monic_irreducibles(c.field(), d).unwrap() {
                let ld = local_data(&c, &Place::Finite(pi), &cfg).unwrap();
                if ld.red == Reduction::Good {
                    *want.entry(ld.a_v).or_insert(0) += 1;
                } else {
                    bad += 1;
                }
            }
            let s = table.stratum(d);
            assert_eq!(s.good, want, "degree {d}");
            let finite_bad = s.special.iter().filter(|x| x.place != Place::Infinite).count();
            assert_eq!(finite_bad, bad);
            assert_eq!(s.place_count(false), necklace_count(5, d as u32));
        }
        // degree one: traces -2, 2, -2 at T+3, T+2, T+1
        assert_eq!(table.stratum(1).good, BTreeMap::from([(-2, 2), (2, 1)]));
    }

    #[test]
    fn bulk_over_extension_constants() {
        let c = parse_curve("q = 25\na = [0, 0, 0, y*T+1, T^2+y]").unwrap();
        let cfg = CountConfig::default();
        let mut table = LocalTable::new(&c, cfg).unwrap();
        table.extend_to(2).unwrap();
        for d in 1..=2 {
            let mut want: BTreeMap<i64, u64> = BTreeMap::new();
            for pi in enumerate_monic_irreducibles(c.field(), d).unwrap() {
                let ld = local_data(&c, &Place::Finite(pi), &cfg).unwrap();
                if ld.red == Reduction::Good {
                    *want.entry(ld.a_v).or_insert(0) += 1;
                }
            }
            assert_eq!(table.stratum(d).good, want, "degree {d}");
        }
    }
}
