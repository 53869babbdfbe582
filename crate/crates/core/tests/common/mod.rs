//! Curves shared by the integration and acceptance tests.
#![allow(dead_code)]

use ffbias::algebra::{FieldSpec, PolyRing};
use ffbias::curve::{check_nonconstant, parse_curve, CurveSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BATTERY_SEED: u64 = 20241;
pub const BATTERY_SIZE: usize = 50;

/// `y^2 = x(x - 1)(x - T)` over `F_5(T)`, in long form.
pub const LEGENDRE5: &str = "q = 5\na = [0, 4*T+4, 0, T, 0]";

pub fn legendre5() -> CurveSpec {
    parse_curve(LEGENDRE5).unwrap()
}

/// Short models `y^2 = x^3 + A x + B` over `F_5(T)` with `deg A, deg B <= 3`
/// drawn from a fixed seed; singular and constant-`j` draws are skipped.
pub fn battery() -> Vec<CurveSpec> {
    let base = FieldSpec::prime(5).unwrap();
    let ring = PolyRing::new(base.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(BATTERY_SEED);
    let mut out = Vec::with_capacity(BATTERY_SIZE);
    while out.len() < BATTERY_SIZE {
        let mut draw = || ring.from_ints(&(0..4).map(|_| rng.gen_range(0..5)).collect::<Vec<i64>>());
        let (a4, a6) = (draw(), draw());
        let Ok(c) = CurveSpec::short(base.clone(), a4, a6) else { continue };
        if check_nonconstant(&c).is_ok() {
            out.push(c);
        }
    }
    out
}

/// A few accepted curves over `F_7(T)`.
pub fn small_curves_f7() -> Vec<CurveSpec> {
    ["[0, 0, 0, T, 1]", "[0, 0, 0, T^2+1, T]", "[0, 0, 0, 3, T^3+2]"]
        .iter()
        .map(|a| parse_curve(&format!("q = 7\na = {a}")).unwrap())
        .collect()
}
