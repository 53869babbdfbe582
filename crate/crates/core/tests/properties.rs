mod common;

use std::f64::consts::PI;

use ffbias::algebra::{
    arith::necklace_count, enumerate_monic_irreducibles, FieldElement, FieldSpec, FiniteField, QuadExt, ZechField,
};
use ffbias::bias::{bias_series_with_slope, BiasKind};
use ffbias::curve::{
    check_nonconstant, satake_angle, special_places, CountConfig, CurveSpec, LocalData, LocalTable, Place,
};
use ffbias::lfunc::{
    expected_degree, functional_equation_check, l_polynomial_from_table, local_factor,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::prime(5).unwrap()),
        Just(FieldSpec::prime(7).unwrap()),
        Just(FieldSpec::prime(11).unwrap()),
        Just(FieldSpec::new(5, 2, None).unwrap()),
    ]
}

/// Short models over small fields, `a4` of degree at most one and `a6` of
/// degree at most two, so the L-polynomials stay short.
fn curve_strategy() -> impl Strategy<Value = CurveSpec> {
    (field_strategy(), prop::collection::vec(0u64..49, 3), prop::collection::vec(0u64..49, 3))
        .prop_filter_map("singular or constant j", |(f, a, b)| {
            let q = f.q();
            let poly = |v: &[u64]| {
                ffbias::algebra::Poly::from_coeffs(v.iter().map(|&c| FieldElement(c % q)).collect())
            };
            let c = CurveSpec::short(f, poly(&a[..2]), poly(&b)).ok()?;
            check_nonconstant(&c).ok()?;
            Some(c)
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn field_roundtrip(a in 1u64..15625, b in 0u64..15625) {
        let z = ZechField::cached(5, 6).unwrap();
        let (x, y) = (z.element(a - 1), z.element(b));
        prop_assume!(!z.is_zero(&x));
        prop_assert_eq!(z.mul(&z.mul(&x, &y), &z.inv(&x).unwrap()), y);
        let t = QuadExt::new(ZechField::cached(7, 2).unwrap());
        let (x, y) = (t.element(a % t.order()), t.element(b % t.order()));
        prop_assume!(!t.is_zero(&x));
        prop_assert_eq!(t.mul(&t.mul(&x, &y), &t.inv(&x).unwrap()), y);
    }

    #[test]
    fn sym_trace_identity(d in 1u32..9, frac in 0.0f64..1.0) {
        // an integer trace in the Hasse interval and its angle
        let q = 5u64.pow(d);
        let w = (4.0 * q as f64).sqrt().floor() as i64;
        let a = (-w as f64 + frac * (2 * w) as f64).round() as i64;
        let theta = satake_angle(a, q).unwrap();
        prop_assume!(theta > 1e-6 && theta < PI - 1e-6);
        let ld = LocalData::good(Place::Infinite, q, a).unwrap();
        for n in 1..=2u32 {
            let f = local_factor(&ld, n);
            let trace = -f[1].to_f64().unwrap() / (q as f64).powf(n as f64 / 2.0);
            let want = ((n + 1) as f64 * theta).sin() / theta.sin();
            prop_assert!((trace - want).abs() < 1e-10, "n={} a={} q={}: {} vs {}", n, a, q, trace, want);
        }
    }

    #[test]
    fn reduction_type_survives_x_shift(i in 0usize..50, s in prop::collection::vec(0i64..5, 1..3)) {
        // x -> x + s on the long model keeps every local datum
        let c = &common::battery()[i];
        let ring = c.ring();
        let r = ring.from_ints(&s);
        let [a1, a2, a3, a4, a6] = c.coeffs().clone();
        let three = ring.from_ints(&[3]);
        let two = ring.from_ints(&[2]);
        let r2 = ring.mul(&r, &r);
        let a2s = ring.add(&a2, &ring.mul(&three, &r));
        let a4s = ring.add(&ring.add(&a4, &ring.mul(&two, &ring.mul(&r, &a2))), &ring.mul(&three, &r2));
        let a6s = ring.add(
            &ring.add(&a6, &ring.mul(&r, &a4)),
            &ring.add(&ring.mul(&r2, &a2), &ring.mul(&r2, &r)),
        );
        let a3s = ring.add(&a3, &ring.mul(&r, &a1));
        let shifted = CurveSpec::new(c.field().clone(), [a1, a2s, a3s, a4s, a6s]).unwrap();
        let cfg = CountConfig::default();
        let key = |v: Vec<LocalData>| -> Vec<(String, &'static str, i64, u32)> {
            v.into_iter().map(|ld| (format!("{:?}", ld.place), ld.red.name(), ld.a_v, ld.f_v)).collect()
        };
        prop_assert_eq!(key(special_places(c, &cfg).unwrap()), key(special_places(&shifted, &cfg).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn lpoly_invariants(c in curve_strategy()) {
        let mut t = LocalTable::new(&c, CountConfig::default()).unwrap();
        let n = expected_degree(t.special(), 1, true).unwrap();
        // the longer truncation walks every place of degree n + 4
        prop_assume!((c.field().q() as f64).powi(n as i32 + 4) <= 2e5);
        let l = l_polynomial_from_table(&mut t, 1, n + 2, true).unwrap();
        // degree formula and functional equation
        prop_assert_eq!(l.degree, n);
        prop_assert_eq!(functional_equation_check(&l).unwrap(), l.epsilon);
        // a longer truncation changes nothing
        let longer = l_polynomial_from_table(&mut t, 1, n + 4, true).unwrap();
        prop_assert_eq!(&longer.coeffs, &l.coeffs);
        // Hasse at every good place computed so far
        for st in t.strata() {
            for &a in st.good.keys() {
                prop_assert!((a as i128).pow(2) <= 4 * st.q_v as i128);
            }
        }
        // bad places carry the reduction-type value
        for ld in t.special() {
            prop_assert!(ld.a_v.abs() <= 1 || ld.red == ffbias::curve::Reduction::Good);
        }
    }
}

#[test]
fn irreducible_counts_match_necklaces() {
    for (p, k, dmax) in [(5u64, 1u32, 6usize), (7, 1, 6), (5, 2, 4)] {
        let f = FieldSpec::new(p, k, None).unwrap();
        for d in 1..=dmax {
            let n = enumerate_monic_irreducibles(&f, d).unwrap().len() as u64;
            assert_eq!(n, necklace_count(f.q(), d as u32), "q={} d={d}", f.q());
        }
    }
}

#[test]
fn zeta_of_projective_line() {
    // prod over places (1 - T^deg)^{-1} = 1/((1 - T)(1 - qT)), infinity included
    let (q, big_d) = (5u64, 6usize);
    let mut series = vec![BigInt::from(0); big_d + 1];
    series[0] = BigInt::from(1);
    let mut mult = |d: usize, count: u64| {
        for _ in 0..count {
            for i in d..=big_d {
                let t = series[i - d].clone();
                series[i] += t;
            }
        }
    };
    mult(1, 1);
    for d in 1..=big_d {
        mult(d, necklace_count(q, d as u32));
    }
    for (n, c) in series.iter().enumerate() {
        let want: u64 = (0..=n as u32).map(|i| q.pow(i)).sum();
        assert_eq!(*c, BigInt::from(want), "coefficient {n}");
    }
}

#[test]
fn series_are_additive() {
    let mut t = LocalTable::new(&common::legendre5(), CountConfig::default()).unwrap();
    for kind in BiasKind::ALL {
        if kind == BiasKind::TE {
            continue;
        }
        let s = bias_series_with_slope(&mut t, kind, 6, true, 0.0).unwrap();
        for d in 2..=6 {
            let step = ffbias::bias::stratum_sum(kind, t.stratum(d), true);
            assert!((s.values[d - 1] - s.values[d - 2] - step).abs() < 1e-12, "{kind} at {d}");
        }
    }
}
