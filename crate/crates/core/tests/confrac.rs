mod common;

use std::cmp::Ordering;

use common::{cf, ALPHAS};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use ostro_core::{ContinuedFraction, Error, ValidatedReal};
use proptest::prelude::*;

const SQRT2_DIGITS: &str = "1.4142135623730950488016887242096980785696718753769480731766797379";

#[test]
fn determinant_identity() {
    for spec in ALPHAS.into_iter().chain(["cf:2;1,3,5", "cf:0,3,1,4,1,5"]) {
        let f = cf(spec);
        let top = f.horizon().map_or(50, |h| h.min(50));
        for k in 0..=top as isize {
            let (p, q) = f.pq(k).unwrap();
            let (p1, q1) = f.pq(k - 1).unwrap();
            let sign = if k % 2 == 0 { -BigInt::one() } else { BigInt::one() };
            assert_eq!(&p * &q1 - &q * &p1, sign, "{spec} k = {k}");
        }
    }
}

#[test]
fn d_k_sign_and_size() {
    for spec in ALPHAS {
        let f = cf(spec);
        for k in 0..=50isize {
            let d = f.d_value(k).unwrap();
            let expect = if k % 2 == 0 { Ordering::Greater } else { Ordering::Less };
            assert_eq!(d.sign().unwrap(), expect, "{spec} k = {k}");
            let (_, q1) = f.pq(k + 1).unwrap();
            assert!(d.abs().mul_int(&q1).le(&ValidatedReal::integer(1)).unwrap());
        }
        assert_eq!(f.d_value(-1).unwrap(), ValidatedReal::integer(-1));
    }
}

#[test]
fn odd_convergents_sandwich_alpha() {
    for spec in ALPHAS {
        let f = cf(spec);
        for k in (1..=49isize).step_by(2) {
            let (p0, q0) = f.pq(k - 1).unwrap();
            let (p1, q1) = f.pq(k).unwrap();
            let below = ValidatedReal::rational(BigRational::new(p0, q0));
            let above = ValidatedReal::rational(BigRational::new(p1, q1));
            assert!(below.lt(f.value()).unwrap() && f.value().lt(&above).unwrap(), "{spec} k = {k}");
        }
    }
}

#[test]
fn d_recurrence() {
    for spec in ALPHAS {
        let f = cf(spec);
        for k in 0..50isize {
            let a = f.quotient(k as usize + 1).unwrap();
            let rhs = f.d_value(k).unwrap().mul_int(&a).add(&f.d_value(k - 1).unwrap());
            assert_eq!(f.d_value(k + 1).unwrap().cmp_to(&rhs).unwrap(), Ordering::Equal, "{spec} k = {k}");
        }
    }
    // decimal source: the recurrence holds up to interval overlap
    let dec = ContinuedFraction::from_decimal(SQRT2_DIGITS, 60).unwrap();
    let h = dec.horizon().unwrap();
    for k in 0..h as isize - 1 {
        let a = dec.quotient(k as usize + 1).unwrap();
        let rhs = dec.d_value(k).unwrap().mul_int(&a).add(&dec.d_value(k - 1).unwrap());
        assert!(dec.d_value(k + 1).unwrap().overlaps(&rhs));
    }
}

#[test]
fn decimal_printout_matches_quadratic() {
    let dec = ContinuedFraction::from_decimal(SQRT2_DIGITS, 60).unwrap();
    let exact = cf(common::SQRT2);
    let h = dec.horizon().unwrap();
    assert!(h >= 60, "horizon {h}");
    assert_eq!(dec.quotients(h).unwrap(), exact.quotients(h).unwrap());
    assert!(matches!(dec.quotient(h + 1), Err(Error::PrecisionExhausted(_))));

    let short = ContinuedFraction::from_decimal("1.41421356237309504880", 20).unwrap();
    let hs = short.horizon().unwrap();
    assert_eq!(short.quotients(hs).unwrap(), exact.quotients(hs).unwrap());
}

#[test]
fn sqrt3_period() {
    let f = cf(common::SQRT3);
    let q: Vec<i64> = f.quotients(8).unwrap().iter().map(|a| i64::try_from(a).unwrap()).collect();
    assert_eq!(q, [1, 1, 2, 1, 2, 1, 2, 1, 2]);
}

fn nonsquare() -> impl Strategy<Value = i64> {
    (2i64..5000).prop_filter("nonsquare", |d| {
        let r = (*d as f64).sqrt() as i64;
        (r - 1..=r + 1).all(|s| s * s != *d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadratic_identities(d in nonsquare(), p in -50i64..50, q in prop::sample::select(vec![-7i64, -3, -2, -1, 1, 2, 3, 5, 11])) {
        let f = ContinuedFraction::from_quadratic(d.into(), p.into(), q.into()).unwrap();
        for k in 0..=25isize {
            let (pk, qk) = f.pq(k).unwrap();
            let (p1, q1) = f.pq(k - 1).unwrap();
            let det = &pk * &q1 - &qk * &p1;
            prop_assert_eq!(det.abs(), BigInt::one());
            let dk = f.d_value(k).unwrap();
            let (_, qn) = f.pq(k + 1).unwrap();
            prop_assert!(dk.abs().mul_int(&qn).le(&ValidatedReal::integer(1)).unwrap());
            if k >= 1 {
                prop_assert!(f.quotient(k as usize).unwrap().is_positive());
            }
        }
        let value = f.value().to_f64();
        let p10 = f.pq(10).unwrap();
        let approx = p10.0.to_string().parse::<f64>().unwrap() / p10.1.to_string().parse::<f64>().unwrap();
        prop_assert!((value - approx).abs() < 1e-6 * value.abs().max(1.0));
    }

    #[test]
    fn periodic_terms_match_finite_recurrence(pre in prop::collection::vec(1i64..6, 1..4), per in prop::collection::vec(1i64..6, 1..4)) {
        let prefix: Vec<BigInt> = pre.iter().map(|&a| a.into()).collect();
        let period: Vec<BigInt> = per.iter().map(|&a| a.into()).collect();
        let f = ContinuedFraction::from_terms(prefix.clone(), Some(period.clone())).unwrap();
        let want: Vec<BigInt> = prefix.iter().cloned().chain(period.iter().cloned().cycle().take(20)).collect();
        // the exact value may expose a shorter period, never different quotients
        prop_assert_eq!(f.quotients(want.len() - 1).unwrap(), want);
    }
}
