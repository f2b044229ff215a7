mod common;

use std::cmp::Ordering;

use common::{cf, rv, ALPHAS, GOLDEN, SQRT2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use ostro_core::ostrowski::*;
use ostro_core::{ContinuedFraction, ValidatedReal};
use proptest::prelude::*;

fn generic_gammas() -> Vec<ValidatedReal> {
    vec![
        rv(1, 3),
        rv(1, 7),
        ValidatedReal::rational(BigRational::new(123_456_789.into(), 1_000_000_000.into())),
    ]
}

#[test]
fn telescoping_closes_exactly() {
    for spec in ALPHAS {
        let f = cf(spec);
        for m in 0..=20usize {
            let last = (26 - m) / 2;
            let mut sum = f.d_value((m + 2 * last) as isize).unwrap().abs();
            for j in 1..=last {
                let a = f.quotient(m + 2 * j).unwrap();
                sum = sum.add(&f.d_value((m + 2 * j - 1) as isize).unwrap().abs().mul_int(&a));
            }
            let dm = f.d_value(m as isize).unwrap().abs();
            assert_eq!(sum.cmp_to(&dm).unwrap(), Ordering::Equal, "{spec} m = {m}");
        }
    }
}

#[test]
fn tail_bound_at_every_depth() {
    for spec in ALPHAS {
        let f = cf(spec);
        for g in generic_gammas() {
            let e = ostrowski_real(&f, &g, 40).unwrap();
            for k in 1..=40 {
                let tail = e.gamma_norm.sub(&e.partial_sum(k)).abs();
                assert!(tail.le(&f.d_value(k as isize - 1).unwrap().abs()).unwrap(), "{spec} k = {k}");
            }
            assert_eq!(e.gamma_norm, g.sub(&ValidatedReal::integer(e.shift.clone())));
        }
    }
}

fn legal_strings(f: &ContinuedFraction, len: usize) -> Vec<Vec<u32>> {
    let a: Vec<u32> = (1..=len).map(|k| f.quotient(k).unwrap().to_u32().unwrap()).collect();
    let mut out = vec![vec![]];
    for k in 0..len {
        let mut next = Vec::new();
        for s in out {
            let top = if k == 0 { a[0] - 1 } else { a[k] };
            for c in 0..=top {
                if k > 0 && c == a[k] && s[k - 1] != 0 {
                    continue;
                }
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

#[test]
fn real_prefix_is_the_only_close_string() {
    let f = cf(SQRT2);
    let g = rv(1, 3);
    let e = ostrowski_real(&f, &g, 20).unwrap();
    let bound = f.d_value(7).unwrap().abs();
    let close: Vec<Vec<u32>> = legal_strings(&f, 8)
        .into_iter()
        .filter(|s| {
            let mut sum = ValidatedReal::zero();
            for (k, &c) in s.iter().enumerate() {
                sum = sum.add(&f.d_value(k as isize).unwrap().mul_int(&c.into()));
            }
            e.gamma_norm.sub(&sum).abs().le(&bound).unwrap()
        })
        .collect();
    let prefix: Vec<u32> = e.coeffs[..8].iter().map(|c| c.to_u32().unwrap()).collect();
    assert_eq!(close, vec![prefix]);
}

#[test]
fn golden_third_partial_sums() {
    let f = cf(GOLDEN);
    let e = ostrowski_real(&f, &rv(1, 3), 12).unwrap();
    let err = e.partial_sum(12).sub(&rv(1, 3)).abs();
    assert!(err.le(&f.d_value(11).unwrap().abs()).unwrap());
}

#[test]
fn inhomogeneous_bound_with_digit_gap_two() {
    let f = cf(SQRT2);
    let real = ostrowski_real(&f, &rv(1, 3), 30).unwrap();
    // digits of 1/3 start 1,1,1,0,2,1,0,0: agree below k = 7, then put 2 where b has 0
    assert!(real.coeffs[6].is_zero() && real.coeffs[7].is_zero());
    let mut coeffs: Vec<BigInt> = real.coeffs[..8].to_vec();
    coeffs[7] = 2.into();
    let n = ostrowski_int_reconstruct(&IntOstrowski { coeffs, m_index: 7 }, &f).unwrap();
    let int = ostrowski_int(&f, &n).unwrap();
    assert_eq!(first_disagreement(&int, &real), Some(7));
    let bound = inhom_bound(&f, &int, &real, 7).unwrap();
    let q8 = f.pq(8).unwrap().1;
    assert_eq!(bound, ValidatedReal::rational(BigRational::new(6.into(), q8)));
    assert!(inhom_error(&f, &int, &real).unwrap().le(&bound).unwrap());
}

#[test]
fn tail_sign_first_eligible_index() {
    let f = cf(SQRT2);
    let real = ostrowski_real(&f, &rv(1, 3), 40).unwrap();
    let m = (4..30).find(|&m| !real.coeffs[m].is_zero()).unwrap();
    let expect = if m % 2 == 0 { 1 } else { -1 };
    assert_eq!(tail_sign(&real, &f, m).unwrap(), expect);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn integer_roundtrip_large(digits in "[1-9][0-9]{0,29}", which in 0usize..3) {
        let f = cf(ALPHAS[which]);
        let n: BigInt = digits.parse().unwrap();
        let e = ostrowski_int(&f, &n).unwrap();
        prop_assert_eq!(ostrowski_int_reconstruct(&e, &f).unwrap(), n);
    }

    #[test]
    fn inhomogeneous_bound_holds(n in 1u64..2_000_000, which in 0usize..3, g in 0usize..3) {
        let f = cf(ALPHAS[which]);
        let real = ostrowski_real(&f, &generic_gammas()[g], 45).unwrap();
        let int = ostrowski_int(&f, &BigInt::from(n)).unwrap();
        if let Some(m) = first_disagreement(&int, &real) {
            if m >= 4 {
                let bound = inhom_bound(&f, &int, &real, m).unwrap();
                prop_assert!(inhom_error(&f, &int, &real).unwrap().le(&bound).unwrap());
            }
        }
    }
}
