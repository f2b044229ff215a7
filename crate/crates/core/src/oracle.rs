//! Exhaustive ground truth for coprime inhomogeneous approximation.
//!
//! For every `n ≤ n_max` the integers `m` are tried in order of distance from
//! `nα − γ`, and the first one coprime to `n` is the best. Records are the
//! `n` at which that best error strictly drops. Deliberately naive.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::confrac::ContinuedFraction;
use crate::error::{domain, precision, Result};
use crate::exec::Exec;
use crate::real::ValidatedReal;

#[derive(Clone, Debug)]
pub struct RecordEntry {
    pub n: u64,
    pub m: BigInt,
    pub err: ValidatedReal,
    pub coprime: bool,
}

/// `|nα − m − γ|`; `n = 0` is allowed.
pub fn approx_error(cf: &ContinuedFraction, gamma: &ValidatedReal, m: &BigInt, n: &BigInt) -> ValidatedReal {
    cf.value().mul_int(n).sub(&ValidatedReal::integer(m.clone())).sub(gamma).abs()
}

/// Best `m` coprime to `n ≥ 1` and its error.
pub fn best_coprime_at(cf: &ContinuedFraction, gamma: &ValidatedReal, n: u64) -> Result<(BigInt, ValidatedReal)> {
    if n == 0 {
        return Err(domain("best coprime approximation needs n ≥ 1"));
    }
    let nb = BigInt::from(n);
    let x = cf.value().mul_int(&nb).sub(gamma);
    let floor = x
        .floor()
        .map_err(|_| precision(format!("n = {n}: ⌊nα − γ⌋ is not decided at the available precision")))?;
    let frac = x.sub(&ValidatedReal::integer(floor.clone()));
    let half = ValidatedReal::rational(BigRational::new(1.into(), 2.into()));
    let below_half = match frac.cmp_to(&half) {
        Ok(Ordering::Greater) => false,
        // an exact tie goes to the smaller m
        Ok(_) => true,
        Err(_) => return Err(precision(format!("n = {n}: nearest integer to nα − γ is not decided"))),
    };
    // candidates alternate around x in order of distance
    let (first, second) = if below_half { (floor.clone(), floor + 1) } else { (floor.clone() + 1, floor) };
    let step: BigInt = if first < second { (-1).into() } else { 1.into() };
    let (mut near, mut far) = (first, second);
    loop {
        for m in [&near, &far] {
            if m.gcd(&nb).is_one() {
                return Ok((m.clone(), approx_error(cf, gamma, m, &nb)));
            }
        }
        near += &step;
        far -= &step;
    }
}

pub fn best_coprime_approx(cf: &ContinuedFraction, gamma: &ValidatedReal, n_max: u64) -> Result<Vec<RecordEntry>> {
    best_coprime_approx_with(cf, gamma, n_max, Exec::default())
}

pub fn best_coprime_approx_with(cf: &ContinuedFraction, gamma: &ValidatedReal, n_max: u64, exec: Exec) -> Result<Vec<RecordEntry>> {
    if n_max == 0 {
        return Err(domain("oracle scan needs n_max ≥ 1"));
    }
    let best = exec.map_range(1, n_max, |n| best_coprime_at(cf, gamma, n));
    let mut records: Vec<RecordEntry> = Vec::new();
    for (n, r) in (1..=n_max).zip(best) {
        let (m, err) = r?;
        let is_record = match records.last() {
            None => true,
            Some(prev) => err
                .lt(&prev.err)
                .map_err(|_| precision(format!("n = {n}: comparison with the running record is not decided")))?,
        };
        if is_record {
            records.push(RecordEntry { n, m, err, coprime: true });
        }
    }
    Ok(records)
}

/// Best `(m, err)` at each listed `n`.
pub fn best_errors(cf: &ContinuedFraction, gamma: &ValidatedReal, ns: &[u64], exec: Exec) -> Result<Vec<(BigInt, ValidatedReal)>> {
    exec.map(ns.to_vec(), |n| best_coprime_at(cf, gamma, n)).into_iter().collect()
}

/// Whether `err` at `(m, n)` is at least the oracle's best at `|n|`.
pub fn dominated_by_oracle(cf: &ContinuedFraction, gamma: &ValidatedReal, m: &BigInt, n: &BigInt) -> Result<bool> {
    if !n.is_positive() {
        return Err(domain("oracle comparison needs n > 0"));
    }
    let nabs = u64::try_from(n).map_err(|_| domain("n exceeds 64 bits"))?;
    let (_, best) = best_coprime_at(cf, gamma, nabs)?;
    best.le(&approx_error(cf, gamma, m, n))
}
