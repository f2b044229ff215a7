//! The coprime approximation pipeline.
//!
//! For an index `i`, a base pair `(m_i, n_i)` with `n_iα − m_i ≈ γ` is
//! shifted along the last two convergents to
//! `(m_i + a·p_{i−1} + b·p_i, n_i + a·q_{i−1} + b·q_i)`. The shift `a` is
//! chosen so that the cross term `N_i(a)` has few prime factors, which keeps
//! the coprimality search for `b` short. The error stays below
//! `(1 + a + b)/q_i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::confrac::ContinuedFraction;
use crate::coprime::{find_coprime_shift, growth_h, ProgressionQuery};
use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::numtheory::factorize_big;
use crate::oracle::approx_error;
use crate::ostrowski::ostrowski_real;
use crate::real::ValidatedReal;

/// The shift `γ`, either on the lattice `αℤ + ℤ` or declared off it.
#[derive(Clone, Debug)]
pub enum GammaSpec {
    /// `γ = α·l + l2`
    Lattice { l: BigInt, l2: BigInt },
    Generic(ValidatedReal),
}

impl GammaSpec {
    pub fn lattice(l: impl Into<BigInt>, l2: impl Into<BigInt>) -> Self {
        GammaSpec::Lattice { l: l.into(), l2: l2.into() }
    }

    /// Integers are lattice points `(0, k)`; other rationals are generic.
    pub fn from_rational(r: BigRational) -> Self {
        if r.is_integer() {
            GammaSpec::lattice(0, r.to_integer())
        } else {
            GammaSpec::Generic(ValidatedReal::rational(r))
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GammaSpec::Lattice { l, l2 } => l.is_zero() && l2.is_zero(),
            GammaSpec::Generic(v) => v.as_exact().is_some_and(|q| q.is_zero()),
        }
    }

    pub fn value(&self, cf: &ContinuedFraction) -> ValidatedReal {
        match self {
            GammaSpec::Lattice { l, l2 } => cf.value().mul_int(l).add(&ValidatedReal::integer(l2.clone())),
            GammaSpec::Generic(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePair {
    pub i: usize,
    pub m: BigInt,
    pub n: BigInt,
}

#[derive(Clone, Debug)]
pub struct ApproxPair {
    pub i: usize,
    pub a: u64,
    pub b: u64,
    pub m: BigInt,
    pub n: BigInt,
    /// `|nα − m − γ|`
    pub err: ValidatedReal,
    /// `err_hi·|n| / exp(c·√ln|n|)`
    pub quality: f64,
    /// `N_i(a)`, zero on the `γ = 0` path
    pub cross: BigInt,
    pub omega_cross: u32,
    /// final cap of the `b` search, zero when no search ran
    pub a_used: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_b: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { max_b: 1 << 20 }
    }
}

pub const MIN_INDEX: usize = 4;

/// Extra depth of the real expansion beyond `i`, so the tail is negligible.
pub const DEPTH_MARGIN: usize = 24;

fn check_index(i: usize) -> Result<()> {
    if i < MIN_INDEX {
        return Err(domain(format!("construction needs i ≥ {MIN_INDEX}, got {i}")));
    }
    Ok(())
}

pub fn base_pair(cf: &ContinuedFraction, gamma: &GammaSpec, i: usize) -> Result<BasePair> {
    check_index(i)?;
    match gamma {
        GammaSpec::Lattice { l, l2 } => {
            let (p, q) = cf.pq(i as isize)?;
            Ok(BasePair { i, m: p - l2, n: q + l })
        }
        GammaSpec::Generic(g) => {
            let real = ostrowski_real(cf, g, i + DEPTH_MARGIN)?;
            let mut m = -real.shift.clone();
            let mut n = BigInt::zero();
            for k in 0..i {
                let (p, q) = cf.pq(k as isize)?;
                m += &real.coeffs[k] * p;
                n += &real.coeffs[k] * q;
            }
            Ok(BasePair { i, m, n })
        }
    }
}

pub fn shifted_pair(base: &BasePair, cf: &ContinuedFraction, a: u64, b: u64) -> Result<(BigInt, BigInt)> {
    let (p1, q1) = cf.pq(base.i as isize - 1)?;
    let (p, q) = cf.pq(base.i as isize)?;
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    Ok((&base.m + &a * p1 + &b * p, &base.n + &a * q1 + &b * q))
}

/// `N_i(a) = n_i·p_i − m_i·q_i + (−1)^{i+1}·a`.
pub fn cross_term(base: &BasePair, cf: &ContinuedFraction, a: u64) -> Result<BigInt> {
    let (p, q) = cf.pq(base.i as isize)?;
    let a = BigInt::from(a);
    let sgn = if base.i.is_multiple_of(2) { -a } else { a };
    Ok(&base.n * p - &base.m * q + sgn)
}

/// `N_i(a)` from its definition `n_i(a,0)·p_i − m_i(a,0)·q_i`.
pub fn cross_term_direct(base: &BasePair, cf: &ContinuedFraction, a: u64) -> Result<BigInt> {
    let (p, q) = cf.pq(base.i as isize)?;
    let (ma, na) = shifted_pair(base, cf, a, 0)?;
    Ok(na * p - ma * q)
}

/// `err·|n| / exp(c·√ln|n|)` from the upper endpoint of `err`.
pub fn verify_theorem(pair: &ApproxPair, c: f64) -> f64 {
    quality(&pair.err, &pair.n, c)
}

fn quality(err: &ValidatedReal, n: &BigInt, c: f64) -> f64 {
    let n = n.abs();
    let err_hi = err.hi().to_f64().unwrap_or(f64::INFINITY);
    // ln n without overflowing f64 for huge n
    let bits = n.bits();
    let ln_n = if bits < 1000 {
        n.to_f64().expect("finite").ln()
    } else {
        let shift = bits - 64;
        (&n >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
    };
    (err_hi.ln() + ln_n - c * ln_n.sqrt()).exp()
}

/// Length of the `a` window, `max(1, ⌈h_c(|N_i(0)|)⌉)`; one when `h_c` is
/// undefined because `|N_i(0)|` is too small.
pub fn a_window(n0: &BigInt, c: f64) -> u64 {
    let x = n0.abs().to_f64().unwrap_or(f64::INFINITY);
    match growth_h(x, c) {
        Ok(h) if h.is_finite() => (h.ceil() as u64).max(1),
        _ => 1,
    }
}

/// Starting cap `max(16, ⌈8·ln ln max(3, |N|)·2^ω⌉)` for the `b` search.
pub fn initial_b_cap(cross: &BigInt, omega: u32) -> u64 {
    let x = cross.abs().to_f64().unwrap_or(f64::INFINITY).max(3.0);
    let v = 8.0 * x.ln().ln() * 2f64.powi(omega as i32);
    (v.ceil() as u64).max(16)
}

fn to_i128(x: &BigInt, what: &str) -> Result<i128> {
    x.to_i128().ok_or_else(|| domain(format!("{what} = {x} exceeds 128 bits")))
}

/// Chooses `a ∈ [1, window]` minimising `ω(|N_i(a)|)`, skipping `N_i(a) = 0`.
fn choose_a(base: &BasePair, cf: &ContinuedFraction, c: f64) -> Result<(u64, BigInt, u32)> {
    let n0 = cross_term(base, cf, 0)?;
    let window = a_window(&n0, c);
    let mut best: Option<(u32, u64, BigInt)> = None;
    for a in 1..=window {
        let n = cross_term(base, cf, a)?;
        if n.is_zero() {
            continue;
        }
        let w = factorize_big(&n.abs())?.omega();
        if best.as_ref().is_none_or(|(bw, _, _)| w < *bw) {
            best = Some((w, a, n));
        }
    }
    let (w, a, n) = best.ok_or_else(|| domain(format!("i = {} unusable: N_i(a) = 0 across the whole a window", base.i)))?;
    Ok((a, n, w))
}

pub fn construct_coprime_approx(cf: &ContinuedFraction, gamma: &GammaSpec, i: usize, c: f64, caps: SearchCaps) -> Result<ApproxPair> {
    check_index(i)?;
    if !(c > 0.0) {
        return Err(domain(format!("c must be positive, got {c}")));
    }
    let gval = gamma.value(cf);
    let (p, q) = cf.pq(i as isize)?;
    if gamma.is_zero() {
        let err = approx_error(cf, &gval, &p, &q);
        let quality = quality(&err, &q, c);
        return Ok(ApproxPair { i, a: 0, b: 0, m: p, n: q, err, quality, cross: BigInt::zero(), omega_cross: 0, a_used: 0 });
    }

    let base = base_pair(cf, gamma, i)?;
    let (a, cross, omega_cross) = choose_a(&base, cf, c)?;
    let (ma, na) = shifted_pair(&base, cf, a, 0)?;

    // gcd(ma + b·p, na + b·q) with a positive step on the first coordinate
    let (m0, r) = if p.is_negative() { (-&ma, -&p) } else { (ma.clone(), p.clone()) };
    if r.is_zero() {
        return Err(domain(format!("p_{i} = 0 cannot drive the coprimality search")));
    }
    let query = ProgressionQuery::new(to_i128(&m0, "m_i(a,0)")?, to_i128(&na, "n_i(a,0)")?, to_i128(&r, "p_i")?, to_i128(&q, "q_i")?, 1)?;

    let mut cap = initial_b_cap(&cross, omega_cross).min(caps.max_b.max(1));
    let b = loop {
        if let Some(b) = find_coprime_shift(&query.with_a_max(cap)) {
            break b;
        }
        if cap >= caps.max_b {
            return Err(Error::SearchCapExhausted(format!(
                "i = {i}: no b ≤ {cap} makes the pair coprime (a = {a}, N_i(a) = {cross}, ω = {omega_cross})"
            )));
        }
        cap = cap.saturating_mul(2).min(caps.max_b);
    };

    let (m, n) = shifted_pair(&base, cf, a, b)?;
    debug_assert!(m.gcd(&n).is_one());
    let err = approx_error(cf, &gval, &m, &n);
    let bound = ValidatedReal::rational(BigRational::new(BigInt::from(1 + a + b), q.clone()));
    if !err.le(&bound)? {
        return Err(domain(format!("i = {i}: error exceeds (1 + a + b)/q_i")));
    }
    let quality = quality(&err, &n, c);
    Ok(ApproxPair { i, a, b, m, n, err, quality, cross, omega_cross, a_used: cap })
}

/// Runs the construction for every `i` in `lo..=hi`, in index order.
pub fn construct_sweep(
    cf: &ContinuedFraction,
    gamma: &GammaSpec,
    lo: usize,
    hi: usize,
    c: f64,
    caps: SearchCaps,
    exec: Exec,
) -> Vec<(usize, Result<ApproxPair>)> {
    if lo > hi {
        return Vec::new();
    }
    // warm the convergent cache so workers only read it
    let _ = cf.pq(hi as isize + 1);
    exec.map_range(lo as u64, hi as u64, |i| {
        let i = i as usize;
        (i, construct_coprime_approx(cf, gamma, i, c, caps))
    })
}

#[derive(Clone, Debug)]
pub struct GrowthRow {
    pub i: usize,
    pub n0: BigInt,
    /// `|N_i(0)| / (q_i·|γ|)`
    pub ratio: f64,
    /// `|N_i(0) − q_i·γ|`
    pub residual: ValidatedReal,
    /// `4` for generic `γ`, `|l|/q_{i+1}` on the lattice
    pub bound: ValidatedReal,
    pub within_bound: bool,
}

pub fn n0_growth_check(cf: &ContinuedFraction, gamma: &GammaSpec, lo: usize, hi: usize) -> Result<Vec<GrowthRow>> {
    if gamma.is_zero() {
        return Err(domain("N_i(0)/(q_i·γ) is undefined for γ = 0"));
    }
    let gval = gamma.value(cf);
    let mut rows = Vec::new();
    for i in lo..=hi {
        let base = base_pair(cf, gamma, i)?;
        let n0 = cross_term(&base, cf, 0)?;
        let (_, q) = cf.pq(i as isize)?;
        let qg = gval.mul_int(&q);
        let residual = ValidatedReal::integer(n0.clone()).sub(&qg).abs();
        let bound = match gamma {
            GammaSpec::Lattice { l, .. } => {
                let (_, q1) = cf.pq(i as isize + 1)?;
                ValidatedReal::rational(BigRational::new(l.abs(), q1))
            }
            GammaSpec::Generic(_) => ValidatedReal::integer(4),
        };
        let within_bound = residual.le(&bound)?;
        let ratio = n0.abs().to_f64().unwrap_or(f64::INFINITY) / qg.abs().to_f64();
        rows.push(GrowthRow { i, n0, ratio, residual, bound, within_bound });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn s2() -> ContinuedFraction {
        ContinuedFraction::parse("quad:2,0,1").unwrap()
    }

    fn third() -> GammaSpec {
        GammaSpec::from_rational(BigRational::new(1.into(), 3.into()))
    }

    #[test]
    fn base_pair_lattice() {
        let cf = s2();
        let (p5, q5) = cf.pq(5).unwrap();
        let b = base_pair(&cf, &GammaSpec::lattice(0, 0), 5).unwrap();
        assert_eq!((b.m, b.n), (p5.clone(), q5.clone()));
        let b = base_pair(&cf, &GammaSpec::lattice(1, 2), 5).unwrap();
        assert_eq!((b.m, b.n), (p5 - 2, q5 + 1));
        assert!(base_pair(&cf, &GammaSpec::lattice(1, 2), 3).is_err());
    }

    #[test]
    fn base_pair_generic_is_below_q_i() {
        let cf = s2();
        for i in 4..20 {
            let b = base_pair(&cf, &third(), i).unwrap();
            assert!(!b.n.is_negative() && b.n < cf.pq(i as isize).unwrap().1);
        }
    }

    #[test]
    fn shift_and_cross_term() {
        let cf = s2();
        let base = base_pair(&cf, &GammaSpec::lattice(0, 0), 5).unwrap();
        assert_eq!(shifted_pair(&base, &cf, 0, 0).unwrap(), (base.m.clone(), base.n.clone()));
        let (p4, q4) = cf.pq(4).unwrap();
        let (p5, q5) = cf.pq(5).unwrap();
        assert_eq!(shifted_pair(&base, &cf, 1, 0).unwrap(), (p5 + p4, q5 + q4));
        // γ = 0: N_i(a) = (−1)^{i+1}·a
        assert_eq!(cross_term(&base, &cf, 7).unwrap(), BigInt::from(7));
        let base6 = base_pair(&cf, &third(), 6).unwrap();
        for a in 0..100 {
            assert_eq!(cross_term(&base6, &cf, a).unwrap(), cross_term_direct(&base6, &cf, a).unwrap());
        }
    }

    #[test]
    fn gamma_zero_short_circuit() {
        let cf = s2();
        let pair = construct_coprime_approx(&cf, &GammaSpec::lattice(0, 0), 7, 2.0, SearchCaps::default()).unwrap();
        let (p, q) = cf.pq(7).unwrap();
        assert_eq!((pair.a, pair.b, &pair.m, &pair.n), (0, 0, &p, &q));
        assert_eq!(pair.err.cmp_to(&cf.d_value(7).unwrap().abs()).unwrap(), Ordering::Equal);
        let zero = GammaSpec::from_rational(BigRational::zero());
        assert!(zero.is_zero());
    }

    #[test]
    fn generic_pipeline() {
        let cf = s2();
        let pair = construct_coprime_approx(&cf, &third(), 10, 2.0, SearchCaps::default()).unwrap();
        assert!(pair.m.gcd(&pair.n).is_one());
        let q10 = cf.pq(10).unwrap().1;
        let bound = ValidatedReal::rational(BigRational::new(BigInt::from(1 + pair.a + pair.b), q10));
        assert!(pair.err.le(&bound).unwrap());
        assert!(pair.err.is_exact());
    }

    #[test]
    fn lattice_error_identity() {
        let cf = s2();
        let gamma = GammaSpec::lattice(1, 0);
        let pair = construct_coprime_approx(&cf, &gamma, 9, 2.0, SearchCaps::default()).unwrap();
        let d9 = cf.d_value(9).unwrap();
        let d8 = cf.d_value(8).unwrap();
        let expect = d9.mul_int(&BigInt::from(1 + pair.b)).add(&d8.mul_int(&BigInt::from(pair.a))).abs();
        assert_eq!(pair.err.cmp_to(&expect).unwrap(), Ordering::Equal);
    }

    #[test]
    fn growth_check_rejects_zero() {
        assert!(n0_growth_check(&s2(), &GammaSpec::lattice(0, 0), 6, 10).is_err());
        let rows = n0_growth_check(&s2(), &third(), 6, 20).unwrap();
        assert!(rows.iter().all(|r| r.within_bound));
        assert!((rows.last().unwrap().ratio - 1.0).abs() < 1e-3);
    }

    #[test]
    fn quality_at_n_one() {
        let err = ValidatedReal::rational(BigRational::new(1.into(), 4.into()));
        assert!((quality(&err, &BigInt::one(), 2.0) - 0.25).abs() < 1e-15);
    }
}
