//! Ostrowski numeration over the convergents of α.
//!
//! Integers expand greedily over the denominators `q_k`; reals in
//! `[−{α}, 1−{α})` expand over the signed errors `D_k`. Both expansions obey
//! the digit rules `0 ≤ c_1 < a_1`, `0 ≤ c_{k+1} ≤ a_{k+1}`, and
//! `c_k = 0` whenever `c_{k+1} = a_{k+1}`; under those rules they are unique.
//! Coefficient vectors are indexed by `k`, so `coeffs[k]` multiplies `q_k`
//! (or `D_k`).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::confrac::ContinuedFraction;
use crate::error::{domain, precision, Error, Result};
use crate::real::ValidatedReal;

/// `n = Σ coeffs[k]·q_k` with `q_M ≤ n < q_{M+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntOstrowski {
    pub coeffs: Vec<BigInt>,
    pub m_index: usize,
}

/// `γ − shift = Σ_{k<K} coeffs[k]·D_k + residuals[K]`.
#[derive(Clone, Debug)]
pub struct RealOstrowski {
    pub coeffs: Vec<BigInt>,
    pub gamma_norm: ValidatedReal,
    pub shift: BigInt,
    /// `residuals[k] = γ_norm − Σ_{j<k} coeffs[j]·D_j`, for `k = 0..=K`
    pub residuals: Vec<ValidatedReal>,
}

impl RealOstrowski {
    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `Σ_{j<k} coeffs[j]·D_j`.
    pub fn partial_sum(&self, k: usize) -> ValidatedReal {
        self.gamma_norm.sub(&self.residuals[k])
    }
}

/// Digit rules shared by both expansions; `coeffs[k]` is checked against `a_{k+1}`.
fn check_digits(cf: &ContinuedFraction, coeffs: &[BigInt]) -> Result<()> {
    for (k, c) in coeffs.iter().enumerate() {
        let a = cf.quotient(k + 1)?;
        if c.is_negative() {
            return Err(Error::IllegalExpansion(format!("negative digit at k = {k}")));
        }
        if k == 0 && c >= &a {
            return Err(Error::IllegalExpansion(format!("first digit {c} must be below a_1 = {a}")));
        }
        if c > &a {
            return Err(Error::IllegalExpansion(format!("digit {c} at k = {k} exceeds a_{} = {a}", k + 1)));
        }
        if k >= 1 && c == &a && !coeffs[k - 1].is_zero() {
            return Err(Error::IllegalExpansion(format!("digit at k = {k} is maximal but the previous digit is nonzero")));
        }
    }
    Ok(())
}

pub fn ostrowski_int(cf: &ContinuedFraction, n: &BigInt) -> Result<IntOstrowski> {
    if !n.is_positive() {
        return Err(domain("Ostrowski expansion of an integer requires n ≥ 1"));
    }
    // largest M with q_M ≤ n, which needs q_{M+1} as well
    let mut m_index = 0usize;
    loop {
        let (_, q_next) = cf.pq(m_index as isize + 1)?;
        if &q_next > n {
            break;
        }
        m_index += 1;
    }
    let mut coeffs = vec![BigInt::zero(); m_index + 1];
    let mut rest = n.clone();
    for k in (0..=m_index).rev() {
        let (_, q) = cf.pq(k as isize)?;
        let c = &rest / &q;
        rest -= &c * &q;
        coeffs[k] = c;
    }
    debug_assert!(rest.is_zero());
    Ok(IntOstrowski { coeffs, m_index })
}

pub fn ostrowski_int_reconstruct(exp: &IntOstrowski, cf: &ContinuedFraction) -> Result<BigInt> {
    if exp.coeffs.is_empty() {
        return Err(Error::IllegalExpansion("empty coefficient list".into()));
    }
    check_digits(cf, &exp.coeffs)?;
    let mut n = BigInt::zero();
    for (k, c) in exp.coeffs.iter().enumerate() {
        n += c * cf.pq(k as isize)?.1;
    }
    if !n.is_positive() {
        return Err(Error::IllegalExpansion("expansion sums to zero".into()));
    }
    Ok(n)
}

/// `ℓ = ⌊γ + {α}⌋`, so that `γ − ℓ ∈ [−{α}, 1 − {α})`.
pub fn normalize_gamma(cf: &ContinuedFraction, gamma: &ValidatedReal) -> Result<(BigInt, ValidatedReal)> {
    let shifted = gamma.add(&cf.frac_alpha()?);
    let shift = shifted.floor()?;
    let norm = gamma.sub(&ValidatedReal::integer(shift.clone()));
    Ok((shift, norm))
}

/// Expands `γ` to depth `depth` by the greedy residual rule: at step `k`
/// take the least `b ≥ 0` that leaves `(−1)^k·ε_{k+1} ≤ |D_{k+1}|`.
///
/// The caller declares `γ ∉ αℤ + ℤ`; an exact boundary hit reveals a
/// lattice shift and is reported as a domain error.
pub fn ostrowski_real(cf: &ContinuedFraction, gamma: &ValidatedReal, depth: usize) -> Result<RealOstrowski> {
    if depth == 0 {
        return Err(domain("real Ostrowski expansion needs depth ≥ 1"));
    }
    let (shift, gamma_norm) = normalize_gamma(cf, gamma)?;
    let mut residuals = vec![gamma_norm.clone()];
    let mut coeffs = Vec::with_capacity(depth);
    for k in 0..depth {
        let dk = cf.d_value(k as isize)?;
        let dk1 = cf.d_value(k as isize + 1)?;
        let eps = residuals.last().expect("nonempty");
        // b ≥ (ε_k + D_{k+1}) / D_k, with equality only on the lattice
        let t = eps.add(&dk1).div(&dk)?;
        if let Some(q) = t.as_exact() {
            if q.is_rational() && q.rat_part().is_integer() {
                return Err(domain("γ lies in αℤ + ℤ (greedy step hit a boundary exactly)"));
            }
        }
        let b = t.ceil()?.max(BigInt::zero());
        let next = eps.sub(&dk.mul_int(&b));
        if next.as_exact().is_some_and(|q| q.is_zero()) {
            return Err(domain("γ lies in αℤ + ℤ (finite expansion)"));
        }
        coeffs.push(b);
        residuals.push(next);
    }
    check_digits(cf, &coeffs)
        .map_err(|e| domain(format!("expansion of γ left the legal digit set ({e}); γ is outside the normalised range or in αℤ + ℤ")))?;
    let tail = residuals[depth].abs();
    let bound = cf.d_value(depth as isize - 1)?.abs();
    if !tail.le(&bound)? {
        return Err(precision("tail bound |ε_K| ≤ |D_{K−1}| could not be certified"));
    }
    Ok(RealOstrowski { coeffs, gamma_norm, shift, residuals })
}

/// Least `m` with `c_{m+1} ≠ b_{m+1}`, within the real expansion's depth.
pub fn first_disagreement(int: &IntOstrowski, real: &RealOstrowski) -> Option<usize> {
    let zero = BigInt::zero();
    (0..real.depth()).find(|&k| int.coeffs.get(k).unwrap_or(&zero) != &real.coeffs[k])
}

/// `3·max(1, |δ_{m+1}|) / q_{m+1}` where `δ = c − b`, valid when the digits
/// agree below `m` and `m ≥ 4`.
pub fn inhom_bound(cf: &ContinuedFraction, int: &IntOstrowski, real: &RealOstrowski, m: usize) -> Result<ValidatedReal> {
    if m < 4 {
        return Err(domain("the inhomogeneous bound requires m ≥ 4"));
    }
    if m >= real.depth() {
        return Err(domain(format!("m = {m} is beyond the real expansion depth {}", real.depth())));
    }
    let zero = BigInt::zero();
    let c = |k: usize| int.coeffs.get(k).unwrap_or(&zero).clone();
    if let Some(k) = (0..m).find(|&k| c(k) != real.coeffs[k]) {
        return Err(domain(format!("digits differ at k = {k} < m = {m}")));
    }
    let delta = (c(m) - &real.coeffs[m]).abs();
    let top = BigInt::from(3) * delta.max(BigInt::from(1));
    let (_, q) = cf.pq(m as isize + 1)?;
    Ok(ValidatedReal::rational(BigRational::new(top, q)))
}

/// The directly evaluated quantity `|nα − Σ c_{k+1}p_k − γ_norm|` that
/// [`inhom_bound`] controls.
pub fn inhom_error(cf: &ContinuedFraction, int: &IntOstrowski, real: &RealOstrowski) -> Result<ValidatedReal> {
    let mut n = BigInt::zero();
    let mut m = BigInt::zero();
    for (k, c) in int.coeffs.iter().enumerate() {
        let (p, q) = cf.pq(k as isize)?;
        n += c * q;
        m += c * p;
    }
    Ok(cf.value().mul_int(&n).sub(&ValidatedReal::integer(m)).sub(&real.gamma_norm).abs())
}

/// Certified sign of `Σ_{k≥m} b_{k+1}·D_k`.
///
/// The truncated tail `Σ_{m≤k<K}` is widened by the tail bound `|D_{K−1}|`;
/// if that enclosure still straddles zero the exact residual `ε_m` decides.
pub fn tail_sign(real: &RealOstrowski, cf: &ContinuedFraction, m: usize) -> Result<i8> {
    if m < 4 {
        return Err(domain("tail sign law requires m ≥ 4"));
    }
    if m >= real.depth() {
        return Err(domain(format!("m = {m} is beyond the expansion depth {}", real.depth())));
    }
    if real.coeffs[m].is_zero() {
        return Err(domain(format!("tail sign law requires b_{} ≠ 0", m + 1)));
    }
    let depth = real.depth();
    let mut sum = ValidatedReal::zero();
    for k in m..depth {
        sum = sum.add(&cf.d_value(k as isize)?.mul_int(&real.coeffs[k]));
    }
    let bound = cf.d_value(depth as isize - 1)?.abs();
    let sign = if sum.sub(&bound).sign().ok() == Some(Ordering::Greater) {
        Ordering::Greater
    } else if sum.add(&bound).sign().ok() == Some(Ordering::Less) {
        Ordering::Less
    } else {
        real.residuals[m].sign()?
    };
    match sign {
        Ordering::Greater => Ok(1),
        Ordering::Less => Ok(-1),
        Ordering::Equal => Err(domain("tail vanishes: γ lies in αℤ + ℤ")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn third() -> ValidatedReal {
        ValidatedReal::rational(BigRational::new(big(1), big(3)))
    }

    fn nonzero(e: &IntOstrowski) -> Vec<(usize, i64)> {
        e.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, i64::try_from(c).unwrap()))
            .collect()
    }

    #[test]
    fn integer_expansion_examples() {
        let golden = ContinuedFraction::parse("quad:5,1,2").unwrap();
        let e = ostrowski_int(&golden, &big(10)).unwrap();
        assert_eq!(nonzero(&e), vec![(2, 1), (5, 1)]);
        assert_eq!(ostrowski_int_reconstruct(&e, &golden).unwrap(), big(10));

        let s2 = ContinuedFraction::parse("quad:2,0,1").unwrap();
        assert_eq!(nonzero(&ostrowski_int(&s2, &big(10)).unwrap()), vec![(2, 2)]);
        let q3 = s2.pq(3).unwrap().1;
        let e = ostrowski_int(&s2, &q3).unwrap();
        assert_eq!(nonzero(&e), vec![(3, 1)]);
        assert_eq!(e.m_index, 3);
    }

    #[test]
    fn reconstruct_rejects_illegal() {
        let golden = ContinuedFraction::parse("quad:5,1,2").unwrap();
        let empty = IntOstrowski { coeffs: vec![], m_index: 0 };
        assert!(matches!(ostrowski_int_reconstruct(&empty, &golden), Err(Error::IllegalExpansion(_))));
        // c_1 must be below a_1 = 1
        let bad = IntOstrowski { coeffs: vec![big(1)], m_index: 0 };
        assert!(ostrowski_int_reconstruct(&bad, &golden).is_err());
        // adjacent maximal digits
        let adj = IntOstrowski { coeffs: vec![big(0), big(1), big(1)], m_index: 2 };
        assert!(ostrowski_int_reconstruct(&adj, &golden).is_err());
        let ok = IntOstrowski { coeffs: vec![big(0), big(0), big(1), big(0), big(0), big(1)], m_index: 5 };
        assert_eq!(ostrowski_int_reconstruct(&ok, &golden).unwrap(), big(10));
    }

    #[test]
    fn normalize_examples() {
        let s2 = ContinuedFraction::parse("quad:2,0,1").unwrap();
        let (l, _) = normalize_gamma(&s2, &third()).unwrap();
        assert_eq!(l, big(0));
        let g = ValidatedReal::rational(BigRational::new(big(9), big(10)));
        let (l, norm) = normalize_gamma(&s2, &g).unwrap();
        assert_eq!(l, big(1));
        assert_eq!(norm, ValidatedReal::rational(BigRational::new(big(-1), big(10))));
        // γ = 1 − {α} lands on −{α}
        let edge = ValidatedReal::integer(1).sub(&s2.frac_alpha().unwrap());
        let (l, norm) = normalize_gamma(&s2, &edge).unwrap();
        assert_eq!(l, big(1));
        assert_eq!(norm.cmp_to(&s2.frac_alpha().unwrap().neg()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn real_expansion_reconstructs() {
        let golden = ContinuedFraction::parse("quad:5,1,2").unwrap();
        let e = ostrowski_real(&golden, &third(), 12).unwrap();
        let err = e.partial_sum(12).sub(&third()).abs();
        assert!(err.le(&golden.d_value(11).unwrap().abs()).unwrap());
    }

    #[test]
    fn real_expansion_rejects_lattice_gamma() {
        let s2 = ContinuedFraction::parse("quad:2,0,1").unwrap();
        // γ = α − 1 = D_0 is a lattice point
        let g = s2.frac_alpha().unwrap();
        assert!(matches!(ostrowski_real(&s2, &g, 10), Err(Error::Domain(_))));
        assert!(ostrowski_real(&s2, &ValidatedReal::zero(), 10).is_err());
    }

    #[test]
    fn inhom_bound_preconditions() {
        let s2 = ContinuedFraction::parse("quad:2,0,1").unwrap();
        let real = ostrowski_real(&s2, &third(), 20).unwrap();
        let int = ostrowski_int(&s2, &big(1)).unwrap();
        assert!(matches!(inhom_bound(&s2, &int, &real, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn decimal_alpha_expansion() {
        let s2 = ContinuedFraction::parse("dec:1.4142135623730950488016887242096980785697@40").unwrap();
        let exact = ContinuedFraction::parse("quad:2,0,1").unwrap();
        let a = ostrowski_real(&s2, &third(), 20).unwrap();
        let b = ostrowski_real(&exact, &third(), 20).unwrap();
        assert_eq!(a.coeffs, b.coeffs);
    }
}
