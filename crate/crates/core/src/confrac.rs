//! Simple continued fractions of irrational numbers: partial quotients,
//! principal convergents `p_k/q_k` and the signed errors `D_k = q_k·α − p_k`.
//!
//! Three sources are supported. Quadratic irrationals `(p + √d)/q` and
//! eventually periodic term lists are held exactly in `ℚ(√d)`. A decimal
//! literal with a stated number of trusted digits becomes an interval, and
//! only those quotients shared by every real in the interval are exposed;
//! asking past that horizon is an error.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{precision, Error, Result};
use crate::real::{is_perfect_square, parse_decimal, QuadSurd, ValidatedReal};

/// Where the partial quotients come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// `(p + √d) / q`.
    Quadratic { d: BigInt, p: BigInt, q: BigInt },
    /// `[prefix; period, period, …]`, or a known prefix when `period` is `None`.
    Terms { prefix: Vec<BigInt>, period: Option<Vec<BigInt>> },
    /// A decimal literal of which `precision` fractional digits are trusted.
    Decimal { digits: String, precision: u32 },
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            Source::Quadratic { d, p, q } => write!(f, "quad:{d},{p},{q}"),
            Source::Terms { prefix, period: None } => write!(f, "cf:{}", join(prefix)),
            Source::Terms { prefix, period: Some(per) } => write!(f, "cf:{};{}", join(prefix), join(per)),
            Source::Decimal { digits, precision } => write!(f, "dec:{digits}@{precision}"),
        }
    }
}

/// `k`-th principal convergent with its signed error `D_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub k: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub d: ValidatedReal,
}

#[derive(Debug, Default)]
struct Cache {
    quotients: Vec<BigInt>,
    /// complete quotient `x_k` for the next index, exact sources only
    next_state: Option<QuadSurd>,
    seen: HashMap<QuadSurd, usize>,
    period: Option<(usize, usize)>,
    /// `(p_k, q_k)` for `k = 0, 1, …`
    pq: Vec<(BigInt, BigInt)>,
}

pub struct ContinuedFraction {
    source: Source,
    value: ValidatedReal,
    /// the last certifiable quotient index; `None` when unbounded
    horizon: Option<usize>,
    cache: Mutex<Cache>,
}

impl fmt::Debug for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuedFraction")
            .field("source", &self.source)
            .field("horizon", &self.horizon)
            .finish()
    }
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Finite convergent recurrence over `terms`, returning the last two `(p, q)` pairs.
fn finite_matrix(terms: &[BigInt]) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    let (mut p0, mut q0) = (big(1), big(0));
    let (mut p1, mut q1) = (terms[0].clone(), big(1));
    for a in &terms[1..] {
        let p2 = a * &p1 + &p0;
        let q2 = a * &q1 + &q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    ((p1, q1), (p0, q0))
}

/// `(P·y + P') / (Q·y + Q')` in exact arithmetic.
fn mobius_apply(m: &((BigInt, BigInt), (BigInt, BigInt)), y: &QuadSurd) -> QuadSurd {
    let ((p, q), (pp, qq)) = m;
    let r = |n: &BigInt| QuadSurd::integer(n.clone());
    let num = y.checked_mul(&r(p)).and_then(|t| t.checked_add(&r(pp))).expect("same field");
    let den = y.checked_mul(&r(q)).and_then(|t| t.checked_add(&r(qq))).expect("same field");
    num.checked_div(&den).expect("nonzero denominator")
}

impl ContinuedFraction {
    fn with(source: Source, value: ValidatedReal, horizon: Option<usize>, quotients: Vec<BigInt>) -> Self {
        let next_state = value.as_exact().cloned().filter(|_| matches!(source, Source::Quadratic { .. }));
        Self {
            source,
            value,
            horizon,
            cache: Mutex::new(Cache { quotients, next_state, ..Cache::default() }),
        }
    }

    /// `(p + √d) / q`.
    pub fn from_quadratic(d: BigInt, p: BigInt, q: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::Domain("denominator q must be nonzero".into()));
        }
        if d < big(2) || is_perfect_square(&d) {
            return Err(Error::RationalInput(format!("d = {d} is a perfect square or below 2")));
        }
        let qr = BigRational::from_integer(q.clone());
        let surd = QuadSurd::new(BigRational::from_integer(p.clone()) / &qr, BigRational::one() / qr, d.clone())?;
        Ok(Self::with(Source::Quadratic { d, p, q }, ValidatedReal::exact(surd), None, Vec::new()))
    }

    pub fn from_terms(prefix: Vec<BigInt>, period: Option<Vec<BigInt>>) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::Parse("term list needs at least a_0".into()));
        }
        let tail_ok = prefix[1..].iter().chain(period.iter().flatten()).all(|a| a.is_positive());
        if !tail_ok {
            return Err(Error::Domain("partial quotients after a_0 must be positive".into()));
        }
        match period {
            Some(per) => {
                if per.is_empty() {
                    return Err(Error::Parse("period must be nonempty".into()));
                }
                // y = [per; y] solves q·y² + (q' − p)·y − p' = 0
                let ((p, q), (pp, qq)) = finite_matrix(&per);
                let disc = (&p - &qq) * (&p - &qq) + big(4) * &q * &pp;
                let two_q = BigRational::from_integer(big(2) * &q);
                let y = QuadSurd::new(BigRational::from_integer(&p - &qq) / &two_q, BigRational::one() / &two_q, disc)?;
                let alpha = mobius_apply(&finite_matrix(&prefix), &y);
                let mut quotients = prefix.clone();
                quotients.extend(per.iter().cloned());
                let cf = Self::with(
                    Source::Terms { prefix: prefix.clone(), period: Some(per.clone()) },
                    ValidatedReal::exact(alpha),
                    None,
                    quotients,
                );
                cf.cache.lock().expect("cache lock").period = Some((prefix.len(), per.len()));
                Ok(cf)
            }
            None => {
                if prefix.len() < 2 {
                    return Err(Error::RationalInput("an aperiodic term list needs at least a_0 and a_1".into()));
                }
                // α = [prefix; x] with x > 1 lies between p_H/q_H and (p_H + p_{H−1})/(q_H + q_{H−1})
                let ((p, q), (pp, qq)) = finite_matrix(&prefix);
                let a = BigRational::new(p.clone(), q.clone());
                let b = BigRational::new(&p + &pp, &q + &qq);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let horizon = prefix.len() - 1;
                Ok(Self::with(
                    Source::Terms { prefix: prefix.clone(), period: None },
                    ValidatedReal::interval(lo, hi)?,
                    Some(horizon),
                    prefix,
                ))
            }
        }
    }

    /// `digits` trusted to `precision` decimal places: α ∈ [v − 10^-precision, v + 10^-precision].
    pub fn from_decimal(digits: &str, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::Parse("precision must be positive".into()));
        }
        let v = parse_decimal(digits)?;
        let eps = BigRational::new(big(1), num_traits::pow(big(10), precision as usize));
        let (lo, hi) = (&v - &eps, &v + &eps);
        let quotients = certified_quotients(&lo, &hi);
        if quotients.len() < 2 {
            return Err(Error::RationalInput(format!(
                "{digits}@{precision} cannot be told apart from a rational; no quotient beyond a_0 is certified"
            )));
        }
        let horizon = quotients.len() - 1;
        Ok(Self::with(
            Source::Decimal { digits: digits.to_string(), precision },
            ValidatedReal::interval(lo, hi)?,
            Some(horizon),
            quotients,
        ))
    }

    /// `quad:d,p,q` | `cf:a0,a1,...[;period]` | `dec:<digits>@<precision>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let ints = |s: &str| -> Result<Vec<BigInt>> {
            s.split(',')
                .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {t:?} in {spec:?}"))))
                .collect()
        };
        if let Some(rest) = spec.strip_prefix("quad:") {
            let v = ints(rest)?;
            let [d, p, q]: [BigInt; 3] =
                v.try_into().map_err(|_| Error::Parse(format!("quad: expects d,p,q in {spec:?}")))?;
            Self::from_quadratic(d, p, q)
        } else if let Some(rest) = spec.strip_prefix("cf:") {
            let (pre, per) = match rest.split_once(';') {
                Some((a, b)) => (a, Some(b)),
                None => (rest, None),
            };
            let prefix = ints(pre)?;
            let period = per.map(ints).transpose()?;
            Self::from_terms(prefix, period)
        } else if let Some(rest) = spec.strip_prefix("dec:") {
            let (digits, prec) =
                rest.split_once('@').ok_or_else(|| Error::Parse(format!("dec: expects <digits>@<precision> in {spec:?}")))?;
            let prec: u32 = prec.trim().parse().map_err(|_| Error::Parse(format!("bad precision in {spec:?}")))?;
            Self::from_decimal(digits.trim(), prec)
        } else {
            Err(Error::Parse(format!("unknown α spec {spec:?}")))
        }
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn horizon(&self) -> Option<usize> {
        self.horizon
    }

    pub fn is_exact(&self) -> bool {
        self.value.is_exact()
    }

    /// α itself: exact, or the certified input interval.
    pub fn value(&self) -> &ValidatedReal {
        &self.value
    }

    /// `(start, length)` of the detected period, if known.
    pub fn period(&self) -> Option<(usize, usize)> {
        let _ = self.quotient(0);
        let mut cache = self.cache.lock().expect("cache lock");
        if cache.period.is_none() && cache.next_state.is_some() {
            // quadratic irrationals are eventually periodic; walk until the state repeats
            let mut k = cache.quotients.len();
            while cache.period.is_none() {
                Self::extend_exact(&mut cache, k);
                k += 1;
            }
        }
        cache.period
    }

    fn extend_exact(cache: &mut Cache, upto: usize) {
        while cache.quotients.len() <= upto {
            if let Some((start, len)) = cache.period {
                let k = cache.quotients.len();
                let a = cache.quotients[start + (k - start) % len].clone();
                cache.quotients.push(a);
                continue;
            }
            let x = cache.next_state.take().expect("exact state");
            let k = cache.quotients.len();
            if let Some(&first) = cache.seen.get(&x) {
                cache.period = Some((first, k - first));
                cache.next_state = Some(x);
                continue;
            }
            cache.seen.insert(x.clone(), k);
            let a = x.floor();
            let frac = x.checked_sub(&QuadSurd::integer(a.clone())).expect("same field");
            let next = QuadSurd::integer(1).checked_div(&frac).expect("irrational remainder is nonzero");
            cache.quotients.push(a);
            cache.next_state = Some(next);
        }
    }

    pub fn quotient(&self, k: usize) -> Result<BigInt> {
        if let Some(h) = self.horizon {
            if k > h {
                return Err(precision(format!("partial quotient a_{k} is beyond the certified horizon {h}")));
            }
        }
        let mut cache = self.cache.lock().expect("cache lock");
        if k >= cache.quotients.len() {
            match (&self.source, cache.period) {
                (Source::Quadratic { .. }, _) => Self::extend_exact(&mut cache, k),
                (Source::Terms { .. }, Some(_)) => Self::extend_exact(&mut cache, k),
                _ => unreachable!("bounded sources hold every certified quotient"),
            }
        }
        Ok(cache.quotients[k].clone())
    }

    pub fn quotients(&self, upto: usize) -> Result<Vec<BigInt>> {
        (0..=upto).map(|k| self.quotient(k)).collect()
    }

    /// `(p_k, q_k)` for `k ≥ −1`, seeded by `p_{−1} = 1, q_{−1} = 0`.
    pub fn pq(&self, k: isize) -> Result<(BigInt, BigInt)> {
        if k < -1 {
            return Err(Error::Domain(format!("convergent index {k} < -1")));
        }
        if k == -1 {
            return Ok((big(1), big(0)));
        }
        let k = k as usize;
        {
            let cache = self.cache.lock().expect("cache lock");
            if k < cache.pq.len() {
                return Ok(cache.pq[k].clone());
            }
        }
        // quotients first: `quotient` takes the same lock
        let qs = self.quotients(k)?;
        let mut cache = self.cache.lock().expect("cache lock");
        while cache.pq.len() <= k {
            let j = cache.pq.len();
            let next = if j == 0 {
                (qs[0].clone(), big(1))
            } else {
                let (p1, q1) = cache.pq[j - 1].clone();
                let (p0, q0) = if j == 1 { (big(1), big(0)) } else { cache.pq[j - 2].clone() };
                (&qs[j] * &p1 + p0, &qs[j] * &q1 + q0)
            };
            cache.pq.push(next);
        }
        Ok(cache.pq[k].clone())
    }

    /// `D_k = q_k·α − p_k`, with `D_{−1} = −1`.
    pub fn d_value(&self, k: isize) -> Result<ValidatedReal> {
        let (p, q) = self.pq(k)?;
        Ok(self.value.mul_int(&q).sub(&ValidatedReal::integer(p)))
    }

    pub fn convergent(&self, k: usize) -> Result<Convergent> {
        let (p, q) = self.pq(k as isize)?;
        let d = self.d_value(k as isize)?;
        Ok(Convergent { k, p, q, d })
    }

    pub fn convergents(&self, upto: usize) -> Result<Vec<Convergent>> {
        (0..=upto).map(|k| self.convergent(k)).collect()
    }

    /// `{α} = α − a_0 = D_0`.
    pub fn frac_alpha(&self) -> Result<ValidatedReal> {
        self.d_value(0)
    }

    /// An enclosure of α no wider than `width`.
    pub fn alpha_value(&self, width: &BigRational) -> Result<ValidatedReal> {
        let (lo, hi) = self.value.enclose(width)?;
        ValidatedReal::interval(lo, hi)
    }
}

/// Quotients shared by every real in `[lo, hi]`.
fn certified_quotients(lo: &BigRational, hi: &BigRational) -> Vec<BigInt> {
    const MAX_TERMS: usize = 100_000;
    let mut out = Vec::new();
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    while out.len() < MAX_TERMS {
        let a = lo.floor().to_integer();
        if hi.floor().to_integer() != a {
            break;
        }
        out.push(a.clone());
        let ar = BigRational::from_integer(a);
        let (fl, fh) = (&lo - &ar, &hi - &ar);
        if fl.is_zero() {
            // the next complete quotient is unbounded above
            break;
        }
        (lo, hi) = (fh.recip(), fl.recip());
    }
    out
}
