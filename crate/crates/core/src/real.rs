//! Exact quadratic surds and rational-endpoint enclosures.
//!
//! Every inequality between irrational quantities in this crate is decided
//! here. Elements of a quadratic field `x + y·√d` are handled exactly; any
//! other real is carried as a closed rational interval `[lo, hi]`, and a sign
//! or floor query on an interval that straddles the decision boundary fails
//! with [`Error::PrecisionExhausted`] instead of guessing.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, precision, Error, Result};

/// Bits of absolute precision used when an exact value has to be turned into
/// an interval (mixed arithmetic, rendering).
pub const DEFAULT_BITS: u32 = 256;

/// `rat + irr·√d` with rational coefficients.
///
/// When `irr` is zero the value is rational and `d` is normalised to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    rat: BigRational,
    irr: BigRational,
    d: BigInt,
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// `d = s²·r`, pulling out the squares of primes below 1000.
fn split_square(mut d: BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    for p in (2u32..1000).filter(|p| (2..*p).take_while(|q| q * q <= *p).all(|q| p % q != 0)) {
        let pp = BigInt::from(p * p);
        while (&d % &pp).is_zero() {
            d /= &pp;
            s *= p;
        }
    }
    (s, d)
}

impl QuadSurd {
    pub fn new(rat: BigRational, irr: BigRational, d: BigInt) -> Result<Self> {
        if irr.is_zero() {
            return Ok(Self::rational(rat));
        }
        if d < BigInt::from(2) || is_perfect_square(&d) {
            return Err(Error::RationalInput(format!("radicand {d} is not a nonsquare integer ≥ 2")));
        }
        let (s, d) = split_square(d);
        Ok(Self { rat, irr: irr * BigRational::from_integer(s), d })
    }

    pub fn rational(rat: BigRational) -> Self {
        Self { rat, irr: BigRational::zero(), d: BigInt::zero() }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn irr_part(&self) -> &BigRational {
        &self.irr
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    fn field_with(&self, other: &Self) -> Option<BigInt> {
        if self.irr.is_zero() {
            Some(other.d.clone())
        } else if other.irr.is_zero() || self.d == other.d {
            Some(self.d.clone())
        } else {
            None
        }
    }

    fn build(rat: BigRational, irr: BigRational, d: BigInt) -> Self {
        if irr.is_zero() {
            Self::rational(rat)
        } else {
            Self { rat, irr, d }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let d = self.field_with(other)?;
        Some(Self::build(&self.rat + &other.rat, &self.irr + &other.irr, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let d = self.field_with(other)?;
        Some(Self::build(&self.rat - &other.rat, &self.irr - &other.irr, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let d = self.field_with(other)?;
        let dr = BigRational::from_integer(d.clone());
        let rat = &self.rat * &other.rat + &self.irr * &other.irr * dr;
        let irr = &self.rat * &other.irr + &self.irr * &other.rat;
        Some(Self::build(rat, irr, d))
    }

    /// `None` on division by zero or mismatched radicands.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let d = self.field_with(other)?;
        let dr = BigRational::from_integer(d.clone());
        // multiply through by the conjugate of the denominator
        let norm = &other.rat * &other.rat - &other.irr * &other.irr * &dr;
        let conj = Self::build(other.rat.clone(), -other.irr.clone(), d);
        let num = self.checked_mul(&conj)?;
        Some(Self::build(num.rat / &norm, num.irr / &norm, num.d))
    }

    pub fn neg(&self) -> Self {
        Self::build(-self.rat.clone(), -self.irr.clone(), self.d.clone())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::build(&self.rat * k, &self.irr * k, self.d.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn sign(&self) -> Ordering {
        let sr = self.rat.cmp(&BigRational::zero());
        let si = self.irr.cmp(&BigRational::zero());
        if si == Ordering::Equal {
            return sr;
        }
        if sr == Ordering::Equal || sr == si {
            return si;
        }
        let r2 = &self.rat * &self.rat;
        let i2 = &self.irr * &self.irr * BigRational::from_integer(self.d.clone());
        // never equal: √d is irrational
        if r2 > i2 {
            sr
        } else {
            si
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Writes the value as `(n + m·√d) / c` with integers and `c > 0`.
    fn integral_form(&self) -> (BigInt, BigInt, BigInt) {
        let c = self.rat.denom().lcm(self.irr.denom());
        let n = self.rat.numer() * (&c / self.rat.denom());
        let m = self.irr.numer() * (&c / self.irr.denom());
        (n, m, c)
    }

    pub fn floor(&self) -> BigInt {
        if self.irr.is_zero() {
            return self.rat.floor().to_integer();
        }
        let (n, m, c) = self.integral_form();
        let t = (&m * &m * &self.d).sqrt();
        // m·√d lies strictly between consecutive integers, so the quotient
        // floors the same way at either end.
        let top = if m.is_positive() { n + t } else { n - t - 1 };
        top.div_floor(&c)
    }

    pub fn ceil(&self) -> BigInt {
        if self.irr.is_zero() {
            return self.rat.ceil().to_integer();
        }
        self.floor() + 1
    }

    /// Rational enclosure of width at most `2^-bits`.
    pub fn enclose_bits(&self, bits: u32) -> (BigRational, BigRational) {
        if self.irr.is_zero() {
            return (self.rat.clone(), self.rat.clone());
        }
        let (n, m, c) = self.integral_form();
        let scale = BigInt::one() << bits;
        let s = (&m * &m * &self.d * &scale * &scale).sqrt();
        let den = &c * &scale;
        let base = &n * &scale;
        let (lo, hi) = if m.is_positive() {
            (&base + &s, &base + &s + 1)
        } else {
            (&base - &s - 1, &base - &s)
        };
        (BigRational::new(lo, den.clone()), BigRational::new(hi, den))
    }

    pub fn to_f64(&self) -> f64 {
        if self.irr.is_zero() {
            return self.rat.to_f64().unwrap_or(f64::NAN);
        }
        let mut bits = 128;
        loop {
            let (lo, hi) = self.enclose_bits(bits);
            let width = (&hi - &lo).to_f64().unwrap_or(f64::INFINITY);
            let mid = ((&lo + &hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN);
            if width <= mid.abs() * 1e-18 || bits >= 8192 {
                return mid;
            }
            bits *= 2;
        }
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            write!(f, "{}", self.rat)
        } else {
            write!(f, "{} + {}·√{}", self.rat, self.irr, self.d)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Exact(QuadSurd),
    Interval { lo: BigRational, hi: BigRational },
}

/// A real number known either exactly (as a quadratic surd) or through a
/// closed rational interval that contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedReal {
    repr: Repr,
}

impl ValidatedReal {
    pub fn exact(value: QuadSurd) -> Self {
        Self { repr: Repr::Exact(value) }
    }

    pub fn rational(r: BigRational) -> Self {
        Self::exact(QuadSurd::rational(r))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::exact(QuadSurd::integer(n))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn interval(lo: BigRational, hi: BigRational) -> Result<Self> {
        match lo.cmp(&hi) {
            Ordering::Greater => Err(domain(format!("empty interval [{lo}, {hi}]"))),
            Ordering::Equal => Ok(Self::rational(lo)),
            Ordering::Less => Ok(Self { repr: Repr::Interval { lo, hi } }),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&QuadSurd> {
        match &self.repr {
            Repr::Exact(q) => Some(q),
            Repr::Interval { .. } => None,
        }
    }

    /// Enclosure at [`DEFAULT_BITS`] for exact values, the stored interval otherwise.
    pub fn bounds(&self) -> (BigRational, BigRational) {
        match &self.repr {
            Repr::Exact(q) => q.enclose_bits(DEFAULT_BITS),
            Repr::Interval { lo, hi } => (lo.clone(), hi.clone()),
        }
    }

    pub fn lo(&self) -> BigRational {
        self.bounds().0
    }

    pub fn hi(&self) -> BigRational {
        self.bounds().1
    }

    pub fn width(&self) -> BigRational {
        let (lo, hi) = self.bounds();
        hi - lo
    }

    /// An enclosure no wider than `width`. Exact values refine without limit;
    /// a stored interval that is already too wide cannot be refined.
    pub fn enclose(&self, width: &BigRational) -> Result<(BigRational, BigRational)> {
        if !width.is_positive() {
            return Err(domain("requested width must be positive"));
        }
        match &self.repr {
            Repr::Exact(q) => {
                let mut bits = 8u32;
                loop {
                    let (lo, hi) = q.enclose_bits(bits);
                    if &(&hi - &lo) <= width {
                        return Ok((lo, hi));
                    }
                    bits += 32;
                }
            }
            Repr::Interval { lo, hi } => {
                if &(hi - lo) <= width {
                    Ok((lo.clone(), hi.clone()))
                } else {
                    Err(precision(format!("interval width {} exceeds requested {width}", hi - lo)))
                }
            }
        }
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        match &self.repr {
            Repr::Exact(q) => q == &QuadSurd::rational(r.clone()),
            Repr::Interval { lo, hi } => lo <= r && r <= hi,
        }
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        let (a, b) = self.bounds();
        let (c, d) = other.bounds();
        a <= d && c <= b
    }

    fn combine(
        &self,
        other: &Self,
        exact: impl Fn(&QuadSurd, &QuadSurd) -> Option<QuadSurd>,
        interval: impl Fn((BigRational, BigRational), (BigRational, BigRational)) -> (BigRational, BigRational),
    ) -> Self {
        if let (Repr::Exact(a), Repr::Exact(b)) = (&self.repr, &other.repr) {
            if let Some(q) = exact(a, b) {
                return Self::exact(q);
            }
        }
        let (lo, hi) = interval(self.bounds(), other.bounds());
        Self::interval(lo, hi).expect("interval arithmetic keeps lo ≤ hi")
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.checked_add(b), |(a, b), (c, d)| (a + c, b + d))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a.checked_sub(b), |(a, b), (c, d)| (a - d, b - c))
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Exact(q) => Self::exact(q.neg()),
            Repr::Interval { lo, hi } => Self { repr: Repr::Interval { lo: -hi.clone(), hi: -lo.clone() } },
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        match &self.repr {
            Repr::Exact(q) => Self::exact(q.scale(k)),
            Repr::Interval { lo, hi } => {
                let (a, b) = (lo * k, hi * k);
                if a <= b {
                    Self::interval(a, b).expect("ordered")
                } else {
                    Self::interval(b, a).expect("ordered")
                }
            }
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(k.clone()))
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        self.add(&Self::rational(r.clone()))
    }

    pub fn abs(&self) -> Self {
        match &self.repr {
            Repr::Exact(q) => Self::exact(q.abs()),
            Repr::Interval { lo, hi } => {
                if !lo.is_negative() {
                    self.clone()
                } else if !hi.is_positive() {
                    self.neg()
                } else {
                    let m = if -lo.clone() > *hi { -lo.clone() } else { hi.clone() };
                    Self::interval(BigRational::zero(), m).expect("ordered")
                }
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if let (Repr::Exact(a), Repr::Exact(b)) = (&self.repr, &other.repr) {
            if b.is_zero() {
                return Err(domain("division by zero"));
            }
            if let Some(q) = a.checked_div(b) {
                return Ok(Self::exact(q));
            }
        }
        let (c, d) = other.bounds();
        if !c.is_positive() && !d.is_negative() {
            return Err(precision("divisor interval contains zero"));
        }
        let (a, b) = self.bounds();
        let cands = [&a / &c, &a / &d, &b / &c, &b / &d];
        let lo = cands.iter().min().expect("nonempty").clone();
        let hi = cands.iter().max().expect("nonempty").clone();
        Self::interval(lo, hi)
    }

    /// Certified sign; fails when the interval straddles zero.
    pub fn sign(&self) -> Result<Ordering> {
        match &self.repr {
            Repr::Exact(q) => Ok(q.sign()),
            Repr::Interval { lo, hi } => {
                if lo.is_positive() {
                    Ok(Ordering::Greater)
                } else if hi.is_negative() {
                    Ok(Ordering::Less)
                } else {
                    Err(precision(format!("sign undecidable on [{lo}, {hi}]")))
                }
            }
        }
    }

    pub fn cmp_to(&self, other: &Self) -> Result<Ordering> {
        self.sub(other).sign()
    }

    pub fn le(&self, other: &Self) -> Result<bool> {
        Ok(self.cmp_to(other)? != Ordering::Greater)
    }

    pub fn lt(&self, other: &Self) -> Result<bool> {
        Ok(self.cmp_to(other)? == Ordering::Less)
    }

    pub fn floor(&self) -> Result<BigInt> {
        match &self.repr {
            Repr::Exact(q) => Ok(q.floor()),
            Repr::Interval { lo, hi } => {
                let (a, b) = (lo.floor().to_integer(), hi.floor().to_integer());
                if a == b {
                    Ok(a)
                } else {
                    Err(precision(format!("floor undecidable on [{lo}, {hi}]")))
                }
            }
        }
    }

    pub fn ceil(&self) -> Result<BigInt> {
        Ok(-self.neg().floor()?)
    }

    pub fn to_f64(&self) -> f64 {
        match &self.repr {
            Repr::Exact(q) => q.to_f64(),
            Repr::Interval { lo, hi } => ((lo + hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl From<QuadSurd> for ValidatedReal {
    fn from(q: QuadSurd) -> Self {
        Self::exact(q)
    }
}

/// Direction for decimal rendering of a rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// Scientific notation with `sig` significant digits, rounded toward −∞
/// (`Down`) or +∞ (`Up`), so the printed value stays a valid bound.
pub fn format_sci(r: &BigRational, sig: usize, dir: Round) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let mag = r.abs();
    // rounding the magnitude: an upper bound of a negative number rounds the magnitude down
    let mag_up = (dir == Round::Up) != neg;
    let mut e = mag.numer().to_string().len() as i64 - mag.denom().to_string().len() as i64;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(pow10(k as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-k) as u32))
        }
    };
    while mag < pow(e) {
        e -= 1;
    }
    while mag >= pow(e + 1) {
        e += 1;
    }
    let scaled = &mag * pow(sig as i64 - 1 - e);
    let mut mant = if mag_up { scaled.ceil().to_integer() } else { scaled.floor().to_integer() };
    if mant >= pow10(sig as u32) {
        mant /= 10;
        e += 1;
    }
    let digits = mant.to_string();
    let (head, tail) = digits.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Parses a plain decimal literal such as `-3.14159` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("empty decimal literal {s:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad decimal literal {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| Error::Parse(s.to_string()))? };
    let numer = if neg { -numer } else { numer };
    Ok(BigRational::new(numer, pow10(frac_part.len() as u32)))
}
