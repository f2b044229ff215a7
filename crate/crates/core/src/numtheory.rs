//! Arithmetic functions: gcd, factorisation, μ, ω, φ, π(x) and squarefree
//! divisors, plus the prime sums used for the Mertens spot checks.
//!
//! Factorisation is exact. Small primes are removed by trial division, the
//! cofactor is tested with a Miller–Rabin base set that is deterministic on
//! all of `u64`, and composite cofactors are split with Brent's variant of
//! Pollard rho (fixed polynomial constants, so the result never depends on a
//! random draw). Trial division up to the configured limit is the fallback
//! when rho fails to split; beyond that the call reports
//! [`Error::FactorBudgetExceeded`].

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Environment variable overriding the trial-division limit.
pub const FACTOR_BUDGET_ENV: &str = "OSTRO_FACTOR_BUDGET";
pub const DEFAULT_TRIAL_LIMIT: u64 = 10_000_000;
pub const DEFAULT_SIEVE_BUDGET: u64 = 100_000_000;

/// Primes below this bound are always tried before any primality test.
const QUICK_TRIAL: u64 = 4096;

pub fn gcd(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    if a.is_zero() && b.is_zero() {
        return Err(domain("gcd(0, 0) is undefined"));
    }
    Ok(a.gcd(b))
}

pub fn gcd_i128(a: i128, b: i128) -> u128 {
    let (mut x, mut y) = (a.unsigned_abs(), b.unsigned_abs());
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_limit: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self { trial_limit: DEFAULT_TRIAL_LIMIT }
    }
}

impl FactorBudget {
    /// Reads [`FACTOR_BUDGET_ENV`]; unset or unparsable values give the default.
    pub fn from_env() -> Self {
        std::env::var(FACTOR_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().replace('_', "").parse::<u64>().ok())
            .map(|trial_limit| Self { trial_limit })
            .unwrap_or_default()
    }

    /// Process-wide budget, read from the environment once.
    pub fn current() -> Self {
        static CURRENT: OnceLock<FactorBudget> = OnceLock::new();
        *CURRENT.get_or_init(Self::from_env)
    }
}

/// `n = ∏ pᵢ^eᵢ` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for every `u64` (the first twelve prime bases suffice below 3.3·10²⁴).
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle-finding rho with `f(x) = x² + c`; `None` if every constant fails.
fn pollard_brent(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    const BATCH: u64 = 128;
    const MAX_ROUNDS: u64 = 1 << 22;
    for c in 1..=48u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (0u64, 2u64, 2u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        while g == 1 && r <= MAX_ROUNDS {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // batch overshot; replay one step at a time
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if limit < 2 {
        return out;
    }
    out.push(2);
    let sieve = OddSieve::new(limit);
    out.extend(sieve.iter_primes());
    out
}

/// Bit-packed sieve of Eratosthenes over odd numbers `3..=limit`.
struct OddSieve {
    limit: u64,
    composite: Vec<u64>,
}

impl OddSieve {
    fn new(limit: u64) -> Self {
        let slots = (limit.saturating_sub(1) / 2) as usize; // index i ↔ 2i + 3
        let mut composite = vec![0u64; slots / 64 + 1];
        let mut i = 0usize;
        loop {
            let p = 2 * i as u64 + 3;
            if p * p > limit {
                break;
            }
            if composite[i / 64] >> (i % 64) & 1 == 0 {
                let mut j = ((p * p - 3) / 2) as usize;
                while j < slots {
                    composite[j / 64] |= 1 << (j % 64);
                    j += p as usize;
                }
            }
            i += 1;
        }
        Self { limit, composite }
    }

    fn iter_primes(&self) -> impl Iterator<Item = u64> + '_ {
        let slots = (self.limit.saturating_sub(1) / 2) as usize;
        (0..slots).filter(move |&i| self.composite[i / 64] >> (i % 64) & 1 == 0).map(|i| 2 * i as u64 + 3)
    }

    fn count(&self) -> u64 {
        let slots = (self.limit.saturating_sub(1) / 2) as usize;
        let full = slots / 64;
        let mut c: u64 = self.composite[..full].iter().map(|w| u64::from(w.count_zeros())).sum();
        for i in full * 64..slots {
            if self.composite[i / 64] >> (i % 64) & 1 == 0 {
                c += 1;
            }
        }
        c
    }
}

fn quick_primes() -> &'static [u64] {
    static QUICK: OnceLock<Vec<u64>> = OnceLock::new();
    QUICK.get_or_init(|| primes_up_to(QUICK_TRIAL))
}

/// Full trial table for a limit; built once per limit and then read-only.
fn trial_table(limit: u64) -> Arc<Vec<u64>> {
    static TABLE: Mutex<Option<(u64, Arc<Vec<u64>>)>> = Mutex::new(None);
    let mut guard = TABLE.lock().expect("prime table lock");
    if let Some((l, t)) = guard.as_ref() {
        if *l == limit {
            return Arc::clone(t);
        }
    }
    let t = Arc::new(primes_up_to(limit));
    *guard = Some((limit, Arc::clone(&t)));
    t
}

pub fn factorize(n: u64) -> Result<Factorization> {
    factorize_with(n, &FactorBudget::current())
}

pub fn factorize_with(n: u64, budget: &FactorBudget) -> Result<Factorization> {
    if n == 0 {
        return Err(domain("cannot factor 0"));
    }
    let mut primes: Vec<u64> = Vec::new();
    let mut rest = n;
    for &p in quick_primes() {
        if p > budget.trial_limit || p * p > rest {
            break;
        }
        while rest.is_multiple_of(p) {
            primes.push(p);
            rest /= p;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            primes.push(m);
            continue;
        }
        if let Some(f) = pollard_brent(m) {
            stack.push(f);
            stack.push(m / f);
            continue;
        }
        // rho failed: continue trial division up to the budget
        let table = trial_table(budget.trial_limit);
        let mut r = m;
        for &p in table.iter() {
            if p * p > r {
                break;
            }
            while r % p == 0 {
                primes.push(p);
                r /= p;
            }
        }
        if r > 1 {
            if !is_prime_u64(r) {
                return Err(Error::FactorBudgetExceeded(format!("composite cofactor {r} of {n}")));
            }
            primes.push(r);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

/// Factors `|n|`; values beyond `u64` exceed the factor budget.
pub fn factorize_big(n: &BigInt) -> Result<Factorization> {
    let m = n.abs().to_u64().ok_or_else(|| Error::FactorBudgetExceeded(format!("{n} exceeds 64 bits")))?;
    factorize(m)
}

pub fn omega(n: u64) -> Result<u32> {
    Ok(factorize(n)?.omega())
}

pub fn mobius(n: u64) -> Result<i8> {
    let f = factorize(n)?;
    if !f.is_squarefree() {
        return Ok(0);
    }
    Ok(if f.omega() % 2 == 0 { 1 } else { -1 })
}

pub fn euler_phi(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    Ok(f.factors.iter().fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1)))
}

/// All `d | n` with `μ(d) ≠ 0`, ascending, paired with `μ(d)`.
pub fn squarefree_divisors_signed(f: &Factorization) -> Vec<(u64, i8)> {
    let mut out = vec![(1u64, 1i8)];
    for p in f.primes() {
        let extra: Vec<_> = out.iter().map(|&(d, mu)| (d * p, -mu)).collect();
        out.extend(extra);
    }
    out.sort_unstable();
    out
}

pub fn squarefree_divisors(n: u64) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    Ok(squarefree_divisors_signed(&f).into_iter().map(|(d, _)| d).collect())
}

pub fn prime_count(x: u64) -> Result<u64> {
    prime_count_with(x, DEFAULT_SIEVE_BUDGET)
}

pub fn prime_count_with(x: u64, budget: u64) -> Result<u64> {
    if x == 0 {
        return Err(domain("π(x) requires x ≥ 1"));
    }
    if x > budget {
        return Err(Error::SieveBudgetExceeded { requested: x, budget });
    }
    if x < 2 {
        return Ok(0);
    }
    Ok(1 + OddSieve::new(x).count())
}

/// Fractional bits carried by the fixed-point prime sums.
const FIXED_BITS: u32 = 160;

fn fixed_to_f64(v: &BigInt) -> f64 {
    // v / 2^FIXED_BITS, keeping the top 64 bits
    let shift = v.bits().saturating_sub(64);
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    top * 2f64.powi(shift as i32 - FIXED_BITS as i32)
}

/// `Σ_{p ≤ x} 1/p` accumulated in 160-bit fixed point (truncation error below
/// `π(x)·2^-160`).
pub fn prime_reciprocal_sum(x: u64) -> Result<f64> {
    if x > DEFAULT_SIEVE_BUDGET {
        return Err(Error::SieveBudgetExceeded { requested: x, budget: DEFAULT_SIEVE_BUDGET });
    }
    let one = BigInt::from(1) << FIXED_BITS;
    let mut acc = BigInt::zero();
    for p in primes_up_to(x) {
        acc += &one / p;
    }
    Ok(fixed_to_f64(&acc))
}

/// `∏_{p ≤ x} (1 − 1/p)` in the same fixed point.
pub fn mertens_product(x: u64) -> Result<f64> {
    if x > DEFAULT_SIEVE_BUDGET {
        return Err(Error::SieveBudgetExceeded { requested: x, budget: DEFAULT_SIEVE_BUDGET });
    }
    let mut acc = BigInt::from(1) << FIXED_BITS;
    for p in primes_up_to(x) {
        acc = acc * (p - 1) / p;
    }
    Ok(fixed_to_f64(&acc))
}
