//! Coprime pairs along simultaneous progressions `(m + b·r, n + b·s)`, and
//! integers with few distinct prime factors in short intervals.
//!
//! The Möbius count is exact. Any common divisor of `m + br` and `n + bs`
//! divides `Δ = nr − ms`, and for each prime `p | Δ` the admissible `b` form a
//! single residue class mod `p`; the classes for a squarefree `d | Δ` combine
//! by CRT into one class mod `d`, so
//! `N(A) = Σ_{d | rad Δ} μ(d)·#{1 ≤ b ≤ A : b ≡ t_d (mod d)}`.

use num_integer::Integer;

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::numtheory::{factorize, gcd_i128, squarefree_divisors_signed};

/// `(m + b·r, n + b·s)` for `1 ≤ b ≤ a_max`, with `(r, s) = 1` and `nr ≠ ms`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProgressionQuery {
    pub m: i128,
    pub n: i128,
    pub r: i128,
    pub s: i128,
    pub a_max: u64,
}

impl ProgressionQuery {
    pub fn new(m: i128, n: i128, r: i128, s: i128, a_max: u64) -> Result<Self> {
        if r <= 0 || s <= 0 {
            return Err(domain(format!("progression steps must be positive, got r = {r}, s = {s}")));
        }
        if gcd_i128(r, s) != 1 {
            return Err(domain(format!("steps {r} and {s} are not coprime")));
        }
        if a_max == 0 {
            return Err(domain("search length A must be at least 1"));
        }
        let q = Self { m, n, r, s, a_max };
        if q.delta() == 0 {
            return Err(domain("nr − ms must be nonzero"));
        }
        Ok(q)
    }

    /// `nr − ms`.
    pub fn delta(&self) -> i128 {
        self.n * self.r - self.m * self.s
    }

    pub fn with_a_max(&self, a_max: u64) -> Self {
        Self { a_max, ..*self }
    }

    pub fn is_coprime_at(&self, b: u64) -> bool {
        let b = b as i128;
        gcd_i128(self.m + b * self.r, self.n + b * self.s) == 1
    }

    fn abs_delta_u64(&self) -> Result<u64> {
        u64::try_from(self.delta().unsigned_abs())
            .map_err(|_| Error::FactorBudgetExceeded(format!("|nr − ms| = {} exceeds 64 bits", self.delta().unsigned_abs())))
    }
}

pub fn count_coprime_bruteforce(q: &ProgressionQuery) -> u64 {
    (1..=q.a_max).filter(|&b| q.is_coprime_at(b)).count() as u64
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let g = a.rem_euclid(m).extended_gcd(&m);
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m)
}

/// The residue class of `b` mod a prime `p | Δ` for which `p` divides both terms.
pub fn prime_class(q: &ProgressionQuery, p: u64) -> u64 {
    let p = p as i128;
    let t = if q.r % p != 0 {
        (-q.m).rem_euclid(p) * inv_mod(q.r, p)
    } else {
        (-q.n).rem_euclid(p) * inv_mod(q.s, p)
    };
    (t % p) as u64
}

/// `#{1 ≤ b ≤ a_max : b ≡ t (mod d)}` for `0 ≤ t < d`.
fn class_count(a_max: u64, t: u64, d: u64) -> u64 {
    if t == 0 {
        a_max / d
    } else if a_max >= t {
        (a_max - t) / d + 1
    } else {
        0
    }
}

/// `(d, μ(d), t_d)` for each squarefree `d | Δ`.
pub fn divisor_classes(q: &ProgressionQuery) -> Result<Vec<(u64, i8, u64)>> {
    let f = factorize(q.abs_delta_u64()?)?;
    let mut out: Vec<(u64, i8, u64)> = vec![(1, 1, 0)];
    for p in f.primes() {
        let tp = prime_class(q, p) as i128;
        let extra: Vec<_> = out
            .iter()
            .map(|&(d, mu, t)| {
                let (di, pi) = (d as i128, p as i128);
                // x ≡ t (mod d), x ≡ tp (mod p)
                let k = ((tp - t as i128).rem_euclid(pi) * inv_mod(di, pi)) % pi;
                (d * p, -mu, (t as i128 + di * k) as u64)
            })
            .collect();
        out.extend(extra);
    }
    out.sort_unstable();
    Ok(out)
}

pub fn count_coprime_mobius(q: &ProgressionQuery) -> Result<u64> {
    let total: i128 = divisor_classes(q)?
        .into_iter()
        .map(|(d, mu, t)| i128::from(mu) * class_count(q.a_max, t, d) as i128)
        .sum();
    Ok(u64::try_from(total).expect("a count is nonnegative"))
}

/// The Möbius term for `d` counted through the quotient `e = (m + br)/d`:
/// the number of `e` with `m + r ≤ e·d ≤ m + A·r` and `e ≡ m·d⁻¹ (mod r)`.
/// Only meaningful when `(m, r) = (n, s) = 1` and `d | Δ`.
pub fn e_class_count(q: &ProgressionQuery, d: u64) -> u64 {
    let (d, r) = (d as i128, q.r);
    if gcd_i128(d, r) != 1 {
        return 0;
    }
    let lo = Integer::div_ceil(&(q.m + r), &d);
    let hi = Integer::div_floor(&(q.m + q.a_max as i128 * r), &d);
    if hi < lo {
        return 0;
    }
    let target = if r == 1 { 0 } else { (q.m.rem_euclid(r) * inv_mod(d, r)) % r };
    // integers in [lo, hi] congruent to target mod r
    let upto = |x: i128| Integer::div_floor(&(x - target), &r);
    (upto(hi) - upto(lo - 1)) as u64
}

/// Least `1 ≤ b ≤ A` with `(m + br, n + bs) = 1`.
pub fn find_coprime_shift(q: &ProgressionQuery) -> Option<u64> {
    (1..=q.a_max).find(|&b| q.is_coprime_at(b))
}

/// `g_c(x) = 2^{c·√(ln x)}`.
pub fn growth_g(x: f64, c: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(domain(format!("g_c(x) needs x > 1, got {x}")));
    }
    if !(c > 0.0) {
        return Err(domain(format!("g_c(x) needs c > 0, got {c}")));
    }
    Ok((c * x.ln().sqrt()).exp2())
}

/// `h_c(x) = g_c(x) / (ln g_c(x) · ln ln g_c(x))`, defined once `g_c(x) > e`.
pub fn growth_h(x: f64, c: f64) -> Result<f64> {
    let g = growth_g(x, c)?;
    let lg = g.ln();
    if !(lg > 1.0) {
        return Err(domain(format!("h_c(x) needs g_c(x) > e, got g = {g}")));
    }
    Ok(g / (lg * lg.ln()))
}

/// Minimum-ω member of `[x, x + max(1, ⌈h_c(x)⌉)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowOmega {
    pub n: u64,
    pub omega: u32,
    pub window_end: u64,
}

pub fn low_omega_window(x: u64, c: f64) -> Result<u64> {
    if x < 3 {
        return Err(domain("low-ω search needs x ≥ 3"));
    }
    let h = growth_h(x as f64, c)?;
    let len = (h.ceil() as u64).max(1);
    x.checked_add(len).ok_or_else(|| domain("search window overflows u64"))
}

pub fn find_low_omega(x: u64, c: f64) -> Result<LowOmega> {
    find_low_omega_with(x, c, Exec::default())
}

pub fn find_low_omega_with(x: u64, c: f64, exec: Exec) -> Result<LowOmega> {
    let end = low_omega_window(x, c)?;
    let omegas = exec.map_range(x, end, |n| factorize(n).map(|f| (f.omega(), n)));
    let mut best: Option<(u32, u64)> = None;
    for r in omegas {
        let cand = r?;
        if best.is_none_or(|b| cand < b) {
            best = Some(cand);
        }
    }
    let (omega, n) = best.expect("nonempty window");
    Ok(LowOmega { n, omega, window_end: end })
}

/// ω of every integer in `lo..=hi`, for callers that want the whole window.
pub fn omega_window(lo: u64, hi: u64, exec: Exec) -> Result<Vec<u32>> {
    exec.map_range(lo, hi, |n| factorize(n).map(|f| f.omega())).into_iter().collect()
}

/// `Σ_{d | Δ} μ(d)/d = φ(|Δ|)/|Δ|` and `2^{ω(Δ)}`, the two ingredients of the
/// lower bound `N(A) ≥ A·φ(Δ)/Δ − 2^{ω(Δ)}`.
pub fn mobius_lower_bound(q: &ProgressionQuery) -> Result<f64> {
    let f = factorize(q.abs_delta_u64()?)?;
    let ratio: f64 = f.primes().map(|p| 1.0 - 1.0 / p as f64).product();
    let divisors = squarefree_divisors_signed(&f).len() as f64;
    Ok(q.a_max as f64 * ratio - divisors)
}
