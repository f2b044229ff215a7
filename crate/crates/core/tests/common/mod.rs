#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use ostro_core::cli::parse_gamma;
use ostro_core::{ContinuedFraction, GammaSpec, ValidatedReal};

pub const SQRT2: &str = "quad:2,0,1";
pub const GOLDEN: &str = "quad:5,1,2";
pub const SQRT3: &str = "quad:3,0,1";
pub const ALPHAS: [&str; 3] = [SQRT2, GOLDEN, SQRT3];
pub const GAMMAS: [&str; 3] = ["rat:1/3", "lat:1,0", "rat:0"];

/// Largest quality over `i = 5..=40` at `c = 2`, rounded up to two
/// significant digits, for each `(α, γ)` pair.
pub const QUALITY_CAP: [(&str, &str, f64); 9] = [
    (SQRT2, "rat:1/3", 0.047),
    (SQRT2, "lat:1,0", 0.12),
    (SQRT2, "rat:0", 0.0058),
    (GOLDEN, "rat:1/3", 0.13),
    (GOLDEN, "lat:1,0", 0.12),
    (GOLDEN, "rat:0", 0.025),
    (SQRT3, "rat:1/3", 0.13),
    (SQRT3, "lat:1,0", 0.12),
    (SQRT3, "rat:0", 0.013),
];

pub fn quality_cap(alpha: &str, gamma: &str) -> f64 {
    QUALITY_CAP.iter().find(|(a, g, _)| *a == alpha && *g == gamma).expect("fixture").2
}

/// `(x, N, ω(N), window end)` for `x_j = round(10^{3 + 4j/49})`, `c = 2`.
pub const LOW_OMEGA: [(u64, u64, u32, u64); 50] = [
    (1000, 1009, 1, 1009), (1207, 1213, 1, 1216), (1456, 1459, 1, 1465), (1758, 1759, 1, 1767),
    (2121, 2129, 1, 2130), (2560, 2560, 2, 2570), (3089, 3089, 1, 3099), (3728, 3733, 1, 3738),
    (4498, 4507, 1, 4508), (5429, 5431, 1, 5440), (6551, 6551, 1, 6562), (7906, 7907, 1, 7917),
    (9541, 9547, 1, 9553), (11514, 11519, 1, 11526), (13895, 13901, 1, 13907), (16768, 16768, 2, 16780),
    (20236, 20249, 1, 20249), (24421, 24421, 1, 24434), (29471, 29473, 1, 29484), (35565, 35569, 1, 35579),
    (42919, 42923, 1, 42933), (51795, 51797, 1, 51809), (62506, 62507, 1, 62521), (75431, 75431, 1, 75446),
    (91030, 91033, 1, 91045), (109854, 109859, 1, 109870), (132571, 132571, 2, 132587), (159986, 160001, 1, 160003),
    (193070, 193073, 1, 193087), (232995, 232997, 2, 233012), (281177, 281189, 1, 281195), (339322, 339323, 1, 339340),
    (409492, 409499, 1, 409511), (494171, 494174, 2, 494190), (596362, 596363, 1, 596382), (719686, 719689, 1, 719706),
    (868511, 868529, 1, 868532), (1048113, 1048123, 1, 1048134), (1264855, 1264859, 1, 1264877), (1526418, 1526423, 1, 1526440),
    (1842070, 1842073, 1, 1842093), (2222996, 2223007, 1, 2223019), (2682696, 2682697, 2, 2682720), (3237458, 3237461, 1, 3237482),
    (3906940, 3906949, 1, 3906965), (4714866, 4714891, 1, 4714891), (5689866, 5689877, 1, 5689892), (6866488, 6866513, 1, 6866515),
    (8286428, 8286433, 1, 8286455), (10000000, 10000019, 1, 10000028),
];

pub fn cf(spec: &str) -> ContinuedFraction {
    ContinuedFraction::parse(spec).expect("valid α spec")
}

pub fn gamma(spec: &str) -> GammaSpec {
    parse_gamma(spec).expect("valid γ spec")
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rv(n: i64, d: i64) -> ValidatedReal {
    ValidatedReal::rational(rat(n, d))
}

/// ω over `[lo, hi]` by an independent segmented sieve.
pub fn omega_by_sieve(lo: u64, hi: u64) -> Vec<u32> {
    let len = (hi - lo + 1) as usize;
    let mut rest: Vec<u64> = (lo..=hi).collect();
    let mut omega = vec![0u32; len];
    let limit = (hi as f64).sqrt() as u64 + 1;
    let mut composite = vec![false; limit as usize + 1];
    for p in 2..=limit {
        if composite[p as usize] {
            continue;
        }
        let mut q = p * p;
        while q <= limit {
            composite[q as usize] = true;
            q += p;
        }
        let mut k = lo.div_ceil(p) * p;
        while k <= hi {
            let idx = (k - lo) as usize;
            omega[idx] += 1;
            while rest[idx].is_multiple_of(p) {
                rest[idx] /= p;
            }
            k += p;
        }
    }
    for (w, r) in omega.iter_mut().zip(&rest) {
        if *r > 1 {
            *w += 1;
        }
    }
    omega
}
