//! Coprime inhomogeneous Diophantine approximation.
//!
//! Given an irrational `α` and a real shift `γ`, [`construct`] produces coprime
//! integers `(m, n)` with `|nα − m − γ|` within a factor `exp(c·√log|n|)` of
//! `1/|n|`. The construction walks the convergents of `α` ([`confrac`]),
//! expands `γ` in the Ostrowski numeration ([`ostrowski`]), picks a shift `a`
//! whose cross term has few prime factors and a shift `b` restoring
//! coprimality ([`coprime`]). [`oracle`] holds the brute-force ground truth
//! used to check every step.

pub mod cli;
pub mod confrac;
pub mod construct;
pub mod coprime;
pub mod error;
pub mod exec;
pub mod numtheory;
pub mod oracle;
pub mod ostrowski;
pub mod real;

pub use confrac::{ContinuedFraction, Convergent, Source};
pub use construct::{ApproxPair, BasePair, GammaSpec, SearchCaps};
pub use coprime::ProgressionQuery;

pub use error::{Error, Result};
pub use exec::Exec;
pub use oracle::RecordEntry;
pub use ostrowski::{IntOstrowski, RealOstrowski};
pub use real::{QuadSurd, ValidatedReal};
