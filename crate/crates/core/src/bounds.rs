//! Closed-form quantities of the bag construction, evaluated in natural-log
//! space.
//!
//! For `p` bags of `m` copies, the probability that some set of `p - 1`
//! vertices absorbs a random instance is at most
//!
//! ```text
//! C(mp, p-1) * (1 - 2^-(p-1))^m  <=  (e m p / (p-1))^(p-1) * exp(-m 2^-(p-1))
//! ```
//!
//! The left side is the union bound, the right side its relaxation. A
//! negative log certifies that some instance with that `m` has no absorbing
//! set smaller than `p`.

use thiserror::Error;

/// Largest `n` for which `family_size(n)` is evaluated exactly in `u64`.
pub const MAX_COLOURS_EXACT: u32 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("colour count must be at least 1")]
    NoColours,
    #[error("colour count {0} exceeds the exact-arithmetic limit {MAX_COLOURS_EXACT}")]
    TooManyColours(u32),
    #[error("n must be at least 2 for the growth ratio, got {0}")]
    RatioDomain(u32),
    #[error("p must be at least 1")]
    EmptyFamily,
    #[error("m must be at least 1")]
    NoCopies,
    #[error("certifying m for p = {0} does not fit in 64 bits")]
    ThresholdOverflow(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Union,
    Relaxed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub p: u64,
    pub m: u64,
    /// `-inf` encodes a probability of exactly zero.
    pub log_union_bound: f64,
    pub log_relaxed_bound: f64,
    pub certifies_existence: bool,
}

impl BoundReport {
    pub fn new(p: u64, m: u64) -> Result<Self, BoundsError> {
        check_pm(p, m)?;
        let log_union_bound = union_bound_log(p, m);
        Ok(Self {
            p,
            m,
            log_union_bound,
            log_relaxed_bound: relaxed_bound_log(p, m),
            certifies_existence: log_union_bound < 0.0,
        })
    }
}

fn check_pm(p: u64, m: u64) -> Result<(), BoundsError> {
    if p == 0 {
        return Err(BoundsError::EmptyFamily);
    }
    if m == 0 {
        return Err(BoundsError::NoCopies);
    }
    Ok(())
}

/// `C(n-1, floor((n-1)/2))`, exactly, by Pascal's recurrence.
pub fn family_size(n: u32) -> Result<u64, BoundsError> {
    if n == 0 {
        return Err(BoundsError::NoColours);
    }
    if n > MAX_COLOURS_EXACT {
        return Err(BoundsError::TooManyColours(n));
    }
    let ground = (n - 1) as usize;
    Ok(pascal_row(ground)[ground / 2])
}

/// Row `r` of Pascal's triangle. Entries fit in `u64` for `r <= 66`.
pub(crate) fn pascal_row(r: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..r {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1);
        next.extend(row.windows(2).map(|w| w[0] + w[1]));
        next.push(1);
        row = next;
    }
    row
}

/// `ln C(a, b)` as a sum of `ln((a - i) / (i + 1))` terms.
pub fn ln_binomial(a: u64, b: u64) -> f64 {
    if b > a {
        return f64::NEG_INFINITY;
    }
    let b = b.min(a - b);
    (0..b).map(|i| ((a - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// `ln[C(mp, p-1) * (1 - 2^-(p-1))^m]`; `-inf` when `p = 1`.
pub fn union_bound_log(p: u64, m: u64) -> f64 {
    assert!(p >= 1 && m >= 1, "union bound needs p, m >= 1");
    if p == 1 {
        return f64::NEG_INFINITY;
    }
    let k = p - 1;
    let miss = half_pow(k);
    ln_binomial(m.saturating_mul(p), k) + m as f64 * (-miss).ln_1p()
}

/// `(p-1)(1 + ln(mp/(p-1))) - m 2^-(p-1)`; the power term is the empty
/// product when `p = 1`, giving `-m`.
pub fn relaxed_bound_log(p: u64, m: u64) -> f64 {
    assert!(p >= 1 && m >= 1, "relaxed bound needs p, m >= 1");
    let k = p - 1;
    let decay = m as f64 * half_pow(k);
    if k == 0 {
        return -decay;
    }
    let k = k as f64;
    k * (1.0 + ((m as f64) * (p as f64) / k).ln()) - decay
}

fn half_pow(k: u64) -> f64 {
    0.5f64.powi(i32::try_from(k).unwrap_or(i32::MAX))
}

fn log_bound(p: u64, m: u64, kind: BoundKind) -> f64 {
    match kind {
        BoundKind::Union => union_bound_log(p, m),
        BoundKind::Relaxed => relaxed_bound_log(p, m),
    }
}

/// Least `m >= 1` at which the selected bound drops below probability one.
///
/// Both log bounds are concave in `m` and non-negative at `m = 1` for
/// `p >= 2`, so once negative they stay negative: a short linear scan is
/// followed by doubling and bisection on that monotone predicate.
pub fn minimal_m(p: u64, kind: BoundKind) -> Result<u64, BoundsError> {
    if p == 0 {
        return Err(BoundsError::EmptyFamily);
    }
    let certifies = |m: u64| log_bound(p, m, kind) < 0.0;
    const SCAN: u64 = 64;
    for m in 1..=SCAN {
        if certifies(m) {
            return Ok(m);
        }
    }
    let mut lo = SCAN;
    let mut hi = SCAN * 2;
    while !certifies(hi) {
        lo = hi;
        hi = hi.checked_mul(2).ok_or(BoundsError::ThresholdOverflow(p))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if certifies(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `family_size(n) * sqrt(n) / 2^n`, evaluated through logs.
pub fn stirling_ratio(n: u32) -> Result<f64, BoundsError> {
    if n < 2 {
        return Err(BoundsError::RatioDomain(n));
    }
    let p = family_size(n)?;
    Ok(((p as f64).ln() + 0.5 * f64::from(n).ln() - f64::from(n) * std::f64::consts::LN_2).exp())
}
