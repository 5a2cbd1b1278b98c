//! Closed-form bounds on the minimum number of boxes in a `(k, l)`-piercing
//! partition, computed in exact integer arithmetic.

use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

use crate::intmath::{ceil_div, ceil_sqrt};
use crate::parallel::{map_ordered, Workers};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("piercing targets must be at least 2, got k={k}, l={l}")]
    InvalidParams { k: usize, l: usize },
    #[error("refinement cap must be at least 1")]
    InvalidCap,
}

fn check(k: usize, l: usize) -> Result<(u64, u64), BoundsError> {
    if k < 2 || l < 2 {
        return Err(BoundsError::InvalidParams { k, l });
    }
    Ok((k as u64 - 1, l as u64 - 1))
}

/// `(k-1) + (l-1) + ceil(2 sqrt((k-1)(l-1)))`.
pub fn lower_bound(k: usize, l: usize) -> Result<u64, BoundsError> {
    let (p, q) = check(k, l)?;
    Ok(p + q + ceil_sqrt(4 * p * q))
}

/// `(k-1) + (l-1) + 2 ceil(sqrt((k-1)(l-1)))`, the size of the construction.
pub fn upper_bound(k: usize, l: usize) -> Result<u64, BoundsError> {
    let (p, q) = check(k, l)?;
    Ok(p + q + 2 * ceil_sqrt(p * q))
}

/// Default search cap for [`refined_lower_bound`].
pub fn default_cap(k: usize, l: usize) -> usize {
    4 * (k + l)
}

/// `(k-1) + (l-1) + min over 1 <= m, n <= cap of
/// ceil(n (l-1) / m) + ceil(m (k-1) / n)`.
///
/// Never below [`lower_bound`], and non-increasing in `cap`.
pub fn refined_lower_bound(k: usize, l: usize, cap: usize) -> Result<u64, BoundsError> {
    let (p, q) = check(k, l)?;
    if cap == 0 {
        return Err(BoundsError::InvalidCap);
    }
    let cap = cap as u64;
    let mut best = u64::MAX;
    for m in 1..=cap {
        for n in 1..=cap {
            let v = ceil_div(n * q, m) + ceil_div(m * p, n);
            best = best.min(v);
        }
    }
    Ok(p + q + best)
}

/// Tight bound for partitions into geometric rectangles: `2k + 2l - 4`.
pub fn geometric_bound(k: usize, l: usize) -> Result<u64, BoundsError> {
    check(k, l)?;
    Ok(2 * k as u64 + 2 * l as u64 - 4)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsRow {
    pub k: usize,
    pub l: usize,
    pub lower: u64,
    pub refined: u64,
    pub upper: u64,
    /// `upper - max(lower, refined)`.
    pub gap: u64,
}

impl BoundsRow {
    pub fn compute(k: usize, l: usize, cap: usize) -> Result<Self, BoundsError> {
        let lower = lower_bound(k, l)?;
        let refined = refined_lower_bound(k, l, cap)?;
        let upper = upper_bound(k, l)?;
        Ok(BoundsRow {
            k,
            l,
            lower,
            refined,
            upper,
            gap: upper - lower.max(refined),
        })
    }

    /// The refined bound beats the plain one.
    pub fn refined_improves(&self) -> bool {
        self.refined > self.lower
    }

    /// Best lower bound meets the construction.
    pub fn coincide(&self) -> bool {
        self.gap == 0
    }
}

/// One row per `(k, l)` pair, `k` outer. `cap = None` uses [`default_cap`].
pub fn bounds_table(
    k_range: RangeInclusive<usize>,
    l_range: RangeInclusive<usize>,
    cap: Option<usize>,
) -> Result<Vec<BoundsRow>, BoundsError> {
    bounds_table_with(k_range, l_range, cap, Workers::default())
}

pub fn bounds_table_with(
    k_range: RangeInclusive<usize>,
    l_range: RangeInclusive<usize>,
    cap: Option<usize>,
    workers: Workers,
) -> Result<Vec<BoundsRow>, BoundsError> {
    let pairs: Vec<(usize, usize)> = k_range
        .flat_map(|k| l_range.clone().map(move |l| (k, l)))
        .collect();
    map_ordered(&pairs, workers, |&(k, l)| {
        BoundsRow::compute(k, l, cap.unwrap_or_else(|| default_cap(k, l)))
    })
    .into_iter()
    .collect()
}

pub const CSV_HEADER: &str = "k,ℓ,lower,refined,upper,gap,coincide";

/// CSV with a header row and LF line endings.
pub fn table_to_csv(rows: &[BoundsRow]) -> String {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k,
            r.l,
            r.lower,
            r.refined,
            r.upper,
            r.gap,
            r.coincide()
        ));
    }
    out
}
