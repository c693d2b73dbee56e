//! Mints and distributes the publication point bank.
//!
//! Publishing an article mints a bank of points sized by how many versions
//! were selected, then splits it three ways: most goes to the versions whose
//! viewers actually voted, a fifth to the publisher, and the rest to the
//! other selected versions. Everything is integer milli-point arithmetic;
//! the shares always add back up to the bank.

use crate::config::AllocationConfig;
use crate::domain::{VersionHistory, VersionStats};
use crate::ids::UserId;
use crate::ledger::MilliPoints;
use crate::rational::{ratio_string, Rational};
use crate::selection::{select_versions, SelectionError, SelectionSet};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Whether nearly every viewer of a version voted on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EngagementClass {
    CloseToOne,
    Remaining,
}

/// The minted bank and its three pools, before any empty-class merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointBank {
    pub total: MilliPoints,
    pub close_to_one: MilliPoints,
    pub publisher: MilliPoints,
    pub remaining: MilliPoints,
}

impl PointBank {
    /// Mints the bank for `selected` versions. The remaining pool absorbs
    /// whatever the percentage truncation of the other two leaves over, so
    /// the three pools always sum to the total.
    pub fn mint(selected: usize, config: &AllocationConfig) -> PointBank {
        let total = config.points_per_version * 1000 * selected as i64;
        let close_to_one = total * config.close_to_one_percent / 100;
        let publisher = total * config.publisher_percent / 100;
        PointBank {
            total: MilliPoints(total),
            close_to_one: MilliPoints(close_to_one),
            publisher: MilliPoints(publisher),
            remaining: MilliPoints(total - close_to_one - publisher),
        }
    }
}

#[derive(Debug, Error)]
pub enum AllocationError {
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error("version {index}: votes {votes} exceed views {views}")]
    VotesExceedViews { index: usize, votes: u64, views: u64 },
    #[error("epsilon must lie in [0, 1], got {0}")]
    EpsilonOutOfRange(Rational),
    #[error("allocation percentages must sum to 100, got {0}")]
    BadSplit(i64),
    #[error("selection {got:?} does not match the history (expected {expected:?})")]
    SelectionMismatch {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
}

/// Fraction of viewers who voted, exact and in `[0, 1]`. A version nobody
/// has viewed counts as zero engagement.
pub fn engagement_ratio(version: &VersionStats) -> Result<Rational, AllocationError> {
    let votes = version.votes();
    if votes > version.views {
        return Err(AllocationError::VotesExceedViews {
            index: version.index,
            votes,
            views: version.views,
        });
    }
    if version.views == 0 {
        return Ok(Rational::from_integer(0));
    }
    Ok(Rational::new(votes, version.views))
}

/// A version is close-to-one when its engagement ratio is at least
/// `1 - epsilon`; the boundary itself qualifies.
pub fn classify_version(
    version: &VersionStats,
    epsilon: Rational,
) -> Result<EngagementClass, AllocationError> {
    if epsilon > Rational::from_integer(1) {
        return Err(AllocationError::EpsilonOutOfRange(epsilon));
    }
    let ratio = engagement_ratio(version)?;
    if ratio >= Rational::from_integer(1) - epsilon {
        Ok(EngagementClass::CloseToOne)
    } else {
        Ok(EngagementClass::Remaining)
    }
}

/// Exact shares of one publication bank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationResult {
    pub bank: PointBank,
    #[serde(with = "ratio_string")]
    pub epsilon: Rational,
    /// Selected versions in the close-to-one class, ascending.
    pub close_to_one: Vec<usize>,
    /// Selected versions in the remaining class, ascending.
    pub remaining: Vec<usize>,
    /// Milli-points awarded to each selected version.
    pub per_version: BTreeMap<usize, MilliPoints>,
    /// The version awards folded per editor.
    pub shares: BTreeMap<UserId, MilliPoints>,
    pub publisher_share: MilliPoints,
    pub publisher: Option<UserId>,
}

impl AllocationResult {
    /// Everything handed out: editor shares plus the publisher share.
    pub fn total_allocated(&self) -> MilliPoints {
        self.shares.values().copied().sum::<MilliPoints>() + self.publisher_share
    }
}

/// Splits `pool` equally over `members`, handing the remainder out one
/// milli-point at a time starting from the lowest version index.
fn split_equally(
    pool: MilliPoints,
    members: &[usize],
    out: &mut BTreeMap<usize, MilliPoints>,
) {
    if members.is_empty() {
        return;
    }
    let count = members.len() as i64;
    let base = pool.0.div_euclid(count);
    let spare = pool.0.rem_euclid(count);
    for (position, &index) in members.iter().enumerate() {
        let extra = if (position as i64) < spare { 1 } else { 0 };
        out.insert(index, MilliPoints(base + extra));
    }
}

/// Distributes the bank for a publication of `history`.
///
/// The selection must be the one the history actually produces; passing a
/// stale or hand-built set is an error. If one version class is empty its
/// pool moves to the other class before splitting. The publisher pool is
/// never redistributed; with no publisher on record it is still reported as
/// the publisher share.
pub fn allocate_bank(
    history: &VersionHistory,
    selection: &SelectionSet,
    publisher: Option<UserId>,
    config: &AllocationConfig,
) -> Result<AllocationResult, AllocationError> {
    let split_sum =
        config.close_to_one_percent + config.publisher_percent + config.remaining_percent;
    if split_sum != 100 {
        return Err(AllocationError::BadSplit(split_sum));
    }
    if config.epsilon > Rational::from_integer(1) {
        return Err(AllocationError::EpsilonOutOfRange(config.epsilon));
    }
    let recomputed = select_versions(history)?;
    if &recomputed != selection {
        return Err(AllocationError::SelectionMismatch {
            expected: recomputed.selected,
            got: selection.selected.clone(),
        });
    }

    let mut close_to_one = Vec::new();
    let mut remaining = Vec::new();
    for index in selection.iter() {
        match classify_version(&history.versions[index], config.epsilon)? {
            EngagementClass::CloseToOne => close_to_one.push(index),
            EngagementClass::Remaining => remaining.push(index),
        }
    }

    let bank = PointBank::mint(selection.len(), config);
    let mut close_pool = bank.close_to_one;
    let mut remaining_pool = bank.remaining;
    if close_to_one.is_empty() {
        remaining_pool += close_pool;
        close_pool = MilliPoints::ZERO;
    } else if remaining.is_empty() {
        close_pool += remaining_pool;
        remaining_pool = MilliPoints::ZERO;
    }

    let mut per_version = BTreeMap::new();
    split_equally(close_pool, &close_to_one, &mut per_version);
    split_equally(remaining_pool, &remaining, &mut per_version);

    let mut shares: BTreeMap<UserId, MilliPoints> = BTreeMap::new();
    for (&index, &amount) in &per_version {
        *shares
            .entry(history.versions[index].editor.clone())
            .or_insert(MilliPoints::ZERO) += amount;
    }

    Ok(AllocationResult {
        bank,
        epsilon: config.epsilon,
        close_to_one,
        remaining,
        per_version,
        shares,
        publisher_share: bank.publisher,
        publisher,
    })
}
