//! Exact integer point accounting.
//!
//! Balances are kept in thousandths of a point so that bank splits and
//! percentage pools never round. Every user has one platform bucket plus one
//! bucket per community; the system-wide figure is the sum of all of them.

use crate::ids::{CommunityId, UserId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// A signed point amount in exact thousandths of a point.
#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Default,
    Serialize,
    Deserialize,
)]
#[serde(transparent)]
pub struct MilliPoints(pub i64);

impl MilliPoints {
    pub const ZERO: MilliPoints = MilliPoints(0);

    pub fn from_points(points: i64) -> Self {
        MilliPoints(points * 1000)
    }
}

impl Add for MilliPoints {
    type Output = MilliPoints;
    fn add(self, rhs: MilliPoints) -> MilliPoints {
        MilliPoints(self.0 + rhs.0)
    }
}

impl AddAssign for MilliPoints {
    fn add_assign(&mut self, rhs: MilliPoints) {
        self.0 += rhs.0;
    }
}

impl Sub for MilliPoints {
    type Output = MilliPoints;
    fn sub(self, rhs: MilliPoints) -> MilliPoints {
        MilliPoints(self.0 - rhs.0)
    }
}

impl SubAssign for MilliPoints {
    fn sub_assign(&mut self, rhs: MilliPoints) {
        self.0 -= rhs.0;
    }
}

impl Neg for MilliPoints {
    type Output = MilliPoints;
    fn neg(self) -> MilliPoints {
        MilliPoints(-self.0)
    }
}

impl Sum for MilliPoints {
    fn sum<I: Iterator<Item = MilliPoints>>(iter: I) -> MilliPoints {
        MilliPoints(iter.map(|m| m.0).sum())
    }
}

impl fmt::Display for MilliPoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Where a delta lands: the platform-wide bucket or one community.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReputationScope {
    Platform,
    Community(CommunityId),
}

/// Names the rule that produced a delta, for audit output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaReason {
    Registration,
    CommunityCreated,
    CommunityJoined,
    VersionSaved,
    Upvote,
    Downvote,
    ReportUpheldReporter,
    ReportUpheldEditor,
    ReportUpheldPublisher,
    ReportRejectedReporter,
    PublicationVersionShare,
    PublicationPublisherShare,
}

/// One signed adjustment to one user's balance in one scope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaEntry {
    pub user: UserId,
    pub scope: ReputationScope,
    pub amount: MilliPoints,
    pub reason: DeltaReason,
}

impl DeltaEntry {
    pub fn new(
        user: impl Into<UserId>,
        scope: ReputationScope,
        amount: MilliPoints,
        reason: DeltaReason,
    ) -> Self {
        Self {
            user: user.into(),
            scope,
            amount,
            reason,
        }
    }
}

/// The full set of adjustments one event produces. Empty means the event is
/// recorded but worth nothing.
pub type ReputationDelta = Vec<DeltaEntry>;

/// Per-user balances: the platform bucket plus one bucket per community.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct UserAccount {
    #[serde(default)]
    pub platform: MilliPoints,
    #[serde(default)]
    pub communities: BTreeMap<CommunityId, MilliPoints>,
}

impl UserAccount {
    /// Platform bucket plus every community bucket.
    pub fn system_total(&self) -> MilliPoints {
        self.platform + self.communities.values().copied().sum()
    }
}

/// Signed balances for every user the engine has seen.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ReputationLedger {
    pub accounts: BTreeMap<UserId, UserAccount>,
}

impl ReputationLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds each entry to the matching bucket, creating accounts on demand.
    pub fn apply(&mut self, entries: &[DeltaEntry]) {
        for entry in entries {
            let account = self.accounts.entry(entry.user.clone()).or_default();
            match &entry.scope {
                ReputationScope::Platform => account.platform += entry.amount,
                ReputationScope::Community(community) => {
                    *account
                        .communities
                        .entry(community.clone())
                        .or_insert(MilliPoints::ZERO) += entry.amount;
                }
            }
        }
    }

    /// Pure counterpart of [`apply`](Self::apply): the receiver is untouched.
    pub fn with_delta(&self, entries: &[DeltaEntry]) -> ReputationLedger {
        let mut next = self.clone();
        next.apply(entries);
        next
    }

    pub fn account(&self, user: &UserId) -> Option<&UserAccount> {
        self.accounts.get(user)
    }

    /// Sum of every bucket the user holds; zero for unknown users.
    pub fn system_reputation(&self, user: &UserId) -> MilliPoints {
        self.accounts
            .get(user)
            .map(UserAccount::system_total)
            .unwrap_or(MilliPoints::ZERO)
    }

    pub fn community_reputation(&self, user: &UserId, community: &CommunityId) -> MilliPoints {
        self.accounts
            .get(user)
            .and_then(|a| a.communities.get(community))
            .copied()
            .unwrap_or(MilliPoints::ZERO)
    }
}
