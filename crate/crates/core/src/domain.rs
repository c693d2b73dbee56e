//! Articles, versions, roles, and the structural rules a history must obey.

use crate::ids::{ArticleId, CommunityId, UserId};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Roles a user can hold. `SuperAdmin` and `GroupAdmin` exist for platform
/// administration; community rules only ever check the other three.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Default, Hash,
)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    SuperAdmin,
    CommunityAdmin,
    GroupAdmin,
    Publisher,
    #[default]
    Author,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Role::SuperAdmin => "super-admin",
            Role::CommunityAdmin => "community-admin",
            Role::GroupAdmin => "group-admin",
            Role::Publisher => "publisher",
            Role::Author => "author",
        };
        f.write_str(name)
    }
}

/// Vote and view counters for one saved revision of an article.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionStats {
    pub index: usize,
    pub editor: UserId,
    #[serde(default)]
    pub upvotes: u64,
    #[serde(default)]
    pub downvotes: u64,
    #[serde(default)]
    pub views: u64,
}

impl VersionStats {
    pub fn new(index: usize, editor: impl Into<UserId>) -> Self {
        Self {
            index,
            editor: editor.into(),
            upvotes: 0,
            downvotes: 0,
            views: 0,
        }
    }

    /// Total votes cast on this version.
    pub fn votes(&self) -> u64 {
        self.upvotes + self.downvotes
    }
}

/// Publication lifecycle of an article. A reported or requested state always
/// names the version it refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArticleState {
    #[default]
    Draft,
    PublishRequested {
        index: usize,
    },
    Published {
        index: usize,
    },
    Reported {
        index: usize,
    },
}

impl fmt::Display for ArticleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArticleState::Draft => f.write_str("draft"),
            ArticleState::PublishRequested { index } => write!(f, "publish_requested({index})"),
            ArticleState::Published { index } => write!(f, "published({index})"),
            ArticleState::Reported { index } => write!(f, "reported({index})"),
        }
    }
}

/// The full revision history of one article. `versions[0]` is the original
/// draft; indices are dense and ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersionHistory {
    pub article: ArticleId,
    pub community: CommunityId,
    pub versions: Vec<VersionStats>,
    #[serde(default)]
    pub state: ArticleState,
}

impl VersionHistory {
    pub fn new(article: impl Into<ArticleId>, community: impl Into<CommunityId>) -> Self {
        Self {
            article: article.into(),
            community: community.into(),
            versions: Vec::new(),
            state: ArticleState::Draft,
        }
    }

    pub fn len(&self) -> usize {
        self.versions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.versions.is_empty()
    }

    pub fn version(&self, index: usize) -> Option<&VersionStats> {
        self.versions.get(index)
    }
}

/// One structural violation found in a history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HistoryViolation {
    EmptyHistory,
    VotesExceedViews {
        index: usize,
        votes: u64,
        views: u64,
    },
    NonContiguous {
        position: usize,
        expected: usize,
        found: usize,
    },
    StateIndexOutOfRange {
        index: usize,
        len: usize,
    },
}

impl fmt::Display for HistoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HistoryViolation::EmptyHistory => f.write_str("history has no versions"),
            HistoryViolation::VotesExceedViews {
                index,
                votes,
                views,
            } => write!(f, "version {index}: votes {votes} > views {views}"),
            HistoryViolation::NonContiguous {
                position,
                expected,
                found,
            } => write!(
                f,
                "non-contiguous version index at position {position}: expected {expected}, found {found}"
            ),
            HistoryViolation::StateIndexOutOfRange { index, len } => write!(
                f,
                "state refers to version {index} but only {len} versions exist"
            ),
        }
    }
}

/// Everything `validate_history` found. Violations are plain data so that
/// callers can render all of them, not just the first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<HistoryViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the structural invariants every well-formed history satisfies:
/// at least one version, dense ascending indices, votes never exceeding
/// views, and a lifecycle state that points at a real version.
pub fn validate_history(history: &VersionHistory) -> ValidationReport {
    let mut violations = Vec::new();
    if history.versions.is_empty() {
        violations.push(HistoryViolation::EmptyHistory);
    }
    for (position, version) in history.versions.iter().enumerate() {
        if version.index != position {
            violations.push(HistoryViolation::NonContiguous {
                position,
                expected: position,
                found: version.index,
            });
        }
        if version.votes() > version.views {
            violations.push(HistoryViolation::VotesExceedViews {
                index: version.index,
                votes: version.votes(),
                views: version.views,
            });
        }
    }
    let state_index = match history.state {
        ArticleState::Draft => None,
        ArticleState::PublishRequested { index }
        | ArticleState::Published { index }
        | ArticleState::Reported { index } => Some(index),
    };
    if let Some(index) = state_index {
        if index >= history.versions.len() {
            violations.push(HistoryViolation::StateIndexOutOfRange {
                index,
                len: history.versions.len(),
            });
        }
    }
    ValidationReport { violations }
}
