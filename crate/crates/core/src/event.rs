//! The typed events the platform emits, and the line format they are
//! stored in.

use crate::domain::Role;
use crate::ids::{ArticleId, CommunityId, UserId};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteDirection {
    Up,
    Down,
}

/// Everything that can happen on the platform. On the wire each event is
/// `{"kind": "...", "payload": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum PlatformEvent {
    UserRegistered {
        user: UserId,
    },
    /// A community creation request together with its outcome. Only an
    /// approved creation brings the community into existence.
    CommunityCreated {
        community: CommunityId,
        creator: UserId,
        approved_by_superadmin: bool,
    },
    /// Membership grant. The platform assigns the role; plain members join
    /// as authors.
    CommunityJoined {
        community: CommunityId,
        user: UserId,
        #[serde(default)]
        role: Role,
    },
    /// A new revision. Index 0 creates the article inside `community`.
    VersionSaved {
        article: ArticleId,
        community: CommunityId,
        editor: UserId,
        index: usize,
    },
    VoteCast {
        article: ArticleId,
        index: usize,
        voter: UserId,
        direction: VoteDirection,
    },
    ViewRecorded {
        article: ArticleId,
        index: usize,
    },
    ReportFiled {
        article: ArticleId,
        index: usize,
        reporter: UserId,
        reason: String,
    },
    /// A community admin's ruling on the currently open report.
    ReportResolved {
        article: ArticleId,
        admin: UserId,
        approved: bool,
    },
    PublishRequested {
        article: ArticleId,
        user: UserId,
        index: usize,
    },
    /// The publisher's ruling on the pending request for `index`.
    PublishDecided {
        article: ArticleId,
        index: usize,
        publisher: UserId,
        accepted: bool,
    },
}

/// One durable log line: sequence number, timestamp, and the event itself.
/// Timestamps live only here; replayed state never depends on them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub seq: u64,
    pub ts: DateTime<Utc>,
    #[serde(flatten)]
    pub event: PlatformEvent,
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    #[test]
    fn records_round_trip_and_keep_the_line_shape() {
        let record = EventRecord {
            seq: 7,
            ts: Utc.with_ymd_and_hms(2024, 5, 1, 12, 0, 0).unwrap(),
            event: PlatformEvent::VoteCast {
                article: ArticleId::from("art-1"),
                index: 2,
                voter: UserId::from("bob"),
                direction: VoteDirection::Down,
            },
        };
        let line = serde_json::to_string(&record).unwrap();
        assert_eq!(
            line,
            "{\"seq\":7,\"ts\":\"2024-05-01T12:00:00Z\",\"kind\":\"vote_cast\",\
             \"payload\":{\"article\":\"art-1\",\"index\":2,\"voter\":\"bob\",\"direction\":\"down\"}}"
        );
        let back: EventRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, record);
    }

    #[test]
    fn joined_role_defaults_to_author() {
        let event: PlatformEvent = serde_json::from_str(
            "{\"kind\":\"community_joined\",\"payload\":{\"community\":\"c\",\"user\":\"u\"}}",
        )
        .unwrap();
        assert_eq!(
            event,
            PlatformEvent::CommunityJoined {
                community: CommunityId::from("c"),
                user: UserId::from("u"),
                role: Role::Author,
            }
        );
    }

    #[test]
    fn unknown_kinds_are_rejected() {
        let err = serde_json::from_str::<PlatformEvent>(
            "{\"kind\":\"user_deleted\",\"payload\":{\"user\":\"u\"}}",
        )
        .unwrap_err();
        assert!(err.to_string().contains("unknown variant"));
    }
}
