//! In-memory engine state, rebuilt from the event log.
//!
//! All mutation flows through [`EngineState::apply`], which validates the
//! event against the current state, computes the reputation deltas, and only
//! then mutates. The containers are ordered maps throughout so that two
//! replays of the same log serialize byte for byte.

use crate::domain::{ArticleState, Role, VersionHistory, VersionStats};
use crate::event::PlatformEvent;
use crate::grading::{self, GradingError};
use crate::config::EngineConfig;
use crate::ids::{ArticleId, CommunityId, UserId};
use crate::ledger::{ReputationDelta, ReputationLedger};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// The publication of record for an article.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub index: usize,
    pub publisher: UserId,
}

/// A report awaiting a community admin's ruling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenReport {
    pub index: usize,
    pub reporter: UserId,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Community {
    pub creator: UserId,
    pub members: BTreeMap<UserId, Role>,
}

/// An article's history plus its lifecycle bookkeeping. `history.state` is
/// kept in sync as a derived view: an open report wins over a pending
/// request, which wins over the publication of record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub history: VersionHistory,
    pub published: Option<Publication>,
    pub pending_request: Option<usize>,
    pub report: Option<OpenReport>,
}

impl ArticleRecord {
    fn new(history: VersionHistory) -> Self {
        Self {
            history,
            published: None,
            pending_request: None,
            report: None,
        }
    }

    fn sync_state(&mut self) {
        self.history.state = if let Some(report) = &self.report {
            ArticleState::Reported {
                index: report.index,
            }
        } else if let Some(index) = self.pending_request {
            ArticleState::PublishRequested { index }
        } else if let Some(publication) = &self.published {
            ArticleState::Published {
                index: publication.index,
            }
        } else {
            ArticleState::Draft
        };
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("user id must not be empty")]
    EmptyUserId,
    #[error("community id must not be empty")]
    EmptyCommunityId,
    #[error("article id must not be empty")]
    EmptyArticleId,
    #[error("user `{0}` is already registered")]
    DuplicateUser(UserId),
    #[error("community `{0}` already exists")]
    DuplicateCommunity(CommunityId),
    #[error("unknown user `{0}`")]
    UnknownUser(UserId),
    #[error("unknown community `{0}`")]
    UnknownCommunity(CommunityId),
    #[error("unknown article `{0}`")]
    UnknownArticle(ArticleId),
    #[error("article `{article}` has no version {index}")]
    UnknownVersion { article: ArticleId, index: usize },
    #[error("user `{user}` is already a member of `{community}`")]
    AlreadyMember {
        user: UserId,
        community: CommunityId,
    },
    #[error("role {0} cannot be granted by joining a community")]
    RoleNotGrantable(Role),
    #[error("user `{user}` is not a member of `{community}`")]
    NotAMember {
        user: UserId,
        community: CommunityId,
    },
    #[error("article `{article}` belongs to `{expected}`, not `{found}`")]
    CommunityMismatch {
        article: ArticleId,
        expected: CommunityId,
        found: CommunityId,
    },
    #[error("version index must be {expected}, got {found}")]
    NonContiguousVersion { expected: usize, found: usize },
    #[error("version {index} of `{article}` has {votes} votes and only {views} views: vote without view")]
    VoteWithoutView {
        article: ArticleId,
        index: usize,
        votes: u64,
        views: u64,
    },
    #[error("report reason must not be empty")]
    EmptyReportReason,
    #[error("article `{0}` already has an open report")]
    ReportAlreadyOpen(ArticleId),
    #[error("article `{0}` has no open report")]
    NoOpenReport(ArticleId),
    #[error("role: community-admin required to resolve reports, `{user}` is {actual} in `{community}`")]
    CommunityAdminRequired {
        user: UserId,
        community: CommunityId,
        actual: Role,
    },
    #[error("role: publisher required to decide publication, `{user}` is {actual} in `{community}`")]
    PublisherRequired {
        user: UserId,
        community: CommunityId,
        actual: Role,
    },
    #[error("article `{0}` already has a pending publish request")]
    RequestAlreadyPending(ArticleId),
    #[error("article `{0}` has no pending publish request")]
    NoPendingRequest(ArticleId),
    #[error("pending publish request is for version {pending}, not {requested}")]
    DecisionIndexMismatch { pending: usize, requested: usize },
    #[error("article `{article}` is already published at version {published}; version {requested} is not newer")]
    AlreadyPublished {
        article: ArticleId,
        published: usize,
        requested: usize,
    },
    #[error("article `{0}` has an open report; resolve it first")]
    ReportPending(ArticleId),
    #[error("expected sequence {expected}, got {found}")]
    SequenceGap { expected: u64, found: u64 },
    #[error("allocation failed: {0}")]
    Allocation(String),
}

impl From<GradingError> for ValidationError {
    fn from(err: GradingError) -> Self {
        match err {
            GradingError::UnknownArticle(article) => ValidationError::UnknownArticle(article),
            GradingError::UnknownVersion { article, index } => {
                ValidationError::UnknownVersion { article, index }
            }
            GradingError::NoOpenReport(article) => ValidationError::NoOpenReport(article),
            GradingError::Allocation(inner) => ValidationError::Allocation(inner.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EngineState {
    pub last_seq: u64,
    pub users: BTreeSet<UserId>,
    pub communities: BTreeMap<CommunityId, Community>,
    pub articles: BTreeMap<ArticleId, ArticleRecord>,
    pub ledger: ReputationLedger,
}

impl EngineState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn article(&self, id: &ArticleId) -> Option<&ArticleRecord> {
        self.articles.get(id)
    }

    pub fn community(&self, id: &CommunityId) -> Option<&Community> {
        self.communities.get(id)
    }

    fn known_user(&self, user: &UserId) -> Result<(), ValidationError> {
        if self.users.contains(user) {
            Ok(())
        } else {
            Err(ValidationError::UnknownUser(user.clone()))
        }
    }

    fn known_article(&self, article: &ArticleId) -> Result<&ArticleRecord, ValidationError> {
        self.articles
            .get(article)
            .ok_or_else(|| ValidationError::UnknownArticle(article.clone()))
    }

    fn known_version<'a>(
        &self,
        record: &'a ArticleRecord,
        index: usize,
    ) -> Result<&'a VersionStats, ValidationError> {
        record
            .history
            .version(index)
            .ok_or_else(|| ValidationError::UnknownVersion {
                article: record.history.article.clone(),
                index,
            })
    }

    fn member_role(
        &self,
        community: &CommunityId,
        user: &UserId,
    ) -> Result<Role, ValidationError> {
        let c = self
            .communities
            .get(community)
            .ok_or_else(|| ValidationError::UnknownCommunity(community.clone()))?;
        c.members
            .get(user)
            .copied()
            .ok_or_else(|| ValidationError::NotAMember {
                user: user.clone(),
                community: community.clone(),
            })
    }

    /// Checks one event against the current state without touching it.
    pub fn validate(&self, event: &PlatformEvent) -> Result<(), ValidationError> {
        match event {
            PlatformEvent::UserRegistered { user } => {
                if user.is_empty() {
                    return Err(ValidationError::EmptyUserId);
                }
                if self.users.contains(user) {
                    return Err(ValidationError::DuplicateUser(user.clone()));
                }
                Ok(())
            }
            PlatformEvent::CommunityCreated {
                community,
                creator,
                approved_by_superadmin,
            } => {
                if community.is_empty() {
                    return Err(ValidationError::EmptyCommunityId);
                }
                self.known_user(creator)?;
                if *approved_by_superadmin && self.communities.contains_key(community) {
                    return Err(ValidationError::DuplicateCommunity(community.clone()));
                }
                Ok(())
            }
            PlatformEvent::CommunityJoined {
                community,
                user,
                role,
            } => {
                self.known_user(user)?;
                let c = self
                    .communities
                    .get(community)
                    .ok_or_else(|| ValidationError::UnknownCommunity(community.clone()))?;
                if c.members.contains_key(user) {
                    return Err(ValidationError::AlreadyMember {
                        user: user.clone(),
                        community: community.clone(),
                    });
                }
                match role {
                    Role::Author | Role::Publisher | Role::CommunityAdmin => Ok(()),
                    other => Err(ValidationError::RoleNotGrantable(*other)),
                }
            }
            PlatformEvent::VersionSaved {
                article,
                community,
                editor,
                index,
            } => {
                if article.is_empty() {
                    return Err(ValidationError::EmptyArticleId);
                }
                self.known_user(editor)?;
                self.member_role(community, editor)?;
                match self.articles.get(article) {
                    Some(record) => {
                        if &record.history.community != community {
                            return Err(ValidationError::CommunityMismatch {
                                article: article.clone(),
                                expected: record.history.community.clone(),
                                found: community.clone(),
                            });
                        }
                        let expected = record.history.len();
                        if *index != expected {
                            return Err(ValidationError::NonContiguousVersion {
                                expected,
                                found: *index,
                            });
                        }
                        Ok(())
                    }
                    None => {
                        if *index != 0 {
                            return Err(ValidationError::NonContiguousVersion {
                                expected: 0,
                                found: *index,
                            });
                        }
                        Ok(())
                    }
                }
            }
            PlatformEvent::VoteCast {
                article,
                index,
                voter,
                ..
            } => {
                self.known_user(voter)?;
                let record = self.known_article(article)?;
                let version = self.known_version(record, *index)?;
                if version.votes() + 1 > version.views {
                    return Err(ValidationError::VoteWithoutView {
                        article: article.clone(),
                        index: *index,
                        votes: version.votes() + 1,
                        views: version.views,
                    });
                }
                Ok(())
            }
            PlatformEvent::ViewRecorded { article, index } => {
                let record = self.known_article(article)?;
                self.known_version(record, *index)?;
                Ok(())
            }
            PlatformEvent::ReportFiled {
                article,
                index,
                reporter,
                reason,
            } => {
                self.known_user(reporter)?;
                let record = self.known_article(article)?;
                self.known_version(record, *index)?;
                if reason.trim().is_empty() {
                    return Err(ValidationError::EmptyReportReason);
                }
                if record.report.is_some() {
                    return Err(ValidationError::ReportAlreadyOpen(article.clone()));
                }
                Ok(())
            }
            PlatformEvent::ReportResolved { article, admin, .. } => {
                self.known_user(admin)?;
                let record = self.known_article(article)?;
                if record.report.is_none() {
                    return Err(ValidationError::NoOpenReport(article.clone()));
                }
                let community = record.history.community.clone();
                let role = self.member_role(&community, admin)?;
                if role != Role::CommunityAdmin {
                    return Err(ValidationError::CommunityAdminRequired {
                        user: admin.clone(),
                        community,
                        actual: role,
                    });
                }
                Ok(())
            }
            PlatformEvent::PublishRequested {
                article,
                user,
                index,
            } => {
                self.known_user(user)?;
                let record = self.known_article(article)?;
                self.known_version(record, *index)?;
                if record.report.is_some() {
                    return Err(ValidationError::ReportPending(article.clone()));
                }
                if record.pending_request.is_some() {
                    return Err(ValidationError::RequestAlreadyPending(article.clone()));
                }
                if let Some(publication) = &record.published {
                    if *index <= publication.index {
                        return Err(ValidationError::AlreadyPublished {
                            article: article.clone(),
                            published: publication.index,
                            requested: *index,
                        });
                    }
                }
                Ok(())
            }
            PlatformEvent::PublishDecided {
                article,
                index,
                publisher,
                ..
            } => {
                self.known_user(publisher)?;
                let record = self.known_article(article)?;
                if record.report.is_some() {
                    return Err(ValidationError::ReportPending(article.clone()));
                }
                match record.pending_request {
                    None => return Err(ValidationError::NoPendingRequest(article.clone())),
                    Some(pending) if pending != *index => {
                        return Err(ValidationError::DecisionIndexMismatch {
                            pending,
                            requested: *index,
                        });
                    }
                    Some(_) => {}
                }
                let community = record.history.community.clone();
                let role = self.member_role(&community, publisher)?;
                if role != Role::Publisher {
                    return Err(ValidationError::PublisherRequired {
                        user: publisher.clone(),
                        community,
                        actual: role,
                    });
                }
                Ok(())
            }
        }
    }

    /// Validates `event` as the next entry in the log, grades it against the
    /// pre-event state, then mutates. Returns the deltas that were applied.
    pub fn apply(
        &mut self,
        seq: u64,
        event: &PlatformEvent,
        config: &EngineConfig,
    ) -> Result<ReputationDelta, ValidationError> {
        if seq != self.last_seq + 1 {
            return Err(ValidationError::SequenceGap {
                expected: self.last_seq + 1,
                found: seq,
            });
        }
        self.validate(event)?;
        let deltas = grading::deltas_for_event(event, self, config)?;
        self.mutate(event);
        self.ledger.apply(&deltas);
        self.last_seq = seq;
        Ok(deltas)
    }

    /// Structural changes only; validation and grading have already run.
    fn mutate(&mut self, event: &PlatformEvent) {
        match event {
            PlatformEvent::UserRegistered { user } => {
                self.users.insert(user.clone());
            }
            PlatformEvent::CommunityCreated {
                community,
                creator,
                approved_by_superadmin,
            } => {
                if *approved_by_superadmin {
                    let mut members = BTreeMap::new();
                    members.insert(creator.clone(), Role::CommunityAdmin);
                    self.communities.insert(
                        community.clone(),
                        Community {
                            creator: creator.clone(),
                            members,
                        },
                    );
                }
            }
            PlatformEvent::CommunityJoined {
                community,
                user,
                role,
            } => {
                if let Some(c) = self.communities.get_mut(community) {
                    c.members.insert(user.clone(), *role);
                }
            }
            PlatformEvent::VersionSaved {
                article,
                community,
                editor,
                index,
            } => {
                let record = self.articles.entry(article.clone()).or_insert_with(|| {
                    ArticleRecord::new(VersionHistory::new(
                        article.clone(),
                        community.clone(),
                    ))
                });
                record
                    .history
                    .versions
                    .push(VersionStats::new(*index, editor.clone()));
            }
            PlatformEvent::VoteCast {
                article,
                index,
                direction,
                ..
            } => {
                if let Some(record) = self.articles.get_mut(article) {
                    if let Some(version) = record.history.versions.get_mut(*index) {
                        match direction {
                            crate::event::VoteDirection::Up => version.upvotes += 1,
                            crate::event::VoteDirection::Down => version.downvotes += 1,
                        }
                    }
                }
            }
            PlatformEvent::ViewRecorded { article, index } => {
                if let Some(record) = self.articles.get_mut(article) {
                    if let Some(version) = record.history.versions.get_mut(*index) {
                        version.views += 1;
                    }
                }
            }
            PlatformEvent::ReportFiled {
                article,
                index,
                reporter,
                reason,
            } => {
                if let Some(record) = self.articles.get_mut(article) {
                    record.report = Some(OpenReport {
                        index: *index,
                        reporter: reporter.clone(),
                        reason: reason.clone(),
                    });
                    record.sync_state();
                }
            }
            PlatformEvent::ReportResolved { article, .. } => {
                if let Some(record) = self.articles.get_mut(article) {
                    record.report = None;
                    record.sync_state();
                }
            }
            PlatformEvent::PublishRequested { article, index, .. } => {
                if let Some(record) = self.articles.get_mut(article) {
                    record.pending_request = Some(*index);
                    record.sync_state();
                }
            }
            PlatformEvent::PublishDecided {
                article,
                index,
                publisher,
                accepted,
            } => {
                if let Some(record) = self.articles.get_mut(article) {
                    record.pending_request = None;
                    if *accepted {
                        record.published = Some(Publication {
                            index: *index,
                            publisher: publisher.clone(),
                        });
                    }
                    record.sync_state();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::VoteDirection;

    fn config() -> EngineConfig {
        EngineConfig::default()
    }

    struct Driver {
        state: EngineState,
        config: EngineConfig,
    }

    impl Driver {
        fn new() -> Self {
            Self {
                state: EngineState::new(),
                config: config(),
            }
        }

        fn ok(&mut self, event: PlatformEvent) -> ReputationDelta {
            let seq = self.state.last_seq + 1;
            self.state
                .apply(seq, &event, &self.config)
                .unwrap_or_else(|e| panic!("event should apply, got: {e}"))
        }

        fn err(&mut self, event: PlatformEvent) -> ValidationError {
            let seq = self.state.last_seq + 1;
            let before = self.state.clone();
            let err = self
                .state
                .apply(seq, &event, &self.config)
                .expect_err("event should be rejected");
            assert_eq!(self.state, before, "rejected events must not mutate");
            err
        }
    }

    fn register(user: &str) -> PlatformEvent {
        PlatformEvent::UserRegistered {
            user: UserId::from(user),
        }
    }

    fn create_community(community: &str, creator: &str) -> PlatformEvent {
        PlatformEvent::CommunityCreated {
            community: CommunityId::from(community),
            creator: UserId::from(creator),
            approved_by_superadmin: true,
        }
    }

    fn join(community: &str, user: &str, role: Role) -> PlatformEvent {
        PlatformEvent::CommunityJoined {
            community: CommunityId::from(community),
            user: UserId::from(user),
            role,
        }
    }

    fn save(article: &str, community: &str, editor: &str, index: usize) -> PlatformEvent {
        PlatformEvent::VersionSaved {
            article: ArticleId::from(article),
            community: CommunityId::from(community),
            editor: UserId::from(editor),
            index,
        }
    }

    fn view(article: &str, index: usize) -> PlatformEvent {
        PlatformEvent::ViewRecorded {
            article: ArticleId::from(article),
            index,
        }
    }

    fn vote(article: &str, index: usize, voter: &str, direction: VoteDirection) -> PlatformEvent {
        PlatformEvent::VoteCast {
            article: ArticleId::from(article),
            index,
            voter: UserId::from(voter),
            direction,
        }
    }

    fn seeded() -> Driver {
        let mut d = Driver::new();
        d.ok(register("alice"));
        d.ok(register("bob"));
        d.ok(register("carol"));
        d.ok(create_community("rust", "alice"));
        d.ok(join("rust", "bob", Role::Publisher));
        d.ok(join("rust", "carol", Role::Author));
        d.ok(save("art", "rust", "carol", 0));
        d
    }

    #[test]
    fn duplicate_registration_is_rejected() {
        let mut d = Driver::new();
        d.ok(register("alice"));
        assert_eq!(
            d.err(register("alice")),
            ValidationError::DuplicateUser(UserId::from("alice"))
        );
    }

    #[test]
    fn creator_becomes_community_admin() {
        let mut d = Driver::new();
        d.ok(register("alice"));
        d.ok(create_community("rust", "alice"));
        assert_eq!(
            d.state
                .community(&CommunityId::from("rust"))
                .unwrap()
                .members
                .get(&UserId::from("alice")),
            Some(&Role::CommunityAdmin)
        );
    }

    #[test]
    fn unapproved_creation_leaves_no_community_behind() {
        let mut d = Driver::new();
        d.ok(register("alice"));
        let deltas = d.ok(PlatformEvent::CommunityCreated {
            community: CommunityId::from("rust"),
            creator: UserId::from("alice"),
            approved_by_superadmin: false,
        });
        assert!(deltas.is_empty());
        assert!(d.state.community(&CommunityId::from("rust")).is_none());
    }

    #[test]
    fn admin_roles_cannot_be_self_assigned_by_joining() {
        let mut d = Driver::new();
        d.ok(register("alice"));
        d.ok(register("mallory"));
        d.ok(create_community("rust", "alice"));
        assert_eq!(
            d.err(join("rust", "mallory", Role::SuperAdmin)),
            ValidationError::RoleNotGrantable(Role::SuperAdmin)
        );
    }

    #[test]
    fn saving_requires_membership() {
        let mut d = Driver::new();
        d.ok(register("alice"));
        d.ok(register("drive-by"));
        d.ok(create_community("rust", "alice"));
        assert_eq!(
            d.err(save("art", "rust", "drive-by", 0)),
            ValidationError::NotAMember {
                user: UserId::from("drive-by"),
                community: CommunityId::from("rust"),
            }
        );
    }

    #[test]
    fn version_indices_must_be_dense() {
        let mut d = seeded();
        assert_eq!(
            d.err(save("art", "rust", "carol", 2)),
            ValidationError::NonContiguousVersion {
                expected: 1,
                found: 2
            }
        );
        d.ok(save("art", "rust", "carol", 1));
    }

    #[test]
    fn an_article_stays_in_its_community() {
        let mut d = seeded();
        d.ok(create_community("go", "alice"));
        assert_eq!(
            d.err(save("art", "go", "alice", 1)),
            ValidationError::CommunityMismatch {
                article: ArticleId::from("art"),
                expected: CommunityId::from("rust"),
                found: CommunityId::from("go"),
            }
        );
    }

    #[test]
    fn votes_need_views_to_spare() {
        let mut d = seeded();
        let err = d.err(vote("art", 0, "bob", VoteDirection::Up));
        assert!(matches!(err, ValidationError::VoteWithoutView { .. }));
        assert!(err.to_string().contains("vote without view"));
        d.ok(view("art", 0));
        d.ok(vote("art", 0, "bob", VoteDirection::Up));
        // One view supports exactly one vote.
        assert!(matches!(
            d.err(vote("art", 0, "alice", VoteDirection::Down)),
            ValidationError::VoteWithoutView { .. }
        ));
    }

    #[test]
    fn only_one_report_can_be_open() {
        let mut d = seeded();
        d.ok(PlatformEvent::ReportFiled {
            article: ArticleId::from("art"),
            index: 0,
            reporter: UserId::from("bob"),
            reason: "spam".to_owned(),
        });
        assert_eq!(
            d.err(PlatformEvent::ReportFiled {
                article: ArticleId::from("art"),
                index: 0,
                reporter: UserId::from("carol"),
                reason: "same".to_owned(),
            }),
            ValidationError::ReportAlreadyOpen(ArticleId::from("art"))
        );
    }

    #[test]
    fn resolving_reports_takes_a_community_admin() {
        let mut d = seeded();
        d.ok(PlatformEvent::ReportFiled {
            article: ArticleId::from("art"),
            index: 0,
            reporter: UserId::from("bob"),
            reason: "spam".to_owned(),
        });
        let err = d.err(PlatformEvent::ReportResolved {
            article: ArticleId::from("art"),
            admin: UserId::from("carol"),
            approved: false,
        });
        assert!(err.to_string().starts_with("role: community-admin required"));
        d.ok(PlatformEvent::ReportResolved {
            article: ArticleId::from("art"),
            admin: UserId::from("alice"),
            approved: false,
        });
        assert!(d.state.article(&ArticleId::from("art")).unwrap().report.is_none());
    }

    #[test]
    fn report_blocks_publication_until_resolved() {
        let mut d = seeded();
        d.ok(PlatformEvent::ReportFiled {
            article: ArticleId::from("art"),
            index: 0,
            reporter: UserId::from("bob"),
            reason: "spam".to_owned(),
        });
        assert_eq!(
            d.err(PlatformEvent::PublishRequested {
                article: ArticleId::from("art"),
                user: UserId::from("carol"),
                index: 0,
            }),
            ValidationError::ReportPending(ArticleId::from("art"))
        );
    }

    #[test]
    fn deciding_takes_a_publisher_and_a_matching_request() {
        let mut d = seeded();
        assert_eq!(
            d.err(PlatformEvent::PublishDecided {
                article: ArticleId::from("art"),
                index: 0,
                publisher: UserId::from("bob"),
                accepted: true,
            }),
            ValidationError::NoPendingRequest(ArticleId::from("art"))
        );
        d.ok(PlatformEvent::PublishRequested {
            article: ArticleId::from("art"),
            user: UserId::from("carol"),
            index: 0,
        });
        let err = d.err(PlatformEvent::PublishDecided {
            article: ArticleId::from("art"),
            index: 0,
            publisher: UserId::from("alice"),
            accepted: true,
        });
        assert!(err.to_string().starts_with("role: publisher required"));
        d.ok(PlatformEvent::PublishDecided {
            article: ArticleId::from("art"),
            index: 0,
            publisher: UserId::from("bob"),
            accepted: true,
        });
        let record = d.state.article(&ArticleId::from("art")).unwrap();
        assert_eq!(
            record.history.state,
            ArticleState::Published { index: 0 }
        );
    }

    #[test]
    fn a_published_version_cannot_be_requested_again() {
        let mut d = seeded();
        d.ok(PlatformEvent::PublishRequested {
            article: ArticleId::from("art"),
            user: UserId::from("carol"),
            index: 0,
        });
        d.ok(PlatformEvent::PublishDecided {
            article: ArticleId::from("art"),
            index: 0,
            publisher: UserId::from("bob"),
            accepted: true,
        });
        assert_eq!(
            d.err(PlatformEvent::PublishRequested {
                article: ArticleId::from("art"),
                user: UserId::from("carol"),
                index: 0,
            }),
            ValidationError::AlreadyPublished {
                article: ArticleId::from("art"),
                published: 0,
                requested: 0,
            }
        );
        d.ok(save("art", "rust", "carol", 1));
        d.ok(PlatformEvent::PublishRequested {
            article: ArticleId::from("art"),
            user: UserId::from("carol"),
            index: 1,
        });
    }

    #[test]
    fn sequence_numbers_must_be_dense() {
        let mut state = EngineState::new();
        let err = state.apply(5, &register("alice"), &config()).unwrap_err();
        assert_eq!(
            err,
            ValidationError::SequenceGap {
                expected: 1,
                found: 5
            }
        );
    }

    #[test]
    fn state_round_trips_through_serde() {
        let mut d = seeded();
        d.ok(view("art", 0));
        d.ok(vote("art", 0, "bob", VoteDirection::Up));
        let json = serde_json::to_string(&d.state).unwrap();
        let back: EngineState = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d.state);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
