//! Deterministic workload generators.
//!
//! Both generators run off a seeded ChaCha stream, so the same seed always
//! produces the same histories and the same event logs. The benchmarks use
//! them for stable inputs; the integration harnesses use them for bulk
//! randomized checks.

use chrono::DateTime;
use merit_core::{
    ArticleId, CommunityId, EngineConfig, EngineState, EventRecord, PlatformEvent, Role, UserId,
    VersionHistory, VersionStats, VoteDirection,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use rand;

/// The stream every generator draws from.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A structurally valid history with 1 to `max_len` versions. Vote counts
/// never exceed views, and editors rotate through a small pool so several
/// versions can share one editor.
pub fn random_history(rng: &mut impl Rng, max_len: usize, max_views: u64) -> VersionHistory {
    let len = rng.random_range(1..=max_len.max(1));
    let mut history = VersionHistory::new("art", "community");
    for index in 0..len {
        let views = rng.random_range(0..=max_views);
        let votes = if views == 0 {
            0
        } else {
            rng.random_range(0..=views)
        };
        let upvotes = if votes == 0 {
            0
        } else {
            rng.random_range(0..=votes)
        };
        history.versions.push(VersionStats {
            index,
            editor: UserId::from(format!("editor-{}", rng.random_range(0..8u8))),
            upvotes,
            downvotes: votes - upvotes,
            views,
        });
    }
    history
}

fn timestamp(seq: u64) -> DateTime<chrono::Utc> {
    DateTime::from_timestamp(1_700_000_000 + seq as i64, 0).unwrap()
}

const REGISTER: u32 = 6;
const CREATE_COMMUNITY: u32 = 3;
const JOIN: u32 = 10;
const SAVE: u32 = 14;
const VIEW: u32 = 28;
const VOTE: u32 = 16;
const REPORT: u32 = 4;
const RESOLVE: u32 = 5;
const REQUEST: u32 = 7;
const DECIDE: u32 = 7;
const TOTAL_WEIGHT: u32 = REGISTER
    + CREATE_COMMUNITY
    + JOIN
    + SAVE
    + VIEW
    + VOTE
    + REPORT
    + RESOLVE
    + REQUEST
    + DECIDE;

/// Streams valid events by proposing weighted random actions against a live
/// state and keeping the ones the engine accepts. Registration of a fresh
/// user is always valid, so the stream never stalls.
pub struct EventScript {
    rng: ChaCha8Rng,
    config: EngineConfig,
    state: EngineState,
    users: Vec<UserId>,
    communities: Vec<CommunityId>,
    articles: Vec<ArticleId>,
    next_user: usize,
    next_community: usize,
    next_article: usize,
}

impl EventScript {
    pub fn new(seed: u64, config: EngineConfig) -> Self {
        Self {
            rng: rng(seed),
            config,
            state: EngineState::new(),
            users: Vec::new(),
            communities: Vec::new(),
            articles: Vec::new(),
            next_user: 0,
            next_community: 0,
            next_article: 0,
        }
    }

    /// The state after everything generated so far.
    pub fn state(&self) -> &EngineState {
        &self.state
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn pick<T: Clone>(&mut self, items: &[T]) -> Option<T> {
        if items.is_empty() {
            None
        } else {
            Some(items[self.rng.random_range(0..items.len())].clone())
        }
    }

    fn members_of(&self, community: &CommunityId, role: Option<Role>) -> Vec<UserId> {
        self.state
            .community(community)
            .map(|c| {
                c.members
                    .iter()
                    .filter(|(_, r)| role.is_none_or(|wanted| **r == wanted))
                    .map(|(user, _)| user.clone())
                    .collect()
            })
            .unwrap_or_default()
    }

    fn fresh_user(&mut self) -> PlatformEvent {
        let user = UserId::from(format!("u{}", self.next_user));
        self.next_user += 1;
        PlatformEvent::UserRegistered { user }
    }

    fn propose(&mut self) -> Option<PlatformEvent> {
        let roll = self.rng.random_range(0..TOTAL_WEIGHT);
        let mut bar = REGISTER;
        if roll < bar {
            return Some(self.fresh_user());
        }
        bar += CREATE_COMMUNITY;
        if roll < bar {
            let users = self.users.clone();
            let creator = self.pick(&users)?;
            let community = CommunityId::from(format!("c{}", self.next_community));
            self.next_community += 1;
            return Some(PlatformEvent::CommunityCreated {
                community,
                creator,
                approved_by_superadmin: self.rng.random_bool(0.85),
            });
        }
        bar += JOIN;
        if roll < bar {
            let users = self.users.clone();
            let communities = self.communities.clone();
            let user = self.pick(&users)?;
            let community = self.pick(&communities)?;
            let role = match self.rng.random_range(0..10u8) {
                0 => Role::CommunityAdmin,
                1 | 2 => Role::Publisher,
                _ => Role::Author,
            };
            return Some(PlatformEvent::CommunityJoined {
                community,
                user,
                role,
            });
        }
        bar += SAVE;
        if roll < bar {
            if !self.articles.is_empty() && self.rng.random_bool(0.7) {
                let articles = self.articles.clone();
                let article = self.pick(&articles)?;
                let record = self.state.article(&article)?;
                let community = record.history.community.clone();
                let index = record.history.len();
                let members = self.members_of(&community, None);
                let editor = self.pick(&members)?;
                return Some(PlatformEvent::VersionSaved {
                    article,
                    community,
                    editor,
                    index,
                });
            }
            let communities = self.communities.clone();
            let community = self.pick(&communities)?;
            let members = self.members_of(&community, None);
            let editor = self.pick(&members)?;
            let article = ArticleId::from(format!("a{}", self.next_article));
            self.next_article += 1;
            return Some(PlatformEvent::VersionSaved {
                article,
                community,
                editor,
                index: 0,
            });
        }
        bar += VIEW;
        if roll < bar {
            let articles = self.articles.clone();
            let article = self.pick(&articles)?;
            let len = self.state.article(&article)?.history.len();
            let index = self.rng.random_range(0..len);
            return Some(PlatformEvent::ViewRecorded { article, index });
        }
        bar += VOTE;
        if roll < bar {
            let users = self.users.clone();
            let articles = self.articles.clone();
            let voter = self.pick(&users)?;
            let article = self.pick(&articles)?;
            let len = self.state.article(&article)?.history.len();
            let index = self.rng.random_range(0..len);
            let direction = if self.rng.random_bool(0.7) {
                VoteDirection::Up
            } else {
                VoteDirection::Down
            };
            return Some(PlatformEvent::VoteCast {
                article,
                index,
                voter,
                direction,
            });
        }
        bar += REPORT;
        if roll < bar {
            let users = self.users.clone();
            let articles = self.articles.clone();
            let reporter = self.pick(&users)?;
            let article = self.pick(&articles)?;
            let len = self.state.article(&article)?.history.len();
            let index = self.rng.random_range(0..len);
            return Some(PlatformEvent::ReportFiled {
                article,
                index,
                reporter,
                reason: "flagged by generator".to_owned(),
            });
        }
        bar += RESOLVE;
        if roll < bar {
            let articles = self.articles.clone();
            let article = self.pick(&articles)?;
            let record = self.state.article(&article)?;
            record.report.as_ref()?;
            let community = record.history.community.clone();
            let admins = self.members_of(&community, Some(Role::CommunityAdmin));
            let admin = self.pick(&admins)?;
            let approved = self.rng.random_bool(0.5);
            return Some(PlatformEvent::ReportResolved {
                article,
                admin,
                approved,
            });
        }
        bar += REQUEST;
        if roll < bar {
            let users = self.users.clone();
            let articles = self.articles.clone();
            let user = self.pick(&users)?;
            let article = self.pick(&articles)?;
            let record = self.state.article(&article)?;
            let floor = record.published.as_ref().map_or(0, |p| p.index + 1);
            let len = record.history.len();
            if floor >= len {
                return None;
            }
            let index = self.rng.random_range(floor..len);
            return Some(PlatformEvent::PublishRequested {
                article,
                user,
                index,
            });
        }
        let articles = self.articles.clone();
        let article = self.pick(&articles)?;
        let record = self.state.article(&article)?;
        let index = record.pending_request?;
        let community = record.history.community.clone();
        let publishers = self.members_of(&community, Some(Role::Publisher));
        let publisher = self.pick(&publishers)?;
        let accepted = self.rng.random_bool(0.6);
        Some(PlatformEvent::PublishDecided {
            article,
            index,
            publisher,
            accepted,
        })
    }

    /// The next accepted event, already applied to the internal state.
    pub fn next_event(&mut self) -> EventRecord {
        for _ in 0..64 {
            let Some(event) = self.propose() else {
                continue;
            };
            let seq = self.state.last_seq + 1;
            if self.state.apply(seq, &event, &self.config).is_ok() {
                self.track(&event);
                return EventRecord {
                    seq,
                    ts: timestamp(seq),
                    event,
                };
            }
        }
        // Nothing random stuck; registering a fresh user always does.
        let event = self.fresh_user();
        let seq = self.state.last_seq + 1;
        self.state
            .apply(seq, &event, &self.config)
            .expect("registering a fresh user is always valid");
        self.track(&event);
        EventRecord {
            seq,
            ts: timestamp(seq),
            event,
        }
    }

    fn track(&mut self, event: &PlatformEvent) {
        match event {
            PlatformEvent::UserRegistered { user } => self.users.push(user.clone()),
            PlatformEvent::CommunityCreated {
                community,
                approved_by_superadmin: true,
                ..
            } => self.communities.push(community.clone()),
            PlatformEvent::VersionSaved {
                article, index: 0, ..
            } => {
                self.articles.push(article.clone());
            }
            _ => {}
        }
    }

    /// The next `n` accepted events.
    pub fn take(&mut self, n: usize) -> Vec<EventRecord> {
        (0..n).map(|_| self.next_event()).collect()
    }
}

/// Replays records into a fresh state, panicking on any rejection. The
/// records must be dense from seq 1, as produced by [`EventScript::take`].
pub fn fold_records(records: &[EventRecord], config: &EngineConfig) -> EngineState {
    let mut state = EngineState::new();
    for record in records {
        state
            .apply(record.seq, &record.event, config)
            .unwrap_or_else(|e| panic!("record {} must apply: {e}", record.seq));
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histories_are_valid_and_seed_stable() {
        let mut a = rng(7);
        let mut b = rng(7);
        for _ in 0..200 {
            let first = random_history(&mut a, 40, 100);
            let second = random_history(&mut b, 40, 100);
            assert_eq!(first, second);
            assert!(merit_core::validate_history(&first).is_ok());
        }
    }

    #[test]
    fn scripts_are_seed_stable_and_apply_cleanly() {
        let mut first = EventScript::new(42, EngineConfig::default());
        let mut second = EventScript::new(42, EngineConfig::default());
        let a = first.take(400);
        let b = second.take(400);
        assert_eq!(a, b);
        let folded = fold_records(&a, &EngineConfig::default());
        assert_eq!(&folded, first.state());
    }

    #[test]
    fn scripts_reach_every_event_kind() {
        let mut script = EventScript::new(3, EngineConfig::default());
        let records = script.take(3000);
        let mut kinds = std::collections::BTreeSet::new();
        for record in &records {
            kinds.insert(match record.event {
                PlatformEvent::UserRegistered { .. } => "register",
                PlatformEvent::CommunityCreated { .. } => "create",
                PlatformEvent::CommunityJoined { .. } => "join",
                PlatformEvent::VersionSaved { .. } => "save",
                PlatformEvent::VoteCast { .. } => "vote",
                PlatformEvent::ViewRecorded { .. } => "view",
                PlatformEvent::ReportFiled { .. } => "report",
                PlatformEvent::ReportResolved { .. } => "resolve",
                PlatformEvent::PublishRequested { .. } => "request",
                PlatformEvent::PublishDecided { .. } => "decide",
            });
        }
        assert_eq!(kinds.len(), 10, "saw only: {kinds:?}");
    }
}
