//! Deterministic reputation engine for collaborative article publishing.
//!
//! Communities host articles that evolve through saved versions; readers
//! view and vote, publishers decide publication, admins rule on reports.
//! Every action arrives as an event in an append-only log. This crate
//! replays those logs into exact integer balances: a greedy scan picks the
//! versions that genuinely improved an article, a minted point bank is
//! split over those versions and the publisher, and a fixed grading table
//! prices everything else. All arithmetic is integer or exact rational, so
//! any two replays of the same log agree to the last milli-point.

pub mod allocation;
pub mod config;
pub mod domain;
pub mod event;
pub mod grading;
pub mod ids;
pub mod ledger;
pub mod log;
pub mod rational;
pub mod review;
pub mod selection;
pub mod state;

pub use allocation::{
    allocate_bank, classify_version, engagement_ratio, AllocationError, AllocationResult,
    EngagementClass, PointBank,
};
pub use config::{
    AllocationConfig, ConfigError, EngineConfig, GradingConfig, ServiceConfig,
};
pub use domain::{
    validate_history, ArticleState, HistoryViolation, Role, ValidationReport, VersionHistory,
    VersionStats,
};
pub use event::{EventRecord, PlatformEvent, VoteDirection};
pub use grading::{apply_event, deltas_for_event, GradingError};
pub use ids::{ArticleId, CommunityId, GroupId, UserId};
pub use ledger::{
    DeltaEntry, DeltaReason, MilliPoints, ReputationDelta, ReputationLedger, ReputationScope,
    UserAccount,
};
pub use log::{replay_path, AppendError, AppendOutcome, EventStore, LogError, Snapshot};
pub use rational::{parse_ratio, Rational, RatioParseError};
pub use review::{recommend_publish, ReviewError, ReviewRecommendation, Verdict};
pub use selection::{
    improvement_factor, is_selected, select_versions, selection_report, ImprovementFactor,
    SelectionError, SelectionReport, SelectionSet, SelectionStep,
};
pub use state::{
    ArticleRecord, Community, EngineState, OpenReport, Publication, ValidationError,
};
