//! Maps each event to the reputation deltas it is worth.
//!
//! Deltas are computed against the state as it stands before the event
//! mutates anything, so a vote pays the editor of record and a publication
//! pays out over the histories' counters at decision time. Events that carry
//! no award still come through here and produce an empty delta.

use crate::allocation::{allocate_bank, AllocationError};
use crate::config::EngineConfig;
use crate::event::{PlatformEvent, VoteDirection};
use crate::ids::ArticleId;
use crate::ledger::{
    DeltaEntry, DeltaReason, MilliPoints, ReputationDelta, ReputationLedger, ReputationScope,
};
use crate::selection::select_versions;
use crate::state::EngineState;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GradingError {
    #[error("unknown article `{0}`")]
    UnknownArticle(ArticleId),
    #[error("article `{article}` has no version {index}")]
    UnknownVersion { article: ArticleId, index: usize },
    #[error("article `{0}` has no open report")]
    NoOpenReport(ArticleId),
    #[error(transparent)]
    Allocation(#[from] AllocationError),
}

/// Computes the deltas `event` is worth against the pre-event `state`.
pub fn deltas_for_event(
    event: &PlatformEvent,
    state: &EngineState,
    config: &EngineConfig,
) -> Result<ReputationDelta, GradingError> {
    let g = &config.grading;
    let deltas = match event {
        PlatformEvent::UserRegistered { user } => vec![DeltaEntry::new(
            user.clone(),
            ReputationScope::Platform,
            MilliPoints::from_points(g.registration),
            DeltaReason::Registration,
        )],
        PlatformEvent::CommunityCreated {
            community,
            creator,
            approved_by_superadmin,
        } => {
            if *approved_by_superadmin {
                vec![DeltaEntry::new(
                    creator.clone(),
                    ReputationScope::Community(community.clone()),
                    MilliPoints::from_points(g.community_created),
                    DeltaReason::CommunityCreated,
                )]
            } else {
                Vec::new()
            }
        }
        PlatformEvent::CommunityJoined {
            community, user, ..
        } => vec![DeltaEntry::new(
            user.clone(),
            ReputationScope::Community(community.clone()),
            MilliPoints::from_points(g.community_joined),
            DeltaReason::CommunityJoined,
        )],
        PlatformEvent::VersionSaved {
            community, editor, ..
        } => vec![DeltaEntry::new(
            editor.clone(),
            ReputationScope::Community(community.clone()),
            MilliPoints::from_points(g.version_saved),
            DeltaReason::VersionSaved,
        )],
        PlatformEvent::VoteCast {
            article,
            index,
            direction,
            ..
        } => {
            let record = state
                .article(article)
                .ok_or_else(|| GradingError::UnknownArticle(article.clone()))?;
            let version =
                record
                    .history
                    .version(*index)
                    .ok_or_else(|| GradingError::UnknownVersion {
                        article: article.clone(),
                        index: *index,
                    })?;
            let scope = ReputationScope::Community(record.history.community.clone());
            let (amount, reason) = match direction {
                VoteDirection::Up => {
                    (MilliPoints::from_points(g.vote), DeltaReason::Upvote)
                }
                VoteDirection::Down => {
                    (-MilliPoints::from_points(g.vote), DeltaReason::Downvote)
                }
            };
            vec![DeltaEntry::new(
                version.editor.clone(),
                scope,
                amount,
                reason,
            )]
        }
        PlatformEvent::ReportResolved {
            article, approved, ..
        } => {
            let record = state
                .article(article)
                .ok_or_else(|| GradingError::UnknownArticle(article.clone()))?;
            let report = record
                .report
                .as_ref()
                .ok_or_else(|| GradingError::NoOpenReport(article.clone()))?;
            let scope = ReputationScope::Community(record.history.community.clone());
            if *approved {
                let editor = record
                    .history
                    .version(report.index)
                    .ok_or_else(|| GradingError::UnknownVersion {
                        article: article.clone(),
                        index: report.index,
                    })?
                    .editor
                    .clone();
                let mut deltas = vec![
                    DeltaEntry::new(
                        report.reporter.clone(),
                        scope.clone(),
                        MilliPoints::from_points(g.report_upheld),
                        DeltaReason::ReportUpheldReporter,
                    ),
                    DeltaEntry::new(
                        editor,
                        scope.clone(),
                        -MilliPoints::from_points(g.report_upheld),
                        DeltaReason::ReportUpheldEditor,
                    ),
                ];
                // The publisher answers for it only if the article actually
                // carries a publication of record.
                if let Some(publication) = &record.published {
                    deltas.push(DeltaEntry::new(
                        publication.publisher.clone(),
                        scope,
                        -MilliPoints::from_points(g.report_upheld),
                        DeltaReason::ReportUpheldPublisher,
                    ));
                }
                deltas
            } else {
                vec![DeltaEntry::new(
                    report.reporter.clone(),
                    scope,
                    -MilliPoints::from_points(g.report_rejected),
                    DeltaReason::ReportRejectedReporter,
                )]
            }
        }
        PlatformEvent::PublishDecided {
            article,
            publisher,
            accepted: true,
            ..
        } => {
            let record = state
                .article(article)
                .ok_or_else(|| GradingError::UnknownArticle(article.clone()))?;
            let scope = ReputationScope::Community(record.history.community.clone());
            let selection = select_versions(&record.history)
                .map_err(AllocationError::from)?;
            let result = allocate_bank(
                &record.history,
                &selection,
                Some(publisher.clone()),
                &config.allocation,
            )?;
            let mut deltas = Vec::new();
            for (&index, &amount) in &result.per_version {
                deltas.push(DeltaEntry::new(
                    record.history.versions[index].editor.clone(),
                    scope.clone(),
                    amount,
                    DeltaReason::PublicationVersionShare,
                ));
            }
            deltas.push(DeltaEntry::new(
                publisher.clone(),
                scope,
                result.publisher_share,
                DeltaReason::PublicationPublisherShare,
            ));
            deltas
        }
        PlatformEvent::ViewRecorded { .. }
        | PlatformEvent::ReportFiled { .. }
        | PlatformEvent::PublishRequested { .. }
        | PlatformEvent::PublishDecided {
            accepted: false, ..
        } => Vec::new(),
    };
    Ok(deltas)
}

/// Pure form: the graded ledger for `event`, leaving the input untouched.
pub fn apply_event(
    ledger: &ReputationLedger,
    event: &PlatformEvent,
    state: &EngineState,
    config: &EngineConfig,
) -> Result<ReputationLedger, GradingError> {
    let deltas = deltas_for_event(event, state, config)?;
    Ok(ledger.with_delta(&deltas))
}
