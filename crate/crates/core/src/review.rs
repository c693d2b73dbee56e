//! Decision support for publishers.
//!
//! The recommendation is mechanical: accept a publish request exactly when
//! the requested version is one of the selected improvements. It is advice,
//! nothing more; the decision event is graded the same way whether or not
//! the publisher follows it.

use crate::domain::{ArticleState, VersionHistory};
use crate::selection::{select_versions, SelectionError, SelectionSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReviewRecommendation {
    pub verdict: Verdict,
    pub requested_index: usize,
    pub selected: SelectionSet,
}

#[derive(Debug, Error)]
pub enum ReviewError {
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error("version index {index} out of range (history has {len} versions)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("article is not awaiting publication (state: {state})")]
    NotRequested { state: String },
    #[error("publish request is for version {pending}, not {requested}")]
    RequestMismatch { pending: usize, requested: usize },
}

/// Recommends a verdict on the pending publish request for
/// `requested_index`. The history must actually be awaiting publication of
/// that version.
pub fn recommend_publish(
    history: &VersionHistory,
    requested_index: usize,
) -> Result<ReviewRecommendation, ReviewError> {
    if requested_index >= history.versions.len() {
        return Err(ReviewError::IndexOutOfRange {
            index: requested_index,
            len: history.versions.len(),
        });
    }
    match history.state {
        ArticleState::PublishRequested { index } if index == requested_index => {}
        ArticleState::PublishRequested { index } => {
            return Err(ReviewError::RequestMismatch {
                pending: index,
                requested: requested_index,
            });
        }
        other => {
            return Err(ReviewError::NotRequested {
                state: other.to_string(),
            });
        }
    }
    let selected = select_versions(history)?;
    let verdict = if selected.contains(requested_index) {
        Verdict::Accept
    } else {
        Verdict::Reject
    };
    Ok(ReviewRecommendation {
        verdict,
        requested_index,
        selected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::VersionStats;
    use crate::ids::UserId;

    fn history(votes: &[(u64, u64)], state: ArticleState) -> VersionHistory {
        let mut h = VersionHistory::new("a", "c");
        for (i, &(up, down)) in votes.iter().enumerate() {
            h.versions.push(VersionStats {
                index: i,
                editor: UserId::from("e"),
                upvotes: up,
                downvotes: down,
                views: up + down,
            });
        }
        h.state = state;
        h
    }

    #[test]
    fn accepts_a_selected_version() {
        let h = history(
            &[(4, 1), (9, 2), (10, 6), (15, 3)],
            ArticleState::PublishRequested { index: 3 },
        );
        let rec = recommend_publish(&h, 3).unwrap();
        assert_eq!(rec.verdict, Verdict::Accept);
        assert_eq!(rec.selected.selected, vec![0, 1, 3]);
    }

    #[test]
    fn rejects_a_version_the_scan_skipped() {
        let h = history(
            &[(4, 1), (9, 2), (10, 6), (15, 3)],
            ArticleState::PublishRequested { index: 2 },
        );
        let rec = recommend_publish(&h, 2).unwrap();
        assert_eq!(rec.verdict, Verdict::Reject);
    }

    #[test]
    fn the_draft_is_always_acceptable() {
        let h = history(&[(0, 0)], ArticleState::PublishRequested { index: 0 });
        assert_eq!(recommend_publish(&h, 0).unwrap().verdict, Verdict::Accept);
    }

    #[test]
    fn only_a_pending_request_can_be_reviewed() {
        let h = history(&[(0, 0)], ArticleState::Draft);
        let err = recommend_publish(&h, 0).unwrap_err();
        assert_eq!(
            err.to_string(),
            "article is not awaiting publication (state: draft)"
        );
    }

    #[test]
    fn the_request_and_the_question_must_agree() {
        let h = history(
            &[(4, 1), (9, 2)],
            ArticleState::PublishRequested { index: 1 },
        );
        let err = recommend_publish(&h, 0).unwrap_err();
        assert!(matches!(
            err,
            ReviewError::RequestMismatch {
                pending: 1,
                requested: 0
            }
        ));
    }

    #[test]
    fn out_of_range_is_an_error_not_a_rejection() {
        let h = history(&[(0, 0)], ArticleState::PublishRequested { index: 0 });
        assert!(matches!(
            recommend_publish(&h, 9),
            Err(ReviewError::IndexOutOfRange { index: 9, len: 1 })
        ));
    }
}
