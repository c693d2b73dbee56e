//! Picks the versions that genuinely improved an article.
//!
//! The scan is greedy: the original draft is always in, and each later
//! version joins when it strictly gains upvotes over the last selected
//! version and that gain outweighs the shift in downvotes. Once a version is
//! selected it becomes the baseline for everything after it, so the selected
//! upvote counts are strictly increasing.

use crate::domain::{validate_history, ValidationReport, VersionHistory, VersionStats};
use crate::rational::Rational;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Upvote gain relative to downvote shift, kept exact.
///
/// `PositiveInfinite` is the degenerate case: upvotes grew while downvotes
/// did not move at all. It beats every threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImprovementFactor {
    Finite(Rational),
    PositiveInfinite,
}

impl ImprovementFactor {
    /// The selection threshold: strictly greater than one.
    pub fn exceeds_one(&self) -> bool {
        match self {
            ImprovementFactor::Finite(ratio) => *ratio > Rational::from_integer(1),
            ImprovementFactor::PositiveInfinite => true,
        }
    }
}

impl fmt::Display for ImprovementFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImprovementFactor::Finite(ratio) => write!(f, "{ratio}"),
            ImprovementFactor::PositiveInfinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ImprovementFactor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Improvement of `candidate` over `baseline`, or `None` when the candidate
/// does not strictly gain upvotes and is therefore no improvement at all.
pub fn improvement_factor(
    candidate: &VersionStats,
    baseline: &VersionStats,
) -> Option<ImprovementFactor> {
    if candidate.upvotes <= baseline.upvotes {
        return None;
    }
    let gain = candidate.upvotes - baseline.upvotes;
    let shift = baseline.downvotes.abs_diff(candidate.downvotes);
    if shift == 0 {
        Some(ImprovementFactor::PositiveInfinite)
    } else {
        Some(ImprovementFactor::Finite(Rational::new(gain, shift)))
    }
}

/// The version indices judged to be genuine improvements, in ascending
/// order. Index 0 is always present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct SelectionSet {
    pub selected: Vec<usize>,
}

impl SelectionSet {
    pub fn contains(&self, index: usize) -> bool {
        self.selected.binary_search(&index).is_ok()
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.selected.iter().copied()
    }
}

/// Why one version made it in: the baseline it was compared against and the
/// numbers behind its factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionStep {
    pub index: usize,
    pub baseline: usize,
    pub upvote_gain: u64,
    pub downvote_shift: u64,
    pub factor: ImprovementFactor,
}

/// A selection set together with the evidence for each pick after the draft.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionReport {
    pub selected: SelectionSet,
    pub evidence: Vec<SelectionStep>,
}

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("invalid history: {0}")]
    InvalidHistory(ValidationReport),
    #[error("version index {index} out of range (history has {len} versions)")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Runs the greedy scan over a validated history.
pub fn selection_report(history: &VersionHistory) -> Result<SelectionReport, SelectionError> {
    let report = validate_history(history);
    if !report.is_ok() {
        return Err(SelectionError::InvalidHistory(report));
    }
    let versions = &history.versions;
    let mut selected = vec![0usize];
    let mut evidence = Vec::new();
    let mut last = 0usize;
    for index in 1..versions.len() {
        let candidate = &versions[index];
        let baseline = &versions[last];
        let Some(factor) = improvement_factor(candidate, baseline) else {
            continue;
        };
        if !factor.exceeds_one() {
            continue;
        }
        evidence.push(SelectionStep {
            index,
            baseline: last,
            upvote_gain: candidate.upvotes - baseline.upvotes,
            downvote_shift: baseline.downvotes.abs_diff(candidate.downvotes),
            factor,
        });
        selected.push(index);
        last = index;
    }
    Ok(SelectionReport {
        selected: SelectionSet { selected },
        evidence,
    })
}

/// The selection set alone, for callers that do not need the evidence.
pub fn select_versions(history: &VersionHistory) -> Result<SelectionSet, SelectionError> {
    selection_report(history).map(|report| report.selected)
}

/// Whether `index` survives the scan. Errors on out-of-range indices rather
/// than answering "no" for a version that does not exist.
pub fn is_selected(history: &VersionHistory, index: usize) -> Result<bool, SelectionError> {
    if index >= history.versions.len() {
        return Err(SelectionError::IndexOutOfRange {
            index,
            len: history.versions.len(),
        });
    }
    Ok(select_versions(history)?.contains(index))
}
