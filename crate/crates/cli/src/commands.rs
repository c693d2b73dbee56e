//! Implementations of the non-server subcommands. Each returns the JSON it
//! wants printed, so `main` owns all terminal output.

use anyhow::{bail, Context};
use merit_core::{
    allocate_bank, parse_ratio, recommend_publish, replay_path, select_versions,
    selection_report, AllocationResult, ArticleId, ArticleState, CommunityId, EngineConfig,
    MilliPoints, SelectionReport, UserId, VersionHistory,
};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

/// Reads a history document from a file, or from stdin when the path is
/// `-`.
fn read_history(path: &Path) -> anyhow::Result<VersionHistory> {
    let raw = if path.as_os_str() == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .context("read history from stdin")?;
        buffer
    } else {
        std::fs::read_to_string(path)
            .with_context(|| format!("read history from {}", path.display()))?
    };
    serde_json::from_str(&raw).context("parse history document")
}

fn to_pretty(value: &impl Serialize) -> anyhow::Result<String> {
    serde_json::to_string_pretty(value).context("serialize output")
}

#[derive(Serialize)]
struct SelectOutput<'a> {
    article: &'a ArticleId,
    community: &'a CommunityId,
    #[serde(flatten)]
    report: &'a SelectionReport,
}

pub fn run_select(history_path: &Path) -> anyhow::Result<String> {
    let history = read_history(history_path)?;
    let report = selection_report(&history)?;
    to_pretty(&SelectOutput {
        article: &history.article,
        community: &history.community,
        report: &report,
    })
}

#[derive(Serialize)]
struct AllocateOutput<'a> {
    article: &'a ArticleId,
    community: &'a CommunityId,
    #[serde(flatten)]
    result: &'a AllocationResult,
}

pub fn run_allocate(
    history_path: &Path,
    epsilon: Option<&str>,
    config_path: Option<&Path>,
) -> anyhow::Result<String> {
    let history = read_history(history_path)?;
    let mut config = EngineConfig::load(config_path)?;
    if let Some(raw) = epsilon {
        config.allocation.epsilon =
            parse_ratio(raw).with_context(|| format!("parse --epsilon {raw}"))?;
    }
    let selection = select_versions(&history)?;
    let result = allocate_bank(&history, &selection, None, &config.allocation)?;
    to_pretty(&AllocateOutput {
        article: &history.article,
        community: &history.community,
        result: &result,
    })
}

pub fn run_review(history_path: &Path, index: usize) -> anyhow::Result<String> {
    let mut history = read_history(history_path)?;
    // A stored pending request must agree with the question; any other state
    // is reviewed hypothetically, as if the request had just come in.
    match history.state {
        ArticleState::PublishRequested { .. } => {}
        _ => {
            if index >= history.versions.len() {
                bail!(
                    "version index {index} out of range (history has {} versions)",
                    history.versions.len()
                );
            }
            history.state = ArticleState::PublishRequested { index };
        }
    }
    let recommendation = recommend_publish(&history, index)?;
    #[derive(Serialize)]
    struct ReviewOutput<'a> {
        article: &'a ArticleId,
        #[serde(flatten)]
        recommendation: &'a merit_core::ReviewRecommendation,
    }
    to_pretty(&ReviewOutput {
        article: &history.article,
        recommendation: &recommendation,
    })
}

#[derive(Serialize)]
struct UserReputation {
    system: MilliPoints,
    platform: MilliPoints,
    communities: BTreeMap<CommunityId, MilliPoints>,
}

#[derive(Serialize)]
struct ArticleSummary {
    community: CommunityId,
    versions: usize,
    state: ArticleState,
}

#[derive(Serialize)]
struct ReplayOutput {
    last_seq: u64,
    users: usize,
    communities: usize,
    reputation: BTreeMap<UserId, UserReputation>,
    articles: BTreeMap<ArticleId, ArticleSummary>,
}

pub fn run_replay(log: &Path, config_path: Option<&Path>) -> anyhow::Result<String> {
    let config = EngineConfig::load(config_path)?;
    let state = replay_path(log, &config)?;
    let reputation = state
        .ledger
        .accounts
        .iter()
        .map(|(user, account)| {
            (
                user.clone(),
                UserReputation {
                    system: account.system_total(),
                    platform: account.platform,
                    communities: account.communities.clone(),
                },
            )
        })
        .collect();
    let articles = state
        .articles
        .iter()
        .map(|(id, record)| {
            (
                id.clone(),
                ArticleSummary {
                    community: record.history.community.clone(),
                    versions: record.history.len(),
                    state: record.history.state,
                },
            )
        })
        .collect();
    to_pretty(&ReplayOutput {
        last_seq: state.last_seq,
        users: state.users.len(),
        communities: state.communities.len(),
        reputation,
        articles,
    })
}
