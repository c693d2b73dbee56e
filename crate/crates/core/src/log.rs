//! The append-only event log and its snapshots.
//!
//! One JSON record per line, sequence numbers dense from 1. Appends are
//! validated against the current state first; a rejected event never reaches
//! the file. Snapshots sit next to the log as `<log>.snapshot-<seq>.json`
//! and only shorten recovery, the log alone is always enough.

use crate::config::EngineConfig;
use crate::event::{EventRecord, PlatformEvent};
use crate::ledger::ReputationDelta;
use crate::state::{EngineState, ValidationError};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LogError {
    #[error("cannot access log {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("corrupt record at line {line}: {reason}")]
    CorruptRecord { line: usize, reason: String },
    #[error("line {line}: sequence {found} where {expected} was expected")]
    OutOfOrder {
        line: usize,
        expected: u64,
        found: u64,
    },
    #[error("line {line} (seq {seq}) rejected during replay: {source}")]
    Rejected {
        line: usize,
        seq: u64,
        source: ValidationError,
    },
    #[error("snapshot {path}: {reason}")]
    BadSnapshot { path: PathBuf, reason: String },
}

#[derive(Debug, Error)]
pub enum AppendError {
    #[error("validation rejected: {0}")]
    Rejected(#[from] ValidationError),
    #[error("cannot write log: {0}")]
    Io(#[from] std::io::Error),
}

/// A point-in-time copy of the engine state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub seq: u64,
    pub state: EngineState,
}

impl Snapshot {
    pub fn capture(state: &EngineState) -> Snapshot {
        Snapshot {
            seq: state.last_seq,
            state: state.clone(),
        }
    }

    pub fn write_to(&self, path: &Path) -> Result<(), std::io::Error> {
        let mut file = File::create(path)?;
        serde_json::to_writer(&mut file, self)?;
        file.sync_data()
    }

    pub fn read_from(path: &Path) -> Result<Snapshot, LogError> {
        let raw = std::fs::read_to_string(path).map_err(|source| LogError::Io {
            path: path.to_owned(),
            source,
        })?;
        let snapshot: Snapshot =
            serde_json::from_str(&raw).map_err(|e| LogError::BadSnapshot {
                path: path.to_owned(),
                reason: e.to_string(),
            })?;
        if snapshot.seq != snapshot.state.last_seq {
            return Err(LogError::BadSnapshot {
                path: path.to_owned(),
                reason: format!(
                    "seq {} disagrees with state.last_seq {}",
                    snapshot.seq, snapshot.state.last_seq
                ),
            });
        }
        Ok(snapshot)
    }
}

fn snapshot_path(log: &Path, seq: u64) -> PathBuf {
    let mut name = log.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".snapshot-{seq}.json"));
    log.with_file_name(name)
}

/// Snapshots found next to `log`, newest first.
fn find_snapshots(log: &Path) -> Vec<(u64, PathBuf)> {
    let parent = match log.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let Some(stem) = log.file_name().and_then(|n| n.to_str()) else {
        return Vec::new();
    };
    let prefix = format!("{stem}.snapshot-");
    let Ok(entries) = std::fs::read_dir(parent) else {
        return Vec::new();
    };
    let mut found: Vec<(u64, PathBuf)> = entries
        .flatten()
        .filter_map(|entry| {
            let name = entry.file_name();
            let name = name.to_str()?;
            let seq: u64 = name
                .strip_prefix(&prefix)?
                .strip_suffix(".json")?
                .parse()
                .ok()?;
            Some((seq, entry.path()))
        })
        .collect();
    found.sort_by(|a, b| b.0.cmp(&a.0));
    found
}

/// Parses one log line, reporting the 1-based line number on failure.
fn parse_line(line_number: usize, line: &str) -> Result<EventRecord, LogError> {
    serde_json::from_str(line).map_err(|e| LogError::CorruptRecord {
        line: line_number,
        reason: e.to_string(),
    })
}

/// Replays a whole log file from scratch under the given config.
pub fn replay_path(path: &Path, config: &EngineConfig) -> Result<EngineState, LogError> {
    let file = File::open(path).map_err(|source| LogError::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut state = EngineState::new();
    fold_lines(&mut state, BufReader::new(file), config, path)?;
    Ok(state)
}

/// Streams lines into `state`, skipping records at or below the state's
/// current sequence number and applying the rest.
fn fold_lines(
    state: &mut EngineState,
    reader: impl BufRead,
    config: &EngineConfig,
    path: &Path,
) -> Result<(), LogError> {
    for (i, line) in reader.lines().enumerate() {
        let line_number = i + 1;
        let line = line.map_err(|source| LogError::Io {
            path: path.to_owned(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record = parse_line(line_number, &line)?;
        let expected = line_number as u64;
        if record.seq != expected {
            return Err(LogError::OutOfOrder {
                line: line_number,
                expected,
                found: record.seq,
            });
        }
        if record.seq <= state.last_seq {
            continue;
        }
        state
            .apply(record.seq, &record.event, config)
            .map_err(|source| LogError::Rejected {
                line: line_number,
                seq: record.seq,
                source,
            })?;
    }
    Ok(())
}

/// An open event log with its replayed state held in memory.
pub struct EventStore {
    path: PathBuf,
    file: File,
    config: EngineConfig,
    state: EngineState,
}

impl EventStore {
    /// Opens `path`, creating it if missing, and restores the state from the
    /// newest usable snapshot plus the log suffix. Unreadable snapshots are
    /// skipped; the log itself is the source of truth.
    pub fn open(path: impl Into<PathBuf>, config: EngineConfig) -> Result<EventStore, LogError> {
        let path = path.into();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|source| LogError::Io {
                path: path.clone(),
                source,
            })?;

        let mut state = EngineState::new();
        for (_, snapshot_file) in find_snapshots(&path) {
            match Snapshot::read_from(&snapshot_file) {
                Ok(snapshot) => {
                    state = snapshot.state;
                    break;
                }
                Err(_) => continue,
            }
        }

        let reader = File::open(&path).map_err(|source| LogError::Io {
            path: path.clone(),
            source,
        })?;
        fold_lines(&mut state, BufReader::new(reader), &config, &path)?;

        Ok(EventStore {
            path,
            file,
            config,
            state,
        })
    }

    pub fn state(&self) -> &EngineState {
        &self.state
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Validates, persists, then applies one event. The write is synced
    /// before the state changes, so an acknowledged event is on disk. A
    /// snapshot is dropped beside the log at every configured interval.
    pub fn append(
        &mut self,
        event: PlatformEvent,
        ts: Option<DateTime<Utc>>,
    ) -> Result<AppendOutcome, AppendError> {
        self.state.validate(&event)?;
        let seq = self.state.last_seq + 1;
        let record = EventRecord {
            seq,
            ts: ts.unwrap_or_else(Utc::now),
            event,
        };
        let mut line = serde_json::to_string(&record)
            .expect("event records always serialize");
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.sync_data()?;
        let deltas = self.state.apply(seq, &record.event, &self.config)?;
        if seq % self.config.service.snapshot_interval == 0 {
            Snapshot::capture(&self.state).write_to(&snapshot_path(&self.path, seq))?;
        }
        Ok(AppendOutcome { seq, deltas })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppendOutcome {
    pub seq: u64,
    pub deltas: ReputationDelta,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::UserId;
    use crate::ledger::MilliPoints;

    fn register(user: &str) -> PlatformEvent {
        PlatformEvent::UserRegistered {
            user: UserId::from(user),
        }
    }

    #[test]
    fn append_then_reopen_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("events.log");
        let mut store = EventStore::open(&log, EngineConfig::default()).unwrap();
        let outcome = store.append(register("alice"), None).unwrap();
        assert_eq!(outcome.seq, 1);
        assert_eq!(outcome.deltas.len(), 1);
        store.append(register("bob"), None).unwrap();
        let before = serde_json::to_string(store.state()).unwrap();
        drop(store);

        let reopened = EventStore::open(&log, EngineConfig::default()).unwrap();
        assert_eq!(serde_json::to_string(reopened.state()).unwrap(), before);
        assert_eq!(
            reopened
                .state()
                .ledger
                .system_reputation(&UserId::from("alice")),
            MilliPoints(25_000)
        );
    }

    #[test]
    fn rejected_events_never_touch_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("events.log");
        let mut store = EventStore::open(&log, EngineConfig::default()).unwrap();
        store.append(register("alice"), None).unwrap();
        let err = store.append(register("alice"), None).unwrap_err();
        assert!(matches!(err, AppendError::Rejected(_)));
        let contents = std::fs::read_to_string(&log).unwrap();
        assert_eq!(contents.lines().count(), 1);
        assert_eq!(store.state().last_seq, 1);
    }

    #[test]
    fn snapshots_appear_on_the_interval() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("events.log");
        let mut config = EngineConfig::default();
        config.service.snapshot_interval = 2;
        let mut store = EventStore::open(&log, config.clone()).unwrap();
        for name in ["a", "b", "c", "d", "e"] {
            store.append(register(name), None).unwrap();
        }
        let snapshots = find_snapshots(&log);
        assert_eq!(
            snapshots.iter().map(|(seq, _)| *seq).collect::<Vec<_>>(),
            vec![4, 2]
        );
        let snapshot = Snapshot::read_from(&snapshots[0].1).unwrap();
        assert_eq!(snapshot.seq, 4);

        // Recovery from snapshot plus suffix matches a cold replay.
        let warm = EventStore::open(&log, config.clone()).unwrap();
        let cold = replay_path(&log, &config).unwrap();
        assert_eq!(
            serde_json::to_string(warm.state()).unwrap(),
            serde_json::to_string(&cold).unwrap()
        );
    }

    #[test]
    fn a_corrupt_snapshot_is_ignored_in_favor_of_the_log() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("events.log");
        let mut config = EngineConfig::default();
        config.service.snapshot_interval = 2;
        let mut store = EventStore::open(&log, config.clone()).unwrap();
        for name in ["a", "b", "c"] {
            store.append(register(name), None).unwrap();
        }
        drop(store);
        let snapshot_file = snapshot_path(&log, 2);
        std::fs::write(&snapshot_file, "{torn write").unwrap();
        let store = EventStore::open(&log, config).unwrap();
        assert_eq!(store.state().last_seq, 3);
        assert!(store.state().users.contains(&UserId::from("c")));
    }

    #[test]
    fn corrupt_lines_name_the_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("events.log");
        let mut store = EventStore::open(&log, EngineConfig::default()).unwrap();
        store.append(register("alice"), None).unwrap();
        drop(store);
        let mut contents = std::fs::read_to_string(&log).unwrap();
        contents.push_str("{not json\n");
        std::fs::write(&log, contents).unwrap();
        let err = replay_path(&log, &EngineConfig::default()).unwrap_err();
        assert!(matches!(err, LogError::CorruptRecord { line: 2, .. }));
    }

    #[test]
    fn replaying_twice_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("events.log");
        let mut store = EventStore::open(&log, EngineConfig::default()).unwrap();
        for name in ["a", "b", "c"] {
            store.append(register(name), None).unwrap();
        }
        drop(store);
        let config = EngineConfig::default();
        let first = replay_path(&log, &config).unwrap();
        let second = replay_path(&log, &config).unwrap();
        assert_eq!(
            serde_json::to_string(&first).unwrap(),
            serde_json::to_string(&second).unwrap()
        );
    }

    #[test]
    fn sequence_gaps_fail_the_replay() {
        let dir = tempfile::tempdir().unwrap();
        let log = dir.path().join("events.log");
        std::fs::write(
            &log,
            "{\"seq\":2,\"ts\":\"2024-01-01T00:00:00Z\",\"kind\":\"user_registered\",\"payload\":{\"user\":\"a\"}}\n",
        )
        .unwrap();
        let err = replay_path(&log, &EngineConfig::default()).unwrap_err();
        assert!(matches!(
            err,
            LogError::OutOfOrder {
                line: 1,
                expected: 1,
                found: 2
            }
        ));
    }
}
