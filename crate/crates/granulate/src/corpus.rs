//! Corpus ingestion and filtering: JSONL records in, per-user timelines out.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tokenizer::{is_url_token, tokenize};

/// One JSONL corpus record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub user_id: String,
    pub group: String,
    pub timestamp: String,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
}

/// One utterance inside a timeline. `timestamp_raw` preserves the input
/// formatting so filtered corpora round-trip byte-identically.
#[derive(Debug, Clone)]
pub struct Utterance {
    pub timestamp: DateTime<Utc>,
    pub timestamp_raw: String,
    pub text: String,
    pub lang: Option<String>,
    /// 1-based line number in the source file; keys sidecar lookups.
    pub line_no: usize,
}

/// A user's temporally ordered utterances plus filter bookkeeping.
#[derive(Debug, Clone)]
pub struct UserTimeline {
    pub user_id: String,
    pub group: String,
    pub utterances: Vec<Utterance>,
    pub n_raw: usize,
    pub n_kept: usize,
}

/// Which upper-bound rule to apply when dropping very prolific users.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBoundRule {
    None,
    /// Drop users above Q3 + 1.5×IQR of the control group's post counts.
    Q3Plus1p5IqrOfControl,
}

#[derive(Debug, Clone)]
pub struct CorpusFilterConfig {
    pub english_only: bool,
    pub drop_urls: bool,
    pub drop_retweets: bool,
    /// Drop exact duplicate (timestamp, text) posts within a user. Off by
    /// default.
    pub dedup: bool,
    pub min_posts: usize,
    pub upper_bound_rule: UpperBoundRule,
    pub control_label: String,
}

impl Default for CorpusFilterConfig {
    fn default() -> Self {
        CorpusFilterConfig {
            english_only: true,
            drop_urls: true,
            drop_retweets: true,
            dedup: false,
            min_posts: 100,
            upper_bound_rule: UpperBoundRule::Q3Plus1p5IqrOfControl,
            control_label: "control".to_string(),
        }
    }
}

/// Ingestion statistics: malformed lines are counted and reported, never
/// silently dropped past the error budget.
#[derive(Debug, Default, Clone)]
pub struct LoadReport {
    pub lines: usize,
    pub malformed: usize,
    pub malformed_samples: Vec<(usize, String)>,
    pub duplicate_posts: usize,
}

/// Default malformed-line budget: abort when more than 1% of lines fail.
pub const DEFAULT_ERROR_BUDGET: f64 = 0.01;

pub fn load_corpus(path: &Path) -> Result<(Vec<UserTimeline>, LoadReport)> {
    load_corpus_with_budget(path, DEFAULT_ERROR_BUDGET)
}

/// Loads a JSONL corpus into per-user timelines, time-sorted with stable tie
/// order. Returns one timeline per distinct user, sorted by user id.
pub fn load_corpus_with_budget(
    path: &Path,
    error_budget: f64,
) -> Result<(Vec<UserTimeline>, LoadReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);

    let mut report = LoadReport::default();
    let mut users: BTreeMap<String, (String, Vec<Utterance>)> = BTreeMap::new();
    let mut seen: HashSet<(String, i64, String)> = HashSet::new();

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        report.lines += 1;
        let parsed: std::result::Result<CorpusRecord, String> = serde_json::from_str(&line)
            .map_err(|e| e.to_string())
            .and_then(|rec: CorpusRecord| {
                if rec.text.trim().is_empty() {
                    return Err("text is empty after trimming".to_string());
                }
                Ok(rec)
            });
        let rec = match parsed {
            Ok(rec) => rec,
            Err(msg) => {
                report.malformed += 1;
                if report.malformed_samples.len() < 20 {
                    report.malformed_samples.push((line_no, msg));
                }
                continue;
            }
        };
        let ts = match DateTime::parse_from_rfc3339(&rec.timestamp) {
            Ok(t) => t.with_timezone(&Utc),
            Err(e) => {
                report.malformed += 1;
                if report.malformed_samples.len() < 20 {
                    report
                        .malformed_samples
                        .push((line_no, format!("bad timestamp {:?}: {e}", rec.timestamp)));
                }
                continue;
            }
        };
        if !seen.insert((rec.user_id.clone(), ts.timestamp(), rec.text.clone())) {
            report.duplicate_posts += 1;
            log::warn!(
                "{}:{line_no}: duplicate (user_id, timestamp, text) triplet for user {}",
                path.display(),
                rec.user_id
            );
        }
        let entry = users
            .entry(rec.user_id.clone())
            .or_insert_with(|| (rec.group.clone(), Vec::new()));
        if entry.0 != rec.group {
            return Err(Error::Data(format!(
                "{}:{line_no}: user {} appears with conflicting groups {:?} and {:?}",
                path.display(),
                rec.user_id,
                entry.0,
                rec.group
            )));
        }
        entry.1.push(Utterance {
            timestamp: ts,
            timestamp_raw: rec.timestamp,
            text: rec.text,
            lang: rec.lang,
            line_no,
        });
    }

    if report.lines > 0 && (report.malformed as f64) > error_budget * (report.lines as f64) {
        return Err(Error::Data(format!(
            "{}: {} of {} lines malformed, over the {:.2}% budget; first errors: {:?}",
            path.display(),
            report.malformed,
            report.lines,
            error_budget * 100.0,
            report.malformed_samples
        )));
    }

    let timelines = users
        .into_iter()
        .map(|(user_id, (group, mut utterances))| {
            // stable sort: ties keep input order
            utterances.sort_by_key(|u| u.timestamp);
            let n = utterances.len();
            UserTimeline {
                user_id,
                group,
                utterances,
                n_raw: n,
                n_kept: n,
            }
        })
        .collect();
    Ok((timelines, report))
}

fn is_retweet(text: &str) -> bool {
    tokenize(text).iter().any(|t| t == "RT" || t == "rt")
}

fn has_url(text: &str) -> bool {
    tokenize(text).iter().any(|t| is_url_token(t))
}

/// Post-level filtering. Total: never fails, never reorders, never changes
/// the group label. `n_raw` is preserved so repeated application is a no-op.
pub fn filter_posts(mut timeline: UserTimeline, cfg: &CorpusFilterConfig) -> UserTimeline {
    let mut seen: HashSet<(i64, String)> = HashSet::new();
    timeline.utterances.retain(|u| {
        if cfg.english_only {
            if let Some(lang) = &u.lang {
                if lang != "en" {
                    return false;
                }
            }
        }
        if cfg.drop_retweets && is_retweet(&u.text) {
            return false;
        }
        if cfg.drop_urls && has_url(&u.text) {
            return false;
        }
        if cfg.dedup && !seen.insert((u.timestamp.timestamp(), u.text.clone())) {
            return false;
        }
        true
    });
    timeline.n_kept = timeline.utterances.len();
    timeline
}

/// Linear-interpolation (type-7) quantile over a sorted slice.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Per-group retention counts for the report CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetentionRow {
    pub group: String,
    pub users_in: usize,
    pub users_out: usize,
    pub posts_in: usize,
    pub posts_out: usize,
}

/// User-level filtering: drops users below `min_posts` and, under the
/// q3-based rule, users above Q3 + 1.5×IQR of the control group's per-user
/// post counts (bound computed once over the loaded control group).
pub fn filter_users(
    corpus: Vec<UserTimeline>,
    cfg: &CorpusFilterConfig,
) -> Result<(Vec<UserTimeline>, Vec<RetentionRow>)> {
    let upper_bound = match cfg.upper_bound_rule {
        UpperBoundRule::None => f64::INFINITY,
        UpperBoundRule::Q3Plus1p5IqrOfControl => {
            let mut control_counts: Vec<f64> = corpus
                .iter()
                .filter(|t| t.group == cfg.control_label)
                .map(|t| t.n_kept as f64)
                .collect();
            if control_counts.is_empty() {
                return Err(Error::Data(format!(
                    "upper-bound rule requires users in the control group {:?}, found none",
                    cfg.control_label
                )));
            }
            control_counts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let q1 = quantile_type7(&control_counts, 0.25);
            let q3 = quantile_type7(&control_counts, 0.75);
            q3 + 1.5 * (q3 - q1)
        }
    };

    let mut rows: BTreeMap<String, RetentionRow> = BTreeMap::new();
    let mut kept = Vec::new();
    for timeline in corpus {
        let row = rows
            .entry(timeline.group.clone())
            .or_insert_with(|| RetentionRow {
                group: timeline.group.clone(),
                users_in: 0,
                users_out: 0,
                posts_in: 0,
                posts_out: 0,
            });
        row.users_in += 1;
        row.posts_in += timeline.n_kept;
        let keep = timeline.n_kept >= cfg.min_posts && (timeline.n_kept as f64) <= upper_bound;
        if keep {
            row.users_out += 1;
            row.posts_out += timeline.n_kept;
            kept.push(timeline);
        }
    }
    Ok((kept, rows.into_values().collect()))
}

/// Writes timelines back out in the input JSONL format, in user order.
pub fn write_corpus_jsonl(path: &Path, corpus: &[UserTimeline]) -> Result<()> {
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    for timeline in corpus {
        for u in &timeline.utterances {
            let rec = CorpusRecord {
                user_id: timeline.user_id.clone(),
                group: timeline.group.clone(),
                timestamp: u.timestamp_raw.clone(),
                text: u.text.clone(),
                lang: u.lang.clone(),
            };
            let line = serde_json::to_string(&rec)
                .map_err(|e| Error::Internal(format!("corpus serialization failed: {e}")))?;
            writeln!(file, "{line}").map_err(|e| Error::io(path, e))?;
        }
    }
    Ok(())
}
