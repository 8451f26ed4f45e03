//! CSV and Markdown report emission, plus readers for our own profile CSVs.
//!
//! Every CSV starts with a `# manifest_hash=…` comment line tying the file
//! to its run manifest; the readers here skip `#` lines. Floats print via
//! the shortest round-trip representation, which keeps outputs byte-stable.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::corpus::RetentionRow;
use crate::error::{Error, Result};
use crate::granularity::GranularityProfile;
use crate::lexicon::Emotion;
use crate::specificity::SpecificityProfile;
use crate::stats::{ComparisonTable, Direction, ProfileRow};
use crate::arcs::EmotionArc;

fn open_with_manifest(path: &Path, manifest_hash: &str) -> Result<File> {
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    writeln!(file, "# manifest_hash={manifest_hash}").map_err(|e| Error::io(path, e))?;
    Ok(file)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_writer(file: File) -> csv::Writer<File> {
    csv::WriterBuilder::new().from_writer(file)
}

pub fn write_retention_csv(path: &Path, rows: &[RetentionRow], manifest_hash: &str) -> Result<()> {
    let mut w = csv_writer(open_with_manifest(path, manifest_hash)?);
    let io_err = |e: csv::Error| Error::Data(format!("{}: {e}", path.display()));
    w.write_record(["group", "users_in", "users_out", "posts_in", "posts_out"])
        .map_err(io_err)?;
    for r in rows {
        w.write_record([
            r.group.as_str(),
            &r.users_in.to_string(),
            &r.users_out.to_string(),
            &r.posts_in.to_string(),
            &r.posts_out.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Profile CSV: the pinned columns first (user through counters), then the
/// raw correlation means, then optionally the 28 per-pair granularity
/// columns.
pub fn write_profiles_csv(
    path: &Path,
    profiles: &[GranularityProfile],
    with_pairs: bool,
    manifest_hash: &str,
) -> Result<()> {
    let mut w = csv_writer(open_with_manifest(path, manifest_hash)?);
    let io_err = |e: csv::Error| Error::Data(format!("{}: {e}", path.display()));
    let mut header = vec![
        "user_id".to_string(),
        "group".to_string(),
        "eligible".to_string(),
        "eg_pos".to_string(),
        "eg_neg".to_string(),
        "eg_var".to_string(),
        "eg_overall".to_string(),
        "eg_cross".to_string(),
        "n_scored".to_string(),
        "n_unique_terms".to_string(),
        "rho_pos".to_string(),
        "rho_neg".to_string(),
        "rho_var".to_string(),
        "rho_overall".to_string(),
        "rho_cross".to_string(),
    ];
    if with_pairs {
        if let Some(p) = profiles.first() {
            for pair in &p.pair_matrix {
                header.push(format!("eg_pair_{}_{}", pair.emotion_a, pair.emotion_b));
            }
        }
    }
    w.write_record(&header).map_err(io_err)?;
    for p in profiles {
        let mut record = vec![
            p.user_id.clone(),
            p.group.clone(),
            p.eligible.to_string(),
            fmt_opt(p.eg.eg_pos),
            fmt_opt(p.eg.eg_neg),
            fmt_opt(p.eg.eg_var),
            fmt_opt(p.eg.eg_overall),
            fmt_opt(p.eg.eg_cross),
            p.n_scored_utterances.to_string(),
            p.n_unique_lexicon_terms.to_string(),
            fmt_opt(p.eg.rho_pos),
            fmt_opt(p.eg.rho_neg),
            fmt_opt(p.eg.rho_var),
            fmt_opt(p.eg.rho_overall),
            fmt_opt(p.eg.rho_cross),
        ];
        if with_pairs {
            for pair in &p.pair_matrix {
                record.push(fmt_opt(pair.rho.map(|r| -r)));
            }
        }
        w.write_record(&record).map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn write_specificity_csv(
    path: &Path,
    profiles: &[SpecificityProfile],
    manifest_hash: &str,
) -> Result<()> {
    let mut file = open_with_manifest(path, manifest_hash)?;
    writeln!(file, "# ic unit: nats").map_err(|e| Error::io(path, e))?;
    let mut w = csv_writer(file);
    let io_err = |e: csv::Error| Error::Data(format!("{}: {e}", path.display()));
    w.write_record(["user_id", "group", "ic_n", "ic_v", "n_nouns", "n_verbs"])
        .map_err(io_err)?;
    for p in profiles {
        w.write_record([
            p.user_id.as_str(),
            p.group.as_str(),
            &fmt_opt(p.ic_n),
            &fmt_opt(p.ic_v),
            &p.n_nouns.to_string(),
            &p.n_verbs.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Reads rows from one or more of our profile CSVs (granularity and/or
/// specificity), joining metric columns by (user_id, group). A user absent
/// from a file simply lacks those metrics; ineligible users stay flagged.
pub fn read_profile_rows(paths: &[&Path]) -> Result<Vec<ProfileRow>> {
    let mut rows: BTreeMap<(String, String), ProfileRow> = BTreeMap::new();
    for path in paths {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if !line.starts_with('#') {
                lines.push(line);
            }
        }
        if lines.is_empty() {
            return Err(Error::Data(format!("{}: no rows", path.display())));
        }
        let joined = lines.join("\n");
        let mut reader = csv::ReaderBuilder::new().from_reader(joined.as_bytes());
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?
            .iter()
            .map(|h| h.to_string())
            .collect();
        let need = |name: &str| -> Result<usize> {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Data(format!("{}: missing column {name}", path.display())))
        };
        let user_col = need("user_id")?;
        let group_col = need("group")?;
        let eligible_col = headers.iter().position(|h| h == "eligible");
        let skip: Vec<usize> = ["user_id", "group", "eligible", "n_scored", "n_unique_terms", "n_nouns", "n_verbs"]
            .iter()
            .filter_map(|n| headers.iter().position(|h| h == n))
            .collect();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
            let key = (record[user_col].to_string(), record[group_col].to_string());
            let row = rows.entry(key.clone()).or_insert_with(|| ProfileRow {
                user_id: key.0,
                group: key.1,
                eligible: true,
                metrics: BTreeMap::new(),
            });
            if let Some(c) = eligible_col {
                row.eligible &= &record[c] == "true";
            }
            for (i, value) in record.iter().enumerate() {
                if skip.contains(&i) || value.is_empty() {
                    continue;
                }
                let v: f64 = value.parse().map_err(|_| {
                    Error::Data(format!(
                        "{}: column {} has non-numeric value {value:?}",
                        path.display(),
                        headers[i]
                    ))
                })?;
                row.metrics.insert(headers[i].clone(), v);
            }
        }
    }
    Ok(rows.into_values().collect())
}

/// Comparison CSV with the pinned columns (metric, mhc, t, df, p_raw,
/// p_adj, direction); untestable rows carry empty statistics.
pub fn write_comparison_csv(
    path: &Path,
    table: &ComparisonTable,
    manifest_hash: &str,
) -> Result<()> {
    let mut w = csv_writer(open_with_manifest(path, manifest_hash)?);
    let io_err = |e: csv::Error| Error::Data(format!("{}: {e}", path.display()));
    w.write_record(["metric", "mhc", "t", "df", "p_raw", "p_adj", "direction"])
        .map_err(io_err)?;
    for r in &table.rows {
        let (t, df, p_raw, p_adj) = if r.error.is_some() {
            (String::new(), String::new(), String::new(), String::new())
        } else {
            (
                r.t.to_string(),
                r.df.to_string(),
                r.p_raw.to_string(),
                r.p_adjusted.to_string(),
            )
        };
        w.write_record([
            r.metric.as_str(),
            r.group.as_str(),
            &t,
            &df,
            &p_raw,
            &p_adj,
            &r.direction.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Companion variance-check CSV (reported, never gating).
pub fn write_levene_csv(path: &Path, table: &ComparisonTable, manifest_hash: &str) -> Result<()> {
    let mut w = csv_writer(open_with_manifest(path, manifest_hash)?);
    let io_err = |e: csv::Error| Error::Data(format!("{}: {e}", path.display()));
    w.write_record(["metric", "mhc", "levene_w", "levene_p"])
        .map_err(io_err)?;
    for r in &table.rows {
        w.write_record([
            r.metric.as_str(),
            r.group.as_str(),
            &fmt_opt(r.levene.map(|l| l.w)),
            &fmt_opt(r.levene.map(|l| l.p)),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Markdown rendering: one row per group–control comparison, one column per
/// metric, cells lower / higher / --.
pub fn comparison_markdown(table: &ComparisonTable) -> String {
    let mut out = String::new();
    out.push_str("| Group--Control |");
    for m in &table.metrics {
        out.push_str(&format!(" {m} |"));
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in &table.metrics {
        out.push_str("---|");
    }
    out.push('\n');
    for group in &table.groups {
        out.push_str(&format!("| {group}--{} |", table.control));
        for metric in &table.metrics {
            let cell = table
                .rows
                .iter()
                .find(|r| &r.group == group && &r.metric == metric)
                .map(|r| r.direction)
                .unwrap_or(Direction::None);
            out.push_str(&format!(" {cell} |"));
        }
        out.push('\n');
    }
    out
}

pub fn write_comparison_markdown(
    path: &Path,
    table: &ComparisonTable,
    manifest_hash: &str,
) -> Result<()> {
    let content = format!(
        "{}\n<!-- manifest_hash={manifest_hash} q={} family={} -->\n",
        comparison_markdown(table),
        table.q,
        table.family.as_str()
    );
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

/// Per-user arc dump for plotting: (point_index, emotion, score), missing
/// points skipped.
pub fn write_arc_dump_csv(path: &Path, arcs: &[EmotionArc], manifest_hash: &str) -> Result<()> {
    let mut w = csv_writer(open_with_manifest(path, manifest_hash)?);
    let io_err = |e: csv::Error| Error::Data(format!("{}: {e}", path.display()));
    w.write_record(["point_index", "emotion", "score"]).map_err(io_err)?;
    for arc in arcs {
        for (i, point) in arc.points.iter().enumerate() {
            if let Some(score) = point {
                w.write_record([&i.to_string(), arc.emotion.name(), &score.to_string()])
                    .map_err(io_err)?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// JSON provenance dump of removed lexicon terms.
pub fn write_removed_terms_json(
    path: &Path,
    removed: &BTreeMap<String, crate::lexicon::RemovalReason>,
) -> Result<()> {
    let value: BTreeMap<&String, &str> = removed.iter().map(|(t, r)| (t, r.as_str())).collect();
    let json = serde_json::to_string_pretty(&value)
        .map_err(|e| Error::Internal(format!("provenance serialization failed: {e}")))?;
    std::fs::write(path, json).map_err(|e| Error::io(path, e))
}

/// Canonical name for a pair metric column.
pub fn pair_metric_name(a: Emotion, b: Emotion) -> String {
    format!("eg_pair_{a}_{b}")
}
