//! Command-line orchestration. The binary is a thin wrapper over these
//! functions; everything here delegates into the library modules.
//!
//! Flag resolution order: explicit flag > TOML config file (`--config`) >
//! `GRANULATE_SEED` environment variable (seed only) > built-in default.
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
//! violation.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::arcs::{ArcConfig, ArcMode, Denominator, NoMatchPolicy};
use crate::corpus::{self, CorpusFilterConfig, UpperBoundRule, UserTimeline};
use crate::error::{Error, Result};
use crate::granularity::EligibilityThresholds;
use crate::lexicon::{load_stoplist, Emotion, EmotionLexicon, RemovalReason, Stoplist};
use crate::manifest::RunManifest;
use crate::pipeline::ArcEngine;
use crate::report;
use crate::specificity::{
    build_ic_table, load_counts, load_tag_lexicon, load_tag_sidecar, user_specificity,
    SenseIcPolicy, TagSource, Taxonomy,
};
use crate::stats::{compare_groups, CorrectionFamily};
use crate::synth::{gen_cohorts, SynthConfig, SynthVocab};

#[derive(Parser, Debug)]
#[command(name = "granulate", version, about = "Emotion granularity profiles from utterance corpora")]
struct Cli {
    /// TOML config file; explicit flags take precedence over its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for per-user parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// RNG seed; falls back to $GRANULATE_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Filter a JSONL corpus and write it back with a retention report.
    Ingest(IngestArgs),
    /// Compute per-user granularity profiles.
    Granularity(GranularityArgs),
    /// Compute per-user term-specificity (information content) profiles.
    Specificity(SpecificityArgs),
    /// Compare groups against the control with Welch tests and BH correction.
    Compare(CompareArgs),
    /// Generate a synthetic two-group corpus with planted co-endorsement.
    Synth(SynthArgs),
    /// Dump one user's emotion arcs as CSV.
    ArcsDump(ArcsDumpArgs),
    /// Print the token stream for a piece of text (debugging aid).
    Tokenize(TokenizeArgs),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    jobs: Option<usize>,
    mode: Option<String>,
    window: Option<usize>,
    step: Option<usize>,
    policy: Option<String>,
    denominator: Option<String>,
    min_tweets: Option<usize>,
    min_terms: Option<usize>,
    q: Option<f64>,
    family: Option<String>,
    lexicon: Option<PathBuf>,
    stop_common: Option<PathBuf>,
    stop_domain: Option<PathBuf>,
    stop_mhc: Option<PathBuf>,
}

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<FileConfig> {
        match path {
            None => Ok(FileConfig::default()),
            Some(p) => {
                let content = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                toml::from_str(&content)
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))
            }
        }
    }
}

#[derive(Args, Debug)]
struct LexiconArgs {
    /// Intensity lexicon TSV (term, emotion, score).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Common-stopword list (one term per line).
    #[arg(long)]
    stop_common: Option<PathBuf>,
    /// Domain-stopword list (terms and bigrams).
    #[arg(long)]
    stop_domain: Option<PathBuf>,
    /// Condition-specific stopword list (terms and bigrams).
    #[arg(long)]
    stop_mhc: Option<PathBuf>,
}

struct LoadedLexicon {
    lexicon: EmotionLexicon,
    paths: Vec<(String, PathBuf)>,
}

impl LexiconArgs {
    fn load(&self, cfg: &FileConfig) -> Result<LoadedLexicon> {
        let lexicon_path = self
            .lexicon
            .clone()
            .or_else(|| cfg.lexicon.clone())
            .ok_or_else(|| Error::Config("--lexicon is required".to_string()))?;
        let mut lexicon = EmotionLexicon::load(&lexicon_path)?;
        let mut paths = vec![("lexicon".to_string(), lexicon_path)];
        let mut stoplists: Vec<Stoplist> = Vec::new();
        for (label, flag, file_cfg, reason) in [
            ("stop_common", &self.stop_common, &cfg.stop_common, RemovalReason::CommonStopword),
            ("stop_domain", &self.stop_domain, &cfg.stop_domain, RemovalReason::DomainStopword),
            ("stop_mhc", &self.stop_mhc, &cfg.stop_mhc, RemovalReason::MhcTerm),
        ] {
            if let Some(path) = flag.clone().or_else(|| file_cfg.clone()) {
                stoplists.push(load_stoplist(&path, reason)?);
                paths.push((label.to_string(), path));
            }
        }
        let stoplist_report = lexicon.apply_stoplists(&stoplists);
        log::info!(
            "lexicon: {} terms after removing {}, {} suppressed bigrams",
            lexicon.n_terms(),
            stoplist_report.removed,
            stoplist_report.suppressed_bigrams
        );
        Ok(LoadedLexicon { lexicon, paths })
    }
}

#[derive(Args, Debug)]
struct ArcFlags {
    /// Arc operationalization: utterance | window.
    #[arg(long)]
    mode: Option<String>,
    /// Window size in words (window mode).
    #[arg(long)]
    window: Option<usize>,
    /// Step in words between window starts.
    #[arg(long)]
    step: Option<usize>,
    /// Score for spans without lexicon terms: zero | missing.
    #[arg(long)]
    policy: Option<String>,
    /// Span denominator: all-tokens | matched-only.
    #[arg(long)]
    denominator: Option<String>,
    /// Include trailing partial windows.
    #[arg(long)]
    partial_windows: bool,
    /// Restart windows at utterance boundaries.
    #[arg(long)]
    reset_windows: bool,
    /// Match hashtags literally instead of stripping the leading '#'.
    #[arg(long)]
    no_strip_hashtags: bool,
}

impl ArcFlags {
    fn resolve(&self, cfg: &FileConfig) -> Result<ArcConfig> {
        let mode = match self
            .mode
            .clone()
            .or_else(|| cfg.mode.clone())
            .unwrap_or_else(|| "utterance".to_string())
            .as_str()
        {
            "utterance" => ArcMode::Utterance,
            "window" => ArcMode::Window,
            other => return Err(Error::Config(format!("unknown mode {other:?}"))),
        };
        let policy = match self
            .policy
            .clone()
            .or_else(|| cfg.policy.clone())
            .unwrap_or_else(|| "zero".to_string())
            .as_str()
        {
            "zero" => NoMatchPolicy::Zero,
            "missing" | "nan" => NoMatchPolicy::Missing,
            other => return Err(Error::Config(format!("unknown policy {other:?}"))),
        };
        let denominator = match self
            .denominator
            .clone()
            .or_else(|| cfg.denominator.clone())
            .unwrap_or_else(|| "all-tokens".to_string())
            .as_str()
        {
            "all-tokens" | "all_tokens" => Denominator::AllTokens,
            "matched-only" | "matched_terms_only" => Denominator::MatchedTermsOnly,
            other => return Err(Error::Config(format!("unknown denominator {other:?}"))),
        };
        let arc = ArcConfig {
            mode,
            window_size: self.window.or(cfg.window).unwrap_or(100),
            step: self.step.or(cfg.step).unwrap_or(1),
            no_match_policy: policy,
            denominator,
            include_partial_windows: self.partial_windows,
            reset_windows_at_utterance: self.reset_windows,
            strip_hashtags: !self.no_strip_hashtags,
        };
        arc.validate()?;
        Ok(arc)
    }
}

#[derive(Args, Debug)]
struct IngestArgs {
    #[arg(long)]
    input: PathBuf,
    /// Filtered corpus output (JSONL, same schema as the input).
    #[arg(long)]
    output: PathBuf,
    /// Retention report CSV.
    #[arg(long)]
    report: PathBuf,
    #[arg(long, default_value_t = 100)]
    min_posts: usize,
    /// Drop users above Q3 + 1.5×IQR of the control group's post counts.
    #[arg(long)]
    iqr_upper: bool,
    #[arg(long, default_value = "control")]
    control_label: String,
    /// Keep posts with no or non-English language tags.
    #[arg(long)]
    keep_non_english: bool,
    #[arg(long)]
    keep_urls: bool,
    #[arg(long)]
    keep_retweets: bool,
    /// Drop exact duplicate (timestamp, text) posts within a user.
    #[arg(long)]
    dedup: bool,
    /// Abort when more than this fraction of lines is malformed.
    #[arg(long, default_value_t = corpus::DEFAULT_ERROR_BUDGET)]
    error_budget: f64,
}

#[derive(Args, Debug)]
struct GranularityArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[command(flatten)]
    arc: ArcFlags,
    /// Minimum scored utterances for eligibility.
    #[arg(long)]
    min_tweets: Option<usize>,
    /// Minimum unique lexicon terms for eligibility.
    #[arg(long)]
    min_terms: Option<usize>,
    /// Drop users with any undefined pair correlation instead of excluding
    /// the pair from their EG means.
    #[arg(long)]
    strict_pairs: bool,
    /// Profile CSV output.
    #[arg(long)]
    output: PathBuf,
    /// Add the 28 per-pair granularity columns.
    #[arg(long)]
    with_pairs: bool,
    /// Optional JSON dump of removed lexicon terms with reasons.
    #[arg(long)]
    removed_terms_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpecificityArgs {
    #[arg(long)]
    input: PathBuf,
    /// Taxonomy is-a edges TSV (child, parent).
    #[arg(long)]
    taxonomy_edges: PathBuf,
    /// Lemma map TSV (surface, pos, concept).
    #[arg(long)]
    taxonomy_lemmas: PathBuf,
    /// Corpus frequency TSV (surface, pos, count).
    #[arg(long)]
    counts: PathBuf,
    /// Unigram most-frequent-tag lexicon TSV (surface, pos).
    #[arg(long)]
    tag_lexicon: Option<PathBuf>,
    /// Externally tagged JSONL sidecar, parallel to the corpus.
    #[arg(long)]
    tag_sidecar: Option<PathBuf>,
    /// Word IC over senses: max (most specific) | mean.
    #[arg(long, default_value = "max")]
    sense_policy: String,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Profile CSV(s); metric columns join on (user_id, group).
    #[arg(long, required = true)]
    profiles: Vec<PathBuf>,
    #[arg(long, default_value = "control")]
    control: String,
    /// Comma-separated metric names, or "all", or "eg_pairs".
    #[arg(long, default_value = "eg_pos,eg_neg,eg_var,eg_cross,eg_overall")]
    metrics: String,
    /// BH false-discovery level.
    #[arg(long)]
    q: Option<f64>,
    /// Correction family: per-metric | global.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    output: PathBuf,
    /// Markdown rendering of the direction table.
    #[arg(long)]
    markdown: Option<PathBuf>,
    /// Companion Levene variance-check CSV.
    #[arg(long)]
    levene_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Corpus JSONL output.
    #[arg(long)]
    output: PathBuf,
    /// Ground-truth sidecar JSON output.
    #[arg(long)]
    truth: PathBuf,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[arg(long, default_value_t = 50)]
    users_per_group: usize,
    #[arg(long, default_value_t = 500)]
    utterances: usize,
    /// Planted co-endorsement for the condition group.
    #[arg(long, default_value_t = 0.6)]
    rho_mhc: f64,
    /// Planted co-endorsement for the control group.
    #[arg(long, default_value_t = 0.2)]
    rho_control: f64,
    /// Coupled emotions (comma separated).
    #[arg(long, default_value = "anger,disgust,fear,sadness")]
    emotions: String,
    #[arg(long, default_value_t = 0.3)]
    event_rate: f64,
    #[arg(long, default_value_t = 15)]
    tokens: usize,
    #[arg(long, default_value_t = 0)]
    jitter: usize,
    #[arg(long, default_value_t = 1)]
    terms_per_emission: usize,
    /// Exclusive lexicon terms sampled per emotion.
    #[arg(long, default_value_t = 50)]
    vocab_per_emotion: usize,
    /// Take filler words from a tag-lexicon TSV instead of generated
    /// non-words (useful when the corpus also feeds the specificity control).
    #[arg(long)]
    filler_from_tags: Option<PathBuf>,
    #[arg(long, default_value = "mhc")]
    group_mhc: String,
    #[arg(long, default_value = "control")]
    group_control: String,
}

#[derive(Args, Debug)]
struct ArcsDumpArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    lexicon: LexiconArgs,
    #[command(flatten)]
    arc: ArcFlags,
    /// User whose arcs to dump.
    #[arg(long)]
    user: String,
    /// Dump this pair's two pair-exclusive arcs instead of the eight
    /// whole-lexicon arcs (format: "anger,fear").
    #[arg(long)]
    pair: Option<String>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct TokenizeArgs {
    /// Text to tokenize; reads stdin when omitted.
    text: Option<String>,
}

/// Entry point used by the binary and the CLI tests.
pub fn run<I>(args: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let file_cfg = FileConfig::load(cli.config.as_deref())?;
    let jobs = cli.jobs.or(file_cfg.jobs);
    let seed = cli
        .seed
        .or(file_cfg.seed)
        .or_else(|| {
            std::env::var("GRANULATE_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Granularity(args) => cmd_granularity(args, &file_cfg),
        Command::Specificity(args) => cmd_specificity(args),
        Command::Compare(args) => cmd_compare(args, &file_cfg),
        Command::Synth(args) => cmd_synth(args, &file_cfg, seed),
        Command::ArcsDump(args) => cmd_arcs_dump(args, &file_cfg),
        Command::Tokenize(args) => cmd_tokenize(args),
    })
}

fn load_timelines(path: &Path) -> Result<Vec<UserTimeline>> {
    let (corpus, report) = corpus::load_corpus(path)?;
    if report.malformed > 0 {
        log::warn!(
            "{}: {} of {} lines malformed (within budget)",
            path.display(),
            report.malformed,
            report.lines
        );
    }
    Ok(corpus)
}

fn cmd_ingest(args: IngestArgs) -> Result<()> {
    let cfg = CorpusFilterConfig {
        english_only: !args.keep_non_english,
        drop_urls: !args.keep_urls,
        drop_retweets: !args.keep_retweets,
        dedup: args.dedup,
        min_posts: args.min_posts,
        upper_bound_rule: if args.iqr_upper {
            UpperBoundRule::Q3Plus1p5IqrOfControl
        } else {
            UpperBoundRule::None
        },
        control_label: args.control_label.clone(),
    };
    let (corpus, load_report) = corpus::load_corpus_with_budget(&args.input, args.error_budget)?;
    let filtered: Vec<UserTimeline> = corpus
        .into_iter()
        .map(|t| corpus::filter_posts(t, &cfg))
        .collect();
    let (kept, retention) = corpus::filter_users(filtered, &cfg)?;

    let mut manifest = RunManifest::new("ingest");
    manifest.input_file("corpus", &args.input)?;
    manifest
        .param("min_posts", args.min_posts)
        .param("iqr_upper", args.iqr_upper)
        .param("control_label", &args.control_label)
        .param("english_only", !args.keep_non_english)
        .param("drop_urls", !args.keep_urls)
        .param("drop_retweets", !args.keep_retweets)
        .param("dedup", args.dedup)
        .param("error_budget", args.error_budget)
        .param("quantile_method", "linear_interpolation_type7")
        .param("malformed_lines", load_report.malformed);

    corpus::write_corpus_jsonl(&args.output, &kept)?;
    report::write_retention_csv(&args.report, &retention, &manifest.hash())?;
    manifest.write(&args.report.with_extension("manifest.json"))?;
    for row in &retention {
        log::info!(
            "group {}: {} -> {} users, {} -> {} posts",
            row.group,
            row.users_in,
            row.users_out,
            row.posts_in,
            row.posts_out
        );
    }
    Ok(())
}

fn thresholds_from(
    args_min_tweets: Option<usize>,
    args_min_terms: Option<usize>,
    strict_pairs: bool,
    cfg: &FileConfig,
) -> EligibilityThresholds {
    EligibilityThresholds {
        min_scored_utterances: args_min_tweets.or(cfg.min_tweets).unwrap_or(50),
        min_unique_terms: args_min_terms.or(cfg.min_terms).unwrap_or(25),
        require_all_pairs_defined: strict_pairs,
    }
}

fn cmd_granularity(args: GranularityArgs, cfg: &FileConfig) -> Result<()> {
    let loaded = args.lexicon.load(cfg)?;
    let arc_cfg = args.arc.resolve(cfg)?;
    let thresholds = thresholds_from(args.min_tweets, args.min_terms, args.strict_pairs, cfg);
    let corpus = load_timelines(&args.input)?;

    let mut manifest = RunManifest::new("granularity");
    manifest.input_file("corpus", &args.input)?;
    for (label, path) in &loaded.paths {
        manifest.input_file(label, path)?;
    }
    manifest
        .param("arc", arc_cfg.fingerprint())
        .param("min_tweets", thresholds.min_scored_utterances)
        .param("min_terms", thresholds.min_unique_terms)
        .param("strict_pairs", thresholds.require_all_pairs_defined)
        .param("with_pairs", args.with_pairs);

    let engine = ArcEngine::new(&loaded.lexicon);
    let profiles = engine.profiles(&corpus, &arc_cfg, &thresholds);
    report::write_profiles_csv(&args.output, &profiles, args.with_pairs, &manifest.hash())?;
    manifest.write(&args.output.with_extension("manifest.json"))?;
    if let Some(path) = &args.removed_terms_out {
        report::write_removed_terms_json(path, loaded.lexicon.removed_terms())?;
    }
    log::info!(
        "{} profiles written ({} eligible)",
        profiles.len(),
        profiles.iter().filter(|p| p.eligible).count()
    );
    Ok(())
}

fn cmd_specificity(args: SpecificityArgs) -> Result<()> {
    let taxonomy = Taxonomy::load(&args.taxonomy_edges, &args.taxonomy_lemmas)?;
    let counts = load_counts(&args.counts)?;
    let table = build_ic_table(&taxonomy, &counts)?;
    let policy = match args.sense_policy.as_str() {
        "max" => SenseIcPolicy::MaxIc,
        "mean" => SenseIcPolicy::MeanIc,
        other => return Err(Error::Config(format!("unknown sense policy {other:?}"))),
    };
    let tags = match (&args.tag_lexicon, &args.tag_sidecar) {
        (Some(path), None) => TagSource::Lexicon(load_tag_lexicon(path)?),
        (None, Some(path)) => TagSource::Sidecar(load_tag_sidecar(path)?),
        _ => {
            return Err(Error::Config(
                "exactly one of --tag-lexicon or --tag-sidecar is required".to_string(),
            ))
        }
    };
    let corpus = load_timelines(&args.input)?;

    let mut manifest = RunManifest::new("specificity");
    manifest.input_file("corpus", &args.input)?;
    manifest.input_file("taxonomy_edges", &args.taxonomy_edges)?;
    manifest.input_file("taxonomy_lemmas", &args.taxonomy_lemmas)?;
    manifest.input_file("counts", &args.counts)?;
    if let Some(p) = &args.tag_lexicon {
        manifest.input_file("tag_lexicon", p)?;
    }
    if let Some(p) = &args.tag_sidecar {
        manifest.input_file("tag_sidecar", p)?;
    }
    manifest
        .param("sense_policy", &args.sense_policy)
        .param("ic_unit", "nats")
        .param("averaging", "per_post_then_per_user");

    use rayon::prelude::*;
    let mut profiles: Vec<_> = corpus
        .par_iter()
        .map(|t| user_specificity(t, &tags, &taxonomy, &table, policy))
        .collect();
    profiles.sort_by(|a, b| a.user_id.cmp(&b.user_id));
    report::write_specificity_csv(&args.output, &profiles, &manifest.hash())?;
    manifest.write(&args.output.with_extension("manifest.json"))?;
    Ok(())
}

fn cmd_compare(args: CompareArgs, cfg: &FileConfig) -> Result<()> {
    let paths: Vec<&Path> = args.profiles.iter().map(|p| p.as_path()).collect();
    let rows = report::read_profile_rows(&paths)?;
    let q = args.q.or(cfg.q).unwrap_or(0.05);
    let family = match args
        .family
        .clone()
        .or_else(|| cfg.family.clone())
        .unwrap_or_else(|| "per-metric".to_string())
        .as_str()
    {
        "per-metric" | "per_metric" | "per_metric_across_groups" => {
            CorrectionFamily::PerMetricAcrossGroups
        }
        "global" => CorrectionFamily::Global,
        other => return Err(Error::Config(format!("unknown family {other:?}"))),
    };
    let available: Vec<String> = {
        let mut names: Vec<String> = rows
            .iter()
            .flat_map(|r| r.metrics.keys().cloned())
            .collect();
        names.sort();
        names.dedup();
        names
    };
    let metrics: Vec<String> = match args.metrics.as_str() {
        "all" => available,
        "eg_pairs" => {
            let pairs: Vec<String> = available
                .into_iter()
                .filter(|m| m.starts_with("eg_pair_"))
                .collect();
            if pairs.is_empty() {
                return Err(Error::Data(
                    "no eg_pair_* columns in the profiles; rerun granularity --with-pairs"
                        .to_string(),
                ));
            }
            pairs
        }
        list => list.split(',').map(|s| s.trim().to_string()).collect(),
    };

    let table = compare_groups(&rows, &args.control, &metrics, q, family)?;

    let mut manifest = RunManifest::new("compare");
    for (i, path) in args.profiles.iter().enumerate() {
        manifest.input_file(&format!("profiles_{i}"), path)?;
    }
    manifest
        .param("control", &args.control)
        .param("metrics", metrics.join(","))
        .param("q", q)
        .param("family", family.as_str());

    report::write_comparison_csv(&args.output, &table, &manifest.hash())?;
    if let Some(path) = &args.markdown {
        report::write_comparison_markdown(path, &table, &manifest.hash())?;
    }
    if let Some(path) = &args.levene_out {
        report::write_levene_csv(path, &table, &manifest.hash())?;
    }
    manifest.write(&args.output.with_extension("manifest.json"))?;
    Ok(())
}

fn parse_emotions(list: &str) -> Result<Vec<Emotion>> {
    list.split(',')
        .map(|s| {
            Emotion::from_name(s.trim())
                .ok_or_else(|| Error::Config(format!("unknown emotion {s:?}")))
        })
        .collect()
}

fn cmd_synth(args: SynthArgs, cfg: &FileConfig, seed: u64) -> Result<()> {
    let loaded = args.lexicon.load(cfg)?;
    let coupled = parse_emotions(&args.emotions)?;
    let filler = match &args.filler_from_tags {
        Some(path) => load_tag_lexicon(path)?.into_keys().collect(),
        None => SynthVocab::generated_filler(200),
    };
    let vocab = SynthVocab::from_lexicon(&loaded.lexicon, args.vocab_per_emotion, &filler)?;
    let base = SynthConfig {
        group: args.group_mhc.clone(),
        n_users: args.users_per_group,
        utterances_per_user: args.utterances,
        tokens_per_utterance: args.tokens,
        tokens_jitter: args.jitter,
        event_rate: args.event_rate,
        co_endorsement: args.rho_mhc,
        coupled_emotions: coupled,
        terms_per_emission: args.terms_per_emission,
        seed,
    };
    let cfg_control = SynthConfig {
        group: args.group_control.clone(),
        co_endorsement: args.rho_control,
        ..base.clone()
    };
    let (corpus, truth) = gen_cohorts(&base, &cfg_control, &vocab)?;
    corpus::write_corpus_jsonl(&args.output, &corpus)?;
    let json = serde_json::to_string_pretty(&truth)
        .map_err(|e| Error::Internal(format!("truth serialization: {e}")))?;
    fs::write(&args.truth, json).map_err(|e| Error::io(&args.truth, e))?;

    let mut manifest = RunManifest::new("synth");
    for (label, path) in &loaded.paths {
        manifest.input_file(label, path)?;
    }
    manifest
        .param("seed", seed)
        .param("users_per_group", args.users_per_group)
        .param("utterances", args.utterances)
        .param("rho_mhc", args.rho_mhc)
        .param("rho_control", args.rho_control)
        .param("emotions", &args.emotions)
        .param("event_rate", args.event_rate)
        .param("tokens", args.tokens)
        .param("jitter", args.jitter)
        .param("terms_per_emission", args.terms_per_emission)
        .param("vocab_per_emotion", args.vocab_per_emotion);
    manifest.write(&args.output.with_extension("manifest.json"))?;
    Ok(())
}

fn cmd_arcs_dump(args: ArcsDumpArgs, cfg: &FileConfig) -> Result<()> {
    let loaded = args.lexicon.load(cfg)?;
    let arc_cfg = args.arc.resolve(cfg)?;
    let corpus = load_timelines(&args.input)?;
    let timeline = corpus
        .iter()
        .find(|t| t.user_id == args.user)
        .ok_or_else(|| Error::Data(format!("user {:?} not in corpus", args.user)))?;
    let engine = ArcEngine::new(&loaded.lexicon);
    let arcs = match &args.pair {
        None => engine.user_emotion_arcs(timeline, &arc_cfg),
        Some(pair) => {
            let emotions = parse_emotions(pair)?;
            if emotions.len() != 2 {
                return Err(Error::Config("--pair takes exactly two emotions".to_string()));
            }
            let (a, b) = (emotions[0], emotions[1]);
            let all = engine.user_pair_arcs(timeline, &arc_cfg);
            let entry = all
                .into_iter()
                .find(|((x, y), _, _)| (*x == a && *y == b) || (*x == b && *y == a))
                .ok_or_else(|| Error::Config(format!("no pair {a},{b}")))?;
            vec![entry.1, entry.2]
        }
    };

    let mut manifest = RunManifest::new("arcs-dump");
    manifest.input_file("corpus", &args.input)?;
    for (label, path) in &loaded.paths {
        manifest.input_file(label, path)?;
    }
    manifest
        .param("arc", arc_cfg.fingerprint())
        .param("user", &args.user);
    report::write_arc_dump_csv(&args.output, &arcs, &manifest.hash())?;
    manifest.write(&args.output.with_extension("manifest.json"))?;
    Ok(())
}

fn cmd_tokenize(args: TokenizeArgs) -> Result<()> {
    let text = match args.text {
        Some(t) => t,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Data(format!("stdin: {e}")))?;
            buf
        }
    };
    for line in text.lines() {
        for token in crate::tokenizer::tokenize(line) {
            println!("{token}");
        }
    }
    Ok(())
}

/// Metric names carried by granularity profiles, in report order.
pub fn default_metric_names() -> Vec<String> {
    ["eg_pos", "eg_neg", "eg_var", "eg_cross", "eg_overall"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Convenience used by tests and examples: profile rows straight from
/// in-memory profiles.
pub fn profile_rows(
    profiles: &[crate::granularity::GranularityProfile],
    with_pairs: bool,
) -> Vec<crate::stats::ProfileRow> {
    profiles
        .iter()
        .map(|p| crate::stats::ProfileRow {
            user_id: p.user_id.clone(),
            group: p.group.clone(),
            eligible: p.eligible,
            metrics: p.metrics(with_pairs),
        })
        .collect()
}

/// Profile rows carrying ic_n / ic_v metrics.
pub fn specificity_rows(
    profiles: &[crate::specificity::SpecificityProfile],
) -> Vec<crate::stats::ProfileRow> {
    profiles
        .iter()
        .map(|p| crate::stats::ProfileRow {
            user_id: p.user_id.clone(),
            group: p.group.clone(),
            eligible: true,
            metrics: p.metrics(),
        })
        .collect()
}
