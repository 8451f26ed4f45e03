//! Emotion granularity from temporally ordered utterances.
//!
//! Given a JSONL corpus of timestamped posts grouped into cohorts, this
//! crate builds per-emotion arcs with a word–emotion intensity lexicon,
//! derives per-user granularity profiles (the negative of average pairwise
//! arc correlation), runs a term-specificity control, and compares cohorts
//! with Welch t-tests under Benjamini–Hochberg correction. A synthetic
//! cohort generator with a planted co-endorsement level validates the whole
//! estimator chain against known ground truth.
//!
//! The library is the primary interface; start with the runnable examples:
//!
//! - `tokenize_text` — social-media tokenization and lexicon matching
//! - `lexicon_views` — stoplists and pair-exclusive lexicon views
//! - `build_arcs` — utterance-level and sliding-window arcs
//! - `granularity_profiles` — per-user profiles over a synthetic cohort
//! - `group_comparison` — planted-effect recovery with the full pipeline
//! - `term_specificity` — information-content control on bundled fixtures
//! - `synthetic_cohorts` — corpus + ground-truth sidecar generation
//!
//! ```bash
//! cargo run --release -p granulate --example group_comparison
//! ```
//!
//! The same functionality is scriptable through the `granulate` binary
//! (subcommands: `ingest`, `granularity`, `specificity`, `compare`,
//! `synth`, `arcs-dump`, `tokenize`).

pub mod arcs;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod granularity;
pub mod lexicon;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod specificity;
pub mod stats;
pub mod synth;
pub mod tokenizer;

pub use error::{Error, Result};
