//! Full planted-effect recovery: generate two cohorts whose negative
//! emotions are co-endorsed at different rates, run the pipeline, and
//! compare groups with Welch tests under BH correction.
//!
//! ```bash
//! cargo run --release -p granulate --example group_comparison
//! ```

use std::path::Path;

use granulate::arcs::ArcConfig;
use granulate::cli::profile_rows;
use granulate::granularity::EligibilityThresholds;
use granulate::lexicon::{load_stoplist, Emotion, EmotionLexicon, RemovalReason};
use granulate::pipeline::ArcEngine;
use granulate::report::comparison_markdown;
use granulate::stats::{compare_groups, CorrectionFamily};
use granulate::synth::{gen_cohorts, SynthConfig, SynthVocab};

fn main() -> granulate::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut lexicon = EmotionLexicon::load(&data.join("lexicon.tsv"))?;
    lexicon.apply_stoplists(&[load_stoplist(
        &data.join("stopwords_mhc.txt"),
        RemovalReason::MhcTerm,
    )?]);
    let vocab = SynthVocab::from_lexicon(&lexicon, 50, &SynthVocab::generated_filler(200))?;

    // condition group co-endorses negative emotions more (lower granularity)
    let negative = vec![Emotion::Anger, Emotion::Disgust, Emotion::Fear, Emotion::Sadness];
    let mhc = SynthConfig {
        group: "mhc".to_string(),
        n_users: 80,
        utterances_per_user: 300,
        co_endorsement: 0.6,
        coupled_emotions: negative.clone(),
        seed: 22,
        ..SynthConfig::default()
    };
    let control = SynthConfig {
        group: "control".to_string(),
        co_endorsement: 0.2,
        ..mhc.clone()
    };
    let (corpus, truth) = gen_cohorts(&mhc, &control, &vocab)?;
    println!(
        "generated {} users; planted rho: mhc {} vs control {}",
        corpus.len(),
        truth.groups["mhc"].rho_target,
        truth.groups["control"].rho_target
    );

    let engine = ArcEngine::new(&lexicon);
    let profiles = engine.profiles(
        &corpus,
        &ArcConfig::default(),
        &EligibilityThresholds::default(),
    );
    let rows = profile_rows(&profiles, false);
    let metrics: Vec<String> = ["eg_pos", "eg_neg", "eg_var", "eg_cross", "eg_overall"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let table = compare_groups(
        &rows,
        "control",
        &metrics,
        0.05,
        CorrectionFamily::PerMetricAcrossGroups,
    )?;

    println!("\n{}", comparison_markdown(&table));
    for row in &table.rows {
        println!(
            "{:<11} t = {:+8.3}  df = {:7.1}  p_adj = {:.3e}  -> {}",
            row.metric, row.t, row.df, row.p_adjusted, row.direction
        );
    }
    Ok(())
}
