//! Writing a planted two-group corpus plus its ground-truth sidecar, in the
//! same JSONL format the ingestion pipeline consumes.
//!
//! ```bash
//! cargo run -p granulate --example synthetic_cohorts
//! ```

use std::path::Path;

use granulate::corpus::write_corpus_jsonl;
use granulate::lexicon::{Emotion, EmotionLexicon};
use granulate::synth::{expected_arc_spearman, gen_cohorts, SynthConfig, SynthVocab};

fn main() -> granulate::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let lexicon = EmotionLexicon::load(&data.join("lexicon.tsv"))?;
    let vocab = SynthVocab::from_lexicon(&lexicon, 40, &SynthVocab::generated_filler(150))?;

    let mhc = SynthConfig {
        group: "mhc".to_string(),
        n_users: 4,
        utterances_per_user: 50,
        co_endorsement: 0.8,
        coupled_emotions: vec![Emotion::Anger, Emotion::Fear],
        seed: 2,
        ..SynthConfig::default()
    };
    let control = SynthConfig {
        group: "control".to_string(),
        co_endorsement: 0.1,
        ..mhc.clone()
    };
    let (corpus, truth) = gen_cohorts(&mhc, &control, &vocab)?;

    let dir = std::env::temp_dir().join("granulate_synth_demo");
    std::fs::create_dir_all(&dir).map_err(|e| granulate::Error::io(&dir, e))?;
    let corpus_path = dir.join("corpus.jsonl");
    write_corpus_jsonl(&corpus_path, &corpus)?;
    let truth_path = dir.join("truth.json");
    std::fs::write(&truth_path, serde_json::to_string_pretty(&truth).unwrap())
        .map_err(|e| granulate::Error::io(&truth_path, e))?;

    println!("wrote {} and {}", corpus_path.display(), truth_path.display());
    for (group, t) in &truth.groups {
        println!(
            "{group}: rho_target {:.2}, expected arc spearman {:.3}, realized co-emission {:?}",
            t.rho_target,
            expected_arc_spearman(t.event_rate, t.rho_target),
            t.stats.co_emission_rates
        );
    }
    let sample = &corpus[0];
    println!(
        "\nfirst post of {}: {:?}",
        sample.user_id, sample.utterances[0].text
    );
    Ok(())
}
