//! Utterance-level and sliding-window emotion arcs over the bundled sample
//! corpus.
//!
//! ```bash
//! cargo run -p granulate --example build_arcs
//! ```

use std::path::Path;

use granulate::arcs::{build_arc, ArcConfig, ArcMode, SideLexicon};
use granulate::corpus::load_corpus;
use granulate::lexicon::{Emotion, EmotionLexicon};

fn main() -> granulate::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let lexicon = EmotionLexicon::load(&data.join("lexicon.tsv"))?;
    let (corpus, _) = load_corpus(&data.join("sample_corpus.jsonl"))?;
    let timeline = corpus.iter().find(|t| t.user_id == "bru").unwrap();

    let fear = SideLexicon::single(&lexicon, Emotion::Fear);
    let per_utterance = ArcConfig::default();
    let arc = build_arc(timeline, &fear, &per_utterance);
    println!("{} fear arc, one point per post:", timeline.user_id);
    for (i, point) in arc.points.iter().enumerate() {
        match point {
            Some(score) => println!("  post {i}: {score:.4}"),
            None => println!("  post {i}: (missing)"),
        }
    }
    println!(
        "  {} valid points, {} distinct fear terms matched",
        arc.n_valid, arc.n_unique_terms
    );

    let windowed = ArcConfig {
        mode: ArcMode::Window,
        window_size: 10,
        step: 1,
        ..ArcConfig::default()
    };
    let arc = build_arc(timeline, &fear, &windowed);
    println!("\n10-word windows, step 1 ({} points):", arc.points.len());
    let line: String = arc
        .points
        .iter()
        .map(|p| match p {
            Some(s) if *s > 0.05 => '#',
            Some(s) if *s > 0.0 => '+',
            _ => '.',
        })
        .collect();
    println!("  {line}");
    Ok(())
}
