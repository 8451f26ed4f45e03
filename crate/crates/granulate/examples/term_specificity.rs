//! Resnik information-content specificity on the bundled taxonomy, counts
//! and tag lexicon.
//!
//! ```bash
//! cargo run -p granulate --example term_specificity
//! ```

use std::path::Path;

use granulate::corpus::load_corpus;
use granulate::specificity::{
    build_ic_table, load_counts, load_tag_lexicon, user_specificity, Pos, SenseIcPolicy,
    TagSource, Taxonomy,
};

fn main() -> granulate::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let taxonomy = Taxonomy::load(&data.join("taxonomy_edges.tsv"), &data.join("taxonomy_lemmas.tsv"))?;
    let table = build_ic_table(&taxonomy, &load_counts(&data.join("word_counts.tsv"))?)?;
    println!("taxonomy: {} concepts", taxonomy.n_concepts());

    for word in ["river", "turbine", "walk", "calibrate"] {
        for pos in [Pos::Noun, Pos::Verb] {
            if let Some(ic) = table.word_ic(&taxonomy, word, pos, SenseIcPolicy::MaxIc) {
                println!("  IC({word}, {}) = {ic:.3} nats", pos.as_str());
            }
        }
    }

    let tags = TagSource::Lexicon(load_tag_lexicon(&data.join("pos_tags.tsv"))?);
    let (corpus, _) = load_corpus(&data.join("sample_corpus.jsonl"))?;
    println!("\nuser   group     ic_n    ic_v    nouns  verbs");
    for timeline in &corpus {
        let p = user_specificity(timeline, &tags, &taxonomy, &table, SenseIcPolicy::MaxIc);
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or("  -- ".into());
        println!(
            "{:<6} {:<9} {}   {}   {:>5}  {:>5}",
            p.user_id,
            p.group,
            fmt(p.ic_n),
            fmt(p.ic_v),
            p.n_nouns,
            p.n_verbs
        );
    }
    Ok(())
}
